fn main() {
    std::process::exit(rmtcorr::run(std::env::args_os()));
}
