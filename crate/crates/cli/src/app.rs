//! Command-line surface: `simulate`, `analyze`, `correlate`, `laws`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use rmtcorr_core::augmented::{default_replicas, FactorSpec};
use rmtcorr_core::indicators::theoretical_msr;
use rmtcorr_core::laws::{mp_law_pdf, ring_law_pdf, ring_radii, MpLawParams, RingLawParams};
use rmtcorr_core::pipeline::{
    augmented_source, correlate_factor, detect_signal_areas, real_time_window, run_series, DataSource, FactorVerdict,
    IndicatorSeries, SignalEvent, WindowAnalyzer, WindowConfig,
};
use rmtcorr_core::scenario::{preset, simulate, ScenarioSpec};

use crate::config::{ConfigError, Emit, InputSource, RunConfig};
use crate::io::{fmt_f64, ingest_csv, write_source, write_table, IoError};

#[derive(Debug, Parser)]
#[command(
    name = "rmtcorr",
    version,
    about = "Spectral correlation analysis of multivariate time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a case preset and write it as a CSV data source.
    Simulate(SimulateArgs),
    /// MSR/VSR series and signal areas of the status variables.
    Analyze(AnalyzeArgs),
    /// Analyze, then judge each factor with its augmented matrix.
    Correlate(CorrelateArgs),
    /// Ring Law and Marchenko-Pastur densities for given parameters.
    Laws(LawsArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    case: u32,
    #[arg(long = "noise-level")]
    noise_level: Option<f64>,
    /// Measurement-noise seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "sensitivity-seed")]
    sensitivity_seed: Option<u64>,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// File name of the data source inside the output directory.
    #[arg(long, default_value = "source.csv")]
    output: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "case"])))]
struct RunArgs {
    /// CSV data source (time column, status columns, `factor:` columns).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generate the data in memory from a case preset.
    #[arg(long)]
    case: Option<u32>,
    #[arg(long = "noise-level")]
    noise_level: Option<f64>,
    #[arg(long = "T", default_value_t = 240)]
    window: usize,
    #[arg(long = "L", default_value_t = 1)]
    product_len: u32,
    /// Analysis seed (Haar unitaries and augmented noise).
    #[arg(long, default_value_t = rmtcorr_core::pipeline::DEFAULT_SEED)]
    seed: u64,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum)]
    emit: Vec<Emit>,
    /// Times for eigenvalue scatter and KDE exports.
    #[arg(long)]
    at: Vec<usize>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Factor to test; defaults to every factor in the source.
    #[arg(long)]
    factor: Vec<String>,
    /// Replication count; defaults to half the status rows.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = rmtcorr_core::augmented::DEFAULT_SNR)]
    rho: f64,
}

#[derive(Debug, Args)]
struct LawsArgs {
    #[arg(long)]
    c: f64,
    #[arg(long = "L", default_value_t = 1)]
    product_len: u32,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Grid points per density curve.
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Core(#[from] rmtcorr_core::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io(IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit status. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => run_simulate(args),
        Command::Analyze(args) => {
            let config = run_config(args.run, Vec::new(), None, rmtcorr_core::augmented::DEFAULT_SNR)?;
            run_analysis(&config, false)
        }
        Command::Correlate(args) => {
            let config = run_config(args.run, args.factor, args.k, args.rho)?;
            run_analysis(&config, true)
        }
        Command::Laws(args) => run_laws(args),
    }
}

fn run_config(args: RunArgs, factors: Vec<String>, k: Option<usize>, rho: f64) -> Result<RunConfig, ConfigError> {
    let input = match (args.input, args.case) {
        (Some(path), None) => InputSource::File(path),
        (None, Some(case)) => InputSource::Preset(case),
        _ => return Err(ConfigError::new("input", "give exactly one of --input or --case")),
    };
    let mut config = RunConfig::new(input);
    config.window = args.window;
    config.product_len = args.product_len;
    config.noise_level = args.noise_level;
    config.seed = args.seed;
    config.out_dir = args.out_dir;
    config.at = args.at;
    config.factors = factors;
    config.replicas = k;
    config.rho = rho;
    if !args.emit.is_empty() {
        config.emit = args.emit.into_iter().collect();
    }
    config.validate()?;
    Ok(config)
}

fn preset_spec(
    case: u32,
    noise_level: Option<f64>,
    seed: Option<u64>,
    sensitivity_seed: Option<u64>,
) -> Result<ScenarioSpec, CliError> {
    let mut spec = preset(case)?;
    if let Some(level) = noise_level {
        if !(level >= 0.0 && level.is_finite()) {
            return Err(ConfigError::new("noise-level", "must be finite and non-negative").into());
        }
        spec.noise_level = level;
    }
    if let Some(s) = seed {
        spec.noise_seed = s;
    }
    if let Some(s) = sensitivity_seed {
        spec.sensitivity_seed = s;
    }
    Ok(spec)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct ScenarioMeta<'a> {
    case: u32,
    n_status: usize,
    t: usize,
    factor_sample_stride: usize,
    noise_level: f64,
    sensitivity_seed: u64,
    noise_seed: u64,
    factors: Vec<&'a str>,
    output: String,
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let spec = preset_spec(args.case, args.noise_level, args.seed, args.sensitivity_seed)?;
    let source = simulate(&spec)?;
    ensure_dir(&args.out_dir)?;
    write_source(&args.out_dir.join(&args.output), &source)?;
    let names = spec.factor_names();
    write_json(
        &args.out_dir.join("run_meta.json"),
        &ScenarioMeta {
            case: args.case,
            n_status: spec.n_status,
            t: spec.t,
            factor_sample_stride: spec.factor_sample_stride,
            noise_level: spec.noise_level,
            sensitivity_seed: spec.sensitivity_seed,
            noise_seed: spec.noise_seed,
            factors: names.iter().map(String::as_str).collect(),
            output: args.output.clone(),
        },
    )?;
    println!("wrote {}", args.out_dir.join(&args.output).display());
    Ok(())
}

/// Loads the configured data source.
pub fn load_source(config: &RunConfig) -> Result<DataSource, CliError> {
    match &config.input {
        InputSource::File(path) => Ok(ingest_csv(path)?),
        InputSource::Preset(case) => Ok(simulate(&preset_spec(*case, config.noise_level, None, None)?)?),
    }
}

#[derive(Serialize)]
struct SeriesMeta {
    series: String,
    rows: usize,
    c: f64,
    inner_radius: f64,
    theoretical_msr: f64,
}

impl SeriesMeta {
    fn of(s: &IndicatorSeries, rows: usize) -> Self {
        Self {
            series: s.source.label().to_owned(),
            rows,
            c: s.params.c(),
            inner_radius: s.inner_radius,
            theoretical_msr: s.theoretical_msr,
        }
    }
}

#[derive(Serialize)]
struct RunMeta<'a> {
    command: &'static str,
    config: &'a RunConfig,
    n_status: usize,
    n_times: usize,
    first_time: usize,
    last_time: usize,
    scenario: Option<ScenarioEcho>,
    series: Vec<SeriesMeta>,
    events: usize,
    files: Vec<String>,
}

#[derive(Serialize)]
struct ScenarioEcho {
    noise_level: f64,
    sensitivity_seed: u64,
    noise_seed: u64,
}

fn check_dimensions(n: usize, cfg: &WindowConfig, what: &'static str) -> Result<(), ConfigError> {
    if n > cfg.window {
        return Err(ConfigError::new(
            "T",
            format!(
                "window {} is shorter than the {n} rows of the {what} matrix",
                cfg.window
            ),
        ));
    }
    Ok(())
}

fn run_analysis(config: &RunConfig, correlate: bool) -> Result<(), CliError> {
    let source = load_source(config)?;
    let cfg = config.window_config();
    check_dimensions(source.n_status(), &cfg, "status")?;

    let specs = if correlate {
        factor_specs(config, &source)?
    } else {
        Vec::new()
    };
    for spec in &specs {
        check_dimensions(source.n_status() + spec.replicas, &cfg, "augmented")?;
    }

    let status = run_series(&source, &cfg, config.seed)?;
    let events = detect_signal_areas(&status);
    let mut factors = Vec::with_capacity(specs.len());
    for spec in &specs {
        factors.push(correlate_factor(&source, &events, spec, &cfg, config.seed)?);
    }

    ensure_dir(&config.out_dir)?;
    let out = &config.out_dir;
    let mut files = Vec::new();
    let mut record = |name: String| files.push(name);

    if config.emit.contains(&Emit::MsrCurve) {
        write_msr_curve(&out.join("msr_curve.csv"), &status, &factors)?;
        record("msr_curve.csv".into());
    }
    if config.emit.contains(&Emit::Events) {
        write_events(&out.join("events.csv"), &events)?;
        record("events.csv".into());
    }
    if correlate && config.emit.contains(&Emit::Verdicts) {
        let verdicts: Vec<&FactorVerdict> = factors.iter().map(|(_, v)| v).collect();
        write_verdicts(&out.join("verdicts.csv"), &verdicts)?;
        write_factor_areas(&out.join("factor_areas.csv"), &verdicts)?;
        record("verdicts.csv".into());
        record("factor_areas.csv".into());
    }

    let scatter = config.emit.contains(&Emit::RingScatter);
    let kde = config.emit.contains(&Emit::KdeCurve);
    if scatter || kde {
        let mut inspected = vec![("status".to_owned(), source.clone())];
        for spec in &specs {
            inspected.push((spec.name.clone(), augmented_source(&source, spec, config.seed)?));
        }
        for time in config.inspection_times() {
            let written = write_inspection(out, time, &inspected, &cfg, config.seed, scatter, kde)?;
            files.extend(written);
        }
    }

    let mut series = vec![SeriesMeta::of(&status, source.n_status())];
    for (s, _) in &factors {
        let k = specs
            .iter()
            .find(|f| f.name == s.source.label())
            .map_or(0, |f| f.replicas);
        series.push(SeriesMeta::of(s, source.n_status() + k));
    }
    let scenario = match config.input {
        InputSource::Preset(case) => {
            let spec = preset_spec(case, config.noise_level, None, None)?;
            Some(ScenarioEcho {
                noise_level: spec.noise_level,
                sensitivity_seed: spec.sensitivity_seed,
                noise_seed: spec.noise_seed,
            })
        }
        InputSource::File(_) => None,
    };
    files.push("run_meta.json".into());
    write_json(
        &out.join("run_meta.json"),
        &RunMeta {
            command: if correlate { "correlate" } else { "analyze" },
            config,
            n_status: source.n_status(),
            n_times: source.len(),
            first_time: source.times()[0],
            last_time: *source.times().last().unwrap_or(&0),
            scenario,
            series,
            events: events.len(),
            files,
        },
    )?;

    for e in &events {
        println!(
            "signal area {}..{} (inferred duration {})",
            e.area_start, e.area_end, e.inferred_duration
        );
    }
    for (_, v) in &factors {
        println!("{}: correlated={}", v.factor, v.correlated);
    }
    Ok(())
}

fn factor_specs(config: &RunConfig, source: &DataSource) -> Result<Vec<FactorSpec>, CliError> {
    let names: Vec<String> = if config.factors.is_empty() {
        source.factors().iter().map(|f| f.name.clone()).collect()
    } else {
        config.factors.clone()
    };
    if names.is_empty() {
        return Err(ConfigError::new("factor", "the data source has no factor columns").into());
    }
    let mut seen = BTreeSet::new();
    let k = config.replicas.unwrap_or_else(|| default_replicas(source.n_status()));
    names
        .into_iter()
        .filter(|n| seen.insert(n.clone()))
        .map(|name| {
            let series = source
                .factor(&name)
                .ok_or_else(|| ConfigError::new("factor", format!("no factor named {name:?} in the data source")))?;
            Ok(FactorSpec::new(name, series.values.clone(), k, config.rho)?)
        })
        .collect()
}

fn write_msr_curve(
    path: &Path,
    status: &IndicatorSeries,
    factors: &[(IndicatorSeries, FactorVerdict)],
) -> Result<(), CliError> {
    let mut header = vec!["time".to_owned(), "status_msr".to_owned(), "status_vsr".to_owned()];
    for (s, _) in factors {
        header.push(format!("{}_msr", s.source.label()));
        header.push(format!("{}_vsr", s.source.label()));
    }
    let rows = (0..status.len()).map(|i| {
        let mut row = vec![
            status.times[i].to_string(),
            fmt_f64(status.msr[i]),
            fmt_f64(status.vsr[i]),
        ];
        for (s, _) in factors {
            row.push(fmt_f64(s.msr[i]));
            row.push(fmt_f64(s.vsr[i]));
        }
        row
    });
    Ok(write_table(path, &header, rows)?)
}

fn write_events(path: &Path, events: &[SignalEvent]) -> Result<(), CliError> {
    let header = ["area_start", "area_end", "onset", "inferred_duration"].map(String::from);
    let rows = events.iter().map(|e| {
        vec![
            e.area_start.to_string(),
            e.area_end.to_string(),
            e.onset.to_string(),
            e.inferred_duration.to_string(),
        ]
    });
    Ok(write_table(path, &header, rows)?)
}

/// One row per (factor, signal area); a factor with no areas gets one row
/// with blank event columns.
fn write_verdicts(path: &Path, verdicts: &[&FactorVerdict]) -> Result<(), CliError> {
    let header = [
        "factor",
        "correlated",
        "msr_drop",
        "inner_radius",
        "area_start",
        "area_end",
        "area_min_msr",
        "area_correlated",
    ]
    .map(String::from);
    let mut rows = Vec::new();
    for v in verdicts {
        let head = vec![
            v.factor.clone(),
            v.correlated.to_string(),
            v.msr_drop.map(fmt_f64).unwrap_or_default(),
            fmt_f64(v.inner_radius),
        ];
        if v.events.is_empty() {
            let mut row = head.clone();
            row.extend(std::iter::repeat_n(String::new(), 4));
            rows.push(row);
        }
        for e in &v.events {
            let mut row = head.clone();
            row.extend([
                e.event.area_start.to_string(),
                e.event.area_end.to_string(),
                fmt_f64(e.min_msr),
                e.correlated.to_string(),
            ]);
            rows.push(row);
        }
    }
    Ok(write_table(path, &header, rows)?)
}

fn write_factor_areas(path: &Path, verdicts: &[&FactorVerdict]) -> Result<(), CliError> {
    let header = ["factor", "area_start", "area_end"].map(String::from);
    let rows = verdicts.iter().flat_map(|v| {
        v.factor_areas
            .iter()
            .map(|a| vec![v.factor.clone(), a.area_start.to_string(), a.area_end.to_string()])
    });
    Ok(write_table(path, &header, rows)?)
}

fn write_inspection(
    out: &Path,
    time: usize,
    inspected: &[(String, DataSource)],
    cfg: &WindowConfig,
    seed: u64,
    scatter: bool,
    kde: bool,
) -> Result<Vec<String>, CliError> {
    let mut scatter_rows = Vec::new();
    let mut kde_rows = Vec::new();
    for (label, source) in inspected {
        let position = source
            .times()
            .iter()
            .position(|t| *t == time)
            .ok_or_else(|| ConfigError::new("at", format!("time {time} is not in the data source")))?
            + 1;
        let window = real_time_window(source, position, cfg)?;
        let (ring, cov) = WindowAnalyzer::new(source.n_status(), *cfg, seed)?.analyze(&window)?;
        for z in &ring.eigenvalues {
            scatter_rows.push(vec![
                label.clone(),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.re.hypot(z.im)),
            ]);
        }
        for ((x, f), m) in cov.kde.grid.iter().zip(&cov.kde.density).zip(&cov.mp_density) {
            kde_rows.push(vec![label.clone(), fmt_f64(*x), fmt_f64(*f), fmt_f64(*m)]);
        }
    }
    let mut files = Vec::new();
    if scatter {
        let name = format!("ring_scatter_{time}.csv");
        let header = ["series", "re", "im", "modulus"].map(String::from);
        write_table(&out.join(&name), &header, scatter_rows)?;
        files.push(name);
    }
    if kde {
        let name = format!("kde_curve_{time}.csv");
        let header = ["series", "lambda", "kde", "mp"].map(String::from);
        write_table(&out.join(&name), &header, kde_rows)?;
        files.push(name);
    }
    Ok(files)
}

#[derive(Serialize)]
struct LawsMeta {
    c: f64,
    product_len: u32,
    d: f64,
    inner_radius: f64,
    inner_radius_4dp: String,
    outer_radius: f64,
    theoretical_msr: f64,
    mp_support: (f64, f64),
}

fn run_laws(args: LawsArgs) -> Result<(), CliError> {
    let ring = RingLawParams::new(args.c, args.product_len).map_err(|e| ConfigError::new("c", e.to_string()))?;
    let mp = MpLawParams::new(args.c, args.d).map_err(|e| ConfigError::new("d", e.to_string()))?;
    if args.points < 2 {
        return Err(ConfigError::new("points", "need at least 2 grid points").into());
    }
    ensure_dir(&args.out_dir)?;
    let (inner, outer) = ring_radii(ring);
    let (a, b) = mp.support();
    let grid = |lo: f64, hi: f64| {
        let n = args.points;
        (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
    };

    let header = ["r", "density"].map(String::from);
    let rows = grid(0.0, 1.1).map(|r| vec![fmt_f64(r), fmt_f64(ring_law_pdf(r, ring))]);
    write_table(&args.out_dir.join("ring_law.csv"), &header, rows)?;
    let header = ["lambda", "density"].map(String::from);
    let span = b - a;
    let rows = grid((a - 0.05 * span).max(0.0), b + 0.05 * span).map(|x| vec![fmt_f64(x), fmt_f64(mp_law_pdf(x, mp))]);
    write_table(&args.out_dir.join("mp_law.csv"), &header, rows)?;

    let meta = LawsMeta {
        c: args.c,
        product_len: args.product_len,
        d: args.d,
        inner_radius: inner,
        inner_radius_4dp: format!("{inner:.4}"),
        outer_radius: outer,
        theoretical_msr: theoretical_msr(ring),
        mp_support: (a, b),
    };
    write_json(&args.out_dir.join("laws.json"), &meta)?;
    println!(
        "inner radius {inner:.4}, outer radius {outer}, theoretical MSR {:.4}",
        meta.theoretical_msr
    );
    println!("M-P support [{a:.4}, {b:.4}]");
    Ok(())
}
