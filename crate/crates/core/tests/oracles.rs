//! Library results checked against independent computations: numerical
//! quadrature of the limiting densities, matrices with planted spectra, and
//! brute-force reference formulas.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmtcorr_core::augmented::noise_matrix;
use rmtcorr_core::indicators::{kde, silverman_bandwidth, theoretical_msr, Bandwidth, Grid, Kernel};
use rmtcorr_core::laws::{mp_law_pdf, ring_law_pdf, ring_radii, MpLawParams, RingLawParams};
use rmtcorr_core::linalg::{eigenvalues, hermitian_eigenvalues};
use rmtcorr_core::nalgebra::DMatrix;
use rmtcorr_core::rmt::{
    haar_unitary, matrix_product, singular_value_equivalent, standardize_product, standardize_rows, RawMatrix,
};
use rmtcorr_core::C64;

fn abs(z: C64) -> f64 {
    z.re.hypot(z.im)
}

fn polar(r: f64, theta: f64) -> C64 {
    C64::new(r * theta.cos(), r * theta.sin())
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

fn ring_cases() -> Vec<RingLawParams> {
    let mut out = Vec::new();
    for c in [0.2, 118.0 / 240.0, 177.0 / 240.0, 0.95] {
        for l in 1..=4 {
            out.push(RingLawParams::new(c, l).unwrap());
        }
    }
    out
}

#[test]
fn ring_density_integrates_to_one() {
    for p in ring_cases() {
        let (inner, outer) = ring_radii(p);
        // Integrate strictly inside the support so the endpoint cut-offs do not matter.
        let mass = simpson(
            |r| 2.0 * PI * r * ring_law_pdf(r.clamp(inner, outer), p),
            inner,
            outer,
            20_000,
        );
        assert!((mass - 1.0).abs() < 1e-6, "{p:?}: mass {mass}");
    }
}

#[test]
fn theoretical_msr_matches_quadrature() {
    for p in ring_cases() {
        let (inner, outer) = ring_radii(p);
        let mean = simpson(
            |r| 2.0 * PI * r * r * ring_law_pdf(r.clamp(inner, outer), p),
            inner,
            outer,
            20_000,
        );
        assert!(
            (theoretical_msr(p) - mean).abs() < 1e-8,
            "{p:?}: {} vs {mean}",
            theoretical_msr(p)
        );
    }
    let p = RingLawParams::for_window(118, 240, 1).unwrap();
    assert!((theoretical_msr(p) - 0.8645).abs() < 5e-5);
    let p = RingLawParams::for_window(177, 240, 1).unwrap();
    assert!((theoretical_msr(p) - 0.7824).abs() < 5e-5);
}

/// `∫_a^b g(λ) f(λ) dλ` under `λ = m + h·cos θ`, which removes the square-root
/// endpoint behaviour of the density.
fn mp_moment(p: MpLawParams, g: impl Fn(f64) -> f64) -> f64 {
    let (a, b) = p.support();
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    simpson(
        |t| {
            let x = m + h * t.cos();
            g(x) * mp_law_pdf(x.clamp(a, b), p) * h * t.sin()
        },
        0.0,
        PI,
        20_000,
    )
}

#[test]
fn mp_density_integrates_to_one_with_mean_d() {
    for c in [0.1, 0.4917, 177.0 / 240.0, 0.9] {
        for d in [0.5, 1.0, 2.5] {
            let p = MpLawParams::new(c, d).unwrap();
            let mass = mp_moment(p, |_| 1.0);
            let mean = mp_moment(p, |x| x);
            let second = mp_moment(p, |x| x * x);
            assert!((mass - 1.0).abs() < 1e-6, "c={c} d={d}: mass {mass}");
            assert!((mean - d).abs() < 1e-6 * d, "c={c} d={d}: mean {mean}");
            // Second moment d²(1 + c).
            assert!(
                (second - d * d * (1.0 + c)).abs() < 1e-6 * d * d,
                "c={c} d={d}: {second}"
            );
        }
    }
}

fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Pairs each expected value with the nearest unused computed value.
fn max_matching_error(expected: &[C64], got: &[C64]) -> f64 {
    assert_eq!(expected.len(), got.len());
    let mut used = vec![false; got.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (j, d) = got
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, g)| (j, abs(g - e)))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn eigenvalues_recover_planted_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3usize, 7, 20, 60] {
        for _ in 0..5 {
            let mu: Vec<C64> = (0..n)
                .map(|_| polar(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0 * PI)))
                .collect();
            // A well-conditioned similarity: identity plus a small perturbation.
            let v = DMatrix::<C64>::identity(n, n) + random_complex(n, &mut rng) * C64::new(0.3 / n as f64, 0.0);
            let vinv = v.clone().try_inverse().unwrap();
            let a = &v * DMatrix::from_diagonal(&rmtcorr_core::nalgebra::DVector::from_vec(mu.clone())) * vinv;
            let got = eigenvalues(&a).unwrap();
            let err = max_matching_error(&mu, &got);
            assert!(err < 1e-9, "n={n}: {err}");
        }
    }
}

#[test]
fn eigenvalues_are_roots_of_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let a = random_complex(3, &mut rng);
        let ev = eigenvalues(&a).unwrap();
        // det(A − λI) with the 3×3 cofactor formula, relative to ‖A‖³.
        let scale = a.norm().powi(3);
        for l in &ev {
            let m = &a - DMatrix::<C64>::identity(3, 3) * *l;
            let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
            assert!(abs(det) < 1e-12 * scale, "{det}");
        }
        let trace: C64 = ev.iter().sum();
        assert!(abs(trace - a.trace()) < 1e-12);
        let prod: C64 = ev.iter().product();
        assert!(abs(prod - a.determinant()) < 1e-12);
    }
}

#[test]
fn hermitian_eigenvalues_match_planted_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 40;
    let u = haar_unitary(n, 14).unwrap();
    let mut mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(mu[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let h = u.values() * d * u.values().adjoint();
    let got = hermitian_eigenvalues(&h);
    mu.sort_by(f64::total_cmp);
    for (a, b) in mu.iter().zip(&got) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn product_standardization_matches_direct_formula() {
    let x = standardize_rows(&RawMatrix::from_values(noise_matrix(6, 15, 3)).unwrap());
    let u1 = haar_unitary(6, 1).unwrap();
    let u2 = haar_unitary(6, 2).unwrap();
    let factors = [
        singular_value_equivalent(&x, &u1).unwrap(),
        singular_value_equivalent(&x, &u2).unwrap(),
    ];
    let z = matrix_product(&factors).unwrap();
    let zt = standardize_product(&z).unwrap();
    let n = 6.0;
    for i in 0..6 {
        let row: Vec<C64> = z.values().row(i).iter().copied().collect();
        let mean: C64 = row.iter().sum::<C64>() / n;
        let var = row.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        let sigma = var.sqrt();
        for (j, v) in row.iter().enumerate() {
            let want = v / (n.sqrt() * sigma);
            assert!(abs(zt.values()[(i, j)] - want) < 1e-13);
        }
    }
}

#[test]
fn single_sample_kde_is_the_kernel() {
    let curve = kde(
        &[1.5],
        Grid::Explicit(vec![0.0, 1.0, 1.5, 2.0]),
        Bandwidth::Fixed(0.5),
        Kernel::Gaussian,
    )
    .unwrap();
    for (x, f) in curve.grid.iter().zip(&curve.density) {
        let u = (x - 1.5) / 0.5;
        let want = (-0.5 * u * u).exp() / (2.0 * PI).sqrt() / 0.5;
        assert!((f - want).abs() < 1e-15);
    }
}

#[test]
fn kde_matches_brute_force_sum_and_silverman_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let xs: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..4.0)).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let h = 1.06 * sd * n.powf(-0.2);
    assert!((silverman_bandwidth(&xs) - h).abs() < 1e-14);
    let curve = kde(&xs, Grid::default(), Bandwidth::Silverman, Kernel::Gaussian).unwrap();
    assert_eq!(curve.grid.len(), 512);
    for (x, f) in curve.grid.iter().zip(&curve.density).step_by(37) {
        let want: f64 = xs
            .iter()
            .map(|xi| {
                let u = (x - xi) / h;
                (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
            })
            .sum::<f64>()
            / (n * h);
        assert!((f - want).abs() < 1e-12);
    }
    assert!((curve.mass() - 1.0).abs() < 1e-3);
}
