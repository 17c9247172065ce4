//! Spectral indicators: linear eigenvalue statistics, mean spectral radius
//! (MSR), variance of spectral radius (VSR) and kernel density estimates of
//! covariance spectra.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Float math for no_std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::invalid;
use crate::laws::{mp_law_pdf, ring_radii, MpLawParams, RingLawParams};
use crate::{Error, Result, C64};

/// Linear eigenvalue statistic `Σ φ(λ_i)`.
pub fn les<F>(eigenvalues: &[C64], phi: F) -> Result<f64>
where
    F: Fn(C64) -> f64,
{
    if eigenvalues.is_empty() {
        return Err(Error::Empty("eigenvalue list"));
    }
    Ok(eigenvalues.iter().map(|z| phi(*z)).sum())
}

/// Mean spectral radius `(1/N) Σ |λ_i|`.
pub fn msr(eigenvalues: &[C64]) -> Result<f64> {
    Ok(les(eigenvalues, crate::cabs)? / eigenvalues.len() as f64)
}

/// Variance of spectral radius `(1/(N−1)) Σ (|λ_i| − MSR)²`.
pub fn vsr(eigenvalues: &[C64]) -> Result<f64> {
    if eigenvalues.len() < 2 {
        return Err(invalid("eigenvalues", "VSR needs at least two eigenvalues"));
    }
    let m = msr(eigenvalues)?;
    let ss: f64 = eigenvalues
        .iter()
        .map(|z| (crate::cabs(*z) - m) * (crate::cabs(*z) - m))
        .sum();
    Ok(ss / (eigenvalues.len() - 1) as f64)
}

/// First radial moment of the Ring Law density, the MSR a pure-noise window
/// should settle around.
///
/// `(2/(cL)) · (1 − r_in^{2/L + 1}) / (2/L + 1)`, which for `L = 1` is
/// `(2/(3c)) · (1 − (1 − c)^{3/2})`.
pub fn theoretical_msr(p: RingLawParams) -> f64 {
    let l = p.product_len() as f64;
    let (inner, _) = ring_radii(p);
    let e = 2.0 / l + 1.0;
    2.0 / (p.c() * l) * (1.0 - inner.powf(e)) / e
}

/// Eigenvalues of a standard matrix product together with MSR and VSR.
#[derive(Debug, Clone, PartialEq)]
pub struct RingSpectrum {
    pub eigenvalues: Vec<C64>,
    pub msr: f64,
    pub vsr: f64,
    pub params: RingLawParams,
}

impl RingSpectrum {
    pub fn new(eigenvalues: Vec<C64>, params: RingLawParams) -> Result<Self> {
        let msr = msr(&eigenvalues)?;
        let vsr = vsr(&eigenvalues)?;
        Ok(Self {
            eigenvalues,
            msr,
            vsr,
            params,
        })
    }

    pub fn inner_radius(&self) -> f64 {
        ring_radii(self.params).0
    }
}

/// Smoothing kernel for [`kde`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    #[default]
    Gaussian,
}

impl Kernel {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-0.5 * u * u).exp() / (2.0 * PI).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Gaussian => "gaussian",
        }
    }
}

/// Bandwidth choice for [`kde`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Silverman's rule of thumb `1.06 · σ̂ · N^{-1/5}`.
    Silverman,
    Fixed(f64),
}

/// Evaluation grid for [`kde`].
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `points` equally spaced abscissae over `[min λ − 4h, max λ + 4h]`.
    Auto {
        points: usize,
    },
    Explicit(Vec<f64>),
}

impl Default for Grid {
    fn default() -> Self {
        Grid::Auto { points: 512 }
    }
}

/// Kernel density estimate sampled on an ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
    pub kernel: Kernel,
}

impl KdeCurve {
    /// Trapezoid integral of the density over the grid.
    pub fn mass(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    1.06 * var.sqrt() * n.powf(-0.2)
}

/// `f(x) = (1/(N h)) Σ K((x − λ_i)/h)` on a grid.
pub fn kde(eigenvalues: &[f64], grid: Grid, bandwidth: Bandwidth, kernel: Kernel) -> Result<KdeCurve> {
    if eigenvalues.is_empty() {
        return Err(Error::Empty("eigenvalue list"));
    }
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(invalid("eigenvalues", "must be finite"));
    }
    let h = match bandwidth {
        Bandwidth::Fixed(h) => h,
        Bandwidth::Silverman => silverman_bandwidth(eigenvalues),
    };
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("bandwidth", alloc::format!("must be positive, got {h}")));
    }
    let grid = match grid {
        Grid::Explicit(g) => {
            if g.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(invalid("grid", "abscissae must be strictly ascending"));
            }
            g
        }
        Grid::Auto { points } => {
            if points < 2 {
                return Err(invalid("grid", "need at least two points"));
            }
            let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min) - 4.0 * h;
            let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 4.0 * h;
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| lo + step * i as f64).collect()
        }
    };
    let norm = 1.0 / (eigenvalues.len() as f64 * h);
    let density = grid
        .iter()
        .map(|x| norm * eigenvalues.iter().map(|l| kernel.eval((x - l) / h)).sum::<f64>())
        .collect();
    Ok(KdeCurve {
        grid,
        density,
        bandwidth: h,
        kernel,
    })
}

/// Eigenvalues of a sample covariance matrix with their density estimate and
/// the Marchenko–Pastur reference on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpectrum {
    pub eigenvalues: Vec<f64>,
    pub kde: KdeCurve,
    pub mp: MpLawParams,
    pub mp_density: Vec<f64>,
}

impl CovarianceSpectrum {
    pub fn new(eigenvalues: Vec<f64>, mp: MpLawParams, grid: Grid, bandwidth: Bandwidth) -> Result<Self> {
        let curve = kde(&eigenvalues, grid, bandwidth, Kernel::Gaussian)?;
        let mp_density = curve.grid.iter().map(|x| mp_law_pdf(*x, mp)).collect();
        Ok(Self {
            eigenvalues,
            kde: curve,
            mp,
            mp_density,
        })
    }

    /// Largest `|f_KDE − f_MP|` over grid points inside `[lo, hi]`.
    pub fn sup_distance(&self, lo: f64, hi: f64) -> f64 {
        self.kde
            .grid
            .iter()
            .zip(self.kde.density.iter().zip(&self.mp_density))
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(_, (k, m))| (k - m).abs())
            .fold(0.0, f64::max)
    }
}
