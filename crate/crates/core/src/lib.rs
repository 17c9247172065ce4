//! Random-matrix spectral analysis of multivariate time series.
//!
//! The crate turns a window of `N` measured variables over `T` sampling times
//! into a square complex matrix whose eigenvalues follow the Ring Law when the
//! data carry nothing but independent noise. Correlated structure pulls the
//! eigenvalues towards the centre of the ring, which shows up as a drop in the
//! mean spectral radius (MSR). Stacking a replicated, noise-dressed factor
//! series under the status data (an *augmented matrix*) then tells which
//! factor is responsible for a detected excursion.
//!
//! Module map:
//!
//! - [`rmt`]: window transforms (row standardization, Haar unitaries,
//!   singular value equivalents, matrix products, sample covariance).
//! - [`laws`]: closed-form Ring Law and Marchenko–Pastur densities.
//! - [`indicators`]: linear eigenvalue statistics, MSR/VSR, kernel density
//!   estimates.
//! - [`augmented`]: factor replication, noise magnitude, SNR and stacking.
//! - [`pipeline`]: real-time split windows, indicator series, signal-area
//!   detection and factor verdicts.
//! - [`scenario`]: synthetic status/factor data on a linear-sensitivity
//!   surrogate grid.
//!
//! The crate is `no_std` and needs only `alloc`. Enable the `std` feature to
//! let dependencies use their std-only fast paths.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod augmented;
mod error;
pub mod indicators;
pub mod laws;
pub mod linalg;
pub mod pipeline;
pub mod rmt;
pub mod scenario;

pub use error::{Error, Result};
pub use nalgebra;

/// Complex scalar used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;

/// `|z|` without relying on `num-complex`'s std-only helpers.
pub(crate) fn cabs(z: C64) -> f64 {
    num_traits::Float::hypot(z.re, z.im)
}

/// Principal square root.
pub(crate) fn csqrt(z: C64) -> C64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    let r = cabs(z);
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let re = ((r + z.re) * 0.5).sqrt();
    let im = ((r - z.re) * 0.5).sqrt();
    C64::new(re, if z.im < 0.0 { -im } else { im })
}
