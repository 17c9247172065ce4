//! Limiting spectral densities for white-noise windows.
//!
//! The Ring Law describes the eigenvalues of the standard matrix product: they
//! fill an annulus with inner radius `(1 − c)^{L/2}` and outer radius 1, where
//! `c = N/T` and `L` is the number of factors in the product. The
//! Marchenko–Pastur law describes the eigenvalues of the sample covariance
//! matrix.

use core::f64::consts::PI;

// Float math for no_std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::invalid;
use crate::Result;

/// Ring Law parameters: aspect ratio `c = N/T ∈ (0, 1]` and product length `L ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingLawParams {
    c: f64,
    product_len: u32,
}

impl RingLawParams {
    pub fn new(c: f64, product_len: u32) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(invalid("c", alloc::format!("aspect ratio must lie in (0, 1], got {c}")));
        }
        if product_len == 0 {
            return Err(invalid("L", "product length must be at least 1"));
        }
        Ok(Self { c, product_len })
    }

    /// Parameters for an `n × t` window.
    pub fn for_window(n: usize, t: usize, product_len: u32) -> Result<Self> {
        if t == 0 {
            return Err(invalid("T", "window length must be positive"));
        }
        Self::new(n as f64 / t as f64, product_len)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn product_len(&self) -> u32 {
        self.product_len
    }
}

/// `(inner, outer)` radii of the Ring Law annulus.
pub fn ring_radii(p: RingLawParams) -> (f64, f64) {
    let inner = (1.0 - p.c).powf(p.product_len as f64 / 2.0);
    (inner, 1.0)
}

/// Radial density `f(r) = r^{2/L − 2} / (π c L)` on the annulus, 0 elsewhere.
///
/// This is a density on the complex plane, so it integrates to one against
/// `2πr dr`.
pub fn ring_law_pdf(radius: f64, p: RingLawParams) -> f64 {
    let (inner, outer) = ring_radii(p);
    if !(radius >= inner && radius <= outer) || radius <= 0.0 {
        return 0.0;
    }
    let l = p.product_len as f64;
    radius.powf(2.0 / l - 2.0) / (PI * p.c * l)
}

/// Marchenko–Pastur parameters: aspect ratio `c ∈ (0, 1]` and entry variance `d > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpLawParams {
    c: f64,
    d: f64,
}

impl MpLawParams {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(invalid("c", alloc::format!("aspect ratio must lie in (0, 1], got {c}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid("d", alloc::format!("variance must be positive, got {d}")));
        }
        Ok(Self { c, d })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Support `[a, b]` with `a = d(1 − √c)²`, `b = d(1 + √c)²`.
    pub fn support(&self) -> (f64, f64) {
        let s = self.c.sqrt();
        (self.d * (1.0 - s) * (1.0 - s), self.d * (1.0 + s) * (1.0 + s))
    }
}

/// `sqrt((b − λ)(λ − a)) / (2π c d λ)` on `[a, b]`, 0 elsewhere.
pub fn mp_law_pdf(lambda: f64, p: MpLawParams) -> f64 {
    let (a, b) = p.support();
    if !(lambda >= a && lambda <= b) || lambda <= 0.0 {
        return 0.0;
    }
    ((b - lambda) * (lambda - a)).max(0.0).sqrt() / (2.0 * PI * p.c * p.d * lambda)
}
