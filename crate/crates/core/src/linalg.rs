//! Dense eigenvalue routines the analysis chain relies on.
//!
//! General complex spectra come from a Householder reduction to upper
//! Hessenberg form followed by single-shift implicit QR sweeps that only
//! touch the active diagonal block (no Schur vectors are accumulated). This is
//! the per-window hot path, so it works on a flat row-major buffer.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
// Float math for no_std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a general complex square matrix, in no particular order.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "eigenvalues (square matrix)",
            expected: n,
            found: m.ncols(),
        });
    }
    if let Some(pos) = m.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite {
            row: pos % n,
            col: pos / n,
        });
    }
    // nalgebra stores column-major, so the buffer read row-major is the
    // transpose, which has the same spectrum.
    let mut h = m.as_slice().to_vec();
    reduce_to_hessenberg(&mut h, n);
    hessenberg_eigenvalues(&mut h, n)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut w: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    w.sort_by(f64::total_cmp);
    w
}

/// Principal square root of a real symmetric positive semidefinite matrix.
///
/// Eigenvalues are clamped at zero before the root is taken, so rounding
/// noise like `-1e-15` does not produce NaNs.
pub fn psd_sqrt(g: DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(g);
    let roots = eig.eigenvalues.map(|w| w.max(0.0).sqrt());
    let mut scaled = eig.eigenvectors.clone();
    for (mut col, r) in scaled.column_iter_mut().zip(roots.iter()) {
        col *= *r;
    }
    scaled * eig.eigenvectors.transpose()
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn reduce_to_hessenberg(a: &mut [C64], n: usize) {
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let tail2: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail2 == 0.0 {
            continue;
        }
        let norm = (x0.norm_sqr() + tail2).sqrt();
        let x0_abs = crate::cabs(x0);
        let phase = if x0_abs == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0_abs };
        let alpha = -phase * norm;

        v[0] = x0 - alpha;
        for i in 1..len {
            v[i] = a[(k + 1 + i) * n + k];
        }
        let beta = 2.0 / (v[0].norm_sqr() + tail2);

        // H·A on rows k+1.., columns k+1.. (column k becomes alpha·e1).
        for x in w[k + 1..n].iter_mut() {
            *x = zero;
        }
        for i in 0..len {
            let vi = v[i].conj();
            let row = &a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k + 1..n {
                w[j] += vi * row[j];
            }
        }
        for i in 0..len {
            let f = v[i] * beta;
            let row = &mut a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k + 1..n {
                row[j] -= f * w[j];
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = zero;
        }

        // A·H on all rows, columns k+1..
        for r in 0..n {
            let row = &mut a[r * n + k + 1..(r + 1) * n];
            let mut s = zero;
            for (x, vi) in row.iter().zip(&v[..len]) {
                s += *x * vi;
            }
            let s = s * beta;
            for (x, vi) in row.iter_mut().zip(&v[..len]) {
                *x -= s * vi.conj();
            }
        }
    }
}

/// Complex Givens rotation `[c s; -conj(s) c]` mapping `(f, g)` to `(r, 0)`.
#[inline]
fn givens(f: C64, g: C64) -> (f64, C64, C64) {
    let fa = crate::cabs(f);
    let ga = crate::cabs(g);
    if ga == 0.0 {
        return (1.0, C64::new(0.0, 0.0), f);
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga, C64::new(ga, 0.0));
    }
    let rho = fa.hypot(ga);
    let phase = f / fa;
    (fa / rho, phase * g.conj() / rho, phase * rho)
}

fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = crate::csqrt(half_diff * half_diff + b * c);
    (half_tr + disc, half_tr - disc)
}

fn hessenberg_eigenvalues(h: &mut [C64], n: usize) -> Result<Vec<C64>> {
    let zero = C64::new(0.0, 0.0);
    let mut eig = vec![zero; n];
    if n == 0 {
        return Ok(eig);
    }
    let ulp = f64::EPSILON;
    let scale: f64 = h.iter().map(|z| abs1(*z)).fold(0.0, f64::max);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let limit = MAX_SWEEPS_PER_EIGENVALUE * n.max(10);

    loop {
        // Locate the start of the trailing unreduced block.
        let mut l = hi;
        while l > 0 {
            let sub = abs1(h[l * n + l - 1]);
            let mut tst = abs1(h[(l - 1) * n + l - 1]) + abs1(h[l * n + l]);
            if tst == 0.0 {
                tst = scale;
            }
            if sub <= ulp * tst {
                h[l * n + l - 1] = zero;
                break;
            }
            l -= 1;
        }

        if l == hi {
            eig[hi] = h[hi * n + hi];
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == hi {
            let (e1, e2) = eig2(h[l * n + l], h[l * n + hi], h[hi * n + l], h[hi * n + hi]);
            eig[l] = e1;
            eig[hi] = e2;
            if l == 0 {
                break;
            }
            hi = l - 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > limit {
            return Err(Error::NoConvergence(n));
        }

        let shift = if iter % 10 == 0 {
            // Exceptional shift to break cycles.
            h[hi * n + hi] + 0.75 * h[hi * n + hi - 1].re.abs()
        } else {
            let d = h[hi * n + hi];
            let (e1, e2) = eig2(h[(hi - 1) * n + hi - 1], h[(hi - 1) * n + hi], h[hi * n + hi - 1], d);
            if crate::cabs(e1 - d) <= crate::cabs(e2 - d) {
                e1
            } else {
                e2
            }
        };

        // One implicit single-shift sweep over rows/columns l..=hi.
        let mut x = h[l * n + l] - shift;
        let mut y = h[(l + 1) * n + l];
        for k in l..hi {
            if k > l {
                x = h[k * n + k - 1];
                y = h[(k + 1) * n + k - 1];
            }
            let (c, s, r) = givens(x, y);
            if k > l {
                h[k * n + k - 1] = r;
                h[(k + 1) * n + k - 1] = zero;
            }
            let sc = s.conj();
            {
                let (top, bottom) = h.split_at_mut((k + 1) * n);
                let row_k = &mut top[k * n + k..k * n + hi + 1];
                let row_k1 = &mut bottom[k..=hi];
                for (p, q) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                    let (a, b) = (*p, *q);
                    *p = a * c + s * b;
                    *q = b * c - sc * a;
                }
            }
            let last = (k + 2).min(hi);
            for i in l..=last {
                let a = h[i * n + k];
                let b = h[i * n + k + 1];
                h[i * n + k] = a * c + b * sc;
                h[i * n + k + 1] = b * c - a * s;
            }
        }
    }
    Ok(eig)
}
