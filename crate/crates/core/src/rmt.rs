//! Window transforms: from a raw `N × T` data window to the standard matrix
//! product `Z̃` and its sample covariance `S`.
//!
//! The chain is
//!
//! 1. [`standardize_rows`]: each row rescaled to mean 0 and sample variance 1;
//! 2. [`singular_value_equivalent`]: `X_u = sqrt(X̃ X̃ᴴ) · U` with `U` Haar;
//! 3. [`matrix_product`]: ordered product of `L` such factors;
//! 4. [`standardize_product`]: each row divided by `sqrt(N)·σ(row)`;
//! 5. [`sample_covariance`]: `S = Z̃ Z̃ᴴ`.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
// Float math for no_std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::invalid;
use crate::linalg;
use crate::{Error, Result, C64};

/// Raw measurement window, `N` variables by `T` sampling times.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    values: DMatrix<f64>,
    row_labels: Vec<String>,
    time_labels: Vec<usize>,
}

impl RawMatrix {
    /// Checks `N ≥ 2`, `T ≥ 2`, label lengths and finiteness.
    pub fn new(values: DMatrix<f64>, row_labels: Vec<String>, time_labels: Vec<usize>) -> Result<Self> {
        let (n, t) = values.shape();
        if n < 2 {
            return Err(invalid("rows", alloc::format!("need at least 2 variables, got {n}")));
        }
        if t < 2 {
            return Err(invalid(
                "columns",
                alloc::format!("need at least 2 sampling times, got {t}"),
            ));
        }
        if row_labels.len() != n {
            return Err(Error::DimensionMismatch {
                context: "row labels",
                expected: n,
                found: row_labels.len(),
            });
        }
        if time_labels.len() != t {
            return Err(Error::DimensionMismatch {
                context: "time labels",
                expected: t,
                found: time_labels.len(),
            });
        }
        check_finite(&values)?;
        Ok(Self {
            values,
            row_labels,
            time_labels,
        })
    }

    /// Window with generated labels `x0, x1, …` and times `1..=T`.
    pub fn from_values(values: DMatrix<f64>) -> Result<Self> {
        let rows = (0..values.nrows()).map(|i| alloc::format!("x{i}")).collect();
        let times = (1..=values.ncols()).collect();
        Self::new(values, rows, times)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn time_labels(&self) -> &[usize] {
        &self.time_labels
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }
}

fn check_finite(values: &DMatrix<f64>) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(Error::NonFinite {
            row: pos % values.nrows(),
            col: pos / values.nrows(),
        }),
        None => Ok(()),
    }
}

/// Row-standardized window `X̃`.
///
/// Rows whose raw values were constant cannot be rescaled; they are stored as
/// zeros and listed in [`StandardMatrix::constant_rows`].
#[derive(Debug, Clone, PartialEq)]
pub struct StandardMatrix {
    values: DMatrix<f64>,
    constant_rows: Vec<usize>,
    row_labels: Vec<String>,
    time_labels: Vec<usize>,
}

impl StandardMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn constant_rows(&self) -> &[usize] {
        &self.constant_rows
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn time_labels(&self) -> &[usize] {
        &self.time_labels
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    /// Reinterprets an already standardized window as raw data.
    pub fn into_raw(self) -> RawMatrix {
        RawMatrix {
            values: self.values,
            row_labels: self.row_labels,
            time_labels: self.time_labels,
        }
    }
}

/// Mean and sample (`n − 1`) variance of a sequence.
pub(crate) fn mean_and_sample_variance<I>(xs: I) -> (f64, f64)
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let it = xs.into_iter();
    let n = it.clone().count() as f64;
    let mean = it.clone().sum::<f64>() / n;
    let ss: f64 = it.map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Relative spread below which a raw row is treated as constant.
const CONSTANT_ROW_TOLERANCE: f64 = 1e-13;

/// Rescales every row to mean 0 and sample variance 1.
pub fn standardize_rows(raw: &RawMatrix) -> StandardMatrix {
    let (n, t) = raw.values.shape();
    let mut values = DMatrix::<f64>::zeros(n, t);
    let mut constant_rows = Vec::new();
    for i in 0..n {
        let row = raw.values.row(i);
        let (mean, var) = mean_and_sample_variance(row.iter().copied());
        let sd = var.sqrt();
        let scale = row.iter().fold(mean.abs(), |m, x| m.max(x.abs()));
        if sd <= CONSTANT_ROW_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            constant_rows.push(i);
            continue;
        }
        for j in 0..t {
            values[(i, j)] = (raw.values[(i, j)] - mean) / sd;
        }
    }
    StandardMatrix {
        values,
        constant_rows,
        row_labels: raw.row_labels.clone(),
        time_labels: raw.time_labels.clone(),
    }
}

/// What a [`SquareComplexMatrix`] represents in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    HaarUnitary,
    SingularValueEquivalent,
    MatrixProduct,
    StandardMatrixProduct,
}

/// Square complex matrix tagged with its role.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareComplexMatrix {
    values: DMatrix<C64>,
    kind: MatrixKind,
}

impl SquareComplexMatrix {
    pub fn new(values: DMatrix<C64>, kind: MatrixKind) -> Result<Self> {
        if !values.is_square() {
            return Err(Error::DimensionMismatch {
                context: "square matrix",
                expected: values.nrows(),
                found: values.ncols(),
            });
        }
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<C64> {
        self.values
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Eigenvalues, unordered.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        linalg::eigenvalues(&self.values)
    }
}

/// Haar-distributed `n × n` unitary matrix, deterministic in `seed`.
///
/// QR of a complex Ginibre matrix with the phases of `R`'s diagonal folded
/// into `Q`.
pub fn haar_unitary(n: usize, seed: u64) -> Result<SquareComplexMatrix> {
    if n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.5f64.sqrt();
    let g = DMatrix::<C64>::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let m = crate::cabs(d);
        let phase = if m > 0.0 { d / m } else { C64::new(1.0, 0.0) };
        col *= phase;
    }
    SquareComplexMatrix::new(q, MatrixKind::HaarUnitary)
}

/// `sqrt(X̃ X̃ᴴ) · U`.
pub fn singular_value_equivalent(x: &StandardMatrix, u: &SquareComplexMatrix) -> Result<SquareComplexMatrix> {
    if u.kind != MatrixKind::HaarUnitary {
        return Err(invalid("u", "expected a Haar unitary matrix"));
    }
    let n = x.nrows();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            context: "singular value equivalent (unitary dimension)",
            expected: n,
            found: u.dim(),
        });
    }
    let root = gram_sqrt(x.values());
    let (re, im) = split(u.values());
    SquareComplexMatrix::new(combine(&root * re, &root * im), MatrixKind::SingularValueEquivalent)
}

pub(crate) fn gram_sqrt(x: &DMatrix<f64>) -> DMatrix<f64> {
    linalg::psd_sqrt(x * x.transpose())
}

pub(crate) fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

pub(crate) fn combine(re: DMatrix<f64>, im: DMatrix<f64>) -> DMatrix<C64> {
    re.zip_map(&im, C64::new)
}

/// Ordered product of `L ≥ 1` square factors.
pub fn matrix_product(factors: &[SquareComplexMatrix]) -> Result<SquareComplexMatrix> {
    let (first, rest) = factors.split_first().ok_or(Error::Empty("matrix product factors"))?;
    let n = first.dim();
    let mut acc = first.values.clone();
    for f in rest {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                context: "matrix product factor",
                expected: n,
                found: f.dim(),
            });
        }
        acc = &acc * &f.values;
    }
    SquareComplexMatrix::new(acc, MatrixKind::MatrixProduct)
}

/// Divides row `i` by `sqrt(N)·σ(ẑ_i)`, `σ` with the `N − 1` divisor.
pub fn standardize_product(z: &SquareComplexMatrix) -> Result<SquareComplexMatrix> {
    if z.kind != MatrixKind::MatrixProduct {
        return Err(invalid("z", "expected a matrix product"));
    }
    let values = standardize_product_rows(z.values.clone())?;
    SquareComplexMatrix::new(values, MatrixKind::StandardMatrixProduct)
}

pub(crate) fn standardize_product_rows(mut z: DMatrix<C64>) -> Result<DMatrix<C64>> {
    let n = z.nrows();
    let nf = n as f64;
    for i in 0..n {
        let mut row = z.row_mut(i);
        let mean = row.iter().fold(C64::new(0.0, 0.0), |a, b| a + b) / nf;
        let ss: f64 = row.iter().map(|v| (v - mean).norm_sqr()).sum();
        let sd = (ss / (nf - 1.0)).sqrt();
        if !(sd > 0.0) || !sd.is_finite() {
            return Err(Error::ZeroVarianceRow { row: i });
        }
        row /= C64::new(nf.sqrt() * sd, 0.0);
    }
    Ok(z)
}

/// Hermitian positive semidefinite `S = Z̃ Z̃ᴴ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    values: DMatrix<C64>,
}

impl CovarianceMatrix {
    pub fn values(&self) -> &DMatrix<C64> {
        &self.values
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.values)
    }
}

/// `S = Z̃ Z̃ᴴ` (equivalently `Y Yᴴ / N` with `Y = sqrt(N)·Z̃`).
pub fn sample_covariance(z: &SquareComplexMatrix) -> Result<CovarianceMatrix> {
    if z.kind != MatrixKind::StandardMatrixProduct {
        return Err(invalid("z", "expected a standard matrix product"));
    }
    let mut s = &z.values * z.values.adjoint();
    // Symmetrize away rounding so the result is exactly Hermitian.
    let n = s.nrows();
    for i in 0..n {
        s[(i, i)] = C64::new(s[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (s[(i, j)] + s[(j, i)].conj()) * 0.5;
            s[(i, j)] = avg;
            s[(j, i)] = avg.conj();
        }
    }
    Ok(CovarianceMatrix { values: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gaussian(n: usize, t: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, t, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn small_row_standardizes_to_unit_steps() {
        let raw = RawMatrix::from_values(DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, -1.0, 0.0, 1.0])).unwrap();
        let s = standardize_rows(&raw);
        for i in 0..2 {
            let row: Vec<f64> = s.values().row(i).iter().copied().collect();
            for (a, b) in row.iter().zip([-1.0, 0.0, 1.0]) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        assert!(s.constant_rows().is_empty());
        assert_eq!(s.row_labels(), raw.row_labels());
        assert_eq!(s.time_labels(), &[1, 2, 3]);
    }

    #[test]
    fn gaussian_window_rows_meet_moment_invariant() {
        let raw = RawMatrix::from_values(gaussian(118, 240, 3) * 7.0 + DMatrix::from_element(118, 240, 2.5)).unwrap();
        let s = standardize_rows(&raw);
        for i in 0..118 {
            let (m, v) = mean_and_sample_variance(s.values().row(i).iter().copied());
            assert!(m.abs() < 1e-10, "row {i} mean {m}");
            assert!((v - 1.0).abs() < 1e-8, "row {i} var {v}");
        }
    }

    #[test]
    fn constant_row_is_zeroed_and_flagged() {
        let raw = RawMatrix::from_values(DMatrix::from_row_slice(2, 3, &[5.0, 5.0, 5.0, 1.0, 2.0, 4.0])).unwrap();
        let s = standardize_rows(&raw);
        assert_eq!(s.constant_rows(), &[0]);
        assert!(s.values().row(0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn raw_matrix_rejects_bad_shapes_and_values() {
        assert!(RawMatrix::from_values(DMatrix::zeros(1, 5)).is_err());
        assert!(RawMatrix::from_values(DMatrix::zeros(3, 1)).is_err());
        let mut v = DMatrix::zeros(3, 4);
        v[(2, 1)] = f64::INFINITY;
        assert_eq!(RawMatrix::from_values(v), Err(Error::NonFinite { row: 2, col: 1 }));
        let labels = vec![String::from("a")];
        assert!(matches!(
            RawMatrix::new(DMatrix::zeros(2, 2), labels, vec![1, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn haar_scalar_has_unit_modulus() {
        let u = haar_unitary(1, 11).unwrap();
        assert!((crate::cabs(u.values()[(0, 0)]) - 1.0).abs() < 1e-14);
        assert_eq!(
            haar_unitary(0, 1).unwrap_err(),
            invalid("n", "dimension must be at least 1")
        );
    }

    #[test]
    fn haar_is_unitary_and_seeded() {
        let u = haar_unitary(64, 5).unwrap();
        let err = (u.values() * u.values().adjoint() - DMatrix::<C64>::identity(64, 64))
            .iter()
            .map(|z| crate::cabs(*z))
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert_eq!(u, haar_unitary(64, 5).unwrap());
        assert_ne!(u, haar_unitary(64, 6).unwrap());
    }

    #[test]
    fn sve_with_identity_unitary_is_gram_root() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let std = StandardMatrix {
            values: x.clone(),
            constant_rows: vec![],
            row_labels: vec!["a".into(), "b".into()],
            time_labels: vec![1, 2],
        };
        let id = SquareComplexMatrix::new(DMatrix::identity(2, 2), MatrixKind::HaarUnitary).unwrap();
        let xu = singular_value_equivalent(&std, &id).unwrap();
        let root = linalg::psd_sqrt(&x * x.transpose());
        for (a, b) in xu.values().iter().zip(root.iter()) {
            assert!((a.re - b).abs() < 1e-14 && a.im == 0.0);
        }
    }

    #[test]
    fn sve_rejects_wrong_unitary() {
        let s = standardize_rows(&RawMatrix::from_values(gaussian(4, 10, 1)).unwrap());
        let u = haar_unitary(5, 1).unwrap();
        assert!(matches!(
            singular_value_equivalent(&s, &u),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 5,
                ..
            })
        ));
        let not_haar = SquareComplexMatrix::new(DMatrix::identity(4, 4), MatrixKind::MatrixProduct).unwrap();
        assert!(singular_value_equivalent(&s, &not_haar).is_err());
    }

    #[test]
    fn product_identities() {
        let m = haar_unitary(6, 2).unwrap();
        let single = matrix_product(core::slice::from_ref(&m)).unwrap();
        assert_eq!(single.values(), m.values());
        let id = SquareComplexMatrix::new(DMatrix::identity(6, 6), MatrixKind::SingularValueEquivalent).unwrap();
        let two = matrix_product(&[m.clone(), id]).unwrap();
        assert!((two.values() - m.values()).norm() < 1e-15);
        assert_eq!(matrix_product(&[]), Err(Error::Empty("matrix product factors")));
        let other = haar_unitary(5, 2).unwrap();
        assert!(matrix_product(&[m, other]).is_err());
    }

    #[test]
    fn product_of_two_matches_naive_loops() {
        let a = haar_unitary(32, 8).unwrap();
        let b = haar_unitary(32, 9).unwrap();
        let p = matrix_product(&[a.clone(), b.clone()]).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..32 {
                    s += a.values()[(i, k)] * b.values()[(k, j)];
                }
                assert!(crate::cabs(p.values()[(i, j)] - s) < 1e-12);
            }
        }
    }

    #[test]
    fn standardize_product_scales_unit_sigma_row() {
        // Row (a, -a, a, -a) with σ = 1 under the N−1 divisor.
        let a = (3.0f64 / 4.0).sqrt();
        let mut v = DMatrix::<C64>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                v[(i, j)] = C64::new(sign * a, 0.0);
            }
        }
        let z = SquareComplexMatrix::new(v.clone(), MatrixKind::MatrixProduct).unwrap();
        let zt = standardize_product(&z).unwrap();
        for (x, y) in zt.values().iter().zip(v.iter()) {
            assert!(crate::cabs(x - y * 0.5) < 1e-14);
        }
        // A fixed point stays put.
        let again = SquareComplexMatrix::new(zt.values().clone(), MatrixKind::MatrixProduct).unwrap();
        let zz = standardize_product(&again).unwrap();
        assert!((zz.values() - zt.values()).norm() < 1e-14);
    }

    #[test]
    fn standardize_product_rejects_constant_row() {
        let mut v = DMatrix::<C64>::from_element(3, 3, C64::new(1.0, 0.0));
        v[(0, 1)] = C64::new(2.0, 0.0);
        v[(2, 2)] = C64::new(0.0, 1.0);
        let z = SquareComplexMatrix::new(v, MatrixKind::MatrixProduct).unwrap();
        assert_eq!(standardize_product(&z), Err(Error::ZeroVarianceRow { row: 1 }));
    }

    #[test]
    fn covariance_of_scaled_identity_is_diagonal() {
        let n = 4;
        let z = SquareComplexMatrix::new(
            DMatrix::<C64>::identity(n, n) / C64::new((n as f64).sqrt(), 0.0),
            MatrixKind::StandardMatrixProduct,
        )
        .unwrap();
        let s = sample_covariance(&z).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!(crate::cabs(s.values()[(i, j)] - C64::new(want, 0.0)) < 1e-15);
            }
        }
    }
}
