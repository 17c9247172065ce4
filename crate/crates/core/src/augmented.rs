//! Augmented matrices: a factor series is replicated `k` times, dressed with
//! white noise at a fixed signal-to-noise ratio, and stacked under the status
//! matrix.

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
use crate::{Error, Result};

/// SNR used when none is configured.
pub const DEFAULT_SNR: f64 = 500.0;

/// A candidate factor: its measured series, replication count and target SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpec {
    pub name: String,
    pub values: Vec<f64>,
    pub replicas: usize,
    pub rho: f64,
}

impl FactorSpec {
    pub fn new(name: impl Into<String>, values: Vec<f64>, replicas: usize, rho: f64) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            values,
            replicas,
            rho,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Replication count defaults to half the status row count, SNR to 500.
    pub fn with_defaults(name: impl Into<String>, values: Vec<f64>, n_status: usize) -> Result<Self> {
        Self::new(name, values, default_replicas(n_status), DEFAULT_SNR)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(invalid("k", "replication count must be at least 1"));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(invalid(
                "rho",
                alloc::format!("SNR must be positive and finite, got {}", self.rho),
            ));
        }
        if self.values.is_empty() {
            return Err(Error::Empty("factor series"));
        }
        if let Some(col) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        Ok(())
    }
}

/// `floor(n / 2)`, at least 1.
pub fn default_replicas(n_status: usize) -> usize {
    (n_status / 2).max(1)
}

/// `k × t` matrix whose rows all equal `c`.
pub fn replicate_factor(c: &[f64], k: usize) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Err(invalid("k", "replication count must be at least 1"));
    }
    Ok(DMatrix::from_fn(k, c.len(), |_, j| c[j]))
}

fn trace_gram(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum()
}

/// Noise magnitude `m_e = sqrt(Tr(DDᴴ) / (Tr(EEᴴ) · ρ))`.
pub fn noise_magnitude(d: &DMatrix<f64>, e: &DMatrix<f64>, rho: f64) -> Result<f64> {
    if d.shape() != e.shape() {
        return Err(Error::DimensionMismatch {
            context: "noise matrix columns",
            expected: d.ncols(),
            found: e.ncols(),
        });
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid(
            "rho",
            alloc::format!("SNR must be positive and finite, got {rho}"),
        ));
    }
    let td = trace_gram(d);
    let te = trace_gram(e);
    if te == 0.0 {
        return Err(Error::ZeroTrace("noise matrix"));
    }
    if td == 0.0 {
        return Err(Error::ZeroTrace("factor matrix"));
    }
    Ok((td / (te * rho)).sqrt())
}

/// Realized SNR `Tr(DDᴴ) / (Tr(EEᴴ) · m_e²)`.
pub fn snr(d: &DMatrix<f64>, e: &DMatrix<f64>, m_e: f64) -> Result<f64> {
    if !(m_e > 0.0) {
        return Err(invalid(
            "m_e",
            alloc::format!("noise magnitude must be positive, got {m_e}"),
        ));
    }
    let te = trace_gram(e);
    if te == 0.0 {
        return Err(Error::ZeroTrace("noise matrix"));
    }
    Ok(trace_gram(d) / (te * m_e * m_e))
}

/// `k × t` standard normal noise matrix, deterministic in `seed`.
pub fn noise_matrix(k: usize, t: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Row-major draw order so a matrix with more columns extends each row.
    DMatrix::from_row_iterator(k, t, (0..k * t).map(|_| StandardNormal.sample(&mut rng)))
}

/// Factor matrix `C = D + m_e · E` and the noise magnitude used.
pub fn build_factor_matrix(spec: &FactorSpec, seed: u64) -> Result<(DMatrix<f64>, f64)> {
    spec.validate()?;
    let d = replicate_factor(&spec.values, spec.replicas)?;
    let e = noise_matrix(spec.replicas, spec.values.len(), seed);
    let m_e = noise_magnitude(&d, &e, spec.rho)?;
    Ok((d + e * m_e, m_e))
}

/// Status matrix `B` stacked over a factor matrix `C_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedFrame {
    stacked: DMatrix<f64>,
    n_status: usize,
    pub noise_magnitude: f64,
    pub seed: u64,
}

impl AugmentedFrame {
    pub fn stacked(&self) -> &DMatrix<f64> {
        &self.stacked
    }

    pub fn into_stacked(self) -> DMatrix<f64> {
        self.stacked
    }

    pub fn n_status(&self) -> usize {
        self.n_status
    }

    pub fn n_factor_rows(&self) -> usize {
        self.stacked.nrows() - self.n_status
    }

    pub fn basic(&self) -> DMatrix<f64> {
        self.stacked.rows(0, self.n_status).into_owned()
    }

    pub fn factor(&self) -> DMatrix<f64> {
        self.stacked.rows(self.n_status, self.n_factor_rows()).into_owned()
    }
}

/// Row-stacks `b` (n × t) above `c` (k × t).
pub fn assemble_augmented(
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    noise_magnitude: f64,
    seed: u64,
) -> Result<AugmentedFrame> {
    if b.ncols() != c.ncols() {
        return Err(Error::DimensionMismatch {
            context: "augmented matrix columns",
            expected: b.ncols(),
            found: c.ncols(),
        });
    }
    let (n, k, t) = (b.nrows(), c.nrows(), b.ncols());
    let mut stacked = DMatrix::<f64>::zeros(n + k, t);
    stacked.rows_mut(0, n).copy_from(b);
    stacked.rows_mut(n, k).copy_from(c);
    Ok(AugmentedFrame {
        stacked,
        n_status: n,
        noise_magnitude,
        seed,
    })
}

/// Builds the factor matrix for `spec` and stacks it under `b`.
pub fn augment(b: &DMatrix<f64>, spec: &FactorSpec, seed: u64) -> Result<AugmentedFrame> {
    if spec.values.len() != b.ncols() {
        return Err(Error::DimensionMismatch {
            context: "factor length vs status columns",
            expected: b.ncols(),
            found: spec.values.len(),
        });
    }
    let (c, m_e) = build_factor_matrix(spec, seed)?;
    assemble_augmented(b, &c, m_e, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn replication_shapes() {
        let d = replicate_factor(&[1.0, 2.0], 3).unwrap();
        assert_eq!(d, DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]));
        assert_eq!(
            replicate_factor(&[4.0, 5.0], 1).unwrap(),
            DMatrix::from_row_slice(1, 2, &[4.0, 5.0])
        );
        assert!(replicate_factor(&[1.0], 0).is_err());
    }

    #[test]
    fn replicated_gram_trace() {
        let c: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin() * 3.0 + 1.0).collect();
        let d = replicate_factor(&c, 59).unwrap();
        let norm2: f64 = c.iter().map(|x| x * x).sum();
        assert!((trace_gram(&d) - 59.0 * norm2).abs() < 1e-9 * norm2 * 59.0);
    }

    #[test]
    fn noise_magnitude_direct_cases() {
        // Tr(DDᴴ)=500, Tr(EEᴴ)=1, ρ=500.
        let d = DMatrix::from_row_slice(1, 2, &[20.0, 10.0]);
        let e = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        assert!((noise_magnitude(&d, &e, 500.0).unwrap() - 1.0).abs() < 1e-15);
        let d = DMatrix::from_row_slice(1, 2, &[2.0, 0.0]);
        assert!((noise_magnitude(&d, &e, 1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_traces_rejected() {
        let d = DMatrix::from_element(2, 3, 1.0);
        let z = DMatrix::zeros(2, 3);
        assert_eq!(noise_magnitude(&d, &z, 1.0), Err(Error::ZeroTrace("noise matrix")));
        assert_eq!(noise_magnitude(&z, &d, 1.0), Err(Error::ZeroTrace("factor matrix")));
        assert!(snr(&d, &d, 0.0).is_err());
        assert!(snr(&d, &d, -1.0).is_err());
    }

    #[test]
    fn snr_scaling() {
        let d = noise_matrix(3, 7, 1);
        assert!((snr(&d, &d, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let e = noise_matrix(3, 7, 2);
        let base = snr(&d, &e, 0.3).unwrap();
        assert!((snr(&d, &e, 0.6).unwrap() - base / 4.0).abs() < 1e-12 * base);
    }

    #[test]
    fn noiseless_limit_approaches_factor() {
        let c = vec![1.0, 4.0, -2.0, 3.0];
        let spec = FactorSpec::new("f", c.clone(), 5, 1e16).unwrap();
        let (m, m_e) = build_factor_matrix(&spec, 3).unwrap();
        assert!(m_e < 1e-7);
        for row in m.row_iter() {
            for (a, b) in row.iter().zip(&c) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn stacking_keeps_order() {
        let b = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let c = DMatrix::from_row_slice(1, 3, &[7.0, 8.0, 9.0]);
        let a = assemble_augmented(&b, &c, 0.5, 1).unwrap();
        assert_eq!(a.stacked().shape(), (3, 3));
        assert_eq!(a.basic(), b);
        assert_eq!(a.factor(), c);
        assert_eq!(
            a.stacked().row(2).iter().copied().collect::<Vec<_>>(),
            vec![7.0, 8.0, 9.0]
        );
        let short = DMatrix::from_row_slice(1, 2, &[7.0, 8.0]);
        assert!(assemble_augmented(&b, &short, 0.5, 1).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(FactorSpec::new("f", vec![1.0], 0, 1.0).is_err());
        assert!(FactorSpec::new("f", vec![1.0], 1, 0.0).is_err());
        assert!(FactorSpec::new("f", vec![], 1, 1.0).is_err());
        let s = FactorSpec::with_defaults("f", vec![1.0; 4], 118).unwrap();
        assert_eq!((s.replicas, s.rho), (59, 500.0));
    }
}
