//! Synthetic load-change scenarios on a linear-sensitivity surrogate of a
//! 118-bus grid.
//!
//! Each factor is a load whose level follows a piecewise-constant schedule.
//! Status rows are per-unit voltage magnitudes that respond linearly to the
//! load deviation from its base value: a contiguous block of rows responds
//! strongly, and the response decays exponentially outside the block. Both
//! the voltages and the sampled load readings carry white measurement noise.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
// Float math for no_std; shadowed by inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::invalid;
use crate::pipeline::{factor_noise_seed, DataSource, FactorSeries};
use crate::{Error, Result};

/// Default white-noise level (relative to 1 p.u. for voltages and to the
/// reading for loads).
pub const DEFAULT_NOISE_LEVEL: f64 = 1e-4;
pub const DEFAULT_SENSITIVITY_SEED: u64 = 118;
pub const DEFAULT_NOISE_SEED: u64 = 2017;

/// Voltage drop per MW in the strongly responding rows.
const PEAK_SENSITIVITY: f64 = 5e-4;
/// Rows on each side of the block centre that respond at full strength.
const BLOCK_HALF_WIDTH: usize = 7;
/// Spillover decay length, in rows, outside the block.
const SPILLOVER_DECAY: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Constant,
    Step,
    Pulse,
    Staircase,
}

/// A level held over the 1-based sampling range `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub level: f64,
}

/// Piecewise-constant load schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalShape {
    pub kind: ShapeKind,
    pub segments: Vec<Segment>,
}

impl SignalShape {
    pub fn constant(t: usize, level: f64) -> Self {
        Self {
            kind: ShapeKind::Constant,
            segments: vec![Segment {
                start: 1,
                end: t,
                level,
            }],
        }
    }

    /// `before` until `at − 1`, `after` from `at` on.
    pub fn step(t: usize, at: usize, before: f64, after: f64) -> Self {
        Self {
            kind: ShapeKind::Step,
            segments: vec![
                Segment {
                    start: 1,
                    end: at - 1,
                    level: before,
                },
                Segment {
                    start: at,
                    end: t,
                    level: after,
                },
            ],
        }
    }

    /// Builds a shape from `(start, level)` breakpoints; the first start must
    /// be 1 and each segment runs until the next start.
    pub fn from_breakpoints(kind: ShapeKind, t: usize, points: &[(usize, f64)]) -> Self {
        let segments = points
            .iter()
            .enumerate()
            .map(|(i, &(start, level))| Segment {
                start,
                end: points.get(i + 1).map_or(t, |p| p.0.saturating_sub(1)),
                level,
            })
            .collect();
        Self { kind, segments }
    }

    pub fn validate(&self, t: usize) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::Schedule {
                factor: String::new(),
                reason,
            })
        };
        let Some(first) = self.segments.first() else {
            return bad("no segments".into());
        };
        if first.start != 1 {
            return bad(alloc::format!("first segment starts at {} instead of 1", first.start));
        }
        let mut next = 1;
        for s in &self.segments {
            if s.start != next {
                return bad(alloc::format!("gap or overlap at sample {}", s.start.min(next)));
            }
            if s.end < s.start {
                return bad(alloc::format!("segment {}..{} is empty", s.start, s.end));
            }
            if !s.level.is_finite() {
                return bad(alloc::format!("level at sample {} is not finite", s.start));
            }
            next = s.end + 1;
        }
        if next != t + 1 {
            return bad(alloc::format!("segments end at {} but the horizon is {t}", next - 1));
        }
        Ok(())
    }

    /// Level at 1-based sample `time`.
    pub fn level_at(&self, time: usize) -> Option<f64> {
        self.segments
            .iter()
            .find(|s| s.start <= time && time <= s.end)
            .map(|s| s.level)
    }
}

/// One load in a scenario: its schedule and the base load that produces the
/// baseline voltages.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFactor {
    pub shape: SignalShape,
    pub base_load: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub n_status: usize,
    pub t: usize,
    pub factors: BTreeMap<String, ScenarioFactor>,
    pub factor_sample_stride: usize,
    pub noise_level: f64,
    pub sensitivity_seed: u64,
    pub noise_seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_status == 0 {
            return Err(invalid("n_status", "at least one status row is required"));
        }
        if self.t == 0 {
            return Err(invalid("t", "horizon must be positive"));
        }
        if self.factor_sample_stride == 0 || self.t % self.factor_sample_stride != 0 {
            return Err(invalid(
                "factor_sample_stride",
                alloc::format!(
                    "stride {} must divide the horizon {}",
                    self.factor_sample_stride,
                    self.t
                ),
            ));
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(invalid("noise_level", "must be finite and non-negative"));
        }
        for (name, f) in &self.factors {
            let named = |e: Error| match e {
                Error::Schedule { reason, .. } => Error::Schedule {
                    factor: name.clone(),
                    reason,
                },
                other => other,
            };
            f.shape.validate(self.t).map_err(named)?;
            if let Some(s) = f
                .shape
                .segments
                .iter()
                .find(|s| (s.start - 1) % self.factor_sample_stride != 0)
            {
                return Err(Error::Schedule {
                    factor: name.clone(),
                    reason: alloc::format!(
                        "level change at sample {} is not on a stride-{} boundary",
                        s.start,
                        self.factor_sample_stride
                    ),
                });
            }
            if !f.base_load.is_finite() {
                return Err(Error::Schedule {
                    factor: name.clone(),
                    reason: "base load is not finite".into(),
                });
            }
        }
        Ok(())
    }

    pub fn factor_names(&self) -> Vec<String> {
        self.factors.keys().cloned().collect()
    }
}

/// Linear voltage response to load deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateModel {
    pub factor_names: Vec<String>,
    /// `n_status × n_factors`, p.u. per MW.
    pub sensitivity: DMatrix<f64>,
    pub baseline: Vec<f64>,
}

/// Rows whose circular distance to `center` is within the block respond at
/// full strength; the rest decay exponentially with distance.
fn profile(row: usize, center: usize, n: usize) -> f64 {
    let d = row.abs_diff(center);
    let d = d.min(n - d);
    if d <= BLOCK_HALF_WIDTH {
        1.0
    } else {
        (-((d - BLOCK_HALF_WIDTH) as f64) / SPILLOVER_DECAY).exp()
    }
}

/// Sensitivity blocks are spread evenly around the row index space with a
/// seeded offset; every entry gets a seeded ±30% jitter.
pub fn build_surrogate(n_status: usize, factor_names: &[String], sensitivity_seed: u64) -> Result<SurrogateModel> {
    if n_status == 0 {
        return Err(invalid("n_status", "at least one status row is required"));
    }
    let m = factor_names.len();
    let mut rng = ChaCha8Rng::seed_from_u64(sensitivity_seed);
    let offset = rng.random_range(0..n_status);
    let mut sensitivity = DMatrix::zeros(n_status, m);
    for j in 0..m {
        let center = (offset + j * n_status / m) % n_status;
        for i in 0..n_status {
            let jitter = 0.7 + 0.6 * rng.random::<f64>();
            sensitivity[(i, j)] = -PEAK_SENSITIVITY * profile(i, center, n_status) * jitter;
        }
    }
    let baseline = (0..n_status).map(|_| 1.0 + rng.random_range(-0.03..0.03)).collect();
    Ok(SurrogateModel {
        factor_names: factor_names.to_vec(),
        sensitivity,
        baseline,
    })
}

/// Status matrix and sampled factor readings for a scenario.
///
/// Factor readings are taken at samples `1, 1 + stride, …` with relative
/// noise and held until the next reading. Voltages respond to the true load.
pub fn generate(spec: &ScenarioSpec, model: &SurrogateModel) -> Result<DataSource> {
    spec.validate()?;
    let names = spec.factor_names();
    if model.factor_names != names {
        return Err(invalid("model", "surrogate factor names differ from the scenario's"));
    }
    if model.sensitivity.shape() != (spec.n_status, names.len()) || model.baseline.len() != spec.n_status {
        return Err(Error::DimensionMismatch {
            context: "surrogate rows vs n_status",
            expected: spec.n_status,
            found: model.baseline.len(),
        });
    }
    let (n, t) = (spec.n_status, spec.t);

    let mut deviation = DMatrix::zeros(names.len(), t);
    let mut factors = Vec::with_capacity(names.len());
    for (j, name) in names.iter().enumerate() {
        let f = &spec.factors[name];
        let mut rng = ChaCha8Rng::seed_from_u64(factor_noise_seed(spec.noise_seed, name));
        let mut reading = 0.0;
        let mut values = Vec::with_capacity(t);
        for time in 1..=t {
            let level = f.shape.level_at(time).unwrap_or(f.base_load);
            if (time - 1) % spec.factor_sample_stride == 0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                reading = level * (1.0 + spec.noise_level * z);
            }
            values.push(reading);
            deviation[(j, time - 1)] = level - f.base_load;
        }
        factors.push(FactorSeries {
            name: name.clone(),
            values,
        });
    }

    let mut b = &model.sensitivity * deviation;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.noise_seed);
    for i in 0..n {
        for time in 0..t {
            let z: f64 = StandardNormal.sample(&mut rng);
            b[(i, time)] += model.baseline[i] + spec.noise_level * z;
        }
    }

    DataSource::new(
        (1..=n).map(|i| alloc::format!("vm{i}")).collect(),
        (1..=t).collect(),
        b,
        factors,
    )
}

/// Surrogate built from the spec's own seed and factor names, then generated.
pub fn simulate(spec: &ScenarioSpec) -> Result<DataSource> {
    let model = build_surrogate(spec.n_status, &spec.factor_names(), spec.sensitivity_seed)?;
    generate(spec, &model)
}

pub const BUS_117: &str = "bus117";
pub const BUS_54: &str = "bus54";

fn bus117_case2(t: usize) -> SignalShape {
    SignalShape::from_breakpoints(
        ShapeKind::Pulse,
        t,
        &[(1, 60.0), (301, 120.0), (351, 60.0), (651, 20.0), (701, 60.0)],
    )
}

fn bus54_case3(t: usize) -> SignalShape {
    let mut points = vec![(1, 113.0)];
    for (i, level) in [135.6, 158.2, 180.8, 203.4, 226.0, 248.6, 271.2, 293.8, 316.4]
        .into_iter()
        .enumerate()
    {
        points.push((301 + 50 * i, level));
    }
    SignalShape::from_breakpoints(ShapeKind::Staircase, t, &points)
}

/// The four load-change cases on buses 117 and 54.
///
/// 1. bus 117 steps from 20 MW to 120 MW at sample 501;
/// 2. bus 117 sits at 60 MW with a 120 MW peak on 301–350 and a 20 MW dip on 651–700;
/// 3. bus 54 climbs from 113 MW by 22.6 MW every 50 samples from 301, reaching 316.4 MW at 701;
/// 4. cases 2 and 3 together.
pub fn preset(case_id: u32) -> Result<ScenarioSpec> {
    let t = 1000;
    let (b117, b54) = match case_id {
        1 => (SignalShape::step(t, 501, 20.0, 120.0), SignalShape::constant(t, 113.0)),
        2 => (bus117_case2(t), SignalShape::constant(t, 113.0)),
        3 => (SignalShape::constant(t, 20.0), bus54_case3(t)),
        4 => (bus117_case2(t), bus54_case3(t)),
        other => return Err(Error::UnknownCase(other)),
    };
    let mut factors = BTreeMap::new();
    for (name, shape) in [(BUS_117, b117), (BUS_54, b54)] {
        let base_load = shape.segments[0].level;
        factors.insert(String::from(name), ScenarioFactor { shape, base_load });
    }
    Ok(ScenarioSpec {
        n_status: 118,
        t,
        factors,
        factor_sample_stride: 50,
        noise_level: DEFAULT_NOISE_LEVEL,
        sensitivity_seed: DEFAULT_SENSITIVITY_SEED,
        noise_seed: DEFAULT_NOISE_SEED,
    })
}
