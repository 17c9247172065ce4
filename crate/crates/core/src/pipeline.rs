//! Real-time split-window analysis.
//!
//! At every sampling time `t_i ≥ T` the `T` most recent columns of the data
//! source form a window that is pushed through the [`rmt`](crate::rmt) chain.
//! The resulting MSR series is compared against the Ring Law inner radius:
//! a run of samples below it is a *signal area*. Because every window holds
//! `T` samples of history, an area is `T` samples longer than the signal that
//! caused it, which gives the duration estimate `end − start + 1 − T`.
//!
//! Augmenting the status matrix with one factor at a time and repeating the
//! analysis attributes each signal area to the factors whose augmented MSR
//! also falls inside the ring there.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::augmented::{augment, FactorSpec};
use crate::error::invalid;
use crate::indicators::{theoretical_msr, Bandwidth, CovarianceSpectrum, Grid, RingSpectrum};
use crate::laws::{ring_radii, MpLawParams, RingLawParams};
use crate::rmt::{
    haar_unitary, matrix_product, sample_covariance, singular_value_equivalent, standardize_product, standardize_rows,
    RawMatrix, SquareComplexMatrix, StandardMatrix,
};
use crate::{Error, Result};

/// Analysis seed used when none is given.
pub const DEFAULT_SEED: u64 = 7;

/// A measured factor series aligned with the status columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSeries {
    pub name: String,
    pub values: Vec<f64>,
}

/// Status variables (rows) over sampling times (columns), plus optional
/// factor series on the same time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSource {
    variables: Vec<String>,
    times: Vec<usize>,
    values: DMatrix<f64>,
    factors: Vec<FactorSeries>,
}

impl DataSource {
    pub fn new(
        variables: Vec<String>,
        times: Vec<usize>,
        values: DMatrix<f64>,
        factors: Vec<FactorSeries>,
    ) -> Result<Self> {
        if values.nrows() != variables.len() {
            return Err(Error::DimensionMismatch {
                context: "status rows vs variable labels",
                expected: variables.len(),
                found: values.nrows(),
            });
        }
        if values.ncols() != times.len() {
            return Err(Error::DimensionMismatch {
                context: "status columns vs time labels",
                expected: times.len(),
                found: values.ncols(),
            });
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(invalid(
                "times",
                alloc::format!("time indices must be strictly increasing (position {})", i + 1),
            ));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % values.nrows().max(1),
                col: pos / values.nrows().max(1),
            });
        }
        for f in &factors {
            if f.values.len() != times.len() {
                return Err(Error::DimensionMismatch {
                    context: "factor length vs time labels",
                    expected: times.len(),
                    found: f.values.len(),
                });
            }
            if let Some(col) = f.values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: 0, col });
            }
        }
        Ok(Self {
            variables,
            times,
            values,
            factors,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn factors(&self) -> &[FactorSeries] {
        &self.factors
    }

    pub fn factor(&self, name: &str) -> Option<&FactorSeries> {
        self.factors.iter().find(|f| f.name == name)
    }

    pub fn n_status(&self) -> usize {
        self.values.nrows()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Same source without its factor series.
    pub fn status_only(&self) -> Self {
        Self {
            factors: Vec::new(),
            ..self.clone()
        }
    }
}

/// Window length `T` and product length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    pub window: usize,
    pub product_len: u32,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            window: 240,
            product_len: 1,
        }
    }
}

impl WindowConfig {
    pub fn new(window: usize, product_len: u32) -> Result<Self> {
        let cfg = Self { window, product_len };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(invalid("T", "window length must be at least 2"));
        }
        if self.product_len == 0 {
            return Err(invalid("L", "product length must be at least 1"));
        }
        Ok(())
    }

    /// Ring Law parameters for an `n`-row window.
    pub fn ring_params(&self, n: usize) -> Result<RingLawParams> {
        RingLawParams::for_window(n, self.window, self.product_len)
    }
}

/// Raw window ending at 1-based sample position `t_i`: columns
/// `t_i − T + 1 ..= t_i`.
pub fn real_time_window(omega: &DataSource, t_i: usize, cfg: &WindowConfig) -> Result<RawMatrix> {
    cfg.validate()?;
    window_of(omega.values(), omega.variables(), omega.times(), t_i, cfg.window)
}

fn window_of(
    values: &DMatrix<f64>,
    labels: &[String],
    times: &[usize],
    t_i: usize,
    window: usize,
) -> Result<RawMatrix> {
    if t_i < window {
        return Err(Error::InsufficientHistory { time: t_i, window });
    }
    if t_i > values.ncols() {
        return Err(invalid(
            "t_i",
            alloc::format!("position {t_i} is past the last sample {}", values.ncols()),
        ));
    }
    let start = t_i - window;
    RawMatrix::new(
        values.columns(start, window).into_owned(),
        labels.to_vec(),
        times[start..t_i].to_vec(),
    )
}

/// Haar factors for one window dimension, shared by every window of a series.
#[derive(Debug, Clone)]
pub struct WindowAnalyzer {
    cfg: WindowConfig,
    params: RingLawParams,
    unitaries: Vec<SquareComplexMatrix>,
}

impl WindowAnalyzer {
    /// Draws `L` Haar unitaries of dimension `n`, seeded from `seed`.
    pub fn new(n: usize, cfg: WindowConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let params = cfg.ring_params(n)?;
        let unitaries = (0..cfg.product_len as u64)
            .map(|i| haar_unitary(n, mix_seed(seed, i)))
            .collect::<Result<_>>()?;
        Ok(Self { cfg, params, unitaries })
    }

    pub fn params(&self) -> RingLawParams {
        self.params
    }

    pub fn config(&self) -> WindowConfig {
        self.cfg
    }

    fn check(&self, x: &RawMatrix) -> Result<()> {
        if x.nrows() != self.unitaries[0].dim() {
            return Err(Error::DimensionMismatch {
                context: "window rows vs analyzer dimension",
                expected: self.unitaries[0].dim(),
                found: x.nrows(),
            });
        }
        if x.ncols() != self.cfg.window {
            return Err(Error::DimensionMismatch {
                context: "window columns vs T",
                expected: self.cfg.window,
                found: x.ncols(),
            });
        }
        Ok(())
    }

    fn product(&self, x: &StandardMatrix) -> Result<SquareComplexMatrix> {
        let factors = self
            .unitaries
            .iter()
            .map(|u| singular_value_equivalent(x, u))
            .collect::<Result<Vec<_>>>()?;
        standardize_product(&matrix_product(&factors)?)
    }

    /// Standard matrix product `Z̃` of a raw window.
    pub fn standard_product(&self, x: &RawMatrix) -> Result<SquareComplexMatrix> {
        self.check(x)?;
        self.product(&standardize_rows(x))
    }

    /// Ring spectrum only; this is what series analysis needs per window.
    pub fn ring(&self, x: &RawMatrix) -> Result<RingSpectrum> {
        let z = self.standard_product(x)?;
        RingSpectrum::new(z.eigenvalues()?, self.params)
    }

    /// Ring spectrum plus the covariance spectrum with its KDE and M-P
    /// reference (`d = 1`).
    pub fn analyze(&self, x: &RawMatrix) -> Result<(RingSpectrum, CovarianceSpectrum)> {
        let z = self.standard_product(x)?;
        let ring = RingSpectrum::new(z.eigenvalues()?, self.params)?;
        let s = sample_covariance(&z)?;
        let mp = MpLawParams::new(self.params.c(), 1.0)?;
        let cov = CovarianceSpectrum::new(s.eigenvalues(), mp, Grid::default(), Bandwidth::Silverman)?;
        Ok((ring, cov))
    }
}

/// Runs the full chain (steps 1–6) on one raw window.
pub fn analyze_window(x: &RawMatrix, cfg: &WindowConfig, seed: u64) -> Result<(RingSpectrum, CovarianceSpectrum)> {
    WindowAnalyzer::new(x.nrows(), *cfg, seed)?.analyze(x)
}

/// Which matrix a series was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceKind {
    StatusOnly,
    Augmented(String),
}

impl SourceKind {
    pub fn label(&self) -> &str {
        match self {
            SourceKind::StatusOnly => "status",
            SourceKind::Augmented(name) => name,
        }
    }
}

/// MSR/VSR at every analyzable sampling time.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub times: Vec<usize>,
    pub msr: Vec<f64>,
    pub vsr: Vec<f64>,
    pub inner_radius: f64,
    pub theoretical_msr: f64,
    pub params: RingLawParams,
    pub window: usize,
    pub source: SourceKind,
}

impl IndicatorSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn msr_at(&self, time: usize) -> Option<f64> {
        self.times.iter().position(|t| *t == time).map(|i| self.msr[i])
    }
}

fn series_of(
    values: &DMatrix<f64>,
    labels: &[String],
    times: &[usize],
    cfg: &WindowConfig,
    seed: u64,
    source: SourceKind,
) -> Result<IndicatorSeries> {
    cfg.validate()?;
    let total = values.ncols();
    if total < cfg.window {
        return Err(Error::InsufficientHistory {
            time: total,
            window: cfg.window,
        });
    }
    let analyzer = WindowAnalyzer::new(values.nrows(), *cfg, seed)?;
    let count = total - cfg.window + 1;
    let mut out_times = Vec::with_capacity(count);
    let mut msr = Vec::with_capacity(count);
    let mut vsr = Vec::with_capacity(count);
    for t_i in cfg.window..=total {
        let x = window_of(values, labels, times, t_i, cfg.window)?;
        let ring = analyzer.ring(&x)?;
        out_times.push(times[t_i - 1]);
        msr.push(ring.msr);
        vsr.push(ring.vsr);
    }
    let params = analyzer.params();
    Ok(IndicatorSeries {
        times: out_times,
        msr,
        vsr,
        inner_radius: ring_radii(params).0,
        theoretical_msr: theoretical_msr(params),
        params,
        window: cfg.window,
        source,
    })
}

/// MSR/VSR of the status matrix at every time from `T` to the last sample.
pub fn run_series(omega: &DataSource, cfg: &WindowConfig, seed: u64) -> Result<IndicatorSeries> {
    series_of(
        omega.values(),
        omega.variables(),
        omega.times(),
        cfg,
        seed,
        SourceKind::StatusOnly,
    )
}

/// A detected excursion of the MSR below the inner radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalEvent {
    pub area_start: usize,
    pub area_end: usize,
    pub onset: usize,
    pub inferred_duration: usize,
}

impl SignalEvent {
    fn from_positions(series: &IndicatorSeries, first: usize, last: usize) -> Self {
        let len = last - first + 1;
        Self {
            area_start: series.times[first],
            area_end: series.times[last],
            onset: series.times[first],
            inferred_duration: len.saturating_sub(series.window),
        }
    }

    pub fn len(&self) -> usize {
        self.area_end - self.area_start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, time: usize) -> bool {
        self.area_start <= time && time <= self.area_end
    }
}

/// Consecutive-sample counts that open and close a signal area.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hysteresis {
    pub open: usize,
    pub close: usize,
}

impl Default for Hysteresis {
    fn default() -> Self {
        Self { open: 3, close: 3 }
    }
}

/// Signal areas with the default hysteresis (3 samples in, 3 samples out).
pub fn detect_signal_areas(series: &IndicatorSeries) -> Vec<SignalEvent> {
    detect_signal_areas_with(series, Hysteresis::default())
}

/// Maximal runs with MSR strictly below the inner radius.
///
/// An area opens once `open` consecutive samples are below the radius and
/// starts at the first of them. It closes once `close` consecutive samples
/// are back inside the ring and ends at the last sample below. Shorter
/// re-entries are absorbed into the area.
pub fn detect_signal_areas_with(series: &IndicatorSeries, h: Hysteresis) -> Vec<SignalEvent> {
    below_runs(&series.msr, series.inner_radius, h)
        .into_iter()
        .map(|(a, b)| SignalEvent::from_positions(series, a, b))
        .collect()
}

fn below_runs(msr: &[f64], threshold: f64, h: Hysteresis) -> Vec<(usize, usize)> {
    let open = h.open.max(1);
    let close = h.close.max(1);
    let mut out = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut below_run = 0usize;
    let mut above_run = 0usize;
    for (i, m) in msr.iter().enumerate() {
        let below = *m < threshold;
        match current.as_mut() {
            None => {
                if below {
                    below_run += 1;
                    if below_run >= open {
                        current = Some((i + 1 - below_run, i));
                        below_run = 0;
                    }
                } else {
                    below_run = 0;
                }
            }
            Some((_, last)) => {
                if below {
                    *last = i;
                    above_run = 0;
                } else {
                    above_run += 1;
                    if above_run >= close {
                        out.extend(current.take());
                        above_run = 0;
                    }
                }
            }
        }
    }
    out.extend(current);
    out
}

/// How one factor relates to one status signal area.
#[derive(Debug, Clone, PartialEq)]
pub struct EventAttribution {
    pub event: SignalEvent,
    /// Lowest augmented MSR inside the area.
    pub min_msr: f64,
    pub correlated: bool,
}

/// Whether a factor explains the detected signal areas.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorVerdict {
    pub factor: String,
    pub correlated: bool,
    /// Augmented inner radius minus the lowest augmented MSR inside any area;
    /// `None` when no area was detected.
    pub msr_drop: Option<f64>,
    pub inner_radius: f64,
    pub events: Vec<EventAttribution>,
    /// Excursions of the augmented series below its inner radius, clipped to
    /// the status signal areas.
    pub factor_areas: Vec<SignalEvent>,
}

/// Augments the status matrix with `spec`, runs the series and judges the
/// factor against `status_events`.
///
/// The Haar factors use `seed` directly; the factor's noise matrix uses a
/// seed derived from `seed` and the factor name, so a factor gets the same
/// noise regardless of which other factors are analysed with it.
pub fn correlate_factor(
    status: &DataSource,
    status_events: &[SignalEvent],
    spec: &FactorSpec,
    cfg: &WindowConfig,
    seed: u64,
) -> Result<(IndicatorSeries, FactorVerdict)> {
    let mut series = run_series(&augmented_source(status, spec, seed)?, cfg, seed)?;
    series.source = SourceKind::Augmented(spec.name.clone());
    let verdict = judge(&series, status_events, &spec.name);
    Ok((series, verdict))
}

/// Status rows stacked over the factor matrix for `spec`, as a data source
/// on the same time axis. Factor rows are labelled `name#1 … name#k`.
pub fn augmented_source(status: &DataSource, spec: &FactorSpec, seed: u64) -> Result<DataSource> {
    let frame = augment(status.values(), spec, factor_noise_seed(seed, &spec.name))?;
    let mut labels = status.variables().to_vec();
    labels.extend((0..spec.replicas).map(|i| alloc::format!("{}#{}", spec.name, i + 1)));
    DataSource::new(labels, status.times().to_vec(), frame.into_stacked(), Vec::new())
}

fn judge(series: &IndicatorSeries, status_events: &[SignalEvent], name: &str) -> FactorVerdict {
    let inner = series.inner_radius;
    let mut events = Vec::with_capacity(status_events.len());
    for ev in status_events {
        let min = series
            .times
            .iter()
            .zip(&series.msr)
            .filter(|(t, _)| ev.contains(**t))
            .map(|(_, m)| *m)
            .fold(f64::INFINITY, f64::min);
        if min.is_finite() {
            events.push(EventAttribution {
                event: *ev,
                min_msr: min,
                correlated: min < inner,
            });
        }
    }
    let lowest = events.iter().map(|e| e.min_msr).fold(f64::INFINITY, f64::min);
    let msr_drop = lowest.is_finite().then_some(inner - lowest);

    let mut factor_areas = Vec::new();
    for area in detect_signal_areas(series) {
        for ev in status_events {
            let start = area.area_start.max(ev.area_start);
            let end = area.area_end.min(ev.area_end);
            if start <= end {
                factor_areas.push(SignalEvent {
                    area_start: start,
                    area_end: end,
                    onset: start,
                    inferred_duration: (end - start + 1).saturating_sub(series.window),
                });
            }
        }
    }

    FactorVerdict {
        factor: String::from(name),
        correlated: events.iter().any(|e| e.correlated),
        msr_drop,
        inner_radius: inner,
        events,
        factor_areas,
    }
}

/// Status series, its signal areas, and one augmented series and verdict per
/// factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub status: IndicatorSeries,
    pub events: Vec<SignalEvent>,
    pub factors: Vec<(IndicatorSeries, FactorVerdict)>,
}

impl CorrelationReport {
    pub fn verdict(&self, factor: &str) -> Option<&FactorVerdict> {
        self.factors.iter().map(|(_, v)| v).find(|v| v.factor == factor)
    }

    pub fn series(&self, factor: &str) -> Option<&IndicatorSeries> {
        self.factors.iter().find(|(_, v)| v.factor == factor).map(|(s, _)| s)
    }
}

/// The whole correlation procedure: detect on the status matrix, then
/// augment and judge each factor in turn.
pub fn correlation_analysis(
    source: &DataSource,
    factors: &[FactorSpec],
    cfg: &WindowConfig,
    seed: u64,
) -> Result<CorrelationReport> {
    let status = run_series(source, cfg, seed)?;
    let events = detect_signal_areas(&status);
    let factors = factors
        .iter()
        .map(|spec| correlate_factor(source, &events, spec, cfg, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        status,
        events,
        factors,
    })
}

/// SplitMix64 finalizer over `seed ^ salt`.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a named stream (FNV-1a of the name mixed into `seed`).
pub fn factor_noise_seed(seed: u64, name: &str) -> u64 {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    mix_seed(seed, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn source(rows: &[&[f64]]) -> DataSource {
        let t = rows[0].len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        DataSource::new(
            (0..rows.len()).map(|i| alloc::format!("v{i}")).collect(),
            (1..=t).collect(),
            DMatrix::from_row_slice(rows.len(), t, &flat),
            vec![],
        )
        .unwrap()
    }

    fn fake_series(msr: Vec<f64>, inner: f64, window: usize, first_time: usize) -> IndicatorSeries {
        let n = msr.len();
        IndicatorSeries {
            times: (first_time..first_time + n).collect(),
            vsr: vec![0.0; n],
            msr,
            inner_radius: inner,
            theoretical_msr: 0.86,
            params: RingLawParams::new(0.5, 1).unwrap(),
            window,
            source: SourceKind::StatusOnly,
        }
    }

    #[test]
    fn first_and_trailing_windows() {
        let src = source(&[&[10.0, 20.0, 30.0, 40.0, 50.0], &[1.0, 2.0, 3.0, 4.0, 6.0]]);
        let cfg = WindowConfig::new(3, 1).unwrap();
        let w = real_time_window(&src, 3, &cfg).unwrap();
        assert_eq!(
            w.values().row(0).iter().copied().collect::<Vec<_>>(),
            vec![10.0, 20.0, 30.0]
        );
        assert_eq!(w.time_labels(), &[1, 2, 3]);
        let w = real_time_window(&src, 5, &cfg).unwrap();
        assert_eq!(
            w.values().row(0).iter().copied().collect::<Vec<_>>(),
            vec![30.0, 40.0, 50.0]
        );
        assert_eq!(
            real_time_window(&src, 2, &cfg),
            Err(Error::InsufficientHistory { time: 2, window: 3 })
        );
    }

    #[test]
    fn data_source_validation() {
        let m = DMatrix::from_element(2, 3, 1.0);
        assert!(DataSource::new(vec!["a".into(), "b".into()], vec![1, 3, 2], m.clone(), vec![]).is_err());
        assert!(DataSource::new(vec!["a".into(), "b".into()], vec![1, 2, 2], m.clone(), vec![]).is_err());
        assert!(DataSource::new(vec!["a".into()], vec![1, 2, 3], m.clone(), vec![]).is_err());
        let f = FactorSeries {
            name: "f".into(),
            values: vec![1.0, 2.0],
        };
        assert!(DataSource::new(vec!["a".into(), "b".into()], vec![1, 2, 3], m, vec![f]).is_err());
    }

    #[test]
    fn hysteresis_opens_and_closes_on_three_samples() {
        let inner = 0.7;
        let mut msr = vec![0.86; 10];
        msr.extend([0.69, 0.6, 0.6, 0.75, 0.6, 0.6]);
        msr.extend([0.86; 5]);
        let s = fake_series(msr, inner, 4, 100);
        let ev = detect_signal_areas(&s);
        assert_eq!(ev.len(), 1);
        assert_eq!((ev[0].area_start, ev[0].area_end), (110, 115));
        assert_eq!(ev[0].onset, 110);
        assert_eq!(ev[0].inferred_duration, 2);
    }

    #[test]
    fn short_flickers_are_ignored() {
        let mut msr = vec![0.86; 5];
        msr.extend([0.5, 0.5]);
        msr.extend([0.86; 5]);
        let s = fake_series(msr, 0.7, 3, 1);
        assert!(detect_signal_areas(&s).is_empty());
        let flat = fake_series(vec![0.86; 20], 0.7, 3, 1);
        assert!(detect_signal_areas(&flat).is_empty());
    }

    #[test]
    fn open_area_at_series_end_is_reported() {
        let mut msr = vec![0.86; 5];
        msr.extend([0.5; 4]);
        let s = fake_series(msr, 0.7, 2, 10);
        let ev = detect_signal_areas(&s);
        assert_eq!((ev[0].area_start, ev[0].area_end, ev[0].inferred_duration), (15, 18, 2));
    }

    #[test]
    fn duration_floors_at_zero() {
        let mut msr = vec![0.86; 3];
        msr.extend([0.5; 4]);
        msr.extend([0.86; 3]);
        let ev = detect_signal_areas(&fake_series(msr, 0.7, 10, 1));
        assert_eq!(ev[0].inferred_duration, 0);
    }

    #[test]
    fn judge_clips_factor_areas_to_status_events() {
        let mut msr = vec![0.7; 10];
        msr.extend([0.3; 10]);
        msr.extend([0.7; 10]);
        let s = fake_series(msr, 0.5, 5, 1);
        let status = [SignalEvent {
            area_start: 15,
            area_end: 25,
            onset: 15,
            inferred_duration: 6,
        }];
        let v = judge(&s, &status, "f");
        assert!(v.correlated);
        assert!((v.msr_drop.unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(v.factor_areas.len(), 1);
        assert_eq!((v.factor_areas[0].area_start, v.factor_areas[0].area_end), (15, 20));
        let none = judge(&s, &[], "f");
        assert!(!none.correlated && none.msr_drop.is_none() && none.factor_areas.is_empty());
    }

    #[test]
    fn seeds_are_name_dependent() {
        assert_eq!(factor_noise_seed(1, "bus117"), factor_noise_seed(1, "bus117"));
        assert_ne!(factor_noise_seed(1, "bus117"), factor_noise_seed(1, "bus54"));
        assert_ne!(mix_seed(1, 0), mix_seed(2, 0));
    }
}
