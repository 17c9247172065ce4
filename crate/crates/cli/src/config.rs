//! Run configuration shared by the `analyze` and `correlate` subcommands.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use rmtcorr_core::augmented::DEFAULT_SNR;
use rmtcorr_core::pipeline::{WindowConfig, DEFAULT_SEED};

/// Inspection times used for scatter and KDE exports of case presets.
pub const PRESET_INSPECTION_TIMES: [usize; 2] = [500, 620];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    #[value(name = "msr_curve")]
    MsrCurve,
    #[value(name = "ring_scatter")]
    RingScatter,
    #[value(name = "kde_curve")]
    KdeCurve,
    #[value(name = "events")]
    Events,
    #[value(name = "verdicts")]
    Verdicts,
}

impl Emit {
    pub fn all() -> BTreeSet<Emit> {
        Emit::value_variants().iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    File(PathBuf),
    Preset(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: InputSource,
    pub window: usize,
    pub product_len: u32,
    pub replicas: Option<usize>,
    pub rho: f64,
    pub noise_level: Option<f64>,
    pub seed: u64,
    pub factors: Vec<String>,
    pub out_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
    pub at: Vec<usize>,
}

impl RunConfig {
    pub fn new(input: InputSource) -> Self {
        Self {
            input,
            window: WindowConfig::default().window,
            product_len: 1,
            replicas: None,
            rho: DEFAULT_SNR,
            noise_level: None,
            seed: DEFAULT_SEED,
            factors: Vec::new(),
            out_dir: PathBuf::from("."),
            emit: Emit::all(),
            at: Vec::new(),
        }
    }

    pub fn window_config(&self) -> WindowConfig {
        WindowConfig {
            window: self.window,
            product_len: self.product_len,
        }
    }

    /// Inspection times, defaulting to the preset ones for case inputs.
    pub fn inspection_times(&self) -> Vec<usize> {
        match (&self.input, self.at.is_empty()) {
            (InputSource::Preset(_), true) => PRESET_INSPECTION_TIMES.to_vec(),
            _ => self.at.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let InputSource::Preset(case) = self.input {
            if !(1..=4).contains(&case) {
                return Err(ConfigError::new("case", format!("unknown case {case}; expected 1-4")));
            }
        }
        if self.window < 2 {
            return Err(ConfigError::new("T", "window length must be at least 2"));
        }
        if self.product_len == 0 {
            return Err(ConfigError::new("L", "product length must be at least 1"));
        }
        if self.replicas == Some(0) {
            return Err(ConfigError::new("k", "replication count must be at least 1"));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(ConfigError::new("rho", "SNR must be positive and finite"));
        }
        if let Some(level) = self.noise_level {
            if !(level >= 0.0 && level.is_finite()) {
                return Err(ConfigError::new("noise-level", "must be finite and non-negative"));
            }
            if matches!(self.input, InputSource::File(_)) {
                return Err(ConfigError::new("noise-level", "only applies to --case inputs"));
            }
        }
        Ok(())
    }
}

/// A configuration value outside its allowed range, named by its flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: &'static str,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid --{}: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}
