//! Run configuration: an optional JSON file merged with command-line flags,
//! flags winning field by field.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thermo25d::{RadialSampling, SinkMode};

/// Sanity band for the coagulation threshold, degC.
pub const THRESHOLD_BAND_C: (f64, f64) = (30.0, 100.0);

pub const DEFAULT_ORIENTATIONS: usize = 8;
pub const DEFAULT_PERIOD_S: f64 = 6.0;
pub const DEFAULT_PAUSE_S: f64 = 0.1;
pub const DEFAULT_SWEEPS: usize = 2;
pub const DEFAULT_THRESHOLD_C: f64 = 57.0;
pub const DEFAULT_REFS_PER_ORIENTATION: usize = 10;
pub const DEFAULT_SOFT_WEIGHT: f64 = 0.5;
pub const DEFAULT_BENCH_REPS: usize = 100;

/// How the reconstruction treats heat-sink voxels; `soft` keeps them at the
/// configured fractional weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SinkModeArg {
    Hard,
    Soft,
    Off,
}

impl SinkModeArg {
    pub fn to_mode(self, soft_weight: f64) -> SinkMode {
        match self {
            SinkModeArg::Hard => SinkMode::Hard,
            SinkModeArg::Soft => SinkMode::Soft(soft_weight),
            SinkModeArg::Off => SinkMode::Off,
        }
    }
}

/// How partner images are read along the radial axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialArg {
    Nearest,
    Linear,
}

impl From<RadialArg> for RadialSampling {
    fn from(a: RadialArg) -> Self {
        match a {
            RadialArg::Nearest => RadialSampling::Nearest,
            RadialArg::Linear => RadialSampling::Linear,
        }
    }
}

/// The JSON run configuration. Every field is optional; command-line flags
/// override, and built-in defaults fill whatever remains.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Phantom description file for `simulate`.
    pub phantom: Option<PathBuf>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Overrides the phantom's own RNG seed.
    pub seed: Option<u64>,
    /// Number of slice planes; must be a power of two.
    pub orientations: Option<usize>,
    pub period_s: Option<f64>,
    pub pause_s: Option<f64>,
    pub sweeps: Option<usize>,
    pub threshold_c: Option<f64>,
    pub refs_per_orientation: Option<usize>,
    pub heat_sink_mode: Option<SinkModeArg>,
    pub radial_sampling: Option<RadialArg>,
    /// Validity kept by masked columns in `soft` mode, in (0, 1).
    pub soft_weight: Option<f64>,
    pub emit_intermediate: Option<bool>,
    /// Rayon worker threads; defaults to the rayon heuristic.
    pub threads: Option<usize>,
    /// Benchmark repetitions.
    pub reps: Option<usize>,
}

impl RunConfig {
    /// Load a config file, or an all-default config when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("bad config {}", p.display()))
            }
        }
    }
}

/// Check a resolved coagulation threshold against the sanity band.
pub fn validate_threshold(threshold_c: f64) -> Result<f64> {
    let (lo, hi) = THRESHOLD_BAND_C;
    if !(threshold_c >= lo && threshold_c <= hi) {
        return Err(anyhow!(
            "coagulation threshold {threshold_c} degC outside the [{lo}, {hi}] sanity band"
        ));
    }
    Ok(threshold_c)
}

/// Resolve the engine options shared by `reconstruct` and the map export.
pub fn resolve_sink(flag_mode: Option<SinkModeArg>, config: &RunConfig) -> Result<SinkMode> {
    let mode = flag_mode
        .or(config.heat_sink_mode)
        .unwrap_or(SinkModeArg::Off);
    let weight = config.soft_weight.unwrap_or(DEFAULT_SOFT_WEIGHT);
    let sink = mode.to_mode(weight);
    sink.validate()?;
    Ok(sink)
}

/// Install the global rayon pool when the config pins a thread count. Must
/// run before any parallel work.
pub fn apply_threads(config: &RunConfig) -> Result<()> {
    if let Some(n) = config.threads {
        if n == 0 {
            return Err(anyhow!("threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot install the requested thread pool")?;
    }
    Ok(())
}
