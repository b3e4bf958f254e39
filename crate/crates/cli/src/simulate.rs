//! `simulate`: run the synthetic protocol and write a self-describing,
//! checksummed dataset ready for replay.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::Args;
use thermo25d::sim::{
    acquisition_schedule, coagulation_ground_truth, ground_truth_field, simulate_run, Schedule,
    SimEventKind,
};
use thermo25d::{AcquisitionParams, PhantomSpec, VolumeKind};

use crate::config::{
    self, validate_threshold, RunConfig, DEFAULT_ORIENTATIONS, DEFAULT_PAUSE_S, DEFAULT_PERIOD_S,
    DEFAULT_REFS_PER_ORIENTATION, DEFAULT_SWEEPS, DEFAULT_THRESHOLD_C,
};
use crate::manifest::{checksum_pair, FileEntry, FileRole, Manifest, ScheduleInfo, TruthInfo};
use crate::CliError;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Phantom description JSON; may also come from the config file.
    pub phantom: Option<PathBuf>,
    /// Run configuration JSON; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the phantom's RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of slice planes (power of two).
    #[arg(long)]
    pub orientations: Option<usize>,
    /// Per-image acquisition time, seconds.
    #[arg(long)]
    pub period_s: Option<f64>,
    /// Pause between images, seconds.
    #[arg(long)]
    pub pause_s: Option<f64>,
    /// Full sweeps of live images; 0 writes references only.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Coagulation threshold recorded for downstream steps, degC.
    #[arg(long)]
    pub threshold_c: Option<f64>,
}

struct Plan {
    phantom: PhantomSpec,
    out: PathBuf,
    schedule: Schedule,
    sweeps: usize,
    threshold_c: f64,
    refs_per_orientation: usize,
}

fn plan(args: &SimulateArgs) -> Result<Plan> {
    let config = RunConfig::load(args.config.as_deref())?;
    config::apply_threads(&config)?;

    let phantom_path = args
        .phantom
        .clone()
        .or_else(|| config.phantom.clone())
        .ok_or_else(|| anyhow!("no phantom file given (positional argument or config)"))?;
    let text = std::fs::read_to_string(&phantom_path)
        .with_context(|| format!("cannot read phantom {}", phantom_path.display()))?;
    let mut phantom: PhantomSpec = serde_json::from_str(&text)
        .with_context(|| format!("bad phantom {}", phantom_path.display()))?;
    if let Some(seed) = args.seed.or(config.seed) {
        phantom.seed = seed;
    }
    phantom.validate()?;

    let out = args
        .out
        .clone()
        .or_else(|| config.out.clone())
        .ok_or_else(|| anyhow!("no output directory given (--out or config)"))?;

    let orientations = args
        .orientations
        .or(config.orientations)
        .unwrap_or(DEFAULT_ORIENTATIONS);
    let period_s = args
        .period_s
        .or(config.period_s)
        .unwrap_or(DEFAULT_PERIOD_S);
    let pause_s = args.pause_s.or(config.pause_s).unwrap_or(DEFAULT_PAUSE_S);
    let schedule = acquisition_schedule(orientations, period_s, pause_s)?;
    let sweeps = args.sweeps.or(config.sweeps).unwrap_or(DEFAULT_SWEEPS);
    let threshold_c = validate_threshold(
        args.threshold_c
            .or(config.threshold_c)
            .unwrap_or(DEFAULT_THRESHOLD_C),
    )?;
    let refs_per_orientation = config
        .refs_per_orientation
        .unwrap_or(DEFAULT_REFS_PER_ORIENTATION);
    if refs_per_orientation == 0 {
        return Err(anyhow!("refs_per_orientation must be at least 1"));
    }
    Ok(Plan {
        phantom,
        out,
        schedule,
        sweeps,
        threshold_c,
        refs_per_orientation,
    })
}

fn execute(p: Plan) -> Result<()> {
    std::fs::create_dir_all(&p.out)
        .with_context(|| format!("cannot create output directory {}", p.out.display()))?;

    let params = AcquisitionParams {
        t0_c: p.phantom.t0_c,
        ..AcquisitionParams::default()
    };
    let events = simulate_run(
        &p.phantom,
        &p.schedule,
        &params,
        p.sweeps,
        p.refs_per_orientation,
    )?;

    let mut files = Vec::with_capacity(events.len());
    let mut ref_seq = 0usize;
    let mut live_seq = 0usize;
    let mut truth_time_s = 0.0f64;
    for event in &events {
        let (role, base) = match event.kind {
            SimEventKind::Reference => {
                let base = format!("ref_{ref_seq:04}.p25d");
                ref_seq += 1;
                (FileRole::Reference, base)
            }
            SimEventKind::Live => {
                let base = format!("live_{live_seq:04}.p25d");
                live_seq += 1;
                truth_time_s = truth_time_s.max(event.image.timestamp_s);
                (FileRole::Live, base)
            }
        };
        thermo25d::io::write_phase_image(&p.out.join(&base), &event.image)?;
        files.push(FileEntry {
            role,
            orientation_deg: event.image.orientation_deg,
            timestamp_s: event.image.timestamp_s,
            pair: checksum_pair(&p.out, &base)?,
        });
    }

    let truth = write_truth(&p, truth_time_s)?;
    let manifest = Manifest {
        phantom: p.phantom,
        acquisition: params,
        schedule: ScheduleInfo {
            order_deg: p.schedule.order_deg.clone(),
            period_s: p.schedule.period_s,
            pause_s: p.schedule.pause_s,
            sweeps: p.sweeps,
        },
        threshold_c: p.threshold_c,
        refs_per_orientation: p.refs_per_orientation,
        truth,
        files,
    };
    manifest.save(&p.out)?;
    println!(
        "wrote {} reference and {} live images to {}",
        ref_seq,
        live_seq,
        p.out.display()
    );
    Ok(())
}

fn write_truth(p: &Plan, time_s: f64) -> Result<TruthInfo> {
    let field = ground_truth_field(&p.phantom, time_s)?;
    let mask = coagulation_ground_truth(&p.phantom, time_s, p.threshold_c)?;
    write_truth_files(&p.out, &field, &mask, time_s)
}

fn write_truth_files(
    out: &Path,
    field: &thermo25d::ScalarVolume,
    mask: &thermo25d::MaskVolume,
    time_s: f64,
) -> Result<TruthInfo> {
    thermo25d::io::write_volume(
        &out.join("truth_temperature.v25d"),
        field,
        VolumeKind::Temperature,
    )?;
    thermo25d::io::write_mask(&out.join("truth_coagulation.v25d"), mask)?;
    Ok(TruthInfo {
        temperature: checksum_pair(out, "truth_temperature.v25d")?,
        coagulation: checksum_pair(out, "truth_coagulation.v25d")?,
        time_s,
    })
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let plan = plan(&args).map_err(CliError::Config)?;
    execute(plan).map_err(CliError::Data)
}
