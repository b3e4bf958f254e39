//! `reconstruct`: verify a dataset's checksums, replay its live stream in
//! timestamp order through the engine, and write the resulting volumes.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use thermo25d::popmap::{build_population_map, rasterize_tubes, MapOptions};
use thermo25d::prfs::{average_references, build_slice_thermometry, ReferenceSet};
use thermo25d::reconstruct::coagulation_mask;
use thermo25d::{
    PhaseImage, RadialSampling, ReconstructionEngine, SinkMode, SliceShape, VolumeKind,
};

use crate::config::{self, validate_threshold, RadialArg, RunConfig, SinkModeArg};
use crate::manifest::{image_base, validate_base_name, FileRole, Manifest};
use crate::CliError;

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Dataset directory written by `simulate`.
    pub dataset: PathBuf,
    /// Run configuration JSON; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default: `<dataset>/recon`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Coagulation threshold, degC (default: the dataset's recorded value).
    #[arg(long)]
    pub threshold_c: Option<f64>,
    /// Heat-sink handling for masked columns.
    #[arg(long, value_enum)]
    pub heat_sink_mode: Option<SinkModeArg>,
    /// Radial read mode for partner images.
    #[arg(long, value_enum)]
    pub radial_sampling: Option<RadialArg>,
    /// Write one volume per replayed live image.
    #[arg(long)]
    pub emit_intermediate: bool,
}

struct Options {
    out: Option<PathBuf>,
    threshold_c: Option<f64>,
    sink: SinkMode,
    radial: RadialSampling,
    emit_intermediate: bool,
}

/// Everything written by one reconstruction, with its settings and
/// per-ingest timings (timings vary run to run; volumes do not).
#[derive(Debug, Serialize, Deserialize)]
pub struct ReconMeta {
    pub threshold_c: f64,
    pub heat_sink_mode: String,
    pub soft_weight: Option<f64>,
    pub radial_sampling: RadialSampling,
    pub threads: usize,
    pub images_replayed: usize,
    pub final_time_s: f64,
    pub ingest_reconstruct_ms: Vec<f64>,
    pub outputs: Vec<String>,
}

pub const RECON_META_NAME: &str = "recon_meta.json";

fn options(args: &ReconstructArgs) -> Result<Options> {
    let config = RunConfig::load(args.config.as_deref())?;
    config::apply_threads(&config)?;
    let threshold_c = match args.threshold_c.or(config.threshold_c) {
        Some(t) => Some(validate_threshold(t)?),
        None => None,
    };
    Ok(Options {
        out: args.out.clone().or_else(|| config.out.clone()),
        threshold_c,
        sink: config::resolve_sink(args.heat_sink_mode, &config)?,
        radial: args
            .radial_sampling
            .or(config.radial_sampling)
            .map_or(RadialSampling::Nearest, RadialSampling::from),
        emit_intermediate: args.emit_intermediate || config.emit_intermediate.unwrap_or(false),
    })
}

fn execute(args: &ReconstructArgs, opts: Options) -> Result<()> {
    let dataset = &args.dataset;
    let manifest = Manifest::load(dataset)?;
    for entry in &manifest.files {
        validate_base_name(&entry.pair.base)?;
    }
    manifest.verify(dataset)?;

    let threshold_c = match opts.threshold_c {
        Some(t) => t,
        None => validate_threshold(manifest.threshold_c)
            .context("the dataset's recorded threshold is out of range")?,
    };

    let g = manifest.phantom.geometry;
    let mut angles: Vec<f64> = Vec::new();
    for &a in &manifest.schedule.order_deg {
        if !angles.contains(&a) {
            angles.push(a);
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let set = thermo25d::OrientationSet::new(angles)?;
    let shape = SliceShape::for_geometry(&g);

    let t0_c = manifest.acquisition.t0_c;
    let references = build_references(&manifest, dataset, t0_c)?;

    let heat_sink = match opts.sink {
        SinkMode::Off => None,
        _ => Some(rasterize_tubes(&g, &manifest.phantom.tubes)?),
    };
    let map_options = MapOptions {
        radial: opts.radial,
        sink: opts.sink,
    };
    let map = build_population_map(&g, &set, heat_sink.as_ref(), shape, map_options)?;
    let mut engine = ReconstructionEngine::new(map, heat_sink, t0_c)?;

    let out = opts.out.clone().unwrap_or_else(|| dataset.join("recon"));
    std::fs::create_dir_all(&out)
        .with_context(|| format!("cannot create output directory {}", out.display()))?;

    // Replay the live stream in completion order.
    let mut live: Vec<_> = manifest
        .files
        .iter()
        .filter(|e| e.role == FileRole::Live)
        .collect();
    live.sort_by(|a, b| a.timestamp_s.partial_cmp(&b.timestamp_s).unwrap());
    if live.is_empty() {
        return Err(anyhow!(
            "the dataset holds no live images to reconstruct from"
        ));
    }

    let mut timings_ms = Vec::with_capacity(live.len());
    let mut outputs = Vec::new();
    let mut final_time_s = 0.0f64;
    for (seq, entry) in live.iter().enumerate() {
        let image = read_image(dataset, entry, t0_c)?;
        let reference = references
            .iter()
            .find(|r| r.orientation_deg == image.orientation_deg)
            .ok_or_else(|| {
                anyhow!(
                    "no reference images for the {} deg plane",
                    image.orientation_deg
                )
            })?;
        let slice = build_slice_thermometry(&image, reference)?;
        final_time_s = final_time_s.max(slice.timestamp_s);
        let started = Instant::now();
        engine.ingest(slice)?;
        let volume = engine.reconstruct_volume()?;
        timings_ms.push(started.elapsed().as_secs_f64() * 1e3);
        if opts.emit_intermediate {
            let base = format!("intermediate_{seq:04}.v25d");
            thermo25d::io::write_volume(&out.join(&base), &volume, VolumeKind::Temperature)?;
            outputs.push(base);
        }
    }

    let volume = engine.reconstruct_volume()?;
    let coagulation = coagulation_mask(&volume, threshold_c, engine.map())?;

    thermo25d::io::write_volume(
        &out.join("temperature.v25d"),
        &volume,
        VolumeKind::Temperature,
    )?;
    thermo25d::io::write_mask(&out.join("coagulation.v25d"), &coagulation.mask)?;
    thermo25d::io::write_mask(&out.join("validity.v25d"), &engine.map().validity_volume())?;
    thermo25d::io::write_volume(
        &out.join("popmap_w1.v25d"),
        &engine.map().weight_volume(),
        VolumeKind::Weight,
    )?;
    thermo25d::io::write_population_map(&out.join("population.pmap25d"), engine.map())?;
    for base in [
        "temperature.v25d",
        "coagulation.v25d",
        "validity.v25d",
        "popmap_w1.v25d",
        "population.pmap25d",
    ] {
        outputs.push(base.to_string());
    }

    let ages = serde_json::to_vec_pretty(&engine.orientation_ages())?;
    thermo25d::io::atomic_write(&out.join("ages.json"), &ages)?;
    outputs.push("ages.json".to_string());

    let meta = ReconMeta {
        threshold_c,
        heat_sink_mode: opts.sink.label().to_string(),
        soft_weight: opts.sink.soft_weight(),
        radial_sampling: opts.radial,
        threads: rayon::current_num_threads(),
        images_replayed: live.len(),
        final_time_s,
        ingest_reconstruct_ms: timings_ms,
        outputs,
    };
    thermo25d::io::atomic_write(
        &out.join(RECON_META_NAME),
        &serde_json::to_vec_pretty(&meta)?,
    )?;
    println!(
        "replayed {} live images; wrote volumes to {}",
        meta.images_replayed,
        out.display()
    );
    Ok(())
}

fn build_references(
    manifest: &Manifest,
    dataset: &std::path::Path,
    t0_c: f64,
) -> Result<Vec<ReferenceSet>> {
    let mut groups: Vec<(f64, Vec<PhaseImage>)> = Vec::new();
    for entry in manifest
        .files
        .iter()
        .filter(|e| e.role == FileRole::Reference)
    {
        let image = read_image(dataset, entry, t0_c)?;
        match groups.iter_mut().find(|(a, _)| *a == image.orientation_deg) {
            Some((_, imgs)) => imgs.push(image),
            None => groups.push((image.orientation_deg, vec![image])),
        }
    }
    groups
        .iter()
        .map(|(a, imgs)| {
            average_references(imgs)
                .with_context(|| format!("cannot average references for the {a} deg plane"))
        })
        .collect()
}

fn read_image(
    dataset: &std::path::Path,
    entry: &crate::manifest::FileEntry,
    t0_c: f64,
) -> Result<PhaseImage> {
    let image = thermo25d::io::read_phase_image(&image_base(dataset, entry), t0_c)?;
    if image.orientation_deg != entry.orientation_deg || image.timestamp_s != entry.timestamp_s {
        return Err(anyhow!(
            "{}: header disagrees with the manifest (plane {} deg at {} s vs {} deg at {} s)",
            entry.pair.base,
            image.orientation_deg,
            image.timestamp_s,
            entry.orientation_deg,
            entry.timestamp_s
        ));
    }
    Ok(image)
}

pub fn run(args: ReconstructArgs) -> Result<(), CliError> {
    let opts = options(&args).map_err(CliError::Config)?;
    execute(&args, opts).map_err(CliError::Data)
}
