//! `evaluate`: score reconstructions against their ground truth — singly or
//! as a batch — and report Dice, sensitivity, and temperature RMSE with 95%
//! confidence half-widths.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::Args;
use serde::Serialize;
use thermo25d::eval::{confusion, dice, sem95, sensitivity, temperature_rmse};
use thermo25d::VolumeKind;

use crate::config::{self, RunConfig};
use crate::manifest::{Manifest, MANIFEST_NAME};
use crate::reconstruct::{ReconMeta, RECON_META_NAME};
use crate::CliError;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Reconstruction directory, or a parent of per-run reconstruction dirs.
    pub recon: PathBuf,
    /// Dataset directory with ground truth, or a parent of dataset dirs.
    pub truth: PathBuf,
    /// Run configuration JSON; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write eval_report.json (default: the reconstruction dir).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct EvalPair {
    name: String,
    recon_dir: PathBuf,
    truth_dir: PathBuf,
}

/// One scored run.
#[derive(Debug, Serialize)]
struct RunRow {
    name: String,
    heat_sink: bool,
    dice: f64,
    sensitivity: f64,
    rmse_c: f64,
}

/// Mean with an optional 95% half-width (needs at least two samples).
#[derive(Debug, Serialize)]
struct MetricSummary {
    mean: f64,
    sem95: Option<f64>,
}

#[derive(Debug, Serialize)]
struct GroupRow {
    name: String,
    n: usize,
    dice: MetricSummary,
    sensitivity: MetricSummary,
    rmse_c: MetricSummary,
}

#[derive(Debug, Serialize)]
struct Sem95Block {
    dice: Option<f64>,
    sensitivity: Option<f64>,
    rmse_c: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TimingSummary {
    mean: f64,
    sem95: Option<f64>,
    n: usize,
}

#[derive(Debug, Serialize)]
struct Timings {
    #[serde(skip_serializing_if = "Option::is_none")]
    reconstruct_ms: Option<TimingSummary>,
}

/// The metrics report: overall means up front, then per-group and per-run
/// breakdowns.
#[derive(Debug, Serialize)]
struct Report {
    dice: f64,
    sensitivity: f64,
    rmse_c: f64,
    sem95: Sem95Block,
    n: usize,
    timings: Timings,
    groups: Vec<GroupRow>,
    runs: Vec<RunRow>,
}

/// A directory is a reconstruction dir when the main output is present.
fn is_recon_dir(dir: &Path) -> bool {
    dir.join("temperature.v25d.json").is_file()
}

fn locate_recon(candidate: &Path) -> Result<PathBuf> {
    if is_recon_dir(candidate) {
        return Ok(candidate.to_path_buf());
    }
    let nested = candidate.join("recon");
    if is_recon_dir(&nested) {
        return Ok(nested);
    }
    Err(anyhow!(
        "no reconstruction found at {} (or its recon/ subdirectory)",
        candidate.display()
    ))
}

fn resolve_pairs(recon_root: &Path, truth_root: &Path) -> Result<Vec<EvalPair>> {
    if truth_root.join(MANIFEST_NAME).is_file() {
        let name = truth_root
            .file_name()
            .map_or_else(|| "run".to_string(), |n| n.to_string_lossy().into_owned());
        return Ok(vec![EvalPair {
            name,
            recon_dir: locate_recon(recon_root)?,
            truth_dir: truth_root.to_path_buf(),
        }]);
    }
    let mut names: Vec<String> = std::fs::read_dir(truth_root)
        .with_context(|| format!("cannot list {}", truth_root.display()))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().join(MANIFEST_NAME).is_file())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(anyhow!("no phantoms under {}", truth_root.display()));
    }
    names
        .into_iter()
        .map(|name| {
            Ok(EvalPair {
                recon_dir: locate_recon(&recon_root.join(&name))?,
                truth_dir: truth_root.join(&name),
                name,
            })
        })
        .collect()
}

fn score(pair: &EvalPair) -> Result<(RunRow, Vec<f64>)> {
    let manifest = Manifest::load(&pair.truth_dir)?;
    manifest.verify_truth(&pair.truth_dir)?;
    let (truth_field, kind) =
        thermo25d::io::read_volume(&pair.truth_dir.join(&manifest.truth.temperature.base))?;
    if kind != VolumeKind::Temperature {
        return Err(anyhow!(
            "{}: not a temperature volume",
            manifest.truth.temperature.base
        ));
    }
    let truth_mask =
        thermo25d::io::read_mask(&pair.truth_dir.join(&manifest.truth.coagulation.base))?;

    let (recon_field, kind) = thermo25d::io::read_volume(&pair.recon_dir.join("temperature.v25d"))?;
    if kind != VolumeKind::Temperature {
        return Err(anyhow!(
            "{}: not a temperature volume",
            pair.recon_dir.display()
        ));
    }
    let recon_mask = thermo25d::io::read_mask(&pair.recon_dir.join("coagulation.v25d"))?;
    let validity = thermo25d::io::read_mask(&pair.recon_dir.join("validity.v25d"))?;

    let counts = confusion(&recon_mask, &truth_mask)
        .with_context(|| format!("run {}: prediction and truth differ in geometry", pair.name))?;
    let row = RunRow {
        name: pair.name.clone(),
        heat_sink: !manifest.phantom.tubes.is_empty(),
        dice: dice(&counts),
        sensitivity: sensitivity(&counts)?,
        rmse_c: temperature_rmse(&recon_field, &truth_field, &validity)?,
    };

    let meta_path = pair.recon_dir.join(RECON_META_NAME);
    let times = match std::fs::read_to_string(&meta_path) {
        Ok(text) => {
            let meta: ReconMeta = serde_json::from_str(&text)
                .with_context(|| format!("bad {}", meta_path.display()))?;
            meta.ingest_reconstruct_ms
        }
        Err(_) => Vec::new(),
    };
    Ok((row, times))
}

fn summarize(values: &[f64]) -> MetricSummary {
    match sem95(values) {
        Ok(stat) => MetricSummary {
            mean: stat.mean,
            sem95: Some(stat.sem95),
        },
        Err(_) => MetricSummary {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            sem95: None,
        },
    }
}

fn group_row(name: &str, rows: &[&RunRow]) -> GroupRow {
    let pick = |f: fn(&RunRow) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
    GroupRow {
        name: name.to_string(),
        n: rows.len(),
        dice: summarize(&pick(|r| r.dice)),
        sensitivity: summarize(&pick(|r| r.sensitivity)),
        rmse_c: summarize(&pick(|r| r.rmse_c)),
    }
}

fn format_summary(s: &MetricSummary) -> String {
    match s.sem95 {
        Some(w) => format!("{:.4} \u{00b1} {:.4}", s.mean, w),
        None => format!("{:.4}", s.mean),
    }
}

fn execute(args: &EvaluateArgs) -> Result<()> {
    let pairs = resolve_pairs(&args.recon, &args.truth)?;
    let mut runs = Vec::new();
    let mut all_times = Vec::new();
    for pair in &pairs {
        let (row, times) = score(pair)?;
        runs.push(row);
        all_times.extend(times);
    }

    let refs: Vec<&RunRow> = runs.iter().collect();
    let hs: Vec<&RunRow> = runs.iter().filter(|r| r.heat_sink).collect();
    let no_hs: Vec<&RunRow> = runs.iter().filter(|r| !r.heat_sink).collect();
    let mut groups = vec![group_row("overall", &refs)];
    if !hs.is_empty() {
        groups.push(group_row("heat-sink", &hs));
    }
    if !no_hs.is_empty() {
        groups.push(group_row("no-heat-sink", &no_hs));
    }

    let overall = &groups[0];
    let timings = Timings {
        reconstruct_ms: if all_times.is_empty() {
            None
        } else {
            let s = summarize(&all_times);
            Some(TimingSummary {
                mean: s.mean,
                sem95: s.sem95,
                n: all_times.len(),
            })
        },
    };
    let report = Report {
        dice: overall.dice.mean,
        sensitivity: overall.sensitivity.mean,
        rmse_c: overall.rmse_c.mean,
        sem95: Sem95Block {
            dice: overall.dice.sem95,
            sensitivity: overall.sensitivity.sem95,
            rmse_c: overall.rmse_c.sem95,
        },
        n: runs.len(),
        timings,
        groups,
        runs,
    };

    println!(
        "{:<24} {:>9} {:>12} {:>12} {:>10}",
        "run", "heat sink", "dice", "sensitivity", "rmse_c"
    );
    for r in &report.runs {
        println!(
            "{:<24} {:>9} {:>12.4} {:>12.4} {:>10.3}",
            r.name,
            if r.heat_sink { "yes" } else { "no" },
            r.dice,
            r.sensitivity,
            r.rmse_c
        );
    }
    println!();
    println!(
        "{:<24} {:>3} {:>19} {:>19} {:>17}",
        "group", "n", "dice", "sensitivity", "rmse_c"
    );
    for gr in &report.groups {
        println!(
            "{:<24} {:>3} {:>19} {:>19} {:>17}",
            gr.name,
            gr.n,
            format_summary(&gr.dice),
            format_summary(&gr.sensitivity),
            format_summary(&gr.rmse_c)
        );
    }
    if let Some(t) = &report.timings.reconstruct_ms {
        let width = t
            .sem95
            .map_or(String::new(), |w| format!(" \u{00b1} {w:.2}"));
        println!(
            "\nper-ingest reconstruction: {:.2}{width} ms over {} updates",
            t.mean, t.n
        );
    }

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| report_default_dir(&args.recon));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let path = out_dir.join("eval_report.json");
    thermo25d::io::atomic_write(&path, &serde_json::to_vec_pretty(&report)?)?;
    println!("report written to {}", path.display());
    Ok(())
}

fn report_default_dir(recon_root: &Path) -> PathBuf {
    recon_root.to_path_buf()
}

pub fn run(args: EvaluateArgs) -> Result<(), CliError> {
    let config = RunConfig::load(args.config.as_deref()).map_err(CliError::Config)?;
    config::apply_threads(&config).map_err(CliError::Config)?;
    execute(&args).map_err(CliError::Data)
}
