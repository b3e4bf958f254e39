//! `bench`: time the pipeline's hot operations on a large standard scenario,
//! single- and multi-threaded, and print the report next to the documented
//! reference figures.

use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use thermo25d::eval::{
    benchmark, with_thread_pool, BenchOp, BenchReport, BenchScenario, LatencyStats, MachineInfo,
};

use crate::config::{RunConfig, DEFAULT_BENCH_REPS, DEFAULT_ORIENTATIONS};
use crate::CliError;

/// The standard benchmark volume.
pub const BENCH_DIMS: (usize, usize, usize) = (256, 256, 64);

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Run configuration JSON; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for bench_report.json (omit to only print).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Scenario RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Repetitions per operation.
    #[arg(long)]
    pub reps: Option<usize>,
}

struct Plan {
    seed: u64,
    reps: usize,
    orientations: usize,
    pool_widths: Vec<usize>,
    out: Option<PathBuf>,
}

fn plan(args: &BenchArgs) -> Result<Plan> {
    let config = RunConfig::load(args.config.as_deref())?;
    let reps = args.reps.or(config.reps).unwrap_or(DEFAULT_BENCH_REPS);
    if reps == 0 {
        return Err(anyhow!("reps must be at least 1"));
    }
    let wide = match config.threads {
        Some(0) => return Err(anyhow!("threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let mut pool_widths = vec![1];
    if wide > 1 {
        pool_widths.push(wide);
    }
    Ok(Plan {
        seed: args.seed.or(config.seed).unwrap_or(42),
        reps,
        orientations: config.orientations.unwrap_or(DEFAULT_ORIENTATIONS),
        pool_widths,
        out: args.out.clone().or(config.out),
    })
}

fn execute(p: Plan) -> Result<()> {
    let mut results: Vec<LatencyStats> = Vec::new();
    for &threads in &p.pool_widths {
        let seed = p.seed;
        let orientations = p.orientations;
        let reps = p.reps;
        let batch = with_thread_pool(threads, move || -> thermo25d::Result<Vec<LatencyStats>> {
            let mut scenario = BenchScenario::standard(BENCH_DIMS, orientations, seed)?;
            BenchOp::ALL
                .iter()
                .map(|&op| benchmark(&mut scenario, op, reps))
                .collect()
        })??;
        results.extend(batch);
    }

    let machine = MachineInfo::capture();
    println!(
        "volume {}x{}x{}, {} planes, {} reps, seed {}",
        BENCH_DIMS.0, BENCH_DIMS.1, BENCH_DIMS.2, p.orientations, p.reps, p.seed
    );
    println!(
        "machine: {} {}, {} cpus, {} build",
        machine.os, machine.arch, machine.logical_cpus, machine.build_profile
    );
    for stats in &results {
        let flag = if stats.single_shot {
            "  [single shot: spread undefined]"
        } else {
            ""
        };
        println!("{stats}{flag}");
    }
    println!(
        "documented reference figures: reconstruct 18.02ms \u{00b1} 5.91ms, \
         map-build 25.53ms \u{00b1} 3.33ms"
    );

    if let Some(dir) = &p.out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let report = BenchReport { machine, results };
        let path = dir.join("bench_report.json");
        thermo25d::io::atomic_write(&path, &serde_json::to_vec_pretty(&report)?)?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let plan = plan(&args).map_err(CliError::Config)?;
    execute(plan).map_err(CliError::Data)
}
