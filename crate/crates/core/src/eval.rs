//! Evaluation toolbox: overlap metrics between coagulation masks,
//! temperature error, confidence-interval statistics, and a wall-clock
//! latency harness for the expensive pipeline stages.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::VolumeGeometry;
use crate::image::SliceShape;
use crate::popmap::{build_population_map, rasterize_tubes, MapOptions, OrientationSet};
use crate::prfs::SliceThermometry;
use crate::reconstruct::ReconstructionEngine;
use crate::sim::{GroundTruthSampler, HeatSourceKind, HeatSourceModel, PhantomSpec, TubeSpec};
use crate::volume::{MaskVolume, ScalarVolume};

/// Voxelwise agreement counts between a predicted and a reference mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub r#fn: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.r#fn + self.tn
    }
}

/// Count voxelwise agreement between two masks of identical geometry.
pub fn confusion(pred: &MaskVolume, truth: &MaskVolume) -> Result<ConfusionCounts> {
    if pred.geometry != truth.geometry {
        return Err(Error::GeometryMismatch(
            "confusion counts need identical mask geometries".into(),
        ));
    }
    let mut c = ConfusionCounts {
        tp: 0,
        fp: 0,
        r#fn: 0,
        tn: 0,
    };
    for (p, t) in pred.values.iter().zip(&truth.values) {
        match (p, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.r#fn += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Dice similarity coefficient, 2·tp / (2·tp + fp + fn). Two empty masks
/// count as perfect (degenerate) agreement, with a warning.
pub fn dice(c: &ConfusionCounts) -> f64 {
    let denom = 2 * c.tp + c.fp + c.r#fn;
    if denom == 0 {
        log::warn!("dice of two empty masks: reporting degenerate agreement of 1");
        return 1.0;
    }
    2.0 * c.tp as f64 / denom as f64
}

/// Fraction of the reference mask that was detected, tp / (tp + fn).
pub fn sensitivity(c: &ConfusionCounts) -> Result<f64> {
    if c.tp + c.r#fn == 0 {
        return Err(Error::EmptyTruth);
    }
    Ok(c.tp as f64 / (c.tp + c.r#fn) as f64)
}

/// Mean with a 95% confidence half-width from the standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStat {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub sigma: f64,
    /// 1.96 · sigma / sqrt(n).
    pub sem95: f64,
    pub n: usize,
}

/// Summarize samples as mean ± 1.96·SEM; needs at least two samples.
pub fn sem95(samples: &[f64]) -> Result<SummaryStat> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::NotEnoughSamples(n));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let ss = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    let sigma = (ss / (n - 1) as f64).sqrt();
    let sem95 = sigma / (n as f64).sqrt() * 1.96;
    Ok(SummaryStat {
        mean,
        sigma,
        sem95,
        n,
    })
}

/// Root mean square temperature error over the populated voxels only.
pub fn temperature_rmse(
    recon: &ScalarVolume,
    truth: &ScalarVolume,
    validity: &MaskVolume,
) -> Result<f64> {
    if recon.geometry != truth.geometry || recon.geometry != validity.geometry {
        return Err(Error::GeometryMismatch(
            "rmse needs recon, truth, and validity on one geometry".into(),
        ));
    }
    let mut sum = 0.0f64;
    let mut n = 0u64;
    for i in 0..recon.values.len() {
        if validity.values[i] {
            let d = recon.values[i] as f64 - truth.values[i] as f64;
            sum += d * d;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::NotEnoughSamples(0));
    }
    Ok((sum / n as f64).sqrt())
}

// ---------------------------------------------------------------------------
// Latency harness.
// ---------------------------------------------------------------------------

/// The timeable pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    /// Build the per-voxel interpolation map from scratch.
    MapBuild,
    /// Rasterize the cooling tubes into the heat-sink voxel mask.
    SinkMask,
    /// Ingest one fresh slice and rebuild the full volume.
    Reconstruct,
}

impl BenchOp {
    pub const ALL: [BenchOp; 3] = [BenchOp::MapBuild, BenchOp::SinkMask, BenchOp::Reconstruct];

    pub fn name(&self) -> &'static str {
        match self {
            BenchOp::MapBuild => "map-build",
            BenchOp::SinkMask => "sink-mask",
            BenchOp::Reconstruct => "reconstruct",
        }
    }
}

impl FromStr for BenchOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "map-build" => Ok(BenchOp::MapBuild),
            "sink-mask" => Ok(BenchOp::SinkMask),
            "reconstruct" => Ok(BenchOp::Reconstruct),
            other => Err(Error::InvalidParameter(format!(
                "unknown benchmark operation '{other}' (expected map-build, sink-mask, or reconstruct)"
            ))),
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Wall-clock summary of repeated runs of one operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub op: BenchOp,
    pub reps: usize,
    /// Rayon worker threads active during the runs.
    pub threads: usize,
    pub mean_ms: f64,
    /// Sample standard deviation; 0 when only one rep ran.
    pub sd_ms: f64,
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    /// True when reps = 1, i.e. the spread columns are undefined.
    pub single_shot: bool,
}

impl fmt::Display for LatencyStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.2}ms \u{00b1} {:.2}ms (p50 {:.2}, p90 {:.2}, n={}, {} threads)",
            self.op, self.mean_ms, self.sd_ms, self.p50_ms, self.p90_ms, self.reps, self.threads
        )
    }
}

/// The machine a report was measured on; timings are meaningless without it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineInfo {
    pub os: String,
    pub arch: String,
    pub logical_cpus: usize,
    /// "debug" or "release" — debug timings are not comparable to anything.
    pub build_profile: String,
}

impl MachineInfo {
    pub fn capture() -> Self {
        Self {
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            logical_cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
            build_profile: if cfg!(debug_assertions) {
                "debug"
            } else {
                "release"
            }
            .to_string(),
        }
    }
}

/// A full benchmark report: machine context plus per-operation stats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub machine: MachineInfo,
    pub results: Vec<LatencyStats>,
}

/// Prebuilt inputs for the latency harness: a warm phantom, its geometry and
/// orientation protocol, and an engine loaded with one slice per plane.
pub struct BenchScenario {
    geometry: VolumeGeometry,
    orientations: OrientationSet,
    shape: SliceShape,
    tubes: Vec<TubeSpec>,
    engine: ReconstructionEngine,
    refresh: SliceThermometry,
}

impl BenchScenario {
    /// A steady-state gaussian hot spot with one cooling tube, slices lightly
    /// perturbed so repeated builds have non-trivial content. Deterministic
    /// in `seed`.
    pub fn standard(
        dims: (usize, usize, usize),
        orientation_count: usize,
        seed: u64,
    ) -> Result<Self> {
        let (nx, ny, nz) = dims;
        let geometry =
            VolumeGeometry::new(dims, (1.0, 1.0, 5.0), (nx as f64 / 2.0, ny as f64 / 2.0))?;
        let tubes = vec![TubeSpec {
            center_xy_vox: (nx as f64 / 2.0 + nx as f64 / 8.0, ny as f64 / 2.0),
            outer_radius_mm: 2.0,
            influence_radius_mm: 6.0,
            sink_strength: 1.0,
        }];
        let spec = PhantomSpec {
            geometry,
            source: HeatSourceModel {
                kind: HeatSourceKind::RadialGaussian,
                peak_c: 60.0,
                sigma_mm: nx as f64 / 8.0,
                z_extent_mm: (0.0, nz as f64 * 5.0),
                tau_s: 5.0,
            },
            tubes: tubes.clone(),
            noise_sigma_rad: 0.0,
            t0_c: 20.0,
            seed,
        };
        let orientations = OrientationSet::uniform(orientation_count)?;
        let shape = SliceShape::for_geometry(&geometry);
        let map =
            build_population_map(&geometry, &orientations, None, shape, MapOptions::default())?;
        let mut engine = ReconstructionEngine::new(map, None, spec.t0_c)?;

        let mut sampler = GroundTruthSampler::new(&spec)?;
        sampler.advance_to(60.0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jitter = Normal::new(0.0, 0.1).expect("fixed sigma is valid");
        let mut refresh = None;
        for &angle in orientations.angles() {
            let rad = angle.to_radians();
            let (dir_x, dir_y) = (rad.sin(), rad.cos());
            let mut temps = Vec::with_capacity(shape.len());
            for row in 0..shape.rows {
                let z_mm = row as f64 * geometry.sz;
                for col in 0..shape.cols {
                    let u = col as f64 - shape.center_col as f64;
                    let t = sampler.temperature_at(
                        geometry.xc + u * dir_x,
                        geometry.yc + u * dir_y,
                        z_mm,
                    );
                    temps.push((t + jitter.sample(&mut rng)) as f32);
                }
            }
            let slice = SliceThermometry {
                shape,
                orientation_deg: angle,
                temps,
                timestamp_s: 60.0,
            };
            refresh.get_or_insert_with(|| slice.clone());
            engine.ingest(slice)?;
        }
        Ok(Self {
            geometry,
            orientations,
            shape,
            tubes,
            engine,
            refresh: refresh.expect("at least one orientation"),
        })
    }

    pub fn geometry(&self) -> &VolumeGeometry {
        &self.geometry
    }

    /// Execute one operation once and return its wall-clock duration.
    pub fn run_once(&mut self, op: BenchOp) -> Result<Duration> {
        match op {
            BenchOp::MapBuild => {
                let start = Instant::now();
                let map = build_population_map(
                    &self.geometry,
                    &self.orientations,
                    None,
                    self.shape,
                    MapOptions::default(),
                )?;
                let elapsed = start.elapsed();
                black_box(&map);
                Ok(elapsed)
            }
            BenchOp::SinkMask => {
                let start = Instant::now();
                let mask = rasterize_tubes(&self.geometry, &self.tubes)?;
                let elapsed = start.elapsed();
                black_box(&mask);
                Ok(elapsed)
            }
            BenchOp::Reconstruct => {
                let slice = self.refresh.clone();
                let start = Instant::now();
                self.engine.ingest(slice)?;
                let volume = self.engine.reconstruct_volume()?;
                let elapsed = start.elapsed();
                black_box(&volume);
                Ok(elapsed)
            }
        }
    }

    /// The current reconstructed volume, for output-determinism checks.
    pub fn volume(&mut self) -> Result<Arc<ScalarVolume>> {
        self.engine.reconstruct_volume()
    }
}

/// Zero-based nearest-rank percentile of an ascending-sorted slice.
fn percentile(sorted_ms: &[f64], q: f64) -> f64 {
    let idx = ((sorted_ms.len() - 1) as f64 * q).round() as usize;
    sorted_ms[idx]
}

/// Time `reps` runs of one operation on a prepared scenario.
pub fn benchmark(scenario: &mut BenchScenario, op: BenchOp, reps: usize) -> Result<LatencyStats> {
    if reps == 0 {
        return Err(Error::InvalidParameter(
            "need at least one repetition".into(),
        ));
    }
    let mut samples_ms = Vec::with_capacity(reps);
    for _ in 0..reps {
        samples_ms.push(scenario.run_once(op)?.as_secs_f64() * 1e3);
    }
    let mean = samples_ms.iter().sum::<f64>() / reps as f64;
    let sd = if reps < 2 {
        0.0
    } else {
        let ss = samples_ms
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>();
        (ss / (reps - 1) as f64).sqrt()
    };
    let mut sorted = samples_ms.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(LatencyStats {
        op,
        reps,
        threads: rayon::current_num_threads(),
        mean_ms: mean,
        sd_ms: sd,
        p50_ms: percentile(&sorted, 0.5),
        p90_ms: percentile(&sorted, 0.9),
        min_ms: sorted[0],
        max_ms: sorted[sorted.len() - 1],
        single_shot: reps == 1,
    })
}

/// Run a closure inside a dedicated rayon pool of `threads` workers; used to
/// measure and verify single- versus multi-threaded behavior.
pub fn with_thread_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| {
            Error::InvalidParameter(format!("cannot build a {threads}-thread pool: {e}"))
        })?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn mask_from(bits: &[bool], nx: usize) -> MaskVolume {
        let g = VolumeGeometry::new((nx, bits.len() / nx, 1), (1.0, 1.0, 1.0), (0.0, 0.0)).unwrap();
        MaskVolume::from_values(g, bits.to_vec()).unwrap()
    }

    #[test]
    fn confusion_counts_enumerated_toy_masks() {
        // pred and truth share 3 voxels; each adds one voxel of its own.
        let pred = mask_from(&[true, true, true, true, false, false], 3);
        let truth = mask_from(&[true, true, true, false, true, false], 3);
        let c = confusion(&pred, &truth).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 3,
                fp: 1,
                r#fn: 1,
                tn: 1
            }
        );
        assert_eq!(c.total(), 6);

        let empty = mask_from(&[false; 6], 3);
        let c0 = confusion(&empty, &empty).unwrap();
        assert_eq!((c0.tp, c0.fp, c0.r#fn), (0, 0, 0));

        let c1 = confusion(&pred, &pred).unwrap();
        assert_eq!((c1.fp, c1.r#fn), (0, 0));

        let other = mask_from(&[false; 4], 2);
        assert!(matches!(
            confusion(&pred, &other),
            Err(Error::GeometryMismatch(_))
        ));
    }

    #[test]
    fn dice_matches_hand_arithmetic() {
        let c = ConfusionCounts {
            tp: 3,
            fp: 1,
            r#fn: 1,
            tn: 10,
        };
        assert_eq!(dice(&c), 0.75); // 6/8 exactly
        let perfect = ConfusionCounts {
            tp: 5,
            fp: 0,
            r#fn: 0,
            tn: 1,
        };
        assert_eq!(dice(&perfect), 1.0);
        let disjoint = ConfusionCounts {
            tp: 0,
            fp: 4,
            r#fn: 3,
            tn: 0,
        };
        assert_eq!(dice(&disjoint), 0.0);
        // Degenerate both-empty case is defined as agreement.
        let both_empty = ConfusionCounts {
            tp: 0,
            fp: 0,
            r#fn: 0,
            tn: 9,
        };
        assert_eq!(dice(&both_empty), 1.0);
    }

    #[test]
    fn dice_hits_one_only_without_disagreement() {
        for fp in 0..3u64 {
            for r#fn in 0..3u64 {
                let c = ConfusionCounts {
                    tp: 4,
                    fp,
                    r#fn,
                    tn: 0,
                };
                let d = dice(&c);
                assert!(d <= 1.0);
                assert_eq!(d == 1.0, fp == 0 && r#fn == 0);
            }
        }
    }

    #[test]
    fn sensitivity_matches_hand_arithmetic_and_rejects_empty_truth() {
        let c = ConfusionCounts {
            tp: 3,
            fp: 7,
            r#fn: 1,
            tn: 0,
        };
        assert_eq!(sensitivity(&c).unwrap(), 0.75);
        let perfect = ConfusionCounts {
            tp: 5,
            fp: 0,
            r#fn: 0,
            tn: 2,
        };
        assert_eq!(sensitivity(&perfect).unwrap(), 1.0);
        let blind = ConfusionCounts {
            tp: 0,
            fp: 0,
            r#fn: 6,
            tn: 2,
        };
        assert_eq!(sensitivity(&blind).unwrap(), 0.0);
        let empty_truth = ConfusionCounts {
            tp: 0,
            fp: 3,
            r#fn: 0,
            tn: 2,
        };
        assert!(matches!(sensitivity(&empty_truth), Err(Error::EmptyTruth)));
    }

    #[test]
    fn dice_is_symmetric_but_sensitivity_is_not() {
        // pred over-segments truth: swapping the roles flips fp and fn.
        let pred = mask_from(&[true, true, true, false], 2);
        let truth = mask_from(&[true, true, false, false], 2);
        let ab = confusion(&pred, &truth).unwrap();
        let ba = confusion(&truth, &pred).unwrap();
        assert_eq!(dice(&ab), dice(&ba));
        assert_eq!(sensitivity(&ab).unwrap(), 1.0);
        assert_eq!(sensitivity(&ba).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn sem95_reproduces_hand_computed_examples() {
        let s = sem95(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.sigma, 1.0);
        assert!((s.sem95 - 1.96 / 3.0f64.sqrt()).abs() < 1e-15);
        assert!((s.sem95 - 1.13161).abs() < 1e-5);
        assert_eq!(s.n, 3);

        let s = sem95(&[0.79, 0.71]).unwrap();
        assert!((s.mean - 0.75).abs() < 1e-12);
        assert!((s.sigma - 0.05657).abs() < 1e-5);
        assert!((s.sem95 - 0.0784).abs() < 1e-6);

        let flat = sem95(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_eq!(flat.sigma, 0.0);
        assert_eq!(flat.sem95, 0.0);

        assert!(matches!(sem95(&[1.0]), Err(Error::NotEnoughSamples(1))));
        assert!(matches!(sem95(&[]), Err(Error::NotEnoughSamples(0))));
    }

    proptest! {
        #[test]
        fn sem95_is_permutation_invariant_and_scales_linearly(
            samples in proptest::collection::vec(-100.0f64..100.0, 2..20),
            k in 0.1f64..10.0,
        ) {
            let s = sem95(&samples).unwrap();
            let mut shuffled = samples.clone();
            shuffled.reverse();
            shuffled.rotate_left(samples.len() / 2);
            let p = sem95(&shuffled).unwrap();
            prop_assert!((s.mean - p.mean).abs() <= 1e-9 * (1.0 + s.mean.abs()));
            prop_assert!((s.sem95 - p.sem95).abs() <= 1e-9 * (1.0 + s.sem95));

            let scaled: Vec<f64> = samples.iter().map(|x| x * k).collect();
            let sc = sem95(&scaled).unwrap();
            prop_assert!((sc.mean - s.mean * k).abs() <= 1e-9 * (1.0 + (s.mean * k).abs()));
            prop_assert!((sc.sigma - s.sigma * k).abs() <= 1e-9 * (1.0 + s.sigma * k));
            prop_assert!((sc.sem95 - s.sem95 * k).abs() <= 1e-9 * (1.0 + s.sem95 * k));
        }

        #[test]
        fn dice_symmetry_holds_for_arbitrary_masks(
            bits_a in proptest::collection::vec(any::<bool>(), 16),
            bits_b in proptest::collection::vec(any::<bool>(), 16),
        ) {
            let a = mask_from(&bits_a, 4);
            let b = mask_from(&bits_b, 4);
            let ab = dice(&confusion(&a, &b).unwrap());
            let ba = dice(&confusion(&b, &a).unwrap());
            prop_assert_eq!(ab, ba);
        }
    }

    fn volume_from(values: Vec<f32>, nx: usize) -> ScalarVolume {
        let g =
            VolumeGeometry::new((nx, values.len() / nx, 1), (1.0, 1.0, 1.0), (0.0, 0.0)).unwrap();
        ScalarVolume::from_values(g, values).unwrap()
    }

    #[test]
    fn rmse_reproduces_known_offsets() {
        let a = volume_from(vec![20.0, 30.0, 40.0, 50.0], 2);
        let all = MaskVolume::filled(a.geometry, true);
        assert_eq!(temperature_rmse(&a, &a, &all).unwrap(), 0.0);

        let b = volume_from(vec![21.0, 31.0, 41.0, 51.0], 2);
        assert!((temperature_rmse(&b, &a, &all).unwrap() - 1.0).abs() < 1e-12);

        // Only the masked voxels count.
        let c = volume_from(vec![23.0, 30.0, 40.0, 50.0], 2);
        let mut partial = MaskVolume::filled(a.geometry, true);
        partial.set(0, 0, 0, false);
        assert_eq!(temperature_rmse(&c, &a, &partial).unwrap(), 0.0);
        let none = MaskVolume::filled(a.geometry, false);
        assert!(matches!(
            temperature_rmse(&c, &a, &none),
            Err(Error::NotEnoughSamples(0))
        ));

        let other = volume_from(vec![0.0; 6], 2);
        assert!(temperature_rmse(&other, &a, &all).is_err());
    }

    #[test]
    fn rmse_matches_an_independent_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let recon: Vec<f32> = (0..256).map(|_| rng.gen_range(15.0..95.0)).collect();
        let truth: Vec<f32> = (0..256).map(|_| rng.gen_range(15.0..95.0)).collect();
        let valid: Vec<bool> = (0..256).map(|_| rng.gen_bool(0.7)).collect();
        let a = volume_from(recon.clone(), 16);
        let b = volume_from(truth.clone(), 16);
        let m = mask_from(&valid, 16);
        let got = temperature_rmse(&a, &b, &m).unwrap();
        // Second implementation: reversed iteration order, explicit counts.
        let mut sum = 0.0f64;
        let mut n = 0u64;
        for i in (0..256).rev() {
            if valid[i] {
                sum += (recon[i] as f64 - truth[i] as f64).powi(2);
                n += 1;
            }
        }
        let expect = (sum / n as f64).sqrt();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn bench_ops_parse_and_print_round_trip() {
        for op in BenchOp::ALL {
            assert_eq!(op.name().parse::<BenchOp>().unwrap(), op);
        }
        assert!(matches!(
            "warp-drive".parse::<BenchOp>(),
            Err(Error::InvalidParameter(_))
        ));
        let stats = LatencyStats {
            op: BenchOp::Reconstruct,
            reps: 100,
            threads: 4,
            mean_ms: 18.02,
            sd_ms: 5.91,
            p50_ms: 17.0,
            p90_ms: 25.0,
            min_ms: 12.0,
            max_ms: 40.0,
            single_shot: false,
        };
        let line = stats.to_string();
        assert!(line.contains("18.02ms \u{00b1} 5.91ms"), "got: {line}");
        let json = serde_json::to_string(&stats).unwrap();
        assert!(json.contains(r#""op":"reconstruct""#));
    }

    #[test]
    fn harness_reports_spread_and_single_shot_runs() {
        let mut scenario = BenchScenario::standard((32, 32, 4), 4, 5).unwrap();
        let one = benchmark(&mut scenario, BenchOp::SinkMask, 1).unwrap();
        assert!(one.single_shot);
        assert_eq!(one.sd_ms, 0.0);
        assert_eq!(one.reps, 1);
        assert_eq!(one.mean_ms, one.p50_ms);

        let many = benchmark(&mut scenario, BenchOp::Reconstruct, 5).unwrap();
        assert!(!many.single_shot);
        assert_eq!(many.reps, 5);
        assert!(many.min_ms <= many.p50_ms);
        assert!(many.p50_ms <= many.p90_ms);
        assert!(many.p90_ms <= many.max_ms);
        assert!(many.mean_ms >= many.min_ms && many.mean_ms <= many.max_ms);
        assert!(many.sd_ms >= 0.0);

        assert!(benchmark(&mut scenario, BenchOp::MapBuild, 0).is_err());
    }

    #[test]
    fn scenario_outputs_are_deterministic_even_when_timings_are_not() {
        let mut a = BenchScenario::standard((32, 32, 4), 4, 99).unwrap();
        let mut b = BenchScenario::standard((32, 32, 4), 4, 99).unwrap();
        benchmark(&mut a, BenchOp::Reconstruct, 3).unwrap();
        benchmark(&mut b, BenchOp::Reconstruct, 3).unwrap();
        assert_eq!(a.volume().unwrap().values, b.volume().unwrap().values);
        let mut c = BenchScenario::standard((32, 32, 4), 4, 100).unwrap();
        benchmark(&mut c, BenchOp::Reconstruct, 1).unwrap();
        assert_ne!(a.volume().unwrap().values, c.volume().unwrap().values);
    }

    #[test]
    fn thread_pool_helper_scopes_the_worker_count() {
        let inside = with_thread_pool(2, rayon::current_num_threads).unwrap();
        assert_eq!(inside, 2);
        let single = with_thread_pool(1, rayon::current_num_threads).unwrap();
        assert_eq!(single, 1);
        // Reconstruction results must not depend on the pool width.
        let volume_with = |threads: usize| {
            with_thread_pool(threads, || {
                let mut s = BenchScenario::standard((32, 32, 4), 4, 7).unwrap();
                s.volume().unwrap().values.clone()
            })
            .unwrap()
        };
        assert_eq!(volume_with(1), volume_with(3));
    }

    #[test]
    fn machine_info_names_the_build_profile() {
        let info = MachineInfo::capture();
        assert!(info.logical_cpus >= 1);
        assert!(info.build_profile == "debug" || info.build_profile == "release");
        assert!(!info.os.is_empty() && !info.arch.is_empty());
    }
}
