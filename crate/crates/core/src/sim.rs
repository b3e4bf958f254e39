//! Synthetic ablation phantoms: a parametric heat field with optional
//! cooling tubes, phase-image synthesis that inverts the thermometry
//! conversion, and the interleaved rotating acquisition schedule.
//!
//! The radial-gaussian source has closed-form values at any (position, time),
//! which makes the emitted data stream and its ground truth exactly
//! consistent with each other. The pennes-lite source instead time-steps a
//! coarse diffusion-perfusion grid and is meant for qualitatively asymmetric
//! fields, not for closed-form checks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::VolumeGeometry;
use crate::image::{wrap_phase_f32, AcquisitionParams, PhaseImage, SliceShape};
use crate::popmap::orientation_angle;
use crate::volume::{MaskVolume, ScalarVolume};

/// Hard ceiling on simulated tissue temperature, degC.
pub const MAX_TEMP_C: f64 = 90.0;

/// A water-cooled tube running parallel to z.
///
/// Inside the outer radius the temperature rise is fully suppressed (scaled
/// by `sink_strength`); between the outer and influence radius the
/// suppression ramps linearly down to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeSpec {
    /// Tube axis position, in-plane voxel coordinates.
    #[serde(rename = "center_vox")]
    pub center_xy_vox: (f64, f64),
    pub outer_radius_mm: f64,
    pub influence_radius_mm: f64,
    /// Fraction of the local rise removed at the tube wall, in [0, 1].
    pub sink_strength: f64,
}

impl TubeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.outer_radius_mm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tube outer radius must be positive, got {}",
                self.outer_radius_mm
            )));
        }
        if self.influence_radius_mm < self.outer_radius_mm {
            return Err(Error::InvalidParameter(format!(
                "tube influence radius {} smaller than outer radius {}",
                self.influence_radius_mm, self.outer_radius_mm
            )));
        }
        if !(0.0..=1.0).contains(&self.sink_strength) {
            return Err(Error::InvalidParameter(format!(
                "tube sink strength must lie in [0, 1], got {}",
                self.sink_strength
            )));
        }
        Ok(())
    }

    /// Suppression profile: 1 at and inside the wall, linear to 0 at the
    /// influence radius.
    pub fn falloff(&self, dist_mm: f64) -> f64 {
        if dist_mm <= self.outer_radius_mm {
            1.0
        } else if dist_mm >= self.influence_radius_mm {
            0.0
        } else {
            (self.influence_radius_mm - dist_mm) / (self.influence_radius_mm - self.outer_radius_mm)
        }
    }
}

/// Which forward model drives the heat field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatSourceKind {
    /// Closed-form rotationally symmetric rise with an exponential ramp.
    RadialGaussian,
    /// Explicit finite-difference diffusion with perfusion sinks.
    PennesLite,
}

/// Parameters of the ablation heat source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatSourceModel {
    pub kind: HeatSourceKind,
    /// Steady-state rise above baseline at the applicator, degC.
    pub peak_c: f64,
    /// In-plane gaussian width of the rise, mm.
    pub sigma_mm: f64,
    /// Heated segment of the applicator along z, mm (inclusive both ends).
    pub z_extent_mm: (f64, f64),
    /// Ramp time constant, seconds: rise scales with 1 - exp(-t / tau).
    pub tau_s: f64,
}

impl HeatSourceModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.peak_c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "peak rise must be non-negative, got {}",
                self.peak_c
            )));
        }
        if !(self.sigma_mm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {} mm",
                self.sigma_mm
            )));
        }
        if self.z_extent_mm.0 > self.z_extent_mm.1 {
            return Err(Error::InvalidParameter(format!(
                "z extent ({}, {}) is inverted",
                self.z_extent_mm.0, self.z_extent_mm.1
            )));
        }
        if !(self.tau_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ramp time constant must be positive, got {} s",
                self.tau_s
            )));
        }
        Ok(())
    }
}

fn default_t0() -> f64 {
    20.0
}

fn default_seed() -> u64 {
    42
}

/// Full description of a synthetic run: geometry, heat source, tubes,
/// phase-noise level, baseline, and RNG seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub geometry: VolumeGeometry,
    pub source: HeatSourceModel,
    #[serde(default)]
    pub tubes: Vec<TubeSpec>,
    /// Standard deviation of additive gaussian phase noise, radians.
    #[serde(default)]
    pub noise_sigma_rad: f64,
    #[serde(default = "default_t0")]
    pub t0_c: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if self.geometry.sx != self.geometry.sy {
            return Err(Error::InvalidParameter(format!(
                "in-plane spacing must be isotropic for rotating slices, got ({}, {})",
                self.geometry.sx, self.geometry.sy
            )));
        }
        self.source.validate()?;
        for t in &self.tubes {
            t.validate()?;
        }
        if !(self.noise_sigma_rad >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be non-negative, got {}",
                self.noise_sigma_rad
            )));
        }
        if !self.t0_c.is_finite() || self.t0_c >= MAX_TEMP_C {
            return Err(Error::InvalidParameter(format!(
                "baseline {} degC must be finite and below the {} degC ceiling",
                self.t0_c, MAX_TEMP_C
            )));
        }
        Ok(())
    }

    /// Combined tube suppression factor at an in-plane position, in [0, 1].
    fn tube_factor(&self, x_vox: f64, y_vox: f64) -> f64 {
        let mut f = 1.0;
        for t in &self.tubes {
            let dx = (x_vox - t.center_xy_vox.0) * self.geometry.sx;
            let dy = (y_vox - t.center_xy_vox.1) * self.geometry.sy;
            let d = (dx * dx + dy * dy).sqrt();
            f *= 1.0 - t.sink_strength * t.falloff(d);
        }
        f
    }

    /// Closed-form rise above baseline for the radial-gaussian source.
    fn gaussian_delta_t(&self, x_vox: f64, y_vox: f64, z_mm: f64, t_s: f64) -> f64 {
        let (z_lo, z_hi) = self.source.z_extent_mm;
        if z_mm < z_lo || z_mm > z_hi {
            return 0.0;
        }
        let dx = (x_vox - self.geometry.xc) * self.geometry.sx;
        let dy = (y_vox - self.geometry.yc) * self.geometry.sy;
        let r2 = dx * dx + dy * dy;
        let ramp = 1.0 - (-t_s / self.source.tau_s).exp();
        let sigma = self.source.sigma_mm;
        self.source.peak_c
            * ramp
            * (-r2 / (2.0 * sigma * sigma)).exp()
            * self.tube_factor(x_vox, y_vox)
    }
}

// ---------------------------------------------------------------------------
// Pennes-lite: explicit diffusion-perfusion stepping on the voxel grid.
// ---------------------------------------------------------------------------

/// Tissue thermal diffusivity used by the pennes-lite model, mm^2/s.
const DIFFUSIVITY_MM2_S: f64 = 0.14;
/// Extra perfusion rate at a full-strength tube wall, 1/s.
const TUBE_PERFUSION_S: f64 = 1.0;

/// Explicit finite-difference state for the pennes-lite source. The step
/// size is fixed once from the phantom description, and fields are sampled
/// after whole steps only (`floor(t / dt)`), so advancing incrementally and
/// re-running from zero produce bit-identical states.
struct PennesState {
    rise: Vec<f64>,
    source: Vec<f64>,
    perfusion: Vec<f64>,
    dt_s: f64,
    steps_done: u64,
}

impl PennesState {
    fn new(spec: &PhantomSpec) -> Self {
        let g = &spec.geometry;
        let n = g.len();
        let mut source = vec![0.0f64; n];
        let mut perfusion = vec![0.0f64; n];
        let rate = spec.source.peak_c / spec.source.tau_s;
        let base_perfusion = 1.0 / spec.source.tau_s;
        let (z_lo, z_hi) = spec.source.z_extent_mm;
        let sigma = spec.source.sigma_mm;
        for z in 0..g.nz {
            let z_mm = z as f64 * g.sz;
            let in_window = z_mm >= z_lo && z_mm <= z_hi;
            for y in 0..g.ny {
                for x in 0..g.nx {
                    let i = g.voxel_index(x, y, z);
                    let dx = (x as f64 - g.xc) * g.sx;
                    let dy = (y as f64 - g.yc) * g.sy;
                    let r2 = dx * dx + dy * dy;
                    if in_window {
                        source[i] = rate * (-r2 / (2.0 * sigma * sigma)).exp();
                    }
                    let mut w = base_perfusion;
                    for t in &spec.tubes {
                        let tx = (x as f64 - t.center_xy_vox.0) * g.sx;
                        let ty = (y as f64 - t.center_xy_vox.1) * g.sy;
                        let d = (tx * tx + ty * ty).sqrt();
                        w += t.sink_strength * t.falloff(d) * TUBE_PERFUSION_S;
                    }
                    perfusion[i] = w;
                }
            }
        }
        // Positivity-preserving step bound for explicit FTCS plus decay.
        let lap_rate = 2.0
            * DIFFUSIVITY_MM2_S
            * (1.0 / (g.sx * g.sx) + 1.0 / (g.sy * g.sy) + 1.0 / (g.sz * g.sz));
        let w_max = perfusion.iter().cloned().fold(0.0f64, f64::max);
        let dt_s = 0.5 / (lap_rate + w_max);
        Self {
            rise: vec![0.0; n],
            source,
            perfusion,
            dt_s,
            steps_done: 0,
        }
    }

    fn step(&mut self, g: &VolumeGeometry) {
        let inv_sx2 = 1.0 / (g.sx * g.sx);
        let inv_sy2 = 1.0 / (g.sy * g.sy);
        let inv_sz2 = 1.0 / (g.sz * g.sz);
        let old = self.rise.clone();
        // Zero-flux boundaries: out-of-range neighbors mirror the center.
        let at = |x: i64, y: i64, z: i64| -> f64 {
            let x = x.clamp(0, g.nx as i64 - 1) as usize;
            let y = y.clamp(0, g.ny as i64 - 1) as usize;
            let z = z.clamp(0, g.nz as i64 - 1) as usize;
            old[g.voxel_index(x, y, z)]
        };
        for z in 0..g.nz as i64 {
            for y in 0..g.ny as i64 {
                for x in 0..g.nx as i64 {
                    let i = g.voxel_index(x as usize, y as usize, z as usize);
                    let c = old[i];
                    let lap = (at(x - 1, y, z) + at(x + 1, y, z) - 2.0 * c) * inv_sx2
                        + (at(x, y - 1, z) + at(x, y + 1, z) - 2.0 * c) * inv_sy2
                        + (at(x, y, z - 1) + at(x, y, z + 1) - 2.0 * c) * inv_sz2;
                    self.rise[i] = c + self.dt_s
                        * (DIFFUSIVITY_MM2_S * lap + self.source[i] - self.perfusion[i] * c);
                }
            }
        }
        self.steps_done += 1;
    }

    fn advance_to(&mut self, g: &VolumeGeometry, t_s: f64) {
        let target = (t_s / self.dt_s).floor() as u64;
        while self.steps_done < target {
            self.step(g);
        }
    }

    /// Trilinear sample of the rise at a continuous voxel position, with
    /// coordinates clamped to the grid.
    fn sample(&self, g: &VolumeGeometry, x_vox: f64, y_vox: f64, z_mm: f64) -> f64 {
        let x = x_vox.clamp(0.0, g.nx as f64 - 1.0);
        let y = y_vox.clamp(0.0, g.ny as f64 - 1.0);
        let z = (z_mm / g.sz).clamp(0.0, g.nz as f64 - 1.0);
        let (x0, y0, z0) = (x.floor() as usize, y.floor() as usize, z.floor() as usize);
        let (fx, fy, fz) = (x - x0 as f64, y - y0 as f64, z - z0 as f64);
        let x1 = (x0 + 1).min(g.nx - 1);
        let y1 = (y0 + 1).min(g.ny - 1);
        let z1 = (z0 + 1).min(g.nz - 1);
        let v = |x: usize, y: usize, z: usize| self.rise[g.voxel_index(x, y, z)];
        let c00 = v(x0, y0, z0) * (1.0 - fx) + v(x1, y0, z0) * fx;
        let c10 = v(x0, y1, z0) * (1.0 - fx) + v(x1, y1, z0) * fx;
        let c01 = v(x0, y0, z1) * (1.0 - fx) + v(x1, y0, z1) * fx;
        let c11 = v(x0, y1, z1) * (1.0 - fx) + v(x1, y1, z1) * fx;
        let c0 = c00 * (1.0 - fy) + c10 * fy;
        let c1 = c01 * (1.0 - fy) + c11 * fy;
        c0 * (1.0 - fz) + c1 * fz
    }
}

/// Stateful field evaluator. For the closed-form source this is a thin
/// wrapper; for pennes-lite it owns the stepped grid, so advancing must be
/// monotone in time.
pub struct GroundTruthSampler<'a> {
    spec: &'a PhantomSpec,
    grid: Option<PennesState>,
    t_s: f64,
}

impl<'a> GroundTruthSampler<'a> {
    pub fn new(spec: &'a PhantomSpec) -> Result<Self> {
        spec.validate()?;
        let grid = match spec.source.kind {
            HeatSourceKind::RadialGaussian => None,
            HeatSourceKind::PennesLite => Some(PennesState::new(spec)),
        };
        Ok(Self {
            spec,
            grid,
            t_s: 0.0,
        })
    }

    /// Move simulated time forward to `t_s` (never backward).
    pub fn advance_to(&mut self, t_s: f64) -> Result<()> {
        if t_s < self.t_s {
            return Err(Error::InvalidParameter(format!(
                "field sampler cannot rewind from {} s to {} s",
                self.t_s, t_s
            )));
        }
        if let Some(grid) = &mut self.grid {
            grid.advance_to(&self.spec.geometry, t_s);
        }
        self.t_s = t_s;
        Ok(())
    }

    /// Absolute temperature at a continuous in-plane voxel position and an
    /// axial position in mm, at the current time; clamped to [.., 90] degC.
    pub fn temperature_at(&self, x_vox: f64, y_vox: f64, z_mm: f64) -> f64 {
        let rise = match &self.grid {
            None => self.spec.gaussian_delta_t(x_vox, y_vox, z_mm, self.t_s),
            Some(grid) => grid.sample(&self.spec.geometry, x_vox, y_vox, z_mm),
        };
        (self.spec.t0_c + rise).min(MAX_TEMP_C)
    }
}

/// Evaluate the full ground-truth temperature volume at time `t_s`.
pub fn ground_truth_field(spec: &PhantomSpec, t_s: f64) -> Result<ScalarVolume> {
    let mut sampler = GroundTruthSampler::new(spec)?;
    sampler.advance_to(t_s)?;
    let g = &spec.geometry;
    let mut out = ScalarVolume::filled(*g, 0.0);
    for z in 0..g.nz {
        let z_mm = z as f64 * g.sz;
        for y in 0..g.ny {
            for x in 0..g.nx {
                let t = sampler.temperature_at(x as f64, y as f64, z_mm);
                out.values[g.voxel_index(x, y, z)] = t as f32;
            }
        }
    }
    Ok(out)
}

/// Ground-truth coagulation mask at time `t_s`: temperature at or above the
/// threshold, straight from the forward model (no reconstruction involved).
pub fn coagulation_ground_truth(
    spec: &PhantomSpec,
    t_s: f64,
    threshold_c: f64,
) -> Result<MaskVolume> {
    let field = ground_truth_field(spec, t_s)?;
    Ok(MaskVolume {
        geometry: field.geometry,
        values: field
            .values
            .iter()
            .map(|&t| t as f64 >= threshold_c)
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Acquisition schedule and the simulated stream.
// ---------------------------------------------------------------------------

/// One planned acquisition: which plane, and when its image is complete.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleEntry {
    pub orientation_deg: f64,
    pub timestamp_s: f64,
}

/// The interleaved rotation schedule: a fixed angle order repeated sweep
/// after sweep, one image every `period_s + pause_s` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    /// Plane angles of one sweep, in acquisition order.
    pub order_deg: Vec<f64>,
    pub period_s: f64,
    pub pause_s: f64,
}

fn bit_reverse(value: usize, bits: u32) -> usize {
    let mut v = value;
    let mut out = 0;
    for _ in 0..bits {
        out = (out << 1) | (v & 1);
        v >>= 1;
    }
    out
}

/// Build the acquisition schedule for `count` uniformly spaced planes.
///
/// The within-sweep order follows the bit-reversal permutation, so each new
/// plane stays as far as possible from every plane already visited; `count`
/// must therefore be a power of two.
pub fn acquisition_schedule(count: usize, period_s: f64, pause_s: f64) -> Result<Schedule> {
    if count == 0 || !count.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "orientation count must be a power of two, got {count}"
        )));
    }
    if !(period_s >= 0.0) || !(pause_s >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "period {period_s} s and pause {pause_s} s must be non-negative"
        )));
    }
    let bits = count.trailing_zeros();
    let order_deg = (0..count)
        .map(|k| orientation_angle(bit_reverse(k, bits), count))
        .collect();
    Ok(Schedule {
        order_deg,
        period_s,
        pause_s,
    })
}

impl Schedule {
    /// Seconds from one completed image to the next.
    pub fn image_interval_s(&self) -> f64 {
        self.period_s + self.pause_s
    }

    /// The first `sweeps` full sweeps, with cumulative timestamps: image i
    /// (zero-based, across sweeps) completes at (i + 1) * interval.
    pub fn entries(&self, sweeps: usize) -> Vec<ScheduleEntry> {
        self.iter_cycled()
            .take(sweeps * self.order_deg.len())
            .collect()
    }

    /// Endless cyclic iterator over scheduled acquisitions.
    pub fn iter_cycled(&self) -> impl Iterator<Item = ScheduleEntry> + '_ {
        let interval = self.image_interval_s();
        (0..).map(move |i| ScheduleEntry {
            orientation_deg: self.order_deg[i % self.order_deg.len()],
            timestamp_s: (i + 1) as f64 * interval,
        })
    }

    /// The orientation set visited by this schedule (angles sorted).
    pub fn orientation_set(&self) -> Result<crate::popmap::OrientationSet> {
        let mut angles = self.order_deg.clone();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        crate::popmap::OrientationSet::new(angles)
    }
}

/// Whether a simulated image is a baseline reference or part of the heated
/// live stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimEventKind {
    Reference,
    Live,
}

/// One emitted image plus its role.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEvent {
    pub kind: SimEventKind,
    pub image: PhaseImage,
}

fn synthesize_with_sampler(
    sampler: &GroundTruthSampler<'_>,
    orientation_deg: f64,
    timestamp_s: f64,
    params: &AcquisitionParams,
    noise: Option<&Normal<f64>>,
    rng: &mut ChaCha8Rng,
) -> Result<PhaseImage> {
    let spec = sampler.spec;
    let g = &spec.geometry;
    let shape = SliceShape::for_geometry(g);
    let k = params.phase_per_celsius();
    let rad = orientation_deg.to_radians();
    let (dir_x, dir_y) = (rad.sin(), rad.cos());
    let mut pixels = Vec::with_capacity(shape.len());
    for row in 0..shape.rows {
        let z_mm = row as f64 * g.sz;
        for col in 0..shape.cols {
            let u = col as f64 - shape.center_col as f64;
            let t = sampler.temperature_at(g.xc + u * dir_x, g.yc + u * dir_y, z_mm);
            let mut phi = (t - spec.t0_c) * k;
            if let Some(n) = noise {
                phi += n.sample(rng);
            }
            pixels.push(wrap_phase_f32(phi));
        }
    }
    PhaseImage::new(shape, pixels, orientation_deg, timestamp_s, *params)
}

/// Synthesize one phase image of the phantom at time `t_s`, as seen by the
/// plane at `orientation_deg`: the inverse of the thermometry conversion
/// applied to the ground-truth field, plus optional gaussian phase noise.
///
/// `params.t0_c` must equal the phantom baseline, otherwise decoding the
/// image would shift every temperature.
pub fn synthesize_phase_image(
    spec: &PhantomSpec,
    t_s: f64,
    orientation_deg: f64,
    params: &AcquisitionParams,
    rng: &mut ChaCha8Rng,
) -> Result<PhaseImage> {
    params.validate()?;
    if params.t0_c != spec.t0_c {
        return Err(Error::InvalidParameter(format!(
            "acquisition baseline {} degC does not match phantom baseline {} degC",
            params.t0_c, spec.t0_c
        )));
    }
    let mut sampler = GroundTruthSampler::new(spec)?;
    sampler.advance_to(t_s)?;
    let noise = noise_dist(spec)?;
    synthesize_with_sampler(&sampler, orientation_deg, t_s, params, noise.as_ref(), rng)
}

fn noise_dist(spec: &PhantomSpec) -> Result<Option<Normal<f64>>> {
    if spec.noise_sigma_rad > 0.0 {
        let n = Normal::new(0.0, spec.noise_sigma_rad).map_err(|e| {
            Error::InvalidParameter(format!("bad noise sigma {}: {e}", spec.noise_sigma_rad))
        })?;
        Ok(Some(n))
    } else {
        Ok(None)
    }
}

/// Run the full simulated protocol: `refs_per_orientation` baseline images
/// per plane at t = 0 (planes in ascending angle order), then `sweeps` full
/// sweeps of live images following the schedule. Deterministic in
/// `spec.seed`.
pub fn simulate_run(
    spec: &PhantomSpec,
    schedule: &Schedule,
    params: &AcquisitionParams,
    sweeps: usize,
    refs_per_orientation: usize,
) -> Result<Vec<SimEvent>> {
    params.validate()?;
    if params.t0_c != spec.t0_c {
        return Err(Error::InvalidParameter(format!(
            "acquisition baseline {} degC does not match phantom baseline {} degC",
            params.t0_c, spec.t0_c
        )));
    }
    if refs_per_orientation == 0 {
        return Err(Error::InvalidParameter(
            "need at least one reference per orientation".into(),
        ));
    }
    let orientations = schedule.orientation_set()?;
    let mut sampler = GroundTruthSampler::new(spec)?;
    let noise = noise_dist(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut events = Vec::with_capacity(
        orientations.count() * refs_per_orientation + sweeps * orientations.count(),
    );
    for &angle in orientations.angles() {
        for _ in 0..refs_per_orientation {
            let image =
                synthesize_with_sampler(&sampler, angle, 0.0, params, noise.as_ref(), &mut rng)?;
            events.push(SimEvent {
                kind: SimEventKind::Reference,
                image,
            });
        }
    }
    for entry in schedule.entries(sweeps) {
        sampler.advance_to(entry.timestamp_s)?;
        let image = synthesize_with_sampler(
            &sampler,
            entry.orientation_deg,
            entry.timestamp_s,
            params,
            noise.as_ref(),
            &mut rng,
        )?;
        events.push(SimEvent {
            kind: SimEventKind::Live,
            image,
        });
    }
    Ok(events)
}
