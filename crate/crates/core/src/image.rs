//! Acquisition parameters, phase images, and slice-image shape conventions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::VolumeGeometry;

/// Scanner-side constants needed to turn a phase shift into a temperature.
///
/// Defaults model a 1.5 T scanner with TE = 3.69 ms, a proton resonance
/// frequency shift coefficient of 0.01 ppm/degC, the hydrogen gyromagnetic
/// ratio (42.576 MHz/T, stored in angular form), and a 20 degC baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionParams {
    /// Gyromagnetic ratio in rad/(s*T); angular, i.e. 2*pi times the MHz/T value.
    pub gamma_rad_per_s_t: f64,
    /// Resonance shift coefficient in ppm per degC.
    pub alpha_ppm_per_c: f64,
    /// Main field strength in tesla.
    pub b0_t: f64,
    /// Echo time in seconds.
    pub te_s: f64,
    /// Baseline temperature in degC added back after the phase-difference term.
    pub t0_c: f64,
}

impl Default for AcquisitionParams {
    fn default() -> Self {
        Self {
            gamma_rad_per_s_t: std::f64::consts::TAU * 42.576e6,
            alpha_ppm_per_c: 0.01,
            b0_t: 1.5,
            te_s: 3.69e-3,
            t0_c: 20.0,
        }
    }
}

impl AcquisitionParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gamma_rad_per_s_t", self.gamma_rad_per_s_t),
            ("alpha_ppm_per_c", self.alpha_ppm_per_c),
            ("b0_t", self.b0_t),
            ("te_s", self.te_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.t0_c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "t0_c must be finite, got {}",
                self.t0_c
            )));
        }
        Ok(())
    }

    /// Phase change per degC: gamma * alpha * B0 * TE, with alpha converted
    /// from ppm. Roughly 0.0148 rad/degC at the defaults.
    #[inline]
    pub fn phase_per_celsius(&self) -> f64 {
        self.gamma_rad_per_s_t * (self.alpha_ppm_per_c * 1e-6) * self.b0_t * self.te_s
    }
}

/// Wrap a phase in radians into [-pi, pi).
#[inline]
pub fn wrap_phase(phi: f64) -> f64 {
    let w = (phi + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU);
    let w = if w >= std::f64::consts::TAU { 0.0 } else { w };
    w - std::f64::consts::PI
}

/// Wrap a phase into [-pi, pi) and narrow to f32.
///
/// Narrowing can round a value just below pi up onto the f32 seam, so the
/// seam is folded back to -pi after the cast to keep the range half-open.
#[inline]
pub fn wrap_phase_f32(phi: f64) -> f32 {
    let w = wrap_phase(phi) as f32;
    if w >= std::f32::consts::PI {
        -std::f32::consts::PI
    } else {
        w
    }
}

/// Shape of the rotating slice images: rows scan the axis (row = z slice),
/// columns scan the signed in-plane offset from the centerline, with the
/// centerline itself at `center_col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceShape {
    pub rows: usize,
    pub cols: usize,
    pub center_col: usize,
}

impl SliceShape {
    pub fn new(rows: usize, cols: usize, center_col: usize) -> Result<Self> {
        let s = Self {
            rows,
            cols,
            center_col,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::IncompatibleShape(format!(
                "slice shape {}x{} has an empty axis",
                self.rows, self.cols
            )));
        }
        if self.center_col >= self.cols {
            return Err(Error::IncompatibleShape(format!(
                "center column {} outside {} columns",
                self.center_col, self.cols
            )));
        }
        Ok(())
    }

    /// The default slice footprint for a volume: one row per z slice and
    /// enough columns to span the larger in-plane axis, centered.
    pub fn for_geometry(geometry: &VolumeGeometry) -> Self {
        let cols = geometry.nx.max(geometry.ny);
        Self {
            rows: geometry.nz,
            cols,
            center_col: cols / 2,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn pixel_index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }
}

/// One phase image from the rotating-slice stream.
///
/// Pixels are wrapped phases in [-pi, pi), stored row-major with the shape
/// conventions of [`SliceShape`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseImage {
    pub shape: SliceShape,
    pub pixels: Vec<f32>,
    /// Slice plane orientation in degrees in [0, 180).
    pub orientation_deg: f64,
    /// Acquisition time in seconds from the start of the run.
    pub timestamp_s: f64,
    pub params: AcquisitionParams,
}

impl PhaseImage {
    pub fn new(
        shape: SliceShape,
        pixels: Vec<f32>,
        orientation_deg: f64,
        timestamp_s: f64,
        params: AcquisitionParams,
    ) -> Result<Self> {
        shape.validate()?;
        params.validate()?;
        if pixels.len() != shape.len() {
            return Err(Error::IncompatibleShape(format!(
                "phase image has {} pixels, shape {}x{} wants {}",
                pixels.len(),
                shape.rows,
                shape.cols,
                shape.len()
            )));
        }
        if !(0.0..180.0).contains(&orientation_deg) {
            return Err(Error::InvalidParameter(format!(
                "orientation {orientation_deg} deg outside [0, 180)"
            )));
        }
        if !(timestamp_s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "timestamp {timestamp_s} s is negative"
            )));
        }
        for (i, &p) in pixels.iter().enumerate() {
            if !(-std::f32::consts::PI..std::f32::consts::PI).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "pixel {i} holds unwrapped phase {p}"
                )));
            }
        }
        Ok(Self {
            shape,
            pixels,
            orientation_deg,
            timestamp_s,
            params,
        })
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f32 {
        self.pixels[self.shape.pixel_index(row, col)]
    }
}
