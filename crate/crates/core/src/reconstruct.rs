//! The live reconstruction engine: it holds the most recent temperature
//! slice per plane orientation and assembles the full voxel volume from
//! them on demand, interpolating every voxel between its two bracketing
//! half-planes via the precomputed population map.
//!
//! A second, deliberately map-free implementation of the same contract
//! (`oracle_reconstruct`) recomputes every voxel from scratch; the two must
//! agree bit for bit, which pins the map down as a pure acceleration
//! structure.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::cart_to_cyl;
use crate::popmap::{
    find_partners, interp_weights, radial_columns_in_fov, PopulationMap, RadialSampling, SinkMode,
};
use crate::prfs::SliceThermometry;
use crate::volume::{MaskVolume, ScalarVolume};

/// Latest live data per orientation: the newest slice and its timestamp.
/// Timestamps may never decrease within one orientation.
#[derive(Debug, Clone, Default)]
pub struct OrientationState {
    slices: Vec<Option<SliceThermometry>>,
}

impl OrientationState {
    fn empty(count: usize) -> Self {
        Self {
            slices: vec![None; count],
        }
    }

    /// The stored slice for an orientation index, if any arrived yet.
    pub fn slice(&self, orientation: usize) -> Option<&SliceThermometry> {
        self.slices.get(orientation).and_then(|s| s.as_ref())
    }

    /// How many orientations have data.
    pub fn populated(&self) -> usize {
        self.slices.iter().filter(|s| s.is_some()).count()
    }

    /// Completion timestamp of the newest slice across all orientations.
    pub fn latest_timestamp_s(&self) -> Option<f64> {
        self.slices
            .iter()
            .flatten()
            .map(|s| s.timestamp_s)
            .fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.max(t))))
    }
}

/// Data age of one orientation relative to the newest slice in the engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationAge {
    pub orientation_deg: f64,
    /// Seconds behind the newest slice; None when nothing arrived yet.
    pub age_s: Option<f64>,
}

/// Incremental volume reconstruction from rotating slices.
pub struct ReconstructionEngine {
    map: PopulationMap,
    heat_sink: Option<MaskVolume>,
    t0_c: f64,
    state: OrientationState,
    cached: Option<Arc<ScalarVolume>>,
}

impl ReconstructionEngine {
    /// Create an engine over a prebuilt population map. When the map was
    /// built with an active heat-sink mode, the same mask must be supplied
    /// here so the map-free verification path can reproduce it.
    pub fn new(map: PopulationMap, heat_sink: Option<MaskVolume>, t0_c: f64) -> Result<Self> {
        if !t0_c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "baseline temperature must be finite, got {t0_c}"
            )));
        }
        if let Some(mask) = &heat_sink {
            if mask.geometry != map.geometry {
                return Err(Error::GeometryMismatch(
                    "heat-sink mask does not share the map geometry".into(),
                ));
            }
        }
        if map.options.sink != SinkMode::Off && heat_sink.is_none() {
            return Err(Error::InvalidParameter(
                "map was built with a heat sink but no mask was supplied".into(),
            ));
        }
        let count = map.orientations.count();
        Ok(Self {
            map,
            heat_sink,
            t0_c,
            state: OrientationState::empty(count),
            cached: None,
        })
    }

    pub fn map(&self) -> &PopulationMap {
        &self.map
    }

    pub fn state(&self) -> &OrientationState {
        &self.state
    }

    pub fn t0_c(&self) -> f64 {
        self.t0_c
    }

    /// Accept a new live slice, replacing the stored one for its
    /// orientation. The orientation must match a protocol angle exactly, and
    /// time must not run backward within an orientation.
    pub fn ingest(&mut self, slice: SliceThermometry) -> Result<()> {
        let idx = self
            .map
            .orientations
            .index_of(slice.orientation_deg)
            .ok_or(Error::UnknownOrientation(slice.orientation_deg))?;
        if slice.shape != self.map.shape {
            return Err(Error::IncompatibleShape(format!(
                "slice is {}x{} but the engine expects {}x{}",
                slice.shape.rows, slice.shape.cols, self.map.shape.rows, self.map.shape.cols
            )));
        }
        if let Some(stored) = &self.state.slices[idx] {
            if slice.timestamp_s < stored.timestamp_s {
                return Err(Error::InvalidParameter(format!(
                    "slice at {} s would move orientation {} deg back from {} s",
                    slice.timestamp_s, slice.orientation_deg, stored.timestamp_s
                )));
            }
        }
        self.state.slices[idx] = Some(slice);
        self.cached = None;
        Ok(())
    }

    /// Age of every orientation relative to the newest stored slice, in
    /// ascending angle order.
    pub fn orientation_ages(&self) -> Vec<OrientationAge> {
        let latest = self.state.latest_timestamp_s();
        self.map
            .orientations
            .angles()
            .iter()
            .enumerate()
            .map(|(i, &angle)| OrientationAge {
                orientation_deg: angle,
                age_s: match (latest, self.state.slice(i)) {
                    (Some(newest), Some(s)) => Some(newest - s.timestamp_s),
                    _ => None,
                },
            })
            .collect()
    }

    /// Temperature read from one partner image, or None when that partner's
    /// orientation has no data or the radius leaves the image.
    ///
    /// The arithmetic here must stay bit-identical with the from-scratch
    /// path in `oracle_reconstruct`; both read the same pixels and blend
    /// them with the same elementary expressions.
    #[inline]
    fn partner_value(&self, half_plane: usize, radius: f64, z: usize) -> Option<f64> {
        let orientation = self.map.orientations.orientation_of(half_plane);
        let slice = self.state.slice(orientation)?;
        let shape = &self.map.shape;
        let center = shape.center_col as i64;
        let sign = if self.map.orientations.is_positive_half(half_plane) {
            1
        } else {
            -1
        };
        let read = |col: i64| -> Option<f64> {
            if (0..shape.cols as i64).contains(&col) {
                Some(slice.temps[shape.pixel_index(z, col as usize)] as f64)
            } else {
                None
            }
        };
        match self.map.options.radial {
            RadialSampling::Nearest => read(center + sign * radius.round() as i64),
            RadialSampling::Linear => {
                let lo = radius.floor();
                let frac = radius - lo;
                let v_lo = read(center + sign * lo as i64)?;
                let v_hi = read(center + sign * radius.ceil() as i64)?;
                Some(v_lo * (1.0 - frac) + v_hi * frac)
            }
        }
    }

    /// Blend the two partner temperatures for one voxel and apply the
    /// inclusion weight. Same bit-exactness constraint as `partner_value`.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn voxel_temperature(
        &self,
        left_half_plane: usize,
        right_half_plane: usize,
        weight_left: f64,
        weight_right: f64,
        validity: f64,
        radius: f64,
        z: usize,
    ) -> f64 {
        if validity == 0.0 {
            return self.t0_c;
        }
        let left = self.partner_value(left_half_plane, radius, z);
        let right = self.partner_value(right_half_plane, radius, z);
        let blended = match (left, right) {
            (Some(l), Some(r)) => weight_left * l + weight_right * r,
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => return self.t0_c,
        };
        if validity == 1.0 {
            blended
        } else {
            self.t0_c + validity * (blended - self.t0_c)
        }
    }

    /// Assemble the current temperature volume. The result is cached until
    /// the next ingest, and shared snapshots stay immutable, so repeated
    /// calls are free and concurrent readers keep consistent data.
    pub fn reconstruct_volume(&mut self) -> Result<Arc<ScalarVolume>> {
        if self.state.populated() == 0 {
            return Err(Error::NoLiveData);
        }
        if let Some(cached) = &self.cached {
            return Ok(Arc::clone(cached));
        }
        let g = self.map.geometry;
        let plane = g.plane_len();
        let this: &Self = self;
        let values: Vec<f32> = (0..g.nz)
            .into_par_iter()
            .flat_map_iter(|z| {
                (0..plane).map(move |p| {
                    let e = &this.map.entries[p];
                    this.voxel_temperature(
                        e.left_half_plane as usize,
                        e.right_half_plane as usize,
                        e.weight_left,
                        e.weight_right,
                        e.validity,
                        e.radius,
                        z,
                    ) as f32
                })
            })
            .collect();
        let volume = Arc::new(ScalarVolume {
            geometry: g,
            values,
        });
        self.cached = Some(Arc::clone(&volume));
        Ok(volume)
    }

    /// Map-free reference reconstruction: recompute every voxel's
    /// cylindrical coordinates, partner bracket, weights, pixel columns, and
    /// inclusion weight from scratch, then blend with the same expressions
    /// as the fast path. Output must equal `reconstruct_volume` bit for bit.
    pub fn oracle_reconstruct(&self) -> Result<ScalarVolume> {
        if self.state.populated() == 0 {
            return Err(Error::NoLiveData);
        }
        let g = self.map.geometry;
        let plane = g.plane_len();
        let sink = match self.map.options.sink {
            SinkMode::Off => None,
            SinkMode::Hard => self.heat_sink.as_ref().map(|m| (m, 0.0)),
            SinkMode::Soft(w) => self.heat_sink.as_ref().map(|m| (m, w)),
        };
        let mut values = Vec::with_capacity(g.len());
        for z in 0..g.nz {
            for y in 0..g.ny {
                for x in 0..g.nx {
                    let cyl = cart_to_cyl(x as f64, y as f64, 0, &g);
                    let (left, right) = find_partners(cyl.angle_deg, &self.map.orientations);
                    let hp = self.map.orientations.half_plane_angles();
                    let (weight_left, weight_right) =
                        interp_weights(cyl.angle_deg, hp[left], hp[right])
                            .expect("distinct half-planes cannot be degenerate");
                    let validity = if !radial_columns_in_fov(
                        cyl.radius,
                        &self.map.shape,
                        self.map.options.radial,
                    ) {
                        0.0
                    } else {
                        match sink {
                            Some((mask, w)) => {
                                // Column-sunk test recomputed voxel by voxel.
                                let base = g.plane_index(x, y);
                                let sunk = (0..g.nz).any(|zz| mask.values[base + zz * plane]);
                                if sunk {
                                    w
                                } else {
                                    1.0
                                }
                            }
                            None => 1.0,
                        }
                    };
                    let t = self.voxel_temperature(
                        left,
                        right,
                        weight_left,
                        weight_right,
                        validity,
                        cyl.radius,
                        z,
                    );
                    values.push(t as f32);
                }
            }
        }
        Ok(ScalarVolume {
            geometry: g,
            values,
        })
    }
}

/// A thresholded coagulation estimate together with the threshold that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoagulationMask {
    pub mask: MaskVolume,
    pub threshold_c: f64,
}

impl CoagulationMask {
    pub fn geometry(&self) -> &crate::geom::VolumeGeometry {
        &self.mask.geometry
    }
}

/// Estimate the coagulated zone: voxels at or above the threshold that the
/// map actually populates (excluded voxels merely report baseline and must
/// not count as coagulated).
pub fn coagulation_mask(
    volume: &ScalarVolume,
    threshold_c: f64,
    map: &PopulationMap,
) -> Result<CoagulationMask> {
    if !threshold_c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coagulation threshold must be finite, got {threshold_c}"
        )));
    }
    if volume.geometry != map.geometry {
        return Err(Error::GeometryMismatch(
            "volume does not share the map geometry".into(),
        ));
    }
    let plane = map.geometry.plane_len();
    let values = volume
        .values
        .iter()
        .enumerate()
        .map(|(i, &t)| t as f64 >= threshold_c && map.entries[i % plane].validity > 0.0)
        .collect();
    Ok(CoagulationMask {
        mask: MaskVolume {
            geometry: volume.geometry,
            values,
        },
        threshold_c,
    })
}
