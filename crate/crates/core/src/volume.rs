//! Dense volume containers: f32 scalar fields and boolean masks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::VolumeGeometry;

/// What a scalar volume's values mean; recorded in the on-disk header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeKind {
    /// Absolute temperature in degrees Celsius.
    Temperature,
    /// A binary mask stored as 0.0 / 1.0.
    Mask,
    /// A unitless weight in [0, 1].
    Weight,
}

/// A dense f32 volume in x-fastest layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarVolume {
    pub geometry: VolumeGeometry,
    pub values: Vec<f32>,
}

impl ScalarVolume {
    /// A volume filled with a constant value.
    pub fn filled(geometry: VolumeGeometry, value: f32) -> Self {
        let n = geometry.len();
        Self {
            geometry,
            values: vec![value; n],
        }
    }

    /// Wrap an existing buffer; its length must match the geometry.
    pub fn from_values(geometry: VolumeGeometry, values: Vec<f32>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::IncompatibleShape(format!(
                "volume buffer has {} values, geometry wants {}",
                values.len(),
                geometry.len()
            )));
        }
        Ok(Self { geometry, values })
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize, z: usize) -> f32 {
        self.values[self.geometry.voxel_index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: f32) {
        let i = self.geometry.voxel_index(x, y, z);
        self.values[i] = v;
    }
}

/// A dense boolean volume in x-fastest layout.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskVolume {
    pub geometry: VolumeGeometry,
    pub values: Vec<bool>,
}

impl MaskVolume {
    pub fn filled(geometry: VolumeGeometry, value: bool) -> Self {
        let n = geometry.len();
        Self {
            geometry,
            values: vec![value; n],
        }
    }

    pub fn from_values(geometry: VolumeGeometry, values: Vec<bool>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::IncompatibleShape(format!(
                "mask buffer has {} values, geometry wants {}",
                values.len(),
                geometry.len()
            )));
        }
        Ok(Self { geometry, values })
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize, z: usize) -> bool {
        self.values[self.geometry.voxel_index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: bool) {
        let i = self.geometry.voxel_index(x, y, z);
        self.values[i] = v;
    }

    /// Number of true voxels.
    pub fn count_true(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }

    /// View as 0.0 / 1.0 scalars, e.g. for export.
    pub fn to_scalar(&self) -> ScalarVolume {
        ScalarVolume {
            geometry: self.geometry,
            values: self
                .values
                .iter()
                .map(|&v| if v { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// Rebuild from a 0.0 / 1.0 scalar volume (anything above 0.5 is true).
    pub fn from_scalar(v: &ScalarVolume) -> Self {
        Self {
            geometry: v.geometry,
            values: v.values.iter().map(|&x| x > 0.5).collect(),
        }
    }
}
