//! Volume geometry and the cylindrical coordinate frame around the applicator.
//!
//! All in-plane math here works in voxel units; physical spacing only matters
//! to file metadata and to the simulator, which converts mm quantities into
//! voxels before calling into this module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape and placement of a reconstruction volume.
///
/// Voxels are addressed x-fastest: `index = x + nx * (y + ny * z)`. The
/// centerline (the applicator axis) runs parallel to z through the in-plane
/// point `(xc, yc)`, given in fractional voxel coordinates.
///
/// Serializes as `{"dims": [nx, ny, nz], "spacing": [sx, sy, sz],
/// "centerline": [xc, yc]}`, the shape used by the on-disk volume headers
/// and the phantom/config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "GeometryRepr", try_from = "GeometryRepr")]
pub struct VolumeGeometry {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Voxel spacing in mm along x, y, z.
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    /// In-plane centerline position in voxel coordinates.
    pub xc: f64,
    pub yc: f64,
}

impl VolumeGeometry {
    pub fn new(
        dims: (usize, usize, usize),
        spacing: (f64, f64, f64),
        centerline: (f64, f64),
    ) -> Result<Self> {
        let g = Self {
            nx: dims.0,
            ny: dims.1,
            nz: dims.2,
            sx: spacing.0,
            sy: spacing.1,
            sz: spacing.2,
            xc: centerline.0,
            yc: centerline.1,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || self.nz == 0 {
            return Err(Error::InvalidParameter(format!(
                "volume dims must all be >= 1, got {}x{}x{}",
                self.nx, self.ny, self.nz
            )));
        }
        if !(self.sx > 0.0 && self.sy > 0.0 && self.sz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "voxel spacing must be positive, got ({}, {}, {})",
                self.sx, self.sy, self.sz
            )));
        }
        if !(self.xc >= 0.0 && self.xc < self.nx as f64)
            || !(self.yc >= 0.0 && self.yc < self.ny as f64)
        {
            return Err(Error::InvalidParameter(format!(
                "centerline ({}, {}) outside volume {}x{}",
                self.xc, self.yc, self.nx, self.ny
            )));
        }
        Ok(())
    }

    /// Total voxel count.
    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of voxel (x, y, z), x-fastest.
    #[inline]
    pub fn voxel_index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.nx && y < self.ny && z < self.nz);
        x + self.nx * (y + self.ny * z)
    }

    /// Flat index of the in-plane position (x, y), x-fastest.
    #[inline]
    pub fn plane_index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.nx && y < self.ny);
        x + self.nx * y
    }

    /// Number of in-plane positions (one z-column each).
    pub fn plane_len(&self) -> usize {
        self.nx * self.ny
    }
}

/// Wire format for [`VolumeGeometry`].
#[derive(Serialize, Deserialize)]
struct GeometryRepr {
    dims: [usize; 3],
    spacing: [f64; 3],
    centerline: [f64; 2],
}

impl From<VolumeGeometry> for GeometryRepr {
    fn from(g: VolumeGeometry) -> Self {
        Self {
            dims: [g.nx, g.ny, g.nz],
            spacing: [g.sx, g.sy, g.sz],
            centerline: [g.xc, g.yc],
        }
    }
}

impl TryFrom<GeometryRepr> for VolumeGeometry {
    type Error = Error;

    fn try_from(r: GeometryRepr) -> Result<Self> {
        Self::new(
            (r.dims[0], r.dims[1], r.dims[2]),
            (r.spacing[0], r.spacing[1], r.spacing[2]),
            (r.centerline[0], r.centerline[1]),
        )
    }
}

/// Position of a voxel in the cylindrical frame: in-plane radius in voxels,
/// angle in degrees in [0, 360), and the slice index along the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylCoord {
    pub radius: f64,
    pub angle_deg: f64,
    pub z: usize,
}

/// Normalize an angle in degrees into [0, 360).
#[inline]
pub fn wrap_angle_deg(a: f64) -> f64 {
    let w = a.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs.
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Smallest signed difference `b - a` on the circle, in [-180, 180).
#[inline]
pub fn signed_angle_delta_deg(a: f64, b: f64) -> f64 {
    let w = (b - a + 180.0).rem_euclid(360.0);
    if w >= 360.0 {
        -180.0
    } else {
        w - 180.0
    }
}

/// Map an in-plane voxel position to cylindrical coordinates around the
/// centerline. The angle is measured from the +y direction toward +x, i.e.
/// `atan2(x - xc, y - yc)` normalized into [0, 360); a voxel exactly on the
/// centerline reports angle 0 by convention.
#[inline]
pub fn cart_to_cyl(x: f64, y: f64, z: usize, geometry: &VolumeGeometry) -> CylCoord {
    let dx = x - geometry.xc;
    let dy = y - geometry.yc;
    let radius = (dx * dx + dy * dy).sqrt();
    let angle_deg = if radius == 0.0 {
        0.0
    } else {
        wrap_angle_deg(dx.atan2(dy).to_degrees())
    };
    CylCoord {
        radius,
        angle_deg,
        z,
    }
}
