//! The population map: a precomputed per-(x, y) lookup that tells the
//! reconstruction, for every in-plane position, which two rotating half-plane
//! images bracket it, which radial pixel column to read in each, and how to
//! weight the pair. One 2D map serves every z slice because the slice images
//! put z on their row axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cart_to_cyl, signed_angle_delta_deg, VolumeGeometry};
use crate::image::SliceShape;
use crate::sim::TubeSpec;
use crate::volume::{MaskVolume, ScalarVolume};

/// Slice-plane orientation angle for index `index` out of `count` uniformly
/// spaced planes in [0, 180). Shared by the protocol schedule so that both
/// sides produce bit-identical angles.
#[inline]
pub fn orientation_angle(index: usize, count: usize) -> f64 {
    index as f64 * (180.0 / count as f64)
}

/// The set of slice-plane orientations in a protocol, plus the derived
/// half-plane sample angles.
///
/// Each plane at angle `a` in [0, 180) samples two half-planes, at `a` and
/// `a + 180`; the half-plane list is therefore sorted in [0, 360) with the
/// positive sides first, and half-plane `h` belongs to orientation
/// `h % count`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationSet {
    angles: Vec<f64>,
    half_planes: Vec<f64>,
}

impl OrientationSet {
    /// Build from explicit plane angles; they must be strictly increasing
    /// and lie in [0, 180).
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidParameter("empty orientation set".into()));
        }
        for pair in angles.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidParameter(format!(
                    "orientations must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if !angles.iter().all(|a| (0.0..180.0).contains(a)) {
            return Err(Error::InvalidParameter(
                "orientations must lie in [0, 180) deg".into(),
            ));
        }
        let mut half_planes = Vec::with_capacity(angles.len() * 2);
        half_planes.extend_from_slice(&angles);
        half_planes.extend(angles.iter().map(|a| a + 180.0));
        Ok(Self {
            angles,
            half_planes,
        })
    }

    /// `count` uniformly spaced planes starting at 0.
    pub fn uniform(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("empty orientation set".into()));
        }
        Self::new((0..count).map(|j| orientation_angle(j, count)).collect())
    }

    pub fn count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// All 2n half-plane sample angles, sorted in [0, 360).
    pub fn half_plane_angles(&self) -> &[f64] {
        &self.half_planes
    }

    /// Which orientation a half-plane index belongs to.
    #[inline]
    pub fn orientation_of(&self, half_plane: usize) -> usize {
        half_plane % self.angles.len()
    }

    /// True for the `a` side of the plane (positive radial offsets), false
    /// for the `a + 180` side (negative offsets).
    #[inline]
    pub fn is_positive_half(&self, half_plane: usize) -> bool {
        half_plane < self.angles.len()
    }

    /// Exact-match lookup of a plane angle.
    pub fn index_of(&self, orientation_deg: f64) -> Option<usize> {
        self.angles.iter().position(|&a| a == orientation_deg)
    }
}

/// Find the half-plane pair bracketing `theta_deg`: the left partner is the
/// greatest sample angle at or below theta (cyclically), the right partner is
/// the next sample counter-clockwise. Returns half-plane indices.
#[inline]
pub fn find_partners(theta_deg: f64, orientations: &OrientationSet) -> (usize, usize) {
    let hp = &orientations.half_planes;
    let above = hp.partition_point(|a| *a <= theta_deg);
    let left = if above == 0 { hp.len() - 1 } else { above - 1 };
    let right = (left + 1) % hp.len();
    (left, right)
}

/// Cyclic linear interpolation weights for a voxel angle between its two
/// partner half-planes. The first weight belongs to the left partner and is
/// exactly 1 when the voxel lies on it; the pair always sums to exactly 1.
///
/// The arithmetic here must stay bit-identical with the from-scratch path in
/// `ReconstructionEngine::oracle_reconstruct`.
#[inline]
pub fn interp_weights(theta_deg: f64, left_deg: f64, right_deg: f64) -> Result<(f64, f64)> {
    let span = signed_angle_delta_deg(left_deg, right_deg).abs();
    if span == 0.0 {
        return Err(Error::DegeneratePartners(left_deg));
    }
    let off = signed_angle_delta_deg(left_deg, theta_deg).abs();
    let weight_right = off / span;
    let weight_left = 1.0 - weight_right;
    Ok((weight_left, weight_right))
}

/// Nearest radial pixel for radius `r` in the image of half-plane
/// `half_plane` at slice row `z`. Positive half-planes map to columns right
/// of the center column, negative ones to the left. None when the pixel
/// falls outside the image.
#[inline]
pub fn ip_pixel(
    r: f64,
    z: usize,
    half_plane: usize,
    orientations: &OrientationSet,
    shape: &SliceShape,
) -> Option<(usize, usize)> {
    if z >= shape.rows {
        return None;
    }
    let offset = r.round() as i64;
    let col = if orientations.is_positive_half(half_plane) {
        shape.center_col as i64 + offset
    } else {
        shape.center_col as i64 - offset
    };
    if (0..shape.cols as i64).contains(&col) {
        Some((z, col as usize))
    } else {
        None
    }
}

/// How reconstruction reads a partner image along the radial axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialSampling {
    /// Read the single nearest pixel (the precomputed column).
    Nearest,
    /// Blend the two pixels bracketing the exact radius.
    Linear,
}

/// How the heat-sink mask enters the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SinkMode {
    /// Ignore the mask entirely.
    Off,
    /// Masked columns are excluded (validity 0, voxel reports baseline).
    Hard,
    /// Masked columns keep a reduced validity in (0, 1); their temperature
    /// rise above baseline is scaled by it.
    Soft(f64),
}

impl SinkMode {
    pub fn label(&self) -> &'static str {
        match self {
            SinkMode::Off => "off",
            SinkMode::Hard => "hard",
            SinkMode::Soft(_) => "soft",
        }
    }

    pub fn soft_weight(&self) -> Option<f64> {
        match self {
            SinkMode::Soft(w) => Some(*w),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let SinkMode::Soft(w) = self {
            if !(*w > 0.0 && *w < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "soft sink weight must lie in (0, 1), got {w}"
                )));
            }
        }
        Ok(())
    }
}

/// Build-time options for the population map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapOptions {
    pub radial: RadialSampling,
    pub sink: SinkMode,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            radial: RadialSampling::Nearest,
            sink: SinkMode::Off,
        }
    }
}

/// Everything reconstruction needs to know about one in-plane position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationEntry {
    /// In-plane radius from the centerline, voxels.
    pub radius: f64,
    /// Cylindrical angle, degrees in [0, 360).
    pub angle_deg: f64,
    /// General inclusion weight: 0 excludes the whole z-column (it reports
    /// baseline), 1 includes it fully, in-between scales the rise.
    pub validity: f64,
    /// Bracketing half-plane indices.
    pub left_half_plane: u16,
    pub right_half_plane: u16,
    /// Nearest radial pixel column in each partner image (row is the voxel's
    /// z slice). None when the radius leaves the image.
    pub left_col: Option<u32>,
    pub right_col: Option<u32>,
    /// Interpolation weights; sum to exactly 1.
    pub weight_left: f64,
    pub weight_right: f64,
}

/// The precomputed per-(x, y) interpolation map, x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationMap {
    pub geometry: VolumeGeometry,
    pub shape: SliceShape,
    pub orientations: OrientationSet,
    pub options: MapOptions,
    pub entries: Vec<PopulationEntry>,
}

impl PopulationMap {
    #[inline]
    pub fn entry(&self, x: usize, y: usize) -> &PopulationEntry {
        &self.entries[self.geometry.plane_index(x, y)]
    }

    /// True where the map will produce interpolated values (validity > 0),
    /// replicated down every z column.
    pub fn validity_volume(&self) -> MaskVolume {
        let mut values = vec![false; self.geometry.len()];
        let plane = self.geometry.plane_len();
        for (i, e) in self.entries.iter().enumerate() {
            if e.validity > 0.0 {
                for z in 0..self.geometry.nz {
                    values[i + z * plane] = true;
                }
            }
        }
        MaskVolume {
            geometry: self.geometry,
            values,
        }
    }

    /// The left-partner weight channel as a single-slice volume, handy for
    /// visualizing the angular interpolation pattern.
    pub fn weight_volume(&self) -> ScalarVolume {
        let geometry = VolumeGeometry {
            nz: 1,
            ..self.geometry
        };
        ScalarVolume {
            geometry,
            values: self.entries.iter().map(|e| e.weight_left as f32).collect(),
        }
    }
}

/// Radial fov check for one entry under the configured sampling mode: nearest
/// needs the rounded column on both sides, linear needs the floor and ceil
/// columns on both sides. Shared with the map-free reconstruction oracle so
/// both paths agree exactly.
pub(crate) fn radial_columns_in_fov(r: f64, shape: &SliceShape, radial: RadialSampling) -> bool {
    let fits = |offset: i64| {
        let plus = shape.center_col as i64 + offset;
        let minus = shape.center_col as i64 - offset;
        (0..shape.cols as i64).contains(&plus) && (0..shape.cols as i64).contains(&minus)
    };
    match radial {
        RadialSampling::Nearest => fits(r.round() as i64),
        RadialSampling::Linear => fits(r.floor() as i64) && fits(r.ceil() as i64),
    }
}

/// Precompute the interpolation map for a volume.
///
/// The heat-sink mask, when given with a non-off sink mode, zeroes (hard) or
/// reduces (soft) the validity of every in-plane position whose z-column
/// intersects the mask; the mask must share the volume geometry. The slice
/// shape must put one row on each z slice.
pub fn build_population_map(
    geometry: &VolumeGeometry,
    orientations: &OrientationSet,
    heat_sink: Option<&MaskVolume>,
    shape: SliceShape,
    options: MapOptions,
) -> Result<PopulationMap> {
    geometry.validate()?;
    shape.validate()?;
    options.sink.validate()?;
    if shape.rows != geometry.nz {
        return Err(Error::IncompatibleShape(format!(
            "slice images have {} rows but the volume has {} slices",
            shape.rows, geometry.nz
        )));
    }
    if let Some(mask) = heat_sink {
        if mask.geometry != *geometry {
            return Err(Error::GeometryMismatch(
                "heat-sink mask does not share the volume geometry".into(),
            ));
        }
    }

    // Collapse the sink mask to its in-plane footprint: a column is sunk if
    // any of its voxels is masked. With tube axes parallel to z this equals
    // the per-slice footprint.
    let sink_weight = match options.sink {
        SinkMode::Off => None,
        SinkMode::Hard => heat_sink.map(|m| (m, 0.0)),
        SinkMode::Soft(w) => heat_sink.map(|m| (m, w)),
    };
    let footprint: Option<Vec<bool>> = sink_weight.map(|(mask, _)| {
        let plane = geometry.plane_len();
        let mut f = vec![false; plane];
        for z in 0..geometry.nz {
            let base = z * plane;
            for (i, slot) in f.iter_mut().enumerate() {
                *slot |= mask.values[base + i];
            }
        }
        f
    });

    let nx = geometry.nx;
    let entries: Vec<PopulationEntry> = (0..geometry.ny)
        .into_par_iter()
        .flat_map_iter(|y| {
            let footprint = footprint.as_deref();
            (0..nx).map(move |x| {
                let cyl = cart_to_cyl(x as f64, y as f64, 0, geometry);
                let (left, right) = find_partners(cyl.angle_deg, orientations);
                let hp = orientations.half_plane_angles();
                let (weight_left, weight_right) =
                    interp_weights(cyl.angle_deg, hp[left], hp[right])
                        .expect("distinct half-planes cannot be degenerate");
                let left_col =
                    ip_pixel(cyl.radius, 0, left, orientations, &shape).map(|(_, c)| c as u32);
                let right_col =
                    ip_pixel(cyl.radius, 0, right, orientations, &shape).map(|(_, c)| c as u32);
                let in_fov = radial_columns_in_fov(cyl.radius, &shape, options.radial);
                let validity = if !in_fov {
                    0.0
                } else {
                    match (footprint, sink_weight) {
                        (Some(f), Some((_, w))) if f[geometry.plane_index(x, y)] => w,
                        _ => 1.0,
                    }
                };
                PopulationEntry {
                    radius: cyl.radius,
                    angle_deg: cyl.angle_deg,
                    validity,
                    left_half_plane: left as u16,
                    right_half_plane: right as u16,
                    left_col,
                    right_col,
                    weight_left,
                    weight_right,
                }
            })
        })
        .collect();

    Ok(PopulationMap {
        geometry: *geometry,
        shape,
        orientations: orientations.clone(),
        options,
        entries,
    })
}

/// Rasterize cooling tubes into a heat-sink mask: every voxel whose in-plane
/// distance to a tube axis is at most the tube's outer radius is marked, on
/// every slice (tube axes run parallel to z).
pub fn rasterize_tubes(geometry: &VolumeGeometry, tubes: &[TubeSpec]) -> Result<MaskVolume> {
    geometry.validate()?;
    for t in tubes {
        t.validate()?;
    }
    let mut mask = MaskVolume::filled(*geometry, false);
    let plane = geometry.plane_len();
    for y in 0..geometry.ny {
        for x in 0..geometry.nx {
            let hit = tubes.iter().any(|t| {
                let dx = (x as f64 - t.center_xy_vox.0) * geometry.sx;
                let dy = (y as f64 - t.center_xy_vox.1) * geometry.sy;
                (dx * dx + dy * dy).sqrt() <= t.outer_radius_mm
            });
            if hit {
                let i = geometry.plane_index(x, y);
                for z in 0..geometry.nz {
                    mask.values[i + z * plane] = true;
                }
            }
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geom() -> VolumeGeometry {
        VolumeGeometry::new((128, 128, 4), (1.0, 1.0, 5.0), (64.0, 64.0)).unwrap()
    }

    #[test]
    fn uniform_set_spaces_planes_evenly() {
        let set = OrientationSet::uniform(8).unwrap();
        let expected = [0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5];
        assert_eq!(set.angles(), &expected);
        assert_eq!(set.half_plane_angles().len(), 16);
        assert_eq!(set.half_plane_angles()[8], 180.0);
        assert_eq!(set.half_plane_angles()[15], 337.5);
        assert_eq!(set.orientation_of(15), 7);
        assert!(set.is_positive_half(7));
        assert!(!set.is_positive_half(8));
        assert_eq!(set.index_of(112.5), Some(5));
        assert_eq!(set.index_of(30.0), None);
    }

    #[test]
    fn orientation_set_rejects_bad_angle_lists() {
        assert!(OrientationSet::new(vec![]).is_err());
        assert!(OrientationSet::new(vec![0.0, 0.0]).is_err());
        assert!(OrientationSet::new(vec![10.0, 5.0]).is_err());
        assert!(OrientationSet::new(vec![0.0, 180.0]).is_err());
        assert!(OrientationSet::uniform(0).is_err());
    }

    #[test]
    fn partners_bracket_the_angle() {
        let set = OrientationSet::uniform(8).unwrap();
        // Between the 22.5 and 45 half-planes.
        assert_eq!(find_partners(30.0, &set), (1, 2));
        // Exactly on a sample: that sample is the left partner.
        assert_eq!(find_partners(0.0, &set), (0, 1));
        assert_eq!(find_partners(45.0, &set), (2, 3));
        // Wrap-around: between 337.5 and 360 == 0.
        assert_eq!(find_partners(350.0, &set), (15, 0));
        // Negative half-plane region.
        assert_eq!(find_partners(200.0, &set), (8, 9));
    }

    #[test]
    fn weights_interpolate_linearly_along_the_arc() {
        // Hand arithmetic: offset 7.5 of span 22.5 puts 2/3 on the left.
        let (w1, w2) = interp_weights(30.0, 22.5, 45.0).unwrap();
        assert!((w1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((w2 - 1.0 / 3.0).abs() < 1e-12);
        // On the left partner itself the left weight is exactly 1.
        let (w1, w2) = interp_weights(45.0, 45.0, 67.5).unwrap();
        assert_eq!(w1, 1.0);
        assert_eq!(w2, 0.0);
        // Across the wrap seam.
        let (w1, _) = interp_weights(350.0, 337.5, 0.0).unwrap();
        assert!((w1 - (1.0 - 12.5 / 22.5)).abs() < 1e-12);
        assert!(matches!(
            interp_weights(10.0, 22.5, 22.5),
            Err(Error::DegeneratePartners(_))
        ));
    }

    #[test]
    fn weight_pair_swaps_with_its_partners() {
        let (w1, w2) = interp_weights(30.0, 22.5, 45.0).unwrap();
        let (s1, s2) = interp_weights(30.0, 45.0, 22.5).unwrap();
        assert!((s1 - w2).abs() < 1e-12);
        assert!((s2 - w1).abs() < 1e-12);
    }

    #[test]
    fn radial_pixels_round_to_the_nearest_column() {
        let set = OrientationSet::uniform(8).unwrap();
        let shape = SliceShape::new(4, 256, 128).unwrap();
        assert_eq!(ip_pixel(10.4, 2, 0, &set, &shape), Some((2, 138)));
        assert_eq!(ip_pixel(10.4, 2, 8, &set, &shape), Some((2, 118)));
        assert_eq!(ip_pixel(10.5, 0, 0, &set, &shape), Some((0, 139)));
        // Radius beyond the image on either side.
        assert_eq!(ip_pixel(130.0, 0, 0, &set, &shape), None);
        assert_eq!(ip_pixel(130.0, 0, 8, &set, &shape), None);
        // Row outside the slice stack.
        assert_eq!(ip_pixel(1.0, 4, 0, &set, &shape), None);
    }

    #[test]
    fn map_marks_out_of_fov_columns_invalid() {
        let g = geom();
        let set = OrientationSet::uniform(8).unwrap();
        let shape = SliceShape::for_geometry(&g);
        let map = build_population_map(&g, &set, None, shape, MapOptions::default()).unwrap();
        assert_eq!(map.entries.len(), 128 * 128);
        // A corner voxel sits ~90 voxels out: beyond the 64-column half-width.
        assert_eq!(map.entry(0, 0).validity, 0.0);
        assert_eq!(map.entry(0, 0).right_col, None);
        // Near the centerline everything is valid.
        let e = map.entry(64, 80);
        assert_eq!(e.validity, 1.0);
        assert_eq!(e.angle_deg, 0.0);
        assert_eq!(e.radius, 16.0);
        // Exactly on the first half-plane: full weight there, none on the
        // bracket neighbor. Both partners read the same positive-side column.
        assert_eq!(e.left_half_plane, 0);
        assert_eq!(e.right_half_plane, 1);
        assert_eq!(e.weight_left, 1.0);
        assert_eq!(e.weight_right, 0.0);
        assert_eq!(e.left_col, Some(64 + 16));
        assert_eq!(e.right_col, Some(64 + 16));
    }

    #[test]
    fn map_respects_the_sink_mode() {
        let g = geom();
        let set = OrientationSet::uniform(8).unwrap();
        let shape = SliceShape::for_geometry(&g);
        let tube = TubeSpec {
            center_xy_vox: (70.0, 64.0),
            outer_radius_mm: 2.5,
            influence_radius_mm: 2.5,
            sink_strength: 1.0,
        };
        let sink = rasterize_tubes(&g, &[tube]).unwrap();

        let hard = MapOptions {
            radial: RadialSampling::Nearest,
            sink: SinkMode::Hard,
        };
        let map = build_population_map(&g, &set, Some(&sink), shape, hard).unwrap();
        assert_eq!(map.entry(70, 64).validity, 0.0);
        assert_eq!(map.entry(80, 64).validity, 1.0);

        let soft = MapOptions {
            radial: RadialSampling::Nearest,
            sink: SinkMode::Soft(0.5),
        };
        let map = build_population_map(&g, &set, Some(&sink), shape, soft).unwrap();
        assert_eq!(map.entry(70, 64).validity, 0.5);

        let off = MapOptions {
            radial: RadialSampling::Nearest,
            sink: SinkMode::Off,
        };
        let map = build_population_map(&g, &set, Some(&sink), shape, off).unwrap();
        assert_eq!(map.entry(70, 64).validity, 1.0);

        assert!(SinkMode::Soft(1.5).validate().is_err());
    }

    #[test]
    fn map_rejects_mismatched_inputs() {
        let g = geom();
        let set = OrientationSet::uniform(8).unwrap();
        let bad_shape = SliceShape::new(3, 128, 64).unwrap();
        assert!(matches!(
            build_population_map(&g, &set, None, bad_shape, MapOptions::default()),
            Err(Error::IncompatibleShape(_))
        ));
        let other = VolumeGeometry::new((64, 64, 4), (1.0, 1.0, 5.0), (32.0, 32.0)).unwrap();
        let sink = MaskVolume::filled(other, false);
        let shape = SliceShape::for_geometry(&g);
        let opts = MapOptions {
            radial: RadialSampling::Nearest,
            sink: SinkMode::Hard,
        };
        assert!(matches!(
            build_population_map(&g, &set, Some(&sink), shape, opts),
            Err(Error::GeometryMismatch(_))
        ));
    }

    #[test]
    fn map_build_is_deterministic() {
        let g = geom();
        let set = OrientationSet::uniform(8).unwrap();
        let shape = SliceShape::for_geometry(&g);
        let a = build_population_map(&g, &set, None, shape, MapOptions::default()).unwrap();
        let b = build_population_map(&g, &set, None, shape, MapOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tube_rasterization_matches_disk_enumeration() {
        let g = VolumeGeometry::new((32, 32, 3), (1.0, 1.0, 5.0), (16.0, 16.0)).unwrap();
        let tube = TubeSpec {
            center_xy_vox: (16.0, 16.0),
            outer_radius_mm: 2.5,
            influence_radius_mm: 2.5,
            sink_strength: 1.0,
        };
        let mask = rasterize_tubes(&g, &[tube]).unwrap();
        // Independent enumeration of lattice points with x^2 + y^2 <= 2.5^2.
        let mut per_slice = 0usize;
        for dy in -3i64..=3 {
            for dx in -3i64..=3 {
                if ((dx * dx + dy * dy) as f64).sqrt() <= 2.5 {
                    per_slice += 1;
                }
            }
        }
        assert_eq!(per_slice, 21);
        assert_eq!(mask.count_true(), per_slice * 3);
        assert!(mask.at(18, 17, 1));
        assert!(!mask.at(19, 18, 1));
    }

    proptest! {
        /// The weight pair always sums to exactly 1, whatever the geometry.
        #[test]
        fn weights_sum_to_one_exactly(
            theta in 0.0f64..360.0,
            n in 1usize..12,
        ) {
            let set = OrientationSet::uniform(n).unwrap();
            let (l, r) = find_partners(theta, &set);
            let hp = set.half_plane_angles();
            let (w1, w2) = interp_weights(theta, hp[l], hp[r]).unwrap();
            prop_assert_eq!(w1 + w2, 1.0);
            prop_assert!((0.0..=1.0).contains(&w1));
            prop_assert!((0.0..=1.0).contains(&w2));
        }

        /// The chosen partners actually bracket the angle cyclically.
        #[test]
        fn partners_really_bracket(theta in 0.0f64..360.0, n in 1usize..12) {
            let set = OrientationSet::uniform(n).unwrap();
            let (l, r) = find_partners(theta, &set);
            let hp = set.half_plane_angles();
            let span = signed_angle_delta_deg(hp[l], hp[r]).abs();
            let off = signed_angle_delta_deg(hp[l], theta).abs();
            prop_assert!(off <= span + 1e-9);
        }
    }
}
