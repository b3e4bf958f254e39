//! Phase-difference thermometry: reference averaging, wrapped phase
//! subtraction, and the linear phase-to-temperature conversion.
//!
//! Temperatures are assumed to stay within one phase wrap of the baseline
//! (one wrap spans roughly 212 degC at the default constants), so no
//! multi-wrap unwrapping is attempted anywhere in this module.

use crate::error::{Error, Result};
use crate::image::{wrap_phase_f32, AcquisitionParams, PhaseImage, SliceShape};

/// Averaged baseline phase for one orientation.
///
/// The mean is circular (per-pixel phasor average), so references straddling
/// the +-pi seam average onto the seam instead of cancelling to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    pub shape: SliceShape,
    pub orientation_deg: f64,
    /// Per-pixel circular mean phase in [-pi, pi).
    pub mean_phase: Vec<f32>,
    /// How many images went into the average.
    pub count: usize,
    pub params: AcquisitionParams,
}

/// One orientation's live temperatures, ready for volume interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceThermometry {
    pub shape: SliceShape,
    pub orientation_deg: f64,
    /// Absolute temperature in degC per pixel.
    pub temps: Vec<f32>,
    pub timestamp_s: f64,
}

/// Average a set of baseline images for one orientation into a reference.
///
/// All images must share orientation, shape, and acquisition parameters.
/// A pixel whose phasors cancel exactly reports mean 0 by convention.
pub fn average_references(images: &[PhaseImage]) -> Result<ReferenceSet> {
    let first = images.first().ok_or(Error::NoReferences)?;
    for img in &images[1..] {
        if img.orientation_deg != first.orientation_deg {
            return Err(Error::IncompatibleReference(format!(
                "orientations {} and {} deg mixed in one reference set",
                first.orientation_deg, img.orientation_deg
            )));
        }
        if img.shape != first.shape {
            return Err(Error::IncompatibleReference(format!(
                "shape {:?} does not match {:?}",
                img.shape, first.shape
            )));
        }
        if img.params != first.params {
            return Err(Error::IncompatibleReference(
                "acquisition parameters differ between references".into(),
            ));
        }
    }

    let n = first.shape.len();
    let mut mean_phase = Vec::with_capacity(n);
    for i in 0..n {
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for img in images {
            let p = img.pixels[i] as f64;
            re += p.cos();
            im += p.sin();
        }
        // atan2(0, 0) = 0 covers the fully cancelled case.
        mean_phase.push(wrap_phase_f32(im.atan2(re)));
    }

    Ok(ReferenceSet {
        shape: first.shape,
        orientation_deg: first.orientation_deg,
        mean_phase,
        count: images.len(),
        params: first.params,
    })
}

/// Per-pixel wrapped difference `current - reference`, in [-pi, pi).
pub fn phase_difference(current: &PhaseImage, reference: &ReferenceSet) -> Result<Vec<f32>> {
    if current.orientation_deg != reference.orientation_deg {
        return Err(Error::OrientationMismatch {
            expected: reference.orientation_deg,
            got: current.orientation_deg,
        });
    }
    if current.shape != reference.shape {
        return Err(Error::IncompatibleReference(format!(
            "live shape {:?} does not match reference shape {:?}",
            current.shape, reference.shape
        )));
    }
    Ok(current
        .pixels
        .iter()
        .zip(&reference.mean_phase)
        .map(|(&cur, &base)| wrap_phase_f32(cur as f64 - base as f64))
        .collect())
}

/// Convert one wrapped phase difference to an absolute temperature:
/// `T = dphi / (gamma * alpha * B0 * TE) + t0`.
#[inline]
pub fn prfs_temperature(dphi: f64, params: &AcquisitionParams) -> f64 {
    dphi / params.phase_per_celsius() + params.t0_c
}

/// Pair a live image with its reference and produce per-pixel temperatures.
pub fn build_slice_thermometry(
    current: &PhaseImage,
    reference: &ReferenceSet,
) -> Result<SliceThermometry> {
    let dphi = phase_difference(current, reference)?;
    let temps = dphi
        .iter()
        .map(|&d| prfs_temperature(d as f64, &current.params) as f32)
        .collect();
    Ok(SliceThermometry {
        shape: current.shape,
        orientation_deg: current.orientation_deg,
        temps,
        timestamp_s: current.timestamp_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::wrap_phase;
    use proptest::prelude::*;

    fn image_with(pixels: Vec<f32>, orientation: f64, t: f64) -> PhaseImage {
        let shape = SliceShape::new(1, pixels.len(), pixels.len() / 2).unwrap();
        PhaseImage::new(shape, pixels, orientation, t, AcquisitionParams::default()).unwrap()
    }

    /// Scalar phasor-mean oracle, written independently of the library path.
    fn circular_mean_oracle(phases: &[f64]) -> f64 {
        let re: f64 = phases.iter().map(|p| p.cos()).sum();
        let im: f64 = phases.iter().map(|p| p.sin()).sum();
        im.atan2(re)
    }

    #[test]
    fn averaging_is_circular_not_arithmetic() {
        // Two phases straddling the seam: +3 and -3 rad. Their arithmetic
        // mean is 0; the phasor mean sits on the seam at +-pi.
        let expected = circular_mean_oracle(&[3.0, -3.0]);
        assert!((expected.abs() - std::f64::consts::PI).abs() < 1e-12);
        let refs = vec![
            image_with(vec![3.0, 0.1], 0.0, 0.0),
            image_with(vec![-3.0, 0.3], 0.0, 0.0),
        ];
        let avg = average_references(&refs).unwrap();
        // Circular distance to pi is what matters; the stored value is the
        // -pi side of the seam.
        let d = wrap_phase(avg.mean_phase[0] as f64 - std::f64::consts::PI).abs();
        assert!(d < 1e-6, "seam mean came out as {}", avg.mean_phase[0]);
        let plain = circular_mean_oracle(&[0.1, 0.3]);
        assert!((avg.mean_phase[1] as f64 - plain).abs() < 1e-6);
        assert_eq!(avg.count, 2);
    }

    #[test]
    fn averaging_rejects_mixed_sets() {
        assert!(matches!(average_references(&[]), Err(Error::NoReferences)));
        let refs = vec![
            image_with(vec![0.0, 0.0], 0.0, 0.0),
            image_with(vec![0.0, 0.0], 22.5, 0.0),
        ];
        assert!(matches!(
            average_references(&refs),
            Err(Error::IncompatibleReference(_))
        ));
    }

    #[test]
    fn difference_wraps_across_the_seam() {
        // Current -3 rad against reference +3 rad: the naive difference -6
        // re-wraps to -6 + 2*pi = +0.2831853... rad.
        let expected = wrap_phase(-6.0);
        assert!((expected - 0.283_185_307_179_586_2).abs() < 1e-12);
        let reference = average_references(&[image_with(vec![3.0], 0.0, 0.0)]).unwrap();
        let current = image_with(vec![-3.0], 0.0, 6.1);
        let d = phase_difference(&current, &reference).unwrap();
        assert!((d[0] as f64 - expected).abs() < 1e-6);
    }

    #[test]
    fn difference_refuses_wrong_orientation() {
        let reference = average_references(&[image_with(vec![0.0], 22.5, 0.0)]).unwrap();
        let current = image_with(vec![0.0], 45.0, 6.1);
        assert!(matches!(
            phase_difference(&current, &reference),
            Err(Error::OrientationMismatch { .. })
        ));
    }

    #[test]
    fn one_phase_unit_per_degree() {
        // Feeding exactly the rad/degC constant as a phase difference must
        // report one degree above baseline.
        let params = AcquisitionParams::default();
        let k = std::f64::consts::TAU * 42.576e6 * (0.01 * 1e-6) * 1.5 * 3.69e-3;
        let t = prfs_temperature(k, &params);
        assert!((t - (params.t0_c + 1.0)).abs() < 1e-9);
        assert_eq!(prfs_temperature(0.0, &params), params.t0_c);
    }

    #[test]
    fn slice_thermometry_recovers_known_delta() {
        let params = AcquisitionParams::default();
        let k = params.phase_per_celsius();
        let reference = average_references(&[image_with(vec![0.0, 0.0], 90.0, 0.0)]).unwrap();
        let current = image_with(
            vec![wrap_phase_f32(37.0 * k), wrap_phase_f32(-12.0 * k)],
            90.0,
            6.1,
        );
        let s = build_slice_thermometry(&current, &reference).unwrap();
        assert!((s.temps[0] as f64 - (params.t0_c + 37.0)).abs() < 1e-4);
        assert!((s.temps[1] as f64 - (params.t0_c - 12.0)).abs() < 1e-4);
        assert_eq!(s.timestamp_s, 6.1);
        assert_eq!(s.orientation_deg, 90.0);
    }

    proptest! {
        /// Encoding a temperature rise as a phase shift and decoding it again
        /// is the identity up to f32 phase quantization, for any baseline
        /// phase, as long as the rise stays within one wrap.
        #[test]
        fn roundtrip_through_phase(
            delta_c in -100.0f64..100.0,
            base_phase in -3.0f64..3.0,
        ) {
            let params = AcquisitionParams::default();
            let k = params.phase_per_celsius();
            let reference =
                average_references(&[image_with(vec![wrap_phase_f32(base_phase)], 0.0, 0.0)])
                    .unwrap();
            let current =
                image_with(vec![wrap_phase_f32(base_phase + delta_c * k)], 0.0, 1.0);
            let s = build_slice_thermometry(&current, &reference).unwrap();
            let recovered = s.temps[0] as f64 - params.t0_c;
            prop_assert!(
                (recovered - delta_c).abs() < 1e-3,
                "delta {} recovered as {}",
                delta_c,
                recovered
            );
        }

        /// The conversion is affine in the phase difference.
        #[test]
        fn conversion_is_affine(d1 in -3.0f64..3.0, d2 in -3.0f64..3.0) {
            let params = AcquisitionParams::default();
            let t1 = prfs_temperature(d1, &params);
            let t2 = prfs_temperature(d2, &params);
            let mid = prfs_temperature((d1 + d2) / 2.0, &params);
            prop_assert!((mid - (t1 + t2) / 2.0).abs() < 1e-9);
        }
    }
}
