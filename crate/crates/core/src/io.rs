//! On-disk formats. Every artifact is a pair of files sharing a base name:
//! a small JSON header carrying shape and metadata, and a raw little-endian
//! binary payload. Pairs are written atomically (temp file, then rename),
//! with the header renamed last so a visible header always points at a
//! complete payload.
//!
//! Formats: `<base>.json` + `<base>.raw` where base ends in
//! - `.v25d` — scalar volume, nx·ny·nz f32 values, x-fastest;
//! - `.p25d` — phase image, rows·cols f32 radians, row-major;
//! - `.pmap25d` — population map records, 36 bytes per in-plane position.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::VolumeGeometry;
use crate::image::{AcquisitionParams, PhaseImage, SliceShape};
use crate::popmap::{PopulationMap, RadialSampling, SinkMode};
use crate::volume::{MaskVolume, ScalarVolume, VolumeKind};

fn header_path(base: &Path) -> PathBuf {
    let mut p = base.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

fn raw_path(base: &Path) -> PathBuf {
    let mut p = base.as_os_str().to_owned();
    p.push(".raw");
    PathBuf::from(p)
}

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Write bytes to `path` atomically: write a temp file next to it, then
/// rename over the destination, so readers never observe partial content.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| format_error(path, "path has no file name"))?;
    let tmp = dir.join(format!(".tmp-{}", name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

fn write_pair(base: &Path, header_json: Vec<u8>, raw: Vec<u8>) -> Result<()> {
    atomic_write(&raw_path(base), &raw)?;
    atomic_write(&header_path(base), &header_json)?;
    Ok(())
}

fn read_header<T: for<'de> Deserialize<'de>>(base: &Path) -> Result<T> {
    let path = header_path(base);
    let text = fs::read_to_string(&path)
        .map_err(|e| format_error(&path, format!("cannot read header: {e}")))?;
    serde_json::from_str(&text).map_err(|e| format_error(&path, format!("bad header: {e}")))
}

fn read_raw_f32(base: &Path, expected: usize) -> Result<Vec<f32>> {
    let path = raw_path(base);
    let bytes =
        fs::read(&path).map_err(|e| format_error(&path, format!("cannot read payload: {e}")))?;
    if bytes.len() != expected * 4 {
        return Err(format_error(
            &path,
            format!(
                "payload holds {} bytes, header implies {}",
                bytes.len(),
                expected * 4
            ),
        ));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn f32_bytes(values: impl IntoIterator<Item = f32>, capacity: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(capacity * 4);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

// ---------------------------------------------------------------------------
// v25d: scalar volumes and masks.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VolumeHeader {
    dims: [usize; 3],
    spacing: [f64; 3],
    centerline: [f64; 2],
    dtype: String,
    byte_order: String,
    order: String,
    kind: VolumeKind,
}

/// Write a scalar volume as `<base>.json` + `<base>.raw`.
pub fn write_volume(base: &Path, volume: &ScalarVolume, kind: VolumeKind) -> Result<()> {
    let g = &volume.geometry;
    let header = VolumeHeader {
        dims: [g.nx, g.ny, g.nz],
        spacing: [g.sx, g.sy, g.sz],
        centerline: [g.xc, g.yc],
        dtype: "f32".into(),
        byte_order: "little".into(),
        order: "x-fastest".into(),
        kind,
    };
    let json = serde_json::to_vec(&header)?;
    let raw = f32_bytes(volume.values.iter().copied(), volume.values.len());
    write_pair(base, json, raw)
}

/// Read a scalar volume pair; returns the values and the declared kind.
pub fn read_volume(base: &Path) -> Result<(ScalarVolume, VolumeKind)> {
    let header: VolumeHeader = read_header(base)?;
    let hpath = header_path(base);
    if header.dtype != "f32" {
        return Err(format_error(
            &hpath,
            format!("unsupported dtype '{}'", header.dtype),
        ));
    }
    if header.byte_order != "little" {
        return Err(format_error(
            &hpath,
            format!("unsupported byte order '{}'", header.byte_order),
        ));
    }
    if header.order != "x-fastest" {
        return Err(format_error(
            &hpath,
            format!("unsupported order '{}'", header.order),
        ));
    }
    let geometry = VolumeGeometry::new(
        (header.dims[0], header.dims[1], header.dims[2]),
        (header.spacing[0], header.spacing[1], header.spacing[2]),
        (header.centerline[0], header.centerline[1]),
    )
    .map_err(|e| format_error(&hpath, e.to_string()))?;
    let values = read_raw_f32(base, geometry.len())?;
    Ok((ScalarVolume { geometry, values }, header.kind))
}

/// Write a boolean mask as a v25d volume of 0.0/1.0 values.
pub fn write_mask(base: &Path, mask: &MaskVolume) -> Result<()> {
    write_volume(base, &mask.to_scalar(), VolumeKind::Mask)
}

/// Read a v25d pair that must be kind "mask"; values above 0.5 count as set.
pub fn read_mask(base: &Path) -> Result<MaskVolume> {
    let (volume, kind) = read_volume(base)?;
    if kind != VolumeKind::Mask {
        return Err(format_error(
            &header_path(base),
            format!("expected a mask volume, found kind '{kind:?}'"),
        ));
    }
    Ok(MaskVolume::from_scalar(&volume))
}

// ---------------------------------------------------------------------------
// p25d: phase images.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseHeader {
    rows: usize,
    cols: usize,
    center_col: usize,
    orientation_deg: f64,
    timestamp_s: f64,
    te_s: f64,
    b0_t: f64,
    alpha_ppm_per_c: f64,
    gamma_rad_per_s_t: f64,
}

/// Write a phase image as `<base>.json` + `<base>.raw`. The baseline
/// temperature is intentionally not part of the header; run metadata owns it.
pub fn write_phase_image(base: &Path, image: &PhaseImage) -> Result<()> {
    let header = PhaseHeader {
        rows: image.shape.rows,
        cols: image.shape.cols,
        center_col: image.shape.center_col,
        orientation_deg: image.orientation_deg,
        timestamp_s: image.timestamp_s,
        te_s: image.params.te_s,
        b0_t: image.params.b0_t,
        alpha_ppm_per_c: image.params.alpha_ppm_per_c,
        gamma_rad_per_s_t: image.params.gamma_rad_per_s_t,
    };
    let json = serde_json::to_vec(&header)?;
    let raw = f32_bytes(image.pixels.iter().copied(), image.pixels.len());
    write_pair(base, json, raw)
}

/// Read a phase image pair. `t0_c` supplies the baseline temperature the
/// header does not carry.
pub fn read_phase_image(base: &Path, t0_c: f64) -> Result<PhaseImage> {
    let header: PhaseHeader = read_header(base)?;
    let hpath = header_path(base);
    let shape = SliceShape::new(header.rows, header.cols, header.center_col)
        .map_err(|e| format_error(&hpath, e.to_string()))?;
    let params = AcquisitionParams {
        gamma_rad_per_s_t: header.gamma_rad_per_s_t,
        alpha_ppm_per_c: header.alpha_ppm_per_c,
        b0_t: header.b0_t,
        te_s: header.te_s,
        t0_c,
    };
    let pixels = read_raw_f32(base, shape.len())?;
    PhaseImage::new(
        shape,
        pixels,
        header.orientation_deg,
        header.timestamp_s,
        params,
    )
    .map_err(|e| format_error(&hpath, e.to_string()))
}

// ---------------------------------------------------------------------------
// pmap25d: population-map records.
// ---------------------------------------------------------------------------

/// Column sentinel for a radius outside the image.
pub const PMAP_NO_COLUMN: i32 = -1;

/// Field roster of one 36-byte record, in on-disk order.
const PMAP_RECORD: [&str; 9] = [
    "r:f32",
    "theta:f32",
    "i_w:f32",
    "left_hp:i32",
    "right_hp:i32",
    "ip_left_col:i32",
    "ip_right_col:i32",
    "w1:f32",
    "w2:f32",
];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PmapHeader {
    dims: [usize; 3],
    spacing: [f64; 3],
    centerline: [f64; 2],
    rows: usize,
    cols: usize,
    center_col: usize,
    orientations_deg: Vec<f64>,
    radial_sampling: RadialSampling,
    heat_sink_mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    soft_weight: Option<f64>,
    record: Vec<String>,
    byte_order: String,
    entries: usize,
}

/// One exported population-map record. Interpolation pixel rows are not
/// stored: the row equals the voxel's z slice for every entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopmapRecord {
    pub r: f32,
    pub theta: f32,
    pub i_w: f32,
    pub left_hp: i32,
    pub right_hp: i32,
    /// Radial pixel column in the left/right partner image, or
    /// `PMAP_NO_COLUMN` when the radius leaves the image.
    pub ip_left_col: i32,
    pub ip_right_col: i32,
    pub w1: f32,
    pub w2: f32,
}

const PMAP_RECORD_BYTES: usize = 36;

/// Export a population map as `<base>.json` + `<base>.raw` with one record
/// per in-plane position, x-fastest. The export narrows values to f32 and is
/// meant for inspection and golden tests, not for lossless round-trips.
pub fn write_population_map(base: &Path, map: &PopulationMap) -> Result<()> {
    let g = &map.geometry;
    let header = PmapHeader {
        dims: [g.nx, g.ny, g.nz],
        spacing: [g.sx, g.sy, g.sz],
        centerline: [g.xc, g.yc],
        rows: map.shape.rows,
        cols: map.shape.cols,
        center_col: map.shape.center_col,
        orientations_deg: map.orientations.angles().to_vec(),
        radial_sampling: map.options.radial,
        heat_sink_mode: map.options.sink.label().to_string(),
        soft_weight: map.options.sink.soft_weight(),
        record: PMAP_RECORD.iter().map(|s| s.to_string()).collect(),
        byte_order: "little".into(),
        entries: map.entries.len(),
    };
    let json = serde_json::to_vec(&header)?;
    let mut raw = Vec::with_capacity(map.entries.len() * PMAP_RECORD_BYTES);
    for e in &map.entries {
        raw.extend_from_slice(&(e.radius as f32).to_le_bytes());
        raw.extend_from_slice(&(e.angle_deg as f32).to_le_bytes());
        raw.extend_from_slice(&(e.validity as f32).to_le_bytes());
        raw.extend_from_slice(&(e.left_half_plane as i32).to_le_bytes());
        raw.extend_from_slice(&(e.right_half_plane as i32).to_le_bytes());
        let col = |c: Option<u32>| c.map_or(PMAP_NO_COLUMN, |c| c as i32);
        raw.extend_from_slice(&col(e.left_col).to_le_bytes());
        raw.extend_from_slice(&col(e.right_col).to_le_bytes());
        raw.extend_from_slice(&(e.weight_left as f32).to_le_bytes());
        raw.extend_from_slice(&(e.weight_right as f32).to_le_bytes());
    }
    write_pair(base, json, raw)
}

/// Shape and protocol metadata read back from a pmap25d header.
#[derive(Debug, Clone, PartialEq)]
pub struct PopmapInfo {
    pub geometry: VolumeGeometry,
    pub shape: SliceShape,
    pub orientations_deg: Vec<f64>,
    pub radial: RadialSampling,
    pub sink: SinkMode,
}

/// Read back an exported population map for inspection or golden comparison.
pub fn read_population_map_records(base: &Path) -> Result<(PopmapInfo, Vec<PopmapRecord>)> {
    let header: PmapHeader = read_header(base)?;
    let hpath = header_path(base);
    if header.byte_order != "little" {
        return Err(format_error(
            &hpath,
            format!("unsupported byte order '{}'", header.byte_order),
        ));
    }
    if header.record != PMAP_RECORD {
        return Err(format_error(&hpath, "unknown record layout".to_string()));
    }
    let geometry = VolumeGeometry::new(
        (header.dims[0], header.dims[1], header.dims[2]),
        (header.spacing[0], header.spacing[1], header.spacing[2]),
        (header.centerline[0], header.centerline[1]),
    )
    .map_err(|e| format_error(&hpath, e.to_string()))?;
    let shape = SliceShape::new(header.rows, header.cols, header.center_col)
        .map_err(|e| format_error(&hpath, e.to_string()))?;
    if header.entries != geometry.plane_len() {
        return Err(format_error(
            &hpath,
            format!(
                "{} entries for a {} voxel plane",
                header.entries,
                geometry.plane_len()
            ),
        ));
    }
    let sink = match (header.heat_sink_mode.as_str(), header.soft_weight) {
        ("off", None) => SinkMode::Off,
        ("hard", None) => SinkMode::Hard,
        ("soft", Some(w)) => SinkMode::Soft(w),
        (mode, weight) => {
            return Err(format_error(
                &hpath,
                format!("inconsistent sink mode '{mode}' with weight {weight:?}"),
            ));
        }
    };
    let path = raw_path(base);
    let bytes =
        fs::read(&path).map_err(|e| format_error(&path, format!("cannot read payload: {e}")))?;
    if bytes.len() != header.entries * PMAP_RECORD_BYTES {
        return Err(format_error(
            &path,
            format!(
                "payload holds {} bytes, header implies {}",
                bytes.len(),
                header.entries * PMAP_RECORD_BYTES
            ),
        ));
    }
    let records = bytes
        .chunks_exact(PMAP_RECORD_BYTES)
        .map(|c| {
            let f = |i: usize| f32::from_le_bytes([c[i], c[i + 1], c[i + 2], c[i + 3]]);
            let n = |i: usize| i32::from_le_bytes([c[i], c[i + 1], c[i + 2], c[i + 3]]);
            PopmapRecord {
                r: f(0),
                theta: f(4),
                i_w: f(8),
                left_hp: n(12),
                right_hp: n(16),
                ip_left_col: n(20),
                ip_right_col: n(24),
                w1: f(28),
                w2: f(32),
            }
        })
        .collect();
    Ok((
        PopmapInfo {
            geometry,
            shape,
            orientations_deg: header.orientations_deg,
            radial: header.radial_sampling,
            sink,
        },
        records,
    ))
}
