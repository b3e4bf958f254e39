//! The dataset manifest: everything a simulated run wrote, with SHA-256
//! checksums so replay can prove the inputs are intact before trusting them.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thermo25d::{AcquisitionParams, PhantomSpec};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Checksums for one header/payload file pair, addressed by its base name
/// (the stored paths are relative to the dataset directory).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilePair {
    pub base: String,
    pub sha256_json: String,
    pub sha256_raw: String,
}

/// Role of one image in the acquisition protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileRole {
    Reference,
    Live,
}

/// One acquired image: role, plane, completion time, and checksums.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub role: FileRole,
    pub orientation_deg: f64,
    pub timestamp_s: f64,
    #[serde(flatten)]
    pub pair: FilePair,
}

/// Schedule parameters as they were run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleInfo {
    /// Plane angles of one sweep, in acquisition order.
    pub order_deg: Vec<f64>,
    pub period_s: f64,
    pub pause_s: f64,
    pub sweeps: usize,
}

/// The forward-model truth written next to the images.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthInfo {
    pub temperature: FilePair,
    pub coagulation: FilePair,
    /// Time the truth was sampled at: the last image, or 0 with no sweeps.
    pub time_s: f64,
}

/// The dataset manifest, written last so its presence implies completeness.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub phantom: PhantomSpec,
    pub acquisition: AcquisitionParams,
    pub schedule: ScheduleInfo,
    pub threshold_c: f64,
    pub refs_per_orientation: usize,
    pub truth: TruthInfo,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_NAME);
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("bad manifest {}", path.display()))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let json = serde_json::to_vec_pretty(self)?;
        thermo25d::io::atomic_write(&dir.join(MANIFEST_NAME), &json)?;
        Ok(())
    }

    /// Verify every checksum in the manifest against the files on disk.
    /// Fails on the first missing or altered file, naming it.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for entry in &self.files {
            verify_pair(dir, &entry.pair)?;
        }
        self.verify_truth(dir)
    }

    /// Verify only the ground-truth volumes (all `evaluate` reads).
    pub fn verify_truth(&self, dir: &Path) -> Result<()> {
        verify_pair(dir, &self.truth.temperature)?;
        verify_pair(dir, &self.truth.coagulation)?;
        Ok(())
    }
}

/// Hash one file to a lowercase hex SHA-256 digest.
pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read {} for checksumming", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Checksum an already-written header/payload pair under `dir`.
pub fn checksum_pair(dir: &Path, base: &str) -> Result<FilePair> {
    Ok(FilePair {
        base: base.to_string(),
        sha256_json: sha256_file(&dir.join(format!("{base}.json")))?,
        sha256_raw: sha256_file(&dir.join(format!("{base}.raw")))?,
    })
}

fn verify_pair(dir: &Path, pair: &FilePair) -> Result<()> {
    for (suffix, expected) in [("json", &pair.sha256_json), ("raw", &pair.sha256_raw)] {
        let path = dir.join(format!("{}.{suffix}", pair.base));
        let actual = sha256_file(&path)?;
        if actual != *expected {
            bail!(
                "checksum mismatch in {}: the file was altered or truncated",
                path.display()
            );
        }
    }
    Ok(())
}

/// The dataset-relative base path of an image pair for `verify`-passed reads.
pub fn image_base(dir: &Path, entry: &FileEntry) -> PathBuf {
    dir.join(&entry.pair.base)
}

/// Guard against base names escaping the dataset directory.
pub fn validate_base_name(base: &str) -> Result<()> {
    let p = Path::new(base);
    if p.is_absolute()
        || p.components()
            .any(|c| matches!(c, std::path::Component::ParentDir))
    {
        return Err(anyhow!(
            "manifest base name '{base}' points outside the dataset"
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    #[test]
    fn sha256_matches_the_known_empty_and_abc_digests() {
        let dir = TempDir::new().unwrap();
        let empty = dir.path().join("empty");
        std::fs::write(&empty, b"").unwrap();
        assert_eq!(
            sha256_file(&empty).unwrap(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        let abc = dir.path().join("abc");
        std::fs::write(&abc, b"abc").unwrap();
        assert_eq!(
            sha256_file(&abc).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn verification_flags_a_single_flipped_bit() {
        let dir = TempDir::new().unwrap();
        std::fs::write(dir.path().join("img.p25d.json"), b"{}").unwrap();
        std::fs::write(dir.path().join("img.p25d.raw"), [0u8, 1, 2, 3]).unwrap();
        let pair = checksum_pair(dir.path(), "img.p25d").unwrap();
        assert!(verify_pair(dir.path(), &pair).is_ok());
        std::fs::write(dir.path().join("img.p25d.raw"), [0u8, 1, 2, 2]).unwrap();
        let err = verify_pair(dir.path(), &pair).unwrap_err();
        assert!(err.to_string().contains("img.p25d.raw"), "{err}");
    }

    #[test]
    fn base_names_cannot_escape_the_dataset() {
        assert!(validate_base_name("live_0003.p25d").is_ok());
        assert!(validate_base_name("sub/img.p25d").is_ok());
        assert!(validate_base_name("../img.p25d").is_err());
        assert!(validate_base_name("/etc/img.p25d").is_err());
    }
}
