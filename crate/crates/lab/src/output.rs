//! CSV/JSON writers and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentSpec;
use crate::error::{LabError, LabResult};

/// Decimal text with 16 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.15e}")
}

/// Writes `rows` under `header` to `path` and returns the bytes written.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> LabResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::io(path, e.into_error()))?;
    fs::write(path, &bytes).map_err(|e| LabError::io(path, e))?;
    Ok(bytes)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, &bytes).map_err(|e| LabError::io(path, e))?;
    Ok(bytes)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

impl OutputDigest {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        Self {
            file: path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned()),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub spec: ExperimentSpec,
    pub library_version: &'static str,
    pub master_seed: u64,
    pub seed_rule: &'static str,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<OutputDigest>,
}

/// Files produced by one run, manifest last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn ensure_dir(dir: &Path) -> LabResult<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_sixteen_digits() {
        assert_eq!(num(0.5), "5.000000000000000e-1");
        assert_eq!(num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(num(-2.25e10), "-2.250000000000000e10");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
