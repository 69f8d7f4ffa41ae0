//! The five experiments. Each has a `compute` returning plain data and a
//! `write` turning it into files under the output directory.

pub mod cnn_train;
pub mod design_sequence;
pub mod gain_bias;
pub mod gain_surface;
pub mod mf_demo;

use std::path::PathBuf;

use crate::config::{ExperimentKind, ExperimentSpec};
use crate::error::LabResult;
use crate::output::{ensure_dir, timestamp, write_json, OutputDigest, RunManifest, RunReport};

pub const SEED_RULE: &str = "trial t: noise from ChaCha8 seeded with the master seed on stream 2t, \
input signal on stream 2t+1; cnn-train seed index k trains with master seed + k";

/// Noise stream of trial `t`.
pub fn noise_stream(trial: usize) -> u64 {
    2 * trial as u64
}

/// Input-signal stream of trial `t`.
pub fn signal_stream(trial: usize) -> u64 {
    2 * trial as u64 + 1
}

/// Runs `spec`, writes its outputs and manifest, and reports the paths.
pub fn run(spec: &ExperimentSpec) -> LabResult<RunReport> {
    spec.validate()?;
    ensure_dir(&spec.out_dir)?;
    let started_at = timestamp();
    let files: Vec<(PathBuf, Vec<u8>)> = match spec.experiment {
        ExperimentKind::GainBias => gain_bias::write(spec, &gain_bias::compute(spec)?)?,
        ExperimentKind::GainSurface => gain_surface::write(spec, &gain_surface::compute(spec)?)?,
        ExperimentKind::MfDemo => mf_demo::write(spec, &mf_demo::compute(spec)?)?,
        ExperimentKind::CnnTrain => cnn_train::write(spec, &cnn_train::compute(spec)?)?,
        ExperimentKind::DesignSequence => design_sequence::write(spec, &design_sequence::compute(spec)?)?,
    };
    let manifest = RunManifest {
        experiment: spec.experiment.id().to_string(),
        spec: spec.clone(),
        library_version: env!("CARGO_PKG_VERSION"),
        master_seed: spec.seed,
        seed_rule: SEED_RULE,
        started_at,
        finished_at: timestamp(),
        outputs: files.iter().map(|(p, b)| OutputDigest::new(p, b)).collect(),
    };
    let manifest_path = spec.out_dir.join(format!("{}.manifest.json", spec.experiment.id()));
    write_json(&manifest_path, &manifest)?;
    Ok(RunReport {
        experiment: spec.experiment.id().to_string(),
        outputs: files.into_iter().map(|(p, _)| p).collect(),
        manifest: manifest_path,
    })
}

pub(crate) fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}
