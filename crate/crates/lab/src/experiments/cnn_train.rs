//! Strictly and widely linear CNNs trained side by side on the two-pattern task.

use std::path::PathBuf;

use serde::Serialize;
use wlmf_core::cnn::{train, CnnConfig, ConvMode, TrainOutcome};

use crate::config::ExperimentSpec;
use crate::error::LabResult;
use crate::output::{num, write_csv, write_json};
use crate::parallel::ordered_map;

pub const HEADER: [&str; 4] = ["iteration", "mode", "pattern", "probability"];

const MODES: [ConvMode; 2] = [ConvMode::Strict, ConvMode::Widely];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub sl_first_sustained: Option<usize>,
    pub wl_first_sustained: Option<usize>,
    pub sl_final: [f64; 2],
    pub wl_final: [f64; 2],
}

impl SeedSummary {
    /// WL reached sustained correctness and did so strictly before SL.
    pub fn wl_earlier(&self) -> bool {
        match (self.wl_first_sustained, self.sl_first_sustained) {
            (Some(w), Some(s)) => w < s,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnnRun {
    pub threshold: f64,
    pub iterations: usize,
    pub seeds: Vec<SeedSummary>,
    pub wl_earlier: usize,
    pub sl_converged: usize,
    pub wl_converged: usize,
    /// `(iteration, [SL p1, SL p2, WL p1, WL p2])` averaged over seeds.
    #[serde(skip)]
    pub mean_trace: Vec<(usize, [f64; 4])>,
}

pub fn config(spec: &ExperimentSpec) -> CnnConfig {
    CnnConfig {
        input_len: spec.signal_len,
        filter_len: spec.filter_len[0],
        learning_rate: spec.learning_rate,
        epochs: spec.epochs,
        realizations_per_epoch: spec.realizations,
        ..CnnConfig::default()
    }
}

pub fn compute(spec: &ExperimentSpec) -> LabResult<CnnRun> {
    let base = config(spec);
    let seeds = spec.trials;
    let runs: Vec<TrainOutcome<f64>> = ordered_map(spec.jobs, 2 * seeds, |task| {
        let seed = spec.seed.wrapping_add((task / 2) as u64);
        Ok(train(&base.with_mode(MODES[task % 2]), seed)?)
    })?;
    let threshold = runs[0].threshold;
    let summaries: Vec<SeedSummary> = runs
        .chunks(2)
        .enumerate()
        .map(|(k, pair)| SeedSummary {
            seed: spec.seed.wrapping_add(k as u64),
            sl_first_sustained: pair[0].first_sustained,
            wl_first_sustained: pair[1].first_sustained,
            sl_final: pair[0].final_probability(),
            wl_final: pair[1].final_probability(),
        })
        .collect();
    let ok = |p: &[f64; 2]| p.iter().all(|&v| v > threshold);
    let rows = runs[0].trace.len();
    let mean_trace = (0..rows)
        .map(|i| {
            let mut acc = [0.0; 4];
            for pair in runs.chunks(2) {
                for (m, run) in pair.iter().enumerate() {
                    acc[2 * m] += run.trace[i].probability[0];
                    acc[2 * m + 1] += run.trace[i].probability[1];
                }
            }
            (runs[0].trace[i].iteration, acc.map(|v| v / seeds as f64))
        })
        .collect();
    Ok(CnnRun {
        threshold,
        iterations: base.iterations(),
        wl_earlier: summaries.iter().filter(|s| s.wl_earlier()).count(),
        sl_converged: summaries.iter().filter(|s| ok(&s.sl_final)).count(),
        wl_converged: summaries.iter().filter(|s| ok(&s.wl_final)).count(),
        seeds: summaries,
        mean_trace,
    })
}

pub fn write(spec: &ExperimentSpec, run: &CnnRun) -> LabResult<Vec<(PathBuf, Vec<u8>)>> {
    let mut rows = Vec::with_capacity(run.mean_trace.len() * 4);
    for (iteration, p) in &run.mean_trace {
        for (m, mode) in MODES.iter().enumerate() {
            for pattern in 0..2 {
                rows.push(vec![
                    iteration.to_string(),
                    mode.label().to_string(),
                    (pattern + 1).to_string(),
                    num(p[2 * m + pattern]),
                ]);
            }
        }
    }
    let csv_path = spec.out_dir.join("cnn-train.csv");
    let csv = write_csv(&csv_path, &HEADER, &rows)?;
    let json_path = spec.out_dir.join("cnn-train.summary.json");
    let json = write_json(&json_path, run)?;
    Ok(vec![(csv_path, csv), (json_path, json)])
}
