//! Exact SNR gain of a matched sequence followed by circular noise, per
//! output index and noise impropriety.

use std::path::PathBuf;

use wlmf_core::filters::{window_at, GainEvaluator};
use wlmf_core::noise::{analytic_covariances, empirical_covariances, sample_circular, trial_rng, NoiseModel};
use wlmf_core::C64;

use super::{mean, noise_stream, signal_stream};
use crate::config::{EstimationMode, ExperimentSpec};
use crate::error::{LabError, LabResult};
use crate::output::{num, write_csv};
use crate::parallel::ordered_map;

pub const HEADER: [&str; 3] = ["n_p", "rho_u", "snr_gain"];

/// Matched sequence for the MA(2) model at `ρ_u = 0.5`, newest sample first.
pub const MATCHED_SEQUENCE: [(f64, f64); 6] = [
    (0.77, 0.13),
    (0.71, 0.25),
    (-0.91, -0.33),
    (-0.87, -0.07),
    (-1.65, -0.62),
    (0.74, 0.27),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCell {
    /// 1-based output index.
    pub n_p: usize,
    pub rho_u: f64,
    pub gain: f64,
}

/// Input of one trial: the matched sequence laid out in time order so that
/// the window at `n_p = 6` reproduces it, then circular Gaussian samples.
pub fn input_signal(len: usize, seed: u64, trial: usize) -> Vec<C64> {
    let mut x: Vec<C64> = MATCHED_SEQUENCE.iter().rev().map(|&(a, b)| C64::new(a, b)).collect();
    let tail = len.saturating_sub(x.len());
    x.extend(sample_circular::<f64, _>(tail, &mut trial_rng(seed, signal_stream(trial))));
    x.truncate(len);
    x
}

pub fn compute(spec: &ExperimentSpec) -> LabResult<Vec<SurfaceCell>> {
    let len = spec.filter_len[0];
    let n = spec.signal_len;
    if n < MATCHED_SEQUENCE.len() {
        return Err(LabError::Config(format!("signal-len must be at least {}", MATCHED_SEQUENCE.len())));
    }
    let outputs = n - len + 1;
    let per_trial = ordered_map(spec.jobs, spec.trials, |trial| {
        let x = input_signal(n, spec.seed, trial);
        spec.rho_u
            .iter()
            .map(|&rho| {
                let model = NoiseModel::reference_ma2(rho)?;
                let cov = match spec.mode {
                    EstimationMode::Analytic => analytic_covariances(&model, len)?,
                    EstimationMode::Empirical => {
                        // Same draws for every rho_u cell of a trial.
                        let v = model.generate(n, &mut trial_rng(spec.seed, noise_stream(trial)))?;
                        empirical_covariances(&v, len)?
                    }
                };
                let eval = GainEvaluator::new(&cov)?;
                (len - 1..n)
                    .map(|end| Ok(eval.gain(&window_at(&x, end, len))?))
                    .collect::<LabResult<Vec<f64>>>()
            })
            .collect::<LabResult<Vec<_>>>()
    })?;
    let mut cells = Vec::with_capacity(outputs * spec.rho_u.len());
    for k in 0..outputs {
        for (j, &rho_u) in spec.rho_u.iter().enumerate() {
            cells.push(SurfaceCell {
                n_p: len + k,
                rho_u,
                gain: mean(per_trial.iter().map(|t| t[j][k])),
            });
        }
    }
    Ok(cells)
}

pub fn write(spec: &ExperimentSpec, cells: &[SurfaceCell]) -> LabResult<Vec<(PathBuf, Vec<u8>)>> {
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| vec![c.n_p.to_string(), num(c.rho_u), num(c.gain)])
        .collect();
    let path = spec.out_dir.join("gain-surface.csv");
    let bytes = write_csv(&path, &HEADER, &rows)?;
    Ok(vec![(path, bytes)])
}
