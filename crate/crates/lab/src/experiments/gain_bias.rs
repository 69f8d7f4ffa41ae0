//! Normalized bias of the approximate SNR gain against the exact one, over a
//! grid of noise impropriety and filter lengths.

use std::path::PathBuf;

use wlmf_core::impropriety::{aut_decompose, normalized_snr_bias_with, AutDecomposition};
use wlmf_core::noise::{analytic_covariances, empirical_covariances, sample_circular, trial_rng, CovariancePair, NoiseModel};

use super::{mean, noise_stream, signal_stream};
use crate::config::{EstimationMode, ExperimentSpec};
use crate::error::LabResult;
use crate::output::{num, write_csv};
use crate::parallel::ordered_map;

pub const HEADER: [&str; 3] = ["rho_u", "filter_len", "normalized_bias"];

#[derive(Debug, Clone, PartialEq)]
pub struct BiasCell {
    pub rho_u: f64,
    pub filter_len: usize,
    pub bias: f64,
}

pub fn compute(spec: &ExperimentSpec) -> LabResult<Vec<BiasCell>> {
    let cells: Vec<(f64, usize)> = spec
        .rho_u
        .iter()
        .flat_map(|&r| spec.filter_len.iter().map(move |&l| (r, l)))
        .collect();
    let exact: Vec<Option<(CovariancePair<f64>, AutDecomposition<f64>)>> = match spec.mode {
        EstimationMode::Analytic => cells
            .iter()
            .map(|&(r, l)| {
                let cov = analytic_covariances(&NoiseModel::reference_ma2(r)?, l)?;
                let aut = aut_decompose(&cov)?;
                Ok(Some((cov, aut)))
            })
            .collect::<LabResult<_>>()?,
        EstimationMode::Empirical => vec![None; cells.len()],
    };
    let trials = spec.trials;
    let n = spec.signal_len;
    let per_task = ordered_map(spec.jobs, cells.len() * trials, |task| {
        let (cell, trial) = (task / trials, task % trials);
        let (rho, len) = cells[cell];
        let x = sample_circular::<f64, _>(n, &mut trial_rng(spec.seed, signal_stream(trial)));
        let bias = match &exact[cell] {
            Some((cov, aut)) => normalized_snr_bias_with(&x, cov, aut, len)?,
            None => {
                let noise = NoiseModel::reference_ma2(rho)?.generate(n, &mut trial_rng(spec.seed, noise_stream(trial)))?;
                let cov = empirical_covariances(&noise, len)?;
                let aut = aut_decompose(&cov)?;
                normalized_snr_bias_with(&x, &cov, &aut, len)?
            }
        };
        Ok(bias)
    })?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(i, &(rho_u, filter_len))| BiasCell {
            rho_u,
            filter_len,
            bias: mean(per_task[i * trials..(i + 1) * trials].iter().copied()),
        })
        .collect())
}

pub fn write(spec: &ExperimentSpec, cells: &[BiasCell]) -> LabResult<Vec<(PathBuf, Vec<u8>)>> {
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| vec![num(c.rho_u), c.filter_len.to_string(), num(c.bias)])
        .collect();
    let path = spec.out_dir.join("gain-bias.csv");
    let bytes = write_csv(&path, &HEADER, &rows)?;
    Ok(vec![(path, bytes)])
}
