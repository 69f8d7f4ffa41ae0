//! Matched-sequence design for the MA(2) noise model.

use std::path::PathBuf;

use serde::Serialize;
use wlmf_core::filters::snr_gain;
use wlmf_core::impropriety::{
    approx_snr_gain, aut_decompose, design_matched_sequence, impropriety_profile, matched_targets, rotated_input,
};
use wlmf_core::noise::{analytic_covariances, NoiseModel};

use crate::config::ExperimentSpec;
use crate::error::LabResult;
use crate::output::write_json;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub rho_u: f64,
    pub filter_len: usize,
    pub lambda_r: Vec<f64>,
    pub lambda_c: Vec<f64>,
    pub rho: Vec<f64>,
    pub offdiag_residual: f64,
    pub target_epsilon: Vec<f64>,
    pub achieved_epsilon: Vec<f64>,
    pub round_trip_error: f64,
    /// Newest sample first.
    pub sequence: Vec<[f64; 2]>,
    pub approx_gain: f64,
    pub exact_gain: f64,
}

pub fn compute(spec: &ExperimentSpec) -> LabResult<DesignReport> {
    let rho_u = spec.rho_u[0];
    let len = spec.filter_len[0];
    let cov = analytic_covariances(&NoiseModel::reference_ma2(rho_u)?, len)?;
    let aut = aut_decompose(&cov)?;
    let targets = matched_targets(&aut)?;
    let x = design_matched_sequence(&aut, None, spec.seed)?;
    let profile = impropriety_profile(&aut, &rotated_input(&x, &aut)?)?;
    let round_trip_error = profile
        .epsilon
        .iter()
        .zip(&targets)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(DesignReport {
        rho_u,
        filter_len: len,
        lambda_r: aut.lambda_r.clone(),
        lambda_c: aut.lambda_c.clone(),
        rho: aut.rho()?,
        offdiag_residual: aut.offdiag_residual,
        target_epsilon: targets,
        achieved_epsilon: profile.epsilon,
        round_trip_error,
        sequence: x.iter().map(|z| [z.re, z.im]).collect(),
        approx_gain: approx_snr_gain(&x, &aut)?,
        exact_gain: snr_gain(&x, &cov)?,
    })
}

pub fn write(spec: &ExperimentSpec, report: &DesignReport) -> LabResult<Vec<(PathBuf, Vec<u8>)>> {
    let path = spec.out_dir.join("design-sequence.json");
    let bytes = write_json(&path, report)?;
    Ok(vec![(path, bytes)])
}
