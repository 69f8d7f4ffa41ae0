//! A short noisy signal carrying one feature, filtered by the strictly and
//! widely linear matched filters built for that feature.

use std::path::PathBuf;

use serde::Serialize;
use wlmf_core::filters::{apply_filter_sequence, slmf_solve, template_to_feature, window_at, wlmf_solve};
use wlmf_core::linalg::ComplexMatrix;
use wlmf_core::noise::{sample_circular, trial_rng, CovariancePair};
use wlmf_core::C64;

use super::signal_stream;
use crate::config::ExperimentSpec;
use crate::error::{LabError, LabResult};
use crate::output::{num, write_csv, write_json};

pub const HEADER: [&str; 5] = ["n", "input_re", "input_im", "sl_modulus", "wl_modulus"];

/// Feature in time order.
pub const FEATURE: [(f64, f64); 3] = [(-0.5, -1.0), (1.0, -1.0), (-0.1, -1.0)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MfDemo {
    pub input: Vec<[f64; 2]>,
    /// `None` before the first full window.
    pub sl_modulus: Vec<Option<f64>>,
    pub wl_modulus: Vec<Option<f64>>,
    /// Matched-filter template, the time-reversed conjugate of the feature.
    pub template: Vec<[f64; 2]>,
    pub feature: Vec<[f64; 2]>,
    /// 1-based index of the last feature sample.
    pub feature_end: usize,
    pub sl_peak_n: usize,
    pub wl_peak_n: usize,
    pub sl_peak: f64,
    pub wl_peak: f64,
    pub threshold: f64,
    pub noise_std: f64,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn peak(m: &[Option<f64>]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in m.iter().enumerate() {
        if let Some(v) = *v {
            if v > best.1 {
                best = (i + 1, v);
            }
        }
    }
    best
}

pub fn compute(spec: &ExperimentSpec) -> LabResult<MfDemo> {
    let n = spec.signal_len;
    let len = FEATURE.len();
    if spec.filter_len[0] != len {
        return Err(LabError::Config(format!("mf-demo uses a length-{len} filter")));
    }
    if n < len + 1 {
        return Err(LabError::Config(format!("signal-len must be at least {}", len + 1)));
    }
    let feature: Vec<C64> = FEATURE.iter().map(|&(a, b)| C64::new(a, b)).collect();
    let end = n - 2;
    let mut clean = vec![C64::new(0.0, 0.0); n];
    clean[end + 1 - len..=end].copy_from_slice(&feature);
    let noise = sample_circular::<f64, _>(n, &mut trial_rng(spec.seed, signal_stream(0)));
    let input: Vec<C64> = clean
        .iter()
        .zip(&noise)
        .map(|(c, v)| c + v * spec.noise_std)
        .collect();

    // Filters are matched to the newest-first window of the clean feature.
    let target = window_at(&clean, end, len);
    let var = if spec.noise_std > 0.0 { spec.noise_std * spec.noise_std } else { 1.0 };
    let cov = CovariancePair::proper(ComplexMatrix::identity(len).scale(C64::new(var, 0.0)))?;
    let sl = apply_filter_sequence(&input, &slmf_solve(&target, &cov, 1.0)?)?;
    let wl = apply_filter_sequence(&input, &wlmf_solve(&target, &cov, 1.0)?)?;
    let pad = |y: &[C64]| -> Vec<Option<f64>> {
        std::iter::repeat_n(None, len - 1)
            .chain(y.iter().map(|z| Some(z.norm())))
            .collect()
    };
    let sl_modulus = pad(&sl);
    let wl_modulus = pad(&wl);
    let (sl_peak_n, sl_peak) = peak(&sl_modulus);
    let (wl_peak_n, wl_peak) = peak(&wl_modulus);
    Ok(MfDemo {
        input: pairs(&input),
        sl_modulus,
        wl_modulus,
        template: pairs(&template_to_feature(&feature)?),
        feature: pairs(&feature),
        feature_end: end + 1,
        sl_peak_n,
        wl_peak_n,
        sl_peak,
        wl_peak,
        threshold: 0.5 * sl_peak,
        noise_std: spec.noise_std,
    })
}

pub fn write(spec: &ExperimentSpec, demo: &MfDemo) -> LabResult<Vec<(PathBuf, Vec<u8>)>> {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = (0..demo.input.len())
        .map(|i| {
            vec![
                (i + 1).to_string(),
                num(demo.input[i][0]),
                num(demo.input[i][1]),
                opt(demo.sl_modulus[i]),
                opt(demo.wl_modulus[i]),
            ]
        })
        .collect();
    let csv_path = spec.out_dir.join("mf-demo.csv");
    let csv = write_csv(&csv_path, &HEADER, &rows)?;
    let json_path = spec.out_dir.join("mf-demo.summary.json");
    let json = write_json(&json_path, demo)?;
    Ok(vec![(csv_path, csv), (json_path, json)])
}
