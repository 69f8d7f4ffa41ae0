//! Experiment specification: defaults per experiment, a flat `key = value`
//! file, and command-line overrides, resolved in that order.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LabError, LabResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "WLMF_OUT_DIR";

/// Keys accepted in config files and as `--key` flags.
pub const KEYS: &[&str] = &[
    "experiment",
    "rho-u",
    "filter-len",
    "signal-len",
    "trials",
    "seed",
    "mode",
    "out-dir",
    "jobs",
    "noise-std",
    "learning-rate",
    "epochs",
    "realizations",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    GainBias,
    GainSurface,
    MfDemo,
    CnnTrain,
    DesignSequence,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::GainBias,
        ExperimentKind::GainSurface,
        ExperimentKind::MfDemo,
        ExperimentKind::CnnTrain,
        ExperimentKind::DesignSequence,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::GainBias => "gain-bias",
            ExperimentKind::GainSurface => "gain-surface",
            ExperimentKind::MfDemo => "mf-demo",
            ExperimentKind::CnnTrain => "cnn-train",
            ExperimentKind::DesignSequence => "design-sequence",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExperimentKind {
    type Err = LabError;

    fn from_str(s: &str) -> LabResult<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.id() == s.trim())
            .ok_or_else(|| LabError::Config(format!("unknown experiment `{s}`")))
    }
}

/// How noise statistics are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimationMode {
    /// Exact covariances of the noise model.
    Analytic,
    /// Sample covariances of one simulated noise record per trial.
    Empirical,
}

impl FromStr for EstimationMode {
    type Err = LabError;

    fn from_str(s: &str) -> LabResult<Self> {
        match s.trim() {
            "analytic" => Ok(EstimationMode::Analytic),
            "empirical" => Ok(EstimationMode::Empirical),
            other => Err(LabError::Config(format!("unknown mode `{other}` (analytic|empirical)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub rho_u: Vec<f64>,
    pub filter_len: Vec<usize>,
    pub signal_len: usize,
    /// Monte Carlo trials; the number of training seeds for `cnn-train`.
    pub trials: usize,
    pub seed: u64,
    pub mode: EstimationMode,
    /// Worker threads; 0 lets the pool decide. Results do not depend on it.
    pub jobs: usize,
    pub noise_std: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub realizations: usize,
    pub out_dir: PathBuf,
}

pub fn default_rho_grid() -> Vec<f64> {
    vec![0.04, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
}

impl ExperimentSpec {
    /// Desk-scale defaults for `kind`.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = Self {
            experiment: kind,
            rho_u: default_rho_grid(),
            filter_len: vec![6],
            signal_len: 10_000,
            trials: 1,
            seed: 2024,
            mode: EstimationMode::Analytic,
            jobs: 1,
            noise_std: 0.1,
            learning_rate: 0.05,
            epochs: 10,
            realizations: 200,
            out_dir: PathBuf::from("results"),
        };
        match kind {
            ExperimentKind::GainBias => Self {
                filter_len: vec![4, 6, 8],
                trials: 5,
                ..base
            },
            ExperimentKind::GainSurface => Self {
                signal_len: 106,
                trials: 200,
                mode: EstimationMode::Empirical,
                ..base
            },
            ExperimentKind::MfDemo => Self {
                rho_u: vec![0.0],
                filter_len: vec![3],
                signal_len: 8,
                ..base
            },
            ExperimentKind::CnnTrain => Self {
                rho_u: vec![0.0],
                filter_len: vec![3],
                signal_len: 8,
                trials: 10,
                ..base
            },
            ExperimentKind::DesignSequence => Self {
                rho_u: vec![0.5],
                ..base
            },
        }
    }

    /// Resolves defaults, then `file` entries, then `overrides`. The output
    /// directory falls back to `env_out_dir` when neither sets it.
    pub fn resolve(
        file: Option<&str>,
        overrides: &BTreeMap<String, String>,
        env_out_dir: Option<String>,
    ) -> LabResult<Self> {
        let mut merged = match file {
            Some(text) => parse_flat(text)?,
            None => BTreeMap::new(),
        };
        for (k, v) in overrides {
            let key = normalize_key(k)?;
            merged.insert(key, v.clone());
        }
        let kind: ExperimentKind = merged
            .get("experiment")
            .ok_or_else(|| LabError::Config("no experiment given".into()))?
            .parse()?;
        let mut spec = Self::defaults(kind);
        if let Some(dir) = env_out_dir.filter(|d| !d.is_empty()) {
            spec.out_dir = PathBuf::from(dir);
        }
        for (key, value) in &merged {
            spec.set(key, value)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> LabResult<()> {
        match key {
            "experiment" => {}
            "rho-u" => self.rho_u = parse_list(key, value)?,
            "filter-len" => self.filter_len = parse_list(key, value)?,
            "signal-len" => self.signal_len = parse_one(key, value)?,
            "trials" => self.trials = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "mode" => self.mode = value.parse()?,
            "out-dir" => self.out_dir = PathBuf::from(value.trim()),
            "jobs" => self.jobs = parse_one(key, value)?,
            "noise-std" => self.noise_std = parse_one(key, value)?,
            "learning-rate" => self.learning_rate = parse_one(key, value)?,
            "epochs" => self.epochs = parse_one(key, value)?,
            "realizations" => self.realizations = parse_one(key, value)?,
            other => return Err(LabError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> LabResult<()> {
        let bad = |msg: String| Err(LabError::Config(msg));
        if self.rho_u.is_empty() || self.filter_len.is_empty() {
            return bad("rho-u and filter-len need at least one value".into());
        }
        if let Some(r) = self.rho_u.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return bad(format!("rho-u value {r} outside [0, 1)"));
        }
        if self.filter_len.contains(&0) {
            return bad("filter-len values must be positive".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let max_len = *self.filter_len.iter().max().expect("nonempty");
        match self.experiment {
            ExperimentKind::GainBias | ExperimentKind::GainSurface if self.signal_len < 10 * max_len => {
                return bad(format!(
                    "signal-len {} must be at least 10 × filter-len ({})",
                    self.signal_len,
                    10 * max_len
                ));
            }
            ExperimentKind::MfDemo | ExperimentKind::CnnTrain if self.signal_len < max_len.max(3) => {
                return bad(format!("signal-len {} too short", self.signal_len));
            }
            _ => {}
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return bad(format!("noise-std {} is invalid", self.noise_std));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning-rate {} is invalid", self.learning_rate));
        }
        if self.epochs == 0 || self.realizations == 0 {
            return bad("epochs and realizations must be at least 1".into());
        }
        Ok(())
    }
}

fn normalize_key(raw: &str) -> LabResult<String> {
    let key = raw.trim().trim_start_matches("--").replace('_', "-");
    if KEYS.contains(&key.as_str()) {
        Ok(key)
    } else {
        Err(LabError::Config(format!("unknown key `{raw}`")))
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_flat(text: &str) -> LabResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        out.insert(normalize_key(k)?, v.trim().to_string());
    }
    Ok(out)
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> LabResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| LabError::Config(format!("cannot parse `{value}` for {key}")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> LabResult<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_one(key, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn cli_overrides_file_overrides_defaults() {
        let file = "experiment = gain-bias\n# comment\ntrials = 3\nseed = 9\n";
        let spec = ExperimentSpec::resolve(Some(file), &map(&[("trials", "7")]), None).unwrap();
        assert_eq!(spec.trials, 7);
        assert_eq!(spec.seed, 9);
        assert_eq!(spec.filter_len, vec![4, 6, 8]);
        assert_eq!(spec.signal_len, 10_000);
    }

    #[test]
    fn env_sets_only_the_default_out_dir() {
        let cli = map(&[("experiment", "mf-demo")]);
        let spec = ExperimentSpec::resolve(None, &cli, Some("/tmp/env".into())).unwrap();
        assert_eq!(spec.out_dir, PathBuf::from("/tmp/env"));
        let cli = map(&[("experiment", "mf-demo"), ("out-dir", "here")]);
        let spec = ExperimentSpec::resolve(None, &cli, Some("/tmp/env".into())).unwrap();
        assert_eq!(spec.out_dir, PathBuf::from("here"));
    }

    #[test]
    fn lists_and_modes() {
        let cli = map(&[
            ("experiment", "gain-surface"),
            ("rho-u", "0.1, 0.5"),
            ("filter_len", "6"),
            ("mode", "analytic"),
        ]);
        let spec = ExperimentSpec::resolve(None, &cli, None).unwrap();
        assert_eq!(spec.rho_u, vec![0.1, 0.5]);
        assert_eq!(spec.mode, EstimationMode::Analytic);
    }

    #[test]
    fn rejects_bad_input() {
        for pairs in [
            vec![("trials", "1")],
            vec![("experiment", "nope")],
            vec![("experiment", "gain-bias"), ("rho-u", "1.0")],
            vec![("experiment", "gain-bias"), ("trials", "0")],
            vec![("experiment", "gain-bias"), ("signal-len", "20")],
            vec![("experiment", "gain-bias"), ("colour", "red")],
            vec![("experiment", "gain-bias"), ("seed", "-1")],
        ] {
            assert!(ExperimentSpec::resolve(None, &map(&pairs), None).is_err(), "{pairs:?}");
        }
        assert!(parse_flat("no equals sign").is_err());
    }
}
