use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wlmf_lab::config::{ExperimentSpec, OUT_DIR_ENV};
use wlmf_lab::{run, LabError, LabResult, RunReport};

/// Runs one widely linear matched filter experiment and writes CSV/JSON
/// results plus a manifest into the output directory.
#[derive(Debug, Parser)]
#[command(name = "wlmf-lab", version)]
struct Cli {
    /// Flat `key = value` file; keys are the long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    /// gain-bias | gain-surface | mf-demo | cnn-train | design-sequence
    #[arg(long)]
    experiment: Option<String>,
    /// Comma-separated impropriety grid.
    #[arg(long = "rho-u")]
    rho_u: Option<String>,
    /// Comma-separated filter lengths.
    #[arg(long = "filter-len")]
    filter_len: Option<String>,
    #[arg(long = "signal-len")]
    signal_len: Option<String>,
    /// Monte Carlo trials (training seeds for cnn-train).
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// analytic | empirical
    #[arg(long)]
    mode: Option<String>,
    /// Defaults to $WLMF_OUT_DIR, then ./results.
    #[arg(long = "out-dir")]
    out_dir: Option<String>,
    /// Worker threads, 0 for all cores. Outputs are identical for any value.
    #[arg(long)]
    jobs: Option<String>,
    #[arg(long = "noise-std")]
    noise_std: Option<String>,
    #[arg(long = "learning-rate")]
    learning_rate: Option<String>,
    #[arg(long)]
    epochs: Option<String>,
    #[arg(long)]
    realizations: Option<String>,
}

impl Cli {
    fn overrides(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("experiment", &self.experiment),
            ("rho-u", &self.rho_u),
            ("filter-len", &self.filter_len),
            ("signal-len", &self.signal_len),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("out-dir", &self.out_dir),
            ("jobs", &self.jobs),
            ("noise-std", &self.noise_std),
            ("learning-rate", &self.learning_rate),
            ("epochs", &self.epochs),
            ("realizations", &self.realizations),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn execute(cli: &Cli) -> LabResult<RunReport> {
    let file = match &cli.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| LabError::Io {
            path: path.clone(),
            source: e,
        })?),
        None => None,
    };
    let spec = ExperimentSpec::resolve(file.as_deref(), &cli.overrides(), std::env::var(OUT_DIR_ENV).ok())?;
    run(&spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            let body = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            });
            eprintln!("{body}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
