//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use wlmf_core::cnn::{backward, cross_entropy, forward, kink_margin, make_dataset, CnnParams, ConvMode, LabeledSignal};
use wlmf_core::filters::{snr_gain, snr_slmf, snr_wlmf, wlmf_solve, wlmf_solve_block};
use wlmf_core::impropriety::{aut_decompose, g_of_rho, lower_bound_rho};
use wlmf_core::linalg::{takagi, ComplexMatrix};
use wlmf_core::noise::{analytic_covariances, random_covariance_pair, sample_circular, trial_rng, NoiseModel};
use wlmf_core::{Matrix64, C64};
use wlmf_lab::experiments::{cnn_train, gain_bias, gain_surface, mf_demo};
use wlmf_lab::{ExperimentKind, ExperimentSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn nonzero_input(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    loop {
        let x: Vec<C64> = sample_circular(n, rng);
        if norm(&x) > 1e-3 {
            return x;
        }
    }
}

fn proper_noise_doubling() -> Outcome {
    let mut rng = trial_rng(101, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let r = random_covariance_pair::<f64, _>(n, 0.0, 0.05, &mut rng).unwrap().r;
        let cov = wlmf_core::noise::CovariancePair::proper(r).unwrap();
        let x = nonzero_input(n, &mut rng);
        let sl = snr_slmf(&x, &cov).unwrap();
        let wl = snr_wlmf(&x, &cov).unwrap();
        worst = worst.max(rel(wl, 2.0 * sl));
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.2e} (tol 1e-10)"))
}

fn gain_positivity() -> Outcome {
    let mut rng = trial_rng(102, 0);
    let mut min_gain = f64::INFINITY;
    let mut zero_ok = true;
    for _ in 0..500 {
        let n = rng.random_range(1..=8);
        let kappa = rng.random_range(0.0..1.5);
        let cov = random_covariance_pair::<f64, _>(n, kappa, 0.05, &mut rng).unwrap();
        let x = nonzero_input(n, &mut rng);
        min_gain = min_gain.min(snr_gain(&x, &cov).unwrap());
        zero_ok &= snr_gain(&vec![C64::new(0.0, 0.0); n], &cov).unwrap() == 0.0;
    }
    outcome(
        min_gain > 0.0 && zero_ok,
        format!("min gain {min_gain:.3e}, gain(0) == 0: {zero_ok}"),
    )
}

fn dual_path() -> Outcome {
    let mut rng = trial_rng(103, 0);
    let (mut worst_path, mut worst_pair): (f64, f64) = (0.0, 0.0);
    for i in 0..200 {
        let n = i % 8 + 1;
        let kappa = rng.random_range(0.0..1.5);
        let cov = random_covariance_pair::<f64, _>(n, kappa, 0.05, &mut rng).unwrap();
        let x = nonzero_input(n, &mut rng);
        let a = wlmf_solve(&x, &cov, 1.0).unwrap();
        let b = wlmf_solve_block(&x, &cov, 1.0).unwrap();
        let (wa, wb) = (a.augmented(), b.augmented());
        let diff: Vec<C64> = wa.iter().zip(&wb).map(|(p, q)| p - q).collect();
        worst_path = worst_path.max(norm(&diff) / norm(&wa));
        worst_pair = worst_pair.max(a.pairing_defect()).max(b.pairing_defect());
    }
    outcome(
        worst_path <= 1e-9 && worst_pair <= 1e-10,
        format!("path difference {worst_path:.2e} (tol 1e-9), f1 vs conj(f2) {worst_pair:.2e} (tol 1e-10)"),
    )
}

fn lower_bound() -> Outcome {
    let step = 1e-4;
    let mut worst_arg: f64 = 0.0;
    let mut worst_val: f64 = 0.0;
    for eps in [-0.8, -0.3, 0.0, 0.2, 0.5, 0.6, 0.8, 0.95] {
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for k in 0..=9990 {
            let rho = k as f64 * step;
            let g = g_of_rho(rho, eps).unwrap();
            if g < best {
                best = g;
                arg = rho;
            }
        }
        let root = lower_bound_rho(eps);
        worst_arg = worst_arg.max((arg - root).abs());
        if eps > 0.0 {
            worst_val = worst_val.max((g_of_rho(root, eps).unwrap() - (1.0 - eps * eps).sqrt()).abs());
        }
    }
    outcome(
        worst_arg <= step && worst_val <= 1e-10,
        format!("argmin offset {worst_arg:.2e} (tol 1e-4), |g(root) - sqrt(1-eps^2)| {worst_val:.2e} (tol 1e-10)"),
    )
}

fn ma2_aut_values() -> Outcome {
    let cov = analytic_covariances(&NoiseModel::reference_ma2(0.5).unwrap(), 6).unwrap();
    let aut = aut_decompose(&cov).unwrap();
    let rho = aut.rho().unwrap();
    let lr: [f64; 6] = [0.98, 0.93, 0.86, 0.77, 0.70, 0.65];
    let rp: [f64; 6] = [0.41, 0.43, 0.46, 0.51, 0.56, 0.60];
    let dl = (0..6).map(|i| (aut.lambda_r[i] - lr[i]).abs()).fold(0.0, f64::max);
    let dc = aut.lambda_c.iter().map(|p: &f64| (p - 0.40).abs()).fold(0.0, f64::max);
    let dr = (0..6).map(|i| (rho[i] - rp[i]).abs()).fold(0.0, f64::max);
    outcome(
        dl <= 0.02 && dc <= 0.01 && dr <= 0.02,
        format!("max deviation lambda_r {dl:.4} (0.02), lambda_c {dc:.4} (0.01), rho {dr:.4} (0.02)"),
    )
}

fn bias_trend() -> Outcome {
    let spec = ExperimentSpec {
        jobs: 0,
        ..ExperimentSpec::defaults(ExperimentKind::GainBias)
    };
    let cells = gain_bias::compute(&spec).unwrap();
    let min = cells.iter().map(|c| c.bias).fold(f64::INFINITY, f64::min);
    let low = cells
        .iter()
        .filter(|c| c.rho_u <= 0.1)
        .map(|c| c.bias)
        .fold(f64::NEG_INFINITY, f64::max);
    let at = |rho: f64, l: usize| {
        cells
            .iter()
            .find(|c| (c.rho_u - rho).abs() < 1e-12 && c.filter_len == l)
            .unwrap()
            .bias
    };
    let rising = [4, 6, 8].iter().all(|&l| at(0.04, l) < at(0.8, l));
    outcome(
        min >= -1e-6 && rising && low < 0.02,
        format!(
            "N = {}, {} trials: min bias {min:.3e} (>= -1e-6), max at rho_u <= 0.1 {low:.3e} (< 0.02), \
             rises 0.04 -> 0.8 for L = 4, 6, 8: {rising}",
            spec.signal_len, spec.trials
        ),
    )
}

fn surface_minimum() -> Outcome {
    let spec = ExperimentSpec {
        jobs: 0,
        ..ExperimentSpec::defaults(ExperimentKind::GainSurface)
    };
    let cells = gain_surface::compute(&spec).unwrap();
    let all_positive = cells.iter().all(|c| c.gain > 0.0);
    let slice: Vec<_> = cells.iter().filter(|c| c.n_p == 6).collect();
    let best = slice
        .iter()
        .min_by(|a, b| a.gain.partial_cmp(&b.gain).unwrap())
        .unwrap();
    let grid = &spec.rho_u;
    let pos = grid.iter().position(|&r| r == best.rho_u).unwrap();
    let half = grid.iter().position(|&r| (r - 0.5).abs() < 1e-12).unwrap();
    outcome(
        all_positive && pos.abs_diff(half) <= 1,
        format!(
            "{} trials: all gains positive: {all_positive}, n_p = 6 minimum at rho_u = {}",
            spec.trials, best.rho_u
        ),
    )
}

fn demo_peaks() -> Outcome {
    let demo = mf_demo::compute(&ExperimentSpec::defaults(ExperimentKind::MfDemo)).unwrap();
    outcome(
        demo.sl_peak_n == 7 && demo.wl_peak_n == 7 && demo.wl_peak > demo.sl_peak,
        format!(
            "peaks at n = {} (SL) and {} (WL), moduli {:.4} vs {:.4}",
            demo.sl_peak_n, demo.wl_peak_n, demo.sl_peak, demo.wl_peak
        ),
    )
}

fn loss(p: &CnnParams<f64>, s: &LabeledSignal<f64>) -> f64 {
    cross_entropy(&forward(&s.x, p).unwrap(), &s.t)
}

fn cnn_gradients() -> Outcome {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for mode in [ConvMode::Strict, ConvMode::Widely] {
        let mut rng = trial_rng(109, mode as u64);
        let data = make_dataset::<f64>(100, 109).unwrap();
        let mut done = 0;
        while done < 20 {
            let mut p = CnnParams::random(mode, 3, 3, 1.0, &mut rng);
            for b in p.b_r.iter_mut().chain(p.b_i.iter_mut()) {
                *b = rng.random_range(-0.3..0.3);
            }
            let s = &data[rng.random_range(0..data.len())];
            if kink_margin(&forward(&s.x, &p).unwrap(), &p) < 1e-3 {
                continue;
            }
            let (grad, _) = backward(s, &p).unwrap();
            for (i, an) in grad.real_values().enumerate() {
                let mut hi = p.clone();
                *hi.real_values_mut()[i] += h;
                let mut lo = p.clone();
                *lo.real_values_mut()[i] -= h;
                let fd = (loss(&hi, s) - loss(&lo, s)) / (2.0 * h);
                worst = worst.max((fd - an).abs() / fd.abs().max(an.abs()).max(1e-4));
            }
            done += 1;
        }
    }
    outcome(
        worst <= 1e-5,
        format!("20 configurations per mode, max relative error {worst:.2e} (tol 1e-5)"),
    )
}

fn training_order() -> Outcome {
    let spec = ExperimentSpec {
        jobs: 0,
        ..ExperimentSpec::defaults(ExperimentKind::CnnTrain)
    };
    let run = cnn_train::compute(&spec).unwrap();
    let seeds = run.seeds.len();
    outcome(
        run.wl_earlier >= 7 && 2 * run.sl_converged > seeds && 2 * run.wl_converged > seeds,
        format!(
            "WL earlier on {}/{seeds} seeds (>= 7); above 0.9 after {} epochs: SL {}/{seeds}, WL {}/{seeds}",
            run.wl_earlier, spec.epochs, run.sl_converged, run.wl_converged
        ),
    )
}

fn takagi_suite() -> Outcome {
    let mut rng = trial_rng(111, 0);
    let (mut rec, mut uni): (f64, f64) = (0.0, 0.0);
    let mut sorted = true;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let a = ComplexMatrix::from_row_major(n, n, sample_circular(n * n, &mut rng)).unwrap();
        let c: Matrix64 = a.add(&a.transpose()).unwrap();
        let t = takagi(&c).unwrap();
        rec = rec.max(t.reconstruct().sub(&c).unwrap().frobenius_norm() / c.frobenius_norm());
        uni = uni.max((&t.q * &t.q.adjoint()).sub(&Matrix64::identity(n)).unwrap().frobenius_norm());
        sorted &= t.values.windows(2).all(|w| w[0] >= w[1]) && t.values.iter().all(|&v| v >= 0.0);
    }
    outcome(
        rec <= 1e-8 && uni <= 1e-10 && sorted,
        format!("reconstruction {rec:.2e} (tol 1e-8), unitarity {uni:.2e} (tol 1e-10), sorted: {sorted}"),
    )
}

fn run_cli(dir: &Path, args: &[&str], jobs: &str) -> Vec<(String, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_wlmf-lab"))
        .args(args)
        .args(["--jobs", jobs, "--out-dir"])
        .arg(dir)
        .output()
        .expect("launch wlmf-lab");
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.to_string_lossy().ends_with(".manifest.json"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["--experiment", "gain-bias", "--signal-len", "2000", "--trials", "4"],
        &["--experiment", "gain-surface", "--trials", "16"],
        &["--experiment", "mf-demo"],
        &["--experiment", "cnn-train", "--trials", "3", "--epochs", "2"],
        &["--experiment", "design-sequence"],
    ];
    let mut mismatches = Vec::new();
    for args in runs {
        let outs: Vec<_> = ["1", "1", "3"]
            .iter()
            .map(|jobs| {
                let dir = tempfile::tempdir().unwrap();
                run_cli(dir.path(), args, jobs)
            })
            .collect();
        if outs[0].is_empty() || outs[0] != outs[1] || outs[0] != outs[2] {
            mismatches.push(args[1]);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("5 experiments, sequential twice and with 3 workers; differing: {mismatches:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        ("proper noise doubles the WL output SNR", proper_noise_doubling, Duration::from_secs(5)),
        ("SNR gain is positive, zero only for zero input", gain_positivity, Duration::from_secs(10)),
        ("augmented and block WLMF solutions agree", dual_path, Duration::from_secs(10)),
        ("grid minimum of g matches the lower bound", lower_bound, Duration::from_secs(10)),
        ("MA(2) AUT values", ma2_aut_values, Duration::from_secs(1)),
        ("normalized bias of the approximate gain", bias_trend, Duration::from_secs(120)),
        ("SNR gain surface of the matched sequence", surface_minimum, Duration::from_secs(300)),
        ("matched filter demo peaks", demo_peaks, Duration::from_secs(1)),
        ("CNN gradients against finite differences", cnn_gradients, Duration::from_secs(30)),
        ("WL-Net converges before SL-Net", training_order, Duration::from_secs(300)),
        ("Takagi factorization invariants", takagi_suite, Duration::from_secs(30)),
        ("byte-identical CLI outputs", determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let pass = out.pass && took <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} | {} | {:.2}s (budget {}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
