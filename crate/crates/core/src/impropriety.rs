//! Approximate uncorrelating transform (AUT) analysis of the WLMF SNR gain.
//!
//! The Takagi unitary `Q` of the complementary covariance (`C = Q Λ_c Qᵀ`) is
//! reused to approximately diagonalize the covariance (`R ≈ Q Λ_r Qᴴ`). With
//! the rotated input `x̃ = Qᴴ x`, the degree of impropriety `ρᵢ = pᵢ/λᵢ` and
//! the power difference coefficient `εᵢ = Re{x̃ᵢ²}/|x̃ᵢ|²`, the gain becomes
//!
//! ```text
//! SNR_Δ^ap = Σᵢ |x̃ᵢ|²/λᵢ · g(ρᵢ),   g(ρ) = (1 + ρ² − 2ερ) / (1 − ρ²)
//! ```
//!
//! which is minimized componentwise at `ρ = 0` for `ε ≤ 0` and at
//! `ρ = (1 − √(1−ε²))/ε` for `ε > 0`.

use log::warn;
use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::filters::{window_at, GainEvaluator};
use crate::linalg::{hermitian_eig, takagi_with_companion, Cholesky, ComplexMatrix};
use crate::noise::{trial_rng, CovariancePair};
use crate::scalar::{abs2, Real};

/// Largest degree of impropriety fed to `g`.
const RHO_CEILING: f64 = 1.0 - 1e-9;

/// Which per-component noise power pairs with the Takagi values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaReading {
    /// Eigenvalues of `R` sorted descending, paired in order with the
    /// descending Takagi values.
    #[default]
    Eigenvalues,
    /// Real diagonal of `Qᴴ R Q`, aligned with the Takagi columns; exact
    /// whenever `Q` diagonalizes `R`.
    Diagonal,
}

#[derive(Debug, Clone)]
pub struct AutDecomposition<T: Real> {
    pub q: ComplexMatrix<T>,
    /// Takagi values of `C`, descending.
    pub lambda_c: Vec<T>,
    /// Noise powers under the selected [`LambdaReading`].
    pub lambda_r: Vec<T>,
    /// Real diagonal of `Qᴴ R Q`.
    pub diagonal: Vec<T>,
    /// Eigenvalues of `R`, descending.
    pub eigenvalues: Vec<T>,
    /// `‖offdiag(Qᴴ R Q)‖_F / ‖R‖_F`.
    pub offdiag_residual: T,
    pub reading: LambdaReading,
}

pub fn aut_decompose<T: Real>(cov: &CovariancePair<T>) -> Result<AutDecomposition<T>> {
    aut_decompose_with(cov, LambdaReading::default())
}

pub fn aut_decompose_with<T: Real>(cov: &CovariancePair<T>, reading: LambdaReading) -> Result<AutDecomposition<T>> {
    Cholesky::factor(&cov.r)?;
    let tk = takagi_with_companion(&cov.c, Some(&cov.r))?;
    let rotated = &(&tk.q.adjoint() * &cov.r) * &tk.q;
    let diagonal: Vec<T> = rotated.diagonal().iter().map(|z| z.re).collect();
    let eigenvalues = hermitian_eig(&cov.r)?.values;
    let norm = cov.r.frobenius_norm();
    let offdiag_residual = rotated.offdiag_norm() / norm;
    let lambda_r = match reading {
        LambdaReading::Eigenvalues => eigenvalues.clone(),
        LambdaReading::Diagonal => diagonal.clone(),
    };
    Ok(AutDecomposition {
        q: tk.q,
        lambda_c: tk.values,
        lambda_r,
        diagonal,
        eigenvalues,
        offdiag_residual,
        reading,
    })
}

impl<T: Real> AutDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.lambda_c.len()
    }

    /// `ρᵢ = pᵢ/λᵢ`, clamped to `[0, 1]`.
    pub fn rho(&self) -> Result<Vec<T>> {
        self.lambda_c
            .iter()
            .zip(&self.lambda_r)
            .enumerate()
            .map(|(i, (&p, &l))| {
                if !(l > T::zero()) {
                    return Err(Error::NotPositiveDefinite {
                        index: i,
                        pivot: l.to_f64_lossy(),
                    });
                }
                let rho = p / l;
                if rho > T::one() {
                    warn!("degree of impropriety {rho} of component {i} clamped to 1");
                    Ok(T::one())
                } else {
                    Ok(rho.max(T::zero()))
                }
            })
            .collect()
    }
}

/// `x̃ = Qᴴ x`.
pub fn rotated_input<T: Real>(x: &[Complex<T>], aut: &AutDecomposition<T>) -> Result<Vec<Complex<T>>> {
    aut.q.adjoint().mul_vec(x)
}

/// `x = Q x̃`.
pub fn unrotate<T: Real>(xt: &[Complex<T>], aut: &AutDecomposition<T>) -> Result<Vec<Complex<T>>> {
    aut.q.mul_vec(xt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImproprietyProfile<T: Real> {
    pub rho: Vec<T>,
    pub epsilon: Vec<T>,
    /// Components with `x̃ᵢ = 0`, whose `εᵢ` is reported as 0.
    pub zero_components: Vec<usize>,
}

/// `εᵢ = Re{x̃ᵢ²}/|x̃ᵢ|²`, or `None` for a zero component.
pub fn power_difference<T: Real>(xt: Complex<T>) -> Option<T> {
    let m = abs2(xt);
    if m.is_zero() {
        None
    } else {
        let e = (xt * xt).re / m;
        Some(e.max(-T::one()).min(T::one()))
    }
}

pub fn impropriety_profile<T: Real>(aut: &AutDecomposition<T>, xt: &[Complex<T>]) -> Result<ImproprietyProfile<T>> {
    if xt.len() != aut.dim() {
        return Err(Error::DimensionMismatch {
            expected: aut.dim(),
            found: xt.len(),
        });
    }
    let rho = aut.rho()?;
    let mut zero_components = Vec::new();
    let epsilon = xt
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            power_difference(z).unwrap_or_else(|| {
                zero_components.push(i);
                T::zero()
            })
        })
        .collect();
    Ok(ImproprietyProfile {
        rho,
        epsilon,
        zero_components,
    })
}

fn check_g_args<T: Real>(rho: T, epsilon: T) -> Result<()> {
    if rho >= T::one() {
        return Err(Error::SingularAtOne);
    }
    if !(rho >= T::zero()) {
        return Err(Error::InvalidParameter(format!("rho must be in [0, 1), got {rho}")));
    }
    if !(epsilon.abs() <= T::one()) {
        return Err(Error::InvalidParameter(format!("epsilon must be in [-1, 1], got {epsilon}")));
    }
    Ok(())
}

/// `g(ρ) = (1 + ρ² − 2ερ)/(1 − ρ²)`.
pub fn g_of_rho<T: Real>(rho: T, epsilon: T) -> Result<T> {
    check_g_args(rho, epsilon)?;
    let two = T::lit(2.0);
    Ok((T::one() + rho * rho - two * epsilon * rho) / (T::one() - rho * rho))
}

/// `dg/dρ = −2(ερ² − 2ρ + ε)/(1 − ρ²)²`.
pub fn g_derivative<T: Real>(rho: T, epsilon: T) -> Result<T> {
    check_g_args(rho, epsilon)?;
    let two = T::lit(2.0);
    let den = T::one() - rho * rho;
    Ok(-two * (epsilon * rho * rho - two * rho + epsilon) / (den * den))
}

/// Degree of impropriety at which `g(·, ε)` attains its minimum on `[0, 1]`.
pub fn lower_bound_rho<T: Real>(epsilon: T) -> T {
    let e = epsilon.max(-T::one()).min(T::one());
    if e <= T::zero() {
        T::zero()
    } else {
        // (1 − √(1−ε²))/ε without cancellation for small ε.
        e / (T::one() + (T::one() - e * e).sqrt())
    }
}

/// Power difference coefficient for which `rho` is the minimizer: `2ρ/(1+ρ²)`.
pub fn matched_epsilon<T: Real>(rho: T) -> T {
    T::lit(2.0) * rho / (T::one() + rho * rho)
}

/// `Σᵢ |x̃ᵢ|²/λᵢ · g(ρᵢ)` with `x̃ = Qᴴ x`.
pub fn approx_snr_gain<T: Real>(x: &[Complex<T>], aut: &AutDecomposition<T>) -> Result<T> {
    let xt = rotated_input(x, aut)?;
    approx_gain_rotated(&xt, aut)
}

fn approx_gain_rotated<T: Real>(xt: &[Complex<T>], aut: &AutDecomposition<T>) -> Result<T> {
    let ceiling = T::lit(RHO_CEILING);
    let mut total = T::zero();
    for (i, &z) in xt.iter().enumerate() {
        let (p, l) = (aut.lambda_c[i], aut.lambda_r[i]);
        if !(l > T::zero()) || p >= l {
            return Err(Error::SingularAtOne);
        }
        let Some(eps) = power_difference(z) else {
            continue;
        };
        let mut rho = p / l;
        if rho > ceiling {
            warn!("degree of impropriety {rho} of component {i} clamped below 1");
            rho = ceiling;
        }
        total += abs2(z) / l * g_of_rho(rho.max(T::zero()), eps)?;
    }
    Ok(total)
}

/// Mean of `(SNR_Δ^ap(n_p) − SNR_Δ(n_p)) / SNR_Δ(n_p)` over the windows
/// `n_p = L, …, N` of `x_signal`.
pub fn normalized_snr_bias<T: Real>(x_signal: &[Complex<T>], cov: &CovariancePair<T>, len: usize) -> Result<T> {
    let aut = aut_decompose(cov)?;
    normalized_snr_bias_with(x_signal, cov, &aut, len)
}

pub fn normalized_snr_bias_with<T: Real>(
    x_signal: &[Complex<T>],
    cov: &CovariancePair<T>,
    aut: &AutDecomposition<T>,
    len: usize,
) -> Result<T> {
    if cov.dim() != len || aut.dim() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: cov.dim(),
        });
    }
    if x_signal.len() < len {
        return Err(Error::InsufficientSamples {
            needed: len,
            got: x_signal.len(),
        });
    }
    let exact = GainEvaluator::new(cov)?;
    let qh = aut.q.adjoint();
    let guard = T::lit(1e-14);
    let mut acc = T::zero();
    let mut count = 0usize;
    for end in len - 1..x_signal.len() {
        let w = window_at(x_signal, end, len);
        let g = exact.gain(&w)?;
        if g < guard {
            return Err(Error::DegenerateWindow(end + 1));
        }
        let ap = approx_gain_rotated(&qh.mul_vec(&w)?, aut)?;
        acc += (ap - g) / g;
        count += 1;
    }
    Ok(acc / T::from_usize(count).expect("count"))
}

/// Input whose rotated components satisfy the lower-bound condition for the
/// impropriety profile of `aut`: `|x̃ᵢ| = magnitudesᵢ` and
/// `cos(2θᵢ) = 2ρᵢ/(1+ρᵢ²)` with `θᵢ ∈ [0, π/2]`. Returns `x = Q x̃`.
///
/// Without explicit magnitudes, `|N(0,1)|` draws seeded by `seed` are used.
pub fn design_matched_sequence<T: Real>(
    aut: &AutDecomposition<T>,
    magnitudes: Option<&[T]>,
    seed: u64,
) -> Result<Vec<Complex<T>>> {
    let n = aut.dim();
    let mags: Vec<T> = match magnitudes {
        Some(m) => {
            if m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            if m.iter().any(|&v| !(v > T::zero())) {
                return Err(Error::InvalidParameter("magnitudes must be positive".into()));
            }
            m.to_vec()
        }
        None => {
            let mut rng = trial_rng(seed, 0);
            (0..n)
                .map(|_| {
                    let d: f64 = StandardNormal.sample(&mut rng);
                    T::lit(d.abs().max(1e-3))
                })
                .collect()
        }
    };
    let half = T::lit(0.5);
    let xt: Vec<Complex<T>> = matched_targets(aut)?
        .iter()
        .zip(&mags)
        .map(|(&eps, &m)| Complex::from_polar(m, half * eps.acos()))
        .collect();
    unrotate(&xt, aut)
}

/// Per-component `ε` targets `2ρᵢ/(1+ρᵢ²)` of the lower-bound condition.
pub fn matched_targets<T: Real>(aut: &AutDecomposition<T>) -> Result<Vec<T>> {
    Ok(aut.rho()?.into_iter().map(matched_epsilon).collect())
}
