//! Strictly linear (SLMF) and widely linear (WLMF) matched filters.
//!
//! Observation windows are ordered newest sample first,
//! `r = (r(n_p), r(n_p−1), …, r(n_p−L+1))`, and a filter `f` responds with
//! `fᴴ r`. The widely linear filter adds a second branch on the conjugate
//! window: `f₁ᴴ r + f₂ᴴ r*`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{conj_vec, inner, real_quadratic, vec_norm, Cholesky, ComplexMatrix};
use crate::noise::CovariancePair;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SlmfWeights<T: Real> {
    pub f: Vec<Complex<T>>,
    pub alpha: T,
}

/// Conjugate pair of WLMF weight vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct WlmfWeights<T: Real> {
    pub f1: Vec<Complex<T>>,
    pub f2: Vec<Complex<T>>,
    pub beta: T,
}

impl<T: Real> WlmfWeights<T> {
    /// `w = (f₁; f₂)`.
    pub fn augmented(&self) -> Vec<Complex<T>> {
        self.f1.iter().chain(&self.f2).copied().collect()
    }

    /// `‖f₁ − f₂*‖ / ‖f₁‖`.
    pub fn pairing_defect(&self) -> T {
        let d: Vec<_> = self.f1.iter().zip(&self.f2).map(|(a, b)| a - b.conj()).collect();
        let n = vec_norm(&self.f1);
        if n.is_zero() {
            vec_norm(&d)
        } else {
            vec_norm(&d) / n
        }
    }
}

/// Input stacked with its conjugate, and the augmented noise covariance.
#[derive(Debug, Clone)]
pub struct AugmentedVectors<T: Real> {
    pub z: Vec<Complex<T>>,
    pub rq: ComplexMatrix<T>,
}

impl<T: Real> AugmentedVectors<T> {
    pub fn new(x: &[Complex<T>], cov: &CovariancePair<T>) -> Result<Self> {
        check_dim(cov.dim(), x.len())?;
        let z = x.iter().copied().chain(x.iter().map(|v| v.conj())).collect();
        Ok(Self { z, rq: cov.augmented() })
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

fn check_scale<T: Real>(s: T, name: &str) -> Result<()> {
    if s > T::zero() && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {s}")))
    }
}

/// `f = α R⁻¹ x`; the complementary covariance is ignored.
pub fn slmf_solve<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>, alpha: T) -> Result<SlmfWeights<T>> {
    check_dim(cov.dim(), x.len())?;
    check_scale(alpha, "alpha")?;
    let y = Cholesky::factor(&cov.r)?.solve(x)?;
    Ok(SlmfWeights {
        f: y.into_iter().map(|v| v * alpha).collect(),
        alpha,
    })
}

/// `xᴴ R⁻¹ x`.
pub fn snr_slmf<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>) -> Result<T> {
    check_dim(cov.dim(), x.len())?;
    let y = Cholesky::factor(&cov.r)?.solve(x)?;
    real_quadratic(x, &y)
}

/// `w = β R_q⁻¹ z`, split into `(f₁, f₂)`.
pub fn wlmf_solve<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>, beta: T) -> Result<WlmfWeights<T>> {
    check_scale(beta, "beta")?;
    let aug = AugmentedVectors::new(x, cov)?;
    let w = Cholesky::factor(&aug.rq)?.solve(&aug.z)?;
    let n = x.len();
    Ok(WlmfWeights {
        f1: w[..n].iter().map(|&v| v * beta).collect(),
        f2: w[n..].iter().map(|&v| v * beta).collect(),
        beta,
    })
}

/// The same weights through the Schur-complement block inverse of `R_q`:
///
/// `f₁ = β (R − C R⁻* C*)⁻¹ (x − C R⁻* x*)`,
/// `f₂ = β (R* − C* R⁻¹ C)⁻¹ (x* − C* R⁻¹ x)`.
pub fn wlmf_solve_block<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>, beta: T) -> Result<WlmfWeights<T>> {
    check_dim(cov.dim(), x.len())?;
    check_scale(beta, "beta")?;
    let (r, c) = (&cov.r, &cov.c);
    let (r_conj, c_conj) = (r.conj(), c.conj());
    let xc = conj_vec(x);

    let chol_r = Cholesky::factor(r)?;
    let chol_r_conj = Cholesky::factor(&r_conj)?;

    // R⁻* C* and R⁻* x*
    let rci_cc = chol_r_conj.solve_matrix(&c_conj)?;
    let rci_xc = chol_r_conj.solve(&xc)?;
    let s1 = r.sub(&(c * &rci_cc))?;
    let rhs1: Vec<_> = x.iter().zip(c.mul_vec(&rci_xc)?).map(|(&a, b)| a - b).collect();
    let f1 = Cholesky::factor(&s1.hermitian_part())?.solve(&rhs1)?;

    let ri_c = chol_r.solve_matrix(c)?;
    let ri_x = chol_r.solve(x)?;
    let s2 = r_conj.sub(&(&c_conj * &ri_c))?;
    let rhs2: Vec<_> = xc.iter().zip(c_conj.mul_vec(&ri_x)?).map(|(&a, b)| a - b).collect();
    let f2 = Cholesky::factor(&s2.hermitian_part())?.solve(&rhs2)?;

    Ok(WlmfWeights {
        f1: f1.into_iter().map(|v| v * beta).collect(),
        f2: f2.into_iter().map(|v| v * beta).collect(),
        beta,
    })
}

/// `zᴴ R_q⁻¹ z`.
pub fn snr_wlmf<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>) -> Result<T> {
    let aug = AugmentedVectors::new(x, cov)?;
    let y = Cholesky::factor(&aug.rq)?.solve(&aug.z)?;
    real_quadratic(&aug.z, &y)
}

/// Exact SNR gain `SNR_WLMF − SNR_SLMF` through the Schur-complement quadratic form.
pub fn snr_gain<T: Real>(x: &[Complex<T>], cov: &CovariancePair<T>) -> Result<T> {
    GainEvaluator::new(cov)?.gain(x)
}

/// Factorizations behind the exact SNR gain, reusable across many input windows
/// for a fixed noise model.
///
/// With `K = C* R⁻¹` and the Schur complement `S = R* − C* R⁻¹ C`, the gain is
/// `sᴴ S⁻¹ s` for `s = x* − K x`.
#[derive(Debug, Clone)]
pub struct GainEvaluator<T: Real> {
    k: ComplexMatrix<T>,
    schur: Cholesky<T>,
}

impl<T: Real> GainEvaluator<T> {
    pub fn new(cov: &CovariancePair<T>) -> Result<Self> {
        let chol_r = Cholesky::factor(&cov.r)?;
        let c_conj = cov.c.conj();
        // C symmetric and R Hermitian give C* R⁻¹ = (R⁻¹ C)ᴴ.
        let ri_c = chol_r.solve_matrix(&cov.c)?;
        let k = ri_c.adjoint();
        let schur = cov.r.conj().sub(&(&c_conj * &ri_c))?;
        let schur = Cholesky::factor(&schur.hermitian_part())?;
        Ok(Self { k, schur })
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    pub fn gain(&self, x: &[Complex<T>]) -> Result<T> {
        check_dim(self.dim(), x.len())?;
        let kx = self.k.mul_vec(x)?;
        let s: Vec<_> = x.iter().zip(kx).map(|(a, b)| a.conj() - b).collect();
        let y = self.schur.solve(&s)?;
        real_quadratic(&s, &y)
    }
}

/// Anything that maps an observation window to one output sample.
pub trait FilterResponse<T: Real> {
    fn taps(&self) -> usize;

    /// Output for a newest-first window of length [`FilterResponse::taps`].
    fn respond(&self, window: &[Complex<T>]) -> Complex<T>;
}

impl<T: Real> FilterResponse<T> for SlmfWeights<T> {
    fn taps(&self) -> usize {
        self.f.len()
    }

    fn respond(&self, window: &[Complex<T>]) -> Complex<T> {
        inner(&self.f, window)
    }
}

impl<T: Real> FilterResponse<T> for WlmfWeights<T> {
    fn taps(&self) -> usize {
        self.f1.len()
    }

    fn respond(&self, window: &[Complex<T>]) -> Complex<T> {
        let conj_branch: Complex<T> = self.f2.iter().zip(window).map(|(a, b)| (a * b).conj()).sum();
        inner(&self.f1, window) + conj_branch
    }
}

/// Newest-first window ending at 0-based index `end`.
pub fn window_at<T: Real>(r: &[Complex<T>], end: usize, len: usize) -> Vec<Complex<T>> {
    (0..len).map(|k| r[end - k]).collect()
}

/// Filter outputs `y(n_p)` for `n_p = L, …, N` (1-based), i.e. `N − L + 1` samples.
pub fn apply_filter_sequence<T: Real, F: FilterResponse<T> + ?Sized>(
    r: &[Complex<T>],
    weights: &F,
) -> Result<Vec<Complex<T>>> {
    let len = weights.taps();
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if r.len() < len {
        return Err(Error::InsufficientSamples {
            needed: len,
            got: r.len(),
        });
    }
    let mut window = vec![Complex::zero(); len];
    Ok((len - 1..r.len())
        .map(|end| {
            for (k, w) in window.iter_mut().enumerate() {
                *w = r[end - k];
            }
            weights.respond(&window)
        })
        .collect())
}

/// Time-reverses and conjugates: `out[k] = x[L−1−k]*`. An involution.
pub fn template_to_feature<T: Real>(x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(x.iter().rev().map(|v| v.conj()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{analytic_covariances, NoiseModel};
    use crate::C64 as Cx;

    fn cplx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    type M = ComplexMatrix<f64>;

    fn white(n: usize) -> CovariancePair<f64> {
        CovariancePair::proper(M::identity(n)).unwrap()
    }

    fn e1(n: usize) -> Vec<Complex<f64>> {
        let mut v = vec![Complex::zero(); n];
        v[0] = cplx(1.0, 0.0);
        v
    }

    #[test]
    fn slmf_white_noise() {
        let w = slmf_solve(&e1(3), &white(3), 1.0).unwrap();
        assert_eq!(w.f, e1(3));
        let w2 = slmf_solve(&e1(3), &white(3), 2.0).unwrap();
        assert_eq!(w2.f[0], cplx(2.0, 0.0));
    }

    #[test]
    fn slmf_residual_on_ma_model() {
        let cov = analytic_covariances(&NoiseModel::reference_ma2(0.5).unwrap(), 2).unwrap();
        let x = vec![cplx(1.0, 0.0), cplx(0.0, 1.0)];
        let w = slmf_solve(&x, &cov, 1.0).unwrap();
        let rf = cov.r.mul_vec(&w.f).unwrap();
        let res: Vec<_> = rf.iter().zip(&x).map(|(a, b)| a - b).collect();
        assert!(vec_norm(&res) < 1e-10);
    }

    #[test]
    fn snr_trivial_cases() {
        let x = vec![cplx(1.0, 2.0), cplx(-1.0, 0.5)];
        assert!((snr_slmf(&x, &white(2)).unwrap() - vec_norm(&x).powi(2)).abs() < 1e-14);
        let zero = vec![Complex::zero(); 2];
        assert_eq!(snr_slmf(&zero, &white(2)).unwrap(), 0.0);
        assert_eq!(snr_wlmf(&zero, &white(2)).unwrap(), 0.0);
        assert_eq!(snr_gain(&zero, &white(2)).unwrap(), 0.0);
    }

    #[test]
    fn wlmf_reduces_to_slmf_for_proper_noise() {
        let w = wlmf_solve(&e1(3), &white(3), 1.5).unwrap();
        assert_eq!(w.f1, e1(3).iter().map(|v| v * 1.5).collect::<Vec<_>>());
        assert_eq!(w.f2, w.f1);
    }

    #[test]
    fn scalar_gain_closed_form() {
        for rho in [0.0, 0.2, 0.5, 0.9] {
            let cov = CovariancePair::new(
                M::from_real_diagonal(&[1.0]),
                M::from_real_diagonal(&[rho]),
            )
            .unwrap();
            let x = [cplx(1.0, 0.0)];
            let expected = (1.0 - rho) / (1.0 + rho);
            let g = snr_gain(&x, &cov).unwrap();
            let d = snr_wlmf(&x, &cov).unwrap() - snr_slmf(&x, &cov).unwrap();
            assert!((g - expected).abs() < 1e-14, "{g} vs {expected}");
            assert!((d - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn maximal_impropriety_is_rejected() {
        let cov = CovariancePair::new(M::identity(1), M::identity(1)).unwrap();
        assert!(matches!(
            snr_wlmf(&[cplx(1.0, 0.0)], &cov),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            snr_gain(&[cplx(1.0, 0.0)], &cov),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn dimension_checks() {
        let x = vec![cplx(1.0, 0.0); 2];
        assert!(matches!(slmf_solve(&x, &white(3), 1.0), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(wlmf_solve(&x, &white(3), 1.0), Err(Error::DimensionMismatch { .. })));
        assert!(slmf_solve(&x, &white(2), 0.0).is_err());
    }

    #[test]
    fn sequence_filter_basics() {
        let r: Vec<_> = (0..6).map(|k| cplx(k as f64, -(k as f64))).collect();
        let sl = SlmfWeights { f: e1(3), alpha: 1.0 };
        let y = apply_filter_sequence(&r, &sl).unwrap();
        assert_eq!(y.len(), 4);
        assert_eq!(y, r[2..].to_vec());

        let f1 = vec![cplx(0.3, -0.1), cplx(1.0, 0.5), cplx(-0.2, 0.0)];
        let wl = WlmfWeights { f1: f1.clone(), f2: vec![Complex::zero(); 3], beta: 1.0 };
        let sl = SlmfWeights { f: f1, alpha: 1.0 };
        assert_eq!(apply_filter_sequence(&r, &wl).unwrap(), apply_filter_sequence(&r, &sl).unwrap());
        assert!(matches!(
            apply_filter_sequence(&r[..2], &sl),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn template_feature_pairs() {
        let x = vec![cplx(-0.1, 1.0), cplx(1.0, 1.0), cplx(-0.5, 1.0)];
        let f = template_to_feature(&x).unwrap();
        assert_eq!(f, vec![cplx(-0.5, -1.0), cplx(1.0, -1.0), cplx(-0.1, -1.0)]);
        assert_eq!(template_to_feature(&f).unwrap(), x);
        let pal = vec![cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(1.0, 0.0)];
        assert_eq!(template_to_feature(&pal).unwrap(), pal);
        assert!(template_to_feature::<f64>(&[]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let cov = analytic_covariances(&NoiseModel::<f32>::reference_ma2(0.5).unwrap(), 3).unwrap();
        let x: Vec<Complex<f32>> = [(1.0, 0.0), (0.0, 1.0), (-0.5, 0.5)].map(|(a, b)| Complex::new(a, b)).to_vec();
        let g = snr_gain(&x, &cov).unwrap();
        let d = snr_wlmf(&x, &cov).unwrap() - snr_slmf(&x, &cov).unwrap();
        assert!((g - d).abs() < 1e-4 * g.abs());
    }
}
