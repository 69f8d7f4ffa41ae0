//! Improper complex noise: doubly white improper Gaussian driving noise, MA
//! filtering, and exact / sample second-order statistics.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cplx, Real};

/// Random stream for trial `stream` under `master_seed`.
///
/// Each `(master_seed, stream)` pair selects an independent ChaCha8 stream, so
/// trials can be generated in any order or in parallel.
pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// MA noise model `v(n) = Σ_k b_k u(n-k)` driven by doubly white improper
/// Gaussian noise with variance `sigma2_u` and complementary variance
/// `rho_u · sigma2_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel<T: Real> {
    taps: Vec<Complex<T>>,
    rho_u: T,
    sigma2_u: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(taps: Vec<Complex<T>>, rho_u: T, sigma2_u: T) -> Result<Self> {
        check_rho(rho_u)?;
        if !(sigma2_u > T::zero()) || !sigma2_u.is_finite() {
            return Err(Error::InvalidParameter(format!("sigma2_u must be positive, got {sigma2_u}")));
        }
        if taps.iter().all(|b| b.is_zero()) {
            return Err(Error::InvalidParameter("at least one MA tap must be nonzero".into()));
        }
        if taps.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(Error::NonFinite("taps"));
        }
        Ok(Self { taps, rho_u, sigma2_u })
    }

    /// `v(n) = 0.9 u(n) − j0.1 u(n−1)` with unit driving variance.
    pub fn reference_ma2(rho_u: T) -> Result<Self> {
        Self::new(vec![cplx(0.9, 0.0), cplx(0.0, -0.1)], rho_u, T::one())
    }

    pub fn taps(&self) -> &[Complex<T>] {
        &self.taps
    }

    pub fn rho_u(&self) -> T {
        self.rho_u
    }

    pub fn sigma2_u(&self) -> T {
        self.sigma2_u
    }

    pub fn with_rho_u(&self, rho_u: T) -> Result<Self> {
        Self::new(self.taps.clone(), rho_u, self.sigma2_u)
    }

    /// `n` noise samples drawn from `rng`.
    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Complex<T>>> {
        let u = sample_improper_white_with(n, self.rho_u, self.sigma2_u, rng)?;
        ma_filter(&u, &self.taps)
    }

    /// `r(k) = E[v(n+k) v*(n)]` for `k ≥ 0`.
    pub fn autocovariance(&self, k: usize) -> Complex<T> {
        let b = &self.taps;
        let mut acc = Complex::zero();
        for m in 0..b.len().saturating_sub(k) {
            acc += b[m + k] * b[m].conj();
        }
        acc * self.sigma2_u
    }

    /// `c(k) = E[v(n+k) v(n)]` for `k ≥ 0`.
    pub fn complementary_autocovariance(&self, k: usize) -> Complex<T> {
        let b = &self.taps;
        let mut acc = Complex::zero();
        for m in 0..b.len().saturating_sub(k) {
            acc += b[m + k] * b[m];
        }
        acc * (self.rho_u * self.sigma2_u)
    }
}

fn check_rho<T: Real>(rho: T) -> Result<()> {
    if !(rho >= T::zero() && rho <= T::one()) {
        return Err(Error::InvalidImpropriety(rho.to_f64_lossy()));
    }
    Ok(())
}

/// Covariance `R = E[v vᴴ]` and complementary covariance `C = E[v vᵀ]` of a
/// noise window ordered newest sample first.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair<T: Real> {
    pub r: ComplexMatrix<T>,
    pub c: ComplexMatrix<T>,
}

impl<T: Real> CovariancePair<T> {
    /// Validates shapes and the Hermitian / symmetric structure.
    pub fn new(r: ComplexMatrix<T>, c: ComplexMatrix<T>) -> Result<Self> {
        if !r.is_square() || r.rows() != c.rows() || r.cols() != c.cols() {
            return Err(Error::DimensionMismatch {
                expected: r.rows(),
                found: c.rows().max(c.cols()),
            });
        }
        crate::linalg::ensure_hermitian(&r)?;
        let defect = c.symmetric_defect();
        if defect > T::symmetry_tol() {
            return Err(Error::NotSymmetric(defect.to_f64_lossy()));
        }
        Ok(Self { r, c })
    }

    /// Proper noise with covariance `r`.
    pub fn proper(r: ComplexMatrix<T>) -> Result<Self> {
        let n = r.rows();
        Self::new(r, ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// `R_q = [[R, C], [C*, R*]]`.
    pub fn augmented(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_blocks(&self.r, &self.c, &self.c.conj(), &self.r.conj())
            .expect("blocks validated on construction")
    }

    pub fn cast<U: Real>(&self) -> CovariancePair<U> {
        CovariancePair {
            r: self.r.cast(),
            c: self.c.cast(),
        }
    }
}

pub fn sample_improper_white<T: Real>(n: usize, rho_u: T, sigma2_u: T, seed: u64) -> Result<Vec<Complex<T>>> {
    sample_improper_white_with(n, rho_u, sigma2_u, &mut trial_rng(seed, 0))
}

/// Independent real and imaginary parts with variances `σ²(1+ρ)/2` and `σ²(1−ρ)/2`.
pub fn sample_improper_white_with<T: Real, R: Rng + ?Sized>(
    n: usize,
    rho_u: T,
    sigma2_u: T,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    check_rho(rho_u)?;
    if !(sigma2_u > T::zero()) {
        return Err(Error::InvalidParameter(format!("sigma2_u must be positive, got {sigma2_u}")));
    }
    let half = T::lit(0.5);
    let sd_re = (sigma2_u * (T::one() + rho_u) * half).sqrt();
    let sd_im = (sigma2_u * (T::one() - rho_u) * half).sqrt();
    Ok((0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex::new(sd_re * T::lit(a), sd_im * T::lit(b))
        })
        .collect())
}

/// Circular white Gaussian samples with unit variance `E|x|² = 1`.
pub fn sample_circular<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    sample_improper_white_with(n, T::zero(), T::one(), rng).expect("valid parameters")
}

/// `v(n) = Σ_k taps_k u(n−k)` with zero initial state; output length equals input length.
pub fn ma_filter<T: Real>(u: &[Complex<T>], taps: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if u.is_empty() || taps.is_empty() {
        return Err(Error::EmptyInput);
    }
    if u.len() < taps.len() {
        return Err(Error::InsufficientSamples {
            needed: taps.len(),
            got: u.len(),
        });
    }
    Ok((0..u.len())
        .map(|n| {
            taps.iter()
                .enumerate()
                .take(n + 1)
                .map(|(k, &b)| b * u[n - k])
                .sum()
        })
        .collect())
}

/// Exact `L × L` statistics of a window `(v(n), v(n−1), …, v(n−L+1))`.
///
/// `R[i][j] = r(j−i)` with `r(−k) = r(k)*`; `C[i][j] = c(|i−j|)`.
pub fn analytic_covariances<T: Real>(model: &NoiseModel<T>, len: usize) -> Result<CovariancePair<T>> {
    if len == 0 {
        return Err(Error::InvalidShape { rows: 0, cols: 0 });
    }
    let r_lags: Vec<_> = (0..len).map(|k| model.autocovariance(k)).collect();
    let c_lags: Vec<_> = (0..len).map(|k| model.complementary_autocovariance(k)).collect();
    let r = ComplexMatrix::from_fn(len, len, |i, j| {
        if j >= i {
            r_lags[j - i]
        } else {
            r_lags[i - j].conj()
        }
    });
    let c = ComplexMatrix::from_fn(len, len, |i, j| c_lags[i.abs_diff(j)]);
    Ok(CovariancePair { r, c })
}

/// Random valid pair: the statistics of `A u + B u* + √δ w` for proper white
/// `u`, `w`, i.e. `R = AAᴴ + BBᴴ + δI` and `C = ABᵀ + BAᵀ`. The entries of `A`
/// are unit circular Gaussian, those of `B` are scaled by `impropriety`.
pub fn random_covariance_pair<T: Real, R: Rng + ?Sized>(
    len: usize,
    impropriety: T,
    delta: T,
    rng: &mut R,
) -> Result<CovariancePair<T>> {
    if len == 0 {
        return Err(Error::EmptyInput);
    }
    if !(delta > T::zero()) || !(impropriety >= T::zero()) {
        return Err(Error::InvalidParameter("delta must be positive and impropriety nonnegative".into()));
    }
    let a = ComplexMatrix::from_row_major(len, len, sample_circular(len * len, rng))?;
    let b = ComplexMatrix::from_row_major(len, len, sample_circular(len * len, rng))?.scale(Complex::new(impropriety, T::zero()));
    let r = (&a * &a.adjoint())
        .add(&(&b * &b.adjoint()))?
        .add(&ComplexMatrix::identity(len).scale(Complex::new(delta, T::zero())))?
        .hermitian_part();
    let abt = &a * &b.transpose();
    let c = abt.add(&abt.transpose())?;
    CovariancePair::new(r, c)
}

/// Sliding-window sample estimates of `E[v vᴴ]` and `E[v vᵀ]`, using the
/// windows ending at `n = L, …, N` (1-based).
pub fn empirical_covariances<T: Real>(v: &[Complex<T>], len: usize) -> Result<CovariancePair<T>> {
    if len == 0 {
        return Err(Error::InvalidShape { rows: 0, cols: 0 });
    }
    if v.len() < 10 * len {
        return Err(Error::InsufficientSamples {
            needed: 10 * len,
            got: v.len(),
        });
    }
    let mut r = ComplexMatrix::zeros(len, len);
    let mut c = ComplexMatrix::zeros(len, len);
    let count = v.len() - len + 1;
    let mut w = vec![Complex::zero(); len];
    for end in len - 1..v.len() {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = v[end - k];
        }
        for i in 0..len {
            for j in i..len {
                r[(i, j)] += w[i] * w[j].conj();
                c[(i, j)] += w[i] * w[j];
            }
        }
    }
    let scale = T::one() / T::from_usize(count).expect("window count");
    for i in 0..len {
        for j in i..len {
            let rij = r[(i, j)] * scale;
            let cij = c[(i, j)] * scale;
            r[(i, j)] = rij;
            r[(j, i)] = rij.conj();
            c[(i, j)] = cij;
            c[(j, i)] = cij;
        }
        r[(i, i)] = Complex::new(r[(i, i)].re, T::zero());
    }
    Ok(CovariancePair { r, c })
}
