//! Cholesky factorization `A = L Lᴴ` of Hermitian positive definite matrices.

use num_complex::Complex;

use super::matrix::{inner, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{abs2, Real};

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T: Real> {
    lower: ComplexMatrix<T>,
}

/// Default pivot tolerance: a fixed fraction of the largest diagonal entry.
pub fn default_pd_tol<T: Real>(a: &ComplexMatrix<T>) -> T {
    T::structural_tol() * a.max_abs_diagonal()
}

impl<T: Real> Cholesky<T> {
    /// Factors `a`, failing when any pivot falls to or below `tol`.
    ///
    /// Only the lower triangle of `a` is read.
    pub fn factor_with_tol(a: &ComplexMatrix<T>, tol: T) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= abs2(l[(j, k)]);
            }
            if !(d > tol) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    index: j,
                    pivot: d.to_f64_lossy(),
                });
            }
            let djj = d.sqrt();
            l[(j, j)] = Complex::new(djj, T::zero());
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { lower: l })
    }

    pub fn factor(a: &ComplexMatrix<T>) -> Result<Self> {
        Self::factor_with_tol(a, default_pd_tol(a))
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &ComplexMatrix<T> {
        &self.lower
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        check_len(n, b.len())?;
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)].re;
        }
        Ok(y)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        let mut x = self.forward(b)?;
        let l = &self.lower;
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[k];
            }
            x[i] = s / l[(i, i)].re;
        }
        Ok(x)
    }

    /// `bᴴ A⁻¹ b` evaluated as `‖L⁻¹ b‖²`, real and nonnegative by construction.
    pub fn inverse_quad_form(&self, b: &[Complex<T>]) -> Result<T> {
        Ok(self.forward(b)?.iter().map(|&z| abs2(z)).sum())
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        check_len(self.dim(), b.rows())?;
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_column(j, &self.solve(&b.column(j))?);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix<T>> {
        self.solve_matrix(&ComplexMatrix::identity(self.dim()))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

pub(crate) fn ensure_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<()> {
    let defect = a.hermitian_defect();
    if defect > T::symmetry_tol() {
        Err(Error::NotHermitian(defect.to_f64_lossy()))
    } else {
        Ok(())
    }
}

/// Solves `A y = b` for Hermitian positive definite `A`.
pub fn hermitian_solve<T: Real>(a: &ComplexMatrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    check_len(a.rows(), b.len())?;
    ensure_hermitian(a)?;
    Cholesky::factor(a)?.solve(b)
}

/// True iff every Cholesky pivot of `a` exceeds `tol`.
pub fn is_positive_definite<T: Real>(a: &ComplexMatrix<T>, tol: T) -> bool {
    a.is_square() && ensure_hermitian(a).is_ok() && Cholesky::factor_with_tol(a, tol).is_ok()
}

/// Hermitian quadratic form `xᴴ y` for `y = A⁻¹ x`, with the imaginary residue
/// checked against the value before it is dropped.
pub(crate) fn real_quadratic<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<T> {
    let v = inner(x, y);
    let scale = v.re.abs().max(super::matrix::vec_norm(x) * super::matrix::vec_norm(y) * T::epsilon());
    if v.im.abs() > T::structural_tol() * scale.max(T::min_positive_value()) && !v.im.is_zero() {
        return Err(Error::NumericalInconsistency {
            value: v.re.to_f64_lossy(),
            residue: v.im.to_f64_lossy(),
        });
    }
    Ok(v.re)
}
