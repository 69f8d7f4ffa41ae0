//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use super::cholesky::ensure_hermitian;
use super::matrix::ComplexMatrix;
use crate::error::Result;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending with matching unit-norm eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

/// Eigendecomposition `A V = V diag(λ)` of a Hermitian matrix, `λ` descending.
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    ensure_hermitian(a)?;
    Ok(jacobi(&a.hermitian_part()))
}

fn jacobi<T: Real>(a0: &ComplexMatrix<T>) -> HermitianEigen<T> {
    let n = a0.rows();
    let mut a = a0.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let stop = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        if a.offdiag_norm() <= stop || scale.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                // Phase q so that a[p][q] becomes real and positive.
                let phase = apq / mag;
                let ph_c = phase.conj();
                for k in 0..n {
                    a[(k, q)] *= ph_c;
                }
                for k in 0..n {
                    a[(q, k)] *= phase;
                }
                for k in 0..n {
                    v[(k, q)] *= ph_c;
                }

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(app - t * mag, T::zero());
                a[(q, q)] = Complex::new(aqq + t * mag, T::zero());

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s;
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(λ) Vᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let vd = ComplexMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        &vd * &self.vectors.adjoint()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::C64 as Cx;

    fn cplx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    type M = ComplexMatrix<f64>;

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eig(&M::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let e = hermitian_eig(&M::from_real_diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let a = M::from_rows(&[
            vec![cplx(2.0, 0.0), cplx(0.0, 1.0)],
            vec![cplx(0.0, -1.0), cplx(2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let av = &a * &e.vectors;
        let vl = ComplexMatrix::from_fn(2, 2, |i, j| e.vectors[(i, j)] * e.values[j]);
        assert!(av.sub(&vl).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = M::identity(2);
        a[(0, 1)] = cplx(1.0, 0.0);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&M::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert_eq!(e.vectors, M::identity(3));
    }
}
