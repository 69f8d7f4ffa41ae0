//! Takagi (Autonne) factorization `C = Q diag(p) Qᵀ` of complex symmetric matrices.
//!
//! With `C = A + jB` and a Takagi vector `q = a + jb`, the relation `C q̄ = p q`
//! is the real symmetric eigenproblem
//!
//! ```text
//! [ A   B ] [a]     [a]
//! [ B  -A ] [b] = p [b]
//! ```
//!
//! whose spectrum is `±p`. Eigenvectors of the positive half give the columns
//! of `Q`; real orthonormality of the stacked vectors implies complex
//! orthonormality of the `q`s whenever the Takagi values are nonzero. The null
//! space is completed separately.
//!
//! Takagi values that coincide leave `Q` free up to a real orthogonal rotation
//! inside the cluster (any unitary for the zero cluster). When a Hermitian
//! companion matrix is supplied, that freedom is spent diagonalizing the
//! companion as far as the cluster allows.

use num_complex::Complex;

use super::eigen::hermitian_eig;
use super::matrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct TakagiResult<T: Real> {
    /// Unitary factor.
    pub q: ComplexMatrix<T>,
    /// Takagi values, descending and nonnegative.
    pub values: Vec<T>,
}

impl<T: Real> TakagiResult<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let qd = ComplexMatrix::from_fn(n, n, |i, j| self.q[(i, j)] * self.values[j]);
        &qd * &self.q.transpose()
    }

    /// Index ranges of Takagi values equal within the cluster tolerance.
    pub fn clusters(&self) -> Vec<std::ops::Range<usize>> {
        value_clusters(&self.values)
    }
}

fn value_clusters<T: Real>(values: &[T]) -> Vec<std::ops::Range<usize>> {
    let top = values.first().copied().unwrap_or_else(T::zero);
    let tol = T::cluster_tol() * top;
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[start] - values[i]).abs() > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

pub fn takagi<T: Real>(c: &ComplexMatrix<T>) -> Result<TakagiResult<T>> {
    takagi_with_companion(c, None)
}

/// Takagi factorization; `companion` (Hermitian, same size) selects the basis
/// inside clusters of equal Takagi values.
pub fn takagi_with_companion<T: Real>(
    c: &ComplexMatrix<T>,
    companion: Option<&ComplexMatrix<T>>,
) -> Result<TakagiResult<T>> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch {
            expected: c.rows(),
            found: c.cols(),
        });
    }
    let defect = c.symmetric_defect();
    if defect > T::symmetry_tol() {
        return Err(Error::NotSymmetric(defect.to_f64_lossy()));
    }
    let n = c.rows();
    if let Some(r) = companion {
        if r.rows() != n || r.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.rows(),
            });
        }
    }
    let c = c.symmetric_part();

    let embed = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = c[(i % n, j % n)];
        let v = match (i < n, j < n) {
            (true, true) => z.re,
            (true, false) | (false, true) => z.im,
            (false, false) => -z.re,
        };
        Complex::new(v, T::zero())
    });
    let eig = hermitian_eig(&embed)?;

    let top = eig.values[0].max(T::zero());
    let zero_tol = T::cluster_tol() * top;
    let mut q = ComplexMatrix::zeros(n, n);
    let mut values = vec![T::zero(); n];
    let mut filled = 0;
    for k in 0..n {
        let p = eig.values[k];
        if top.is_zero() || p <= zero_tol {
            break;
        }
        let col: Vec<Complex<T>> = (0..n)
            .map(|i| Complex::new(eig.vectors[(i, k)].re, eig.vectors[(i + n, k)].re))
            .collect();
        let norm = vec_norm(&col);
        q.set_column(k, &col.iter().map(|&z| z / norm).collect::<Vec<_>>());
        values[k] = p;
        filled += 1;
    }

    if filled < n {
        complete_null_space(&mut q, filled, companion)?;
    }

    let mut result = TakagiResult { q, values };
    if let Some(r) = companion {
        align_clusters(&mut result, r, filled)?;
    }
    Ok(result)
}

/// Fills columns `filled..n` with an orthonormal basis of the complement,
/// preferring eigenvectors of the companion when given.
fn complete_null_space<T: Real>(
    q: &mut ComplexMatrix<T>,
    filled: usize,
    companion: Option<&ComplexMatrix<T>>,
) -> Result<()> {
    let n = q.rows();
    let candidates = match companion {
        Some(r) => hermitian_eig(r)?.vectors,
        None => ComplexMatrix::identity(n),
    };
    let mut basis: Vec<Vec<Complex<T>>> = (0..filled).map(|j| q.column(j)).collect();
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = candidates.column(j);
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &v);
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi -= bi * proj;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > T::lit(1e-3) {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    if basis.len() != n {
        return Err(Error::InvalidParameter("failed to complete unitary basis".into()));
    }
    for (j, b) in basis.iter().enumerate().skip(filled) {
        q.set_column(j, b);
    }
    Ok(())
}

fn align_clusters<T: Real>(res: &mut TakagiResult<T>, r: &ComplexMatrix<T>, nonzero: usize) -> Result<()> {
    let n = res.values.len();
    let mut ranges: Vec<_> = value_clusters(&res.values[..nonzero]);
    if nonzero < n {
        ranges.push(nonzero..n);
    }
    for range in ranges {
        let m = range.len();
        if m < 2 {
            continue;
        }
        let block = ComplexMatrix::from_fn(n, m, |i, j| res.q[(i, range.start + j)]);
        let proj = &(&block.adjoint() * r) * &block;
        // Non-zero clusters only admit real rotations; the zero cluster admits any unitary.
        let target = if range.start < nonzero {
            ComplexMatrix::from_fn(m, m, |i, j| Complex::new(proj[(i, j)].re, T::zero()))
        } else {
            proj
        };
        let rot = hermitian_eig(&target.hermitian_part())?.vectors;
        let rot = if range.start < nonzero {
            ComplexMatrix::from_fn(m, m, |i, j| Complex::new(rot[(i, j)].re, T::zero()))
        } else {
            rot
        };
        let rotated = &block * &rot;
        for j in 0..m {
            let col = rotated.column(j);
            let norm = vec_norm(&col);
            res.q.set_column(range.start + j, &col.iter().map(|&z| z / norm).collect::<Vec<_>>());
        }
    }
    Ok(())
}
