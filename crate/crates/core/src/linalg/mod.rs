//! Small dense complex linear algebra: Cholesky solves, Hermitian
//! eigendecomposition and Takagi factorization.

mod cholesky;
mod eigen;
mod matrix;
mod takagi;

pub use cholesky::{default_pd_tol, hermitian_solve, is_positive_definite, Cholesky};
pub(crate) use cholesky::{ensure_hermitian, real_quadratic};
pub use eigen::{hermitian_eig, HermitianEigen};
pub use matrix::{conj_vec, inner, vec_norm, ComplexMatrix};
pub use takagi::{takagi, takagi_with_companion, TakagiResult};
