//! Dense and sparse symmetric linear algebra used by the eigensolver.

mod dense;
mod envelope;
mod ordering;

pub use dense::{dot, generalized_sym_eig, jacobi_eigen, DenseCholesky, DenseMatrix, SymmetricEigen};
pub use envelope::EnvelopeCholesky;
pub use ordering::{cuthill_mckee, peripheral_node};
