mod eigen;
mod krylov;
mod sparse;

pub use eigen::{eigh, expm_antihermitian_apply, Eigenvectors, HermitianEigen};
pub use krylov::Krylov;
pub use sparse::Operator;
