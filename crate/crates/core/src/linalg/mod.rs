//! Small dense numerical kernels: Jacobi eigensolvers, the signed 3x3 SVD,
//! the SO(3) -> SU(2) lift, majorization and positivity tests.

pub mod complex;
pub mod eigen;
pub mod majorization;
pub mod matrix;
pub mod rotation;

use thiserror::Error;

pub use complex::{pauli, CMatrix, C64};
pub use eigen::{expm_i_hermitian, herm_eig, sym_eig, unitary_eig, HermitianEigen, Spectrum, UnitaryEigen};
pub use majorization::{is_psd, majorizes};
pub use matrix::{Mat3, Matrix};
pub use rotation::{is_rotation, so3_to_su2, su2_to_so3, svd3_special, SignedSvd3, Su2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("not a rotation matrix (det = {det})")]
    NotRotation { det: f64 },
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}
