//! Dense complex linear algebra.
//!
//! Everything here is a pure function over immutable [`ComplexMatrix`]
//! values. The eigensolver is a complex Householder reduction to a real
//! symmetric tridiagonal matrix followed by implicit-shift QL sweeps.

mod eig;
mod lowrank;
mod matrix;
mod norms;
mod qr;
mod tensor;

pub use eig::{hermitian_eig, hermitian_eigenvalues, Spectrum};
pub use lowrank::{low_rank_trace_norm, LowRank};
pub use matrix::{ComplexMatrix, C64};
pub use norms::{psd_sqrt, state_fidelity, trace_norm};
pub use qr::householder_qr;
pub use tensor::{kron, kron_all, partial_trace, permute_factors, permute_vector_factors};

/// Relative Hermiticity tolerance shared by every routine that requires a
/// Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues at or above this (negative) floor are clamped to zero when a
/// PSD operator is expected.
pub const PSD_FLOOR: f64 = -1e-10;
