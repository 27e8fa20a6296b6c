//! Truncated quantum model on monopole harmonics.
//!
//! States are the monopole harmonics Y_{ν j m}, j = |ν|, |ν|+1, …, j_max.
//! Angular momentum is exact on this basis; multiplication operators are
//! assembled by quadrature and are only faithful on the truncation interior.

mod basis;
mod eigen;
mod matrix;
mod model;
mod operators;
mod quadrature;

pub use basis::{harmonic_norm, jacobi, monopole_harmonic, wigner_d, MonopoleBasis, State};
pub use eigen::{eigen_spectrum, Spectrum};
pub use matrix::OperatorMatrix;
pub use model::{
    build_f, build_h, commutator_diagnostic, dominant_label, QuadratureConfig, QuantumModel, SMeasurement,
};
pub use operators::{
    angular_momentum_matrices, laplacian_kinetic_matrix, multiplication_matrix, multiplication_matrix_rotated,
    singular_multiplication_matrix,
};
pub use quadrature::{gauss_legendre, PolarRule, SphereQuadrature};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("2ν must be an integer (Dirac condition), got 2ν = {0}")]
    DiracCondition(f64),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("invalid quantum numbers ν = {nu}, j = {j}, m = {m}")]
    InvalidQuantumNumbers { nu: f64, j: f64, m: f64 },
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("integrand is not finite at quadrature node θ = {theta}, φ = {phi}; rotate the grid so no node hits a singular point")]
    NodeCollision { theta: f64, phi: f64 },
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("eigensolver failure: {0}")]
    Eigen(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
