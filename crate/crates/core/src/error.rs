use crate::algebra::AlgebraError;
use crate::dynamics::DynamicsError;
use crate::elliptic::EllipticError;
use crate::quantum::QuantumError;
use crate::systems::SystemError;

/// Umbrella error for callers that drive several modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
