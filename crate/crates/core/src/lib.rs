//! Integrable two-centre systems on the sphere and the hyperbolic plane in
//! the field of a Dirac magnetic monopole.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: Lie–Poisson brackets on e(3)* and so(2,1)*, dual-number
//!   gradients, Casimirs and Hamiltonian vector fields.
//! - [`systems`]: the closed-form Hamiltonian, its quadratic integral, the
//!   centre locations, and the Killing two-centre baseline.
//! - [`dynamics`]: RK4 / Dormand–Prince integration of the Lie–Poisson flow
//!   with drift monitoring and optional leaf projection.
//! - [`elliptic`]: spherical elliptic coordinates, the monopole gauge
//!   potential, magnetic momenta and the separated forms.
//! - [`quantum`]: monopole harmonics, truncated operator matrices, spectra
//!   and commutator diagnostics.
//! - [`checks`]: the batch certification suites shared by tests and the CLI.

pub mod algebra;
pub mod checks;
pub mod dynamics;
pub mod elliptic;
mod error;
pub mod par;
pub mod quantum;
pub mod systems;

pub use algebra::{PhasePoint, PoissonStructure, Vec3};
pub use error::Error;
pub use par::Execution;
pub use systems::{Geometry, SystemParams};
