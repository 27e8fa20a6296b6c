//! Spherical elliptic coordinates adapted to the two centres, the monopole
//! gauge potential, magnetic momenta and the separated forms of H and F.
//!
//! The coordinates (u1, u2) are the roots of
//! u² − (B q1² + A q2² + (A+B) q3²) u + AB q3², ordered 0 ≤ u1 ≤ B ≤ u2 ≤ A.
//! They cover one octant of the sphere; [`Octant`] carries the signs needed
//! to invert the map.

mod coords;
mod gauge;
mod phase;

pub use coords::{
    f_poly, field_density, from_elliptic, from_elliptic_generic, jacobian, r_in_elliptic, to_elliptic,
    to_elliptic_generic, EllipticPoint, Octant,
};
pub use gauge::{gauge_a, gauge_a_generic, gauge_pullback, gauge_pullback_generic, pullback_curl, verify_da};
pub use phase::{
    canonical_momenta, f_elliptic, h_elliptic, leaf_offsets, magnetic_momenta_generic, phase_to_elliptic,
    separation_check, separation_constants, EllipticPhasePoint, Gauge, SeparationSeries,
};

use crate::systems::{Geometry, SystemParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error("elliptic coordinates need the spherical system, got {0}")]
    NotSpherical(&'static str),
    #[error("q is off the unit sphere: |q| = {0}")]
    OffSphere(f64),
    #[error("point is off the leaf (M,q) = ν: (M,q) = {found}, ν = {nu}")]
    OffLeaf { found: f64, nu: f64 },
    #[error("u = ({u1}, {u2}) outside 0 ≤ u1 ≤ B ≤ u2 ≤ A")]
    OutOfRange { u1: f64, u2: f64 },
    #[error("u = ({u1}, {u2}) is on the boundary of the elliptic chart")]
    ChartBoundary { u1: f64, u2: f64 },
    #[error("coordinates degenerate at u1 = u2 = {0}")]
    Degenerate(f64),
    #[error("gauge potential is singular near the poles (q1² + q2² = {0:e})")]
    NearPole(f64),
    #[error("separation check needs ν = 0, got (M,q) = {0}")]
    NonZeroCharge(f64),
}

/// Relative width of the excluded band along the chart boundary:
/// interior means min(u1, B−u1, u2−B, A−u2) > CHART_MARGIN·A.
pub const CHART_MARGIN: f64 = 1e-6;

fn require_spherical(p: &SystemParams) -> Result<(), EllipticError> {
    if p.geometry == Geometry::Spherical {
        Ok(())
    } else {
        Err(EllipticError::NotSpherical(p.geometry.name()))
    }
}

/// Distance of u from the chart boundary, in units of A.
pub fn boundary_distance(u: &EllipticPoint, p: &SystemParams) -> f64 {
    u.u1.min(p.b - u.u1).min(u.u2 - p.b).min(p.a - u.u2) / p.a
}

pub fn is_interior(u: &EllipticPoint, p: &SystemParams) -> bool {
    boundary_distance(u, p) > CHART_MARGIN
}
