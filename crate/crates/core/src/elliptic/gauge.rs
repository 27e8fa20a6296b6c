//! Vector potential of the Dirac monopole of charge ν on the unit sphere,
//! singular only at the poles:
//!
//! A = −ν q3 (q1 dq2 − q2 dq1)/(q1² + q2²),  dA = ν dS,
//!
//! with dS the outward area form.

use super::{jacobian, from_elliptic_generic, EllipticError, EllipticPoint, Octant};
use crate::algebra::{cross3, dot3, Dual, Real, Vec3};
use crate::systems::SystemParams;

/// Below this value of q1² + q2² the potential is considered polar.
pub const POLE_GUARD: f64 = 1e-10;

/// Cartesian components (A_1, A_2, A_3) of the 1-form.
pub fn gauge_a_generic<T: Real>(q: &[T; 3], nu: f64) -> [T; 3] {
    let rho2 = q[0] * q[0] + q[1] * q[1];
    let c = q[2] * nu / rho2;
    [c * q[1], -(c * q[0]), T::zero()]
}

pub fn gauge_a(q: &Vec3, nu: f64) -> Result<[f64; 3], EllipticError> {
    let rho2 = q[0] * q[0] + q[1] * q[1];
    if !(rho2 > POLE_GUARD) {
        return Err(EllipticError::NearPole(rho2));
    }
    Ok(gauge_a_generic(&q.0, nu))
}

fn normalized<T: Real>(v: [T; 3]) -> [T; 3] {
    let n = dot3(&v, &v).sqrt();
    v.map(|c| c / n)
}

/// Surface density of dA at q with respect to the outward area form,
/// from a central-difference exterior derivative on the local chart
/// (s, t) ↦ (q + s e1 + t e2)/|q + s e1 + t e2|. Should equal ν.
pub fn verify_da(q: &Vec3, nu: f64) -> Result<f64, EllipticError> {
    let n = q.norm();
    let q = q.0.map(|c| c / n);
    let rho2 = q[0] * q[0] + q[1] * q[1];
    if !(rho2 > POLE_GUARD) {
        return Err(EllipticError::NearPole(rho2));
    }
    let rho = rho2.sqrt();
    // e1 × e2 = q, so the chart is positively oriented.
    let e1 = [-q[1] / rho, q[0] / rho, 0.0];
    let e2 = cross3(&q, &e1);

    // Components of the pulled-back 1-form at (s, t).
    let pulled = |s: f64, t: f64| -> [f64; 2] {
        let [ds, dt] = Dual::<f64, 2>::seed(&[s, t]);
        let pt = normalized(std::array::from_fn(|i| ds * e1[i] + dt * e2[i] + q[i]));
        let a = gauge_a_generic(&pt, nu);
        [0, 1].map(|k| (0..3).map(|i| a[i].re * pt[i].eps[k]).sum())
    };
    let curl = |h: f64| {
        let d_s_at = (pulled(h, 0.0)[1] - pulled(-h, 0.0)[1]) / (2.0 * h);
        let d_t_as = (pulled(0.0, h)[0] - pulled(0.0, -h)[0]) / (2.0 * h);
        d_s_at - d_t_as
    };
    // The potential varies on the scale ρ = √(q1² + q2²); one Richardson
    // step removes the O(h²) term.
    let h = 1e-3 * rho;
    Ok((4.0 * curl(0.5 * h) - curl(h)) / 3.0)
}

/// Pullback (A_1(u), A_2(u)) with A_i = A(q(u)) · ∂q/∂u_i.
pub fn gauge_pullback_generic<T: Real>(u: &[T; 2], signs: &[f64; 3], nu: f64, a: f64, b: f64) -> [T; 2] {
    let q = from_elliptic_generic(u, signs, a, b);
    let pot = gauge_a_generic(&q, nu);
    jacobian(u, signs, a, b).map(|col| dot3(&pot, &col))
}

pub fn gauge_pullback(u: &EllipticPoint, octant: Octant, nu: f64, p: &SystemParams) -> [f64; 2] {
    gauge_pullback_generic(&[u.u1, u.u2], &octant.signs(), nu, p.a, p.b)
}

/// ∂A_2/∂u1 − ∂A_1/∂u2, differentiated exactly through nested duals.
pub fn pullback_curl(u: &EllipticPoint, octant: Octant, nu: f64, p: &SystemParams) -> f64 {
    let seeded = Dual::<f64, 2>::seed(&[u.u1, u.u2]);
    let [a1, a2] = gauge_pullback_generic(&seeded, &octant.signs(), nu, p.a, p.b);
    a2.eps[0] - a1.eps[1]
}
