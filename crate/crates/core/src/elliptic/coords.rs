use serde::{Deserialize, Serialize};

use super::{require_spherical, EllipticError};
use crate::algebra::{Dual, Real, Vec3};
use crate::systems::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub u1: f64,
    pub u2: f64,
}

impl EllipticPoint {
    pub fn new(u1: f64, u2: f64) -> Self {
        Self { u1, u2 }
    }
}

/// Signs of (q1, q2, q3); each is ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Octant(pub [i8; 3]);

impl Octant {
    pub const POSITIVE: Self = Self([1, 1, 1]);

    /// Octant of q, with zero components counted as positive.
    pub fn of(q: &Vec3) -> Self {
        Self(q.0.map(|c| if c < 0.0 { -1 } else { 1 }))
    }

    pub fn signs(&self) -> [f64; 3] {
        self.0.map(f64::from)
    }

    pub fn upper(&self) -> bool {
        self.0[2] > 0
    }
}

/// Ordered roots (u1, u2) for q on the unit sphere.
///
/// The larger root is taken from the quadratic formula and the smaller from
/// the product u1·u2 = AB q3², which avoids cancellation when q3 ≈ 0.
pub fn to_elliptic_generic<T: Real>(q: &[T; 3], a: f64, b: f64) -> [T; 2] {
    let s = q[0] * q[0] * b + q[1] * q[1] * a + q[2] * q[2] * (a + b);
    let prod = q[2] * q[2] * (a * b);
    let mut disc = s * s - prod * 4.0;
    if disc.re() < 0.0 {
        disc = T::zero();
    }
    let u2 = (s + disc.sqrt()) * 0.5;
    let u1 = if u2.re() == 0.0 { T::zero() } else { prod / u2 };
    [u1, u2]
}

pub fn to_elliptic(q: &Vec3, p: &SystemParams) -> Result<EllipticPoint, EllipticError> {
    require_spherical(p)?;
    let n = q.norm();
    if !((n - 1.0).abs() <= 1e-10) {
        return Err(EllipticError::OffSphere(n));
    }
    let [u1, u2] = to_elliptic_generic(&q.0, p.a, p.b);
    Ok(EllipticPoint { u1, u2 })
}

/// Inverse map with the square roots signed by `signs`.
///
/// Tiny negative radicands from rounding at the chart boundary are clamped to zero.
pub fn from_elliptic_generic<T: Real>(u: &[T; 2], signs: &[f64; 3], a: f64, b: f64) -> [T; 3] {
    let root = |x: T| if x.re() <= 0.0 { T::zero() } else { x.sqrt() };
    let q1s = (-u[0] + a) * (-u[1] + a) / (a * (a - b));
    let q2s = (-u[0] + b) * (-u[1] + b) / (b * (b - a));
    let q3s = u[0] * u[1] / (a * b);
    [root(q1s) * signs[0], root(q2s) * signs[1], root(q3s) * signs[2]]
}

pub fn from_elliptic(u: &EllipticPoint, octant: Octant, p: &SystemParams) -> Result<Vec3, EllipticError> {
    require_spherical(p)?;
    let slack = 1e-12 * p.a;
    let ok = u.u1 >= -slack && u.u1 <= p.b + slack && u.u2 >= p.b - slack && u.u2 <= p.a + slack;
    if !ok {
        return Err(EllipticError::OutOfRange { u1: u.u1, u2: u.u2 });
    }
    Ok(Vec3(from_elliptic_generic(&[u.u1, u.u2], &octant.signs(), p.a, p.b)))
}

/// ∂q/∂u_i as columns: `jacobian(..)[i]` is the tangent vector ∂q/∂u_i.
/// Obtained by differentiating [`from_elliptic_generic`].
pub fn jacobian<T: Real>(u: &[T; 2], signs: &[f64; 3], a: f64, b: f64) -> [[T; 3]; 2] {
    let seeded = Dual::<T, 2>::seed(u);
    let q = from_elliptic_generic(&seeded, signs, a, b);
    [0, 1].map(|i| q.map(|c| c.eps[i]))
}

/// f(u) = −4u(u − A)(u − B).
pub fn f_poly<T: Real>(u: T, a: f64, b: f64) -> T {
    u * (u - a) * (u - b) * -4.0
}

/// R on the upper hemisphere: (√u2 − √u1)².
pub fn r_in_elliptic(u: &EllipticPoint) -> f64 {
    (u.u2.sqrt() - u.u1.sqrt()).powi(2)
}

/// Magnetic field density B(u) = ν (u2 − u1)/√(−f(u1) f(u2)).
pub fn field_density(u: &EllipticPoint, nu: f64, p: &SystemParams) -> f64 {
    let ff = -f_poly(u.u1, p.a, p.b) * f_poly(u.u2, p.a, p.b);
    nu * (u.u2 - u.u1) / ff.sqrt()
}
