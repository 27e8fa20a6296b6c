//! Phase-space conversion (M, q) ↦ (u, p̃) and the separated forms.

use serde::{Deserialize, Serialize};

use super::{
    f_poly, gauge_pullback, is_interior, jacobian, require_spherical, to_elliptic_generic, EllipticError,
    EllipticPoint, Octant,
};
use crate::algebra::{cross3, dot3, PhasePoint, Real};
use crate::dynamics::TrajectoryRecord;
use crate::systems::SystemParams;

/// Vector potential a canonical momentum is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// A = −ν q3 (q1 dq2 − q2 dq1)/(q1² + q2²), see [`super::gauge_a`].
    Monopole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPhasePoint {
    pub u: EllipticPoint,
    pub octant: Octant,
    /// Magnetic (kinetic) momenta p̃_i.
    pub p_tilde: [f64; 2],
    /// Canonical momenta p_i = p̃_i + A_i(u) in `gauge`.
    pub p: [f64; 2],
    pub gauge: Gauge,
    pub nu: f64,
}

/// p̃_i = (q̂ × L)·∂q/∂u_i with L the part of M tangent to the sphere
/// (L = M − νq on the leaf |q| = 1, (M,q) = ν).
///
/// Written generically so brackets of p̃ with anything can be taken by
/// dual numbers; `signs` fixes the octant of the inverse map.
pub fn magnetic_momenta_generic<T: Real>(x: &[T; 6], signs: &[f64; 3], a: f64, b: f64) -> [T; 2] {
    let m = [x[0], x[1], x[2]];
    let q = [x[3], x[4], x[5]];
    let n = dot3(&q, &q).sqrt();
    let qh = q.map(|c| c / n);
    let radial = dot3(&m, &qh);
    let l: [T; 3] = std::array::from_fn(|i| m[i] - radial * qh[i]);
    let p = cross3(&qh, &l);
    let u = to_elliptic_generic(&qh, a, b);
    jacobian(&u, signs, a, b).map(|col| dot3(&p, &col))
}

fn convert(x: &PhasePoint, p: &SystemParams, nu: f64) -> Result<EllipticPhasePoint, EllipticError> {
    let qh = x.q.normalized();
    let octant = Octant::of(&qh);
    let [u1, u2] = to_elliptic_generic(&qh.0, p.a, p.b);
    let u = EllipticPoint { u1, u2 };
    if !is_interior(&u, p) {
        return Err(EllipticError::ChartBoundary { u1, u2 });
    }
    let p_tilde = magnetic_momenta_generic(&x.to_array(), &octant.signs(), p.a, p.b);
    let a = gauge_pullback(&u, octant, nu, p);
    Ok(EllipticPhasePoint {
        u,
        octant,
        p_tilde,
        p: [p_tilde[0] + a[0], p_tilde[1] + a[1]],
        gauge: Gauge::Monopole,
        nu,
    })
}

/// Converts a point of the leaf |q| = 1, (M,q) = ν to elliptic phase
/// coordinates. The octant is read off q.
pub fn phase_to_elliptic(x: &PhasePoint, p: &SystemParams, nu: f64) -> Result<EllipticPhasePoint, EllipticError> {
    require_spherical(p)?;
    let n = x.q.norm();
    if !((n - 1.0).abs() <= 1e-10) {
        return Err(EllipticError::OffSphere(n));
    }
    let c2 = x.m.dot(&x.q);
    if !((c2 - nu).abs() <= 1e-10 * x.m.norm().max(1.0)) {
        return Err(EllipticError::OffLeaf { found: c2, nu });
    }
    convert(x, p, nu)
}

pub fn canonical_momenta(ep: &EllipticPhasePoint) -> [f64; 2] {
    ep.p
}

/// Casimir constants separating the Cartesian values from the elliptic
/// forms on the leaf (M,q) = ν: H = H1 + ν²/2 and F = F1 + ν²(A+B).
pub fn leaf_offsets(nu: f64, p: &SystemParams) -> (f64, f64) {
    (0.5 * nu * nu, nu * nu * (p.a + p.b))
}

fn nondegenerate(u: &EllipticPoint) -> Result<(), EllipticError> {
    if u.u1 == u.u2 {
        Err(EllipticError::Degenerate(u.u1))
    } else {
        Ok(())
    }
}

/// √u1 carrying the sign of q3: R = (√u2 − s1)² holds on both hemispheres.
fn signed_root_u1(ep: &EllipticPhasePoint) -> f64 {
    f64::from(ep.octant.0[2]) * ep.u.u1.sqrt()
}

/// H = ½(f(u1)/(u1−u2) p̃1² + f(u2)/(u2−u1) p̃2²) − μ/(√u2 − √u1).
pub fn h_elliptic(ep: &EllipticPhasePoint, p: &SystemParams) -> Result<f64, EllipticError> {
    nondegenerate(&ep.u)?;
    let EllipticPoint { u1, u2 } = ep.u;
    let (f1, f2) = (f_poly(u1, p.a, p.b), f_poly(u2, p.a, p.b));
    let [p1, p2] = ep.p_tilde;
    let kinetic = 0.5 * (f1 / (u1 - u2) * p1 * p1 + f2 / (u2 - u1) * p2 * p2);
    Ok(kinetic - p.mu / (u2.sqrt() - signed_root_u1(ep)))
}

/// F = u2 f(u1)/(u1−u2) p̃1² + u1 f(u2)/(u2−u1) p̃2² + φ1 p̃1 + φ2 p̃2 + V.
pub fn f_elliptic(ep: &EllipticPhasePoint, p: &SystemParams) -> Result<f64, EllipticError> {
    nondegenerate(&ep.u)?;
    let EllipticPoint { u1, u2 } = ep.u;
    let nu = ep.nu;
    let (f1, f2) = (f_poly(u1, p.a, p.b), f_poly(u2, p.a, p.b));
    let [p1, p2] = ep.p_tilde;
    let root_ff = (-f1 * f2).sqrt();
    let root_prod = (u1 * u2).sqrt();
    let phi1 = -nu * root_ff / (root_prod + u2);
    let phi2 = -nu * root_ff / (root_prod + u1);
    let s1 = signed_root_u1(ep);
    let (r1, r2) = (u1.sqrt(), u2.sqrt());
    let v = -2.0 * p.mu * root_prod * f64::from(ep.octant.0[2]) / (r2 - s1) - nu * nu * (r1 - r2).powi(2);
    Ok(u2 * f1 / (u1 - u2) * p1 * p1 + u1 * f2 / (u2 - u1) * p2 * p2 + phi1 * p1 + phi2 * p2 + v)
}

/// Separation constants at ν = 0 for energy h:
/// k1 = ½f(u1)p1² + μ s1 − h u1, k2 = ½f(u2)p2² − μ√u2 − h u2,
/// with s1 = ±√u1 signed like q3. Equal whenever h = H.
/// Also returns the magnitude scale of the terms.
pub fn separation_constants(ep: &EllipticPhasePoint, p: &SystemParams, h: f64) -> (f64, f64, f64) {
    let EllipticPoint { u1, u2 } = ep.u;
    let [p1, p2] = ep.p_tilde;
    let s1 = signed_root_u1(ep);
    let t1 = [0.5 * f_poly(u1, p.a, p.b) * p1 * p1, p.mu * s1, -h * u1];
    let t2 = [0.5 * f_poly(u2, p.a, p.b) * p2 * p2, -p.mu * u2.sqrt(), -h * u2];
    let scale = t1.iter().chain(&t2).map(|t| t.abs()).sum::<f64>().max(1.0);
    (t1.iter().sum(), t2.iter().sum(), scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationSeries {
    pub times: Vec<f64>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub scale: Vec<f64>,
    /// Samples skipped because they sat on the chart boundary.
    pub excluded: usize,
}

impl SeparationSeries {
    /// max |k1 − k2| / scale.
    pub fn max_mismatch(&self) -> f64 {
        self.k1
            .iter()
            .zip(&self.k2)
            .zip(&self.scale)
            .map(|((a, b), s)| (a - b).abs() / s)
            .fold(0.0, f64::max)
    }

    /// max_t |k1(t) − k1(0)| / max(1, |k1(0)|).
    pub fn drift(&self) -> f64 {
        let Some(&k0) = self.k1.first() else { return 0.0 };
        self.k1.iter().map(|k| (k - k0).abs()).fold(0.0, f64::max) / k0.abs().max(1.0)
    }
}

/// Separation constants along a ν = 0 trajectory, with h taken as the
/// sampled H. Points on the chart boundary are skipped and counted.
pub fn separation_check(tr: &TrajectoryRecord, p: &SystemParams) -> Result<SeparationSeries, EllipticError> {
    require_spherical(p)?;
    if let Some(&c2) = tr.c2.first() {
        if c2.abs() > 1e-10 {
            return Err(EllipticError::NonZeroCharge(c2));
        }
    }
    let mut out = SeparationSeries {
        times: Vec::new(),
        k1: Vec::new(),
        k2: Vec::new(),
        scale: Vec::new(),
        excluded: 0,
    };
    for ((t, x), h) in tr.times.iter().zip(&tr.points).zip(&tr.h) {
        match convert(x, p, 0.0) {
            Ok(ep) => {
                let (k1, k2, s) = separation_constants(&ep, p, *h);
                out.times.push(*t);
                out.k1.push(k1);
                out.k2.push(k2);
                out.scale.push(s);
            }
            Err(EllipticError::ChartBoundary { .. }) => out.excluded += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
