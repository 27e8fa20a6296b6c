//! Elliptic-coordinate cross-checks.

use rand::Rng;

use super::Check;
use crate::algebra::sampling::{leaf_point, stream_rng};
use crate::algebra::{PoissonStructure, Vec3};
use crate::dynamics::{integrate, IntegratorConfig};
use crate::elliptic::{
    boundary_distance, f_elliptic, field_density, from_elliptic, h_elliptic, is_interior, leaf_offsets, phase_to_elliptic, pullback_curl,
    r_in_elliptic, separation_check, to_elliptic, verify_da, EllipticError, Octant,
};
use crate::par::{self, Execution};
use crate::systems::{hamiltonian, integral_f, r_value, SystemParams};

pub const ROUND_TRIP_TOL: f64 = 1e-10;
pub const R_IDENTITY_TOL: f64 = 1e-12;
pub const H_AGREEMENT_TOL: f64 = 1e-9;
pub const DA_TOL: f64 = 1e-6;
pub const SEPARATION_TOL: f64 = 1e-6;

fn unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v.normalized();
        }
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

/// Root ordering, round trip and the R identity on `n` random unit vectors.
pub fn coordinate_checks(p: &SystemParams, n: usize, seed: u64, exec: Execution) -> Result<Vec<Check>, EllipticError> {
    let rows = par::map_range(n, exec, |i| -> Result<[f64; 3], EllipticError> {
        let q = unit_vector(&mut stream_rng(seed, i as u64));
        let u = to_elliptic(&q, p)?;
        let ordering = [-u.u1, u.u1 - p.b, p.b - u.u2, u.u2 - p.a].into_iter().fold(0.0f64, f64::max);
        let round_trip = if is_interior(&u, p) {
            let back = from_elliptic(&u, Octant::of(&q), p)?;
            (back - q).norm()
        } else {
            0.0
        };
        // (√u2 − √u1)² is R on the upper hemisphere.
        let upper = Vec3::new(q[0], q[1], q[2].abs());
        let r = r_value(&upper, p).map_err(|_| EllipticError::NotSpherical("R"))?;
        Ok([ordering, round_trip, (r - r_in_elliptic(&u)).abs()])
    });
    let rows: Vec<[f64; 3]> = rows.into_iter().collect::<Result<_, _>>()?;
    Ok(vec![
        Check::assert(format!("root ordering 0<=u1<=B<=u2<=A ({n} points)"), worst(rows.iter().map(|r| r[0])), 1e-12 * p.a),
        Check::assert(format!("from_elliptic(to_elliptic(q)) = q ({n} points)"), worst(rows.iter().map(|r| r[1])), ROUND_TRIP_TOL),
        Check::assert(format!("R = (sqrt(u1)-sqrt(u2))^2 ({n} points)"), worst(rows.iter().map(|r| r[2])), R_IDENTITY_TOL),
    ])
}

/// Interior leaf point `i`: resampled until it lies inside the chart.
fn interior_leaf_point(p: &SystemParams, nu: f64, seed: u64, i: usize) -> crate::algebra::PhasePoint {
    let mut rng = stream_rng(seed, i as u64);
    loop {
        let x = leaf_point(&mut rng, PoissonStructure::Euclidean, 1.0, nu);
        if let Ok(u) = to_elliptic(&x.q, p) {
            if is_interior(&u, p) && hamiltonian(&x, p).is_ok() {
                return x;
            }
        }
    }
}

/// Cartesian H against the elliptic form on `n` interior leaf points.
pub fn hamiltonian_agreement(p: &SystemParams, nu: f64, n: usize, seed: u64, exec: Execution) -> Check {
    let (h_off, _) = leaf_offsets(nu, p);
    let diffs = par::map_range(n, exec, |i| {
        let x = interior_leaf_point(p, nu, seed, i);
        let h = hamiltonian(&x, p).unwrap_or(f64::NAN);
        match phase_to_elliptic(&x, p, nu).and_then(|ep| h_elliptic(&ep, p)) {
            Ok(h1) => (h - h1 - h_off).abs() / h.abs().max(1.0),
            Err(_) => f64::INFINITY,
        }
    });
    Check::assert(format!("H cartesian = H elliptic + nu^2/2, nu={nu}"), worst(diffs), H_AGREEMENT_TOL)
}

/// F against the printed elliptic form, reported separately for the octants
/// with q3 > 0, q1 q2 > 0 and for the rest.
pub fn integral_report(p: &SystemParams, nu: f64, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let (_, f_off) = leaf_offsets(nu, p);
    let rows = par::map_range(n, exec, |i| {
        let x = interior_leaf_point(p, nu, seed, i);
        let f = integral_f(&x, p).unwrap_or(f64::NAN);
        let d = match phase_to_elliptic(&x, p, nu).and_then(|ep| f_elliptic(&ep, p)) {
            Ok(f1) => (f - f1 - f_off).abs() / f.abs().max(1.0),
            Err(_) => f64::INFINITY,
        };
        let positive = x.q[2] > 0.0 && x.q[0] * x.q[1] > 0.0;
        (positive, d)
    });
    let pos = worst(rows.iter().filter(|r| r.0).map(|r| r.1));
    let rest = worst(rows.iter().filter(|r| !r.0).map(|r| r.1));
    vec![
        Check::report(format!("F vs F1 + nu^2(A+B), q3>0 and q1q2>0, nu={nu}"), pos),
        Check::report(format!("F vs F1 + nu^2(A+B), other octants, nu={nu}"), rest),
    ]
}

/// dA density on the sphere and its pullback to (u1, u2).
pub fn gauge_checks(p: &SystemParams, nu: f64, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let density = par::map_range(n, exec, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let q = loop {
            let q = unit_vector(&mut rng);
            if q[0] * q[0] + q[1] * q[1] > 1e-4 {
                break q;
            }
        };
        verify_da(&q, nu).map_or(f64::INFINITY, |d| (d - nu).abs())
    });
    let pullback = par::map_range(n, exec, |i| {
        let x = interior_leaf_point(p, nu, seed, i);
        let q = Vec3::new(x.q[0].abs(), x.q[1].abs(), x.q[2].abs());
        let Ok(u) = to_elliptic(&q, p) else { return f64::INFINITY };
        if boundary_distance(&u, p) <= 0.0 {
            return 0.0;
        }
        // du1 ∧ du2 is negatively oriented in the positive octant.
        (pullback_curl(&u, Octant::POSITIVE, nu, p) + field_density(&u, nu, p)).abs()
    });
    vec![
        Check::assert(format!("dA = nu dS, nu={nu}"), worst(density), DA_TOL),
        Check::assert(format!("pullback dA = -B(u) du1^du2, nu={nu}"), worst(pullback), DA_TOL),
    ]
}

/// Stäckel separation along a ν = 0 trajectory: k1 = k2 pointwise and k1
/// constant in time.
pub fn separation_checks(p: &SystemParams, nu: f64, t_end: f64, seed: u64) -> Vec<Check> {
    if nu != 0.0 {
        return vec![Check::skip(format!("separation constants, nu={nu}"), "ν≠0: the separation needs zero charge")];
    }
    let x0 = interior_leaf_point(p, 0.0, seed, 0);
    let cfg = IntegratorConfig::rk45(1e-10, t_end);
    let series = integrate(&x0, p, &cfg)
        .map_err(|e| e.to_string())
        .and_then(|tr| separation_check(&tr, p).map_err(|e| e.to_string()));
    match series {
        Ok(s) => {
            let detail = format!("{} samples, {} on the chart boundary skipped", s.k1.len(), s.excluded);
            vec![
                Check::assert("separation k1 = k2", s.max_mismatch(), 1e-8).with_detail(detail.clone()),
                Check::assert(format!("separation constant drift, t_end={t_end}"), s.drift(), SEPARATION_TOL)
                    .with_detail(detail),
            ]
        }
        Err(e) => vec![Check::assert("separation constants", f64::INFINITY, SEPARATION_TOL).with_detail(e)],
    }
}

/// Everything `elliptic-check` runs for one charge.
pub fn elliptic_suite(p: &SystemParams, nu: f64, n_points: usize, n_leaf: usize, t_end: f64, seed: u64, exec: Execution) -> Result<Vec<Check>, EllipticError> {
    let mut out = coordinate_checks(p, n_points, seed, exec)?;
    out.push(hamiltonian_agreement(p, nu, n_leaf, seed, exec));
    out.extend(gauge_checks(p, nu, n_leaf, seed, exec));
    out.extend(separation_checks(p, nu, t_end, seed));
    out.extend(integral_report(p, nu, n_leaf, seed, exec));
    Ok(out)
}
