use crate::algebra::{gradient_generic, PhasePoint};
use crate::systems::{hamiltonian_generic, integral_generic, r_generic, Hamiltonian, SystemParams};

use super::{
    leaf_project, DynamicsError, IntegratorConfig, Method, Projection, Termination, TrajectoryRecord,
};

type State = [f64; 6];

/// ẋ_i = Σ_j J^{ij}(x) ∂_j H.
pub fn vector_field(x: &State, p: &SystemParams) -> State {
    let dh = gradient_generic(&Hamiltonian(*p), x);
    let j = p.structure().tensor(x);
    std::array::from_fn(|i| (0..6).map(|k| j[i][k] * dh[k]).sum())
}

fn finite(x: &State) -> bool {
    x.iter().all(|v| v.is_finite())
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn rk4_step(x: &State, h: f64, p: &SystemParams) -> State {
    let k1 = vector_field(x, p);
    let k2 = vector_field(&axpy(x, h, &[(0.5, &k1)]), p);
    let k3 = vector_field(&axpy(x, h, &[(0.5, &k2)]), p);
    let k4 = vector_field(&axpy(x, h, &[(1.0, &k3)]), p);
    axpy(x, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)])
}

// Dormand–Prince 5(4) tableau. The flow is autonomous, so the nodes c_i are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension: y(t0 + θh) = y0 + h Σ_i k_i Σ_r DENSE[i][r] θ^(r+1).
const DENSE: [[f64; 4]; 7] = [
    [1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0],
    [0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0],
    [0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0],
    [0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0],
    [0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0],
];

struct DopriStep {
    y: State,
    err: f64,
    k: [State; 7],
}

impl DopriStep {
    fn dense(&self, x0: &State, h: f64, theta: f64) -> State {
        let powers = [theta, theta * theta, theta.powi(3), theta.powi(4)];
        let w: [f64; 7] = std::array::from_fn(|i| (0..4).map(|r| DENSE[i][r] * powers[r]).sum());
        std::array::from_fn(|c| x0[c] + h * (0..7).map(|i| w[i] * self.k[i][c]).sum::<f64>())
    }
}

fn dopri_step(x: &State, k1: &State, h: f64, p: &SystemParams, atol: f64, rtol: f64) -> DopriStep {
    let k2 = vector_field(&axpy(x, h, &[(A21, k1)]), p);
    let k3 = vector_field(&axpy(x, h, &[(A31, k1), (A32, &k2)]), p);
    let k4 = vector_field(&axpy(x, h, &[(A41, k1), (A42, &k2), (A43, &k3)]), p);
    let k5 = vector_field(&axpy(x, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]), p);
    let k6 = vector_field(&axpy(x, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]), p);
    let y = axpy(x, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = vector_field(&y, p);
    let mut err = 0.0;
    for i in 0..6 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = atol + rtol * x[i].abs().max(y[i].abs());
        err = f64::max(err, (e / sc).abs());
    }
    DopriStep {
        y,
        err,
        k: [*k1, k2, k3, k4, k5, k6, k7],
    }
}

/// Cubic Hermite interpolation on [t0, t0 + h], used for dense output of RK4.
fn hermite(x0: &State, f0: &State, x1: &State, f1: &State, h: f64, theta: f64) -> State {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    std::array::from_fn(|i| h00 * x0[i] + h10 * h * f0[i] + h01 * x1[i] + h11 * h * f1[i])
}

struct Recorder<'a> {
    p: &'a SystemParams,
    interval: f64,
    next_index: usize,
    record: TrajectoryRecord,
}

impl<'a> Recorder<'a> {
    fn push(&mut self, t: f64, x: &State) {
        let (c1, c2) = self.p.structure().casimirs_generic(x);
        let r = &mut self.record;
        r.times.push(t);
        r.points.push(PhasePoint::from_array(x));
        r.h.push(hamiltonian_generic(x, self.p));
        r.f.push(integral_generic(x, self.p));
        r.c1.push(c1);
        r.c2.push(c2);
    }

    /// Emits every grid sample in (t0, t1] of an accepted step, using
    /// `interp(θ)` for interior samples.
    fn step(&mut self, t0: f64, t1: f64, x1: &State, interp: impl Fn(f64) -> State) {
        let h = t1 - t0;
        loop {
            let ts = self.next_index as f64 * self.interval;
            if ts > t1 * (1.0 + 1e-14) {
                break;
            }
            let theta = ((ts - t0) / h).clamp(0.0, 1.0);
            let xs = if theta == 1.0 { *x1 } else { interp(theta) };
            self.push(ts, &xs);
            self.next_index += 1;
        }
    }

    /// Appends the terminal state unless it already sits on the grid.
    fn finish(mut self, t: f64, x: &State, termination: Termination) -> TrajectoryRecord {
        if self.record.times.last().is_some_and(|&last| t > last + 1e-12 * t.max(1.0)) {
            self.push(t, x);
        }
        self.record.termination = termination;
        self.record
    }
}

/// Integrates the flow of H from `x0`, sampling every `cfg.sample_interval`.
///
/// Approaching the singular set (R < `singularity_radius`), step-size
/// underflow or a non-finite vector field all end the run with
/// [`Termination::SingularityEncounter`] and return the partial trajectory.
pub fn integrate(x0: &PhasePoint, p: &SystemParams, cfg: &IntegratorConfig) -> Result<TrajectoryRecord, DynamicsError> {
    cfg.validate()?;
    if !x0.is_finite() {
        return Err(DynamicsError::InvalidStart("non-finite coordinates".into()));
    }
    let q0 = x0.q.0;
    let r0 = r_generic(&q0, p);
    if !(r0 >= cfg.singularity_radius) || !r0.is_finite() {
        return Err(DynamicsError::StartsSingular { r: r0 });
    }
    let mut x = x0.to_array();
    let (c1_0, c2_0) = p.structure().casimirs_generic(&x);
    let mut rec = Recorder {
        p,
        interval: cfg.sample_interval,
        next_index: 1,
        record: TrajectoryRecord {
            times: Vec::new(),
            points: Vec::new(),
            h: Vec::new(),
            f: Vec::new(),
            c1: Vec::new(),
            c2: Vec::new(),
            termination: Termination::Completed,
            accepted_steps: 0,
            rejected_steps: 0,
        },
    };
    rec.push(0.0, &x);

    let singular = |y: &State| {
        let r = r_generic(&[y[3], y[4], y[5]], p);
        !(r >= cfg.singularity_radius)
    };
    let project = |y: State| -> State {
        match cfg.projection {
            Projection::None => y,
            Projection::Leaf => leaf_project(&PhasePoint::from_array(&y), c1_0, c2_0, p.structure())
                .map(|z| z.to_array())
                .unwrap_or(y),
        }
    };

    let mut t = 0.0;
    let mut f = vector_field(&x, p);
    let t_end = cfg.t_end;
    match cfg.method {
        Method::Rk4 { step } => {
            let mut steps = 0;
            while t < t_end * (1.0 - 1e-15) {
                if steps >= cfg.max_steps {
                    return Ok(rec.finish(t, &x, super::Termination::MaxSteps));
                }
                let h = step.min(t_end - t);
                let y = project(rk4_step(&x, h, p));
                if !finite(&y) || singular(&y) {
                    return Ok(rec.finish(t, &x, Termination::SingularityEncounter));
                }
                let fy = vector_field(&y, p);
                rec.step(t, t + h, &y, |th| hermite(&x, &f, &y, &fy, h, th));
                t += h;
                x = y;
                f = fy;
                steps += 1;
                rec.record.accepted_steps = steps;
            }
        }
        Method::Rk45 { abs_tol, rel_tol } => {
            let mut h = initial_step(&x, &f, p, abs_tol, rel_tol).min(t_end);
            let mut steps = 0;
            while t < t_end * (1.0 - 1e-15) {
                if steps >= cfg.max_steps {
                    return Ok(rec.finish(t, &x, Termination::MaxSteps));
                }
                steps += 1;
                let h_try = h.min(t_end - t);
                if h_try < 1e-13 * t.max(1.0) {
                    return Ok(rec.finish(t, &x, Termination::SingularityEncounter));
                }
                let st = dopri_step(&x, &f, h_try, p, abs_tol, rel_tol);
                let err = st.err;
                if !err.is_finite() || !finite(&st.y) {
                    h = h_try * 0.2;
                    rec.record.rejected_steps += 1;
                    continue;
                }
                if err <= 1.0 {
                    let y = project(st.y);
                    if singular(&y) {
                        return Ok(rec.finish(t, &x, Termination::SingularityEncounter));
                    }
                    let fy = match cfg.projection {
                        Projection::None => st.k[6],
                        Projection::Leaf => vector_field(&y, p),
                    };
                    rec.step(t, t + h_try, &y, |th| st.dense(&x, h_try, th));
                    t += h_try;
                    x = y;
                    f = fy;
                    rec.record.accepted_steps += 1;
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    h = h_try * factor;
                } else {
                    rec.record.rejected_steps += 1;
                    h = h_try * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                }
            }
        }
    }
    Ok(rec.finish(t, &x, Termination::Completed))
}

/// Starting step from the size of the state and its derivative.
fn initial_step(x: &State, f: &State, p: &SystemParams, atol: f64, rtol: f64) -> f64 {
    let norm = |v: &State, y: &State| {
        (v.iter()
            .zip(y)
            .map(|(a, b)| (a / (atol + rtol * b.abs())).powi(2))
            .sum::<f64>()
            / 6.0)
            .sqrt()
    };
    let d0 = norm(x, x);
    let d1 = norm(f, x);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y = axpy(x, h0, &[(1.0, f)]);
    let f1 = vector_field(&y, p);
    let diff: State = std::array::from_fn(|i| f1[i] - f[i]);
    let d2 = norm(&diff, x) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec3;
    use crate::dynamics::drift_report;

    fn start() -> PhasePoint {
        PhasePoint::new(Vec3::new(1.6, 0.0, 0.0), Vec3::new(0.0, 0.6, 0.8))
    }

    #[test]
    fn geodesic_stays_on_sphere() {
        let p = SystemParams::spherical(2.0, 1.0, 0.0).unwrap();
        let x0 = PhasePoint::new(Vec3::new(0.3, -0.7, 0.2), Vec3::new(0.6, 0.0, 0.8));
        let tr = integrate(&x0, &p, &IntegratorConfig::rk45(1e-10, 20.0)).unwrap();
        assert_eq!(tr.termination, Termination::Completed);
        for pt in &tr.points {
            assert!((pt.q.norm() - 1.0).abs() < 1e-9);
        }
        assert!((tr.times.last().unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn samples_are_strictly_increasing() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let tr = integrate(&start(), &p, &IntegratorConfig::rk45(1e-9, 3.05)).unwrap();
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(tr.len(), 32);
    }

    #[test]
    fn adaptive_drift_is_small() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let tr = integrate(&start(), &p, &IntegratorConfig::rk45(1e-10, 100.0)).unwrap();
        assert_eq!(tr.termination, Termination::Completed);
        let d = drift_report(&tr).unwrap();
        assert!(d.h <= 1e-6 && d.f <= 1e-6, "{d:?}");
        assert!(d.c1 <= 1e-8 && d.c2 <= 1e-8, "{d:?}");
    }

    #[test]
    fn fixed_point_has_zero_drift() {
        let p = SystemParams::spherical(2.0, 1.0, 0.0).unwrap();
        let x0 = PhasePoint::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        let tr = integrate(&x0, &p, &IntegratorConfig::rk4(0.1, 5.0)).unwrap();
        assert_eq!(drift_report(&tr).unwrap().max(), 0.0);
    }

    #[test]
    fn time_reversal_returns_to_start() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let cfg = IntegratorConfig::rk45(1e-12, 10.0);
        let fwd = integrate(&start(), &p, &cfg).unwrap();
        let end = *fwd.last().unwrap();
        // Reversing time on e(3)* is M -> -M with q fixed.
        let back_start = PhasePoint::new(-end.m, end.q);
        let back = integrate(&back_start, &p, &cfg).unwrap();
        let ret = back.last().unwrap();
        let x0 = start();
        let err = (ret.q - x0.q).norm() + (-ret.m - x0.m).norm();
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn rk4_convergence_order() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let drift = |h| {
            let tr = integrate(&start(), &p, &IntegratorConfig::rk4(h, 10.0)).unwrap();
            drift_report(&tr).unwrap().h
        };
        let ratio = drift(0.02) / drift(0.01);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn projection_pins_casimirs() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let mut cfg = IntegratorConfig::rk4(0.01, 100.0);
        cfg.projection = Projection::Leaf;
        let tr = integrate(&start(), &p, &cfg).unwrap();
        let d = drift_report(&tr).unwrap();
        assert!(d.c1 <= 1e-13 && d.c2 <= 1e-13, "{d:?}");
    }

    #[test]
    fn attractive_centre_captures_particle() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let c = crate::systems::centres(&p).unwrap().plus;
        let q = (c + Vec3::new(0.0, 0.02, 0.0)).normalized();
        let x0 = PhasePoint::new(Vec3::new(0.0, 0.0, 0.0), q);
        let tr = integrate(&x0, &p, &IntegratorConfig::rk45(1e-10, 50.0)).unwrap();
        assert_eq!(tr.termination, Termination::SingularityEncounter);
    }

    #[test]
    fn singular_start_is_rejected() {
        let p = SystemParams::spherical(2.0, 1.0, 1.0).unwrap();
        let c = crate::systems::centres(&p).unwrap().minus;
        let x0 = PhasePoint::new(Vec3::new(0.0, 0.0, 0.0), c);
        assert!(matches!(
            integrate(&x0, &p, &IntegratorConfig::default()),
            Err(DynamicsError::StartsSingular { .. })
        ));
    }
}
