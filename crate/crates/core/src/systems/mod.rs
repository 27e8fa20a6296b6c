//! Closed-form Hamiltonians and quadratic integrals of the two-centre family
//! on the sphere (e(3)*), the hyperbolic plane and the experimental de Sitter
//! real form (so(2,1)*), plus the Killing two-centre baseline.

mod killing;

pub use killing::{killing_hamiltonian, mamaev_integral, KillingHamiltonian, KillingParams, MamaevIntegral};

use serde::{Deserialize, Serialize};

use crate::algebra::{PhasePoint, PoissonStructure, Real, ScalarField, Vec3};

/// |R| below this is treated as the singular set.
pub const SINGULAR_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point at/inside singular set (R = {r:e})")]
    Singular { r: f64 },
    #[error("point off the {0} sheet: metric norm squared {1:e} has the wrong sign")]
    OffSheet(&'static str, f64),
    #[error("{0} is not available for the experimental de Sitter form")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    /// e(3)*, unit sphere leaf, requires A > B > 0.
    Spherical,
    /// so(2,1)*, upper sheet of (q,Jq) = 1, requires B > A > 0.
    Hyperbolic,
    /// so(2,1)*, one-sheeted (q,Jq) = -1, requires B > 0 > A. Experimental.
    DeSitter,
}

impl Geometry {
    pub fn structure(self) -> PoissonStructure {
        match self {
            Self::Spherical => PoissonStructure::Euclidean,
            Self::Hyperbolic | Self::DeSitter => PoissonStructure::Lorentzian,
        }
    }

    /// Value of C1 on the unit leaf.
    pub fn unit_c1(self) -> f64 {
        match self {
            Self::Spherical | Self::Hyperbolic => 1.0,
            Self::DeSitter => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Spherical => "spherical",
            Self::Hyperbolic => "hyperbolic",
            Self::DeSitter => "de-sitter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub geometry: Geometry,
}

impl SystemParams {
    /// Validated parameters. The de Sitter form is only reachable through
    /// [`SystemParams::experimental_de_sitter`].
    pub fn new(a: f64, b: f64, mu: f64, geometry: Geometry) -> Result<Self, SystemError> {
        if geometry == Geometry::DeSitter {
            return Err(SystemError::InvalidParams(
                "the de Sitter form is experimental; use SystemParams::experimental_de_sitter".into(),
            ));
        }
        Self::validated(Self { a, b, mu, geometry })
    }

    pub fn spherical(a: f64, b: f64, mu: f64) -> Result<Self, SystemError> {
        Self::new(a, b, mu, Geometry::Spherical)
    }

    pub fn hyperbolic(a: f64, b: f64, mu: f64) -> Result<Self, SystemError> {
        Self::new(a, b, mu, Geometry::Hyperbolic)
    }

    /// Real de Sitter form, B > 0 > A. `mu` plays the role of the real
    /// coupling κ in H = ½(M1²+M2²−M3²) + κ s/√R, s = √(q1²+q2²−q3²).
    pub fn experimental_de_sitter(a: f64, b: f64, mu: f64) -> Result<Self, SystemError> {
        Self::validated(Self {
            a,
            b,
            mu,
            geometry: Geometry::DeSitter,
        })
    }

    fn validated(p: Self) -> Result<Self, SystemError> {
        if !(p.a.is_finite() && p.b.is_finite() && p.mu.is_finite()) {
            return Err(SystemError::InvalidParams("non-finite parameter".into()));
        }
        let ok = match p.geometry {
            Geometry::Spherical => p.a > p.b && p.b > 0.0,
            Geometry::Hyperbolic => p.b > p.a && p.a > 0.0,
            Geometry::DeSitter => p.b > 0.0 && 0.0 > p.a,
        };
        if ok {
            Ok(p)
        } else {
            let rule = match p.geometry {
                Geometry::Spherical => "A>B>0",
                Geometry::Hyperbolic => "B>A>0",
                Geometry::DeSitter => "B>0>A",
            };
            Err(SystemError::InvalidParams(format!(
                "{} requires {rule}, got A={}, B={}",
                p.geometry.name(),
                p.a,
                p.b
            )))
        }
    }

    pub fn structure(&self) -> PoissonStructure {
        self.geometry.structure()
    }

    /// √(|AB|).
    pub fn root_ab(&self) -> f64 {
        (self.a * self.b).abs().sqrt()
    }
}

/// Squared metric norm of q: |q|², (q,Jq), or −(q,Jq) for de Sitter.
pub fn metric_norm_sq<T: Real>(q: &[T; 3], geometry: Geometry) -> T {
    let lorentz = q[2] * q[2] - q[0] * q[0] - q[1] * q[1];
    match geometry {
        Geometry::Spherical => q[0] * q[0] + q[1] * q[1] + q[2] * q[2],
        Geometry::Hyperbolic => lorentz,
        Geometry::DeSitter => -lorentz,
    }
}

/// R(q) in its expanded form.
pub fn r_generic<T: Real>(q: &[T; 3], p: &SystemParams) -> T {
    let n = metric_norm_sq(q, p.geometry).sqrt();
    let g = p.root_ab();
    let (q1s, q2s, q3s) = (q[0] * q[0], q[1] * q[1], q[2] * q[2]);
    match p.geometry {
        Geometry::Spherical => q2s * p.a + q1s * p.b + q3s * (p.a + p.b) - n * q[2] * (2.0 * g),
        Geometry::Hyperbolic => -(q2s * p.a) - q1s * p.b + q3s * (p.a + p.b) - n * q[2] * (2.0 * g),
        Geometry::DeSitter => -(q2s * p.a) - q1s * p.b + q3s * (p.a + p.b) + n * q[2] * (2.0 * g),
    }
}

/// H(M, q).
pub fn hamiltonian_generic<T: Real>(x: &[T; 6], p: &SystemParams) -> T {
    let q = [x[3], x[4], x[5]];
    let n = metric_norm_sq(&q, p.geometry).sqrt();
    let potential = n / r_generic(&q, p).sqrt() * p.mu;
    match p.geometry {
        Geometry::Spherical => (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * 0.5 - potential,
        Geometry::Hyperbolic | Geometry::DeSitter => {
            (x[0] * x[0] + x[1] * x[1] - x[2] * x[2]) * 0.5 + potential
        }
    }
}

/// The quadratic integral F(M, q).
pub fn integral_generic<T: Real>(x: &[T; 6], p: &SystemParams) -> T {
    let q = [x[3], x[4], x[5]];
    let n = metric_norm_sq(&q, p.geometry).sqrt();
    let g = p.root_ab();
    let kinetic = x[0] * x[0] * p.a + x[1] * x[1] * p.b;
    let centre_term = q[2] / r_generic(&q, p).sqrt() * (2.0 * p.mu * g);
    match p.geometry {
        Geometry::Spherical => {
            let mq = x[0] * q[0] + x[1] * q[1] + x[2] * q[2];
            kinetic + mq * x[2] / n * (2.0 * g) - centre_term
        }
        Geometry::Hyperbolic | Geometry::DeSitter => {
            let mq = x[2] * q[2] - x[0] * q[0] - x[1] * q[1];
            kinetic - mq * x[2] / n * (2.0 * g) + centre_term
        }
    }
}

/// H as a [`ScalarField`].
#[derive(Debug, Clone, Copy)]
pub struct Hamiltonian(pub SystemParams);

impl ScalarField for Hamiltonian {
    fn name(&self) -> String {
        format!("H[{}]", self.0.geometry.name())
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        hamiltonian_generic(x, &self.0)
    }
}

/// F as a [`ScalarField`].
#[derive(Debug, Clone, Copy)]
pub struct Integral(pub SystemParams);

impl ScalarField for Integral {
    fn name(&self) -> String {
        format!("F[{}]", self.0.geometry.name())
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        integral_generic(x, &self.0)
    }
}

fn check_sheet(q: &Vec3, p: &SystemParams) -> Result<(), SystemError> {
    let n2 = metric_norm_sq(&q.0, p.geometry);
    if n2 > 0.0 {
        Ok(())
    } else {
        Err(SystemError::OffSheet(p.geometry.name(), n2))
    }
}

/// R(q), checking that q lies in the sign regime where the metric norm is real.
pub fn r_value(q: &Vec3, p: &SystemParams) -> Result<f64, SystemError> {
    if p.geometry != Geometry::Spherical {
        check_sheet(q, p)?;
    }
    Ok(r_generic(&q.0, p))
}

/// R(q) as a completed square: (A−B)q2² + (√A q3 − √B|q|)² on the sphere,
/// (B−A)q2² + (√A q3 − √B‖q‖)² on the hyperboloid, and
/// (B−A)q2² − (√|A| q3 − √B s)² for de Sitter.
pub fn r_value_completed_square(q: &Vec3, p: &SystemParams) -> Result<f64, SystemError> {
    if p.geometry != Geometry::Spherical {
        check_sheet(q, p)?;
    }
    let n = metric_norm_sq(&q.0, p.geometry).sqrt();
    let (sa, sb) = (p.a.abs().sqrt(), p.b.sqrt());
    let square = (sa * q[2] - sb * n).powi(2);
    Ok(match p.geometry {
        Geometry::Spherical => (p.a - p.b) * q[1] * q[1] + square,
        Geometry::Hyperbolic => (p.b - p.a) * q[1] * q[1] + square,
        Geometry::DeSitter => (p.b - p.a) * q[1] * q[1] - square,
    })
}

fn checked_r(x: &PhasePoint, p: &SystemParams) -> Result<f64, SystemError> {
    let r = r_value(&x.q, p)?;
    if r.abs() < SINGULAR_GUARD || r < 0.0 {
        Err(SystemError::Singular { r })
    } else {
        Ok(r)
    }
}

pub fn hamiltonian(x: &PhasePoint, p: &SystemParams) -> Result<f64, SystemError> {
    checked_r(x, p)?;
    Ok(hamiltonian_generic(&x.to_array(), p))
}

pub fn integral_f(x: &PhasePoint, p: &SystemParams) -> Result<f64, SystemError> {
    checked_r(x, p)?;
    Ok(integral_generic(&x.to_array(), p))
}

/// The two singular points of the potential on the unit leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Centres {
    pub plus: Vec3,
    pub minus: Vec3,
}

pub fn centres(p: &SystemParams) -> Result<Centres, SystemError> {
    let x1 = match p.geometry {
        Geometry::Spherical => ((p.a - p.b) / p.a).sqrt(),
        Geometry::Hyperbolic => ((p.b - p.a) / p.a).sqrt(),
        Geometry::DeSitter => return Err(SystemError::Unsupported("centres")),
    };
    let x3 = (p.b / p.a).sqrt();
    Ok(Centres {
        plus: Vec3::new(x1, 0.0, x3),
        minus: Vec3::new(-x1, 0.0, x3),
    })
}

/// Direction along which a centre is approached in [`coulomb_asymptotics_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    /// Along the great circle through both centres (q2 = 0).
    InPlane,
    /// Along the great circle through the centre tangent to e2.
    Transverse,
}

/// Potential near a centre: exact value and the Coulomb model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombSample {
    pub numeric: f64,
    pub model: f64,
}

impl CoulombSample {
    pub fn ratio(&self) -> f64 {
        self.numeric / self.model
    }
}

/// Evaluates U = −μ|q|/√R at spherical distance `rho` from the `+` centre
/// and the Coulomb model −μ/(√(A−B) ρ).
///
/// Near a centre R ≈ (A−B)ρ² in every tangent direction, so the singularity
/// has charge μ/√(A−B).
pub fn coulomb_asymptotics_check(p: &SystemParams, rho: f64, approach: Approach) -> Result<CoulombSample, SystemError> {
    if p.geometry != Geometry::Spherical {
        return Err(SystemError::InvalidParams("Coulomb asymptotics are checked on the sphere".into()));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(SystemError::InvalidParams(format!("rho must lie in (0, 1), got {rho}")));
    }
    let c = centres(p)?.plus;
    let tangent = match approach {
        Approach::InPlane => Vec3::new(c[2], 0.0, -c[0]),
        Approach::Transverse => Vec3::new(0.0, 1.0, 0.0),
    };
    let q = c * rho.cos() + tangent * rho.sin();
    let r = r_value(&q, p)?;
    Ok(CoulombSample {
        numeric: -p.mu * q.norm() / r.sqrt(),
        model: -p.mu / ((p.a - p.b).sqrt() * rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sph() -> SystemParams {
        SystemParams::spherical(2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn parameter_regimes() {
        assert!(SystemParams::spherical(1.0, 2.0, 0.0).is_err());
        assert!(SystemParams::spherical(1.0, 1.0, 0.0).is_err());
        assert!(SystemParams::hyperbolic(2.0, 1.0, 0.0).is_err());
        assert!(SystemParams::hyperbolic(1.0, 2.0, 0.0).is_ok());
        assert!(SystemParams::new(-1.0, 2.0, 0.0, Geometry::DeSitter).is_err());
        assert!(SystemParams::experimental_de_sitter(-1.0, 2.0, 0.0).is_ok());
        assert!(SystemParams::experimental_de_sitter(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn r_examples() {
        let p = sph();
        let r = r_value(&Vec3::new(0.0, 0.0, 1.0), &p).unwrap();
        assert_abs_diff_eq!(r, 3.0 - 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        let h = 0.5f64.sqrt();
        for s in [1.0, -1.0] {
            let at_centre = r_value(&Vec3::new(s * h, 0.0, h), &p).unwrap();
            assert_abs_diff_eq!(at_centre, 0.0, epsilon = 1e-15);
            // Antipodes of the centres: R = 4B, so the potential is smooth there.
            let antipode = r_value(&Vec3::new(s * h, 0.0, -h), &p).unwrap();
            assert_abs_diff_eq!(antipode, 4.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn r_forms_agree() {
        let p = SystemParams::spherical(5.0, 0.5, 1.0).unwrap();
        let mut rng = crate::algebra::sampling::stream_rng(3, 0);
        for _ in 0..200 {
            let x = crate::algebra::sampling::uniform_point(&mut rng);
            let a = r_value(&x.q, &p).unwrap();
            let b = r_value_completed_square(&x.q, &p).unwrap();
            assert!((a - b).abs() <= 1e-13 * (1.0 + x.q.dot(&x.q) * 6.0));
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let free = SystemParams::spherical(2.0, 1.0, 0.0).unwrap();
        let x = PhasePoint::new(Vec3::new(1.0, 1.0, 1.0), Vec3::new(0.3, -0.2, 0.5));
        assert_eq!(hamiltonian(&x, &free).unwrap(), 1.5);

        let x = PhasePoint::new(Vec3::default(), Vec3::new(0.0, 0.0, 1.0));
        assert_abs_diff_eq!(hamiltonian(&x, &sph()).unwrap(), -1.0 / (2f64.sqrt() - 1.0), epsilon = 1e-13);

        let hyp = SystemParams::hyperbolic(1.0, 2.0, 0.0).unwrap();
        let x = PhasePoint::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(hamiltonian(&x, &hyp).unwrap(), -0.5);
    }

    #[test]
    fn singular_set_is_a_domain_error() {
        let h = 0.5f64.sqrt();
        let x = PhasePoint::new(Vec3::default(), Vec3::new(h, 0.0, h));
        assert!(matches!(hamiltonian(&x, &sph()), Err(SystemError::Singular { .. })));
        assert!(matches!(integral_f(&x, &sph()), Err(SystemError::Singular { .. })));

        let hyp = SystemParams::hyperbolic(1.0, 2.0, 1.0).unwrap();
        let x = PhasePoint::new(Vec3::default(), Vec3::new(2.0, 0.0, 1.0));
        assert!(matches!(hamiltonian(&x, &hyp), Err(SystemError::OffSheet(..))));
    }

    #[test]
    fn integral_examples() {
        let free = SystemParams::spherical(2.0, 1.0, 0.0).unwrap();
        let q = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(integral_f(&PhasePoint::new(Vec3::new(1.0, 0.0, 0.0), q), &free).unwrap(), 2.0);
        let f = integral_f(&PhasePoint::new(Vec3::new(0.0, 0.0, 1.0), q), &free).unwrap();
        assert_abs_diff_eq!(f, 2.0 * 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn integral_reduces_to_quadratic_on_zero_leaf() {
        let free = SystemParams::spherical(3.0, 1.5, 0.0).unwrap();
        let q = Vec3::new(0.3, -0.4, 0.5).normalized();
        let m = Vec3::new(1.0, 2.0, -0.5);
        let m = m - q * m.dot(&q);
        let f = integral_f(&PhasePoint::new(m, q), &free).unwrap();
        assert_abs_diff_eq!(f, 3.0 * m[0] * m[0] + 1.5 * m[1] * m[1], epsilon = 1e-13);
    }

    #[test]
    fn centre_locations() {
        let c = centres(&sph()).unwrap();
        let h = 0.5f64.sqrt();
        assert_abs_diff_eq!(c.plus[0], h, epsilon = 1e-15);
        assert_abs_diff_eq!(c.minus[0], -h, epsilon = 1e-15);
        assert_abs_diff_eq!(c.plus[2], h, epsilon = 1e-15);
        assert_abs_diff_eq!(r_value(&c.plus, &sph()).unwrap(), 0.0, epsilon = 1e-13);

        let hyp = SystemParams::hyperbolic(1.0, 2.0, 1.0).unwrap();
        let c = centres(&hyp).unwrap();
        assert_eq!(c.plus[0], 1.0);
        assert_abs_diff_eq!(c.plus[2], 2f64.sqrt(), epsilon = 1e-15);
        for v in [c.plus, c.minus] {
            assert_abs_diff_eq!(v.lorentz_dot(&v), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(r_value(&v, &hyp).unwrap(), 0.0, epsilon = 1e-13);
        }

        let merged = centres(&SystemParams::spherical(1.0 + 1e-12, 1.0, 1.0).unwrap()).unwrap();
        assert!(merged.plus[0] < 1e-5 && (merged.plus[2] - 1.0).abs() < 1e-11);

        let ds = SystemParams::experimental_de_sitter(-1.0, 2.0, 1.0).unwrap();
        assert!(centres(&ds).is_err());
    }

    #[test]
    fn coulomb_ratio_converges() {
        let p = sph();
        let s = coulomb_asymptotics_check(&p, 1e-3, Approach::InPlane).unwrap();
        assert!((s.ratio() - 1.0).abs() < 1e-2);
        let s = coulomb_asymptotics_check(&p, 1e-4, Approach::InPlane).unwrap();
        assert!((s.ratio() - 1.0).abs() < 1e-3);
        let s = coulomb_asymptotics_check(&p, 1e-5, Approach::Transverse).unwrap();
        assert!((s.ratio() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn r_is_isotropic_quadratic_near_centre() {
        // R/ρ² → A − B along both tangent directions; the doubled prefactor
        // 2(A−B) is not what the expansion gives.
        let p = SystemParams::spherical(5.0, 0.5, 1.0).unwrap();
        let c = centres(&p).unwrap().plus;
        let rho = 1e-5;
        for t in [Vec3::new(c[2], 0.0, -c[0]), Vec3::new(0.0, 1.0, 0.0)] {
            let q = c * rho.cos() + t * rho.sin();
            let ratio = r_value(&q, &p).unwrap() / (rho * rho);
            assert!((ratio - 4.5).abs() < 1e-3 * 4.5, "ratio {ratio}");
        }
    }
}
