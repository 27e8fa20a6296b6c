//! Killing's spherical two-centre problem and its quadratic integral on the
//! (M, q) = 0 leaf.
//!
//! H_K = ½|M|² − μ cot θ₋ − μ cot θ₊ with centres c± = (±α, 0, β), α² + β² = 1,
//! where θ± is the spherical distance to c± (on |q| = 1).

use crate::algebra::{PhasePoint, Real, ScalarField};

use super::SystemError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingParams {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl KillingParams {
    pub fn new(mu: f64, alpha: f64, beta: f64) -> Result<Self, SystemError> {
        if (alpha * alpha + beta * beta - 1.0).abs() > 1e-12 {
            return Err(SystemError::InvalidParams(format!(
                "alpha^2 + beta^2 must equal 1, got {}",
                alpha * alpha + beta * beta
            )));
        }
        Ok(Self { mu, alpha, beta })
    }

    /// β = √(1 − α²).
    pub fn from_alpha(mu: f64, alpha: f64) -> Result<Self, SystemError> {
        Self::new(mu, alpha, (1.0 - alpha * alpha).sqrt())
    }
}

// Squared sines of the distances to c₋ = (−α, 0, β) and c₊ = (α, 0, β).
fn sin2_minus<T: Real>(q: &[T; 3], kp: &KillingParams) -> T {
    let w = q[2] * kp.alpha + q[0] * kp.beta;
    q[1] * q[1] + w * w
}

fn sin2_plus<T: Real>(q: &[T; 3], kp: &KillingParams) -> T {
    let w = q[0] * kp.beta - q[2] * kp.alpha;
    q[1] * q[1] + w * w
}

pub fn killing_hamiltonian_generic<T: Real>(x: &[T; 6], kp: &KillingParams) -> T {
    let q = [x[3], x[4], x[5]];
    let kinetic = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * 0.5;
    let cos_minus = q[2] * kp.beta - q[0] * kp.alpha;
    let cos_plus = q[2] * kp.beta + q[0] * kp.alpha;
    kinetic - cos_minus / sin2_minus(&q, kp).sqrt() * kp.mu - cos_plus / sin2_plus(&q, kp).sqrt() * kp.mu
}

/// Quadratic integral on the (M, q) = 0 leaf:
///
/// F = α²M1² − β²M3² + 2αβμ [(βq1 − αq3)/sin θ₊ − (βq1 + αq3)/sin θ₋].
///
/// The kinetic part is −(M, c₊)(M, c₋). The potential part was fixed by
/// requiring {H_K, F} = 0 on the leaf; the form circulating in the literature
/// swaps α and β in the second numerator and flips the first term's sign, and
/// does not commute.
pub fn mamaev_integral_generic<T: Real>(x: &[T; 6], kp: &KillingParams) -> T {
    let q = [x[3], x[4], x[5]];
    let (a, b) = (kp.alpha, kp.beta);
    let kinetic = x[0] * x[0] * (a * a) - x[2] * x[2] * (b * b);
    let plus = (q[0] * b - q[2] * a) / sin2_plus(&q, kp).sqrt();
    let minus = (q[0] * b + q[2] * a) / sin2_minus(&q, kp).sqrt();
    kinetic + (plus - minus) * (2.0 * a * b * kp.mu)
}

fn check_domain(x: &PhasePoint, kp: &KillingParams) -> Result<(), SystemError> {
    let q = x.q.0;
    let r = sin2_minus(&q, kp).min(sin2_plus(&q, kp));
    if r < super::SINGULAR_GUARD {
        Err(SystemError::Singular { r })
    } else {
        Ok(())
    }
}

pub fn killing_hamiltonian(x: &PhasePoint, kp: &KillingParams) -> Result<f64, SystemError> {
    check_domain(x, kp)?;
    Ok(killing_hamiltonian_generic(&x.to_array(), kp))
}

pub fn mamaev_integral(x: &PhasePoint, kp: &KillingParams) -> Result<f64, SystemError> {
    check_domain(x, kp)?;
    Ok(mamaev_integral_generic(&x.to_array(), kp))
}

#[derive(Debug, Clone, Copy)]
pub struct KillingHamiltonian(pub KillingParams);

impl ScalarField for KillingHamiltonian {
    fn name(&self) -> String {
        "H_Killing".into()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        killing_hamiltonian_generic(x, &self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MamaevIntegral(pub KillingParams);

impl ScalarField for MamaevIntegral {
    fn name(&self) -> String {
        "F_Mamaev".into()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        mamaev_integral_generic(x, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec3;

    #[test]
    fn free_values() {
        let kp = KillingParams::from_alpha(0.0, 0.6).unwrap();
        let x = PhasePoint::new(Vec3::new(1.0, 1.0, 0.0), Vec3::new(0.0, 0.6, 0.8));
        assert_eq!(killing_hamiltonian(&x, &kp).unwrap(), 1.0);
        assert!((mamaev_integral(&x, &kp).unwrap() - 0.36).abs() < 1e-15);
    }

    #[test]
    fn params_validated() {
        assert!(KillingParams::new(1.0, 0.6, 0.6).is_err());
        assert!(KillingParams::new(1.0, 0.6, 0.8).is_ok());
    }

    #[test]
    fn centre_is_singular() {
        let kp = KillingParams::from_alpha(1.0, 0.6).unwrap();
        let x = PhasePoint::new(Vec3::default(), Vec3::new(0.6, 0.0, 0.8));
        assert!(killing_hamiltonian(&x, &kp).is_err());
    }
}
