use crate::algebra::{casimirs, PhasePoint, PoissonStructure};

use super::DynamicsError;

/// Rescales q onto C1 = `c1`, then shifts M along q to restore C2 = `c2`.
///
/// M only moves along q, so its components tangent to the leaf are unchanged.
pub fn leaf_project(
    x: &PhasePoint,
    c1: f64,
    c2: f64,
    structure: PoissonStructure,
) -> Result<PhasePoint, DynamicsError> {
    let (current, _) = casimirs(x, structure);
    if x.q.norm() == 0.0 || current == 0.0 || current.signum() != c1.signum() {
        return Err(DynamicsError::DegenerateProjection);
    }
    let q = x.q * (c1 / current).sqrt();
    let scaled = PhasePoint::new(x.m, q);
    let (_, mq) = casimirs(&scaled, structure);
    let m = x.m + q * ((c2 - mq) / c1);
    Ok(PhasePoint::new(m, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec3;

    #[test]
    fn on_leaf_point_is_fixed() {
        let q = Vec3::new(0.48, 0.6, 0.64);
        let x = PhasePoint::new(Vec3::new(0.1, -0.3, 0.2), q);
        let (c1, c2) = casimirs(&x, PoissonStructure::Euclidean);
        let y = leaf_project(&x, c1, c2, PoissonStructure::Euclidean).unwrap();
        for i in 0..3 {
            assert!((y.m[i] - x.m[i]).abs() <= 1e-15);
            assert!((y.q[i] - x.q[i]).abs() <= 1e-15);
        }
    }

    #[test]
    fn restores_scaled_q() {
        let q = Vec3::new(0.48, 0.6, 0.64);
        let m = Vec3::new(0.1, -0.3, 0.2);
        let x = PhasePoint::new(m, q * (1.0 + 1e-6));
        let y = leaf_project(&x, 1.0, 0.5, PoissonStructure::Euclidean).unwrap();
        let (c1, c2) = casimirs(&y, PoissonStructure::Euclidean);
        assert!((c1 - 1.0).abs() < 1e-15);
        assert!((c2 - 0.5).abs() < 1e-15);
        // Tangential part of M untouched.
        let tangential = |v: Vec3| v - q * v.dot(&q);
        let d = tangential(y.m) - tangential(m);
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn zero_q_rejected() {
        let x = PhasePoint::new(Vec3::new(1.0, 0.0, 0.0), Vec3::default());
        assert_eq!(
            leaf_project(&x, 1.0, 0.0, PoissonStructure::Euclidean),
            Err(DynamicsError::DegenerateProjection)
        );
    }

    #[test]
    fn lorentzian_projection() {
        let x = PhasePoint::new(Vec3::new(0.3, 0.1, -0.2), Vec3::new(0.5, 0.2, 1.3));
        let y = leaf_project(&x, 1.0, 0.25, PoissonStructure::Lorentzian).unwrap();
        let (c1, c2) = casimirs(&y, PoissonStructure::Lorentzian);
        assert!((c1 - 1.0).abs() < 1e-14 && (c2 - 0.25).abs() < 1e-14);
    }
}
