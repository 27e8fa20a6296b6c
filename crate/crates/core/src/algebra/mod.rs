//! Poisson structures, forward-mode differentiation and bracket evaluation.

mod dual;
pub mod fields;
mod poisson;
mod real;
pub mod sampling;
mod vec3;

pub use dual::{Dual, DualScalar};
pub use poisson::{
    bracket_with_scale, casimirs, gradient, gradient_generic, hamiltonian_vector_field,
    poisson_bracket, Bracket, BracketValue, PoissonStructure, ScalarField,
};
pub use real::{cross3, dot3, Real};
pub use vec3::{PhasePoint, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("non-finite derivative while evaluating {function}")]
    NonFinite { function: String },
}

#[cfg(test)]
mod tests {
    use super::fields::*;
    use super::*;
    use approx::assert_abs_diff_eq;

    struct HalfSquareM;
    impl ScalarField for HalfSquareM {
        fn name(&self) -> String {
            "|M|^2/2".into()
        }
        fn eval<T: Real>(&self, x: &[T; 6]) -> T {
            (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * 0.5
        }
    }

    struct MDotQ;
    impl ScalarField for MDotQ {
        fn name(&self) -> String {
            "(M,q)".into()
        }
        fn eval<T: Real>(&self, x: &[T; 6]) -> T {
            x[0] * x[3] + x[1] * x[4] + x[2] * x[5]
        }
    }

    struct NormQ;
    impl ScalarField for NormQ {
        fn name(&self) -> String {
            "|q|".into()
        }
        fn eval<T: Real>(&self, x: &[T; 6]) -> T {
            (x[3] * x[3] + x[4] * x[4] + x[5] * x[5]).sqrt()
        }
    }

    fn pt(m: [f64; 3], q: [f64; 3]) -> PhasePoint {
        PhasePoint::new(Vec3(m), Vec3(q))
    }

    #[test]
    fn coordinate_brackets() {
        let x = pt([0.3, -1.2, 0.7], [1.1, 0.4, -0.9]);
        let b = poisson_bracket(&Coordinate(0), &Coordinate(1), &x, PoissonStructure::Euclidean).unwrap();
        assert_eq!(b, 0.7);
        for s in [PoissonStructure::Euclidean, PoissonStructure::Lorentzian] {
            let b = poisson_bracket(&Coordinate(3), &Coordinate(4), &x, s).unwrap();
            assert_eq!(b, 0.0);
        }
        let b = poisson_bracket(&Coordinate(1), &Coordinate(2), &x, PoissonStructure::Lorentzian).unwrap();
        assert_eq!(b, -0.3);
    }

    #[test]
    fn gradient_examples() {
        let g = gradient(&HalfSquareM, &pt([1.0, 2.0, 3.0], [0.5, 0.5, 0.5])).unwrap();
        assert_eq!(g, [1.0, 2.0, 3.0, 0.0, 0.0, 0.0]);
        let g = gradient(&MDotQ, &pt([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])).unwrap();
        assert_eq!(g, [0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let g = gradient(&NormQ, &pt([0.0; 3], [3.0, 4.0, 0.0])).unwrap();
        assert_abs_diff_eq!(g[3], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(g[4], 0.8, epsilon = 1e-15);
        assert_eq!(g[5], 0.0);
    }

    #[test]
    fn non_finite_gradient_names_function() {
        let err = gradient(&NormQ, &pt([0.0; 3], [0.0; 3])).unwrap_err();
        assert_eq!(err, AlgebraError::NonFinite { function: "|q|".into() });
        let err = poisson_bracket(&HalfSquareM, &NormQ, &pt([1.0; 3], [0.0; 3]), PoissonStructure::Euclidean)
            .unwrap_err();
        assert!(err.to_string().contains("|q|"));
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimirs(&pt([0.0, 0.0, 5.0], [0.0, 0.0, 1.0]), PoissonStructure::Euclidean), (1.0, 5.0));
        assert_eq!(casimirs(&pt([1.0, 1.0, 1.0], [0.0, 0.0, 1.0]), PoissonStructure::Lorentzian), (1.0, 1.0));
    }

    #[test]
    fn vector_field_examples() {
        let v = hamiltonian_vector_field(&HalfSquareM, &pt([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]), PoissonStructure::Euclidean)
            .unwrap();
        assert_eq!(v, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let v = hamiltonian_vector_field(&Coordinate(5), &pt([0.0; 3], [0.0, 0.0, 1.0]), PoissonStructure::Euclidean)
            .unwrap();
        assert_eq!(v, [0.0; 6]);
    }

    #[test]
    fn vector_field_matches_cross_product_form() {
        // Euclidean flow: dM/dt = dH/dM x M + dH/dq x q, dq/dt = dH/dM x q.
        let h = SmoothTestField {
            linear: [0.1, -0.2, 0.3, 0.4, -0.5, 0.6],
            quadratic: [[0.05; 6]; 6],
            wave: [0.3, 0.1, -0.2, 0.7, 0.2, -0.4],
        };
        let x = pt([0.4, -1.3, 0.8], [1.5, -0.2, 0.9]);
        let v = hamiltonian_vector_field(&h, &x, PoissonStructure::Euclidean).unwrap();
        let g = gradient(&h, &x).unwrap();
        let dm = Vec3([g[0], g[1], g[2]]);
        let dq = Vec3([g[3], g[4], g[5]]);
        let mdot = dm.cross(&x.m) + dq.cross(&x.q);
        let qdot = dm.cross(&x.q);
        for i in 0..3 {
            assert_abs_diff_eq!(v[i], mdot[i], epsilon = 1e-13);
            assert_abs_diff_eq!(v[3 + i], qdot[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn tensor_is_antisymmetric() {
        let x = [0.3, -0.4, 1.2, 0.8, -1.7, 0.2];
        for s in [PoissonStructure::Euclidean, PoissonStructure::Lorentzian] {
            let j = s.tensor(&x);
            for a in 0..6 {
                for b in 0..6 {
                    assert_eq!(j[a][b], -j[b][a]);
                }
            }
        }
    }

    #[test]
    fn leaf_points_hit_targets() {
        let mut rng = sampling::stream_rng(7, 0);
        for (s, c1, c2) in [
            (PoissonStructure::Euclidean, 1.0, 0.0),
            (PoissonStructure::Euclidean, 2.25, -0.7),
            (PoissonStructure::Lorentzian, 1.0, 0.5),
            (PoissonStructure::Lorentzian, -1.0, 0.3),
        ] {
            for _ in 0..20 {
                let x = sampling::leaf_point(&mut rng, s, c1, c2);
                let (a, b) = casimirs(&x, s);
                assert_abs_diff_eq!(a, c1, epsilon = 1e-12);
                assert_abs_diff_eq!(b, c2, epsilon = 1e-12);
            }
        }
    }
}
