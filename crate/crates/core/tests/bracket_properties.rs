use proptest::prelude::*;
use twocentre::algebra::fields::{LinearCombination, SmoothTestField};
use twocentre::algebra::{bracket_with_scale, poisson_bracket, PhasePoint, PoissonStructure, Vec3};

fn structure() -> impl Strategy<Value = PoissonStructure> {
    prop_oneof![Just(PoissonStructure::Euclidean), Just(PoissonStructure::Lorentzian)]
}

fn point() -> impl Strategy<Value = PhasePoint> {
    prop::array::uniform6(-2.0..2.0f64)
        .prop_map(|x| PhasePoint::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5])))
}

fn field() -> impl Strategy<Value = SmoothTestField> {
    (
        prop::array::uniform6(-1.0..1.0f64),
        prop::array::uniform6(prop::array::uniform6(-0.5..0.5f64)),
        prop::array::uniform6(-1.0..1.0f64),
    )
        .prop_map(|(linear, quadratic, wave)| SmoothTestField { linear, quadratic, wave })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn antisymmetric(f in field(), g in field(), x in point(), s in structure()) {
        let fg = bracket_with_scale(&f, &g, &x, s).unwrap();
        let gf = poisson_bracket(&g, &f, &x, s).unwrap();
        prop_assert!((fg.value + gf).abs() <= 1e-13 * fg.scale.max(1.0));
    }

    #[test]
    fn bilinear(f in field(), g in field(), h in field(), a in -3.0..3.0f64, b in -3.0..3.0f64,
                x in point(), s in structure()) {
        let combo = LinearCombination { a, f: f.clone(), b, g: g.clone() };
        let lhs = bracket_with_scale(&combo, &h, &x, s).unwrap();
        let rhs = a * poisson_bracket(&f, &h, &x, s).unwrap() + b * poisson_bracket(&g, &h, &x, s).unwrap();
        prop_assert!((lhs.value - rhs).abs() <= 1e-12 * lhs.scale.max(1.0));
    }

    #[test]
    fn self_bracket_vanishes(f in field(), x in point(), s in structure()) {
        let ff = bracket_with_scale(&f, &f, &x, s).unwrap();
        prop_assert!(ff.value.abs() <= 1e-13 * ff.scale.max(1.0));
    }
}
