use proptest::prelude::*;
use twocentre::elliptic::{from_elliptic, r_in_elliptic, to_elliptic, EllipticPoint, Octant};
use twocentre::{SystemParams, Vec3};

fn unit(v: [f64; 3]) -> Option<Vec3> {
    let v = Vec3::new(v[0], v[1], v[2]);
    (v.norm() > 1e-3).then(|| v.normalized())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sphere_to_chart_and_back(v in prop::array::uniform3(-1.0..1.0f64), a in 1.1..6.0f64, b in 0.1..1.0f64) {
        let Some(q) = unit(v) else { return Ok(()) };
        let p = SystemParams::spherical(a, b, 1.0).unwrap();
        let u = to_elliptic(&q, &p).unwrap();
        prop_assert!(0.0 <= u.u1 && u.u1 <= b && b <= u.u2 && u.u2 <= a);
        let back = from_elliptic(&u, Octant::of(&q), &p).unwrap();
        prop_assert!((back - q).norm() <= 1e-10);
        let r = (u.u1.sqrt() - u.u2.sqrt()).powi(2);
        prop_assert!((r_in_elliptic(&u) - r).abs() <= 1e-12);
    }

    #[test]
    fn chart_to_sphere_and_back(s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let p = SystemParams::spherical(3.0, 1.0, 0.5).unwrap();
        let u = EllipticPoint::new(s * p.b, p.b + t * (p.a - p.b));
        for octant in [Octant::POSITIVE, Octant::of(&Vec3::new(-1.0, 1.0, -1.0))] {
            let q = from_elliptic(&u, octant, &p).unwrap();
            prop_assert!((q.norm() - 1.0).abs() <= 1e-12);
            let again = to_elliptic(&q, &p).unwrap();
            prop_assert!((again.u1 - u.u1).abs() <= 1e-10 * p.a);
            prop_assert!((again.u2 - u.u2).abs() <= 1e-10 * p.a);
        }
    }
}
