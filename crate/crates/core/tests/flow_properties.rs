use twocentre::dynamics::{drift_report, integrate, IntegratorConfig, Projection, Termination};
use twocentre::systems::centres;
use twocentre::{PhasePoint, SystemParams, Vec3};

fn attractive() -> SystemParams {
    SystemParams::spherical(2.0, 1.0, 1.0).unwrap()
}

#[test]
fn reference_start_conserves_h_and_f() {
    let x0 = PhasePoint::new(Vec3::new(0.0, 0.4, 0.3), Vec3::new(0.0, 0.0, 1.0));
    let tr = integrate(&x0, &attractive(), &IntegratorConfig::rk45(1e-10, 100.0)).unwrap();
    assert_eq!(tr.termination, Termination::Completed);
    let d = drift_report(&tr).unwrap();
    // Empirical bound 100·tol·t_end.
    assert!(d.h <= 1e-6, "{d:?}");
    assert!(d.f <= 1e-6, "{d:?}");
    assert!(d.c1 <= 1e-8 && d.c2 <= 1e-8, "{d:?}");
}

#[test]
fn reversing_momentum_retraces_the_orbit() {
    for nu in [0.0, 0.8] {
        let q = Vec3::new(0.2, -0.5, 0.7).normalized();
        let m = Vec3::new(0.5, 0.1, -0.3);
        let m = m + q * (nu - m.dot(&q));
        let x0 = PhasePoint::new(m, q);
        let cfg = IntegratorConfig::rk45(1e-11, 20.0);
        let p = SystemParams::spherical(2.0, 1.0, -1.0).unwrap();
        let forward = integrate(&x0, &p, &cfg).unwrap();
        let end = *forward.last().unwrap();
        let back = integrate(&PhasePoint::new(-end.m, end.q), &p, &cfg).unwrap();
        let last = back.last().unwrap();
        assert!((last.q - x0.q).norm() < 1e-6, "nu={nu}");
        assert!((last.m + x0.m).norm() < 1e-6, "nu={nu}");
    }
}

#[test]
fn rest_near_attractive_centre_falls_in() {
    let p = attractive();
    let c = centres(&p).unwrap().plus;
    let q = (c + Vec3::new(0.0, 0.05, 0.0)).normalized();
    let x0 = PhasePoint::new(Vec3::default(), q);
    let tr = integrate(&x0, &p, &IntegratorConfig::rk45(1e-10, 50.0)).unwrap();
    assert_eq!(tr.termination, Termination::SingularityEncounter);
    assert!(*tr.times.last().unwrap() < 50.0);
}

#[test]
fn leaf_projection_pins_casimirs() {
    let x0 = PhasePoint::new(Vec3::new(0.6, -0.2, 0.9), Vec3::new(0.48, 0.6, 0.64));
    let p = SystemParams::spherical(2.0, 1.0, -1.0).unwrap();
    let mut cfg = IntegratorConfig::rk4(0.01, 100.0);
    cfg.projection = Projection::Leaf;
    let d = drift_report(&integrate(&x0, &p, &cfg).unwrap()).unwrap();
    assert!(d.c1 <= 1e-13 && d.c2 <= 1e-13, "{d:?}");
}

#[test]
fn rk4_order_ratio_near_sixteen() {
    let p = SystemParams::spherical(2.0, 1.0, -1.0).unwrap();
    let x0 = twocentre::checks::flow_start(0.0, 1, 0);
    let ratio = twocentre::checks::convergence_order(&p, &x0, 0.02, 10.0).unwrap();
    assert!((12.0..=20.0).contains(&ratio), "{ratio}");
}
