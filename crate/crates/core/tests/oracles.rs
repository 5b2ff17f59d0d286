//! Frozen reference values.

use verlinde_core::fixed_points::{enumerate_t0, standard_schedule};
use verlinde_core::gamma::{gamma_from_lambda, vanishing_order_at_minus1, KPolynomial};
use verlinde_core::index::{verlinde_sl2, EngineOptions, IndexEngine, IndexTask};
use verlinde_core::lie::RootSystem;
use verlinde_core::limit::{analyse_path, solve_at_minus1, LimitKind};

fn fit(name: &str, g: u32, h: i64) -> Vec<f64> {
    let rs = RootSystem::from_name(name).unwrap();
    let r = IndexEngine::new(IndexTask::new(&rs, g, h), EngineOptions::default())
        .unwrap()
        .fit(None)
        .unwrap();
    assert!(r.integral, "{name} g={g} h={h}: {:?}", r.polynomial);
    r.polynomial
}

#[test]
fn a1_genus_two_polynomials() {
    assert_eq!(fit("A1", 2, 1), [4.0, 0.0, -4.0, 0.0]);
    assert_eq!(fit("A1", 2, 2), [10.0, 0.0, -10.0, 0.0]);
    assert_eq!(fit("A1", 2, 3), [20.0, 4.0, -16.0, 0.0]);
    assert_eq!(fit("A1", 2, 4), [35.0, 15.0, -19.0, 1.0]);
}

#[test]
fn a1_genus_three_polynomials() {
    assert_eq!(fit("A1", 3, 1), [8.0, 0.0, -16.0, 0.0, 8.0, 0.0, 0.0]);
    assert_eq!(fit("A1", 3, 3), [120.0, 64.0, -168.0, -48.0, 64.0, 0.0, 0.0]);
    assert_eq!(fit("A1", 3, 4), [329.0, 378.0, -145.0, -116.0, 71.0, -6.0, 1.0]);
}

#[test]
fn a2_genus_two_level_four() {
    assert_eq!(fit("A2", 2, 4), [504.0, 198.0, -720.0, -144.0, 180.0, -54.0, 36.0, 0.0, 0.0]);
}

#[test]
fn frozen_polynomials_vanish_to_required_order() {
    let order = |c: &[i64]| {
        let p = KPolynomial::new(c.iter().map(|&x| num_rational::Rational64::from_integer(x)).collect(), c.len() - 1);
        vanishing_order_at_minus1(&p, 0.0).unwrap()
    };
    assert_eq!(order(&[20, 4, -16]), 1);
    assert_eq!(order(&[120, 64, -168, -48, 64]), 2);
    assert_eq!(order(&[504, 198, -720, -144, 180, -54, 36]), 2);
    // top γ-coefficient of 20 + 4t - 16t² in rank 3 vanishes
    let p = KPolynomial::new(vec![20.0, 4.0, -16.0], 3);
    assert_eq!(gamma_from_lambda(&p, 3).unwrap().coeff(3), 0.0);
}

#[test]
fn verlinde_closed_form() {
    assert!((verlinde_sl2(2, 1) - 4.0).abs() < 1e-12);
    assert!((verlinde_sl2(2, 2) - 10.0).abs() < 1e-12);
    assert!((verlinde_sl2(2, 3) - 20.0).abs() < 1e-12);
    assert!((verlinde_sl2(3, 4) - 329.0).abs() < 1e-10);
}

#[test]
fn point_counts() {
    for (name, h, count, regular_orbits) in [("A1", 1, 6, 2), ("A1", 3, 10, 4), ("A2", 2, 75, 6), ("B2", 1, 64, 3), ("G2", 1, 75, 2)] {
        let rs = RootSystem::from_name(name).unwrap();
        let set = enumerate_t0(&rs, h).unwrap();
        assert_eq!(set.count, count, "{name} h={h}");
        assert_eq!(set.regular_orbit_count(), regular_orbits, "{name} h={h}");
    }
    let a1 = RootSystem::from_name("A1").unwrap();
    assert_eq!(solve_at_minus1(&a1, 3).unwrap().len(), 6);
}

#[test]
fn a1_theta_limits() {
    let rs = RootSystem::from_name("A1").unwrap();
    let e = IndexEngine::new(IndexTask::new(&rs, 2, 3), EngineOptions::default()).unwrap();
    let schedule = standard_schedule(&e.options.track, None, &[]).unwrap();
    let mut seen = Vec::new();
    for p in e.track(&schedule, e.scope()).unwrap() {
        let (lim, entry) = analyse_path(&e, &p).unwrap();
        let expected = match lim.kind {
            LimitKind::Colliding => 1.0 / 12.0,
            LimitKind::Regular => 1.0 / 6.0,
        };
        assert!((entry.theta_limit_re - expected).abs() < 1e-9, "{entry:?}");
        seen.push(lim.kind);
    }
    assert_eq!(seen.iter().filter(|k| **k == LimitKind::Colliding).count(), 2);
}
