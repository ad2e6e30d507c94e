//! Feasibility decisions and boundary constructions against brute-force
//! horocycle scans and closed forms.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use scherk::diagnostics::extend_all;
use scherk::polygon::{a_minus_b, extend_and_perturb, fourth_vertex, js_feasible, l_function, HorocycleFamily, IdealPolygon, SideLabel};
use scherk::{Horocycle, IdealPoint, Metric};

mod common;
use common::check_polygon;


fn square() -> IdealPolygon {
    IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus).unwrap()
}

#[test]
fn condition2_matches_scan_on_squares_and_hexagons() {
    let m = Metric::hyperbolic();
    let mut total = [0; 3];
    let polys = common::squares_and_hexagons();
    for g in &polys {
        let c = check_polygon(m, g);
        for k in 0..3 {
            total[k] += c[k];
        }
    }
    // All three classes occur, so the agreement is not vacuous.
    assert!(total.iter().all(|&c| c > 0), "{total:?}");
}

#[test]
fn symmetric_square_feasible_and_skewed_quadrilateral_not() {
    let m = Metric::hyperbolic();
    assert!(js_feasible(m, &square()).unwrap().feasible);
    let skewed = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + 0.3], SideLabel::Plus).unwrap();
    let r = js_feasible(m, &skewed).unwrap();
    assert!(!r.feasible);
    assert_eq!(r.failed_conditions(), vec![1]);
}

#[test]
fn fourth_vertex_and_l_function() {
    let m = Metric::hyperbolic();
    let (x, y, z) = (IdealPoint::new(3.0 * FRAC_PI_2), IdealPoint::new(FRAC_PI_2), IdealPoint::new(0.0));
    assert_abs_diff_eq!(fourth_vertex(m, x, y, z).unwrap().theta(), PI, epsilon = 1e-9);
    let (hx, hy) = (Horocycle::new(x, 1.0), Horocycle::new(y, 1.0));
    let l: Vec<f64> = (1..=20).map(|k| l_function(m, x, y, IdealPoint::new(x.theta() + PI * k as f64 / 21.0), &hx, &hy).unwrap()).collect();
    assert!(l.windows(2).all(|w| w[1] < w[0]), "{l:?}");
}

#[test]
fn extension_of_the_square() {
    let m = Metric::hyperbolic();
    for t in [0.01, 0.05, 0.2] {
        let e = extend_and_perturb(m, &square(), 0, t).unwrap();
        assert!(e.residuals.iter().all(|&r| r <= 1e-10), "{:?}", e.residuals);
        let twelve = extend_all(m, &square(), t).unwrap();
        assert_eq!(twelve.len(), 12);
        assert!(twelve.is_alternating());
        assert!(js_feasible(m, &twelve).unwrap().feasible);
    }
    // The perturbed vertices approach the unperturbed ones as t → 0.
    let e = extend_and_perturb(m, &square(), 0, 1e-6).unwrap();
    assert_abs_diff_eq!(e.inserted[1].theta(), e.scherk_vertices[0].theta(), epsilon = 1e-5);
    assert_abs_diff_eq!(e.inserted[2].theta(), e.scherk_vertices[1].theta(), epsilon = 1e-5);
    assert!(extend_and_perturb(m, &square(), 0, 0.0).is_err());
    assert!(extend_and_perturb(m, &square(), 1, 0.1).is_err());
}

#[test]
fn odd_and_degenerate_polygons_are_rejected() {
    assert!(IdealPolygon::new(&[0.0, 2.0, 4.0], SideLabel::Plus).is_err());
    assert!(IdealPolygon::new(&[0.0, 1.0, 2.0, 3.0, 4.0], SideLabel::Plus).is_err());
    assert!(IdealPolygon::new(&[0.0, 1.0, 1.0, 3.0], SideLabel::Plus).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The fourth vertex closes a quadrilateral with `a = b`.
    #[test]
    fn fourth_vertex_balances(x in 0.0..TAU, g1 in 0.4..2.0f64, g2 in 0.4..2.0f64) {
        let m = Metric::hyperbolic();
        let (px, pz, py) = (IdealPoint::new(x), IdealPoint::new(x + g1), IdealPoint::new(x + g1 + g2));
        // w lies on the arc from y back to x not containing z.
        let w = fourth_vertex(m, py, px, pz);
        prop_assume!(w.is_ok());
        let w = w.unwrap();
        let q = IdealPolygon::new(&[px.theta(), pz.theta(), py.theta(), w.theta()], SideLabel::Plus);
        prop_assume!(q.is_ok());
        let q = q.unwrap();
        prop_assert!(a_minus_b(m, &q, &q.default_family(m)).unwrap().abs() < 1e-8);
    }

    /// Feasibility is invariant under rotation and under uniform horocycle shifts.
    #[test]
    fn feasibility_invariances(delta in 0.0..TAU, shift in 0.0..3.0f64, skew in -0.4..0.4f64) {
        let m = Metric::hyperbolic();
        let g = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + skew], SideLabel::Plus).unwrap();
        let r0 = js_feasible(m, &g).unwrap();
        let r1 = js_feasible(m, &g.rotated(delta)).unwrap();
        prop_assert_eq!(r0.feasible, r1.feasible);
        let f = g.default_family(m);
        let v0 = a_minus_b(m, &g, &f).unwrap();
        let v1 = a_minus_b(m, &g, &f.shifted(shift)).unwrap();
        prop_assert!((v0 - v1).abs() < 1e-9);
        prop_assert!((v0 - r1.condition1_value.unwrap()).abs() < 1e-9);
    }

    /// Condition 1 values scale like lengths: `1/k`.
    #[test]
    fn condition1_scales_with_curvature(kappa in -4.0..-0.25f64, skew in -0.4..0.4f64) {
        let g = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + skew], SideLabel::Plus).unwrap();
        let (m1, mk) = (Metric::hyperbolic(), Metric::new(kappa).unwrap());
        let v1 = a_minus_b(m1, &g, &HorocycleFamily::uniform(4, 3.0)).unwrap();
        let vk = a_minus_b(mk, &g, &HorocycleFamily::uniform(4, 3.0 / mk.k())).unwrap();
        prop_assert!((v1 / mk.k() - vk).abs() < 1e-9);
    }
}
