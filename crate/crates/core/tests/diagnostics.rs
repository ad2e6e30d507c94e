//! Flux identities, the stability inequality, conformal moduli and the
//! exhaustion step.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use scherk::diagnostics::{
    c2_difference, conformal_modulus, extend_all, flux, geometric_budgets, run_exhaustion, stability_gap, ExhaustionConfig,
    FluxCurve, Region,
};
use scherk::mesh::{annulus_domain, generate, BoundaryTag, MeshOptions, Sizing, TriMesh};
use scherk::polygon::{js_feasible, IdealPolygon, SideLabel};
use scherk::solver::{barrier_calibration, solve_ideal_scherk, Conformal, PolygonSolve, ScalarField, SolverConfig};
use scherk::{Complex64, Error, IdealPoint, Metric, SurfacePoint};
use std::sync::OnceLock;

fn square() -> IdealPolygon {
    IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus).unwrap()
}

/// Square solves at T = 6 and T = 8 on one mesh, shared across tests.
fn square_pair() -> &'static (PolygonSolve, PolygonSolve) {
    static PAIR: OnceLock<(PolygonSolve, PolygonSolve)> = OnceLock::new();
    PAIR.get_or_init(|| {
        let m = Metric::hyperbolic();
        let sq = square();
        let f = sq.default_family(m);
        let cfg = SolverConfig::default().with_resolution(0.1);
        (solve_ideal_scherk(m, &sq, &f, 6.0, &cfg).unwrap(), solve_ideal_scherk(m, &sq, &f, 8.0, &cfg).unwrap())
    })
}

fn ring(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| center + Complex64::from_polar(r, k as f64 * TAU / n as f64)).collect()
}

#[test]
fn closed_loops_carry_no_flux() {
    let s = &square_pair().1;
    for (c, r) in [(Complex64::new(0.0, 0.0), 0.3), (Complex64::new(0.1, -0.05), 0.15), (Complex64::new(-0.2, 0.1), 0.1)] {
        let f = flux(&s.mesh, &s.solution.u, &FluxCurve::Loop { points: ring(c, r, 48) }, Metric::hyperbolic()).unwrap();
        assert!(f.value.abs() <= 1e-6 * f.length, "{f:?}");
    }
}

#[test]
fn infinite_sides_carry_unit_flux_density() {
    let s = &square_pair().1;
    let sq = square();
    for i in 0..4 {
        let f = flux(&s.mesh, &s.solution.u, &FluxCurve::Boundary { tag: BoundaryTag::Side(i), window: None }, Metric::hyperbolic()).unwrap();
        let sign = if sq.label(i) == SideLabel::Plus { 1.0 } else { -1.0 };
        assert!(sign * f.value >= 0.95 * f.length, "side {i}: {f:?}");
        assert!(f.value.abs() <= f.length + 1e-8);
    }
}

#[test]
fn barrier_flux_is_one_per_unit_length_for_several_offsets() {
    let m = Metric::hyperbolic();
    let g = m.geodesic_between(IdealPoint::new(-FRAC_PI_2).into(), IdealPoint::new(FRAC_PI_2).into()).unwrap();
    for s_min in [0.5, 0.8] {
        let (_, fields) = barrier_calibration(&g, s_min, s_min + 1.0, 2, &SolverConfig::default().with_resolution(0.1)).unwrap();
        let (mesh, u) = fields.last().unwrap();
        let window = [g.fermi_point(s_min, 0.0), g.fermi_point(s_min, 0.5)];
        let f = flux(mesh, u, &FluxCurve::Boundary { tag: BoundaryTag::Geodesic, window: Some(window) }, m).unwrap();
        // Per unit t: the window has t-length 1/2.
        assert!((2.0 * f.value.abs() - 1.0).abs() <= 1e-3, "s_min = {s_min}: {f:?}");
    }
}

#[test]
fn stability_inequality_between_truncations() {
    let (lo, hi) = square_pair();
    let m = Metric::hyperbolic();
    let mut samples = 0;
    for level in [-0.5, 0.0, 0.5] {
        let r = stability_gap(&hi.mesh, &hi.solution.u, &lo.solution.u, level, m).unwrap();
        assert!(r.holds, "level {level}: margin {}", r.min_margin);
        samples += r.samples.len();
    }
    assert!(samples >= 200, "{samples}");
    let u = &hi.solution.u;
    assert!(matches!(stability_gap(&hi.mesh, u, u, 0.0, m), Err(Error::Inapplicable(_))));
    assert!(matches!(stability_gap(&hi.mesh, u, &u.shifted(1.0), -1.0, m), Err(Error::Inapplicable(_))));
}

fn annulus(r_in: f64, r_out: f64, h: f64) -> TriMesh {
    generate(&annulus_domain(r_in, r_out).unwrap(), &MeshOptions::new(Sizing::LogPolar { h, min: 1e-9 })).unwrap()
}

fn disk(r: f64) -> Region {
    Region::ChartDisk { center: Complex64::new(0.0, 0.0), radius: r }
}

#[test]
fn flat_annuli_match_the_closed_form() {
    for (r_in, r_out) in [(0.3 / std::f64::consts::E, 0.3), (0.9 * (-TAU).exp(), 0.9)] {
        let mesh = annulus(r_in, r_out, 0.05);
        let u = ScalarField::constant(mesh.nodes().len(), 0.0);
        let got = conformal_modulus(&mesh, &u, &disk(r_in), &disk(r_out), Conformal::Flat).unwrap().modulus;
        assert!((got - (r_out / r_in).ln() / TAU).abs() <= 1e-3, "{got}");
    }
}

#[test]
fn catenoid_annulus_modulus() {
    let (a, r_in, r_out) = (0.2, 0.3, 0.9);
    let mesh = annulus(r_in, r_out, 0.04);
    let u = ScalarField::new(mesh.nodes().iter().map(|z| a * (z.norm() / a).acosh()).collect()).unwrap();
    let got = conformal_modulus(&mesh, &u, &disk(r_in), &disk(r_out), Conformal::Flat).unwrap().modulus;
    let exact = ((r_out / a).acosh() - (r_in / a).acosh()) / TAU;
    assert!((got - exact).abs() <= 2e-3 * exact, "{got} vs {exact}");
}

#[test]
fn modulus_on_a_solved_graph() {
    let s = &square_pair().1;
    let m = Metric::hyperbolic();
    let u = &s.solution.u;
    let base = conformal_modulus(&s.mesh, u, &disk(0.1), &disk(0.25), m).unwrap().modulus;
    // Adding a constant changes nothing.
    let shifted = conformal_modulus(&s.mesh, &u.shifted(3.0), &disk(0.1), &disk(0.25), m).unwrap().modulus;
    assert!((base - shifted).abs() <= 1e-12 * base);
    // Scaling metric and heights together is a conformal change.
    let c: f64 = 2.5;
    let scaled = conformal_modulus(&s.mesh, &u.map(|x| c * x).unwrap(), &disk(0.1), &disk(0.25), Metric::new(-1.0 / (c * c)).unwrap()).unwrap().modulus;
    assert!((base - scaled).abs() <= 1e-9 * base, "{base} vs {scaled}");
    // Strictly monotone in the outer region.
    let moduli: Vec<f64> = [0.2, 0.25, 0.3, 0.35]
        .iter()
        .map(|&r| conformal_modulus(&s.mesh, u, &disk(0.1), &disk(r), m).unwrap().modulus)
        .collect();
    assert!(moduli.windows(2).all(|w| w[1] > w[0]), "{moduli:?}");
    // Geodesic balls are accepted as regions too.
    let o = Complex64::new(0.0, 0.0);
    let ball = conformal_modulus(&s.mesh, u, &Region::GeodesicBall { metric: m, center: o, radius: 0.2 }, &disk(0.3), m).unwrap();
    assert!(ball.modulus > 0.0 && ball.free_nodes > 0);
}

#[test]
fn exhaustion_step_from_the_square() {
    let m = Metric::hyperbolic();
    let eps = geometric_budgets(4.0, 3);
    assert!(eps.windows(2).all(|w| (w[1] - 0.5 * w[0]).abs() < 1e-15));
    let run = run_exhaustion(m, &square(), 1, &eps[..1], &ExhaustionConfig::default()).unwrap();
    assert!(run.aborted.is_none());
    let step = &run.history[0];
    assert_eq!(step.vertices, 12);
    assert!(step.feasible);
    assert!(step.angle_gap <= FRAC_PI_2 + 1e-12);
    assert!(step.c2_met && step.c2_difference < step.epsilon);
    // Halving t shrinks the difference.
    assert!(step.trials.len() >= 3);
    assert!(step.trials.windows(2).all(|w| w[1].c2_difference < w[0].c2_difference), "{:?}", step.trials);
    assert!(step.modulus > 0.0);
    assert_eq!(run.state.polygon.len(), 12);
    let again = extend_all(m, &square(), step.t).unwrap();
    assert!(js_feasible(m, &again).unwrap().feasible);
    let p0 = SurfacePoint::origin();
    assert!((again.max_angle_gap(m, p0) - step.angle_gap).abs() < 1e-12);
}

#[test]
fn c2_difference_vanishes_on_identical_fields() {
    let s = &square_pair().1;
    let d = c2_difference((&s.mesh, &s.solution.u), (&s.mesh, &s.solution.u), 0.15, 0.05).unwrap();
    assert!(d.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `|X| ≤ 1` bounds the flux through any chord inside the domain.
    #[test]
    fn flux_is_bounded_by_length(r1 in 0.0..0.35f64, a1 in 0.0..TAU, r2 in 0.0..0.35f64, a2 in 0.0..TAU) {
        let s = &square_pair().1;
        let pts = vec![Complex64::from_polar(r1, a1), Complex64::new(0.0, 0.0), Complex64::from_polar(r2, a2)];
        let f = flux(&s.mesh, &s.solution.u, &FluxCurve::Polyline { points: pts.clone() }, Metric::hyperbolic()).unwrap();
        prop_assert!(f.value.abs() <= f.length + 1e-8);
        // Reversing the curve flips the sign.
        let back: Vec<Complex64> = pts.into_iter().rev().collect();
        let g = flux(&s.mesh, &s.solution.u, &FluxCurve::Polyline { points: back }, Metric::hyperbolic()).unwrap();
        prop_assert!((f.value + g.value).abs() <= 1e-12 * (1.0 + f.length));
    }
}
