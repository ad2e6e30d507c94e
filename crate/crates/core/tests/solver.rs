//! Finite-element solver: meshes, closed-form calibration, the three
//! boundary-data regimes and the comparison principle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use scherk::mesh::{annulus_domain, generate, geodesic_disk_domain, BoundaryTag, MeshOptions, Side, Sizing, TriMesh};
use scherk::polygon::{IdealPolygon, SideLabel};
use scherk::solver::{
    barrier_calibration, build_truncated_halfplane_mesh, max_principle_check, polygon_boundary_data, polygon_mesh,
    solve_dirichlet, solve_dirichlet_at_infinity, solve_ideal_scherk, solve_mixed_boundary, solve_scherk_sequence,
    Conformal, ScalarField, SolverConfig,
};
use scherk::{Complex64, Error, Geodesic, IdealPoint, Metric};

fn diameter(m: Metric) -> Geodesic {
    m.geodesic_between(IdealPoint::new(-FRAC_PI_2).into(), IdealPoint::new(FRAC_PI_2).into()).unwrap()
}

fn square() -> IdealPolygon {
    IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus).unwrap()
}

fn chart_area(mesh: &TriMesh) -> f64 {
    (0..mesh.triangles().len()).map(|t| mesh.area(t)).sum()
}

fn disk_mesh(m: Metric, radius: f64, h: f64) -> TriMesh {
    generate(&geodesic_disk_domain(m, radius).unwrap(), &MeshOptions::new(Sizing::Hyperbolic { metric: m, h })).unwrap()
}

#[test]
fn halfplane_mesh_topology_quality_and_area() {
    let m = Metric::hyperbolic();
    let mesh = build_truncated_halfplane_mesh(&diameter(m), 3.0, SolverConfig::default().resolution).unwrap();
    let mut corners = 0;
    for i in mesh.boundary_nodes() {
        let tags = mesh.tags(i);
        assert!(tags.iter().all(|t| matches!(t, BoundaryTag::Circle | BoundaryTag::Geodesic)), "{tags:?}");
        if tags.contains(&BoundaryTag::Circle) && tags.contains(&BoundaryTag::Geodesic) {
            corners += 1;
        }
    }
    assert_eq!(corners, 2);
    assert!(mesh.min_angle_deg() >= 15.0, "{}", mesh.min_angle_deg());
    assert!(mesh.nodes().iter().all(|z| z.norm() < 1.0));
    let a: Vec<f64> = (0..3).map(|l| chart_area(&mesh.refined(l).unwrap())).collect();
    assert!(((a[2] / a[1]) - 1.0).abs() <= 0.01, "{a:?}");
    assert!((a[2] - a[1]).abs() < (a[1] - a[0]).abs());
}

#[test]
fn constants_and_vertical_translation() {
    let m = Metric::hyperbolic();
    let mesh = disk_mesh(m, 2.0, 0.4);
    let cfg = SolverConfig::default();
    let u = solve_dirichlet(&mesh, &vec![3.0; mesh.nodes().len()], m, &cfg).unwrap().u;
    assert!(u.values().iter().all(|&x| (x - 3.0).abs() <= 1e-12));
    let bc: Vec<f64> = mesh.nodes().iter().map(|z| z.arg().cos()).collect();
    let u = solve_dirichlet(&mesh, &bc, m, &cfg).unwrap().u;
    let shifted: Vec<f64> = bc.iter().map(|b| b + 5.0).collect();
    let v = solve_dirichlet(&mesh, &shifted, m, &cfg).unwrap().u;
    for i in 0..u.len() {
        assert_abs_diff_eq!(v.get(i), u.get(i) + 5.0, epsilon = 1e-8);
    }
}

#[test]
fn solves_are_deterministic() {
    let m = Metric::hyperbolic();
    let mesh = disk_mesh(m, 2.0, 0.3);
    let bc: Vec<f64> = mesh.nodes().iter().map(|z| (3.0 * z.arg()).sin()).collect();
    let a = solve_dirichlet(&mesh, &bc, m, &SolverConfig::default()).unwrap();
    let b = solve_dirichlet(&mesh, &bc, m, &SolverConfig::default()).unwrap();
    assert_eq!(a.u.values(), b.u.values());
    assert_eq!(a.residual_history, b.residual_history);
}

#[test]
fn calibration_against_the_barrier() {
    let m = Metric::hyperbolic();
    let cfg = SolverConfig::default().with_resolution(0.1);
    let (table, _) = barrier_calibration(&diameter(m), 0.5, 1.5, 2, &cfg).unwrap();
    assert!(table[2].max_error <= 1e-3, "{table:?}");
    for w in table.windows(2) {
        assert!(w[0].max_error / w[1].max_error >= 3.0, "{table:?}");
    }
}

/// Flat metric, catenoid slice `a·acosh(r/a)` on a round annulus.
#[test]
fn flat_limit_reproduces_the_catenoid() {
    let a = 0.2;
    let exact = |z: &Complex64| a * (z.norm() / a).acosh();
    let mut errors = Vec::new();
    for h in [0.08, 0.04] {
        let mesh = generate(&annulus_domain(0.3, 0.9).unwrap(), &MeshOptions::new(Sizing::LogPolar { h, min: 1e-9 })).unwrap();
        let bc: Vec<f64> = mesh.nodes().iter().map(exact).collect();
        let u = solve_dirichlet(&mesh, &bc, Conformal::Flat, &SolverConfig::default()).unwrap().u;
        errors.push(mesh.nodes().iter().enumerate().map(|(i, z)| (u.get(i) - exact(z)).abs()).fold(0.0, f64::max));
    }
    assert!(errors[1] < 2e-3 && errors[1] < errors[0], "{errors:?}");
}

#[test]
fn halfplane_sequence() {
    let m = Metric::hyperbolic();
    let g = diameter(m);
    let seq = solve_scherk_sequence(&g, Side::Left, &[2.0, 3.0, 4.0], &SolverConfig::default().with_resolution(0.15)).unwrap();
    assert!(seq.nonnegative());
    assert!(seq.barrier_bounded(), "{:?}", seq.levels.iter().map(|l| l.barrier_excess).collect::<Vec<_>>());
    assert!(seq.monotone(), "{:?}", seq.monotonicity_margins);
    let d = seq.successive_differences(|z| {
        let (s, t) = g.fermi_coords(z);
        (0.5..=1.5).contains(&(Side::Left.sign() * s)) && t.abs() <= 1.0
    });
    assert!(d[1] < d[0], "{d:?}");
}

#[test]
fn ideal_square_symmetry_normalization_and_truncation_decay() {
    let m = Metric::hyperbolic();
    let sq = square();
    let family = sq.default_family(m);
    let cfg = SolverConfig::default().with_resolution(0.1);
    let runs: Vec<_> = [4.0, 6.0, 8.0].iter().map(|&t| solve_ideal_scherk(m, &sq, &family, t, &cfg).unwrap()).collect();
    let mesh = &runs[0].mesh;
    let rot = mesh.node_map(|z| z * Complex64::new(0.0, 1.0), 1e-9).unwrap();
    for r in &runs {
        let u = &r.solution.u;
        assert_eq!(u.get(r.center_node), 0.0);
        let mismatch = (0..u.len()).map(|i| (u.get(rot[i]) + u.get(i)).abs()).fold(0.0, f64::max);
        assert!(mismatch <= 1e-6, "{mismatch}");
    }
    // Swapping the labels reflects the solution.
    let swapped = IdealPolygon::new(&sq.angles(), SideLabel::Minus).unwrap();
    let w = solve_ideal_scherk(m, &swapped, &family, 6.0, &cfg).unwrap();
    for i in 0..w.solution.u.len() {
        assert_abs_diff_eq!(w.solution.u.get(i), -runs[1].solution.u.get(i), epsilon = 1e-8);
    }
    let in_k: Vec<usize> = (0..mesh.nodes().len()).filter(|&i| mesh.node(i).norm() <= 0.25).collect();
    let sup = |a: &ScalarField, b: &ScalarField| in_k.iter().map(|&i| (a.get(i) - b.get(i)).abs()).fold(0.0, f64::max);
    let (d1, d2) = (sup(&runs[1].solution.u, &runs[0].solution.u), sup(&runs[2].solution.u, &runs[1].solution.u));
    assert!(d2 < d1, "{d1} {d2}");
}

#[test]
fn infeasible_polygons_are_refused_with_a_report() {
    let m = Metric::hyperbolic();
    let skewed = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + 0.3], SideLabel::Plus).unwrap();
    match solve_ideal_scherk(m, &skewed, &skewed.default_family(m), 4.0, &SolverConfig::default()) {
        Err(Error::Refused { report: Some(r), .. }) => assert_eq!(r.failed_conditions(), vec![1]),
        other => panic!("{other:?}"),
    }
    assert!(solve_ideal_scherk(m, &square(), &square().default_family(m), 0.0, &SolverConfig::default()).is_err());
}

#[test]
fn mixed_boundary_symmetry_zero_data_and_monotonicity() {
    let m = Metric::hyperbolic();
    let cfg = SolverConfig::default().with_resolution(0.15);
    let labels = vec![SideLabel::Plus, SideLabel::Finite, SideLabel::Minus, SideLabel::Finite];
    let poly = IdealPolygon::with_labels(&square().angles(), labels).unwrap();
    let family = poly.default_family(m);
    let zero = |_: usize, _: Complex64| 0.0;
    let s = solve_mixed_boundary(m, &poly, &zero, &family, 4.0, &cfg).unwrap();
    let flip = s.mesh.node_map(|z| -z, 1e-9).unwrap();
    let u = &s.solution.u;
    let odd = (0..u.len()).map(|i| (u.get(flip[i]) + u.get(i)).abs()).fold(0.0, f64::max);
    assert!(odd <= 1e-6, "{odd}");

    let raised = |i: usize, z: Complex64| if i == 1 { 1.0 + z.re.abs() } else { 0.0 };
    let v = solve_mixed_boundary(m, &poly, &raised, &family, 4.0, &cfg).unwrap();
    assert!(max_principle_check(u, &v.solution.u, &s.mesh).unwrap().holds());

    let finite = IdealPolygon::with_labels(&square().angles(), vec![SideLabel::Finite; 4]).unwrap();
    let z = solve_mixed_boundary(m, &finite, &zero, &finite.default_family(m), 4.0, &cfg).unwrap();
    assert!(z.solution.u.values().iter().all(|x| x.abs() <= 1e-12));
}

#[test]
fn dirichlet_at_infinity() {
    let m = Metric::hyperbolic();
    let cfg = SolverConfig::default().with_resolution(0.35);
    for l in solve_dirichlet_at_infinity(m, &|_| 3.0, &[2.0, 4.0], &cfg).unwrap() {
        assert!(l.solution.u.values().iter().all(|x| (x - 3.0).abs() <= 1e-8));
    }
    let runs = solve_dirichlet_at_infinity(m, &f64::sin, &[2.0, 4.0, 6.0], &cfg).unwrap();
    for l in &runs {
        let refl = l.mesh.node_map(|z| z.conj(), 1e-9).unwrap();
        let u = &l.solution.u;
        assert!((0..u.len()).all(|i| (u.get(refl[i]) + u.get(i)).abs() <= 1e-6));
        assert!(u.values().iter().all(|x| x.abs() <= 1.0 + 1e-10));
    }
    let last = runs.last().unwrap();
    let loc = last.mesh.locator();
    for k in 0..8 {
        let theta = k as f64 * TAU / 8.0;
        let v = loc.interpolate(last.solution.u.values(), Complex64::from_polar(0.99, theta)).unwrap();
        assert!((v - theta.sin()).abs() <= 0.1, "θ = {theta}: {v}");
    }
}

#[test]
fn maximum_principle_cases() {
    let m = Metric::hyperbolic();
    let mesh = disk_mesh(m, 2.0, 0.35);
    let cfg = SolverConfig::default();
    let bc: Vec<f64> = mesh.nodes().iter().map(|z| (2.0 * z.arg()).cos()).collect();
    let u = solve_dirichlet(&mesh, &bc, m, &cfg).unwrap().u;
    assert!(max_principle_check(&u, &u, &mesh).unwrap().holds());
    assert!(max_principle_check(&u, &u.shifted(1.0), &mesh).unwrap().holds());
    assert!(matches!(max_principle_check(&u.shifted(1.0), &u, &mesh), Err(Error::Inapplicable(_))));
}

#[test]
fn square_boundary_data_interpolates_on_horocycles() {
    let m = Metric::hyperbolic();
    let sq = square();
    let f = sq.default_family(m);
    let mesh = polygon_mesh(m, &sq, &f, &SolverConfig::default()).unwrap();
    let bc = polygon_boundary_data(m, &mesh, &sq, &f, &|i, _| if i % 2 == 0 { 5.0 } else { -5.0 });
    for i in mesh.boundary_nodes() {
        assert!(bc[i].abs() <= 5.0 + 1e-12);
    }
    // Every horocycle arc sees both extremes at its ends and passes through 0 at its middle.
    let horo: Vec<usize> = mesh.boundary_nodes().into_iter().filter(|&i| mesh.tags(i).iter().all(|t| matches!(t, BoundaryTag::Horocycle(_)))).collect();
    assert!(!horo.is_empty());
    assert!(horo.iter().any(|&i| bc[i].abs() < 1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Discrete comparison with constants: the solution stays within the range of its data.
    #[test]
    fn solution_within_data_range(a in -3.0..3.0f64, b in -3.0..3.0f64, k in 1usize..4) {
        let m = Metric::hyperbolic();
        let mesh = disk_mesh(m, 1.5, 0.4);
        let bc: Vec<f64> = mesh.nodes().iter().map(|z| a * (k as f64 * z.arg()).cos() + b * z.arg().sin()).collect();
        let u = solve_dirichlet(&mesh, &bc, m, &SolverConfig::default()).unwrap().u;
        let bn = mesh.boundary_nodes();
        let lo = bn.iter().map(|&i| bc[i]).fold(f64::INFINITY, f64::min);
        let hi = bn.iter().map(|&i| bc[i]).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(u.values().iter().all(|&x| x >= lo - 1e-9 && x <= hi + 1e-9));
    }

    /// Ordered boundary data give ordered solutions.
    #[test]
    fn comparison_principle(c in 0.0..1.0f64, tilt in 0.0..1.0f64, k in 1usize..4) {
        let m = Metric::hyperbolic();
        let mesh = disk_mesh(m, 1.5, 0.4);
        let base: Vec<f64> = mesh.nodes().iter().map(|z| (k as f64 * z.arg()).sin()).collect();
        let up: Vec<f64> = mesh.nodes().iter().zip(&base).map(|(z, b)| b + c + tilt * (1.0 + z.arg().cos())).collect();
        let cfg = SolverConfig::default();
        let u = solve_dirichlet(&mesh, &base, m, &cfg).unwrap().u;
        let v = solve_dirichlet(&mesh, &up, m, &cfg).unwrap().u;
        prop_assert!(max_principle_check(&u, &v, &mesh).unwrap().holds());
    }
}
