//! Flux of the unit field `X = ∇u/W`: conservation around closed loops,
//! unit flux of the Scherk barrier across equidistants, and `X = ν` along a
//! `+T` side of the ideal square.

use std::f64::consts::{FRAC_PI_2, TAU};

use scherk::diagnostics::{flux, FluxCurve};
use scherk::mesh::BoundaryTag;
use scherk::polygon::{IdealPolygon, SideLabel};
use scherk::solver::{barrier_calibration, solve_ideal_scherk, SolverConfig};
use scherk::{Complex64, IdealPoint, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();

    let square = IdealPolygon::new(&[0.0, FRAC_PI_2, 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2], SideLabel::Plus)?;
    let family = square.default_family(metric);
    let s = solve_ideal_scherk(metric, &square, &family, 8.0, &SolverConfig::default().with_resolution(0.1))?;
    let u = &s.solution.u;
    for r in [0.1, 0.2, 0.3] {
        let ring: Vec<Complex64> = (0..48).map(|k| Complex64::from_polar(r, 0.3 + k as f64 * TAU / 48.0)).collect();
        let f = flux(&s.mesh, u, &FluxCurve::Loop { points: ring }, metric)?;
        println!("loop r={r}: |F|/length = {:.2e}", f.value.abs() / f.length);
    }
    for i in 0..4 {
        let f = flux(&s.mesh, u, &FluxCurve::Boundary { tag: BoundaryTag::Side(i), window: None }, metric)?;
        println!("side {i} ({:?}): F/length = {:+.4}", square.label(i), f.per_length());
    }

    let gamma = metric.geodesic_between(IdealPoint::new(-FRAC_PI_2).into(), IdealPoint::new(FRAC_PI_2).into())?;
    let (s_min, radius) = (0.5, 1.5);
    let (_, fields) = barrier_calibration(&gamma, s_min, radius, 2, &SolverConfig::default().with_resolution(0.1))?;
    // The stretch 0 ≤ t ≤ 1 of the equidistant s = s_min, clear of the corners.
    let window = [gamma.fermi_point(s_min, 0.0), gamma.fermi_point(s_min, 1.0)];
    for (level, (mesh, field)) in fields.iter().enumerate() {
        let f = flux(mesh, field, &FluxCurve::Boundary { tag: BoundaryTag::Geodesic, window: Some(window) }, metric)?;
        println!("barrier level {level}: flux per unit t = {:.6}", f.value);
    }
    Ok(())
}
