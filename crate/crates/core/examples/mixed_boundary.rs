//! Mixed data on an ideal square: `+T` on side 0, `−T` on side 2 and finite
//! data on the two sides between them.

use std::f64::consts::{FRAC_PI_2, PI};

use scherk::polygon::{mixed_admissible, IdealPolygon, SideLabel};
use scherk::solver::{solve_mixed_boundary, SolverConfig};
use scherk::{Complex64, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let labels = vec![SideLabel::Plus, SideLabel::Finite, SideLabel::Minus, SideLabel::Finite];
    let poly = IdealPolygon::with_labels(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], labels)?;
    println!("admissible: {}", mixed_admissible(metric, &poly)?.feasible);
    let family = poly.default_family(metric);
    let cfg = SolverConfig::default().with_resolution(0.15);
    // Finite data odd under z ↦ −z, matching the ±T sides.
    let finite = |i: usize, _: Complex64| if i == 1 { 0.5 } else { -0.5 };
    for t in [2.0, 4.0, 6.0] {
        let s = solve_mixed_boundary(metric, &poly, &finite, &family, t, &cfg)?;
        let o = s.center_node;
        let u = s.solution.u.values();
        let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        println!("T = {t}: {} nodes, u(centre) = {:+.5}, range [{lo:+.3}, {hi:+.3}], {} Newton steps", u.len(), u[o], s.solution.newton_steps);
    }
    Ok(())
}
