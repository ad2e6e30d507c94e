//! Stability inequality between two truncations of the square problem,
//! sampled along several level curves of their difference.

use std::f64::consts::{FRAC_PI_2, PI};

use scherk::diagnostics::stability_gap;
use scherk::polygon::{IdealPolygon, SideLabel};
use scherk::solver::{solve_ideal_scherk, SolverConfig};
use scherk::Metric;

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let square = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus)?;
    let family = square.default_family(metric);
    let cfg = SolverConfig::default().with_resolution(0.12);
    // The mesh depends on the horocycles only, so both fields share it.
    let lo = solve_ideal_scherk(metric, &square, &family, 6.0, &cfg)?;
    let hi = solve_ideal_scherk(metric, &square, &family, 8.0, &cfg)?;
    for level in [-1.0, -0.25, 0.0, 0.25, 1.0] {
        match stability_gap(&hi.mesh, &hi.solution.u, &lo.solution.u, level, metric) {
            Ok(r) => println!("level {level:+.2}: {} samples, {} critical, min(lhs − rhs) = {:+.3e}, holds = {}", r.samples.len(), r.skipped, r.min_margin, r.holds),
            Err(e) => println!("level {level:+.2}: {e}"),
        }
    }
    Ok(())
}
