//! Boundary constructions: the fourth vertex of a Scherk quadrilateral, the
//! monotone function `L` behind it, and the extension/perturbation step
//! growing the ideal square into a 12-gon.

use std::f64::consts::{FRAC_PI_2, PI};

use scherk::diagnostics::extend_all;
use scherk::polygon::{extend_and_perturb, fourth_vertex, js_feasible, l_function, IdealPolygon, SideLabel};
use scherk::{Horocycle, IdealPoint, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let (x, y, z) = (IdealPoint::new(3.0 * FRAC_PI_2), IdealPoint::new(FRAC_PI_2), IdealPoint::new(0.0));
    let w = fourth_vertex(metric, x, y, z)?;
    println!("fourth vertex of (3π/2, π/2, 0): θ = {:.12} (π = {PI:.12})", w.theta());

    let (hx, hy) = (Horocycle::new(x, 1.0), Horocycle::new(y, 1.0));
    println!("L along the arc from x to y:");
    for k in 1..=8 {
        let p = IdealPoint::new(x.theta() + PI * k as f64 / 9.0);
        println!("  θ = {:.4}  L = {:+.6}", p.theta(), l_function(metric, x, y, p, &hx, &hy)?);
    }

    let square = IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus)?;
    let t = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.05);
    let ext = extend_and_perturb(metric, &square, 0, t)?;
    println!("extension of side 0 at t = {t}: {} vertices, residuals {:.2e} {:.2e}", ext.polygon.len(), ext.residuals[0], ext.residuals[1]);
    for (name, v) in ["b1", "b2", "b3", "b4"].iter().zip(ext.inserted) {
        println!("  {name}: θ = {:.6}", v.theta());
    }
    println!("  feasible: {}", js_feasible(metric, &ext.polygon)?.feasible);
    let twelve = extend_all(metric, &square, t)?;
    println!("both plus sides extended: {} vertices, feasible: {}", twelve.len(), js_feasible(metric, &twelve)?.feasible);
    Ok(())
}
