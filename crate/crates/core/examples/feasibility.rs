//! Jenkins–Serrin feasibility of a few alternating polygons: the symmetric
//! square, a skewed quadrilateral and a regular hexagon. Prints the value of
//! `a − b` and every inscribed polygon that violates an inequality.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use scherk::polygon::{js_feasible, IdealPolygon, Inequality, SideLabel};
use scherk::Metric;

fn show(metric: Metric, name: &str, poly: &IdealPolygon) -> scherk::Result<()> {
    let r = js_feasible(metric, poly)?;
    println!("{name}: feasible = {}, a − b = {:+.3e}, {} inscribed polygons", r.feasible, r.condition1_value.unwrap_or(f64::NAN), r.inscribed.len());
    for v in r.violations() {
        let fmt = |q: &Inequality| match q.invariant_value() {
            Some(x) => format!("{x:+.4}"),
            None => "divergent".into(),
        };
        println!("  vertices {:?}: |P| − 2a = {}, |P| − 2b = {}", v.vertices, fmt(&v.a), fmt(&v.b));
    }
    if !r.feasible {
        println!("  failed conditions {:?}", r.failed_conditions());
    }
    Ok(())
}

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    show(metric, "square", &IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus)?)?;
    show(metric, "skewed quadrilateral", &IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + 0.3], SideLabel::Plus)?)?;
    let hex: Vec<f64> = (0..6).map(|i| i as f64 * TAU / 6.0).collect();
    show(metric, "regular hexagon", &IdealPolygon::new(&hex, SideLabel::Plus)?)?;
    // Condition 1 is scale free: the same polygon at another curvature.
    show(Metric::new(-4.0)?, "square, κ = −4", &IdealPolygon::new(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus)?)?;
    Ok(())
}
