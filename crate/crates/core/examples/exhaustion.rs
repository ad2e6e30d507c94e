//! One exhaustion step from the ideal square to a 12-gon.

use std::f64::consts::FRAC_PI_2;

use scherk::diagnostics::{geometric_budgets, run_exhaustion, ExhaustionConfig};
use scherk::polygon::{IdealPolygon, SideLabel};
use scherk::Metric;

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let square = IdealPolygon::new(&[0.0, FRAC_PI_2, 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2], SideLabel::Plus)?;
    let eps: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4.0);
    let start = std::time::Instant::now();
    let run = run_exhaustion(metric, &square, 1, &geometric_budgets(eps, 1), &ExhaustionConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&run.history).unwrap());
    if let Some(e) = run.aborted {
        println!("aborted: {e}");
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
