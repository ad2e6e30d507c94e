//! Impose the closed-form Scherk barrier on the boundary of an offset
//! half-plane region and watch the nodal error shrink under refinement.

use std::f64::consts::FRAC_PI_2;

use scherk::solver::{barrier_calibration, SolverConfig};
use scherk::{IdealPoint, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let gamma = metric.geodesic_between(IdealPoint::new(-FRAC_PI_2).into(), IdealPoint::new(FRAC_PI_2).into())?;
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (s_min, radius, h) = (args.first().copied().unwrap_or(0.5), args.get(1).copied().unwrap_or(1.5), args.get(2).copied().unwrap_or(0.1));
    let cfg = SolverConfig::default().with_resolution(h);
    let start = std::time::Instant::now();
    let levels = args.get(3).map_or(2, |&l| l as usize);
    let (table, _) = barrier_calibration(&gamma, s_min, radius, levels, &cfg)?;
    println!("level  nodes  max_error  ratio");
    for (i, row) in table.iter().enumerate() {
        let ratio = if i > 0 { table[i - 1].max_error / row.max_error } else { f64::NAN };
        println!("{:>5} {:>6}  {:.3e}  {:.2}", row.level, row.nodes, row.max_error, ratio);
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
