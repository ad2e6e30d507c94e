//! Plateau truncations of the half-plane Scherk graph: data `n` on the
//! geodesic segment, `0` on the circular arc, for increasing `n`.

use std::f64::consts::FRAC_PI_2;

use scherk::mesh::Side;
use scherk::solver::{solve_scherk_sequence, SolverConfig};
use scherk::{IdealPoint, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let gamma = metric.geodesic_between(IdealPoint::new(-FRAC_PI_2).into(), IdealPoint::new(FRAC_PI_2).into())?;
    let h = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.15);
    let start = std::time::Instant::now();
    let refine = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(0);
    let cfg = SolverConfig::default().with_resolution(h).with_refinement(refine);
    let seq = solve_scherk_sequence(&gamma, Side::Left, &[2.0, 3.0, 4.0], &cfg)?;
    println!("mesh nodes {}", seq.mesh.nodes().len());
    for l in &seq.levels {
        println!(
            "n={}  nodes={}  min={:.3e}  max(u-h)={:.3e}  newton={} picard={}",
            l.n,
            l.mesh.nodes().len(),
            l.min_value,
            l.barrier_excess,
            l.solution.newton_steps,
            l.solution.picard_steps
        );
    }
    println!("monotonicity margins {:?}", seq.monotonicity_margins);
    let k = |z| {
        let (s, t) = gamma.fermi_coords(z);
        (0.5..=1.5).contains(&s) && t.abs() <= 1.0
    };
    println!("successive sup_K differences {:?}", seq.successive_differences(k));
    println!("nonnegative {}  barrier {}  monotone {}", seq.nonnegative(), seq.barrier_bounded(), seq.monotone());
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
