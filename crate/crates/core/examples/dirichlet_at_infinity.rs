//! Dirichlet problem at infinity approximated on growing geodesic disks:
//! data `φ(θ)` is placed on the circle of radius `n` in direction `θ`.

use std::f64::consts::FRAC_PI_4;

use scherk::solver::{solve_dirichlet_at_infinity, SolverConfig};
use scherk::{Complex64, Metric};

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let h = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.35);
    let cfg = SolverConfig::default().with_resolution(h);
    let start = std::time::Instant::now();

    let constant = solve_dirichlet_at_infinity(metric, &|_| 3.0, &[2.0, 4.0], &cfg)?;
    let dev = constant.iter().flat_map(|l| l.solution.u.values().iter().map(|v| (v - 3.0).abs())).fold(0.0, f64::max);
    println!("phi = 3: max |u - 3| = {dev:.2e}");

    let levels = solve_dirichlet_at_infinity(metric, &f64::sin, &[2.0, 4.0, 6.0], &cfg)?;
    for l in &levels {
        let mirror = l.mesh.node_map(|z| z.conj(), 1e-9)?;
        let u = l.solution.u.values();
        let anti = (0..u.len()).map(|i| (u[mirror[i]] + u[i]).abs()).fold(0.0, f64::max);
        let bound = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("n={}  nodes={}  antisymmetry={anti:.2e}  max|u|={bound:.4}", l.n, l.mesh.nodes().len());
    }
    let finest = levels.last().unwrap();
    let loc = finest.mesh.locator();
    for k in 0..8 {
        let theta = k as f64 * FRAC_PI_4;
        let u = loc.interpolate(finest.solution.u.values(), Complex64::from_polar(0.99, theta)).unwrap_or(f64::NAN);
        println!("ray {theta:.3}: u(0.99) = {u:+.4}  phi = {:+.4}  gap = {:.3e}", theta.sin(), (u - theta.sin()).abs());
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
