//! Discrete maximum principle: solves on one mesh with boundary data shifted
//! and tilted upward, then checks that the interior ordering survives.

use scherk::solver::{max_principle_check, solve_dirichlet, SolverConfig};
use scherk::mesh::{generate, geodesic_disk_domain, MeshOptions, Sizing};
use scherk::Metric;

fn main() -> scherk::Result<()> {
    let metric = Metric::hyperbolic();
    let mesh = generate(&geodesic_disk_domain(metric, 3.0)?, &MeshOptions::new(Sizing::Hyperbolic { h: 0.3, metric }))?;
    let cfg = SolverConfig::default();
    let base: Vec<f64> = mesh.nodes().iter().map(|z| (2.0 * z.arg()).sin()).collect();
    let u = solve_dirichlet(&mesh, &base, metric, &cfg)?.u;
    for (c, tilt) in [(0.0, 0.0), (0.01, 0.0), (0.1, 0.05), (1.0, 0.5)] {
        let bc: Vec<f64> = mesh.nodes().iter().zip(&base).map(|(z, b)| b + c + tilt * (1.0 + z.arg().cos())).collect();
        let v = solve_dirichlet(&mesh, &bc, metric, &cfg)?.u;
        println!("shift {c:<5} tilt {tilt:<5} -> {:?}", max_principle_check(&u, &v, &mesh)?);
    }
    Ok(())
}
