//! Conformal modulus of annuli: flat round annuli against `log(R/r)/2π`, and
//! the same annulus on a catenoid, whose modulus is known in closed form.

use std::f64::consts::TAU;

use scherk::diagnostics::{conformal_modulus, Region};
use scherk::mesh::{annulus_domain, generate, MeshOptions, Sizing};
use scherk::solver::{Conformal, ScalarField};
use scherk::Complex64;

fn main() -> scherk::Result<()> {
    let o = Complex64::new(0.0, 0.0);
    let h = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.05);
    let annulus = |r_in: f64, r_out: f64| -> scherk::Result<_> {
        let mesh = generate(&annulus_domain(r_in, r_out)?, &MeshOptions::new(Sizing::LogPolar { h, min: 1e-9 }))?;
        let regions = (Region::ChartDisk { center: o, radius: r_in }, Region::ChartDisk { center: o, radius: r_out });
        Ok((mesh, regions))
    };
    // Ratios e and e^2π scaled into the unit disk.
    for (r_in, r_out) in [(0.3 / std::f64::consts::E, 0.3), (0.9 * (-TAU).exp(), 0.9)] {
        let (mesh, (inner, outer)) = annulus(r_in, r_out)?;
        let flat = ScalarField::constant(mesh.nodes().len(), 0.0);
        let m = conformal_modulus(&mesh, &flat, &inner, &outer, Conformal::Flat)?;
        let exact = (r_out / r_in).ln() / TAU;
        println!("flat R/r = {:9.3}: modulus {:.6}, closed form {exact:.6}, {} nodes", r_out / r_in, m.modulus, mesh.nodes().len());
    }
    // Catenoid u = a·acosh(r/a): isothermal coordinates give acosh(r/a) per unit angle.
    let (a, r_in, r_out) = (0.2, 0.3, 0.9);
    let (mesh, (inner, outer)) = annulus(r_in, r_out)?;
    let u = ScalarField::new(mesh.nodes().iter().map(|z| a * (z.norm() / a).acosh()).collect())?;
    let m = conformal_modulus(&mesh, &u, &inner, &outer, Conformal::Flat)?;
    let exact = ((r_out / a).acosh() - (r_in / a).acosh()) / TAU;
    println!("catenoid a = {a}: modulus {:.6}, closed form {exact:.6} (flat value {:.6})", m.modulus, (r_out / r_in).ln() / TAU);
    Ok(())
}
