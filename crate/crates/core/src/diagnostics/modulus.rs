//! Conformal modulus of an annulus on the graph of `u`, as the reciprocal
//! Dirichlet capacity in the induced metric.
//!
//! The first fundamental form of `(z, u(z))` in the chart is
//! `G = λ² I + g gᵀ`, so the Dirichlet integrand `√det G · G⁻¹` is
//! `(√(λ² + |g|²)/λ) (I − g gᵀ/(λ² + |g|²))`, constant on each triangle up
//! to the variation of `λ`. Only the ratio `|g|/λ` enters: scaling the
//! metric by a constant leaves the capacity unchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::{Metric, SurfacePoint};
use crate::mesh::TriMesh;
use crate::solver::{spd_solve, Conformal, ScalarField};
use crate::{Error, Result};
use faer::sparse::Triplet;

/// A compact region of the mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    ChartDisk { center: Complex64, radius: f64 },
    GeodesicBall { metric: Metric, center: Complex64, radius: f64 },
    /// An explicit node set.
    Nodes { nodes: Vec<usize> },
}

impl Region {
    /// Membership of the closed region, with a relative tolerance of `1e−9`
    /// for the disks.
    pub fn node_mask(&self, mesh: &TriMesh) -> Vec<bool> {
        let n = mesh.nodes().len();
        match self {
            Region::ChartDisk { center, radius } => mesh.nodes().iter().map(|z| (z - center).norm() <= radius * (1.0 + 1e-9)).collect(),
            Region::GeodesicBall { metric, center, radius } => {
                let c = SurfacePoint::from_chart(*center);
                mesh.nodes()
                    .iter()
                    .map(|&z| match (&c, SurfacePoint::from_chart(z)) {
                        (Ok(c), Ok(p)) => metric.distance(*c, p) <= radius * (1.0 + 1e-9),
                        _ => false,
                    })
                    .collect()
            }
            Region::Nodes { nodes } => {
                let mut m = vec![false; n];
                for &i in nodes {
                    if i < n {
                        m[i] = true;
                    }
                }
                m
            }
        }
    }
}

/// Modulus of `outer ∖ inner` on the graph of a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusModulus {
    pub inner: Region,
    pub outer: Region,
    pub modulus: f64,
    pub capacity: f64,
    pub free_nodes: usize,
}

/// Value of the capacity potential at a node.
#[derive(Clone, Copy, PartialEq)]
enum Role {
    Free(usize),
    Fixed(f64),
}

/// Modulus of the annulus between `inner` and `outer` for the graph of `u`.
///
/// The capacity potential is `0` on the closed inner region and `1` outside
/// the outer region and on the mesh boundary.
pub fn conformal_modulus(mesh: &TriMesh, u: &ScalarField, inner: &Region, outer: &Region, conformal: impl Into<Conformal>) -> Result<AnnulusModulus> {
    let capacity = capacity(mesh, u, inner, outer, &conformal.into(), false)?;
    let free_nodes = roles(mesh, inner, outer, false)?.iter().filter(|r| matches!(r, Role::Free(_))).count();
    Ok(AnnulusModulus { inner: inner.clone(), outer: outer.clone(), modulus: 1.0 / capacity, capacity, free_nodes })
}

fn roles(mesh: &TriMesh, inner: &Region, outer: &Region, swap: bool) -> Result<Vec<Role>> {
    let (zero, one) = if swap { (1.0, 0.0) } else { (0.0, 1.0) };
    let (a, b) = (inner.node_mask(mesh), outer.node_mask(mesh));
    if !a.iter().any(|&x| x) {
        return Err(Error::InvalidParameter("the inner region contains no node".into()));
    }
    let mut free = 0;
    let roles: Vec<Role> = (0..mesh.nodes().len())
        .map(|i| {
            if a[i] {
                Role::Fixed(zero)
            } else if !b[i] || mesh.is_boundary(i) {
                Role::Fixed(one)
            } else {
                free += 1;
                Role::Free(free - 1)
            }
        })
        .collect();
    if free == 0 {
        return Err(Error::InvalidParameter("the annulus contains no free node".into()));
    }
    if !roles.contains(&Role::Fixed(one)) {
        return Err(Error::InvalidParameter("the outer region covers the whole mesh".into()));
    }
    for tri in mesh.triangles() {
        let fixed: Vec<f64> = tri.iter().filter_map(|&v| if let Role::Fixed(x) = roles[v] { Some(x) } else { None }).collect();
        if fixed.contains(&0.0) && fixed.contains(&1.0) {
            return Err(Error::InvalidParameter("the inner region is not inside the interior of the outer region".into()));
        }
    }
    Ok(roles)
}

/// Per-triangle `area · ∇φᵢᵀ A ∇φⱼ`.
fn local_stiffness(mesh: &TriMesh, t: usize, u: &[f64], conformal: &Conformal) -> [[f64; 3]; 3] {
    let (grads, area) = mesh.basis_gradients(t);
    let tri = mesh.triangles()[t];
    let g = grads[0] * u[tri[0]] + grads[1] * u[tri[1]] + grads[2] * u[tri[2]];
    let p = tri.map(|v| mesh.node(v));
    let mids = [0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]), 0.5 * (p[2] + p[0])];
    // A = a I − b g gᵀ averaged over the edge midpoints.
    let (mut a, mut b) = (0.0, 0.0);
    for z in mids {
        let l2 = conformal.lambda(z).powi(2);
        let s = l2 + g.norm_sqr();
        a += s.sqrt() / l2.sqrt() / 3.0;
        b += 1.0 / (l2.sqrt() * s.sqrt()) / 3.0;
    }
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let gi = grads[i];
            let gj = grads[j];
            let ggi = g.re * gi.re + g.im * gi.im;
            let ggj = g.re * gj.re + g.im * gj.im;
            k[i][j] = area * (a * (gi.re * gj.re + gi.im * gj.im) - b * ggi * ggj);
        }
    }
    k
}

fn capacity(mesh: &TriMesh, u: &ScalarField, inner: &Region, outer: &Region, conformal: &Conformal, swap: bool) -> Result<f64> {
    if u.len() != mesh.nodes().len() {
        return Err(Error::InvalidParameter("field does not match the mesh".into()));
    }
    let roles = roles(mesh, inner, outer, swap)?;
    let n_free = roles.iter().filter(|r| matches!(r, Role::Free(_))).count();
    let locals: Vec<[[f64; 3]; 3]> = (0..mesh.triangles().len()).map(|t| local_stiffness(mesh, t, u.values(), conformal)).collect();
    let mut rhs = vec![0.0; n_free];
    let mut trips = Vec::new();
    for (tri, k) in mesh.triangles().iter().zip(&locals) {
        for i in 0..3 {
            let Role::Free(fi) = roles[tri[i]] else { continue };
            for j in 0..3 {
                match roles[tri[j]] {
                    Role::Free(fj) if fj <= fi => trips.push(Triplet::new(fi, fj, k[i][j])),
                    Role::Free(_) => {}
                    Role::Fixed(x) => rhs[fi] -= k[i][j] * x,
                }
            }
        }
    }
    let x = spd_solve(n_free, &trips, &rhs)?;
    let phi: Vec<f64> = roles
        .iter()
        .map(|r| match *r {
            Role::Free(f) => x[f],
            Role::Fixed(v) => v,
        })
        .collect();
    let energy: f64 = mesh
        .triangles()
        .iter()
        .zip(&locals)
        .map(|(tri, k)| {
            let p = tri.map(|v| phi[v]);
            (0..3).map(|i| (0..3).map(|j| p[i] * k[i][j] * p[j]).sum::<f64>()).sum::<f64>()
        })
        .sum();
    if !(energy > 0.0) {
        return Err(Error::Degenerate("annulus capacity is not positive".into()));
    }
    Ok(energy)
}
