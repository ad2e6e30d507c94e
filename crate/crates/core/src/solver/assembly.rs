//! P1 assembly of the chart form of the minimal surface operator.
//!
//! With conformal factor `λ`, the equation `div(∇u/W) = 0`, `W = √(1+|∇u|²)`
//! in the metric `λ²|dz|²` reads `div(w ∇u) = 0` in the chart, where
//! `w = 1/√(1 + |∇u|²/λ²)` and all gradients are Euclidean. The weak residual
//! is the gradient of the area `∫ λ √(λ² + |∇u|²) dx`.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;
use rayon::prelude::*;

use super::Conformal;
use crate::mesh::TriMesh;
use crate::{Error, Result};

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Per-triangle data that does not depend on the field.
#[derive(Clone)]
struct Element {
    nodes: [usize; 3],
    grads: [Complex64; 3],
    area: f64,
    /// `λ` at the three edge midpoints (quadrature points).
    lambda: [f64; 3],
}

#[derive(Clone, Copy, Default)]
struct Local {
    res: [f64; 3],
    jac: [[f64; 3]; 3],
    energy: f64,
}

/// Assembly context on a fixed mesh with a fixed set of Dirichlet nodes.
pub(crate) struct Assembler {
    elements: Vec<Element>,
    /// Free index of each node, or `None` on Dirichlet nodes.
    free: Vec<Option<usize>>,
    n_free: usize,
}

pub(crate) enum Weight {
    /// Weight of the current field (the nonlinear operator).
    Nonlinear,
    /// Unit weight (chart Laplacian).
    Harmonic,
}

impl Assembler {
    pub fn new(mesh: &TriMesh, conformal: &Conformal, dirichlet: &[bool]) -> Self {
        let elements = (0..mesh.triangles().len())
            .map(|t| {
                let nodes = mesh.triangles()[t];
                let (grads, area) = mesh.basis_gradients(t);
                let p = nodes.map(|v| mesh.node(v));
                let mids = [0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]), 0.5 * (p[2] + p[0])];
                Element { nodes, grads, area, lambda: mids.map(|z| conformal.lambda(z)) }
            })
            .collect();
        let mut n_free = 0;
        let free = dirichlet
            .iter()
            .map(|&d| {
                (!d).then(|| {
                    n_free += 1;
                    n_free - 1
                })
            })
            .collect();
        Self { elements, free, n_free }
    }

    pub fn n_free(&self) -> usize {
        self.n_free
    }

    pub fn free_index(&self, node: usize) -> Option<usize> {
        self.free[node]
    }

    fn local(&self, e: &Element, u: &[f64], weight: &Weight, jacobian: bool) -> Local {
        let g = e.grads[0] * u[e.nodes[0]] + e.grads[1] * u[e.nodes[1]] + e.grads[2] * u[e.nodes[2]];
        let g2 = g.norm_sqr();
        let (mut w, mut w3, mut energy) = (0.0, 0.0, 0.0);
        for &l in &e.lambda {
            let l2 = l * l;
            let s = (1.0 + g2 / l2).sqrt();
            match weight {
                Weight::Nonlinear => {
                    w += 1.0 / s;
                    w3 += 1.0 / (s * s * s * l2);
                }
                Weight::Harmonic => w += 1.0,
            }
            energy += l2 * s;
        }
        let q = e.area / 3.0;
        let (w, w3) = (w * q, w3 * q);
        let gd = e.grads.map(|gi| dot(g, gi));
        let mut out = Local { energy: energy * q, ..Local::default() };
        for i in 0..3 {
            out.res[i] = w * gd[i];
            if jacobian {
                for j in 0..3 {
                    out.jac[i][j] = w * dot(e.grads[i], e.grads[j]) - w3 * gd[i] * gd[j];
                }
            }
        }
        out
    }

    fn locals(&self, u: &[f64], weight: &Weight, jacobian: bool) -> Vec<Local> {
        self.elements.par_iter().map(|e| self.local(e, u, weight, jacobian)).collect()
    }

    /// Residual on the free nodes and the area.
    pub fn residual(&self, u: &[f64]) -> (Vec<f64>, f64) {
        let mut r = vec![0.0; self.n_free];
        let mut energy = 0.0;
        for (e, l) in self.elements.iter().zip(self.locals(u, &Weight::Nonlinear, false)) {
            energy += l.energy;
            for i in 0..3 {
                if let Some(fi) = self.free[e.nodes[i]] {
                    r[fi] += l.res[i];
                }
            }
        }
        (r, energy)
    }

    /// Residual at every node (reaction forces on Dirichlet nodes included).
    pub fn nodal_residual(&self, u: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.free.len()];
        for (e, l) in self.elements.iter().zip(self.locals(u, &Weight::Nonlinear, false)) {
            for i in 0..3 {
                r[e.nodes[i]] += l.res[i];
            }
        }
        r
    }

    /// Newton system: residual, Jacobian (lower triangle) and area.
    pub fn newton_system(&self, u: &[f64]) -> (Vec<f64>, Vec<Triplet<usize, usize, f64>>, f64) {
        self.system(u, Weight::Nonlinear, true)
    }

    /// Lagged-weight system `K(w(u))` (or the Laplacian) with the Dirichlet
    /// columns moved to the right-hand side: solving `K x = rhs` gives the
    /// Picard update on the free nodes.
    pub fn picard_system(&self, u: &[f64], weight: Weight) -> (Vec<f64>, Vec<Triplet<usize, usize, f64>>) {
        let mut rhs = vec![0.0; self.n_free];
        let mut trips = Vec::new();
        let weights: Vec<f64> = self.elements.par_iter().map(|e| self.weight_of(e, u, &weight)).collect();
        for (e, &w) in self.elements.iter().zip(&weights) {
            for i in 0..3 {
                let Some(fi) = self.free[e.nodes[i]] else { continue };
                for j in 0..3 {
                    let k = w * dot(e.grads[i], e.grads[j]);
                    match self.free[e.nodes[j]] {
                        Some(fj) if fj <= fi => trips.push(Triplet::new(fi, fj, k)),
                        Some(_) => {}
                        None => rhs[fi] -= k * u[e.nodes[j]],
                    }
                }
            }
        }
        (rhs, trips)
    }

    fn weight_of(&self, e: &Element, u: &[f64], weight: &Weight) -> f64 {
        let g = e.grads[0] * u[e.nodes[0]] + e.grads[1] * u[e.nodes[1]] + e.grads[2] * u[e.nodes[2]];
        let g2 = g.norm_sqr();
        let q = e.area / 3.0;
        e.lambda
            .iter()
            .map(|&l| match weight {
                Weight::Nonlinear => 1.0 / (1.0 + g2 / (l * l)).sqrt(),
                Weight::Harmonic => 1.0,
            })
            .sum::<f64>()
            * q
    }

    fn system(&self, u: &[f64], weight: Weight, jacobian: bool) -> (Vec<f64>, Vec<Triplet<usize, usize, f64>>, f64) {
        let mut r = vec![0.0; self.n_free];
        let mut trips = Vec::with_capacity(6 * self.elements.len());
        let mut energy = 0.0;
        for (e, l) in self.elements.iter().zip(self.locals(u, &weight, jacobian)) {
            energy += l.energy;
            for i in 0..3 {
                let Some(fi) = self.free[e.nodes[i]] else { continue };
                r[fi] += l.res[i];
                for j in 0..3 {
                    if let Some(fj) = self.free[e.nodes[j]] {
                        if fj <= fi {
                            trips.push(Triplet::new(fi, fj, l.jac[i][j]));
                        }
                    }
                }
            }
        }
        (r, trips, energy)
    }

    /// Area of the graph of `u`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.locals(u, &Weight::Nonlinear, false).iter().map(|l| l.energy).sum()
    }
}

/// Solve the symmetric positive definite system given by its lower triangle.
pub(crate) fn spd_solve(n: usize, trips: &[Triplet<usize, usize, f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, trips)
        .map_err(|e| Error::Linear(format!("sparse assembly: {e:?}")))?;
    let llt = a.sp_cholesky(faer::Side::Lower).map_err(|e| Error::Linear(format!("Cholesky factorization: {e:?}")))?;
    let mut x = faer::Mat::<f64>::from_fn(n, 1, |i, _| rhs[i]);
    llt.solve_in_place(x.as_mut());
    Ok((0..n).map(|i| x[(i, 0)]).collect())
}
