//! P1 finite elements for the minimal surface equation in the disk chart.
//!
//! The nonlinear solve is damped Newton with a backtracking line search on
//! the graph area, falling back to lagged-weight (Picard) steps when the
//! search fails. Picard steps never increase the area, so the iteration is
//! robust where the operator degenerates near large boundary data.

mod assembly;
mod problems;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::Metric;
use crate::mesh::TriMesh;
use crate::{Error, Result};
pub(crate) use assembly::spd_solve;
use assembly::{Assembler, Weight};

pub use problems::*;

/// Source of the conformal factor `λ` of the chart metric `λ²|dz|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conformal {
    Hyperbolic(Metric),
    /// `λ ≡ 1`: the Euclidean minimal graph operator, kept as a test hook.
    Flat,
}

impl Conformal {
    pub fn lambda(&self, z: Complex64) -> f64 {
        match self {
            Conformal::Hyperbolic(m) => m.conformal_factor(z),
            Conformal::Flat => 1.0,
        }
    }
}

impl From<Metric> for Conformal {
    fn from(m: Metric) -> Self {
        Conformal::Hyperbolic(m)
    }
}

/// Backtracking schedule for the Newton line search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Damping {
    /// Step reduction factor per backtrack.
    pub shrink: f64,
    /// Smallest step tried before falling back to a Picard step.
    pub min_step: f64,
}

impl Default for Damping {
    fn default() -> Self {
        Self { shrink: 0.5, min_step: 1.0 / 64.0 }
    }
}

/// Solver and discretization controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Stop when the Euclidean norm of the weak residual is at most this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub damping: Damping,
    /// Uniform refinements applied to the generated mesh.
    pub refinement: usize,
    /// Hyperbolic target edge length of the generated mesh.
    pub resolution: f64,
    /// Truncation height `T` standing in for `±∞` data.
    pub truncation: Option<f64>,
    /// Radius of the largest truncating circle.
    pub radius: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
            damping: Damping::default(),
            refinement: 0,
            resolution: 0.35,
            truncation: None,
            radius: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        if !(self.damping.shrink > 0.0 && self.damping.shrink < 1.0 && self.damping.min_step > 0.0 && self.damping.min_step <= 1.0) {
            return bad("damping needs 0 < shrink < 1 and 0 < min_step ≤ 1");
        }
        if !(self.resolution > 0.0) {
            return bad("resolution must be positive");
        }
        if self.truncation.is_some_and(|t| !(t > 0.0)) {
            return bad("truncation height must be positive");
        }
        if self.radius.is_some_and(|r| !(r > 0.0)) {
            return bad("radius must be positive");
        }
        Ok(())
    }

    pub fn with_truncation(mut self, t: f64) -> Self {
        self.truncation = Some(t);
        self
    }

    pub fn with_resolution(mut self, h: f64) -> Self {
        self.resolution = h;
        self
    }

    pub fn with_refinement(mut self, levels: usize) -> Self {
        self.refinement = levels;
        self
    }
}

/// Nodal values of a piecewise-linear function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("field value at node {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v + c).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

/// A converged solve.
#[derive(Clone, Debug)]
pub struct Solution {
    pub u: ScalarField,
    /// Residual norm before each iteration and at the end.
    pub residual_history: Vec<f64>,
    pub newton_steps: usize,
    pub picard_steps: usize,
}

/// Solve the minimal surface equation on `mesh` with Dirichlet data `bc`
/// on the boundary nodes (entries at interior nodes are ignored).
pub fn solve_dirichlet(mesh: &TriMesh, bc: &[f64], conformal: impl Into<Conformal>, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    let n = mesh.nodes().len();
    if bc.len() != n {
        return Err(Error::InvalidParameter(format!("{} boundary values for {n} nodes", bc.len())));
    }
    let dirichlet: Vec<bool> = (0..n).map(|i| mesh.is_boundary(i)).collect();
    if let Some(i) = (0..n).find(|&i| dirichlet[i] && !bc[i].is_finite()) {
        return Err(Error::InvalidParameter(format!("boundary value at node {i} is not finite")));
    }
    let asm = Assembler::new(mesh, &conformal.into(), &dirichlet);
    let mut u: Vec<f64> = (0..n).map(|i| if dirichlet[i] { bc[i] } else { 0.0 }).collect();
    picard(&asm, &mut u, Weight::Harmonic)?;
    newton(&asm, u, cfg)
}

fn scatter(asm: &Assembler, u: &mut [f64], free: &[f64], scale: f64) {
    for (i, ui) in u.iter_mut().enumerate() {
        if let Some(f) = asm.free_index(i) {
            *ui += scale * free[f];
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn picard(asm: &Assembler, u: &mut [f64], weight: Weight) -> Result<()> {
    let (rhs, trips) = asm.picard_system(u, weight);
    let x = spd_solve(asm.n_free(), &trips, &rhs)?;
    for (i, ui) in u.iter_mut().enumerate() {
        if let Some(f) = asm.free_index(i) {
            *ui = x[f];
        }
    }
    Ok(())
}

fn newton(asm: &Assembler, mut u: Vec<f64>, cfg: &SolverConfig) -> Result<Solution> {
    let mut history = Vec::new();
    let (mut newton_steps, mut picard_steps) = (0, 0);
    for _ in 0..cfg.max_iterations {
        let (r, trips, e0) = asm.newton_system(&u);
        let rn = norm(&r);
        history.push(rn);
        if rn <= cfg.tolerance {
            return Ok(Solution { u: ScalarField::new(u)?, residual_history: history, newton_steps, picard_steps });
        }
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        let step = spd_solve(asm.n_free(), &trips, &neg)?;
        let slope: f64 = r.iter().zip(&step).map(|(a, b)| a * b).sum();
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha >= cfg.damping.min_step {
            let mut trial = u.clone();
            scatter(asm, &mut trial, &step, alpha);
            let (rt, et) = asm.residual(&trial);
            // Armijo on the area, or a plain residual decrease once the area
            // differences drown in rounding.
            if et <= e0 + 1e-4 * alpha * slope || norm(&rt) <= (1.0 - 1e-4 * alpha) * rn {
                u = trial;
                accepted = true;
                break;
            }
            alpha *= cfg.damping.shrink;
        }
        if accepted {
            newton_steps += 1;
        } else {
            picard(asm, &mut u, Weight::Nonlinear)?;
            picard_steps += 1;
        }
    }
    let (r, _) = asm.residual(&u);
    history.push(norm(&r));
    if *history.last().unwrap() <= cfg.tolerance {
        return Ok(Solution { u: ScalarField::new(u)?, residual_history: history, newton_steps, picard_steps });
    }
    Err(Error::NotConverged { iterations: cfg.max_iterations, last: *history.last().unwrap(), history })
}

/// Weak residual at every node for a field on `mesh`; at boundary nodes it
/// is the reaction flux through the adjacent boundary.
pub fn nodal_residual(mesh: &TriMesh, u: &ScalarField, conformal: impl Into<Conformal>) -> Vec<f64> {
    let none = vec![false; mesh.nodes().len()];
    Assembler::new(mesh, &conformal.into(), &none).nodal_residual(u.values())
}

/// Area of the graph of `u` over `mesh`.
pub fn graph_area(mesh: &TriMesh, u: &ScalarField, conformal: impl Into<Conformal>) -> f64 {
    let none = vec![false; mesh.nodes().len()];
    Assembler::new(mesh, &conformal.into(), &none).energy(u.values())
}

/// Verdict of a discrete comparison `u ≤ v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Ordering {
    /// `u ≤ v + 1e−8` at every interior node; `margin` is `min(v − u)`.
    Holds { margin: f64 },
    /// Worst interior violation.
    Fails { node: usize, gap: f64 },
}

/// Slack allowed by [`max_principle_check`].
pub const ORDER_SLACK: f64 = 1e-8;

/// Interior ordering of two fields whose boundary values are ordered.
/// Errors with [`Error::Inapplicable`] when `u > v` somewhere on the boundary.
pub fn max_principle_check(u: &ScalarField, v: &ScalarField, mesh: &TriMesh) -> Result<Ordering> {
    let n = mesh.nodes().len();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidParameter("fields do not match the mesh".into()));
    }
    if let Some(i) = mesh.boundary_nodes().into_iter().find(|&i| u.get(i) > v.get(i) + ORDER_SLACK) {
        return Err(Error::Inapplicable(format!("boundary data not ordered at node {i}")));
    }
    let mut worst = (usize::MAX, f64::INFINITY);
    for i in mesh.interior_nodes() {
        let m = v.get(i) - u.get(i);
        if m < worst.1 {
            worst = (i, m);
        }
    }
    Ok(if worst.1 >= -ORDER_SLACK { Ordering::Holds { margin: worst.1 } } else { Ordering::Fails { node: worst.0, gap: -worst.1 } })
}

impl Ordering {
    pub fn holds(&self) -> bool {
        matches!(self, Ordering::Holds { .. })
    }
}
