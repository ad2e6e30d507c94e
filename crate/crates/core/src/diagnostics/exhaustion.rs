//! Exhaustion driver: grows a Scherk domain by attaching perturbed Scherk
//! quadrilaterals to every plus side, keeps the new solution close to the
//! old one on a compact set, and enlarges the compact set until the annulus
//! between the two has modulus at least one.
//!
//! Closeness in `C²` is measured by a discrete surrogate: the difference of
//! the two fields, aligned at the chart origin, is sampled on a square grid
//! inside the compact disk and its first and second central differences are
//! included in the maximum.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::modulus::{conformal_modulus, Region};
use crate::hyperbolic::{Metric, SurfacePoint};
use crate::mesh::TriMesh;
use crate::polygon::{extend_and_perturb, js_feasible, IdealPolygon, SideLabel};
use crate::solver::{solve_ideal_scherk, ScalarField, SolverConfig};
use crate::{Complex64, Error, Result};

/// Controls of [`run_exhaustion`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExhaustionConfig {
    /// Truncation height standing in for `±∞`.
    pub truncation: f64,
    /// First perturbation parameter tried; halved until the `C²` budget is met.
    pub initial_t: f64,
    pub max_halvings: usize,
    /// Chart radius of the first compact set, a disk about the origin.
    pub compact_radius: f64,
    /// Grid spacing of the `C²` surrogate.
    pub c2_spacing: f64,
    /// Largest number of mesh rings added when enlarging the compact set.
    pub max_rings: usize,
    pub solver: SolverConfig,
}

impl Default for ExhaustionConfig {
    fn default() -> Self {
        Self {
            truncation: 8.0,
            initial_t: 0.4,
            max_halvings: 6,
            compact_radius: 0.15,
            c2_spacing: 0.05,
            max_rings: 200,
            solver: SolverConfig::default().with_resolution(0.15),
        }
    }
}

/// One perturbation parameter tried in a step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTrial {
    pub t: f64,
    pub c2_difference: f64,
}

/// Record of one exhaustion step `D_n → D_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    /// `n + 1`, so the first step produces `D_1` from `D_0`.
    pub step: usize,
    pub vertices: usize,
    pub feasible: bool,
    /// Every `t` tried, in order; the last one was kept.
    pub trials: Vec<PerturbationTrial>,
    pub t: f64,
    pub c2_difference: f64,
    pub epsilon: f64,
    pub c2_met: bool,
    pub angle_gap: f64,
    /// `π/2^step`.
    pub angle_bound: f64,
    pub angle_ok: bool,
    pub modulus: f64,
    pub rings: usize,
    /// `false` when the ring cap or the mesh boundary stopped the growth
    /// before the modulus reached one.
    pub modulus_met: bool,
    /// Chart radius of the disk inscribed in the new compact set.
    pub compact_radius: f64,
}

/// Budgets `ε_n = ε₁ 2^{1−n}`, summable by construction.
pub fn geometric_budgets(first: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|n| first * 0.5f64.powi(n as i32)).collect()
}

/// Current state of the construction.
#[derive(Clone, Debug)]
pub struct ExhaustionState {
    pub polygon: IdealPolygon,
    pub mesh: TriMesh,
    pub u: ScalarField,
    /// Chart radius of the compact disk `K_n`.
    pub compact_radius: f64,
}

/// History of a run. `aborted` carries the error that stopped it early.
#[derive(Clone, Debug)]
pub struct ExhaustionRun {
    pub history: Vec<StepReport>,
    pub state: ExhaustionState,
    pub aborted: Option<String>,
}

/// Attaches perturbed quadrilaterals to every plus side of `polygon`.
pub fn extend_all(metric: Metric, polygon: &IdealPolygon, t: f64) -> Result<IdealPolygon> {
    let starts: Vec<f64> = (0..polygon.len()).filter(|&i| polygon.label(i) == SideLabel::Plus).map(|i| polygon.vertex(i).theta()).collect();
    let mut p = polygon.clone();
    for theta in starts {
        // Vertex angles are copied verbatim, so the side is found exactly.
        let side = (0..p.len()).find(|&i| p.vertex(i).theta() == theta && p.label(i) == SideLabel::Plus).ok_or_else(|| {
            Error::InvalidPolygon("a plus side was lost during extension".into())
        })?;
        p = extend_and_perturb(metric, &p, side, t)?.polygon;
    }
    Ok(p)
}

fn solve(metric: Metric, polygon: &IdealPolygon, cfg: &ExhaustionConfig) -> Result<(TriMesh, ScalarField)> {
    let s = solve_ideal_scherk(metric, polygon, &polygon.default_family(metric), cfg.truncation, &cfg.solver)?;
    Ok((s.mesh, s.solution.u))
}

/// Area-weighted average of the P1 gradients around each node.
fn recovered_gradient(mesh: &TriMesh, u: &ScalarField) -> (Vec<f64>, Vec<f64>) {
    let n = mesh.nodes().len();
    let (mut gx, mut gy, mut w) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let g = mesh.gradient(t, u.values());
        let a = mesh.area(t);
        for &v in tri {
            gx[v] += a * g.re;
            gy[v] += a * g.im;
            w[v] += a;
        }
    }
    for i in 0..n {
        gx[i] /= w[i];
        gy[i] /= w[i];
    }
    (gx, gy)
}

/// Discrete `C²` size of `v − u` on the chart disk of radius `rho`: the
/// values (aligned at the origin), the recovered gradients, and central
/// differences of the recovered gradients with step `delta`, sampled on a
/// square grid of spacing `delta`.
pub fn c2_difference(a: (&TriMesh, &ScalarField), b: (&TriMesh, &ScalarField), rho: f64, delta: f64) -> Result<f64> {
    let (ga, gb) = (recovered_gradient(a.0, a.1), recovered_gradient(b.0, b.1));
    let fa = (a.0.locator(), a.1.values().to_vec(), ga.0, ga.1);
    let fb = (b.0.locator(), b.1.values().to_vec(), gb.0, gb.1);
    // (value, ∂x, ∂y) of the difference at z.
    let sample = |z: Complex64| -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (sign, f) in [(-1.0, &fa), (1.0, &fb)] {
            for (k, vals) in [&f.1, &f.2, &f.3].into_iter().enumerate() {
                out[k] += sign * f.0.interpolate(vals, z).ok_or(Error::OutsideMesh { x: z.re, y: z.im })?;
            }
        }
        Ok(out)
    };
    let m = (rho / delta).floor() as i64;
    let mut grid = HashMap::new();
    for i in -m..=m {
        for j in -m..=m {
            let z = Complex64::new(i as f64, j as f64) * delta;
            if z.norm() <= rho {
                grid.insert((i, j), sample(z)?);
            }
        }
    }
    let d0 = grid[&(0, 0)][0];
    let mut worst = 0.0f64;
    for (&(i, j), v) in &grid {
        worst = worst.max((v[0] - d0).abs()).max(v[1].abs()).max(v[2].abs());
        if let (Some(e), Some(w), Some(n), Some(s)) = (grid.get(&(i + 1, j)), grid.get(&(i - 1, j)), grid.get(&(i, j + 1)), grid.get(&(i, j - 1))) {
            let h = 2.0 * delta;
            worst = worst
                .max(((e[1] - w[1]) / h).abs())
                .max(((n[2] - s[2]) / h).abs())
                .max(((n[1] - s[1]) / h).abs())
                .max(((e[2] - w[2]) / h).abs());
        }
    }
    Ok(worst)
}

/// Nodes within `rings` edges of the seed set.
fn grow(neighbours: &[Vec<usize>], seed: &[bool], rings: usize) -> Vec<bool> {
    let mut mask = seed.to_vec();
    let mut front: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    for _ in 0..rings {
        let mut next = Vec::new();
        for &i in &front {
            for &j in &neighbours[i] {
                if !mask[j] {
                    mask[j] = true;
                    next.push(j);
                }
            }
        }
        front = next;
    }
    mask
}

struct Growth {
    modulus: f64,
    rings: usize,
    met: bool,
    inscribed: f64,
}

/// Adds rings around the disk of radius `rho` until the annulus modulus
/// reaches one, the ring cap is hit, or the next ring would touch the boundary.
fn enlarge(mesh: &TriMesh, u: &ScalarField, metric: Metric, rho: f64, max_rings: usize) -> Result<Growth> {
    let inner = Region::ChartDisk { center: Complex64::new(0.0, 0.0), radius: rho };
    let seed = inner.node_mask(mesh);
    let neighbours = mesh.neighbours();
    let mut best: Option<Growth> = None;
    for rings in 2..=max_rings {
        let mask = grow(&neighbours, &seed, rings);
        if (0..mask.len()).any(|i| mask[i] && mesh.is_boundary(i)) {
            break;
        }
        let outer = Region::Nodes { nodes: (0..mask.len()).filter(|&i| mask[i]).collect() };
        let m = conformal_modulus(mesh, u, &inner, &outer, metric)?.modulus;
        let inscribed = (0..mask.len()).filter(|&i| !mask[i]).map(|i| mesh.node(i).norm()).fold(f64::INFINITY, f64::min);
        let met = m >= 1.0;
        best = Some(Growth { modulus: m, rings, met, inscribed });
        if met {
            break;
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("the compact set cannot be enlarged inside the mesh".into()))
}

/// Runs `steps` exhaustion steps from `initial`, with `C²` budgets `eps[n]`.
pub fn run_exhaustion(metric: Metric, initial: &IdealPolygon, steps: usize, eps: &[f64], cfg: &ExhaustionConfig) -> Result<ExhaustionRun> {
    cfg.solver.validate()?;
    if eps.len() < steps || eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidParameter("one positive budget per step is required".into()));
    }
    if !(cfg.initial_t > 0.0 && cfg.compact_radius > 0.0 && cfg.c2_spacing > 0.0) {
        return Err(Error::Config("initial_t, compact_radius and c2_spacing must be positive".into()));
    }
    let (mesh, u) = solve(metric, initial, cfg)?;
    let mut state = ExhaustionState { polygon: initial.clone(), mesh, u, compact_radius: cfg.compact_radius };
    let mut history = Vec::new();
    for step in 1..=steps {
        match advance(metric, &state, step, eps[step - 1], cfg) {
            Ok((report, next)) => {
                history.push(report);
                state = next;
            }
            Err(e) => return Ok(ExhaustionRun { history, state, aborted: Some(e.to_string()) }),
        }
    }
    Ok(ExhaustionRun { history, state, aborted: None })
}

fn advance(metric: Metric, state: &ExhaustionState, step: usize, epsilon: f64, cfg: &ExhaustionConfig) -> Result<(StepReport, ExhaustionState)> {
    let mut t = cfg.initial_t;
    let mut trials = Vec::new();
    let (polygon, mesh, u) = loop {
        let polygon = extend_all(metric, &state.polygon, t)?;
        let (mesh, u) = solve(metric, &polygon, cfg)?;
        let c2 = c2_difference((&state.mesh, &state.u), (&mesh, &u), state.compact_radius, cfg.c2_spacing)?;
        trials.push(PerturbationTrial { t, c2_difference: c2 });
        if c2 < epsilon || trials.len() > cfg.max_halvings {
            break (polygon, mesh, u);
        }
        t *= 0.5;
    };
    let feasible = js_feasible(metric, &polygon)?.feasible;
    let angle_gap = polygon.max_angle_gap(metric, SurfacePoint::origin());
    let angle_bound = PI / 2f64.powi(step as i32);
    let growth = enlarge(&mesh, &u, metric, state.compact_radius, cfg.max_rings)?;
    let c2 = trials.last().unwrap().c2_difference;
    let report = StepReport {
        step,
        vertices: polygon.len(),
        feasible,
        trials,
        t,
        c2_difference: c2,
        epsilon,
        c2_met: c2 < epsilon,
        angle_gap,
        angle_bound,
        angle_ok: angle_gap <= angle_bound + 1e-12,
        modulus: growth.modulus,
        rings: growth.rings,
        modulus_met: growth.met,
        compact_radius: growth.inscribed,
    };
    Ok((report, ExhaustionState { polygon, mesh, u, compact_radius: growth.inscribed }))
}
