//! The boundary-value problems: half-plane Scherk truncations, ideal
//! polygons with `±T` data, mixed data, and Dirichlet data at infinity.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{solve_dirichlet, ScalarField, Solution, SolverConfig};
use crate::barrier::barrier_height;
use crate::hyperbolic::{ccw_gap, Geodesic, Metric};
use crate::mesh::{
    generate, geodesic_disk_domain, halfplane_domain, offset_domain, truncated_polygon_domain, BoundaryTag, MeshOptions, Side,
    Sizing, Symmetry, TriMesh,
};
use crate::polygon::{js_feasible_with_family, mixed_admissible, FeasibilityReport, HorocycleFamily, IdealPolygon, SideLabel};
use crate::{Error, Result};

fn hyperbolic_options(metric: Metric, h: f64) -> MeshOptions {
    MeshOptions::new(Sizing::Hyperbolic { metric, h })
}

/// Mesh of `C(n) ∩ Ω` for `Ω` the half-plane left of `gamma`, with boundary
/// tags `Circle` on `A(n)` and `Geodesic` on `B(n)`. `resolution` is the
/// hyperbolic target edge length.
pub fn build_truncated_halfplane_mesh(gamma: &Geodesic, n: f64, resolution: f64) -> Result<TriMesh> {
    halfplane_mesh(gamma, Side::Left, &[n], resolution)
}

/// Nested half-plane mesh: the smaller circles are resolved by mesh edges.
pub fn halfplane_mesh(gamma: &Geodesic, side: Side, radii: &[f64], resolution: f64) -> Result<TriMesh> {
    let domain = halfplane_domain(gamma, side, radii)?;
    let mesh = generate(&domain, &hyperbolic_options(gamma.metric(), resolution)).map_err(|e| match e {
        Error::Mesh(m) => Error::Mesh(format!("resolution {resolution} cannot resolve the region: {m}")),
        e => e,
    })?;
    mesh.check_boundary_tags()?;
    Ok(mesh)
}

/// One truncation level of the half-plane sequence.
#[derive(Clone, Debug)]
pub struct ScherkLevel {
    pub n: f64,
    /// Mesh of `C(n) ∩ Ω`, a submesh of the sequence mesh.
    pub mesh: TriMesh,
    /// Index in the sequence mesh of every node of `mesh`.
    pub nodes: Vec<usize>,
    pub solution: Solution,
    pub min_value: f64,
    /// Largest `u_n − h̃(s)` over interior nodes.
    pub barrier_excess: f64,
}

/// Solutions `u_n` with data `0` on `A(n)` and `n` on `B(n)` and their checks.
#[derive(Clone, Debug)]
pub struct ScherkSequence {
    pub mesh: TriMesh,
    pub levels: Vec<ScherkLevel>,
    /// `min (u_{n+1} − u_n)` over the common nodes of consecutive levels.
    pub monotonicity_margins: Vec<f64>,
}

/// Nodes on `B(n)` get `n` (corners included); everything else on the boundary gets `0`.
fn scherk_data(mesh: &TriMesh, n: f64) -> Vec<f64> {
    (0..mesh.nodes().len())
        .map(|i| if mesh.is_boundary(i) && mesh.tags(i).contains(&BoundaryTag::Geodesic) { n } else { 0.0 })
        .collect()
}

impl ScherkSequence {
    /// `0 ≤ u_n` (up to `1e−10`) on every level.
    pub fn nonnegative(&self) -> bool {
        self.levels.iter().all(|l| l.min_value >= -1e-10)
    }

    /// `u_n ≤ h̃ + 1e−6` on every level.
    pub fn barrier_bounded(&self) -> bool {
        self.levels.iter().all(|l| l.barrier_excess <= 1e-6)
    }

    /// `u_{n+1} ≥ u_n − 1e−8` on common nodes.
    pub fn monotone(&self) -> bool {
        self.monotonicity_margins.iter().all(|&m| m >= -1e-8)
    }

    /// `sup_K |u_{n+1} − u_n|` over common nodes in `K`, per consecutive pair.
    pub fn successive_differences(&self, in_k: impl Fn(Complex64) -> bool) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| {
                let next: HashMap<usize, usize> = w[1].nodes.iter().enumerate().map(|(l, &g)| (g, l)).collect();
                w[0].nodes
                    .iter()
                    .enumerate()
                    .filter(|&(_, &g)| in_k(self.mesh.node(g)))
                    .filter_map(|(l, g)| next.get(g).map(|&l1| (w[1].solution.u.get(l1) - w[0].solution.u.get(l)).abs()))
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Solve the truncated half-plane problems on one nested mesh.
pub fn solve_scherk_sequence(gamma: &Geodesic, side: Side, radii: &[f64], cfg: &SolverConfig) -> Result<ScherkSequence> {
    cfg.validate()?;
    let metric = gamma.metric();
    let mesh = halfplane_mesh(gamma, side, radii, cfg.resolution)?.refined(cfg.refinement)?;
    let center = gamma.point_at(0.0)?;
    let mut levels = Vec::with_capacity(radii.len());
    for &n in radii {
        let keep: Vec<bool> = (0..mesh.triangles().len())
            .map(|t| {
                let c = crate::SurfacePoint::from_chart(mesh.centroid(t)).map(|p| metric.distance(center, p));
                c.is_ok_and(|d| d < n)
            })
            .collect();
        let (sub, nodes) = mesh.submesh(&keep)?;
        sub.check_boundary_tags()?;
        let solution = solve_dirichlet(&sub, &scherk_data(&sub, n), metric, cfg)?;
        let u = solution.u.values();
        let min_value = u.iter().copied().fold(f64::INFINITY, f64::min);
        let barrier_excess = sub
            .interior_nodes()
            .into_iter()
            .map(|i| {
                let s = side.sign() * gamma.fermi_coords(sub.node(i)).0;
                u[i] - barrier_height(s, metric.kappa()).unwrap_or(f64::INFINITY)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        levels.push(ScherkLevel { n, mesh: sub, nodes, solution, min_value, barrier_excess });
    }
    let monotonicity_margins = levels
        .windows(2)
        .map(|w| {
            let next: HashMap<usize, usize> = w[1].nodes.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            w[0].nodes
                .iter()
                .enumerate()
                .filter_map(|(l, g)| next.get(g).map(|&l1| w[1].solution.u.get(l1) - w[0].solution.u.get(l)))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(ScherkSequence { mesh, levels, monotonicity_margins })
}

/// Max nodal error of the discrete solution with exact barrier data on the
/// offset region `{s ≥ s_min} ∩ B(γ(0), radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationLevel {
    pub level: usize,
    pub nodes: usize,
    pub max_error: f64,
}

/// A mesh with a field on it.
pub type LevelField = (TriMesh, ScalarField);

/// Barrier calibration: impose `h̃(s)` on the boundary of the offset region
/// and compare the solution with `h̃` at the nodes, for `levels + 1`
/// uniform refinement levels of one base mesh.
pub fn barrier_calibration(
    gamma: &Geodesic,
    s_min: f64,
    radius: f64,
    levels: usize,
    cfg: &SolverConfig,
) -> Result<(Vec<CalibrationLevel>, Vec<LevelField>)> {
    cfg.validate()?;
    let metric = gamma.metric();
    let exact = |z: Complex64| barrier_height(gamma.fermi_coords(z).0, metric.kappa());
    let base = generate(&offset_domain(gamma, s_min, radius)?, &hyperbolic_options(metric, cfg.resolution))?;
    let mut mesh = base;
    let mut table = Vec::new();
    let mut fields = Vec::new();
    for level in 0..=levels {
        if level > 0 {
            mesh = mesh.refine()?;
        }
        let h: Vec<f64> = mesh.nodes().iter().map(|&z| exact(z)).collect::<Result<_>>()?;
        let sol = solve_dirichlet(&mesh, &h, metric, cfg)?;
        let max_error = mesh.interior_nodes().iter().map(|&i| (sol.u.get(i) - h[i]).abs()).fold(0.0, f64::max);
        table.push(CalibrationLevel { level, nodes: mesh.nodes().len(), max_error });
        fields.push((mesh.clone(), sol.u));
    }
    Ok((table, fields))
}

/// Dihedral symmetry of a polygon whose vertices are equally spaced and
/// whose horocycles have equal levels.
fn polygon_symmetry(polygon: &IdealPolygon, family: &HorocycleFamily) -> Option<Symmetry> {
    let n = polygon.len();
    let step = std::f64::consts::TAU / n as f64;
    let regular = (0..n).all(|i| (ccw_gap(polygon.vertex(i).theta(), polygon.vertex(i + 1).theta()) - step).abs() < 1e-12);
    let uniform = family.levels().iter().all(|&l| (l - family.level(0)).abs() < 1e-14);
    (regular && uniform).then(|| Symmetry::Dihedral { m: n, beta0: polygon.vertex(0).theta() })
}

/// Hyperbolic size `min(h, ½(d₁ + d₂))` for `d₁ ≤ d₂` the two smallest
/// distances to the side geodesics: inside a cusp `d₁ + d₂` is the width of
/// the cusp, which shrinks exponentially with depth.
fn cusp_sizing(metric: Metric, polygon: &IdealPolygon, h: f64) -> Sizing {
    let sides: Vec<Geodesic> = (0..polygon.len()).map(|i| polygon.side(metric, i)).collect();
    Sizing::Custom(std::sync::Arc::new(move |z| {
        let (mut d1, mut d2) = (f64::INFINITY, f64::INFINITY);
        for g in &sides {
            let d = g.fermi_coords(z).0.abs();
            if d < d1 {
                d2 = d1;
                d1 = d;
            } else if d < d2 {
                d2 = d;
            }
        }
        h.min(0.5 * (d1 + d2)) / metric.conformal_factor(z)
    }))
}

/// Mesh of the horocycle-truncated polygon; regular polygons with uniform
/// families get an exactly symmetric mesh.
pub fn polygon_mesh(metric: Metric, polygon: &IdealPolygon, family: &HorocycleFamily, cfg: &SolverConfig) -> Result<TriMesh> {
    let domain = truncated_polygon_domain(metric, polygon, family)?;
    let mut opts = MeshOptions::new(cusp_sizing(metric, polygon, cfg.resolution));
    opts.symmetry = polygon_symmetry(polygon, family);
    let mesh = generate(&domain, &opts)?.refined(cfg.refinement)?;
    mesh.check_boundary_tags()?;
    Ok(mesh)
}

/// Dirichlet data on a truncated polygon mesh. `side_value(i, z)` gives the
/// value on side `i`; horocycle arcs interpolate linearly in horocyclic
/// arclength between the values at their two ends. Corner nodes take the
/// side value.
pub fn polygon_boundary_data(
    metric: Metric,
    mesh: &TriMesh,
    polygon: &IdealPolygon,
    family: &HorocycleFamily,
    side_value: &dyn Fn(usize, Complex64) -> f64,
) -> Vec<f64> {
    let n = polygon.len();
    (0..mesh.nodes().len())
        .map(|i| {
            if !mesh.is_boundary(i) {
                return 0.0;
            }
            let z = mesh.node(i);
            let mut horo = None;
            for &(p, _) in mesh.incidences(i) {
                match mesh.pieces()[p].tag {
                    BoundaryTag::Side(s) => return side_value(s, z),
                    BoundaryTag::Horocycle(v) => horo = Some((p, v)),
                    _ => {}
                }
            }
            let Some((p, v)) = horo else { return 0.0 };
            let curve = mesh.pieces()[p].curve;
            let (a, b) = (curve.start(), curve.end());
            let h = family.horocycle(polygon, v);
            let (sa, sb, sz) = (h.arclength_coordinate(metric, a), h.arclength_coordinate(metric, b), h.arclength_coordinate(metric, z));
            let (va, vb) = (side_value((v + n - 1) % n, a), side_value(v, b));
            va + (vb - va) * (sz - sa) / (sb - sa)
        })
        .collect()
}

/// Node closest to the chart-area centroid of the mesh.
pub fn centroid_node(mesh: &TriMesh) -> usize {
    let (mut acc, mut area) = (Complex64::new(0.0, 0.0), 0.0);
    for t in 0..mesh.triangles().len() {
        acc += mesh.centroid(t) * mesh.area(t);
        area += mesh.area(t);
    }
    let c = acc / area;
    (0..mesh.nodes().len())
        .min_by(|&a, &b| (mesh.node(a) - c).norm().total_cmp(&(mesh.node(b) - c).norm()))
        .expect("meshes have nodes")
}

/// Solved polygon problem.
#[derive(Clone, Debug)]
pub struct PolygonSolve {
    pub mesh: TriMesh,
    pub solution: Solution,
    pub truncation: f64,
    /// Node pinned to zero.
    pub center_node: usize,
    pub feasibility: FeasibilityReport,
}

fn label_value(label: SideLabel, t: f64) -> f64 {
    match label {
        SideLabel::Plus => t,
        SideLabel::Minus => -t,
        SideLabel::Finite => 0.0,
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_polygon(
    metric: Metric,
    polygon: &IdealPolygon,
    family: &HorocycleFamily,
    t: f64,
    cfg: &SolverConfig,
    side_value: &dyn Fn(usize, Complex64) -> f64,
    normalize: bool,
    feasibility: FeasibilityReport,
) -> Result<PolygonSolve> {
    let mesh = polygon_mesh(metric, polygon, family, cfg)?;
    let bc = polygon_boundary_data(metric, &mesh, polygon, family, side_value);
    let mut solution = solve_dirichlet(&mesh, &bc, metric, cfg)?;
    let center_node = centroid_node(&mesh);
    if normalize {
        let c = solution.u.get(center_node);
        solution.u = solution.u.shifted(-c);
    }
    Ok(PolygonSolve { mesh, solution, truncation: t, center_node, feasibility })
}

/// Truncated Jenkins–Serrin problem: `+T` on plus sides, `−T` on minus
/// sides, normalized to vanish at the centroid node. Refuses polygons that
/// fail the feasibility check.
pub fn solve_ideal_scherk(metric: Metric, polygon: &IdealPolygon, family: &HorocycleFamily, t: f64, cfg: &SolverConfig) -> Result<PolygonSolve> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("truncation height must be positive".into()));
    }
    let report = js_feasible_with_family(metric, polygon, family)?;
    if !report.feasible {
        return Err(Error::Refused {
            reason: format!("polygon fails condition(s) {:?}", report.failed_conditions()),
            report: Some(Box::new(report)),
        });
    }
    let labels = polygon.labels().to_vec();
    solve_polygon(metric, polygon, family, t, cfg, &|i, _| label_value(labels[i], t), true, report)
}

/// As [`solve_ideal_scherk`] but solves infeasible polygons too; the
/// feasibility report is still attached. The truncated problem always has a
/// solution, it just does not converge as `T` grows.
pub fn solve_ideal_scherk_forced(
    metric: Metric,
    polygon: &IdealPolygon,
    family: &HorocycleFamily,
    t: f64,
    cfg: &SolverConfig,
) -> Result<PolygonSolve> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("truncation height must be positive".into()));
    }
    let report = js_feasible_with_family(metric, polygon, family)?;
    let labels = polygon.labels().to_vec();
    solve_polygon(metric, polygon, family, t, cfg, &|i, _| label_value(labels[i], t), true, report)
}

/// Mixed data: `±T` on the infinite sides and `finite(i, z)` on the sides
/// labelled finite. Not normalized. Refuses polygons failing the
/// inscribed-polygon inequalities.
pub fn solve_mixed_boundary(
    metric: Metric,
    polygon: &IdealPolygon,
    finite: &dyn Fn(usize, Complex64) -> f64,
    family: &HorocycleFamily,
    t: f64,
    cfg: &SolverConfig,
) -> Result<PolygonSolve> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("truncation height must be positive".into()));
    }
    let report = mixed_admissible(metric, polygon)?;
    if !report.feasible {
        return Err(Error::Refused { reason: "an inscribed polygon violates the inequalities".into(), report: Some(Box::new(report)) });
    }
    let labels = polygon.labels().to_vec();
    let value = |i: usize, z: Complex64| match labels[i] {
        SideLabel::Finite => finite(i, z),
        l => label_value(l, t),
    };
    solve_polygon(metric, polygon, family, t, cfg, &value, false, report)
}

/// One radius of the Dirichlet-at-infinity sequence.
#[derive(Clone, Debug)]
pub struct InfinityLevel {
    pub n: f64,
    pub mesh: TriMesh,
    pub solution: Solution,
}

/// Solve on geodesic disks `B(0, n)` with data `φ(θ)` at the boundary point
/// in direction `θ`. Meshes are symmetric under the dihedral group of order 8.
pub fn solve_dirichlet_at_infinity(
    metric: Metric,
    phi: &dyn Fn(f64) -> f64,
    radii: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<InfinityLevel>> {
    cfg.validate()?;
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radii must be increasing".into()));
    }
    radii
        .iter()
        .map(|&n| {
            let mut opts = hyperbolic_options(metric, cfg.resolution);
            opts.symmetry = Some(Symmetry::Dihedral { m: 4, beta0: 0.0 });
            let mesh = generate(&geodesic_disk_domain(metric, n)?, &opts)?.refined(cfg.refinement)?;
            let bc: Vec<f64> = mesh.nodes().iter().map(|z| phi(z.arg())).collect();
            let solution = solve_dirichlet(&mesh, &bc, metric, cfg)?;
            Ok(InfinityLevel { n, mesh, solution })
        })
        .collect()
}
