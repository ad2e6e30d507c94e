//! Flux of the unit field `X = ∇u/W` across curves.
//!
//! In the chart the flux density against the Euclidean normal is `w g·n`
//! with `w = 1/√(1 + |g|²/λ²)`: the factors of `λ` from the metric normal
//! and the metric arclength cancel.
//!
//! Open curves use the line integral of the piecewise-constant P1 field.
//! Closed loops and boundary arcs use the weak (residual) flux, which is the
//! conservative one: it vanishes exactly when the discrete equations hold.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mesh::{BoundaryTag, Locator, TriMesh};
use crate::solver::{nodal_residual, Conformal, ScalarField};
use crate::{Error, Result};

/// Curve across which a flux is taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FluxCurve {
    /// Open chart polyline; the normal points to the right of the direction of travel.
    Polyline { points: Vec<Complex64> },
    /// Closed chart polygon inside the mesh; outward normal.
    Loop { points: Vec<Complex64> },
    /// Boundary edges on pieces with this tag, optionally restricted to the
    /// stretch of one piece between two chart points; outward normal.
    Boundary {
        tag: BoundaryTag,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<[Complex64; 2]>,
    },
}

/// A computed flux with the metric length of its curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxResult {
    pub curve: FluxCurve,
    pub value: f64,
    pub length: f64,
}

impl FluxResult {
    pub fn per_length(&self) -> f64 {
        self.value / self.length
    }
}

const GAUSS3: [(f64, f64); 3] = [(0.112_701_665_379_258_3, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.887_298_334_620_741_7, 5.0 / 18.0)];

/// Metric length of the chart segment `a → b`.
pub fn segment_length(conformal: &Conformal, a: Complex64, b: Complex64) -> f64 {
    (b - a).norm() * GAUSS3.iter().map(|&(s, w)| w * conformal.lambda(a + (b - a) * s)).sum::<f64>()
}

/// Flux of `u` across `curve`.
pub fn flux(mesh: &TriMesh, u: &ScalarField, curve: &FluxCurve, conformal: impl Into<Conformal>) -> Result<FluxResult> {
    let conformal = conformal.into();
    if u.len() != mesh.nodes().len() {
        return Err(Error::InvalidParameter("field does not match the mesh".into()));
    }
    let (value, length) = match curve {
        FluxCurve::Polyline { points } => polyline_flux(mesh, u, points, &conformal)?,
        FluxCurve::Loop { points } => loop_flux(mesh, u, points, &conformal)?,
        FluxCurve::Boundary { tag, window } => boundary_flux(mesh, u, *tag, window.as_ref(), &conformal)?,
    };
    Ok(FluxResult { curve: curve.clone(), value, length })
}

/// Parameters in `(0, 1)` where the segment `a → b` crosses a mesh edge.
fn edge_crossings(mesh: &TriMesh, edges: &[[usize; 2]], a: Complex64, b: Complex64) -> Vec<f64> {
    let d = b - a;
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let mut out = Vec::new();
    for &[p, q] in edges {
        let (p, q) = (mesh.node(p), mesh.node(q));
        let e = q - p;
        let den = cross(d, e);
        if den.abs() <= 1e-15 * d.norm() * e.norm() {
            continue;
        }
        let s = cross(p - a, e) / den;
        let r = cross(p - a, d) / den;
        if s > 0.0 && s < 1.0 && (-1e-12..=1.0 + 1e-12).contains(&r) {
            out.push(s);
        }
    }
    out
}

/// Chart gradient on the piece around `mid`; pieces running along an edge
/// take the mean of the two triangles beside it.
fn piece_gradient(mesh: &TriMesh, u: &[f64], loc: &Locator<'_>, mid: Complex64, normal: Complex64, scale: f64) -> Result<Complex64> {
    let off = normal * (1e-9 * scale);
    let sides = [loc.locate(mid + off), loc.locate(mid - off)];
    match sides {
        [Some((t1, _)), Some((t2, _))] if t1 != t2 => Ok(0.5 * (mesh.gradient(t1, u) + mesh.gradient(t2, u))),
        [Some((t, _)), _] | [_, Some((t, _))] => Ok(mesh.gradient(t, u)),
        _ => Err(Error::OutsideMesh { x: mid.re, y: mid.im }),
    }
}

fn polyline_flux(mesh: &TriMesh, u: &ScalarField, points: &[Complex64], conformal: &Conformal) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter("a polyline needs two points".into()));
    }
    let loc = mesh.locator();
    for &z in points {
        loc.locate(z).ok_or(Error::OutsideMesh { x: z.re, y: z.im })?;
    }
    let mut edges: Vec<[usize; 2]> = mesh
        .triangles()
        .iter()
        .flat_map(|t| [[t[0], t[1]], [t[1], t[2]], [t[2], t[0]]])
        .map(|[p, q]| [p.min(q), p.max(q)])
        .collect();
    edges.sort_unstable();
    edges.dedup();
    // Three-point Gauss on [0, 1].
    let (gx, gw) = ([0.5 - 0.15f64.sqrt(), 0.5, 0.5 + 0.15f64.sqrt()], [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0]);
    let (mut value, mut length) = (0.0, 0.0);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let normal = (b - a) / len * Complex64::new(0.0, -1.0);
        // Canonical orientation, so a reversed segment is cut identically.
        let (p, q) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
        let mut cuts = edge_crossings(mesh, &edges, p, q);
        cuts.extend([0.0, 1.0]);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
        let mut seg = 0.0;
        for c in cuts.windows(2) {
            let piece = (c[1] - c[0]) * len;
            if piece <= 0.0 {
                continue;
            }
            let at = |s: f64| p + (q - p) * (c[0] + s * (c[1] - c[0]));
            let g = piece_gradient(mesh, u.values(), &loc, at(0.5), normal, len)?;
            let gn = g.re * normal.re + g.im * normal.im;
            for k in 0..3 {
                let lam = conformal.lambda(at(gx[k]));
                seg += gw[k] * piece * gn / (1.0 + g.norm_sqr() / (lam * lam)).sqrt();
            }
        }
        value += seg;
        length += segment_length(conformal, a, b);
    }
    Ok((value, length))
}

/// Even-odd point in polygon.
fn inside(points: &[Complex64], z: Complex64) -> bool {
    let mut c = false;
    for k in 0..points.len() {
        let (a, b) = (points[k], points[(k + 1) % points.len()]);
        if (a.im > z.im) != (b.im > z.im) && z.re < a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im) {
            c = !c;
        }
    }
    c
}

fn loop_flux(mesh: &TriMesh, u: &ScalarField, points: &[Complex64], conformal: &Conformal) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter("a loop needs three points".into()));
    }
    let loc = mesh.locator();
    if let Some(z) = points.iter().find(|&&z| loc.locate(z).is_none()) {
        return Err(Error::OutsideMesh { x: z.re, y: z.im });
    }
    let enclosed: Vec<usize> = (0..mesh.nodes().len()).filter(|&i| inside(points, mesh.node(i))).collect();
    if let Some(&i) = enclosed.iter().find(|&&i| mesh.is_boundary(i)) {
        let z = mesh.node(i);
        return Err(Error::OutsideMesh { x: z.re, y: z.im });
    }
    let r = nodal_residual(mesh, u, *conformal);
    let value = -enclosed.iter().map(|&i| r[i]).sum::<f64>();
    let length = (0..points.len()).map(|k| segment_length(conformal, points[k], points[(k + 1) % points.len()])).sum();
    Ok((value, length))
}

/// Piece carrying `tag` on which both window ends lie, with their parameters.
fn window_on_piece(mesh: &TriMesh, tag: BoundaryTag, window: &[Complex64; 2]) -> Result<(usize, f64, f64)> {
    (0..mesh.boundary_piece_count())
        .filter(|&p| mesh.pieces()[p].tag == tag)
        .find_map(|p| {
            let c = &mesh.pieces()[p].curve;
            let (ta, da) = c.project(window[0]);
            let (tb, db) = c.project(window[1]);
            let ok = da <= 1e-9 && db <= 1e-9 && (-1e-12..=1.0 + 1e-12).contains(&ta) && (-1e-12..=1.0 + 1e-12).contains(&tb);
            ok.then(|| (p, ta.min(tb), ta.max(tb)))
        })
        .ok_or_else(|| Error::InvalidParameter(format!("window ends do not lie on one piece tagged {tag:?}")))
}

fn boundary_flux(mesh: &TriMesh, u: &ScalarField, tag: BoundaryTag, window: Option<&[Complex64; 2]>, conformal: &Conformal) -> Result<(f64, f64)> {
    let window = window.map(|w| window_on_piece(mesh, tag, w)).transpose()?;
    let n = mesh.nodes().len();
    let (mut tagged, mut total) = (vec![0.0; n], vec![0.0; n]);
    let mut length = 0.0;
    for (e, curve) in mesh.boundary_edges() {
        let l = segment_length(conformal, mesh.node(e[0]), mesh.node(e[1]));
        // Fraction of the edge counted, by piece parameter.
        let frac = match (curve, window) {
            (Some(c), _) if mesh.pieces()[c.piece].tag != tag => 0.0,
            (Some(_), None) => 1.0,
            (Some(c), Some((p, lo, hi))) if c.piece == p => {
                let (a, b) = (c.tau[0].min(c.tau[1]), c.tau[0].max(c.tau[1]));
                ((b.min(hi) - a.max(lo)).max(0.0) / (b - a)).min(1.0)
            }
            _ => 0.0,
        };
        for &v in &e {
            total[v] += 0.5 * l;
            tagged[v] += 0.5 * l * frac;
        }
        length += l * frac;
    }
    if length == 0.0 {
        return Err(Error::InvalidParameter(format!("no boundary edge carries the tag {tag:?}")));
    }
    let r = nodal_residual(mesh, u, *conformal);
    // Each node contributes in proportion to its counted boundary length:
    // exact to second order for smooth flux densities away from corners.
    let value = (0..n).filter(|&i| tagged[i] > 0.0).map(|i| r[i] * tagged[i] / total[i]).sum();
    Ok((value, length))
}
