//! Root-finding constructions on the ideal boundary: the function `L`, the
//! fourth vertex of a Scherk quadrilateral, triangle margins and the
//! extension/perturbation step that grows a Scherk domain.

use serde::{Deserialize, Serialize};

use super::{IdealPolygon, SideLabel};
use crate::hyperbolic::{ccw_gap, Endpoint, Horocycle, IdealPoint, Metric, SurfacePoint};
use crate::{Error, Result};

/// Tolerance on the boundary angle for the monotone bisections below.
const ANGLE_TOL: f64 = 1e-13;

/// Bisection for a monotone `f` on the open ccw arc of length `span` after
/// `start`. The endpoints are never evaluated; `f` must change sign between
/// points just inside them.
fn bisect_arc(start: f64, span: f64, tol: f64, f: impl Fn(IdealPoint) -> f64) -> Result<IdealPoint> {
    let at = |u: f64| f(IdealPoint::new(start + u));
    let (mut lo, mut hi) = (span * 1e-15, span * (1.0 - 1e-15));
    let (flo, fhi) = (at(lo), at(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NotBracketed(format!("values {flo:.3e} and {fhi:.3e} at the arc ends")));
    }
    let rising = flo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let v = at(mid);
        if v == 0.0 {
            return Ok(IdealPoint::new(start + mid));
        }
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(IdealPoint::new(start + 0.5 * (lo + hi)))
}

fn strictly_inside(x: IdealPoint, y: IdealPoint, z: IdealPoint) -> bool {
    let g = ccw_gap(x.theta(), z.theta());
    g > 0.0 && g < ccw_gap(x.theta(), y.theta())
}

/// `L(z) = d(H_y, H_z) − d(H_z, H_x)` with an explicit horocycle at `z`.
pub fn l_function_with(
    metric: Metric,
    x: IdealPoint,
    y: IdealPoint,
    z: IdealPoint,
    hx: &Horocycle,
    hy: &Horocycle,
    hz: &Horocycle,
) -> Result<f64> {
    if !strictly_inside(x, y, z) {
        return Err(Error::InvalidParameter("z must lie strictly inside the ccw arc from x to y".into()));
    }
    if hx.xi() != x || hy.xi() != y || hz.xi() != z {
        return Err(Error::MismatchedIdealPoints);
    }
    Ok(metric.dist_horocycles(hy, hz)? - metric.dist_horocycles(hz, hx)?)
}

/// `L(z)` with an automatically chosen horocycle at `z` disjoint from both.
pub fn l_function(
    metric: Metric,
    x: IdealPoint,
    y: IdealPoint,
    z: IdealPoint,
    hx: &Horocycle,
    hy: &Horocycle,
) -> Result<f64> {
    let need = (-hx.level() - metric.ideal_chord(x, z)).max(-hy.level() - metric.ideal_chord(y, z));
    let hz = Horocycle::new(z, need.max(0.0) + 1.0);
    l_function_with(metric, x, y, z, hx, hy, &hz)
}

/// The vertex `w` completing `x, y, z` to a quadrilateral with
/// `a(Γ) = b(Γ)`. It lies on the arc between `x` and `y` not containing `z`.
pub fn fourth_vertex(metric: Metric, x: IdealPoint, y: IdealPoint, z: IdealPoint) -> Result<IdealPoint> {
    fourth_vertex_with_tolerance(metric, x, y, z, ANGLE_TOL)
}

pub fn fourth_vertex_with_tolerance(
    metric: Metric,
    x: IdealPoint,
    y: IdealPoint,
    z: IdealPoint,
    tol: f64,
) -> Result<IdealPoint> {
    if x == y || y == z || x == z {
        return Err(Error::Degenerate("fourth_vertex needs three distinct points".into()));
    }
    // Horocycles at x and y equidistant from the level-zero horocycle at z.
    let lx = 0.0;
    let ly = lx + metric.ideal_chord(x, z) - metric.ideal_chord(y, z);
    let (from, to) = if strictly_inside(x, y, z) { (y, x) } else { (x, y) };
    let (lf, lt) = if from == x { (lx, ly) } else { (ly, lx) };
    // d(H_to, H_w) − d(H_w, H_from), which is monotone along the arc.
    let l = |w: IdealPoint| lt - lf + metric.ideal_chord(to, w) - metric.ideal_chord(w, from);
    bisect_arc(from.theta(), ccw_gap(from.theta(), to.theta()), tol, l)
}

/// Triangle inequality margin `|x₁x₃| + |x₃x₂| − |x₁x₂|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleMargin {
    /// Margin with the supplied levels.
    pub margin: f64,
    /// For all-ideal triples: levels after shrinking `x₃`, then `x₂`, then
    /// `x₁` until all three margins are positive, and those margins.
    pub shrunk_levels: Option<[f64; 3]>,
    pub shrunk_margins: Option<[f64; 3]>,
}

fn vertex_distance(metric: Metric, a: (Endpoint, f64), b: (Endpoint, f64)) -> Result<f64> {
    use Endpoint::*;
    match (a.0, b.0) {
        (Finite(p), Finite(q)) => Ok(metric.distance(p, q)),
        (Finite(p), Ideal(xi)) | (Ideal(xi), Finite(p)) => {
            let level = if matches!(a.0, Ideal(_)) { a.1 } else { b.1 };
            Ok(metric.busemann(xi, p) + level)
        }
        (Ideal(x), Ideal(y)) => metric.dist_horocycles(&Horocycle::new(x, a.1), &Horocycle::new(y, b.1)),
    }
}

/// Margins `(m₁, m₂, m₃)` where `m_k` is the excess of the two sides at
/// vertex `k` over the opposite side.
fn margins(metric: Metric, v: &[(Endpoint, f64); 3]) -> Result<[f64; 3]> {
    let d12 = vertex_distance(metric, v[0], v[1])?;
    let d13 = vertex_distance(metric, v[0], v[2])?;
    let d23 = vertex_distance(metric, v[1], v[2])?;
    Ok([d12 + d13 - d23, d12 + d23 - d13, d13 + d23 - d12])
}

/// Margin of the triangle `x₁x₂x₃`. `levels[i]` is the horocycle level at
/// `x_i` and is ignored for surface points.
pub fn triangle_margin(
    metric: Metric,
    x1: Endpoint,
    x2: Endpoint,
    x3: Endpoint,
    levels: [f64; 3],
) -> Result<TriangleMargin> {
    let mut v = [(x1, levels[0]), (x2, levels[1]), (x3, levels[2])];
    let margin = margins(metric, &v)?[2];
    let all_ideal = v.iter().all(|(e, _)| matches!(e, Endpoint::Ideal(_)));
    if !all_ideal {
        return Ok(TriangleMargin { margin, shrunk_levels: None, shrunk_margins: None });
    }
    // Shrinking the horocycle at x_k by δ adds 2δ to m_k and leaves the other
    // two margins unchanged, so the sequence x₃, x₂, x₁ terminates.
    for k in [2, 1, 0] {
        let m = margins(metric, &v)?[k];
        if m < 1.0 {
            v[k].1 += 0.5 * (1.0 - m);
        }
    }
    Ok(TriangleMargin {
        margin,
        shrunk_levels: Some([v[0].1, v[1].1, v[2].1]),
        shrunk_margins: Some(margins(metric, &v)?),
    })
}

/// Number of intersection points of two distinct horocycles (tangency
/// counts once).
pub fn horocycle_intersection_count(metric: Metric, h1: &Horocycle, h2: &Horocycle) -> Result<u8> {
    if h1 == h2 {
        return Err(Error::Degenerate("identical horocycles".into()));
    }
    if h1.xi() == h2.xi() {
        return Ok(0);
    }
    let gap = metric.dist_horocycles(h1, h2)?;
    Ok(if gap > 1e-12 {
        0
    } else if gap >= -1e-12 {
        1
    } else {
        2
    })
}

/// Roots of the perturbation identities for one pair of attached
/// quadrilaterals `(a₀, b₁, b₂, a₁)` and `(a₁, b₃, b₄, a₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRoots {
    pub b2: IdealPoint,
    pub b3: IdealPoint,
    /// `|identity − t|` for each of the two identities.
    pub residuals: [f64; 2],
}

/// Solves, for any real `t`,
/// `t = |a₀a₁| − |a₁b₂| + |b₂b₁| − |b₁a₀|` with `b₂` between `b₁` and `a₁`, and
/// `t = |a₂a₁| − |a₁b₃| + |b₃b₄| − |b₄a₂|` with `b₃` between `a₁` and `b₄`.
/// At `t = 0` both quadrilaterals are Scherk quadrilaterals.
pub fn perturbation_roots(
    metric: Metric,
    a0: IdealPoint,
    b1: IdealPoint,
    a1: IdealPoint,
    b4: IdealPoint,
    a2: IdealPoint,
    t: f64,
) -> Result<PerturbationRoots> {
    let c = |x, y| metric.ideal_chord(x, y);
    let e1 = |b2| c(a0, a1) - c(a1, b2) + c(b2, b1) - c(b1, a0);
    let e2 = |b3| c(a2, a1) - c(a1, b3) + c(b3, b4) - c(b4, a2);
    let b2 = bisect_arc(b1.theta(), ccw_gap(b1.theta(), a1.theta()), ANGLE_TOL, |w| e1(w) - t)?;
    let b3 = bisect_arc(a1.theta(), ccw_gap(a1.theta(), b4.theta()), ANGLE_TOL, |w| e2(w) - t)?;
    Ok(PerturbationRoots { b2, b3, residuals: [(e1(b2) - t).abs(), (e2(b3) - t).abs()] })
}

/// Result of [`extend_and_perturb`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub polygon: IdealPolygon,
    /// The inserted vertices `b₁, b₂(t), b₃(t), b₄`.
    pub inserted: [IdealPoint; 4],
    /// Unperturbed fourth vertices `b₂(0), b₃(0)`.
    pub scherk_vertices: [IdealPoint; 2],
    pub residuals: [f64; 2],
}

/// Attaches Scherk quadrilaterals to the plus side `side` and the minus side
/// after it, then perturbs them by `t > 0`. Angles are split as seen from
/// the chart origin.
pub fn extend_and_perturb(metric: Metric, polygon: &IdealPolygon, side: usize, t: f64) -> Result<Extension> {
    extend_and_perturb_at(metric, polygon, side, t, SurfacePoint::origin())
}

/// As [`extend_and_perturb`], bisecting angles as seen from `p0`.
pub fn extend_and_perturb_at(
    metric: Metric,
    polygon: &IdealPolygon,
    side: usize,
    t: f64,
    p0: SurfacePoint,
) -> Result<Extension> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("perturbation parameter must be positive, got {t}")));
    }
    if !polygon.is_alternating() {
        return Err(Error::InvalidPolygon("extension needs an alternating polygon".into()));
    }
    let n = polygon.len();
    if side >= n || polygon.label(side) != SideLabel::Plus {
        return Err(Error::InvalidParameter(format!("side {side} is not a plus side")));
    }
    let (a0, a1, a2) = (polygon.vertex(side), polygon.vertex(side + 1), polygon.vertex(side + 2));
    let midpoint = |x: IdealPoint, y: IdealPoint| {
        let (ax, ay) = (metric.angle_of(p0, x), metric.angle_of(p0, y));
        metric.ideal_at_angle(p0, ax + 0.5 * ccw_gap(ax, ay))
    };
    let b1 = midpoint(a0, a1);
    let b4 = midpoint(a1, a2);
    let b2_0 = fourth_vertex(metric, b1, a1, a0)?;
    let b3_0 = fourth_vertex(metric, a1, b4, a2)?;
    let roots = perturbation_roots(metric, a0, b1, a1, b4, a2, t)?;

    // New cyclic order: … a0 b1 b2 a1 b3 b4 a2 …, starting at vertex 0 of the
    // old polygon so that side labels keep their parity.
    let mut angles = Vec::with_capacity(n + 4);
    for i in 0..n {
        angles.push(polygon.vertex(i).theta());
        if i == side {
            angles.extend([b1.theta(), roots.b2.theta()]);
        } else if i == (side + 1) % n {
            angles.extend([roots.b3.theta(), b4.theta()]);
        }
    }
    let labels: Vec<SideLabel> = (0..n + 4).map(|i| if i % 2 == 0 { polygon.label(0) } else { polygon.label(1) }).collect();
    let new = IdealPolygon::with_labels(&angles, labels)?;
    Ok(Extension {
        polygon: new,
        inserted: [b1, roots.b2, roots.b3, b4],
        scherk_vertices: [b2_0, b3_0],
        residuals: roots.residuals,
    })
}
