//! Domains used by the solvers, built from exact chart curves.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::domain::{BoundaryTag, Domain, Piece};
use crate::hyperbolic::{wrap_tau, Geodesic, Metric};
use crate::polygon::{HorocycleFamily, IdealPolygon};
use crate::{Error, Result};

/// Side of an oriented geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Sign of the Fermi normal coordinate on this side.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

/// Full circle split into `arcs` counter-clockwise arcs.
pub fn circle_pieces(center: Complex64, radius: f64, arcs: usize, tag: BoundaryTag) -> Vec<Piece> {
    let step = std::f64::consts::TAU / arcs as f64;
    (0..arcs)
        .map(|k| Piece::new(Curve::arc(center, radius, k as f64 * step, (k + 1) as f64 * step), tag))
        .collect()
}

fn require_complete(gamma: &Geodesic) -> Result<()> {
    if gamma.is_complete() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("a complete geodesic is required".into()))
    }
}

/// Region of the half-plane on `side` of `gamma` inside the geodesic circle
/// `C(n)` centered at `γ(0)`, for `n` the largest radius. The smaller radii
/// become interior constraint arcs `C(nᵢ) ∩ Ω` tagged `Constraint(i)`, so
/// that the mesh restricted to each of them is again conforming.
///
/// Tags: `Geodesic` for `γ([−n, n])`, `Circle` for the outer arc.
pub fn halfplane_domain(gamma: &Geodesic, side: Side, radii: &[f64]) -> Result<Domain> {
    require_complete(gamma)?;
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radii must be positive and increasing".into()));
    }
    let sg = side.sign();
    let n = *radii.last().unwrap();
    // Breakpoints ±nᵢ along γ, in the direction the loop travels.
    let mut ts: Vec<f64> = radii.iter().flat_map(|&r| [-sg * r, sg * r]).collect();
    ts.sort_by(|a, b| (sg * a).total_cmp(&(sg * b)));
    let mut outer = Vec::new();
    for w in ts.windows(2) {
        let (a, b) = (gamma.chart_point(w[0]), gamma.chart_point(w[1]));
        let m = gamma.chart_point(0.5 * (w[0] + w[1]));
        outer.push(Piece::new(Curve::through(a, m, b)?, BoundaryTag::Geodesic));
    }
    let arc = |r: f64| -> Result<Curve> {
        Curve::through(gamma.chart_point(sg * r), gamma.fermi_point(sg * r, 0.0), gamma.chart_point(-sg * r))
    };
    outer.push(Piece::new(arc(n)?, BoundaryTag::Circle));
    let mut d = Domain::new(outer)?;
    for (i, &r) in radii[..radii.len() - 1].iter().enumerate() {
        d = d.with_constraint(vec![Piece::new(arc(r)?, BoundaryTag::Constraint(i))])?;
    }
    Ok(d)
}

/// Region `{s ≥ s_min}` on the left of `gamma` inside the geodesic circle of
/// radius `radius` about `γ(0)`. Tags: `Geodesic` for the equidistant,
/// `Circle` for the arc.
pub fn offset_domain(gamma: &Geodesic, s_min: f64, radius: f64) -> Result<Domain> {
    require_complete(gamma)?;
    if !(s_min > 0.0 && radius > s_min) {
        return Err(Error::InvalidParameter("need 0 < s_min < radius".into()));
    }
    let k = gamma.metric().k();
    let t_star = ((k * radius).cosh() / (k * s_min).cosh()).acosh() / k;
    let a = gamma.fermi_point(s_min, -t_star);
    let b = gamma.fermi_point(s_min, t_star);
    Domain::new(vec![
        Piece::new(Curve::through(a, gamma.fermi_point(s_min, 0.0), b)?, BoundaryTag::Geodesic),
        Piece::new(Curve::through(b, gamma.fermi_point(radius, 0.0), a)?, BoundaryTag::Circle),
    ])
}

/// Ideal polygon truncated by a horocycle family. Tags: `Side(i)` for the
/// truncated side from vertex `i` to `i + 1`, `Horocycle(i)` for the arc
/// cutting off vertex `i`.
pub fn truncated_polygon_domain(metric: Metric, polygon: &IdealPolygon, family: &HorocycleFamily) -> Result<Domain> {
    family.validate(metric, polygon)?;
    let n = polygon.len();
    // Parameter range of each side between its two horocycles.
    let mut ends = Vec::with_capacity(n);
    for i in 0..n {
        let g = polygon.side(metric, i);
        let m = g.point_at(0.0)?;
        let s0 = -family.level(i) - metric.busemann(polygon.vertex(i), m);
        let s1 = metric.busemann(polygon.vertex(i + 1), m) + family.level((i + 1) % n);
        if s1 <= s0 {
            return Err(Error::OverlappingHorocycles { i, j: (i + 1) % n, overlap: s0 - s1 });
        }
        ends.push((g, s0, s1));
    }
    let mut outer = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (prev, _, ps1) = &ends[(i + n - 1) % n];
        let (g, s0, s1) = &ends[i];
        let a = prev.chart_point(*ps1);
        let b = g.chart_point(*s0);
        let h = family.horocycle(polygon, i);
        let (c, _) = h.chart_circle(metric);
        let theta = polygon.vertex(i).theta();
        let da = wrap_tau((a - c).arg() - theta);
        let db = wrap_tau((b - c).arg() - theta);
        let mid = h.chart_point(metric, theta + 0.5 * (da + db));
        outer.push(Piece::new(Curve::through(a, mid, b)?, BoundaryTag::Horocycle(i)));
        let gm = g.chart_point(0.5 * (s0 + s1));
        outer.push(Piece::new(Curve::through(b, gm, g.chart_point(*s1))?, BoundaryTag::Side(i)));
    }
    Domain::new(outer)
}

/// Geodesic disk of radius `radius` about the chart origin, tagged `Circle`.
pub fn geodesic_disk_domain(metric: Metric, radius: f64) -> Result<Domain> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    let r = metric.chart_radius(radius);
    Domain::new(circle_pieces(Complex64::new(0.0, 0.0), r, 4, BoundaryTag::Circle))
}

/// Round chart annulus `r_in < |z| < r_out`; tags `Inner` and `Circle`.
pub fn annulus_domain(r_in: f64, r_out: f64) -> Result<Domain> {
    if !(0.0 < r_in && r_in < r_out && r_out < 1.0) {
        return Err(Error::InvalidParameter("need 0 < r_in < r_out < 1".into()));
    }
    let o = Complex64::new(0.0, 0.0);
    Domain::new(circle_pieces(o, r_out, 4, BoundaryTag::Circle))?.with_hole(circle_pieces(o, r_in, 4, BoundaryTag::Inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::SideLabel;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn halfplane_boundary_and_constraints() {
        let m = Metric::hyperbolic();
        let g = m.geodesic_between(crate::IdealPoint::new(-FRAC_PI_2).into(), crate::IdealPoint::new(FRAC_PI_2).into()).unwrap();
        let d = halfplane_domain(&g, Side::Left, &[2.0, 3.0]).unwrap();
        assert_eq!(d.constraints.len(), 1);
        assert_eq!(d.outer.iter().filter(|p| p.tag == BoundaryTag::Geodesic).count(), 3);
        // Arc points sit at distance n from γ(0).
        let p0 = g.point_at(0.0).unwrap();
        for t in [0.1, 0.5, 0.9] {
            let z = d.outer.last().unwrap().curve.eval(t);
            let dist = m.distance(p0, crate::SurfacePoint::from_chart(z).unwrap());
            assert!((dist - 3.0).abs() < 1e-9, "{dist}");
            assert!(g.fermi_coords(z).0 > 0.0);
        }
        let r = halfplane_domain(&g, Side::Right, &[3.0]).unwrap();
        assert!(g.fermi_coords(r.outer.last().unwrap().curve.eval(0.5)).0 < 0.0);
    }

    #[test]
    fn polygon_pieces_lie_on_their_curves() {
        let m = Metric::hyperbolic();
        let sq = IdealPolygon::new(&[0.0, FRAC_PI_2, 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2], SideLabel::Plus).unwrap();
        let f = sq.default_family(m);
        let d = truncated_polygon_domain(m, &sq, &f).unwrap();
        assert_eq!(d.outer.len(), 8);
        for p in &d.outer {
            for t in [0.0, 0.3, 0.7, 1.0] {
                let z = crate::SurfacePoint::from_chart(p.curve.eval(t)).unwrap();
                match p.tag {
                    BoundaryTag::Horocycle(i) => {
                        let b = m.busemann(sq.vertex(i), z);
                        assert!((b + f.level(i)).abs() < 1e-9, "{b}");
                    }
                    BoundaryTag::Side(i) => {
                        let (s, _) = sq.side(m, i).fermi_coords(z.chart());
                        assert!(s.abs() < 1e-9);
                    }
                    _ => unreachable!(),
                }
            }
        }
        // Horocycle arcs face the interior: their midpoints are closer to the origin than ξ's tangency.
        let mid = d.outer[0].curve.eval(0.5);
        assert!(mid.norm() < 1.0 - 2.0 * f.horocycle(&sq, 0).chart_circle(m).1 + 1e-12);
    }
}
