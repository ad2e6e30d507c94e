//! Ideal polygons, horocycle bookkeeping and the Jenkins–Serrin conditions.
//!
//! Vertices live on the ideal boundary and are listed counter-clockwise.
//! Side `i` joins vertex `i` to vertex `i + 1`. For the ±∞ problem the
//! labels alternate `Plus, Minus, …`; mixed problems may also carry sides
//! with finite data.

mod constructions;
mod feasibility;
mod inscribed;

pub use constructions::{
    extend_and_perturb, extend_and_perturb_at, fourth_vertex, fourth_vertex_with_tolerance,
    horocycle_intersection_count, l_function, l_function_with, perturbation_roots, triangle_margin, Extension,
    PerturbationRoots, TriangleMargin,
};
pub use feasibility::{
    a_minus_b, condition2_check, condition2_with_family, js_feasible, js_feasible_with_family, mixed_admissible,
    FeasibilityReport, Inequality, InscribedVerdict, CONDITION_TOL,
};
pub use inscribed::{enumerate_inscribed, InscribedPolygon, SideKind, MAX_VERTICES};

use serde::{Deserialize, Serialize};

use crate::hyperbolic::{ccw_gap, Geodesic, Horocycle, IdealPoint, Metric};
use crate::{Error, Result};

/// Boundary data carried by a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideLabel {
    /// `+∞` data (an `A` side).
    Plus,
    /// `−∞` data (a `B` side).
    Minus,
    /// Finite continuous data.
    Finite,
}

impl SideLabel {
    pub fn opposite(self) -> Self {
        match self {
            SideLabel::Plus => SideLabel::Minus,
            SideLabel::Minus => SideLabel::Plus,
            SideLabel::Finite => SideLabel::Finite,
        }
    }
}

/// An ideal geodesic polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealPolygon {
    vertices: Vec<IdealPoint>,
    labels: Vec<SideLabel>,
}

impl IdealPolygon {
    /// Polygon with alternating `±∞` labels starting with `first`.
    pub fn new(angles: &[f64], first: SideLabel) -> Result<Self> {
        if first == SideLabel::Finite {
            return Err(Error::InvalidPolygon("alternating polygons start with plus or minus".into()));
        }
        if angles.len() < 4 || !angles.len().is_multiple_of(2) {
            return Err(Error::InvalidPolygon(format!(
                "an alternating polygon needs an even number of at least 4 vertices, got {}",
                angles.len()
            )));
        }
        let labels = (0..angles.len()).map(|i| if i % 2 == 0 { first } else { first.opposite() }).collect();
        Self::with_labels(angles, labels)
    }

    /// Polygon with arbitrary labels. Two infinite sides of the same sign
    /// may not share a vertex.
    pub fn with_labels(angles: &[f64], labels: Vec<SideLabel>) -> Result<Self> {
        let n = angles.len();
        if n < 3 {
            return Err(Error::InvalidPolygon("a polygon needs at least 3 vertices".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidPolygon(format!("{} labels for {} sides", labels.len(), n)));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite vertex angle".into()));
        }
        let vertices: Vec<IdealPoint> = angles.iter().map(|&a| IdealPoint::new(a)).collect();
        let total: f64 = (0..n).map(|i| ccw_gap(vertices[i].theta(), vertices[(i + 1) % n].theta())).sum();
        let distinct = (0..n).all(|i| ccw_gap(vertices[i].theta(), vertices[(i + 1) % n].theta()) > 0.0);
        if !distinct || (total - std::f64::consts::TAU).abs() > 1e-9 {
            return Err(Error::InvalidPolygon("vertex angles must be distinct and increase counter-clockwise".into()));
        }
        for i in 0..n {
            let (l0, l1) = (labels[(i + n - 1) % n], labels[i]);
            if l0 == l1 && l0 != SideLabel::Finite {
                return Err(Error::InvalidPolygon(format!("two {l0:?} sides meet at vertex {i}")));
            }
        }
        Ok(Self { vertices, labels })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[IdealPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> IdealPoint {
        self.vertices[i % self.len()]
    }

    pub fn angles(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.theta()).collect()
    }

    pub fn labels(&self) -> &[SideLabel] {
        &self.labels
    }

    /// Label of side `i`, which runs from vertex `i` to vertex `i + 1`.
    pub fn label(&self, i: usize) -> SideLabel {
        self.labels[i % self.len()]
    }

    /// Whether the labels alternate `±∞` with no finite sides.
    pub fn is_alternating(&self) -> bool {
        self.len().is_multiple_of(2)
            && (0..self.len()).all(|i| self.label(i) != SideLabel::Finite && self.label(i) != self.label(i + 1))
    }

    /// Side `i` as an oriented complete geodesic.
    pub fn side(&self, metric: Metric, i: usize) -> Geodesic {
        metric
            .geodesic_between(self.vertex(i).into(), self.vertex(i + 1).into())
            .expect("polygon vertices are distinct")
    }

    /// Largest angle, seen from `p0`, between consecutive vertices.
    pub fn max_angle_gap(&self, metric: Metric, p0: crate::SurfacePoint) -> f64 {
        let a: Vec<f64> = self.vertices.iter().map(|&v| metric.angle_of(p0, v)).collect();
        (0..a.len()).map(|i| ccw_gap(a[i], a[(i + 1) % a.len()])).fold(0.0, f64::max)
    }

    /// Equal levels deep enough that every pair of horocycles is at least
    /// two apart: `max(1, −log sin(Δmin/2)/k + 1)`.
    pub fn default_family(&self, metric: Metric) -> HorocycleFamily {
        let n = self.len();
        let min_gap = (0..n)
            .map(|i| ccw_gap(self.vertex(i).theta(), self.vertex(i + 1).theta()))
            .fold(f64::INFINITY, f64::min);
        let level = (-(0.5 * min_gap).sin().ln() / metric.k() + 1.0).max(1.0);
        HorocycleFamily::uniform(n, level)
    }

    /// Polygon rotated by `delta`, labels unchanged.
    pub fn rotated(&self, delta: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| IdealPoint::new(v.theta() + delta)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// One horocycle level per vertex (see [`Horocycle`] for the sign
/// convention).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorocycleFamily {
    levels: Vec<f64>,
}

impl HorocycleFamily {
    pub fn new(levels: Vec<f64>) -> Self {
        Self { levels }
    }

    pub fn uniform(n: usize, level: f64) -> Self {
        Self { levels: vec![level; n] }
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> f64 {
        self.levels[i % self.levels.len()]
    }

    pub fn horocycle(&self, polygon: &IdealPolygon, i: usize) -> Horocycle {
        Horocycle::new(polygon.vertex(i), self.level(i))
    }

    /// Every horocycle shrunk by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self { levels: self.levels.iter().map(|l| l + delta).collect() }
    }

    /// Checks the size and that the horocycles are pairwise disjoint.
    pub fn validate(&self, metric: Metric, polygon: &IdealPolygon) -> Result<()> {
        let n = polygon.len();
        if self.levels.len() != n {
            return Err(Error::InvalidParameter(format!("{} levels for {} vertices", self.levels.len(), n)));
        }
        for i in 0..n {
            for j in i + 1..n {
                let gap = metric.dist_horocycles(&self.horocycle(polygon, i), &self.horocycle(polygon, j))?;
                if gap <= 0.0 {
                    return Err(Error::OverlappingHorocycles { i, j, overlap: -gap });
                }
            }
        }
        Ok(())
    }
}

/// Length of a side clipped between horocycles at its two ideal endpoints.
pub fn truncated_side_length(metric: Metric, side: &Geodesic, h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
    let (a, b) = side.ideal_ends();
    let same = |x: IdealPoint, y: IdealPoint| crate::hyperbolic::wrap_pi(x.theta() - y.theta()).abs() < 1e-12;
    let matches = (same(a, h1.xi()) && same(b, h2.xi())) || (same(a, h2.xi()) && same(b, h1.xi()));
    if !side.is_complete() || !matches {
        return Err(Error::MismatchedIdealPoints);
    }
    metric.dist_horocycles(h1, h2)
}
