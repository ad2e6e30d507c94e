use serde::{Deserialize, Serialize};

use super::{IdealPolygon, SideLabel};
use crate::{Error, Result};

/// Enumeration is exhaustive over vertex subsets; beyond this size the
/// `2ⁿ` cost is refused.
pub const MAX_VERTICES: usize = 20;

/// Classification of one side of an inscribed polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideKind {
    /// Side of the parent polygon, with its index there and its label.
    Boundary { side: usize, label: SideLabel },
    /// Geodesic between non-adjacent vertices of the parent polygon.
    Interior,
}

/// Polygon whose vertices are a cyclically ordered subset of a parent's.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InscribedPolygon {
    mask: u64,
    vertices: Vec<usize>,
    sides: Vec<SideKind>,
}

impl InscribedPolygon {
    /// The subset encoded by `mask` (bit `i` selects vertex `i`).
    pub fn from_mask(parent: &IdealPolygon, mask: u64) -> Result<Self> {
        let n = parent.len();
        if n > MAX_VERTICES || (n < 64 && mask >> n != 0) {
            return Err(Error::InvalidParameter(format!("mask {mask:#b} does not fit a {n}-gon")));
        }
        let vertices: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if vertices.len() < 3 {
            return Err(Error::InvalidParameter("inscribed polygons have at least 3 vertices".into()));
        }
        let m = vertices.len();
        let sides = (0..m)
            .map(|k| {
                let (i, j) = (vertices[k], vertices[(k + 1) % m]);
                if (i + 1) % n == j {
                    SideKind::Boundary { side: i, label: parent.label(i) }
                } else {
                    SideKind::Interior
                }
            })
            .collect();
        Ok(Self { mask, vertices, sides })
    }

    /// The parent polygon viewed as inscribed in itself.
    pub fn whole(parent: &IdealPolygon) -> Result<Self> {
        Self::from_mask(parent, (1u64 << parent.len()) - 1)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Parent vertex indices, increasing.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Side `k` joins `vertices[k]` to `vertices[k + 1]`.
    pub fn sides(&self) -> &[SideKind] {
        &self.sides
    }

    pub fn is_whole(&self, parent: &IdealPolygon) -> bool {
        self.vertices.len() == parent.len()
    }

    /// Whether every vertex touches a boundary side carrying `label`.
    pub fn every_vertex_touches(&self, label: SideLabel) -> bool {
        let m = self.sides.len();
        let carries = |k: usize| matches!(self.sides[k % m], SideKind::Boundary { label: l, .. } if l == label);
        (0..m).all(|k| carries(k) || carries(k + m - 1))
    }
}

/// All inscribed polygons other than the parent, ordered by subset bitmask.
pub fn enumerate_inscribed(parent: &IdealPolygon) -> Result<Vec<InscribedPolygon>> {
    let n = parent.len();
    if n > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "{n} vertices exceed the exhaustive enumeration limit of {MAX_VERTICES}"
        )));
    }
    let full = (1u64 << n) - 1;
    (1..full).filter(|m| m.count_ones() >= 3).map(|m| InscribedPolygon::from_mask(parent, m)).collect()
}
