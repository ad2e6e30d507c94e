use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::{BoundaryTag, Piece};
use super::locate::Locator;
use crate::{Error, Result};

/// Mesh edge lying on a curve piece, with the piece parameters of its ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveEdge {
    pub nodes: [usize; 2],
    pub piece: usize,
    pub tau: [f64; 2],
}

/// Conforming triangulation in the disk chart. Triangles are counter-clockwise.
///
/// Pieces `0..boundary_piece_count()` bound the meshed region; later pieces
/// are interior constraint curves.
#[derive(Clone, Debug)]
pub struct TriMesh {
    nodes: Vec<Complex64>,
    triangles: Vec<[usize; 3]>,
    pieces: Vec<Piece>,
    boundary_pieces: usize,
    curve_edges: Vec<CurveEdge>,
    on_boundary: Vec<bool>,
    incidences: Vec<Vec<(usize, f64)>>,
}

pub(crate) fn area2(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).re * (c - a).im - (b - a).im * (c - a).re
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl TriMesh {
    pub fn new(
        nodes: Vec<Complex64>,
        triangles: Vec<[usize; 3]>,
        pieces: Vec<Piece>,
        boundary_pieces: usize,
        curve_edges: Vec<CurveEdge>,
    ) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Mesh("no triangles".into()));
        }
        for (k, t) in triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= nodes.len()) {
                return Err(Error::Mesh(format!("triangle {k} references a missing node")));
            }
            let a = area2(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            if !(a > 0.0) {
                return Err(Error::Mesh(format!("triangle {k} is inverted or degenerate: {:?}", t.map(|v| nodes[v]))));
            }
        }
        let mut count: HashMap<(usize, usize), u8> = HashMap::new();
        for t in &triangles {
            for k in 0..3 {
                *count.entry(key(t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        if count.values().any(|&c| c > 2) {
            return Err(Error::Mesh("non-manifold edge".into()));
        }
        let mut on_boundary = vec![false; nodes.len()];
        for (&(a, b), &c) in &count {
            if c == 1 {
                on_boundary[a] = true;
                on_boundary[b] = true;
            }
        }
        let mut incidences = vec![Vec::new(); nodes.len()];
        for e in &curve_edges {
            for s in 0..2 {
                let list: &mut Vec<(usize, f64)> = &mut incidences[e.nodes[s]];
                if !list.iter().any(|&(p, t)| p == e.piece && (t - e.tau[s]).abs() < 1e-12) {
                    list.push((e.piece, e.tau[s]));
                }
            }
        }
        Ok(Self { nodes, triangles, pieces, boundary_pieces, curve_edges, on_boundary, incidences })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Complex64 {
        self.nodes[i]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn boundary_piece_count(&self) -> usize {
        self.boundary_pieces
    }

    pub fn curve_edges(&self) -> &[CurveEdge] {
        &self.curve_edges
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.on_boundary[i]
    }

    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.on_boundary[i]).collect()
    }

    pub fn interior_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.on_boundary[i]).collect()
    }

    /// `(piece, τ)` for every curve piece through node `i`.
    pub fn incidences(&self, i: usize) -> &[(usize, f64)] {
        &self.incidences[i]
    }

    /// Tags of the curve pieces through node `i`.
    pub fn tags(&self, i: usize) -> Vec<BoundaryTag> {
        let mut v: Vec<BoundaryTag> = Vec::new();
        for &(p, _) in &self.incidences[i] {
            if !v.contains(&self.pieces[p].tag) {
                v.push(self.pieces[p].tag);
            }
        }
        v
    }

    /// Topological boundary edges, each with its curve edge if one is known.
    pub fn boundary_edges(&self) -> Vec<([usize; 2], Option<CurveEdge>)> {
        let mut count: HashMap<(usize, usize), (u8, [usize; 2])> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = count.entry(key(t[k], t[(k + 1) % 3])).or_insert((0, [t[k], t[(k + 1) % 3]]));
                e.0 += 1;
            }
        }
        let by_key: HashMap<(usize, usize), CurveEdge> =
            self.curve_edges.iter().map(|e| (key(e.nodes[0], e.nodes[1]), *e)).collect();
        let mut out: Vec<_> = count
            .into_iter()
            .filter(|(_, (c, _))| *c == 1)
            .map(|(k, (_, e))| (e, by_key.get(&k).copied()))
            .collect();
        out.sort_unstable_by_key(|(e, _)| key(e[0], e[1]));
        out
    }

    /// Error unless every boundary edge lies on a tagged curve piece.
    pub fn check_boundary_tags(&self) -> Result<()> {
        match self.boundary_edges().iter().find(|(_, c)| c.is_none()) {
            Some((e, _)) => Err(Error::Mesh(format!("boundary edge {e:?} carries no tag"))),
            None => Ok(()),
        }
    }

    /// Chart area of triangle `t`.
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * area2(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    pub fn centroid(&self, t: usize) -> Complex64 {
        let [a, b, c] = self.triangles[t];
        (self.nodes[a] + self.nodes[b] + self.nodes[c]) / 3.0
    }

    /// Chart gradients of the three barycentric basis functions, and the area.
    pub fn basis_gradients(&self, t: usize) -> ([Complex64; 3], f64) {
        let [a, b, c] = self.triangles[t].map(|v| self.nodes[v]);
        let two_area = area2(a, b, c);
        let i = Complex64::i();
        ([i * (c - b) / two_area, i * (a - c) / two_area, i * (b - a) / two_area], 0.5 * two_area)
    }

    /// Chart gradient of the piecewise-linear field `u` on triangle `t`.
    pub fn gradient(&self, t: usize, u: &[f64]) -> Complex64 {
        let (g, _) = self.basis_gradients(t);
        let tri = self.triangles[t];
        g[0] * u[tri[0]] + g[1] * u[tri[1]] + g[2] * u[tri[2]]
    }

    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for t in &self.triangles {
            let p = t.map(|v| self.nodes[v]);
            for k in 0..3 {
                let (u, v) = (p[(k + 1) % 3] - p[k], p[(k + 2) % 3] - p[k]);
                worst = worst.min((u.conj() * v).arg().abs().to_degrees());
            }
        }
        worst
    }

    /// Longest chart edge.
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| (self.nodes[a] - self.nodes[b]).norm())
            .fold(0.0, f64::max)
    }

    /// Uniform red refinement; new nodes on curve edges are placed on the curve.
    pub fn refine(&self) -> Result<TriMesh> {
        let mut nodes = self.nodes.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::with_capacity(2 * self.curve_edges.len());
        for e in &self.curve_edges {
            let tm = 0.5 * (e.tau[0] + e.tau[1]);
            let k = key(e.nodes[0], e.nodes[1]);
            let m = *mid.entry(k).or_insert_with(|| {
                nodes.push(self.pieces[e.piece].curve.eval(tm));
                nodes.len() - 1
            });
            edges.push(CurveEdge { nodes: [e.nodes[0], m], piece: e.piece, tau: [e.tau[0], tm] });
            edges.push(CurveEdge { nodes: [m, e.nodes[1]], piece: e.piece, tau: [tm, e.tau[1]] });
        }
        let mut tris = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let mut m = |p: usize, q: usize| -> usize {
                *mid.entry(key(p, q)).or_insert_with(|| {
                    nodes.push(0.5 * (self.nodes[p] + self.nodes[q]));
                    nodes.len() - 1
                })
            };
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            tris.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        TriMesh::new(nodes, tris, self.pieces.clone(), self.boundary_pieces, edges)
    }

    /// `levels` successive red refinements.
    pub fn refined(&self, levels: usize) -> Result<TriMesh> {
        let mut m = self.clone();
        for _ in 0..levels {
            m = m.refine()?;
        }
        Ok(m)
    }

    /// Mesh made of the triangles with `keep[t]`, and for each of its nodes
    /// the index of the node in `self`.
    pub fn submesh(&self, keep: &[bool]) -> Result<(TriMesh, Vec<usize>)> {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut back = Vec::new();
        let mut tris = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if !keep[t] {
                continue;
            }
            tris.push(tri.map(|v| {
                if map[v] == usize::MAX {
                    map[v] = back.len();
                    back.push(v);
                }
                map[v]
            }));
        }
        let nodes = back.iter().map(|&v| self.nodes[v]).collect();
        let edges = self
            .curve_edges
            .iter()
            .filter(|e| map[e.nodes[0]] != usize::MAX && map[e.nodes[1]] != usize::MAX)
            .map(|e| CurveEdge { nodes: e.nodes.map(|v| map[v]), ..*e })
            .collect();
        let sub = TriMesh::new(nodes, tris, self.pieces.clone(), self.pieces.len(), edges)?;
        Ok((sub, back))
    }

    /// Permutation `p` with `nodes[p[i]] = f(nodes[i])` within `tol`.
    pub fn node_map(&self, f: impl Fn(Complex64) -> Complex64, tol: f64) -> Result<Vec<usize>> {
        let cell = tol.max(1e-14) * 4.0;
        let cell_of = |z: Complex64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
        let mut hash: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &z) in self.nodes.iter().enumerate() {
            hash.entry(cell_of(z)).or_default().push(i);
        }
        self.nodes
            .iter()
            .map(|&z| {
                let w = f(z);
                let (cx, cy) = cell_of(w);
                (-1..=1)
                    .flat_map(|dx| (-1..=1).map(move |dy| (cx + dx, cy + dy)))
                    .filter_map(|c| hash.get(&c))
                    .flatten()
                    .copied()
                    .find(|&j| (self.nodes[j] - w).norm() <= tol)
                    .ok_or_else(|| Error::Mesh(format!("no node at the image ({:.6}, {:.6})", w.re, w.im)))
            })
            .collect()
    }

    pub fn locator(&self) -> Locator<'_> {
        Locator::new(self)
    }

    /// Triangles adjacent to each node.
    pub fn node_triangles(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Vec::new(); self.nodes.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &n in tri {
                v[n].push(t);
            }
        }
        v
    }

    /// Undirected edges adjacency (sorted neighbour lists).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Vec::new(); self.nodes.len()];
        for t in &self.triangles {
            for k in 0..3 {
                v[t[k]].push(t[(k + 1) % 3]);
                v[t[(k + 1) % 3]].push(t[k]);
            }
        }
        for l in &mut v {
            l.sort_unstable();
            l.dedup();
        }
        v
    }
}
