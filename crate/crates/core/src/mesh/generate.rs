use std::collections::HashMap;

use num_complex::Complex64;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::curve::Curve;
use super::domain::{Domain, Piece, Sizing, Symmetry};
use super::trimesh::{CurveEdge, TriMesh};
use crate::{Error, Result};

/// Mesh generation controls.
#[derive(Clone, Debug)]
pub struct MeshOptions {
    pub sizing: Sizing,
    /// Rounds of optimal-Delaunay smoothing of interior nodes.
    pub smoothing: usize,
    pub symmetry: Option<Symmetry>,
    /// Generation fails when the smallest chart angle drops below this (degrees).
    pub min_angle: f64,
    /// Upper bound on the node count, guarding against sizing mistakes.
    pub max_nodes: usize,
}

impl MeshOptions {
    pub fn new(sizing: Sizing) -> Self {
        Self { sizing, smoothing: 8, symmetry: None, min_angle: 15.0, max_nodes: 2_000_000 }
    }

    pub fn with_symmetry(mut self, s: Symmetry) -> Self {
        self.symmetry = Some(s);
        self
    }
}

/// Triangulate `domain` with curve-conforming boundaries.
pub fn generate(domain: &Domain, opts: &MeshOptions) -> Result<TriMesh> {
    match opts.symmetry {
        None => generate_plain(domain, opts),
        Some(Symmetry::Dihedral { m, beta0 }) => generate_dihedral(domain, opts, m, beta0),
    }
}

/// Spacing function clamped away from zero so that it stays usable outside
/// the region (hyperbolic sizing vanishes at the ideal boundary).
struct Spacing<'a> {
    sizing: &'a Sizing,
    floor: f64,
}

impl Spacing<'_> {
    fn new<'a>(sizing: &'a Sizing, pieces: &[Piece]) -> Result<Spacing<'a>> {
        let mut floor = f64::INFINITY;
        for p in pieces {
            for j in 0..=32 {
                let h = sizing.at(p.curve.eval(j as f64 / 32.0));
                if h.is_finite() && h > 0.0 {
                    floor = floor.min(h);
                }
            }
        }
        if !floor.is_finite() {
            return Err(Error::Mesh("sizing is not positive on the boundary".into()));
        }
        Ok(Spacing { sizing, floor: 0.5 * floor })
    }

    fn at(&self, z: Complex64) -> f64 {
        let h = self.sizing.at(z);
        if h.is_finite() && h > self.floor {
            h
        } else {
            self.floor
        }
    }
}

/// Parameters splitting `curve` into pieces of roughly unit `∫ |dz|/h`.
fn discretize(curve: &Curve, spacing: &Spacing) -> Vec<f64> {
    let speed = curve.speed();
    let rho = |t: f64| speed / spacing.at(curve.eval(t));
    let mut ts = vec![0.0];
    let mut cum = vec![0.0];
    let mut t = 0.0;
    while t < 1.0 {
        let r0 = rho(t);
        let dt = (0.05 / r0).min(1.0 / 64.0).min(1.0 - t);
        let r1 = rho(t + dt);
        let rm = rho(t + 0.5 * dt);
        t += dt;
        cum.push(cum.last().unwrap() + dt * (r0 + 4.0 * rm + r1) / 6.0);
        ts.push(t);
    }
    let total = *cum.last().unwrap();
    let n = (total.ceil() as usize).max(1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut k = 0;
    for j in 1..n {
        let target = total * j as f64 / n as f64;
        while cum[k + 1] < target {
            k += 1;
        }
        let w = (target - cum[k]) / (cum[k + 1] - cum[k]);
        out.push(ts[k] + w * (ts[k + 1] - ts[k]));
    }
    out.push(1.0);
    out
}

/// Uniform bucket grid of segments for distance and point-in-region queries.
struct SegmentGrid {
    origin: Complex64,
    cell: f64,
    n: usize,
    buckets: Vec<Vec<usize>>,
    segs: Vec<(Complex64, Complex64)>,
    /// Segments that bound the region, for parity tests.
    walls: Vec<bool>,
}

impl SegmentGrid {
    fn new(segs: Vec<(Complex64, Complex64)>, walls: Vec<bool>) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
        for &(a, b) in &segs {
            for z in [a, b] {
                lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
                hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
            }
        }
        let side = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.001;
        let n = ((segs.len() as f64).sqrt() * 2.0).clamp(16.0, 512.0) as usize;
        let cell = side / n as f64;
        let mut g = Self { origin: lo, cell, n, buckets: vec![Vec::new(); n * n], segs, walls };
        for (k, &(a, b)) in g.segs.iter().enumerate() {
            let (i0, j0) = g.cell_of(Complex64::new(a.re.min(b.re), a.im.min(b.im)));
            let (i1, j1) = g.cell_of(Complex64::new(a.re.max(b.re), a.im.max(b.im)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    g.buckets[j * n + i].push(k);
                }
            }
        }
        g
    }

    fn cell_of(&self, z: Complex64) -> (usize, usize) {
        let f = |v: f64| ((v / self.cell).floor().max(0.0) as usize).min(self.n - 1);
        (f(z.re - self.origin.re), f(z.im - self.origin.im))
    }

    /// Distance to the nearest segment within `r`, or infinity.
    fn min_dist(&self, z: Complex64, r: f64) -> f64 {
        let (i0, j0) = self.cell_of(z - Complex64::new(r, r));
        let (i1, j1) = self.cell_of(z + Complex64::new(r, r));
        let mut best = f64::INFINITY;
        for j in j0..=j1 {
            for i in i0..=i1 {
                for &k in &self.buckets[j * self.n + i] {
                    let (a, b) = self.segs[k];
                    best = best.min(seg_dist(z, a, b));
                }
            }
        }
        if best <= r {
            best
        } else {
            f64::INFINITY
        }
    }

    /// Even-odd test against the wall segments.
    fn inside(&self, z: Complex64) -> bool {
        let (i0, j) = self.cell_of(z);
        if z.im < self.origin.im || z.im > self.origin.im + self.cell * self.n as f64 {
            return false;
        }
        let mut parity = false;
        for i in i0..self.n {
            let x0 = self.origin.re + self.cell * i as f64;
            let x1 = x0 + self.cell;
            let (x0, x1) = (if i == i0 { f64::MIN } else { x0 }, if i + 1 == self.n { f64::MAX } else { x1 });
            for &k in &self.buckets[j * self.n + i] {
                if !self.walls[k] {
                    continue;
                }
                let (a, b) = self.segs[k];
                if (a.im > z.im) != (b.im > z.im) {
                    let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
                    if x > z.re && x >= x0 && x < x1 {
                        parity = !parity;
                    }
                }
            }
        }
        parity
    }
}

fn seg_dist(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    let t = if l2 == 0.0 { 0.0 } else { (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0) };
    (a + d * t - z).norm()
}

fn circumcenter(a: Complex64, b: Complex64, c: Complex64) -> Option<Complex64> {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * (ab.re * ac.im - ab.im * ac.re);
    if d.abs() < 1e-300 {
        return None;
    }
    let (b2, c2) = (ab.norm_sqr(), ac.norm_sqr());
    Some(a + Complex64::new((ac.im * b2 - ab.im * c2) / d, (ab.re * c2 - ac.re * b2) / d))
}

fn area2(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).re * (c - a).im - (b - a).im * (c - a).re
}

struct Boundary {
    nodes: Vec<Complex64>,
    edges: Vec<CurveEdge>,
}

/// Discretize every piece, sharing nodes at piece endpoints.
fn discretize_pieces(pieces: &[Piece], spacing: &Spacing) -> Boundary {
    let mut nodes: Vec<Complex64> = Vec::new();
    let mut ends: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    let mut endpoint = |z: Complex64, nodes: &mut Vec<Complex64>| -> usize {
        if let Some(&i) = ends.iter().find(|&&i| (nodes[i] - z).norm() < 1e-10) {
            return i;
        }
        nodes.push(z);
        ends.push(nodes.len() - 1);
        nodes.len() - 1
    };
    for (p, piece) in pieces.iter().enumerate() {
        let ts = discretize(&piece.curve, spacing);
        let first = endpoint(piece.curve.start(), &mut nodes);
        let last = endpoint(piece.curve.end(), &mut nodes);
        let mut ids = vec![first];
        for &t in &ts[1..ts.len() - 1] {
            nodes.push(piece.curve.eval(t));
            ids.push(nodes.len() - 1);
        }
        ids.push(last);
        for k in 0..ids.len() - 1 {
            edges.push(CurveEdge { nodes: [ids[k], ids[k + 1]], piece: p, tau: [ts[k], ts[k + 1]] });
        }
    }
    Boundary { nodes, edges }
}

fn seed_interior(grid: &SegmentGrid, spacing: &Spacing, max_nodes: usize) -> Result<Vec<Complex64>> {
    let side = grid.cell * grid.n as f64;
    let mut stack = vec![(grid.origin + Complex64::new(0.5 * side, 0.5 * side), 0.5 * side, 0u32)];
    let mut seeds = Vec::new();
    while let Some((c, half, depth)) = stack.pop() {
        let h = spacing.at(c);
        let straddles = grid.min_dist(c, half * std::f64::consts::SQRT_2).is_finite();
        if !straddles && !grid.inside(c) {
            continue;
        }
        if 2.0 * half > h && depth < 30 {
            let q = 0.5 * half;
            for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
                stack.push((c + Complex64::new(dx, dy), q, depth + 1));
            }
        } else if grid.inside(c) && !grid.min_dist(c, 0.6 * h).is_finite() {
            seeds.push(c);
            if seeds.len() > max_nodes {
                return Err(Error::Mesh(format!("more than {max_nodes} nodes requested; sizing too fine")));
            }
        }
    }
    Ok(seeds)
}

/// Constrained Delaunay triangulation restricted to the region.
fn triangulate(nodes: &[Complex64], edges: &[CurveEdge], grid: &SegmentGrid) -> Result<Vec<[usize; 3]>> {
    let verts: Vec<Point2<f64>> = nodes.iter().map(|z| Point2::new(z.re, z.im)).collect();
    let cons: Vec<[usize; 2]> = edges.iter().map(|e| e.nodes).collect();
    let mut conflicts = 0usize;
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::try_bulk_load_cdt(verts, cons, |_| conflicts += 1)
        .map_err(|e| Error::Mesh(format!("triangulation failed: {e:?}")))?;
    if conflicts > 0 {
        return Err(Error::Mesh(format!("{conflicts} boundary edges intersect; resolution too coarse")));
    }
    if cdt.num_vertices() != nodes.len() {
        return Err(Error::Mesh("coincident nodes; resolution too coarse".into()));
    }
    let mut tris = Vec::new();
    for f in cdt.inner_faces() {
        let t = f.vertices().map(|v| v.fix().index());
        let (a, b, c) = (nodes[t[0]], nodes[t[1]], nodes[t[2]]);
        // Near-collinear boundary nodes can leave slivers straddling the wall.
        let longest = (a - b).norm_sqr().max((b - c).norm_sqr()).max((c - a).norm_sqr());
        if area2(a, b, c).abs() <= 1e-9 * longest {
            continue;
        }
        if grid.inside((a + b + c) / 3.0) {
            tris.push(if area2(a, b, c) > 0.0 { t } else { [t[0], t[2], t[1]] });
        }
    }
    Ok(tris)
}

fn odt_step(nodes: &mut [Complex64], fixed: usize, tris: &[[usize; 3]], grid: &SegmentGrid, spacing: &Spacing) {
    let mut acc = vec![(Complex64::new(0.0, 0.0), 0.0); nodes.len()];
    for t in tris {
        let (a, b, c) = (nodes[t[0]], nodes[t[1]], nodes[t[2]]);
        let g = (a + b + c) / 3.0;
        let h = spacing.at(g);
        let w = 0.5 * area2(a, b, c).abs() / (h * h);
        let cc = circumcenter(a, b, c).filter(|&z| grid.inside(z)).unwrap_or(g);
        for &v in t {
            acc[v].0 += cc * w;
            acc[v].1 += w;
        }
    }
    for v in fixed..nodes.len() {
        let (s, w) = acc[v];
        if w <= 0.0 {
            continue;
        }
        let z = s / w;
        let h = spacing.at(z);
        if grid.inside(z) && !grid.min_dist(z, 0.3 * h).is_finite() {
            nodes[v] = z;
        }
    }
}

fn generate_plain(domain: &Domain, opts: &MeshOptions) -> Result<TriMesh> {
    let pieces = domain.pieces();
    let spacing = Spacing::new(&opts.sizing, &pieces)?;
    let Boundary { mut nodes, edges } = discretize_pieces(&pieces, &spacing);
    let nb = domain.boundary_piece_count();
    let segs: Vec<_> = edges.iter().map(|e| (nodes[e.nodes[0]], nodes[e.nodes[1]])).collect();
    let walls: Vec<bool> = edges.iter().map(|e| e.piece < nb).collect();
    let grid = SegmentGrid::new(segs, walls);
    let fixed = nodes.len();
    nodes.extend(seed_interior(&grid, &spacing, opts.max_nodes)?);
    let mut tris = triangulate(&nodes, &edges, &grid)?;
    for _ in 0..opts.smoothing {
        odt_step(&mut nodes, fixed, &tris, &grid, &spacing);
        tris = triangulate(&nodes, &edges, &grid)?;
    }
    let mesh = compact(nodes, tris, pieces, nb, edges)?;
    audit(&mesh, opts)?;
    Ok(mesh)
}

fn audit(mesh: &TriMesh, opts: &MeshOptions) -> Result<()> {
    let worst = mesh.min_angle_deg();
    if worst < opts.min_angle {
        return Err(Error::Mesh(format!("smallest angle {worst:.2}° is below {:.1}°", opts.min_angle)));
    }
    if mesh.nodes().iter().any(|z| z.norm() >= 1.0) {
        return Err(Error::Mesh("node outside the unit disk".into()));
    }
    Ok(())
}

/// Drop unreferenced nodes and renumber.
fn compact(
    nodes: Vec<Complex64>,
    tris: Vec<[usize; 3]>,
    pieces: Vec<Piece>,
    nb: usize,
    edges: Vec<CurveEdge>,
) -> Result<TriMesh> {
    let mut map = vec![usize::MAX; nodes.len()];
    let mut out = Vec::new();
    for t in &tris {
        for &v in t {
            if map[v] == usize::MAX {
                map[v] = out.len();
                out.push(nodes[v]);
            }
        }
    }
    // Keep a stable, position-independent order: boundary nodes first as discretized.
    let tris = tris.iter().map(|t| t.map(|v| map[v])).collect();
    let edges = edges
        .into_iter()
        .filter(|e| map[e.nodes[0]] != usize::MAX && map[e.nodes[1]] != usize::MAX)
        .map(|e| CurveEdge { nodes: e.nodes.map(|v| map[v]), ..e })
        .collect();
    TriMesh::new(out, tris, pieces, nb, edges)
}

/// Spatial hash merging nodes closer than the quantum.
struct NodeMerger {
    q: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
    nodes: Vec<Complex64>,
}

impl NodeMerger {
    fn insert(&mut self, z: Complex64) -> usize {
        let key = ((z.re / self.q).floor() as i64, (z.im / self.q).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.map.get(&(key.0 + dx, key.1 + dy)) {
                    if let Some(&i) = ids.iter().find(|&&i| (self.nodes[i] - z).norm() < self.q) {
                        return i;
                    }
                }
            }
        }
        self.nodes.push(z);
        self.map.entry(key).or_default().push(self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}

fn generate_dihedral(domain: &Domain, opts: &MeshOptions, m: usize, beta0: f64) -> Result<TriMesh> {
    if m == 0 {
        return Err(Error::Mesh("symmetry order must be positive".into()));
    }
    let wedge = std::f64::consts::PI / m as f64;
    let sector = domain.sector(beta0, beta0 + wedge)?;
    let base = generate_plain(&sector, &MeshOptions { symmetry: None, ..opts.clone() })?;
    let mirror_rot = Complex64::from_polar(1.0, 2.0 * (beta0 + wedge));
    let mut merger = NodeMerger { q: 1e-10, map: HashMap::new(), nodes: Vec::new() };
    let mut tris = Vec::new();
    for j in 0..m {
        let rot = Complex64::from_polar(1.0, 2.0 * wedge * j as f64);
        for mirror in [false, true] {
            let ids: Vec<usize> = base
                .nodes()
                .iter()
                .map(|&z| merger.insert(if mirror { rot * mirror_rot * z.conj() } else { rot * z }))
                .collect();
            for t in base.triangles() {
                let t = t.map(|v| ids[v]);
                tris.push(if mirror { [t[0], t[2], t[1]] } else { t });
            }
        }
    }
    let nodes = merger.nodes;
    let pieces = domain.pieces();
    let nb = domain.boundary_piece_count();
    let edges = attach_boundary(&nodes, &tris, &pieces[..nb])?;
    let mesh = TriMesh::new(nodes, tris, pieces, nb, edges)?;
    audit(&mesh, opts)?;
    Ok(mesh)
}

/// Recover curve parameters for every topological boundary edge.
fn attach_boundary(nodes: &[Complex64], tris: &[[usize; 3]], pieces: &[Piece]) -> Result<Vec<CurveEdge>> {
    let mut count: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for t in tris {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let e = count.entry((a.min(b), a.max(b))).or_insert((0, 0));
            e.0 += 1;
            e.1 = a;
        }
    }
    let mut keys: Vec<_> = count.iter().filter(|(_, v)| v.0 == 1).map(|(k, v)| (*k, v.1)).collect();
    keys.sort_unstable();
    let mut edges = Vec::with_capacity(keys.len());
    for ((lo, hi), first) in keys {
        let (a, b) = if first == lo { (lo, hi) } else { (hi, lo) };
        let found = pieces.iter().enumerate().find_map(|(p, piece)| {
            let (ta, da) = piece.curve.project(nodes[a]);
            let (tb, db) = piece.curve.project(nodes[b]);
            let ok = |t: f64, d: f64| d < 1e-9 && (-1e-9..=1.0 + 1e-9).contains(&t);
            (ok(ta, da) && ok(tb, db)).then(|| CurveEdge { nodes: [a, b], piece: p, tau: [ta.clamp(0.0, 1.0), tb.clamp(0.0, 1.0)] })
        });
        edges.push(found.ok_or_else(|| Error::Mesh(format!("boundary edge ({a}, {b}) lies on no piece")))?);
    }
    Ok(edges)
}
