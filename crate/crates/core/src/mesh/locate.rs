use num_complex::Complex64;

use super::trimesh::{area2, TriMesh};

/// Point location by bucketing triangle bounding boxes on a uniform grid.
pub struct Locator<'a> {
    mesh: &'a TriMesh,
    origin: Complex64,
    cell: f64,
    n: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> Locator<'a> {
    pub fn new(mesh: &'a TriMesh) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
        for z in mesh.nodes() {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let side = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.0001;
        let n = ((mesh.triangles().len() as f64).sqrt()).clamp(1.0, 1024.0) as usize;
        let cell = side / n as f64;
        let mut loc = Self { mesh, origin: lo, cell, n, buckets: vec![Vec::new(); n * n] };
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let p = tri.map(|v| mesh.node(v));
            let min = Complex64::new(p.iter().map(|z| z.re).fold(f64::MAX, f64::min), p.iter().map(|z| z.im).fold(f64::MAX, f64::min));
            let max = Complex64::new(p.iter().map(|z| z.re).fold(f64::MIN, f64::max), p.iter().map(|z| z.im).fold(f64::MIN, f64::max));
            let (i0, j0) = loc.cell_of(min);
            let (i1, j1) = loc.cell_of(max);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    loc.buckets[j * n + i].push(t as u32);
                }
            }
        }
        loc
    }

    fn cell_of(&self, z: Complex64) -> (usize, usize) {
        let f = |v: f64| ((v / self.cell).floor().max(0.0) as usize).min(self.n - 1);
        (f(z.re - self.origin.re), f(z.im - self.origin.im))
    }

    /// Triangle containing `z` and the barycentric coordinates of `z` in it.
    pub fn locate(&self, z: Complex64) -> Option<(usize, [f64; 3])> {
        let (i, j) = self.cell_of(z);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for &t in &self.buckets[j * self.n + i] {
            let t = t as usize;
            let [a, b, c] = self.mesh.triangles()[t].map(|v| self.mesh.node(v));
            let total = area2(a, b, c);
            let w = [area2(z, b, c) / total, area2(a, z, c) / total, area2(a, b, z) / total];
            let worst = w.iter().copied().fold(f64::INFINITY, f64::min);
            if worst >= 0.0 {
                return Some((t, w));
            }
            if best.as_ref().is_none_or(|b| worst > b.2) {
                best = Some((t, w, worst));
            }
        }
        // Accept points on an edge up to rounding.
        best.filter(|b| b.2 > -1e-10).map(|(t, w, _)| (t, w))
    }

    /// Piecewise-linear interpolation of nodal values at `z`.
    pub fn interpolate(&self, u: &[f64], z: Complex64) -> Option<f64> {
        let (t, w) = self.locate(z)?;
        let tri = self.mesh.triangles()[t];
        Some(w[0] * u[tri[0]] + w[1] * u[tri[1]] + w[2] * u[tri[2]])
    }
}
