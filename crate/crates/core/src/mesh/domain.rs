use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::hyperbolic::{wrap_pi, Metric};
use crate::{Error, Result};

/// What a boundary or constraint piece represents; solvers map tags to data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "kebab-case")]
pub enum BoundaryTag {
    /// Side `i` of an ideal polygon.
    Side(usize),
    /// Horocycle arc truncating vertex `i` of an ideal polygon.
    Horocycle(usize),
    /// Geodesic segment carrying the large data of a half-plane problem.
    Geodesic,
    /// Outer circular arc (geodesic circle).
    Circle,
    /// Inner loop of an annulus.
    Inner,
    /// Interior constraint curve number `i`.
    Constraint(usize),
    /// Symmetry cut; only present in fundamental sectors.
    Ray,
    /// Anything else that carries Dirichlet data.
    Other,
}

/// A tagged curve piece.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub curve: Curve,
    pub tag: BoundaryTag,
}

impl Piece {
    pub fn new(curve: Curve, tag: BoundaryTag) -> Self {
        Self { curve, tag }
    }
}

/// Region to mesh: an outer loop (counter-clockwise), holes, and open or
/// closed constraint curves that the mesh must resolve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub outer: Vec<Piece>,
    pub holes: Vec<Vec<Piece>>,
    pub constraints: Vec<Vec<Piece>>,
}

const JOIN_TOL: f64 = 1e-10;

fn check_chain(pieces: &[Piece], closed: bool) -> Result<()> {
    if pieces.is_empty() {
        return Err(Error::Mesh("empty piece chain".into()));
    }
    let n = pieces.len();
    let links = if closed { n } else { n - 1 };
    for i in 0..links {
        let gap = (pieces[i].curve.end() - pieces[(i + 1) % n].curve.start()).norm();
        if gap > JOIN_TOL {
            return Err(Error::Mesh(format!("pieces {i} and {} do not join (gap {gap:.2e})", (i + 1) % n)));
        }
    }
    Ok(())
}

impl Domain {
    pub fn new(outer: Vec<Piece>) -> Result<Self> {
        check_chain(&outer, true)?;
        Ok(Self { outer, holes: Vec::new(), constraints: Vec::new() })
    }

    pub fn with_hole(mut self, hole: Vec<Piece>) -> Result<Self> {
        check_chain(&hole, true)?;
        self.holes.push(hole);
        Ok(self)
    }

    pub fn with_constraint(mut self, chain: Vec<Piece>) -> Result<Self> {
        check_chain(&chain, false)?;
        self.constraints.push(chain);
        Ok(self)
    }

    /// All pieces in a fixed global order: outer, holes, constraints.
    pub fn pieces(&self) -> Vec<Piece> {
        let mut v = self.outer.clone();
        v.extend(self.holes.iter().flatten().copied());
        v.extend(self.constraints.iter().flatten().copied());
        v
    }

    /// Number of pieces bounding the region (outer and holes).
    pub fn boundary_piece_count(&self) -> usize {
        self.outer.len() + self.holes.iter().map(Vec::len).sum::<usize>()
    }

    /// Fundamental sector `β0 ≤ arg z ≤ β1` of a domain that is star-shaped
    /// about the origin and whose outer pieces sweep the polar angle
    /// monotonically. Ray pieces are tagged [`BoundaryTag::Ray`].
    pub fn sector(&self, beta0: f64, beta1: f64) -> Result<Self> {
        if !self.holes.is_empty() || !self.constraints.is_empty() {
            return Err(Error::Mesh("sectors are only cut from simple domains".into()));
        }
        let locate = |beta: f64| -> Result<(usize, f64)> {
            for (i, p) in self.outer.iter().enumerate() {
                let a0 = p.curve.start().arg();
                let span = wrap_pi(p.curve.end().arg() - a0);
                if span <= 0.0 {
                    return Err(Error::Mesh("outer loop is not star-shaped about the origin".into()));
                }
                let off = (beta - a0).rem_euclid(std::f64::consts::TAU);
                if off <= span {
                    let (mut lo, mut hi) = (0.0, 1.0);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        let g = wrap_pi(p.curve.eval(mid).arg() - a0).rem_euclid(std::f64::consts::TAU);
                        if g < off {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        if hi - lo < 1e-16 {
                            break;
                        }
                    }
                    return Ok((i, 0.5 * (lo + hi)));
                }
            }
            Err(Error::Mesh(format!("no outer piece crosses angle {beta}")))
        };
        let (i0, t0) = locate(beta0)?;
        let (i1, t1) = locate(beta1)?;
        let origin = Complex64::new(0.0, 0.0);
        let mut out = Vec::new();
        let start = self.outer[i0].curve.eval(t0);
        out.push(Piece::new(Curve::segment(origin, start), BoundaryTag::Ray));
        let n = self.outer.len();
        let mut i = i0;
        let mut from = t0;
        loop {
            let to = if i == i1 && (i != i0 || t1 > from) { t1 } else { 1.0 };
            if to > from + 1e-15 {
                out.push(Piece::new(self.outer[i].curve.sub(from, to), self.outer[i].tag));
            }
            if i == i1 && to == t1 {
                break;
            }
            i = (i + 1) % n;
            from = 0.0;
        }
        let end = self.outer[i1].curve.eval(t1);
        out.push(Piece::new(Curve::segment(end, origin), BoundaryTag::Ray));
        Domain::new(out)
    }
}

/// Target chart edge length as a function of position.
#[derive(Clone)]
pub enum Sizing {
    /// Constant chart spacing.
    Uniform(f64),
    /// Constant spacing `h` in the hyperbolic metric.
    Hyperbolic { metric: Metric, h: f64 },
    /// Spacing `h·|z|`, uniform in log-polar coordinates, floored at `min`.
    LogPolar { h: f64, min: f64 },
    Custom(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Sizing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sizing::Uniform(h) => write!(f, "Uniform({h})"),
            Sizing::Hyperbolic { metric, h } => write!(f, "Hyperbolic(κ={}, h={h})", metric.kappa()),
            Sizing::LogPolar { h, min } => write!(f, "LogPolar(h={h}, min={min})"),
            Sizing::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Sizing {
    pub fn at(&self, z: Complex64) -> f64 {
        match self {
            Sizing::Uniform(h) => *h,
            Sizing::Hyperbolic { metric, h } => h / metric.conformal_factor(z),
            Sizing::LogPolar { h, min } => (h * z.norm()).max(*min),
            Sizing::Custom(f) => f(z),
        }
    }
}

/// Exact symmetry imposed on the mesh by meshing a fundamental sector and
/// replicating it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Reflections across the lines at angles `β0 + kπ/m` and rotations by `2π/m`.
    Dihedral { m: usize, beta0: f64 },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64) -> Vec<Piece> {
        (0..4)
            .map(|k| {
                let a = k as f64 * std::f64::consts::FRAC_PI_2;
                Piece::new(
                    Curve::arc(Complex64::new(0.0, 0.0), r, a, a + std::f64::consts::FRAC_PI_2),
                    BoundaryTag::Circle,
                )
            })
            .collect()
    }

    #[test]
    fn sector_of_a_disk() {
        let d = Domain::new(circle(0.5)).unwrap();
        let s = d.sector(0.3, 0.3 + std::f64::consts::FRAC_PI_4 * 3.0).unwrap();
        assert_eq!(s.outer.first().unwrap().tag, BoundaryTag::Ray);
        assert_eq!(s.outer.last().unwrap().tag, BoundaryTag::Ray);
        assert_eq!(s.outer.len(), 4);
        let z = s.outer[1].curve.start();
        assert!((z.arg() - 0.3).abs() < 1e-12 && (z.norm() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn broken_chain_is_rejected() {
        let mut c = circle(0.5);
        c.pop();
        assert!(Domain::new(c).is_err());
    }
}
