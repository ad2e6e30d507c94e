use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::wrap_pi;
use crate::{Error, Result};

/// A chart curve piece: straight segment or circular arc, parametrised by
/// `τ ∈ [0, 1]` (linear in chart length for segments, in angle for arcs).
///
/// Every boundary curve the crate meshes (geodesics, equidistants,
/// horocycles, geodesic circles) is a chart circle or line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    Segment { a: [f64; 2], b: [f64; 2] },
    Arc { center: [f64; 2], radius: f64, angle0: f64, angle1: f64 },
}

fn c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn arr(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Curve {
    pub fn segment(a: Complex64, b: Complex64) -> Self {
        Curve::Segment { a: arr(a), b: arr(b) }
    }

    pub fn arc(center: Complex64, radius: f64, angle0: f64, angle1: f64) -> Self {
        Curve::Arc { center: arr(center), radius, angle0, angle1 }
    }

    /// The circle arc (or segment, when collinear) from `a` through `m` to `b`.
    pub fn through(a: Complex64, m: Complex64, b: Complex64) -> Result<Self> {
        let (ab, am) = (b - a, m - a);
        let cross = ab.re * am.im - ab.im * am.re;
        let scale = ab.norm() * am.norm();
        if scale == 0.0 {
            return Err(Error::Mesh("curve through coincident points".into()));
        }
        if cross.abs() <= 1e-12 * scale {
            return Ok(Self::segment(a, b));
        }
        // Circumcenter of a, m, b.
        let d = 2.0 * cross;
        let (ab2, am2) = (ab.norm_sqr(), am.norm_sqr());
        let ux = (am.im * ab2 - ab.im * am2) / d;
        let uy = (ab.re * am2 - am.re * ab2) / d;
        let center = a + Complex64::new(ux, uy);
        let radius = (a - center).norm();
        let tau = std::f64::consts::TAU;
        let t0 = (a - center).arg();
        let gm = ((m - center).arg() - t0).rem_euclid(tau);
        let gb = ((b - center).arg() - t0).rem_euclid(tau);
        // Counter-clockwise from a reaches m before b, or the arc runs clockwise.
        let sweep = if gm < gb { gb } else { gb - tau };
        Ok(Self::arc(center, radius, t0, t0 + sweep))
    }

    pub fn eval(&self, tau: f64) -> Complex64 {
        match *self {
            Curve::Segment { a, b } => c(a) + (c(b) - c(a)) * tau,
            Curve::Arc { center, radius, angle0, angle1 } => {
                c(center) + Complex64::from_polar(radius, angle0 + (angle1 - angle0) * tau)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.eval(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.eval(1.0)
    }

    /// Chart speed `|dz/dτ|` (constant along each piece).
    pub fn speed(&self) -> f64 {
        match *self {
            Curve::Segment { a, b } => (c(b) - c(a)).norm(),
            Curve::Arc { radius, angle0, angle1, .. } => radius * (angle1 - angle0).abs(),
        }
    }

    /// The piece restricted to `[t0, t1]` and reparametrised over `[0, 1]`.
    pub fn sub(&self, t0: f64, t1: f64) -> Self {
        match *self {
            Curve::Segment { .. } => Self::segment(self.eval(t0), self.eval(t1)),
            Curve::Arc { center, radius, angle0, angle1 } => Curve::Arc {
                center,
                radius,
                angle0: angle0 + (angle1 - angle0) * t0,
                angle1: angle0 + (angle1 - angle0) * t1,
            },
        }
    }

    pub fn reversed(&self) -> Self {
        self.sub(1.0, 0.0)
    }

    /// Parameter of the closest point of the (unclamped) carrier, and the
    /// chart distance from `z` to the clamped piece.
    pub fn project(&self, z: Complex64) -> (f64, f64) {
        let tau = match *self {
            Curve::Segment { a, b } => {
                let d = c(b) - c(a);
                ((z - c(a)) * d.conj()).re / d.norm_sqr()
            }
            Curve::Arc { center, angle0, angle1, .. } => {
                let mid = 0.5 * (angle0 + angle1);
                let delta = wrap_pi((z - c(center)).arg() - mid);
                0.5 + delta / (angle1 - angle0)
            }
        };
        let clamped = tau.clamp(0.0, 1.0);
        (tau, (self.eval(clamped) - z).norm())
    }

    /// Same carrier under a chart map `z ↦ rot·z` (`|rot| = 1`), or its
    /// mirror image `z ↦ rot·z̄` when `mirror` is set.
    pub fn transformed(&self, rot: Complex64, mirror: bool) -> Self {
        let f = |z: Complex64| if mirror { rot * z.conj() } else { rot * z };
        match *self {
            Curve::Segment { a, b } => Self::segment(f(c(a)), f(c(b))),
            Curve::Arc { center, radius, angle0, angle1 } => {
                let r = rot.arg();
                let (a0, a1) = if mirror { (r - angle0, r - angle1) } else { (r + angle0, r + angle1) };
                Curve::Arc { center: arr(f(c(center))), radius, angle0: a0, angle1: a1 }
            }
        }
    }
}
