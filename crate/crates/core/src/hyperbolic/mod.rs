//! Exact geometry of the Poincaré disk with constant curvature `κ < 0`.
//!
//! The chart is the open unit disk with length element
//! `2/√(−κ) · |dz| / (1 − |z|²)`. Everything here is closed form; the
//! numerical modules downstream use these functions as their ground truth.

mod fermi;
mod geodesic;
mod horocycle;
mod metric;
mod points;

pub use fermi::{FermiChart, FermiProfile};
pub use geodesic::{ChartCurve, Geodesic};
pub use horocycle::Horocycle;
pub use metric::Metric;
pub use points::{Endpoint, IdealPoint, SurfacePoint};

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Disk automorphisms moving a chosen point to and from the origin.
pub mod mobius {
    use num_complex::Complex64;

    /// `T_a(z) = (z − a)/(1 − ā z)`, sending `a` to the origin.
    pub fn to_origin(a: Complex64, z: Complex64) -> Complex64 {
        (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    /// Inverse of [`to_origin`].
    pub fn from_origin(a: Complex64, w: Complex64) -> Complex64 {
        (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let mut r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_tau(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counter-clockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_gap(from: f64, to: f64) -> f64 {
    wrap_tau(to - from)
}

pub(crate) fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
