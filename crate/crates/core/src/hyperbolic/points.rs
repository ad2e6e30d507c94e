use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{unit, wrap_tau};
use crate::{Error, Result};

/// A point of the surface, stored by its chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct SurfacePoint {
    x: f64,
    y: f64,
}

impl SurfacePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || x * x + y * y >= 1.0 {
            return Err(Error::OutsideDisk { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn from_chart(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub const fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    /// Point at chart radius `r < 1` in direction `theta`.
    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::from_chart(Complex64::from_polar(r, theta))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn chart(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// `1 − |z|²`, the quantity every conformal computation divides by.
    pub fn deficit(&self) -> f64 {
        1.0 - self.x * self.x - self.y * self.y
    }
}

impl TryFrom<[f64; 2]> for SurfacePoint {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<SurfacePoint> for [f64; 2] {
    fn from(p: SurfacePoint) -> Self {
        [p.x, p.y]
    }
}

/// A point of the ideal boundary, given by its chart angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct IdealPoint {
    theta: f64,
}

impl IdealPoint {
    /// Any finite angle is accepted and reduced to its canonical representative.
    pub fn new(theta: f64) -> Self {
        debug_assert!(theta.is_finite());
        Self { theta: wrap_tau(theta) }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The point on the unit circle representing this ideal point.
    pub fn chart(&self) -> Complex64 {
        unit(self.theta)
    }

    pub fn reflect(&self, axis: f64) -> Self {
        Self::new(2.0 * axis - self.theta)
    }
}

impl From<f64> for IdealPoint {
    fn from(theta: f64) -> Self {
        Self::new(theta)
    }
}

impl From<IdealPoint> for f64 {
    fn from(p: IdealPoint) -> Self {
        p.theta
    }
}

/// Either a surface point or an ideal point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Endpoint {
    Finite(SurfacePoint),
    Ideal(IdealPoint),
}

impl Endpoint {
    pub fn chart(&self) -> Complex64 {
        match self {
            Endpoint::Finite(p) => p.chart(),
            Endpoint::Ideal(xi) => xi.chart(),
        }
    }
}

impl From<SurfacePoint> for Endpoint {
    fn from(p: SurfacePoint) -> Self {
        Endpoint::Finite(p)
    }
}

impl From<IdealPoint> for Endpoint {
    fn from(p: IdealPoint) -> Self {
        Endpoint::Ideal(p)
    }
}
