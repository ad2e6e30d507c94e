use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mobius::{from_origin, to_origin};
use super::{unit, wrap_tau, Endpoint, Geodesic, Horocycle, IdealPoint, SurfacePoint};
use crate::{Error, Result};

/// The constant-curvature disk model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Metric {
    kappa: f64,
}

impl Default for Metric {
    fn default() -> Self {
        Self::hyperbolic()
    }
}

impl TryFrom<f64> for Metric {
    type Error = Error;
    fn try_from(kappa: f64) -> Result<Self> {
        Self::new(kappa)
    }
}

impl From<Metric> for f64 {
    fn from(m: Metric) -> f64 {
        m.kappa
    }
}

impl Metric {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa < 0.0) {
            return Err(Error::InvalidCurvature(kappa));
        }
        Ok(Self { kappa })
    }

    /// Curvature −1.
    pub const fn hyperbolic() -> Self {
        Self { kappa: -1.0 }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `k = √(−κ)`; distances scale as `1/k`.
    pub fn k(&self) -> f64 {
        (-self.kappa).sqrt()
    }

    /// Conformal factor `λ(z) = 2/(k(1 − |z|²))` at a chart position.
    pub fn conformal_factor(&self, z: Complex64) -> f64 {
        2.0 / (self.k() * (1.0 - z.norm_sqr()))
    }

    /// Chart radius of the point at distance `d` from the origin.
    pub fn chart_radius(&self, d: f64) -> f64 {
        (0.5 * self.k() * d).tanh()
    }

    /// Distance from the origin of a point at chart radius `r`.
    pub fn radius_to_distance(&self, r: f64) -> f64 {
        2.0 * r.atanh() / self.k()
    }

    pub fn distance(&self, p: SurfacePoint, q: SurfacePoint) -> f64 {
        let delta = 2.0 * (p.chart() - q.chart()).norm_sqr() / (p.deficit() * q.deficit());
        (delta + (delta * (2.0 + delta)).sqrt()).ln_1p() / self.k()
    }

    /// Busemann function of `xi`, normalised to vanish at the chart origin.
    pub fn busemann(&self, xi: IdealPoint, p: SurfacePoint) -> f64 {
        ((xi.chart() - p.chart()).norm_sqr() / p.deficit()).ln() / self.k()
    }

    /// Oriented distance: `d(c,b) − d(a,b)` for finite `b`, `B_b(c) − B_b(a)` for ideal `b`.
    pub fn oriented_d(&self, a: SurfacePoint, b: Endpoint, c: SurfacePoint) -> f64 {
        match b {
            Endpoint::Finite(b) => self.distance(c, b) - self.distance(a, b),
            Endpoint::Ideal(xi) => self.busemann(xi, c) - self.busemann(xi, a),
        }
    }

    /// `(2/k)·log(|ξ₁ − ξ₂|/2)`: the signed distance between the two horocycles
    /// through the origin at `x` and `y`.
    pub fn ideal_chord(&self, x: IdealPoint, y: IdealPoint) -> f64 {
        let half = (0.5 * (x.theta() - y.theta())).sin().abs();
        2.0 * half.ln() / self.k()
    }

    /// Signed gap between two horocycles along the geodesic joining their
    /// ideal points. Negative when the horodisks overlap.
    pub fn dist_horocycles(&self, h1: &Horocycle, h2: &Horocycle) -> Result<f64> {
        if h1.xi() == h2.xi() {
            return Err(Error::ConcentricHorocycles { gap: self.concentric_gap(h1, h2) });
        }
        let g = self.geodesic_between(h1.xi().into(), h2.xi().into())?;
        let m = g.point_at(0.0)?;
        Ok(h1.level() + h2.level() + self.busemann(h1.xi(), m) + self.busemann(h2.xi(), m))
    }

    /// Distance between two horocycles sharing an ideal point.
    pub fn concentric_gap(&self, h1: &Horocycle, h2: &Horocycle) -> f64 {
        (h1.level() - h2.level()).abs()
    }

    /// Angle at `p0` of the unit vector whose geodesic ray ends at `xi`.
    pub fn angle_of(&self, p0: SurfacePoint, xi: IdealPoint) -> f64 {
        wrap_tau(to_origin(p0.chart(), xi.chart()).arg())
    }

    /// Endpoint of the geodesic ray leaving `p0` at angle `alpha`.
    pub fn ideal_at_angle(&self, p0: SurfacePoint, alpha: f64) -> IdealPoint {
        IdealPoint::new(from_origin(p0.chart(), unit(alpha)).arg())
    }

    /// The oriented geodesic from `a` to `b`.
    pub fn geodesic_between(&self, a: Endpoint, b: Endpoint) -> Result<Geodesic> {
        Geodesic::between(*self, a, b)
    }

    /// Gauss curvature of the chart metric from fourth-order finite
    /// differences of `log λ`; used to check the model against `κ`.
    pub fn curvature_fd(&self, p: SurfacePoint) -> f64 {
        let z = p.chart();
        let h = 1e-2 * (1.0 - z.norm());
        let f = |dz: Complex64| self.conformal_factor(z + dz).ln();
        let second = |e: Complex64| {
            (-f(e * 2.0 * h) + 16.0 * f(e * h) - 30.0 * f(Complex64::new(0.0, 0.0)) + 16.0 * f(-e * h)
                - f(-e * 2.0 * h))
                / (12.0 * h * h)
        };
        let lap = second(Complex64::new(1.0, 0.0)) + second(Complex64::new(0.0, 1.0));
        -lap / self.conformal_factor(z).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn distance_along_diameter_matches_quadrature() {
        let m = Metric::hyperbolic();
        let d = m.distance(SurfacePoint::origin(), SurfacePoint::new(0.5, 0.0).unwrap());
        // Simpson rule on the length element 2/(1−x²) over [0, 0.5].
        let n = 2000;
        let h = 0.5 / n as f64;
        let f = |x: f64| 2.0 / (1.0 - x * x);
        let mut s = f(0.0) + f(0.5);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let oracle = s * h / 3.0;
        assert_abs_diff_eq!(d, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(d, 1.0986122886681098, epsilon = 1e-12);
    }

    #[test]
    fn distance_is_scaled_by_curvature() {
        let p = SurfacePoint::new(0.3, -0.2).unwrap();
        let q = SurfacePoint::new(-0.6, 0.1).unwrap();
        let d1 = Metric::hyperbolic().distance(p, q);
        let d4 = Metric::new(-4.0).unwrap().distance(p, q);
        assert_abs_diff_eq!(d1, 2.0 * d4, epsilon = 1e-13);
    }

    #[test]
    fn busemann_matches_limit_definition() {
        let m = Metric::hyperbolic();
        let xi = IdealPoint::new(0.0);
        // d(p, γ(t)) − t with 1 − |γ(t)|² = sech²(t/2) kept exact, so the
        // oracle stays accurate far out along the ray.
        let limit = |p: SurfacePoint, t: f64| {
            let r = (0.5 * t).tanh();
            let deficit_q = (0.5 * t).cosh().powi(-2);
            let chord = (p.chart() - Complex64::new(r, 0.0)).norm_sqr();
            let cosh_d = 1.0 + 2.0 * chord / (p.deficit() * deficit_q);
            (cosh_d + (cosh_d * cosh_d - 1.0).sqrt()).ln() - t
        };
        for p in [SurfacePoint::new(0.5, 0.0).unwrap(), SurfacePoint::new(0.2, 0.3).unwrap()] {
            let (b30, b40) = (limit(p, 30.0), limit(p, 40.0));
            assert_abs_diff_eq!(b30, b40, epsilon = 1e-9);
            assert_abs_diff_eq!(m.busemann(xi, p), b40, epsilon = 1e-9);
        }
        let p = SurfacePoint::new(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(m.busemann(xi, p), -1.0986122886681098, epsilon = 1e-12);
    }

    #[test]
    fn busemann_is_minus_arclength_toward_xi() {
        let m = Metric::new(-2.0).unwrap();
        let xi = IdealPoint::new(1.1);
        for s in [0.1, 0.7, 2.5, 6.0] {
            let p = SurfacePoint::polar(m.chart_radius(s), 1.1).unwrap();
            assert_abs_diff_eq!(m.busemann(xi, p), -s, epsilon = 1e-10);
        }
        assert_eq!(m.busemann(xi, SurfacePoint::origin()), 0.0);
    }

    #[test]
    fn curvature_of_chart_metric() {
        for kappa in [-0.5, -1.0, -3.0] {
            let m = Metric::new(kappa).unwrap();
            for (x, y) in [(0.0, 0.0), (0.3, 0.4), (-0.7, 0.1), (0.0, -0.85)] {
                let k = m.curvature_fd(SurfacePoint::new(x, y).unwrap());
                assert_abs_diff_eq!(k, kappa, epsilon = 1e-6 * kappa.abs());
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(Metric::new(0.0).is_err());
        assert!(Metric::new(f64::NAN).is_err());
        assert!(SurfacePoint::new(1.0, 0.0).is_err());
        assert!(SurfacePoint::new(0.8, 0.6).is_err());
    }

    #[test]
    fn angle_round_trip() {
        let m = Metric::hyperbolic();
        let p0 = SurfacePoint::new(0.4, -0.3).unwrap();
        for i in 0..16 {
            let xi = IdealPoint::new(i as f64 * 0.39);
            let a = m.angle_of(p0, xi);
            let back = m.ideal_at_angle(p0, a);
            assert_abs_diff_eq!(crate::hyperbolic::wrap_pi(back.theta() - xi.theta()), 0.0, epsilon = 1e-12);
        }
        let xi = IdealPoint::new(2.0);
        assert_abs_diff_eq!(m.angle_of(SurfacePoint::origin(), xi), 2.0, epsilon = 1e-15);
    }
}
