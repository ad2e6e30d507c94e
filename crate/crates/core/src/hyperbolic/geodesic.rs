use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

use super::mobius::{from_origin, to_origin};
use super::{wrap_pi, Endpoint, IdealPoint, Metric, SurfacePoint};
use crate::{Error, Result};

/// A unit-speed geodesic, stored as a chart base point, a unit direction at
/// that base point and an arclength range (possibly infinite at either end).
///
/// `γ(s) = T_base⁻¹(tanh(ks/2)·dir)`. Ideal endpoints are the images of
/// `±dir` under the same automorphism, so no point at chart radius one is
/// ever stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    metric: Metric,
    base: Complex64,
    dir: Complex64,
    s0: f64,
    s1: f64,
    ends: (Endpoint, Endpoint),
}

/// Chart image of a complete geodesic: a diameter or a circle orthogonal to
/// the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChartCurve {
    Line { direction: Complex64 },
    Circle { center: Complex64, radius: f64 },
}

fn normalized(z: Complex64) -> Result<Complex64> {
    let n = z.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Degenerate("zero direction".into()));
    }
    Ok(z / n)
}

impl Geodesic {
    pub(crate) fn between(metric: Metric, a: Endpoint, b: Endpoint) -> Result<Self> {
        use Endpoint::*;
        let (base, dir, s0, s1) = match (a, b) {
            (Finite(p), Finite(q)) => {
                if p == q {
                    return Err(Error::Degenerate("geodesic endpoints coincide".into()));
                }
                let dir = normalized(to_origin(p.chart(), q.chart()))?;
                (p.chart(), dir, 0.0, metric.distance(p, q))
            }
            (Finite(p), Ideal(xi)) => {
                (p.chart(), normalized(to_origin(p.chart(), xi.chart()))?, 0.0, f64::INFINITY)
            }
            (Ideal(xi), Finite(q)) => {
                (q.chart(), -normalized(to_origin(q.chart(), xi.chart()))?, f64::NEG_INFINITY, 0.0)
            }
            (Ideal(x), Ideal(y)) => {
                if x == y {
                    return Err(Error::Degenerate("geodesic endpoints coincide".into()));
                }
                let m = ideal_midpoint(x, y);
                let dir = normalized(to_origin(m, y.chart()))?;
                (m, dir, f64::NEG_INFINITY, f64::INFINITY)
            }
        };
        Ok(Self { metric, base, dir, s0, s1, ends: (a, b) })
    }

    /// The complete geodesic through `p` leaving in chart direction `angle`,
    /// parametrised so that `γ(0) = p`.
    pub fn through(metric: Metric, p: SurfacePoint, angle: f64) -> Self {
        let dir = Complex64::from_polar(1.0, angle);
        let base = p.chart();
        let back = IdealPoint::new(from_origin(base, -dir).arg());
        let fwd = IdealPoint::new(from_origin(base, dir).arg());
        Self { metric, base, dir, s0: f64::NEG_INFINITY, s1: f64::INFINITY, ends: (back.into(), fwd.into()) }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn start(&self) -> Endpoint {
        self.ends.0
    }

    pub fn end(&self) -> Endpoint {
        self.ends.1
    }

    /// Arclength range `(s0, s1)`.
    pub fn range(&self) -> (f64, f64) {
        (self.s0, self.s1)
    }

    pub fn length(&self) -> f64 {
        self.s1 - self.s0
    }

    pub fn is_complete(&self) -> bool {
        self.s0 == f64::NEG_INFINITY && self.s1 == f64::INFINITY
    }

    /// Chart position at arclength `s`; `±∞` give the ideal endpoints of the
    /// complete extension.
    pub fn chart_point(&self, s: f64) -> Complex64 {
        let r = (0.5 * self.metric.k() * s).tanh();
        from_origin(self.base, self.dir * r)
    }

    pub fn point_at(&self, s: f64) -> Result<SurfacePoint> {
        SurfacePoint::from_chart(self.chart_point(s))
    }

    /// Chart angle of the unit tangent at arclength `s`.
    pub fn tangent_angle(&self, s: f64) -> f64 {
        let w = self.dir * (0.5 * self.metric.k() * s).tanh();
        let denom = Complex64::new(1.0, 0.0) + self.base.conj() * w;
        (self.dir / (denom * denom)).arg()
    }

    /// Complete geodesic containing this one, with the same parametrisation.
    pub fn extended(&self) -> Self {
        let back = IdealPoint::new(from_origin(self.base, -self.dir).arg());
        let fwd = IdealPoint::new(from_origin(self.base, self.dir).arg());
        Self { s0: f64::NEG_INFINITY, s1: f64::INFINITY, ends: (back.into(), fwd.into()), ..*self }
    }

    /// Same curve traversed backwards, `s ↦ −s`.
    pub fn reversed(&self) -> Self {
        Self { dir: -self.dir, s0: -self.s1, s1: -self.s0, ends: (self.ends.1, self.ends.0), ..*self }
    }

    /// Ideal endpoints `(back, forward)` of the complete extension.
    pub fn ideal_ends(&self) -> (IdealPoint, IdealPoint) {
        match self.extended().ends {
            (Endpoint::Ideal(a), Endpoint::Ideal(b)) => (a, b),
            _ => unreachable!("extended geodesics end at infinity"),
        }
    }

    /// Chart position of the Fermi point at signed normal distance `s` (left
    /// of the direction of travel is positive) above arclength `t`.
    pub fn fermi_point(&self, s: f64, t: f64) -> Complex64 {
        let k = self.metric.k();
        let r = (0.5 * k * t).tanh();
        let z = Complex64::new(0.0, (0.5 * k * s).tanh());
        let w = (z + r) / (Complex64::new(1.0, 0.0) + z * r);
        from_origin(self.base, self.dir * w)
    }

    /// Fermi coordinates `(s, t)` of a point: signed normal distance and the
    /// arclength of its foot on the complete geodesic.
    pub fn fermi_coords(&self, p: Complex64) -> (f64, f64) {
        let k = self.metric.k();
        let w = to_origin(self.base, p) * self.dir.conj();
        let x = w.re;
        let q = 1.0 + w.norm_sqr();
        let r = 2.0 * x / (q + (q * q - 4.0 * x * x).max(0.0).sqrt());
        let foot = (w - r) / (Complex64::new(1.0, 0.0) - w * r);
        (2.0 * foot.im.atanh() / k, 2.0 * r.atanh() / k)
    }

    /// Chart circle or line carrying the complete geodesic.
    pub fn chart_curve(&self) -> ChartCurve {
        let (a, b) = self.ideal_ends();
        let delta = wrap_pi(b.theta() - a.theta());
        let half = 0.5 * delta.abs();
        if (std::f64::consts::FRAC_PI_2 - half).abs() < 1e-14 {
            return ChartCurve::Line { direction: a.chart() };
        }
        let mid = a.theta() + 0.5 * delta;
        ChartCurve::Circle { center: Complex64::from_polar(1.0 / half.cos(), mid), radius: half.tan() }
    }
}

/// Point of the geodesic `[x, y]` closest to the chart origin.
fn ideal_midpoint(x: IdealPoint, y: IdealPoint) -> Complex64 {
    let delta = wrap_pi(y.theta() - x.theta());
    let r = (FRAC_PI_4 - 0.25 * delta.abs()).tan();
    Complex64::from_polar(r, x.theta() + 0.5 * delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ideal(t: f64) -> Endpoint {
        IdealPoint::new(t).into()
    }

    #[test]
    fn diameter_between_opposite_ideal_points() {
        let m = Metric::hyperbolic();
        let g = m.geodesic_between(ideal(0.0), ideal(std::f64::consts::PI)).unwrap();
        for s in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            assert_abs_diff_eq!(g.chart_point(s).im, 0.0, epsilon = 1e-15);
        }
        assert!(matches!(g.chart_curve(), ChartCurve::Line { .. }));
        assert_abs_diff_eq!(g.chart_point(0.0).norm(), 0.0, epsilon = 1e-15);
    }

    /// RK4 on z'' = −2 z̄ z'²/(1−|z|²) (κ = −1, unit speed).
    fn geodesic_ode(z0: Complex64, v0: Complex64, s_end: f64, steps: usize) -> Complex64 {
        let f = |z: Complex64, v: Complex64| (v, -2.0 * z.conj() * v * v / (1.0 - z.norm_sqr()));
        let h = s_end / steps as f64;
        let (mut z, mut v) = (z0, v0);
        for _ in 0..steps {
            let (k1z, k1v) = f(z, v);
            let (k2z, k2v) = f(z + k1z * (h / 2.0), v + k1v * (h / 2.0));
            let (k3z, k3v) = f(z + k2z * (h / 2.0), v + k2v * (h / 2.0));
            let (k4z, k4v) = f(z + k3z * h, v + k3v * h);
            z += (k1z + k2z * 2.0 + k3z * 2.0 + k4z) * (h / 6.0);
            v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        }
        z
    }

    #[test]
    fn radial_ray_matches_ode() {
        let m = Metric::hyperbolic();
        let g = m.geodesic_between(SurfacePoint::origin().into(), ideal(0.0)).unwrap();
        for s in [0.5, 1.0, 3.0] {
            let z = geodesic_ode(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), s, 4000);
            assert_abs_diff_eq!(g.chart_point(s).re, z.re, epsilon = 1e-10);
            assert_abs_diff_eq!(g.chart_point(s).re, (s / 2.0).tanh(), epsilon = 1e-14);
        }
    }

    #[test]
    fn off_center_geodesic_matches_ode() {
        let m = Metric::hyperbolic();
        let p = SurfacePoint::new(0.3, -0.4).unwrap();
        let g = Geodesic::through(m, p, 0.7);
        let lam = m.conformal_factor(p.chart());
        let v0 = Complex64::from_polar(1.0 / lam, 0.7);
        for s in [0.8, 2.0] {
            let z = geodesic_ode(p.chart(), v0, s, 4000);
            assert_abs_diff_eq!((g.chart_point(s) - z).norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn interior_points_on_diameter() {
        let m = Metric::new(-2.0).unwrap();
        let a = SurfacePoint::new(-0.3, 0.3).unwrap();
        let b = SurfacePoint::new(0.5, -0.5).unwrap();
        let g = m.geodesic_between(a.into(), b.into()).unwrap();
        assert_abs_diff_eq!(g.length(), m.distance(a, b), epsilon = 1e-14);
        let end = g.chart_point(g.length());
        assert_abs_diff_eq!((end - b.chart()).norm(), 0.0, epsilon = 1e-12);
        for s in [0.1, 0.5 * g.length()] {
            let z = g.chart_point(s);
            assert_abs_diff_eq!(z.re + z.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ideal_pair_passes_through_both_ends() {
        let m = Metric::hyperbolic();
        let (x, y) = (IdealPoint::new(0.3), IdealPoint::new(2.1));
        let g = m.geodesic_between(x.into(), y.into()).unwrap();
        assert_abs_diff_eq!((g.chart_point(f64::INFINITY) - y.chart()).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((g.chart_point(f64::NEG_INFINITY) - x.chart()).norm(), 0.0, epsilon = 1e-14);
        if let ChartCurve::Circle { center, radius } = g.chart_curve() {
            for s in [-2.0, 0.0, 1.5] {
                assert_abs_diff_eq!((g.chart_point(s) - center).norm(), radius, epsilon = 1e-12);
            }
        } else {
            panic!("expected a circle");
        }
    }

    #[test]
    fn degenerate_inputs() {
        let m = Metric::hyperbolic();
        assert!(m.geodesic_between(ideal(1.0), ideal(1.0)).is_err());
        let p = SurfacePoint::new(0.1, 0.1).unwrap();
        assert!(m.geodesic_between(p.into(), p.into()).is_err());
    }

    #[test]
    fn fermi_round_trip() {
        let m = Metric::new(-1.5).unwrap();
        let g = m.geodesic_between(ideal(0.4), ideal(3.0)).unwrap();
        for s in [-2.0, -0.3, 0.0, 0.9, 2.5] {
            for t in [-3.0, 0.0, 1.2] {
                let (s2, t2) = g.fermi_coords(g.fermi_point(s, t));
                assert_abs_diff_eq!(s, s2, epsilon = 1e-10);
                assert_abs_diff_eq!(t, t2, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn tangent_is_along_the_curve() {
        let m = Metric::hyperbolic();
        let g = m.geodesic_between(ideal(0.4), ideal(3.0)).unwrap();
        let h = 1e-6;
        for s in [-1.0, 0.0, 2.0] {
            let fd = (g.chart_point(s + h) - g.chart_point(s - h)).arg();
            assert_abs_diff_eq!(wrap_pi(fd - g.tangent_angle(s)), 0.0, epsilon = 1e-8);
        }
    }
}
