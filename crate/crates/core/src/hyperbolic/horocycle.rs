use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{IdealPoint, Metric, SurfacePoint};

/// Horocycle at `xi`. The `level` is a depth: the horocycle is the set
/// `{B_ξ = −level}`, so raising the level shrinks the horodisk. Level zero
/// passes through the chart origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    xi: IdealPoint,
    level: f64,
}

impl Horocycle {
    pub fn new(xi: IdealPoint, level: f64) -> Self {
        debug_assert!(level.is_finite());
        Self { xi, level }
    }

    pub fn xi(&self) -> IdealPoint {
        self.xi
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Value of the Busemann function of `xi` on this horocycle.
    pub fn busemann_value(&self) -> f64 {
        -self.level
    }

    /// Same ideal point, horodisk shrunk by Busemann shift `delta`.
    pub fn shrunk(&self, delta: f64) -> Self {
        Self::new(self.xi, self.level + delta)
    }

    /// Euclidean circle in the chart: `(center, radius)`, internally tangent
    /// to the unit circle at `xi`.
    pub fn chart_circle(&self, metric: Metric) -> (Complex64, f64) {
        let e = (metric.k() * self.level).exp();
        // 1 − ρ with ρ = tanh(kℓ/2), written to avoid cancellation.
        let one_minus_rho = 2.0 / (1.0 + e);
        let rho = 1.0 - one_minus_rho;
        (self.xi.chart() * (0.5 * (1.0 + rho)), 0.5 * one_minus_rho)
    }

    /// Point of the chart circle at angle `phi` seen from its center.
    /// `phi = θ(xi)` is the tangency point itself.
    pub fn chart_point(&self, metric: Metric, phi: f64) -> Complex64 {
        let (c, r) = self.chart_circle(metric);
        c + Complex64::from_polar(r, phi)
    }

    /// Whether `p` lies in the open horodisk.
    pub fn contains(&self, metric: Metric, p: SurfacePoint) -> bool {
        metric.busemann(self.xi, p) < -self.level
    }

    /// Arclength coordinate along the horocycle (defined up to an additive
    /// constant). It is exact for points on the horocycle: the Cayley map
    /// sending `xi` to infinity turns the horocycle into a horizontal line.
    pub fn arclength_coordinate(&self, metric: Metric, z: Complex64) -> f64 {
        let zeta = z * self.xi.chart().conj();
        let one = Complex64::new(1.0, 0.0);
        let w = Complex64::new(0.0, 1.0) * (one + zeta) / (one - zeta);
        w.re / (metric.k() * w.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn chart_circle_is_a_busemann_level_set() {
        for kappa in [-1.0, -2.5] {
            let m = Metric::new(kappa).unwrap();
            for level in [-1.0, 0.0, 0.7, 3.0] {
                let h = Horocycle::new(IdealPoint::new(2.2), level);
                let (c, r) = h.chart_circle(m);
                assert_abs_diff_eq!(c.norm() + r, 1.0, epsilon = 1e-15);
                for phi in [0.0, 1.0, 2.5, 4.0] {
                    // Stay away from the tangency point, where the chart
                    // representation loses digits.
                    let z = h.chart_point(m, 2.2 + std::f64::consts::PI + phi - 2.0);
                    let p = SurfacePoint::from_chart(z).unwrap();
                    assert_abs_diff_eq!(m.busemann(h.xi(), p), -level, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn larger_level_means_smaller_disk() {
        let m = Metric::hyperbolic();
        let xi = IdealPoint::new(0.0);
        let r1 = Horocycle::new(xi, 1.0).chart_circle(m).1;
        let r2 = Horocycle::new(xi, 2.0).chart_circle(m).1;
        assert!(r2 < r1);
    }

    #[test]
    fn arclength_coordinate_matches_quadrature() {
        let m = Metric::new(-2.0).unwrap();
        let h = Horocycle::new(IdealPoint::new(1.0), 0.5);
        let (c, r) = h.chart_circle(m);
        let (a, b) = (3.0, 4.5);
        let n = 4000;
        let dphi = (b - a) / n as f64;
        let mut len = 0.0;
        for i in 0..n {
            let phi = a + (i as f64 + 0.5) * dphi;
            let z = c + Complex64::from_polar(r, phi);
            len += m.conformal_factor(z) * r * dphi;
        }
        let za = c + Complex64::from_polar(r, a);
        let zb = c + Complex64::from_polar(r, b);
        let coord = (h.arclength_coordinate(m, zb) - h.arclength_coordinate(m, za)).abs();
        assert_abs_diff_eq!(coord, len, epsilon = 1e-6);
    }
}
