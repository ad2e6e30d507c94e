//! Central finite differences with one Richardson extrapolation step.

/// Default step for first derivatives.
pub const FIRST_STEP: f64 = 1e-5;
/// Default step for second derivatives. Larger than [`FIRST_STEP`] because
/// the second difference divides rounding noise by `h²`.
pub const SECOND_STEP: f64 = 1e-3;

/// First derivative of `f` at `x`, fourth-order accurate.
pub fn first(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Second derivative of `f` at `x`, fourth-order accurate.
pub fn second(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let fx = f(x);
    let d = |h: f64| (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn exact_enough_on_smooth_functions() {
        for x in [-1.0, 0.3, 2.0] {
            assert_abs_diff_eq!(first(f64::sin, x, FIRST_STEP), x.cos(), epsilon = 1e-10);
            assert_relative_eq!(second(f64::exp, x, SECOND_STEP), x.exp(), max_relative = 1e-8);
        }
    }
}
