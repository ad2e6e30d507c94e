//! Pointwise stability inequality along level curves of `u − v`:
//! `⟨X_u − X_v, η⟩ ≥ ¼ ‖N_u − N_v‖²` with `η = ∇(u − v)/|∇(u − v)|` and `N`
//! the upward unit normals of the two graphs.
//!
//! In an orthonormal frame of the metric the horizontal parts of `X` and
//! `N` are `p = g/(λW)` (up to sign), so both sides reduce to chart data:
//! the left side is `(p_u − p_v)·ĝ`, the right side
//! `(|p_u − p_v|² + (1/W_u − 1/W_v)²)/4`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mesh::TriMesh;
use crate::solver::{Conformal, ScalarField};
use crate::{Error, Result};

/// Gradients below this are treated as critical points and skipped.
pub const CRITICAL_GRADIENT: f64 = 1e-10;
/// Slack allowed on the inequality.
pub const STABILITY_SLACK: f64 = 1e-8;

/// One sample on the level curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilitySample {
    pub point: Complex64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Report of [`stability_gap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub level: f64,
    pub samples: Vec<StabilitySample>,
    /// Level-curve points skipped as critical.
    pub skipped: usize,
    /// `min(lhs − rhs)` over the samples.
    pub min_margin: f64,
    pub holds: bool,
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Samples the level curve `{u − v = level}` at the midpoint of its segment
/// in every crossed triangle and checks the inequality there.
///
/// Errors with [`Error::Inapplicable`] when the level set is empty or has no
/// regular point.
pub fn stability_gap(mesh: &TriMesh, u: &ScalarField, v: &ScalarField, level: f64, conformal: impl Into<Conformal>) -> Result<StabilityReport> {
    let conformal = conformal.into();
    let n = mesh.nodes().len();
    if u.len() != n || v.len() != n {
        return Err(Error::InvalidParameter("fields do not match the mesh".into()));
    }
    let d: Vec<f64> = (0..n).map(|i| u.get(i) - v.get(i) - level).collect();
    let (mut samples, mut skipped) = (Vec::new(), 0);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let mut cut = Vec::with_capacity(2);
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let (da, db) = (d[a], d[b]);
            // Half-open rule so that a crossing at a node is seen once per edge pair.
            if (da < 0.0) != (db < 0.0) {
                let s = da / (da - db);
                cut.push(mesh.node(a) + (mesh.node(b) - mesh.node(a)) * s);
            }
        }
        if cut.len() != 2 {
            continue;
        }
        let z = 0.5 * (cut[0] + cut[1]);
        let gu = mesh.gradient(t, u.values());
        let gv = mesh.gradient(t, v.values());
        let gd = gu - gv;
        if gd.norm() < CRITICAL_GRADIENT {
            skipped += 1;
            continue;
        }
        let lam = conformal.lambda(z);
        let wu = (1.0 + gu.norm_sqr() / (lam * lam)).sqrt();
        let wv = (1.0 + gv.norm_sqr() / (lam * lam)).sqrt();
        let dp = gu / (lam * wu) - gv / (lam * wv);
        let lhs = dot(dp, gd / gd.norm());
        let rhs = 0.25 * (dp.norm_sqr() + (1.0 / wu - 1.0 / wv).powi(2));
        samples.push(StabilitySample { point: z, lhs, rhs });
    }
    if samples.is_empty() {
        return Err(Error::Inapplicable(if skipped > 0 {
            format!("the level set {level} has only critical points")
        } else {
            format!("the level set {level} of u − v is empty")
        }));
    }
    let min_margin = samples.iter().map(|s| s.lhs - s.rhs).fold(f64::INFINITY, f64::min);
    Ok(StabilityReport { level, samples, skipped, min_margin, holds: min_margin >= -STABILITY_SLACK })
}
