use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inscribed::{enumerate_inscribed, InscribedPolygon, SideKind};
use super::{HorocycleFamily, IdealPolygon, SideLabel};
use crate::hyperbolic::Metric;
use crate::{Error, Result};

/// Margin for the strict inequalities and for `a(Γ) = b(Γ)`.
pub const CONDITION_TOL: f64 = 1e-8;

/// Outcome of one inequality `2·a(𝒫) < |𝒫|` (or its `b` twin) in the limit
/// of shrinking horocycles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Inequality {
    /// Some vertex has no incident side of the label, so `|𝒫| − 2a(𝒫)`
    /// grows without bound as the horocycles shrink.
    DivergentSatisfied,
    /// Horocycle-invariant value of `|𝒫| − 2a(𝒫)`, positive.
    Satisfied(f64),
    /// Horocycle-invariant value, not above the tolerance.
    Violated(f64),
}

impl Inequality {
    pub fn holds(&self) -> bool {
        !matches!(self, Inequality::Violated(_))
    }

    pub fn invariant_value(&self) -> Option<f64> {
        match *self {
            Inequality::DivergentSatisfied => None,
            Inequality::Satisfied(v) | Inequality::Violated(v) => Some(v),
        }
    }
}

/// Both inequalities for one inscribed polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InscribedVerdict {
    pub mask: u64,
    pub vertices: Vec<usize>,
    pub a: Inequality,
    pub b: Inequality,
}

impl InscribedVerdict {
    pub fn holds(&self) -> bool {
        self.a.holds() && self.b.holds()
    }
}

/// Result of the Jenkins–Serrin check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `a(Γ) − b(Γ)`; absent for mixed problems, where it does not apply.
    pub condition1_value: Option<f64>,
    pub condition1_holds: bool,
    pub inscribed: Vec<InscribedVerdict>,
    pub condition2_holds: bool,
    pub feasible: bool,
}

impl FeasibilityReport {
    /// Numbers of the failed conditions (1 and/or 2).
    pub fn failed_conditions(&self) -> Vec<u8> {
        let mut v = Vec::new();
        if !self.condition1_holds {
            v.push(1);
        }
        if !self.condition2_holds {
            v.push(2);
        }
        v
    }

    pub fn violations(&self) -> impl Iterator<Item = &InscribedVerdict> {
        self.inscribed.iter().filter(|v| !v.holds())
    }
}

/// `a(Γ) − b(Γ)` for an admissible horocycle family.
pub fn a_minus_b(metric: Metric, polygon: &IdealPolygon, family: &HorocycleFamily) -> Result<f64> {
    family.validate(metric, polygon)?;
    let mut total = 0.0;
    for i in 0..polygon.len() {
        let d = metric.dist_horocycles(&family.horocycle(polygon, i), &family.horocycle(polygon, i + 1))?;
        match polygon.label(i) {
            SideLabel::Plus => total += d,
            SideLabel::Minus => total -= d,
            SideLabel::Finite => {}
        }
    }
    Ok(total)
}

fn side_lengths(metric: Metric, p: &InscribedPolygon, g: &IdealPolygon, f: &HorocycleFamily) -> Result<Vec<f64>> {
    let v = p.vertices();
    (0..v.len())
        .map(|k| metric.dist_horocycles(&f.horocycle(g, v[k]), &f.horocycle(g, v[(k + 1) % v.len()])))
        .collect()
}

fn classify(p: &InscribedPolygon, lengths: &[f64], label: SideLabel) -> Inequality {
    if !p.every_vertex_touches(label) {
        return Inequality::DivergentSatisfied;
    }
    let perimeter: f64 = lengths.iter().sum();
    let labelled: f64 = p
        .sides()
        .iter()
        .zip(lengths)
        .filter(|(s, _)| matches!(s, SideKind::Boundary { label: l, .. } if *l == label))
        .map(|(_, d)| d)
        .sum();
    let v = perimeter - 2.0 * labelled;
    if v > CONDITION_TOL {
        Inequality::Satisfied(v)
    } else {
        Inequality::Violated(v)
    }
}

/// Condition 2 for one inscribed polygon, evaluated with an explicit family.
/// Invariant values do not depend on the family.
pub fn condition2_with_family(
    metric: Metric,
    p: &InscribedPolygon,
    g: &IdealPolygon,
    family: &HorocycleFamily,
) -> Result<InscribedVerdict> {
    let lengths = side_lengths(metric, p, g, family)?;
    Ok(InscribedVerdict {
        mask: p.mask(),
        vertices: p.vertices().to_vec(),
        a: classify(p, &lengths, SideLabel::Plus),
        b: classify(p, &lengths, SideLabel::Minus),
    })
}

/// Condition 2 for an inscribed polygon other than `g` itself.
pub fn condition2_check(metric: Metric, p: &InscribedPolygon, g: &IdealPolygon) -> Result<InscribedVerdict> {
    if p.is_whole(g) {
        return Err(Error::InvalidParameter("condition 2 concerns polygons other than the boundary itself".into()));
    }
    condition2_with_family(metric, p, g, &g.default_family(metric))
}

fn verdicts(
    metric: Metric,
    g: &IdealPolygon,
    family: &HorocycleFamily,
    polys: &[InscribedPolygon],
) -> Result<Vec<InscribedVerdict>> {
    polys.par_iter().map(|p| condition2_with_family(metric, p, g, family)).collect()
}

/// Jenkins–Serrin check of an alternating polygon with its default family.
pub fn js_feasible(metric: Metric, g: &IdealPolygon) -> Result<FeasibilityReport> {
    js_feasible_with_family(metric, g, &g.default_family(metric))
}

/// Jenkins–Serrin check evaluated with a given admissible family.
pub fn js_feasible_with_family(metric: Metric, g: &IdealPolygon, family: &HorocycleFamily) -> Result<FeasibilityReport> {
    if !g.is_alternating() {
        return Err(Error::InvalidPolygon("the ±∞ problem needs alternating plus/minus sides".into()));
    }
    let c1 = a_minus_b(metric, g, family)?;
    let inscribed = verdicts(metric, g, family, &enumerate_inscribed(g)?)?;
    let condition1_holds = c1.abs() <= CONDITION_TOL;
    let condition2_holds = inscribed.iter().all(InscribedVerdict::holds);
    Ok(FeasibilityReport {
        condition1_value: Some(c1),
        condition1_holds,
        inscribed,
        condition2_holds,
        feasible: condition1_holds && condition2_holds,
    })
}

/// Inequality check for mixed data: every inscribed polygon, the boundary
/// itself included, must satisfy both strict inequalities.
pub fn mixed_admissible(metric: Metric, g: &IdealPolygon) -> Result<FeasibilityReport> {
    let family = g.default_family(metric);
    family.validate(metric, g)?;
    let mut polys = enumerate_inscribed(g)?;
    polys.push(InscribedPolygon::whole(g)?);
    let inscribed = verdicts(metric, g, &family, &polys)?;
    let condition2_holds = inscribed.iter().all(InscribedVerdict::holds);
    Ok(FeasibilityReport {
        condition1_value: None,
        condition1_holds: true,
        inscribed,
        condition2_holds,
        feasible: condition2_holds,
    })
}
