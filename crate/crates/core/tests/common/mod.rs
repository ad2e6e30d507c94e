//! Brute-force horocycle scan shared by the polygon and acceptance tests.

use scherk::polygon::{condition2_check, enumerate_inscribed, truncated_side_length, IdealPolygon, Inequality, InscribedPolygon, SideLabel, CONDITION_TOL};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use scherk::{Horocycle, Metric};

#[derive(Debug, PartialEq)]
pub enum Scan {
    Divergent,
    Positive,
    NonPositive,
}

/// `|𝒫| − 2·(length of sides labelled `label`)` for horocycle families
/// shrunk by 1, 2, …, 5, classified from the sequence alone.
pub fn scan(m: Metric, g: &IdealPolygon, p: &InscribedPolygon, label: SideLabel) -> (Scan, Vec<f64>) {
    let n = g.len();
    let base = g.default_family(m);
    let values: Vec<f64> = (1..=5)
        .map(|k| {
            let f = base.shifted(k as f64);
            let v = p.vertices();
            let mut total = 0.0;
            for j in 0..v.len() {
                let (a, b) = (v[j], v[(j + 1) % v.len()]);
                let side = m.geodesic_between(g.vertex(a).into(), g.vertex(b).into()).unwrap();
                let len = truncated_side_length(m, &side, &Horocycle::new(g.vertex(a), f.level(a)), &Horocycle::new(g.vertex(b), f.level(b))).unwrap();
                let labelled = (a + 1) % n == b && g.label(a) == label;
                total += if labelled { -len } else { len };
            }
            total
        })
        .collect();
    let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - values.iter().cloned().fold(f64::INFINITY, f64::min);
    let class = if spread <= 1e-9 {
        if values[0] > CONDITION_TOL {
            Scan::Positive
        } else {
            Scan::NonPositive
        }
    } else {
        assert!(values.windows(2).all(|w| w[1] - w[0] >= 2.0 - 1e-9), "neither constant nor divergent: {values:?}");
        Scan::Divergent
    };
    (class, values)
}

pub fn agrees(q: &Inequality, s: &(Scan, Vec<f64>)) -> bool {
    match (q, &s.0) {
        (Inequality::DivergentSatisfied, Scan::Divergent) => true,
        (Inequality::Satisfied(v), Scan::Positive) | (Inequality::Violated(v), Scan::NonPositive) => (v - s.1[0]).abs() < 1e-9,
        _ => false,
    }
}

/// Checks every inscribed polygon and returns (divergent, positive, non-positive) counts.
pub fn check_polygon(m: Metric, g: &IdealPolygon) -> [usize; 3] {
    let mut counts = [0; 3];
    for p in enumerate_inscribed(g).unwrap() {
        let verdict = condition2_check(m, &p, g).unwrap();
        for (q, label) in [(&verdict.a, SideLabel::Plus), (&verdict.b, SideLabel::Minus)] {
            let s = scan(m, g, &p, label);
            assert!(agrees(q, &s), "{:?} {label:?}: checker {q:?}, scan {s:?}", p.vertices());
            counts[match s.0 {
                Scan::Divergent => 0,
                Scan::Positive => 1,
                Scan::NonPositive => 2,
            }] += 1;
        }
    }
    counts
}


/// Squares and hexagons covering feasible, infeasible and both labellings.
pub fn squares_and_hexagons() -> Vec<IdealPolygon> {
    let p = |a: &[f64], l| IdealPolygon::new(a, l).unwrap();
    vec![
        p(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], SideLabel::Plus),
        p(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2 + 0.3], SideLabel::Plus),
        p(&[0.2, 1.0, 3.5, 4.0], SideLabel::Minus),
        p(&(0..6).map(|i| i as f64 * TAU / 6.0).collect::<Vec<_>>(), SideLabel::Plus),
        p(&[0.0, 0.3, 2.0, 2.2, 4.0, 4.3], SideLabel::Plus),
        p(&[0.0, 0.3, 2.0, 2.2, 4.0, 4.3], SideLabel::Minus),
        p(&[0.1, 0.9, 1.3, 3.0, 4.4, 5.9], SideLabel::Plus),
    ]
}
