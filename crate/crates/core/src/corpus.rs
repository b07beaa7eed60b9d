//! Seeded random problem sets for cross-checks. Targets are drawn band by
//! band from the count tables, kept clear of the band edges, so every problem
//! has a well separated set of solutions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisectors::{self, BisectorsSpec};
use crate::error::Result;
use crate::geometry::{triangle_from_heights_gamma, ElementKind};
use crate::median_height::{self, MedianHeightSpec};
use crate::solver::{band_edges, Constraint, Family, SolveConfig, SolveProblem};

/// Clearance between a drawn target and the band edges, as a fraction of the
/// band width (or of the edge value for the outer bands).
pub const EDGE_CLEARANCE: f64 = 0.02;

/// Every third element the two-bisector table covers, in table order.
pub const BISECTOR_TARGETS: [ElementKind; 13] = [
    ElementKind::AngleA,
    ElementKind::AngleB,
    ElementKind::AngleC,
    ElementKind::SideA,
    ElementKind::SideB,
    ElementKind::SideC,
    ElementKind::HeightA,
    ElementKind::HeightB,
    ElementKind::HeightC,
    ElementKind::MedianA,
    ElementKind::MedianB,
    ElementKind::MedianC,
    ElementKind::BisectorC,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn problem(k1: ElementKind, v1: f64, k2: ElementKind, v2: f64, kt: ElementKind, vt: f64) -> SolveProblem {
    SolveProblem::new(
        [Constraint::new(k1, v1), Constraint::new(k2, v2)],
        Constraint::new(kt, vt),
    )
}

/// Number of bands on the target axis of `p`.
pub fn band_count(p: &SolveProblem) -> Result<usize> {
    Ok(positive_edges(p)?.len() + 1)
}

fn positive_edges(p: &SolveProblem) -> Result<Vec<f64>> {
    Ok(band_edges(p, &SolveConfig::default())?
        .into_iter()
        .map(|(_, v)| v)
        .filter(|v| *v > 0.0)
        .collect())
}

/// A value inside band `band` of `edges`, clear of both ends.
fn draw_in_band<R: Rng>(rng: &mut R, edges: &[f64], band: usize, angle: bool) -> f64 {
    let c = EDGE_CLEARANCE;
    let (lo, hi) = if band == 0 {
        (0.3 * edges[0], (1.0 - c) * edges[0])
    } else if band == edges.len() {
        let e = edges[band - 1];
        let top = if angle { 0.5 * (e + PI) } else { 2.0 * e };
        ((1.0 + c) * e, top)
    } else {
        let (e0, e1) = (edges[band - 1], edges[band]);
        (e0 + c * (e1 - e0), e1 - c * (e1 - e0))
    };
    if lo < hi {
        rng.gen_range(lo..hi)
    } else {
        0.5 * (lo + hi)
    }
}

/// Draws a target for `base` in band `band` (taken modulo the band count), or
/// from `interior` when the table has a single band.
fn draw_target<R: Rng, F: FnOnce(&mut R) -> f64>(
    rng: &mut R,
    base: SolveProblem,
    band: usize,
    interior: F,
) -> Result<SolveProblem> {
    let edges = positive_edges(&base)?;
    let value = if edges.is_empty() {
        interior(rng)
    } else {
        draw_in_band(rng, &edges, band % (edges.len() + 1), base.target.kind.is_angle())
    };
    Ok(SolveProblem::new(base.fixed, Constraint::new(base.target.kind, value)))
}

fn bisector_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let l1 = rng.gen_range(0.5..2.0);
    let r = if rng.gen_bool(0.1) {
        1.0
    } else {
        rng.gen_range(0.15..1.0)
    };
    if rng.gen_bool(0.25) {
        (l1, r * l1)
    } else {
        (r * l1, l1)
    }
}

/// Two-bisector problem with target `kind` in band `band`.
pub fn bisectors_problem<R: Rng>(rng: &mut R, kind: ElementKind, band: usize) -> Result<SolveProblem> {
    let (l_a, l_b) = bisector_pair(rng);
    let start = if kind.is_angle() { 1.0 } else { l_a };
    let base = problem(ElementKind::BisectorA, l_a, ElementKind::BisectorB, l_b, kind, start);
    draw_target(rng, base, band, |rng| {
        let swap = l_a > l_b;
        let spec = BisectorsSpec::new(l_a.max(l_b), l_a.min(l_b)).expect("valid pair");
        let beta = spec.beta_max() * rng.gen_range(0.02..0.98);
        let shape = bisectors::shape(&spec, beta).expect("interior member").1;
        shape.element(if swap { kind.swap_ab() } else { kind })
    })
}

/// Two-bisector problems with target `kind` exactly on each band edge in turn.
pub fn bisectors_edge_problems(kind: ElementKind, n: usize, seed: u64) -> Result<Vec<SolveProblem>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (l_a, l_b) = bisector_pair(&mut rng);
        let start = if kind.is_angle() { 1.0 } else { l_a };
        let base = problem(ElementKind::BisectorA, l_a, ElementKind::BisectorB, l_b, kind, start);
        let edges = positive_edges(&base)?;
        if edges.is_empty() {
            return Ok(out);
        }
        let e = edges[out.len() % edges.len()];
        out.push(SolveProblem::new(base.fixed, Constraint::new(kind, e)));
    }
    Ok(out)
}

/// Two-height problem, regimes and bands taken in turn from `i`.
pub fn heights_problem<R: Rng>(rng: &mut R, i: usize) -> Result<SolveProblem> {
    let h2 = rng.gen_range(0.5..2.0);
    let h1 = match i % 4 {
        0 => h2,
        1 => h2 * rng.gen_range(0.6..0.95),
        2 => 0.5 * h2,
        _ => h2 * rng.gen_range(0.15..0.45),
    };
    let kind = if (i / 4).is_multiple_of(2) {
        ElementKind::BisectorA
    } else {
        ElementKind::MedianA
    };
    let base = problem(ElementKind::HeightA, h1, ElementKind::HeightB, h2, kind, h1);
    let band = rng.gen_range(0..4);
    draw_target(rng, base, band, |rng| {
        let t = triangle_from_heights_gamma(h1, h2, PI * rng.gen_range(0.05..0.95)).expect("interior member");
        t.element(kind)
    })
}

/// Median-height problem; every fifth one has `m = h/2`.
pub fn median_height_problem<R: Rng>(rng: &mut R, i: usize) -> Result<SolveProblem> {
    let h = rng.gen_range(0.5..2.0);
    let m = if i % 5 == 4 {
        0.5 * h
    } else {
        0.5 * h * rng.gen_range(1.05..3.0)
    };
    let spec = MedianHeightSpec::new(h, m)?;
    let branches = median_height::branches(&spec)?;
    let br = branches[rng.gen_range(0..branches.len())];
    let gamma = br.domain().1 * rng.gen_range(0.05..0.95);
    let target = median_height::lc_of_gamma(&spec, &br, gamma)?;
    Ok(problem(
        ElementKind::MedianA,
        m,
        ElementKind::HeightB,
        h,
        ElementKind::BisectorC,
        target,
    ))
}

/// `n` problems of `family`, reproducible from `seed`.
pub fn problems(family: Family, n: usize, seed: u64) -> Result<Vec<SolveProblem>> {
    let mut rng = rng(seed);
    (0..n)
        .map(|i| match family {
            Family::Bisectors => {
                let kind = BISECTOR_TARGETS[i % BISECTOR_TARGETS.len()];
                let band = rng.gen_range(0..4);
                bisectors_problem(&mut rng, kind, band)
            }
            Family::Heights => heights_problem(&mut rng, i),
            Family::MedianHeight => median_height_problem(&mut rng, i),
        })
        .collect()
}

/// `n` two-bisector problems with target `kind`, cycling through its bands.
pub fn bisectors_item_problems(kind: ElementKind, n: usize, seed: u64) -> Result<Vec<SolveProblem>> {
    let mut rng = rng(seed);
    (0..n).map(|i| bisectors_problem(&mut rng, kind, i)).collect()
}
