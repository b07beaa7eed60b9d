//! Triangles with prescribed median `m_a = m` and height `h_b = h`.
//!
//! The median from A meets BC halfway between the parallel lines AC and the
//! line through B, so it makes the angle `alpha` with AC where
//! `sin(alpha) = h / (2m)`. Each admissible `alpha` gives a branch indexed by
//! the angle `gamma` at C.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Triangle;
use crate::numerics::{level_roots, EndValue, LevelScan, ScanConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MedianHeightSpec {
    pub h: f64,
    pub m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchTag {
    #[serde(rename = "aleph1")]
    Aleph1,
    #[serde(rename = "aleph2")]
    Aleph2,
    #[serde(rename = "perp")]
    AlephPerp,
}

impl BranchTag {
    pub fn label(self) -> &'static str {
        match self {
            BranchTag::Aleph1 => "aleph1",
            BranchTag::Aleph2 => "aleph2",
            BranchTag::AlephPerp => "perp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Branch {
    pub tag: BranchTag,
    pub alpha: f64,
    /// `pi - alpha`, stored exactly; the branch lives on `gamma in (0, supp)`.
    #[serde(skip)]
    supp: f64,
    #[serde(skip)]
    sin_alpha: f64,
}

impl Branch {
    pub fn domain(&self) -> (f64, f64) {
        (0.0, self.supp)
    }
}

impl MedianHeightSpec {
    pub fn new(h: f64, m: f64) -> Result<Self> {
        if !(h.is_finite() && m.is_finite() && h > 0.0 && m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "h = {h} and m = {m} must be positive"
            )));
        }
        let spec = MedianHeightSpec { h, m };
        branches(&spec)?;
        Ok(spec)
    }

    fn is_perpendicular(&self) -> bool {
        (2.0 * self.m - self.h).abs() <= 4.0 * f64::EPSILON * self.h
    }
}

pub fn branches(spec: &MedianHeightSpec) -> Result<Vec<Branch>> {
    let (h, m) = (spec.h, spec.m);
    if spec.is_perpendicular() {
        return Ok(vec![Branch {
            tag: BranchTag::AlephPerp,
            alpha: FRAC_PI_2,
            supp: FRAC_PI_2,
            sin_alpha: 1.0,
        }]);
    }
    if 2.0 * m < h {
        return Err(Error::InfeasibleSpec(format!(
            "median {m} is shorter than half the height {h}"
        )));
    }
    let s = h / (2.0 * m);
    let a1 = s.asin();
    Ok(vec![
        Branch {
            tag: BranchTag::Aleph1,
            alpha: a1,
            supp: PI - a1,
            sin_alpha: s,
        },
        Branch {
            tag: BranchTag::Aleph2,
            alpha: PI - a1,
            supp: a1,
            sin_alpha: s,
        },
    ])
}

fn check(br: &Branch, gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < br.supp {
        Ok(())
    } else {
        Err(Error::DegenerateParameter(format!(
            "gamma = {gamma} outside (0, {})",
            br.supp
        )))
    }
}

pub fn lc_of_gamma(spec: &MedianHeightSpec, br: &Branch, gamma: f64) -> Result<f64> {
    check(br, gamma)?;
    let s = (br.supp - gamma).sin();
    Ok(spec.h * s / ((0.5 * gamma).sin() * (2.0 * br.sin_alpha + s)))
}

pub fn triangle_on_branch(spec: &MedianHeightSpec, br: &Branch, gamma: f64) -> Result<Triangle> {
    check(br, gamma)?;
    let sg = gamma.sin();
    let a = spec.h / sg;
    let b = spec.m * (br.supp - gamma).sin() / sg;
    let half = (0.5 * gamma).sin();
    let c = ((a - b) * (a - b) + 4.0 * a * b * half * half).sqrt();
    Triangle::new(a, b, c)
}

pub fn scan_branch(
    spec: &MedianHeightSpec,
    br: &Branch,
    target: f64,
    cfg: &ScanConfig,
) -> Result<LevelScan> {
    let f = |g: f64| lc_of_gamma(spec, br, g).unwrap_or(f64::NAN);
    level_roots(f, br.domain(), target, (EndValue::PosInf, EndValue::Finite(0.0)), cfg)
}

pub fn solve_lc(
    spec: &MedianHeightSpec,
    target: f64,
    cfg: &ScanConfig,
) -> Result<Vec<(Branch, f64, Triangle)>> {
    let mut out = Vec::new();
    for br in branches(spec)? {
        for r in scan_branch(spec, &br, target, cfg)?.roots {
            out.push((br, r.param, triangle_on_branch(spec, &br, r.param)?));
        }
    }
    Ok(out)
}

/// `n` rows per branch at midpoints of equal slices of the branch domain:
/// (gamma, branch, l_c, a, b, c).
pub fn sweep(spec: &MedianHeightSpec, n: usize) -> Result<Vec<(f64, BranchTag, [f64; 4])>> {
    let mut rows = Vec::new();
    for br in branches(spec)? {
        for i in 0..n {
            let g = br.supp * (i as f64 + 0.5) / n as f64;
            let t = triangle_on_branch(spec, &br, g)?;
            rows.push((g, br.tag, [lc_of_gamma(spec, &br, g)?, t.a(), t.b(), t.c()]));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{congruent, ElementKind, Tolerance};

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * x.abs().max(y.abs())
    }

    #[test]
    fn branch_examples() {
        let b = branches(&MedianHeightSpec { h: 1.0, m: 1.0 }).unwrap();
        assert_eq!(b.len(), 2);
        assert!(close(b[0].alpha, PI / 6.0, 1e-15));
        assert!(close(b[1].alpha, 5.0 * PI / 6.0, 1e-15));
        let b = branches(&MedianHeightSpec { h: 1.0, m: 0.5 }).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].tag, BranchTag::AlephPerp);
        assert!(matches!(
            branches(&MedianHeightSpec { h: 1.0, m: 0.4 }),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(MedianHeightSpec::new(1.0, 0.4).is_err());
    }

    #[test]
    fn lc_matches_triangle() {
        let spec = MedianHeightSpec::new(1.0, 1.0).unwrap();
        let b = branches(&spec).unwrap();
        let expect = (2.0 * PI / 3.0).sin() / ((PI / 4.0).sin() * (1.0 + (2.0 * PI / 3.0).sin()));
        let l = lc_of_gamma(&spec, &b[0], PI / 2.0).unwrap();
        assert!(close(l, expect, 1e-14));
        assert!(close(l, 0.656_338_798_447_071, 1e-14));
        for br in &b {
            for g in [0.1, 0.5, 0.9 * br.supp] {
                let t = triangle_on_branch(&spec, br, g).unwrap();
                assert!(close(t.element(ElementKind::BisectorC), lc_of_gamma(&spec, br, g).unwrap(), 1e-12));
                assert!(close(t.element(ElementKind::MedianA), 1.0, 1e-12));
                assert!(close(t.element(ElementKind::HeightB), 1.0, 1e-12));
                assert!(close(t.gamma(), g, 1e-12));
            }
        }
    }

    #[test]
    fn median_foot_at_half_height() {
        let spec = MedianHeightSpec::new(1.3, 0.9).unwrap();
        for br in branches(&spec).unwrap() {
            let g = 0.4 * br.supp;
            let t = triangle_on_branch(&spec, &br, g).unwrap();
            // A at the origin, C on the positive x axis, B above.
            let (a, b, c) = (t.a(), t.b(), t.c());
            let bx = (c * c - a * a + b * b) / (2.0 * b);
            let by = (c * c - bx * bx).sqrt();
            let (mx, my) = (0.5 * (bx + b), 0.5 * by);
            assert!(close(my, 0.5 * spec.h, 1e-12));
            assert!(close(my.atan2(mx), br.alpha, 1e-12));
        }
    }

    #[test]
    fn perpendicular_branch_end_is_degenerate() {
        let spec = MedianHeightSpec::new(1.0, 0.5).unwrap();
        let br = branches(&spec).unwrap()[0];
        assert!(matches!(
            triangle_on_branch(&spec, &br, PI / 2.0),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let cfg = ScanConfig::default();
        let spec = MedianHeightSpec::new(1.0, 1.0).unwrap();
        let sols = solve_lc(&spec, 2.0, &cfg).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(!congruent(&sols[0].2, &sols[1].2, &Tolerance::default()));
        let sols = solve_lc(&MedianHeightSpec::new(1.0, 0.5).unwrap(), 0.7, &cfg).unwrap();
        assert_eq!(sols.len(), 1);
        let sols = solve_lc(&spec, 1e6, &cfg).unwrap();
        assert_eq!(sols.len(), 2);
        for (br, g, t) in &sols {
            assert!(*g < 1e-5);
            assert!(close(lc_of_gamma(&spec, br, *g).unwrap(), 1e6, 1e-10));
            assert!(close(t.element(ElementKind::BisectorC), 1e6, 1e-8));
        }
    }

    #[test]
    fn same_gamma_other_branch_differs() {
        let spec = MedianHeightSpec::new(1.0, 1.0).unwrap();
        let b = branches(&spec).unwrap();
        let t1 = triangle_on_branch(&spec, &b[0], 0.3).unwrap();
        let t2 = triangle_on_branch(&spec, &b[1], 0.3).unwrap();
        assert!(!congruent(&t1, &t2, &Tolerance::default()));
    }
}
