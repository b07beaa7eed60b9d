//! Triangles with prescribed heights `h_a = h1 <= h_b = h2`, indexed by the
//! angle `gamma` at C.

use std::f64::consts::{FRAC_PI_3, PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{triangle_from_heights_gamma, AngleTriangle, ElementKind, Triangle};
use crate::numerics::{
    find_extrema, golden_section, level_roots, EndValue, ExtremumKind, LevelScan, ScanConfig,
};

/// Relative distance within which two heights count as equal (or one as
/// half the other) for regime classification.
pub const REGIME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightsFamilySpec {
    pub h1: f64,
    pub h2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Equal,
    Upper,
    Boundary,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightsAnalysis {
    pub h1: f64,
    pub h2: f64,
    pub regime: Regime,
    /// Where `l_a` touches its minimum `h1`.
    pub gamma2: Option<f64>,
    pub gamma_max: Option<f64>,
    pub l_max: Option<f64>,
    pub gamma_m: f64,
    pub ma_min: f64,
}

impl HeightsFamilySpec {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if !(h1.is_finite() && h2.is_finite() && h1 > 0.0 && h1 <= h2) {
            return Err(Error::InvalidInput(format!(
                "heights need 0 < h1 <= h2, got h1={h1} h2={h2}"
            )));
        }
        Ok(HeightsFamilySpec { h1, h2 })
    }

    pub fn regime(&self) -> Regime {
        let (h1, h2) = (self.h1, self.h2);
        if (h2 - h1).abs() <= REGIME_TOL * h2 {
            Regime::Equal
        } else if (2.0 * h1 - h2).abs() <= REGIME_TOL * h2 {
            Regime::Boundary
        } else if 2.0 * h1 > h2 {
            Regime::Upper
        } else {
            Regime::Lower
        }
    }

    fn check(&self, gamma: f64) -> Result<()> {
        if gamma > 0.0 && gamma < PI {
            Ok(())
        } else {
            Err(Error::DegenerateParameter(format!(
                "gamma = {gamma} outside (0, pi)"
            )))
        }
    }

    /// Angles (alpha, beta) of the member at `gamma`.
    fn angles(&self, gamma: f64) -> (f64, f64) {
        let s = gamma.sin();
        let v = 2.0 * (0.5 * gamma).sin().powi(2);
        let (h1, h2) = (self.h1, self.h2);
        let alpha = (h2 * s).atan2((h1 - h2) + h2 * v);
        let beta = (h1 * s).atan2((h2 - h1) + h1 * v);
        (alpha, beta)
    }

    /// The member at `gamma` in angle form, scaled to the prescribed heights.
    pub fn shape(&self, gamma: f64) -> Result<AngleTriangle> {
        self.check(gamma)?;
        let (alpha, beta) = self.angles(gamma);
        AngleTriangle::new(alpha, beta, gamma)?.with_scale(ElementKind::HeightB, self.h2)
    }

    pub fn triangle(&self, gamma: f64) -> Result<Triangle> {
        triangle_from_heights_gamma(self.h1, self.h2, gamma)
    }

    /// `l_a - h1`, computed without cancellation.
    pub fn la_excess(&self, gamma: f64) -> Result<f64> {
        self.check(gamma)?;
        let (_, beta) = self.angles(gamma);
        let psi = 0.5 * (beta - gamma);
        let s = (0.5 * psi).sin();
        Ok(2.0 * self.h1 * s * s / psi.cos())
    }

    pub fn element(&self, kind: ElementKind, gamma: f64) -> Result<f64> {
        match kind {
            ElementKind::BisectorA => la_of_gamma(self, gamma),
            ElementKind::MedianA => ma_of_gamma(self, gamma),
            other => Ok(self.shape(gamma)?.element(other)),
        }
    }

    /// Limits of `kind` as gamma tends to 0 and to pi.
    pub fn end_values(&self, kind: ElementKind) -> (EndValue, EndValue) {
        let regime = self.regime();
        let lower = match (kind, regime) {
            (ElementKind::BisectorA, Regime::Equal) => EndValue::Finite(SQRT_2 * self.h2),
            (ElementKind::BisectorA, _) => EndValue::Finite(self.h1),
            (ElementKind::MedianA, Regime::Boundary) => EndValue::Finite(0.5 * self.h2),
            (ElementKind::BisectorB, Regime::Equal) => EndValue::Finite(SQRT_2 * self.h2),
            _ => EndValue::PosInf,
        };
        (lower, EndValue::PosInf)
    }

    /// Level set of `kind` at `target` along the family.
    pub fn scan(&self, kind: ElementKind, target: f64, cfg: &ScanConfig) -> Result<LevelScan> {
        let f = |g: f64| self.element(kind, g).unwrap_or(f64::NAN);
        level_roots(f, (0.0, PI), target, self.end_values(kind), cfg)
    }
}

/// Bisector from A: `h1 / cos((beta - gamma)/2)`.
pub fn la_of_gamma(spec: &HeightsFamilySpec, gamma: f64) -> Result<f64> {
    spec.check(gamma)?;
    let (_, beta) = spec.angles(gamma);
    Ok(spec.h1 / (0.5 * (beta - gamma)).cos())
}

pub fn ma_of_gamma(spec: &HeightsFamilySpec, gamma: f64) -> Result<f64> {
    spec.check(gamma)?;
    let (h1, h2) = (spec.h1, spec.h2);
    let d = 2.0 * h1 - h2;
    let s = (0.5 * gamma).sin();
    Ok((d * d + 8.0 * h1 * h2 * s * s).sqrt() / (2.0 * gamma.sin()))
}

pub fn analyze(spec: &HeightsFamilySpec, cfg: &ScanConfig) -> Result<HeightsAnalysis> {
    let (h1, h2) = (spec.h1, spec.h2);
    let regime = spec.regime();
    let gamma2 = match regime {
        Regime::Equal => Some(FRAC_PI_3),
        Regime::Upper => Some((h2 / (2.0 * h1)).acos()),
        Regime::Boundary => Some(0.0),
        Regime::Lower => None,
    };
    let (gamma_m, ma_min) = if 2.0 * h1 >= h2 || regime == Regime::Boundary {
        ((h2 / (2.0 * h1)).min(1.0).acos(), h1.max(0.5 * h2))
    } else {
        ((2.0 * h1 / h2).acos(), 0.5 * h2)
    };
    let (mut gamma_max, mut l_max) = (None, None);
    if let (Regime::Upper, Some(g2)) = (regime, gamma2) {
        let excess = |g: f64| spec.la_excess(g).unwrap_or(f64::NAN);
        let found = find_extrema(excess, (0.0, g2), cfg)?
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Max)
            .max_by(|p, q| p.value.total_cmp(&q.value));
        let (g, v) = match found {
            Some(e) => (e.param, e.value),
            None => {
                let m = cfg.endpoint_margin * g2;
                golden_section(&excess, m, g2 - m, ExtremumKind::Max, cfg.param_tol * g2)?
            }
        };
        gamma_max = Some(g);
        l_max = Some(h1 + v);
    }
    Ok(HeightsAnalysis {
        h1,
        h2,
        regime,
        gamma2,
        gamma_max,
        l_max,
        gamma_m,
        ma_min,
    })
}

/// Every member on which `kind` (l_a or m_a) equals `target`.
pub fn solve_third(
    spec: &HeightsFamilySpec,
    kind: ElementKind,
    target: f64,
    cfg: &ScanConfig,
) -> Result<Vec<(f64, Triangle)>> {
    if !matches!(kind, ElementKind::BisectorA | ElementKind::MedianA) {
        return Err(Error::UnsupportedPattern(format!(
            "the heights family solves for l_a or m_a, not {kind}"
        )));
    }
    let scan = spec.scan(kind, target, cfg)?;
    scan.roots
        .iter()
        .map(|r| Ok((r.param, spec.triangle(r.param)?)))
        .collect()
}

/// One row per sample at the midpoints of `n` equal slices of (0, pi).
pub fn sweep(spec: &HeightsFamilySpec, n: usize) -> Result<Vec<[f64; 6]>> {
    (0..n)
        .map(|i| {
            let g = PI * (i as f64 + 0.5) / n as f64;
            let t = spec.triangle(g)?;
            Ok([g, la_of_gamma(spec, g)?, ma_of_gamma(spec, g)?, t.a(), t.b(), t.c()])
        })
        .collect()
}
