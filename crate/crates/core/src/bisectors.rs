//! Triangles with prescribed bisectors `l_a = l2 <= l_b = l1`, indexed by the
//! angle `beta` at B.
//!
//! For each `beta` the angle `alpha` is the unique solution of
//! `l_a / l_b = l2 / l1` on the shape, after which the shape is scaled so that
//! `l_b = l1`. The family runs from a collinear limit at `beta -> 0` to another
//! one at `beta -> beta_max = 2 atan(l2 / l1)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AngleTriangle, ElementKind, Triangle};
use crate::report::fmt_f64;
use crate::numerics::{brent, level_roots, Bracket, EndValue, LevelScan, ScanConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BisectorsSpec {
    pub l1: f64,
    pub l2: f64,
}

impl BisectorsSpec {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite() && l2 > 0.0 && l2 <= l1) {
            return Err(Error::InvalidInput(format!(
                "bisectors need 0 < l2 <= l1, got l1={l1} l2={l2}"
            )));
        }
        Ok(BisectorsSpec { l1, l2 })
    }

    pub fn ratio(&self) -> f64 {
        self.l2 / self.l1
    }

    pub fn beta_max(&self) -> f64 {
        2.0 * self.l2.atan2(self.l1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitSet {
    pub l1: f64,
    pub l2: f64,
    pub c_star: f64,
    pub a_star: f64,
    pub b_star: f64,
    pub c_2star: f64,
    pub beta_max: f64,
    pub alpha_max: f64,
    pub ha_2star: f64,
    pub hb_2star: f64,
    pub ma_star: f64,
    pub mb_star: f64,
    pub mc_star: f64,
    pub beta0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCheck {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl LimitSet {
    /// Re-derives the relations between the closed forms.
    pub fn self_check(&self) -> Vec<LimitCheck> {
        let (l1, l2) = (self.l1, self.l2);
        let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
        let c = self.c_star;
        let quad = (c * c - (l1 + l2) * c + 0.75 * l1 * l2) / (c * c);
        let b_closed = c / (2.0 * c / l2 - 1.0);
        let h = l1 * l2 / l1.hypot(l2);
        let mut out = vec![
            LimitCheck {
                name: "a* + b* = c*",
                ok: self.a_star + self.b_star == c,
                detail: fmt_f64(self.a_star + self.b_star - c),
            },
            LimitCheck {
                name: "c* solves the limit quadratic",
                ok: quad.abs() <= 1e-14,
                detail: fmt_f64(quad),
            },
            LimitCheck {
                name: "b* = c*/(2c*/l2 - 1)",
                ok: rel(self.b_star, b_closed) <= 1e-14,
                detail: fmt_f64(rel(self.b_star, b_closed)),
            },
            LimitCheck {
                name: "a* >= b*",
                ok: self.a_star >= self.b_star,
                detail: fmt_f64(self.a_star - self.b_star),
            },
            LimitCheck {
                name: "beta_max <= pi/2 <= alpha_max",
                ok: self.beta_max <= 0.5 * PI + 1e-15 && self.alpha_max >= 0.5 * PI - 1e-15,
                detail: format!("{} / {}", fmt_f64(self.beta_max), fmt_f64(self.alpha_max)),
            },
            LimitCheck {
                name: "h_a** = h_b** = l1 l2 / sqrt(l1^2 + l2^2)",
                ok: rel(self.ha_2star, h) <= 1e-15 && self.ha_2star == self.hb_2star,
                detail: fmt_f64(rel(self.ha_2star, h)),
            },
            LimitCheck {
                name: "m_c* >= 0",
                ok: self.mc_star >= 0.0,
                detail: fmt_f64(self.mc_star),
            },
            LimitCheck {
                name: "c** < c*",
                ok: self.c_2star < c,
                detail: format!("{} < {}", fmt_f64(self.c_2star), fmt_f64(c)),
            },
            LimitCheck {
                name: "0 < beta0 < beta_max",
                ok: self.beta0 > 0.0 && self.beta0 < self.beta_max,
                detail: fmt_f64(self.beta0),
            },
        ];
        if l1 == l2 {
            out.push(LimitCheck {
                name: "beta_max = pi/2 for equal bisectors",
                ok: rel(self.beta_max, 0.5 * PI) <= 1e-15,
                detail: fmt_f64(self.beta_max),
            });
        }
        out
    }
}

pub fn limits(spec: &BisectorsSpec) -> LimitSet {
    let (l1, l2) = (spec.l1, spec.l2);
    let c_star = 0.5 * (l1 + l2 + (l1 * l1 + l2 * l2 - l1 * l2).sqrt());
    let a_star = c_star / (c_star * (2.0 / l1) - 1.0);
    // Exact by Sterbenz, since c*/2 <= a* <= c*.
    let b_star = c_star - a_star;
    let beta_max = spec.beta_max();
    let h = l1 * l2 / l1.hypot(l2);
    LimitSet {
        l1,
        l2,
        c_star,
        a_star,
        b_star,
        c_2star: 0.5 * l1.hypot(l2),
        beta_max,
        alpha_max: PI - beta_max,
        ha_2star: h,
        hb_2star: h,
        ma_star: b_star + 0.5 * a_star,
        mb_star: a_star + 0.5 * b_star,
        mc_star: 0.5 * (a_star - b_star),
        beta0: beta0(spec),
    }
}

/// `l_a / l_b` for the shape with angles `alpha`, `beta` at A and B.
pub fn shape_ratio(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta < PI) {
        return Err(Error::DegenerateParameter(format!(
            "angles ({alpha}, {beta}) do not form a triangle"
        )));
    }
    ratio_of(alpha, beta, PI - alpha - beta)
}

fn ratio_of(alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    let s = AngleTriangle::new(alpha, beta, gamma)?;
    Ok(s.element(ElementKind::BisectorA) / s.element(ElementKind::BisectorB))
}

fn solve_or_bisect<F: Fn(f64) -> f64>(f: &F, br: Bracket) -> f64 {
    if let Ok(x) = brent(f, br, 0.0) {
        return x;
    }
    let (mut lo, mut hi, mut flo) = (br.lo, br.hi, br.f_lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if (v < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = v;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Angles (alpha, gamma) of the member at `beta`. The inner unknown is
/// `alpha` in the first half of the family and `gamma` in the second, so the
/// small angle at either collinear end is found to full relative precision.
fn inner_angles(r: f64, beta: f64, beta_max: f64) -> (f64, f64) {
    if r >= 1.0 {
        return (beta, PI - 2.0 * beta);
    }
    let span = PI - 2.0 * beta;
    let ratio = |alpha: f64, gamma: f64| ratio_of(alpha, beta, gamma).unwrap_or(f64::NAN);
    if beta < 0.5 * beta_max {
        let f = |alpha: f64| ratio(alpha, span - (alpha - beta)) - r;
        let br = Bracket {
            lo: beta,
            hi: PI - beta,
            f_lo: 1.0 - r,
            f_hi: (0.5 * beta).tan() - r,
        };
        let alpha = solve_or_bisect(&f, br);
        (alpha, span - (alpha - beta))
    } else {
        let f = |gamma: f64| ratio(PI - beta - gamma, gamma) - r;
        let br = Bracket {
            lo: 0.0,
            hi: span,
            f_lo: (0.5 * beta).tan() - r,
            f_hi: 1.0 - r,
        };
        let gamma = solve_or_bisect(&f, br);
        (PI - beta - gamma, gamma)
    }
}

fn beta0(spec: &BisectorsSpec) -> f64 {
    let r = spec.ratio();
    let bm = spec.beta_max();
    if r >= 1.0 {
        return PI / 3.0;
    }
    let f = |beta: f64| {
        let (alpha, gamma) = inner_angles(r, beta, bm);
        alpha - gamma
    };
    let br = Bracket {
        lo: 0.0,
        hi: bm,
        f_lo: -PI,
        f_hi: PI - bm,
    };
    solve_or_bisect(&f, br)
}

fn check_beta(spec: &BisectorsSpec, beta: f64) -> Result<f64> {
    let bm = spec.beta_max();
    if beta > 0.0 && beta < bm {
        Ok(bm)
    } else {
        Err(Error::DegenerateParameter(format!(
            "beta = {beta} outside (0, {bm})"
        )))
    }
}

/// The member at `beta` in angle form, scaled so `l_b = l1`.
pub fn shape(spec: &BisectorsSpec, beta: f64) -> Result<(f64, AngleTriangle)> {
    let bm = check_beta(spec, beta)?;
    let (alpha, gamma) = inner_angles(spec.ratio(), beta, bm);
    let s = AngleTriangle::new(alpha, beta, gamma)?.with_scale(ElementKind::BisectorB, spec.l1)?;
    Ok((alpha, s))
}

pub fn member(spec: &BisectorsSpec, beta: f64, _cfg: &ScanConfig) -> Result<(f64, Triangle)> {
    let (alpha, s) = shape(spec, beta)?;
    Ok((alpha, s.to_triangle()?))
}

pub fn element_of_beta(
    spec: &BisectorsSpec,
    beta: f64,
    kind: ElementKind,
    _cfg: &ScanConfig,
) -> Result<f64> {
    Ok(shape(spec, beta)?.1.element(kind))
}

/// Limits of `kind` at `beta -> 0` and `beta -> beta_max`.
pub fn end_values(lim: &LimitSet, kind: ElementKind) -> (EndValue, EndValue) {
    use ElementKind::*;
    use EndValue::{Finite, PosInf};
    match kind {
        SideA => (Finite(lim.a_star), PosInf),
        SideB => (Finite(lim.b_star), PosInf),
        SideC => (Finite(lim.c_star), Finite(lim.c_2star)),
        AngleA => (Finite(0.0), Finite(lim.alpha_max)),
        AngleB => (Finite(0.0), Finite(lim.beta_max)),
        AngleC => (Finite(PI), Finite(0.0)),
        HeightA => (Finite(0.0), Finite(lim.ha_2star)),
        HeightB => (Finite(0.0), Finite(lim.hb_2star)),
        HeightC => (Finite(0.0), PosInf),
        MedianA => (Finite(lim.ma_star), PosInf),
        MedianB => (Finite(lim.mb_star), PosInf),
        MedianC => (Finite(lim.mc_star), PosInf),
        BisectorA => (Finite(lim.l2), Finite(lim.l2)),
        BisectorB => (Finite(lim.l1), Finite(lim.l1)),
        BisectorC => (Finite(0.0), PosInf),
    }
}

pub fn scan(
    spec: &BisectorsSpec,
    lim: &LimitSet,
    kind: ElementKind,
    target: f64,
    cfg: &ScanConfig,
) -> Result<LevelScan> {
    let f = |b: f64| shape(spec, b).map(|s| s.1.element(kind)).unwrap_or(f64::NAN);
    level_roots(f, (0.0, lim.beta_max), target, end_values(lim, kind), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub beta: f64,
    pub alpha: f64,
    pub shape: AngleTriangle,
    pub part: u8,
    pub is_beta0: bool,
}

impl CurveSample {
    pub fn triangle(&self) -> Result<Triangle> {
        self.shape.to_triangle()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCurve {
    pub spec: BisectorsSpec,
    pub samples: Vec<CurveSample>,
}

/// `n` members: `n - 1` at midpoints of equal slices of (0, beta_max) plus the
/// isosceles member at `beta0`, in increasing `beta`.
pub fn sweep(spec: &BisectorsSpec, n: usize, _cfg: &ScanConfig) -> Result<FamilyCurve> {
    if n < 64 {
        return Err(Error::InvalidInput(format!("sweep needs n >= 64, got {n}")));
    }
    let lim = limits(spec);
    let m = n - 1;
    let mut betas: Vec<(f64, bool)> = (0..m)
        .map(|i| (lim.beta_max * (i as f64 + 0.5) / m as f64, false))
        .collect();
    betas.push((lim.beta0, true));
    betas.sort_by(|p, q| p.0.total_cmp(&q.0));
    betas.dedup_by(|p, q| p.0 == q.0);
    let samples = betas
        .into_iter()
        .map(|(beta, is_beta0)| {
            let (alpha, shape) = shape(spec, beta)?;
            let part = if beta <= lim.beta0 { 1 } else { 2 };
            Ok(CurveSample {
                beta,
                alpha,
                shape,
                part,
                is_beta0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyCurve {
        spec: *spec,
        samples,
    })
}
