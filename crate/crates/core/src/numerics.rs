//! Bracketing, Brent refinement, extremum location and level-set root
//! counting for scalar functions on an open interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub samples: usize,
    pub param_tol: f64,
    pub residual_tol: f64,
    pub endpoint_margin: f64,
    /// Log-spaced points added near each end on top of the uniform grid.
    pub end_samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            samples: 4096,
            param_tol: 1e-12,
            residual_tol: 1e-10,
            endpoint_margin: 1e-9,
            end_samples: 64,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.samples < 16 {
            return bad(format!("samples = {} must be at least 16", self.samples));
        }
        if !(self.param_tol > 0.0 && self.residual_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if !(self.endpoint_margin > 0.0 && self.endpoint_margin < 0.01) {
            return bad(format!(
                "endpoint margin {} must lie in (0, 0.01)",
                self.endpoint_margin
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub param: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Limit of a curve at one end of its open parameter interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndValue {
    Finite(f64),
    PosInf,
    NegInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Simple,
    Tangent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelRoot {
    pub param: f64,
    pub kind: RootKind,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LevelScan {
    /// Ordered by parameter.
    pub roots: Vec<LevelRoot>,
    /// Ends whose limit equals the target; these are not roots.
    pub at_limit: Vec<End>,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteEvaluation { param: x })
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("interval ({lo}, {hi}) is empty")))
    }
}

/// Uniform samples of the margin-shrunk interval plus log-spaced points
/// approaching each end. Strictly increasing.
pub fn sample_grid(interval: (f64, f64), cfg: &ScanConfig) -> Vec<f64> {
    let (lo, hi) = interval;
    let w = hi - lo;
    let first = cfg.endpoint_margin * w;
    let a = lo + first;
    let b = hi - first;
    let n = cfg.samples.max(2);
    let step = (b - a) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    if cfg.end_samples > 0 && step > first {
        let ratio = (step / first).ln();
        for k in 1..cfg.end_samples {
            let d = first * (ratio * k as f64 / cfg.end_samples as f64).exp();
            xs.push(lo + d);
            xs.push(hi - d);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|x, prev| *x <= *prev);
    xs
}

pub fn find_brackets<F: Fn(f64) -> f64>(
    f: F,
    interval: (f64, f64),
    cfg: &ScanConfig,
) -> Result<Vec<Bracket>> {
    check_interval(interval.0, interval.1)?;
    let xs = sample_grid(interval, cfg);
    let mut out = Vec::new();
    let mut prev = (xs[0], eval(&f, xs[0])?);
    for &x in &xs[1..] {
        let v = eval(&f, x)?;
        if (prev.1 < 0.0 && v > 0.0) || (prev.1 > 0.0 && v < 0.0) || (prev.1 != 0.0 && v == 0.0) {
            out.push(Bracket {
                lo: prev.0,
                hi: x,
                f_lo: prev.1,
                f_hi: v,
            });
        }
        prev = (x, v);
    }
    Ok(out)
}

pub fn refine_root<F: Fn(f64) -> f64>(f: F, b: Bracket, cfg: &ScanConfig) -> Result<f64> {
    brent(&f, b, cfg.param_tol)
}

/// Brent's method with bisection fallback. Stops when the bracket half-width
/// drops below `x_tol / 2` plus a few ulps of the iterate.
pub fn brent<F: Fn(f64) -> f64>(f: &F, br: Bracket, x_tol: f64) -> Result<f64> {
    let (mut a, mut b, mut fa, mut fb) = (br.lo, br.hi, br.f_lo, br.f_hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidInput(format!(
            "bracket [{a}, {b}] has no sign change"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(xm) };
        fb = eval(f, b)?;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        lo: b.min(c),
        hi: b.max(c),
    })
}

/// Golden-section search for the extremum of `kind` inside `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    kind: ExtremumKind,
    x_tol: f64,
) -> Result<(f64, f64)> {
    let sign = match kind {
        ExtremumKind::Min => 1.0,
        ExtremumKind::Max => -1.0,
    };
    let g = |x: f64| -> Result<f64> { Ok(sign * eval(f, x)?) };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..MAX_ITERATIONS {
        let tol = x_tol + 4.0 * f64::EPSILON * x1.abs().max(x2.abs());
        if b - a <= tol {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - GOLDEN * (b - a);
            g1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + GOLDEN * (b - a);
            g2 = g(x2)?;
        }
    }
    let (x, gx) = if g1 <= g2 { (x1, g1) } else { (x2, g2) };
    Ok((x, sign * gx))
}

fn noise_floor(u: f64, v: f64) -> f64 {
    16.0 * f64::EPSILON * u.abs().max(v.abs())
}

fn extrema_on<F: Fn(f64) -> f64>(
    f: &F,
    xs: &[f64],
    vs: &[f64],
    cfg: &ScanConfig,
) -> Result<Vec<Extremum>> {
    // Significant differences only; steps within rounding noise are skipped.
    let steps: Vec<(usize, f64)> = (0..xs.len() - 1)
        .filter_map(|i| {
            let d = vs[i + 1] - vs[i];
            (d.abs() > noise_floor(vs[i], vs[i + 1])).then_some((i, d))
        })
        .collect();
    let mut out = Vec::new();
    for w in steps.windows(2) {
        let ((i, d0), (j, d1)) = (w[0], w[1]);
        if d0.signum() == d1.signum() {
            continue;
        }
        let kind = if d0 > 0.0 {
            ExtremumKind::Max
        } else {
            ExtremumKind::Min
        };
        let (lo, hi) = (xs[i], xs[j + 1]);
        let x_tol = cfg.param_tol * lo.abs().max(hi.abs()).min(hi - lo).max(f64::MIN_POSITIVE);
        let (param, value) = golden_section(f, lo, hi, kind, x_tol)?;
        out.push(Extremum { param, value, kind });
    }
    Ok(out)
}

/// Interior local extrema, located on the sampling grid and refined by
/// golden-section search.
pub fn find_extrema<F: Fn(f64) -> f64>(
    f: F,
    interval: (f64, f64),
    cfg: &ScanConfig,
) -> Result<Vec<Extremum>> {
    check_interval(interval.0, interval.1)?;
    let xs = sample_grid(interval, cfg);
    let vs = xs.iter().map(|&x| eval(&f, x)).collect::<Result<Vec<_>>>()?;
    extrema_on(&f, &xs, &vs, cfg)
}

#[derive(Clone, Copy, Debug)]
struct Node {
    x: f64,
    g: f64,
    end: Option<End>,
}

/// All solutions of `f(x) = target` on the open interval.
///
/// The curve is sampled on [`sample_grid`], its extrema are inserted as extra
/// nodes and the two ends contribute virtual nodes carrying the analytic
/// limits. A node is on the level when `|f - target| <= residual_tol * |target|`.
/// A run of such nodes touching an end is reported as `at_limit`, an interior
/// run flanked by equal signs is a tangent root, anything else is a simple root.
pub fn level_roots<F: Fn(f64) -> f64>(
    f: F,
    interval: (f64, f64),
    target: f64,
    ends: (EndValue, EndValue),
    cfg: &ScanConfig,
) -> Result<LevelScan> {
    let (lo, hi) = interval;
    check_interval(lo, hi)?;
    let xs = sample_grid(interval, cfg);
    let vs = xs.iter().map(|&x| eval(&f, x)).collect::<Result<Vec<_>>>()?;
    let extrema = extrema_on(&f, &xs, &vs, cfg)?;

    let mut nodes: Vec<Node> = xs
        .iter()
        .zip(&vs)
        .map(|(&x, &v)| Node {
            x,
            g: v - target,
            end: None,
        })
        .collect();
    for e in &extrema {
        nodes.push(Node {
            x: e.param,
            g: e.value - target,
            end: None,
        });
    }
    nodes.sort_by(|p, q| p.x.total_cmp(&q.x));
    nodes.dedup_by(|n, prev| n.x == prev.x);
    let virtual_g = |e: EndValue| match e {
        EndValue::Finite(v) => v - target,
        EndValue::PosInf => f64::INFINITY,
        EndValue::NegInf => f64::NEG_INFINITY,
    };
    nodes.insert(
        0,
        Node {
            x: lo,
            g: virtual_g(ends.0),
            end: Some(End::Lower),
        },
    );
    nodes.push(Node {
        x: hi,
        g: virtual_g(ends.1),
        end: Some(End::Upper),
    });

    let band = cfg.residual_tol * target.abs();
    let state = |n: &Node| -> i8 {
        if n.g.abs() <= band {
            0
        } else if n.g > 0.0 {
            1
        } else {
            -1
        }
    };
    let g = |x: f64| -> f64 { f(x) - target };

    let mut scan = LevelScan::default();
    let mut prev: Option<usize> = None;
    let mut i = 0;
    while i < nodes.len() {
        if state(&nodes[i]) != 0 {
            if let Some(p) = prev {
                if state(&nodes[p]) != state(&nodes[i]) {
                    crossing(&g, &nodes[p], &nodes[i], interval, cfg, &mut scan)?;
                }
            }
            prev = Some(i);
            i += 1;
            continue;
        }
        let start = i;
        while i < nodes.len() && state(&nodes[i]) == 0 {
            i += 1;
        }
        let run = &nodes[start..i];
        let touched: Vec<End> = run.iter().filter_map(|n| n.end).collect();
        if !touched.is_empty() {
            scan.at_limit.extend(touched);
        } else {
            let best = run
                .iter()
                .min_by(|p, q| p.g.abs().total_cmp(&q.g.abs()))
                .map(|n| n.x)
                .unwrap_or(run[0].x);
            let left = prev.map(|p| state(&nodes[p]));
            let right = nodes.get(i).map(&state);
            let kind = match (left, right) {
                (Some(l), Some(r)) if l != r => RootKind::Simple,
                _ => RootKind::Tangent,
            };
            scan.roots.push(LevelRoot { param: best, kind });
        }
        prev = None;
    }
    Ok(scan)
}

fn crossing<G: Fn(f64) -> f64>(
    g: &G,
    p: &Node,
    q: &Node,
    interval: (f64, f64),
    cfg: &ScanConfig,
    scan: &mut LevelScan,
) -> Result<()> {
    let x_tol = |x: f64| cfg.param_tol * (x - interval.0).min(interval.1 - x).max(0.0);
    match (p.end, q.end) {
        (None, None) => {
            let br = Bracket {
                lo: p.x,
                hi: q.x,
                f_lo: p.g,
                f_hi: q.g,
            };
            let x = brent(g, br, x_tol(0.5 * (p.x + q.x)))?;
            scan.roots.push(LevelRoot {
                param: x,
                kind: RootKind::Simple,
            });
        }
        (Some(end), None) | (None, Some(end)) => {
            let (real, virt) = if p.end.is_none() { (p, q) } else { (q, p) };
            match descend(g, real, virt.x, virt.g, interval, cfg)? {
                Some(x) => scan.roots.push(LevelRoot {
                    param: x,
                    kind: RootKind::Simple,
                }),
                None => scan.at_limit.push(end),
            }
        }
        (Some(_), Some(_)) => {}
    }
    Ok(())
}

/// Chases a sign change between the last real node and a virtual end node by
/// halving the distance to the end. Returns `None` if the root cannot be
/// separated from the end in floating point.
fn descend<G: Fn(f64) -> f64>(
    g: &G,
    real: &Node,
    end_x: f64,
    end_g: f64,
    interval: (f64, f64),
    cfg: &ScanConfig,
) -> Result<Option<f64>> {
    let mut inner = (real.x, real.g);
    let mut dist = real.x - end_x;
    for _ in 0..64 {
        dist *= 0.5;
        let x = end_x + dist;
        if x == end_x || x == inner.0 {
            return Ok(None);
        }
        let v = g(x);
        if !v.is_finite() {
            return Ok(None);
        }
        if v.signum() == end_g.signum() && v != 0.0 {
            let (lo, hi, f_lo, f_hi) = if x < inner.0 {
                (x, inner.0, v, inner.1)
            } else {
                (inner.0, x, inner.1, v)
            };
            let tol = cfg.param_tol * (0.5 * (lo + hi) - interval.0).min(interval.1 - 0.5 * (lo + hi)).max(0.0);
            return brent(g, Bracket { lo, hi, f_lo, f_hi }, tol).map(Some);
        }
        if v == 0.0 {
            return Ok(Some(x));
        }
        inner = (x, v);
    }
    Ok(None)
}
