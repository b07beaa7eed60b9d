//! Brute-force cross-check. Enumerates triangle shapes on a grid over
//! `(alpha, beta)`, scales each shape so one prescribed length holds exactly,
//! and refines the cells where the other two residuals vanish together. It
//! uses nothing from the family modules, only the element formulas.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{congruent, AngleTriangle, Tolerance, Triangle};
use crate::solver::{Constraint, SolveProblem, SolveReport};

/// A cell is refined when each residual changes sign across it or dips below
/// this value on one of its corners.
pub const CANDIDATE_RESIDUAL: f64 = 1e-3;

/// Refined shapes closer than this fraction of the perimeter are one class.
pub const MERGE_RADIUS: f64 = 1e-6;

const NEWTON_ITERATIONS: usize = 60;
const ACCEPT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_alpha: usize,
    pub n_beta: usize,
    /// Offset of the outermost nodes from the edges of the unit square.
    pub margin: f64,
}

impl GridSpec {
    pub fn new(n_alpha: usize, n_beta: usize, margin: f64) -> Result<Self> {
        let g = GridSpec {
            n_alpha,
            n_beta,
            margin,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn counting() -> Self {
        GridSpec {
            n_alpha: 2000,
            n_beta: 2000,
            margin: 1e-7,
        }
    }

    pub fn smoke() -> Self {
        GridSpec {
            n_alpha: 200,
            n_beta: 200,
            margin: 1e-7,
        }
    }

    pub fn square(n: usize) -> Self {
        GridSpec {
            n_alpha: n,
            n_beta: n,
            ..GridSpec::smoke()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_alpha < 50 || self.n_beta < 50 {
            return Err(Error::InvalidInput(format!(
                "grid {}x{} needs at least 50 nodes per axis",
                self.n_alpha, self.n_beta
            )));
        }
        if !(self.margin > 0.0 && self.margin < 0.01) {
            return Err(Error::InvalidInput(format!(
                "grid margin {} must lie in (0, 0.01)",
                self.margin
            )));
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::counting()
    }
}

/// Chebyshev nodes on (0, 1), clustered toward both ends.
fn nodes(n: usize, margin: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = 0.5 * (1.0 - (PI * (i as f64 + 0.5) / n as f64).cos());
            margin + (1.0 - 2.0 * margin) * t
        })
        .collect()
}

/// The problem as one length that fixes the scale and two residual checks.
struct Scorer {
    scale: Constraint,
    checks: [Constraint; 2],
}

impl Scorer {
    fn new(problem: &SolveProblem) -> Option<Self> {
        let all = problem.constraints();
        let i = all.iter().position(|c| c.kind.is_length())?;
        let mut rest = all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| *c);
        Some(Scorer {
            scale: all[i],
            checks: [rest.next()?, rest.next()?],
        })
    }

    fn shape(&self, u: f64, v: f64) -> Option<AngleTriangle> {
        if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
            return None;
        }
        let alpha = PI * u;
        let beta = PI * (1.0 - u) * v;
        let gamma = PI * (1.0 - u) * (1.0 - v);
        AngleTriangle::new(alpha, beta, gamma)
            .and_then(|s| s.with_scale(self.scale.kind, self.scale.value))
            .ok()
    }

    fn residuals(&self, u: f64, v: f64) -> Option<[f64; 2]> {
        let s = self.shape(u, v)?;
        let r = self
            .checks
            .map(|c| (s.element(c.kind) - c.value) / c.value);
        (r[0].is_finite() && r[1].is_finite()).then_some(r)
    }
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

fn changes_sign(xs: [f64; 4]) -> bool {
    xs.iter().any(|x| *x <= 0.0) && xs.iter().any(|x| *x >= 0.0)
}

/// Damped Newton on the two residuals with a central-difference Jacobian.
fn newton(sc: &Scorer, mut u: f64, mut v: f64) -> Option<(f64, f64)> {
    let mut r = sc.residuals(u, v)?;
    for _ in 0..NEWTON_ITERATIONS {
        if norm(r) <= 1e-14 {
            break;
        }
        let hu = 1e-7 * u.min(1.0 - u);
        let hv = 1e-7 * v.min(1.0 - v);
        let ru = (sc.residuals(u + hu, v)?, sc.residuals(u - hu, v)?);
        let rv = (sc.residuals(u, v + hv)?, sc.residuals(u, v - hv)?);
        let j = [
            [(ru.0[0] - ru.1[0]) / (2.0 * hu), (rv.0[0] - rv.1[0]) / (2.0 * hv)],
            [(ru.0[1] - ru.1[1]) / (2.0 * hu), (rv.0[1] - rv.1[1]) / (2.0 * hv)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if !det.is_finite() || det == 0.0 {
            return None;
        }
        let du = (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        let dv = (r[1] * j[0][0] - r[0] * j[1][0]) / det;
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let (nu, nv) = (u - t * du, v - t * dv);
            if let Some(nr) = sc.residuals(nu, nv) {
                if norm(nr) < norm(r) {
                    (u, v, r) = (nu, nv, nr);
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (norm(r) <= ACCEPT_RESIDUAL).then_some((u, v))
}

/// Congruence classes of triangles satisfying all three prescribed elements,
/// in grid order. Shapes with an angle below `pi * margin` are out of reach.
/// Empty if no prescribed element is a length.
pub fn grid_enumerate(problem: &SolveProblem, grid: &GridSpec) -> Vec<Triangle> {
    let Some(sc) = Scorer::new(problem) else {
        return Vec::new();
    };
    let us = nodes(grid.n_alpha.max(2), grid.margin);
    let vs = nodes(grid.n_beta.max(2), grid.margin);
    let values: Vec<Vec<Option<[f64; 2]>>> = us
        .par_iter()
        .map(|&u| vs.iter().map(|&v| sc.residuals(u, v)).collect())
        .collect();

    let cells: Vec<(usize, usize)> = (0..us.len() - 1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let values = &values;
            (0..vs.len() - 1).filter_map(move |j| {
                let corners = [
                    values[i][j]?,
                    values[i + 1][j]?,
                    values[i][j + 1]?,
                    values[i + 1][j + 1]?,
                ];
                // A residual that only touches zero (m = h/2 makes h_b a ridge)
                // never changes sign, so smallness alone also qualifies it.
                let hit = |k: usize| {
                    let r = corners.map(|c| c[k]);
                    changes_sign(r) || r.iter().any(|x| x.abs() < CANDIDATE_RESIDUAL)
                };
                (hit(0) && hit(1)).then_some((i, j))
            })
        })
        .collect();

    let refined: Vec<Triangle> = cells
        .par_iter()
        .filter_map(|&(i, j)| {
            let (u, v) = newton(&sc, 0.5 * (us[i] + us[i + 1]), 0.5 * (vs[j] + vs[j + 1]))?;
            let shape = sc.shape(u, v)?;
            // Collinear shapes can satisfy relative residuals asymptotically
            // without being solutions; they lie outside the gridded region.
            let min_angle = shape.angles().into_iter().fold(PI, f64::min);
            (min_angle >= PI * grid.margin).then(|| shape.to_triangle().ok())?
        })
        .collect();

    let merge = Tolerance {
        rel: MERGE_RADIUS,
        abs: 0.0,
    };
    let mut classes: Vec<Triangle> = Vec::new();
    for t in refined {
        if !classes.iter().any(|c| congruent(c, &t, &merge)) {
            classes.push(t);
        }
    }
    classes
}

/// Sign changes of `f` over `n` uniform samples of the interval, shrunk by a
/// relative margin of 1e-9 at each end. Exact zeros are skipped.
pub fn root_count_scan<F: Fn(f64) -> f64>(f: F, interval: (f64, f64), n: usize) -> Result<usize> {
    let (lo, hi) = interval;
    if !(lo < hi && n >= 2) {
        return Err(Error::InvalidInput(format!(
            "need lo < hi and n >= 2, got ({lo}, {hi}), n = {n}"
        )));
    }
    let m = 1e-9 * (hi - lo);
    let (a, w) = (lo + m, hi - lo - 2.0 * m);
    let mut count = 0;
    let mut last = 0.0f64;
    for i in 0..n {
        let x = a + w * i as f64 / (n - 1) as f64;
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFiniteEvaluation { param: x });
        }
        if y != 0.0 {
            if last != 0.0 && (y > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = y;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub grid_count: Option<usize>,
    pub diagnostics: Vec<String>,
}

/// Re-checks a report from the sides alone and against the grid count.
///
/// Reports with tangent or at-limit behavior skip the grid comparison: a grid
/// cannot resolve a double root.
pub fn verify_report(report: &SolveReport, tol: &Tolerance, grid: &GridSpec) -> Verdict {
    let mut diagnostics = Vec::new();
    let mut pass = true;
    if report.count != report.solutions.len() {
        pass = false;
        diagnostics.push(format!(
            "count {} but {} solutions listed",
            report.count,
            report.solutions.len()
        ));
    }
    for (i, s) in report.solutions.iter().enumerate() {
        let t = match Triangle::new(s.triangle.a(), s.triangle.b(), s.triangle.c()) {
            Ok(t) => t,
            Err(e) => {
                pass = false;
                diagnostics.push(format!("solution {i}: {e}"));
                continue;
            }
        };
        for c in report.problem.constraints() {
            let got = t.element(c.kind);
            if (got - c.value).abs() > tol.rel * c.value.abs() + tol.abs {
                pass = false;
                diagnostics.push(format!("solution {i}: {} = {got:e}, prescribed {:e}", c.kind, c.value));
            }
        }
        for (j, o) in report.solutions.iter().enumerate().skip(i + 1) {
            if congruent(&s.triangle, &o.triangle, tol) {
                pass = false;
                diagnostics.push(format!("solutions {i} and {j} are congruent"));
            }
        }
    }
    let grid_count = if report.classification.edges.is_empty() {
        let n = grid_enumerate(&report.problem, grid).len();
        if n != report.count {
            pass = false;
            diagnostics.push(format!("solver count {} but grid count {n}", report.count));
        }
        Some(n)
    } else {
        diagnostics.push("edge case: grid count not compared".into());
        None
    };
    Verdict {
        pass,
        grid_count,
        diagnostics,
    }
}
