//! Acceptance criteria 1 to 9. Each test prints one `criterion N: PASS|FAIL`
//! line. Run with `cargo test -p trisolve-core --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::Rng;
use trisolve::bisectors::{self, BisectorsSpec};
use trisolve::corpus::{self, BISECTOR_TARGETS};
use trisolve::geometry::{congruent, AngleTriangle, ElementKind};
use trisolve::heights::{self, la_of_gamma, HeightsFamilySpec};
use trisolve::median_height::{self, MedianHeightSpec};
use trisolve::numerics::{find_extrema, ExtremumKind};
use trisolve::solver::EdgeKind;
use trisolve::*;

const ORACLE_GRID: usize = 400;

fn verdict(n: u32, failures: &[String], summary: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} ({summary})");
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {} problems", failures.len());
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn problem(k1: ElementKind, v1: f64, k2: ElementKind, v2: f64, kt: ElementKind, vt: f64) -> SolveProblem {
    SolveProblem::new(
        [Constraint::new(k1, v1), Constraint::new(k2, v2)],
        Constraint::new(kt, vt),
    )
}

fn pairwise_distinct(r: &SolveReport) -> bool {
    let tol = Tolerance::default();
    r.solutions.iter().enumerate().all(|(i, s)| {
        r.solutions[i + 1..]
            .iter()
            .all(|o| !congruent(&s.triangle, &o.triangle, &tol))
    })
}

/// Linear extrapolation to `x = end` from the points at distances `d` and `2d`.
fn extrapolate<F: Fn(f64) -> f64>(f: F, end: f64, d: f64) -> f64 {
    2.0 * f(end + d) - f(end + 2.0 * d)
}

#[test]
fn criterion_1_closed_form_limits() {
    let mut rng = corpus::rng(101);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let l1 = rng.gen_range(0.2..5.0);
        let l2 = l1 * rng.gen_range(0.05..=1.0);
        let spec = BisectorsSpec::new(l1, l2).unwrap();
        let lim = bisectors::limits(&spec);
        if lim.a_star + lim.b_star != lim.c_star {
            failures.push(format!("l=({l1}, {l2}): a*+b* != c*"));
        }
        let at = |beta: f64, k: ElementKind| bisectors::shape(&spec, beta).unwrap().1.element(k);
        let d = 1e-4 * lim.beta_max;
        let checks = [
            ("a*", extrapolate(|b| at(b, ElementKind::SideA), 0.0, d), lim.a_star),
            ("b*", extrapolate(|b| at(b, ElementKind::SideB), 0.0, d), lim.b_star),
            ("c*", extrapolate(|b| at(b, ElementKind::SideC), 0.0, d), lim.c_star),
            ("c**", extrapolate(|b| at(b, ElementKind::SideC), lim.beta_max, -d), lim.c_2star),
            ("h_a**", extrapolate(|b| at(b, ElementKind::HeightA), lim.beta_max, -d), lim.ha_2star),
            ("h_b**", extrapolate(|b| at(b, ElementKind::HeightB), lim.beta_max, -d), lim.hb_2star),
        ];
        for (name, got, want) in checks {
            let e = rel(got, want);
            worst = worst.max(e);
            if e > 1e-6 {
                failures.push(format!("l=({l1}, {l2}): {name} extrapolated {got} vs {want}"));
            }
        }
    }
    verdict(1, &failures, format!("50 specs, worst extrapolation error {worst:.2e}"));
}

#[test]
fn criterion_2_count_table() {
    let cfg = SolveConfig::default();
    let mut failures = Vec::new();
    let (mut checked, mut outside, mut edges) = (0, 0, 0);
    for (item, kind) in BISECTOR_TARGETS.iter().enumerate() {
        let seed = 200 + item as u64;
        for p in corpus::bisectors_item_problems(*kind, 60, seed).unwrap() {
            let r = solve(&p, &cfg).unwrap();
            match r.classification.expected {
                ExpectedCount::Count(n) => {
                    checked += 1;
                    if n != r.count {
                        failures.push(format!("{kind} {}: solved {} expected {n}", r.classification.band, r.count));
                    }
                }
                ExpectedCount::OutsideTable => outside += 1,
            }
        }
        for p in corpus::bisectors_edge_problems(*kind, 20, seed).unwrap() {
            edges += 1;
            let r = solve(&p, &cfg).unwrap();
            let flagged = r
                .classification
                .edges
                .iter()
                .any(|e| matches!(e, EdgeKind::Tangent | EdgeKind::AtLimit));
            if !flagged || r.classification.expected != ExpectedCount::Count(r.count) {
                failures.push(format!(
                    "{kind} edge {}: solved {} expected {:?}, edges {:?}",
                    r.classification.band, r.count, r.classification.expected, r.classification.edges
                ));
            }
        }
    }
    verdict(
        2,
        &failures,
        format!("{checked} banded problems, {outside} outside-table, {edges} edge targets"),
    );
}

#[test]
fn criterion_3_three_solution_regime() {
    let cfg = SolveConfig::default();
    let spec = HeightsFamilySpec::new(0.8, 1.0).unwrap();
    let an = heights::analyze(&spec, &cfg.scan).unwrap();
    let mut failures = Vec::new();
    let g2 = an.gamma2.unwrap();
    if (g2 - 0.625f64.acos()).abs() > 1e-9 {
        failures.push(format!("gamma2 {g2} vs {}", 0.625f64.acos()));
    }
    let l_at = la_of_gamma(&spec, g2).unwrap();
    if (l_at - 0.8).abs() > 1e-9 {
        failures.push(format!("l_a(gamma2) = {l_at}"));
    }
    let l_max = an.l_max.unwrap();
    let grid = GridSpec::square(ORACLE_GRID);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let t = 0.8 + (l_max - 0.8) * (i as f64 + 0.5) / 20.0;
        let p = problem(ElementKind::HeightA, 0.8, ElementKind::HeightB, 1.0, ElementKind::BisectorA, t);
        let r = solve(&p, &cfg).unwrap();
        worst = worst.max(r.max_residual());
        if r.count != 3 || !pairwise_distinct(&r) || r.max_residual() > 1e-8 {
            failures.push(format!("l_a={t}: count {} residual {:e}", r.count, r.max_residual()));
        }
        let g = grid_enumerate(&p, &grid).len();
        if g != r.count {
            failures.push(format!("l_a={t}: oracle {g} vs solver {}", r.count));
        }
    }
    verdict(
        3,
        &failures,
        format!("gamma2={g2:.10}, l_max={l_max:.10}, 20 targets, worst residual {worst:.1e}"),
    );
}

#[test]
fn criterion_4_small_gamma_asymptotics() {
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for (h1, h2) in [(0.3, 1.0), (0.45, 1.0), (0.7, 1.0)] {
        let spec = HeightsFamilySpec::new(h1, h2).unwrap();
        let stated = h1 * (2.0 * h1 * h1 + 2.0 * h2 * h2 - h1 * h2) / (12.0 * (h2 - h1) * (h2 - h1));
        for g in [1e-3, 1e-4] {
            let measured = spec.la_excess(g).unwrap() / (g * g);
            lines.push(format!("({h1},{h2}) gamma={g:e}: measured {measured:.6e}, stated {stated:.6e}"));
            if rel(measured, stated) > 1e-3 {
                failures.push(format!("({h1}, {h2}) at gamma={g:e}: measured {measured:.8e} vs stated {stated:.8e}"));
            }
        }
    }
    let spec = HeightsFamilySpec::new(1.0, 1.0).unwrap();
    let stated = -SQRT_2 / 4.0;
    for g in [1e-3, 1e-4] {
        let slope = (la_of_gamma(&spec, g).unwrap() - SQRT_2) / g;
        lines.push(format!("(1,1) gamma={g:e}: slope {slope:.6e}, stated {stated:.6e}"));
        if rel(slope, stated) > 1e-3 {
            failures.push(format!("(1, 1) at gamma={g:e}: slope {slope:.8e} vs stated {stated:.8e}"));
        }
    }
    for l in &lines {
        println!("  {l}");
    }
    verdict(4, &failures, format!("{} measurements", lines.len()));
}

/// Central differences of `f` at `n` interior points of `(lo, hi)`, relative step 1e-6.
fn slopes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            let h = 1e-6 * x;
            (x, f(x + h) - f(x - h))
        })
        .collect()
}

fn sign_changes(s: &[(f64, f64)]) -> usize {
    s.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).count()
}

#[test]
fn criterion_5_monotonicity() {
    use ElementKind::*;
    let mut rng = corpus::rng(505);
    let mut failures = Vec::new();
    let mut checks = 0;
    for _ in 0..20 {
        let h = rng.gen_range(0.3..3.0);
        let m = 0.5 * h * rng.gen_range(1.01..4.0);
        let spec = MedianHeightSpec::new(h, m).unwrap();
        for br in median_height::branches(&spec).unwrap() {
            let (lo, hi) = br.domain();
            let d = slopes(|g| median_height::lc_of_gamma(&spec, &br, g).unwrap(), lo, hi, 512);
            checks += 1;
            if let Some((x, _)) = d.iter().find(|(_, s)| *s >= 0.0) {
                failures.push(format!("l_c not decreasing: h={h} m={m} {} at gamma={x}", br.tag.label()));
            }
        }
    }
    let increasing = [AngleA, SideA, SideB, BisectorC, MedianC, HeightC];
    let decreasing = [AngleC, SideC];
    for _ in 0..20 {
        let l1 = rng.gen_range(0.3..3.0);
        let l2 = l1 * rng.gen_range(0.1..1.0);
        let spec = BisectorsSpec::new(l1, l2).unwrap();
        let lim = bisectors::limits(&spec);
        let at = |k: ElementKind| move |b: f64| bisectors::shape(&spec, b).unwrap().1.element(k);
        for (kinds, up) in [(&increasing[..], true), (&decreasing[..], false)] {
            for &k in kinds {
                checks += 1;
                let d = slopes(at(k), 0.0, lim.beta_max, 512);
                if let Some((x, _)) = d.iter().find(|(_, s)| (*s > 0.0) != up || *s == 0.0) {
                    failures.push(format!("{k} not monotone: l=({l1}, {l2}) at beta={x}"));
                }
            }
        }
        let unimodal = [
            (HeightA, ExtremumKind::Max, l2),
            (HeightB, ExtremumKind::Max, l1),
            (MedianA, ExtremumKind::Min, l2),
            (MedianB, ExtremumKind::Min, l1),
        ];
        for (k, kind, want) in unimodal {
            checks += 1;
            let d = slopes(at(k), 0.0, lim.beta_max, 512);
            if sign_changes(&d) != 1 {
                failures.push(format!("{k} not unimodal: l=({l1}, {l2}), {} slope changes", sign_changes(&d)));
                continue;
            }
            let ext = find_extrema(at(k), (0.0, lim.beta_max), &ScanConfig::default()).unwrap();
            match ext.iter().find(|e| e.kind == kind) {
                Some(e) if rel(e.value, want) <= 1e-6 => {}
                other => failures.push(format!("{k} extremum {other:?} vs {want}: l=({l1}, {l2})")),
            }
        }
    }
    verdict(5, &failures, format!("{checks} curves, 512 points each"));
}

#[test]
fn criterion_6_isosceles_bisector_ratio() {
    let ratio = |alpha: f64| {
        let t = AngleTriangle::new(alpha, PI - 2.0 * alpha, alpha).unwrap();
        t.element(ElementKind::BisectorA) / t.sides()[1]
    };
    let mut failures = Vec::new();
    let lo = ratio(1e-4);
    let hi = ratio(FRAC_PI_2 - 1e-4);
    if (lo - 2.0 / 3.0).abs() > 1e-3 {
        failures.push(format!("ratio at 1e-4 is {lo}"));
    }
    if (hi - SQRT_2).abs() > 1e-3 {
        failures.push(format!("ratio at pi/2 - 1e-4 is {hi}"));
    }
    let d = slopes(ratio, 1e-4, FRAC_PI_2 - 1e-4, 4096);
    if let Some((x, _)) = d.iter().find(|(_, s)| *s <= 0.0) {
        failures.push(format!("not increasing at alpha={x}"));
    }
    verdict(6, &failures, format!("limits {lo:.6} and {hi:.6}, 4096 slopes"));
}

#[test]
fn criterion_7_median_height_branches() {
    let cfg = SolveConfig::default();
    let grid = GridSpec::square(ORACLE_GRID);
    let mut rng = corpus::rng(707);
    let mut failures = Vec::new();
    for perp in [false, true] {
        for _ in 0..100 {
            let h = rng.gen_range(0.3..3.0);
            let m = if perp { 0.5 * h } else { 0.5 * h * rng.gen_range(1.01..4.0) };
            let t = h * 10f64.powf(rng.gen_range(-1.0..1.0));
            let p = problem(ElementKind::MedianA, m, ElementKind::HeightB, h, ElementKind::BisectorC, t);
            let r = solve(&p, &cfg).unwrap();
            let want = if perp { 1 } else { 2 };
            if r.count != want || !pairwise_distinct(&r) || r.max_residual() > 1e-8 {
                failures.push(format!("h={h} m={m} l_c={t}: count {} residual {:e}", r.count, r.max_residual()));
            }
            let g = grid_enumerate(&p, &grid).len();
            if g != r.count {
                failures.push(format!("h={h} m={m} l_c={t}: oracle {g} vs solver {}", r.count));
            }
        }
    }
    verdict(7, &failures, "100 two-branch and 100 perpendicular problems".into());
}

#[test]
fn criterion_8_three_bisectors() {
    use ElementKind::*;
    let cfg = SolveConfig::default();
    let mut rng = corpus::rng(808);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = [0; 3].map(|_| rng.gen_range(0.1..10.0));
        let p = problem(BisectorA, l[0], BisectorB, l[1], BisectorC, l[2]);
        let r = solve(&p, &cfg).unwrap();
        worst = worst.max(r.max_residual());
        if r.count != 1 || r.max_residual() > 1e-8 {
            failures.push(format!("{l:?}: count {} residual {:e}", r.count, r.max_residual()));
        }
    }
    verdict(8, &failures, format!("100 triples, worst residual {worst:.1e}"));
}

#[test]
fn criterion_9_scale_invariance() {
    let cfg = SolveConfig::default();
    let mut failures = Vec::new();
    let mut ps = Vec::new();
    for f in Family::ALL {
        ps.extend(corpus::problems(f, 7, 909).unwrap());
    }
    ps.truncate(20);
    for p in &ps {
        let base = solve(p, &cfg).unwrap();
        for k in [1e-3, 1e3] {
            let r = solve(&p.scaled(k), &cfg).unwrap();
            if r.count != base.count {
                failures.push(format!("{p:?} x{k}: count {} vs {}", r.count, base.count));
                continue;
            }
            for (s, b) in r.solutions.iter().zip(&base.solutions) {
                let bad = s
                    .triangle
                    .sides()
                    .iter()
                    .zip(b.triangle.sides())
                    .any(|(x, y)| rel(*x, k * y) > 1e-9);
                if bad {
                    failures.push(format!("{p:?} x{k}: {:?} vs {:?}", s.triangle, b.triangle));
                }
            }
        }
    }
    verdict(9, &failures, format!("{} problems, k in {{1e-3, 1e3}}", ps.len()));
}
