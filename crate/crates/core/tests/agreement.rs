//! Solver against count tables and the grid oracle over seeded corpora.

use rayon::prelude::*;
use trisolve::corpus;
use trisolve::{
    expected_count, grid_enumerate, solve, verify_report, ExpectedCount, Family, GridSpec, SolveConfig,
    SolveProblem, Tolerance,
};

const PER_FAMILY: usize = 1000;

fn corpus_of(f: Family, seed: u64) -> Vec<SolveProblem> {
    corpus::problems(f, PER_FAMILY, seed).unwrap()
}

fn table_agreement(f: Family, seed: u64) {
    let cfg = SolveConfig::default();
    let failures: Vec<String> = corpus_of(f, seed)
        .par_iter()
        .filter_map(|p| {
            let r = match solve(p, &cfg) {
                Ok(r) => r,
                Err(e) => return Some(format!("{p:?}: {e}")),
            };
            let want = expected_count(p, &cfg).unwrap();
            if let ExpectedCount::Count(n) = want.count {
                if n != r.count {
                    return Some(format!("{p:?}: {} solutions, table {n} ({})", r.count, want.band));
                }
            }
            (r.max_residual() > 1e-8).then(|| format!("{p:?}: residual {:e}", r.max_residual()))
        })
        .collect();
    assert!(failures.is_empty(), "{} failures, first: {:?}", failures.len(), &failures[..failures.len().min(5)]);
}

#[test]
fn bisectors_counts_match_table() {
    table_agreement(Family::Bisectors, 1);
}

#[test]
fn heights_counts_match_table() {
    table_agreement(Family::Heights, 2);
}

#[test]
fn median_height_counts_match_table() {
    table_agreement(Family::MedianHeight, 3);
}

#[test]
fn oracle_agrees_on_subset() {
    let cfg = SolveConfig::default();
    let grid = GridSpec::square(300);
    let tol = Tolerance::default();
    for (i, f) in Family::ALL.into_iter().enumerate() {
        for p in corpus::problems(f, 60, 40 + i as u64).unwrap() {
            let r = solve(&p, &cfg).unwrap();
            let v = verify_report(&r, &tol, &grid);
            assert!(v.pass, "{p:?}: {:?}", v.diagnostics);
        }
    }
}

#[test]
fn oracle_stable_under_refinement() {
    for (i, f) in Family::ALL.into_iter().enumerate() {
        for p in corpus::problems(f, 12, 70 + i as u64).unwrap() {
            let coarse = grid_enumerate(&p, &GridSpec::square(300)).len();
            let fine = grid_enumerate(&p, &GridSpec::square(600)).len();
            assert_eq!(coarse, fine, "{p:?}");
        }
    }
}

#[test]
fn counts_scale_invariant() {
    let cfg = SolveConfig::default();
    for (i, f) in Family::ALL.into_iter().enumerate() {
        for p in corpus::problems(f, 40, 90 + i as u64).unwrap() {
            let base = solve(&p, &cfg).unwrap();
            for k in [1e-3, 1.0, 1e3] {
                let r = solve(&p.scaled(k), &cfg).unwrap();
                assert_eq!(r.count, base.count, "{p:?} x{k}");
                assert!(r.max_residual() <= 1e-8, "{p:?} x{k}: {:e}", r.max_residual());
            }
        }
    }
}
