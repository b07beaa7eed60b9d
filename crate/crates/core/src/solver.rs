//! Problems with two fixed elements and a target third element: dispatch to
//! the family carrying the fixed pair, enumerate the members hitting the
//! target, and predict the count from the closed-form bounds of each family.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::bisectors::{self, BisectorsSpec, LimitSet};
use crate::error::{Error, Result};
use crate::geometry::{congruent, ElementKind, Tolerance, Triangle};
use crate::heights::{self, HeightsAnalysis, HeightsFamilySpec, Regime};
use crate::median_height::{self, Branch, MedianHeightSpec};
use crate::numerics::{End, LevelScan, RootKind, ScanConfig};

/// Relative distance to a band edge (or to a regime boundary) inside which the
/// count table makes no prediction, unless the target sits on the edge.
pub const NEAR_EDGE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ElementKind,
    pub value: f64,
}

impl Constraint {
    pub fn new(kind: ElementKind, value: f64) -> Self {
        Constraint { kind, value }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.kind, self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveProblem {
    pub fixed: [Constraint; 2],
    pub target: Constraint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "bisectors")]
    Bisectors,
    #[serde(rename = "heights")]
    Heights,
    #[serde(rename = "medianheight")]
    MedianHeight,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Bisectors, Family::Heights, Family::MedianHeight];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bisectors => "bisectors",
            Family::Heights => "heights",
            Family::MedianHeight => "medianheight",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bisectors" => Ok(Family::Bisectors),
            "heights" => Ok(Family::Heights),
            "medianheight" => Ok(Family::MedianHeight),
            _ => Err(Error::InvalidInput(format!(
                "unknown family `{s}` (bisectors, heights, medianheight)"
            ))),
        }
    }
}

/// The fixed pair with its values, in problem labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pattern {
    Bisectors { l_a: f64, l_b: f64 },
    Heights { h_a: f64, h_b: f64 },
    MedianHeight { m_a: f64, h_b: f64 },
}

impl Pattern {
    pub fn family(&self) -> Family {
        match self {
            Pattern::Bisectors { .. } => Family::Bisectors,
            Pattern::Heights { .. } => Family::Heights,
            Pattern::MedianHeight { .. } => Family::MedianHeight,
        }
    }
}

impl SolveProblem {
    pub fn new(fixed: [Constraint; 2], target: Constraint) -> Self {
        SolveProblem { fixed, target }
    }

    pub fn constraints(&self) -> [Constraint; 3] {
        [self.fixed[0], self.fixed[1], self.target]
    }

    pub fn validate(&self) -> Result<()> {
        for c in self.constraints() {
            if !(c.value.is_finite() && c.value > 0.0) {
                return Err(Error::InvalidInput(format!("{c} must be positive and finite")));
            }
            if c.kind.is_angle() && c.value >= PI {
                return Err(Error::InvalidInput(format!("angle {c} must be below pi")));
            }
        }
        let k = self.constraints().map(|c| c.kind);
        if k[0] == k[1] || k[0] == k[2] || k[1] == k[2] {
            return Err(Error::UnsupportedPattern(format!(
                "elements must be distinct, got {}, {}, {}",
                k[0], k[1], k[2]
            )));
        }
        Ok(())
    }

    pub fn pattern(&self) -> Result<Pattern> {
        use ElementKind::*;
        let value = |kind: ElementKind| {
            self.fixed
                .iter()
                .find(|c| c.kind == kind)
                .map(|c| c.value)
                .unwrap_or(f64::NAN)
        };
        let mut kinds = [self.fixed[0].kind, self.fixed[1].kind];
        kinds.sort();
        match kinds {
            [HeightA, HeightB] => Ok(Pattern::Heights {
                h_a: value(HeightA),
                h_b: value(HeightB),
            }),
            [HeightB, MedianA] => Ok(Pattern::MedianHeight {
                m_a: value(MedianA),
                h_b: value(HeightB),
            }),
            [BisectorA, BisectorB] => Ok(Pattern::Bisectors {
                l_a: value(BisectorA),
                l_b: value(BisectorB),
            }),
            [x, y] => Err(Error::UnsupportedPattern(format!(
                "fixed pair {{{x}, {y}}} is not one of {{l_a, l_b}}, {{h_a, h_b}}, {{m_a, h_b}}"
            ))),
        }
    }

    /// The same problem with every length multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let s = |c: Constraint| {
            if c.kind.is_length() {
                Constraint::new(c.kind, k * c.value)
            } else {
                c
            }
        };
        SolveProblem {
            fixed: [s(self.fixed[0]), s(self.fixed[1])],
            target: s(self.target),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub scan: ScanConfig,
    pub tolerance: Tolerance,
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        self.scan.validate()?;
        self.tolerance.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Tangent,
    AtLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedCount {
    Count(usize),
    OutsideTable,
}

impl ExpectedCount {
    pub fn count(self) -> Option<usize> {
        match self {
            ExpectedCount::Count(n) => Some(n),
            ExpectedCount::OutsideTable => None,
        }
    }
}

impl Serialize for ExpectedCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExpectedCount::Count(n) => s.serialize_u64(*n as u64),
            ExpectedCount::OutsideTable => s.serialize_str("outside-table"),
        }
    }
}

/// What the count table predicts for a problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub rule: String,
    /// The band the target falls in, e.g. `(h**, l_a)`, or `= l_a` on an edge.
    pub band: String,
    pub count: ExpectedCount,
    /// Name of the band edge the target sits on, if any.
    pub edge: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub family: Family,
    pub rule: String,
    pub band: String,
    pub expected: ExpectedCount,
    /// Edge behavior observed on the family curve.
    pub edges: Vec<EdgeKind>,
    /// Relabeling applied before solving, undone in the solutions.
    pub permutation: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum FamilyLimits {
    #[serde(rename = "bisectors")]
    Bisectors(LimitSet),
    #[serde(rename = "heights")]
    Heights(HeightsAnalysis),
    #[serde(rename = "medianheight")]
    MedianHeight { branches: Vec<Branch> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    #[serde(flatten)]
    pub triangle: Triangle,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Family parameter: `beta` for bisectors, `gamma` otherwise.
    pub parameter: f64,
    pub branch: Option<String>,
    pub root: RootKind,
    /// `|element - prescribed| / prescribed` for fixed #1, fixed #2, target.
    pub residuals: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub problem: SolveProblem,
    pub count: usize,
    pub classification: Classification,
    pub solutions: Vec<Solution>,
    pub limits: FamilyLimits,
    pub config: SolveConfig,
}

impl SolveReport {
    pub fn max_residual(&self) -> f64 {
        self.solutions
            .iter()
            .flat_map(|s| s.residuals)
            .fold(0.0, f64::max)
    }
}

struct Found {
    triangle: Triangle,
    parameter: f64,
    branch: Option<String>,
    root: RootKind,
}

struct FamilyRun {
    found: Vec<Found>,
    at_limit: Vec<End>,
    limits: FamilyLimits,
    permutation: Option<String>,
}

const SWAP_AB: &str = "A<->B";

fn push_roots<F>(run: &mut FamilyRun, scan: LevelScan, mut make: F) -> Result<()>
where
    F: FnMut(f64) -> Result<(Triangle, Option<String>)>,
{
    for r in scan.roots {
        let (triangle, branch) = make(r.param)?;
        run.found.push(Found {
            triangle,
            parameter: r.param,
            branch,
            root: r.kind,
        });
    }
    run.at_limit.extend(scan.at_limit);
    Ok(())
}

fn heights_kind(kind: ElementKind, swap: bool) -> Result<ElementKind> {
    match kind {
        ElementKind::BisectorA | ElementKind::MedianA if swap => Ok(kind.swap_ab()),
        ElementKind::BisectorA | ElementKind::MedianA => Ok(kind),
        other => Err(Error::UnsupportedPattern(format!(
            "with fixed h_a, h_b the target must be l_a or m_a, got {other}"
        ))),
    }
}

fn run_bisectors(l_a: f64, l_b: f64, target: Constraint, cfg: &SolveConfig) -> Result<FamilyRun> {
    let swap = l_a > l_b;
    let spec = BisectorsSpec::new(l_a.max(l_b), l_a.min(l_b))?;
    let kind = if swap { target.kind.swap_ab() } else { target.kind };
    let lim = bisectors::limits(&spec);
    let scan = bisectors::scan(&spec, &lim, kind, target.value, &cfg.scan)?;
    let mut run = FamilyRun {
        found: Vec::new(),
        at_limit: Vec::new(),
        limits: FamilyLimits::Bisectors(lim),
        permutation: swap.then(|| SWAP_AB.to_string()),
    };
    push_roots(&mut run, scan, |beta| {
        let t = bisectors::shape(&spec, beta)?.1.to_triangle()?;
        let part = if beta <= lim.beta0 { "part1" } else { "part2" };
        Ok((if swap { t.swap_ab() } else { t }, Some(part.to_string())))
    })?;
    Ok(run)
}

fn run_heights(h_a: f64, h_b: f64, target: Constraint, cfg: &SolveConfig) -> Result<FamilyRun> {
    let swap = h_a > h_b;
    let spec = HeightsFamilySpec::new(h_a.min(h_b), h_a.max(h_b))?;
    let kind = heights_kind(target.kind, swap)?;
    let scan = spec.scan(kind, target.value, &cfg.scan)?;
    let mut run = FamilyRun {
        found: Vec::new(),
        at_limit: Vec::new(),
        limits: FamilyLimits::Heights(heights::analyze(&spec, &cfg.scan)?),
        permutation: swap.then(|| SWAP_AB.to_string()),
    };
    push_roots(&mut run, scan, |gamma| {
        let t = spec.triangle(gamma)?;
        Ok((if swap { t.swap_ab() } else { t }, None))
    })?;
    Ok(run)
}

fn run_median_height(m_a: f64, h_b: f64, target: Constraint, cfg: &SolveConfig) -> Result<FamilyRun> {
    if target.kind != ElementKind::BisectorC {
        return Err(Error::UnsupportedPattern(format!(
            "with fixed m_a, h_b the target must be l_c, got {}",
            target.kind
        )));
    }
    let spec = MedianHeightSpec::new(h_b, m_a)?;
    let branches = median_height::branches(&spec)?;
    let mut run = FamilyRun {
        found: Vec::new(),
        at_limit: Vec::new(),
        limits: FamilyLimits::MedianHeight {
            branches: branches.clone(),
        },
        permutation: None,
    };
    for br in &branches {
        let scan = median_height::scan_branch(&spec, br, target.value, &cfg.scan)?;
        push_roots(&mut run, scan, |gamma| {
            let t = median_height::triangle_on_branch(&spec, br, gamma)?;
            Ok((t, Some(br.tag.label().to_string())))
        })?;
    }
    Ok(run)
}

pub fn residuals(t: &Triangle, problem: &SolveProblem) -> [f64; 3] {
    problem
        .constraints()
        .map(|c| (t.element(c.kind) - c.value).abs() / c.value)
}

pub fn solve(problem: &SolveProblem, cfg: &SolveConfig) -> Result<SolveReport> {
    cfg.validate()?;
    problem.validate()?;
    let pattern = problem.pattern()?;
    let expectation = expected_count(problem, cfg)?;
    let target = problem.target;
    let run = match pattern {
        Pattern::Bisectors { l_a, l_b } => run_bisectors(l_a, l_b, target, cfg)?,
        Pattern::Heights { h_a, h_b } => run_heights(h_a, h_b, target, cfg)?,
        Pattern::MedianHeight { m_a, h_b } => run_median_height(m_a, h_b, target, cfg)?,
    };

    let mut solutions: Vec<Solution> = Vec::new();
    for f in run.found {
        if solutions
            .iter()
            .any(|s| congruent(&s.triangle, &f.triangle, &cfg.tolerance))
        {
            continue;
        }
        let t = f.triangle;
        solutions.push(Solution {
            triangle: t,
            alpha: t.alpha(),
            beta: t.beta(),
            gamma: t.gamma(),
            parameter: f.parameter,
            branch: f.branch,
            root: f.root,
            residuals: residuals(&t, problem),
        });
    }

    let mut edges = Vec::new();
    if solutions.iter().any(|s| s.root == RootKind::Tangent) {
        edges.push(EdgeKind::Tangent);
    }
    if !run.at_limit.is_empty() {
        edges.push(EdgeKind::AtLimit);
    }
    let mut notes = expectation.notes;
    if run.permutation.is_some() {
        notes.push("vertices A and B were relabeled to solve; limits use the relabeled family".into());
    }
    Ok(SolveReport {
        problem: *problem,
        count: solutions.len(),
        classification: Classification {
            family: pattern.family(),
            rule: expectation.rule,
            band: expectation.band,
            expected: expectation.count,
            edges,
            permutation: run.permutation,
            notes,
        },
        solutions,
        limits: run.limits,
        config: *cfg,
    })
}

/// A band edge: its name, value and the count when the target sits on it.
struct Edge {
    name: &'static str,
    value: f64,
    count: usize,
}

/// Piecewise-constant count over the target axis: `spans[i]` holds between
/// `edges[i - 1]` and `edges[i]` (edges ascending).
struct Table {
    rule: String,
    edges: Vec<Edge>,
    spans: Vec<usize>,
    notes: Vec<String>,
    outside: bool,
}

impl Table {
    fn new(rule: String, edges: Vec<Edge>, spans: Vec<usize>) -> Self {
        debug_assert_eq!(edges.len() + 1, spans.len());
        Table {
            rule,
            edges,
            spans,
            notes: Vec::new(),
            outside: false,
        }
    }

    fn edge(name: &'static str, value: f64, count: usize) -> Edge {
        Edge { name, value, count }
    }

    fn lookup(self, target: f64, at_tol: f64) -> Expectation {
        let on = self
            .edges
            .iter()
            .find(|e| (target - e.value).abs() <= at_tol * target.abs());
        let near = self
            .edges
            .iter()
            .any(|e| (target - e.value).abs() <= NEAR_EDGE * target.abs());
        let (band, count, edge) = if let Some(e) = on {
            (format!("= {}", e.name), ExpectedCount::Count(e.count), Some(e.name.to_string()))
        } else {
            let i = self.edges.iter().filter(|e| e.value < target).count();
            let lo = if i == 0 { "0" } else { self.edges[i - 1].name };
            let hi = self.edges.get(i).map_or("inf", |e| e.name);
            let count = if near {
                ExpectedCount::OutsideTable
            } else {
                ExpectedCount::Count(self.spans[i])
            };
            (format!("({lo}, {hi})"), count, None)
        };
        Expectation {
            rule: self.rule,
            band,
            count: if self.outside {
                ExpectedCount::OutsideTable
            } else {
                count
            },
            edge,
            notes: self.notes,
        }
    }
}

fn bisectors_table(lim: &LimitSet, kind: ElementKind) -> Result<Table> {
    use ElementKind::*;
    let e = Table::edge;
    let (edges, spans) = match kind {
        AngleA => (vec![e("A_max", lim.alpha_max, 0)], vec![1, 0]),
        AngleB => (vec![e("B_max", lim.beta_max, 0)], vec![1, 0]),
        AngleC | HeightC | BisectorC => (vec![], vec![1]),
        SideA => (vec![e("a*", lim.a_star, 0)], vec![0, 1]),
        SideB => (vec![e("b*", lim.b_star, 0)], vec![0, 1]),
        SideC => (
            vec![e("c**", lim.c_2star, 0), e("c*", lim.c_star, 0)],
            vec![0, 1, 0],
        ),
        HeightA => (
            vec![e("h**", lim.ha_2star, 1), e("l_a", lim.l2, 1)],
            vec![1, 2, 0],
        ),
        HeightB => (
            vec![e("h**", lim.hb_2star, 1), e("l_b", lim.l1, 1)],
            vec![1, 2, 0],
        ),
        MedianA => (
            vec![e("l_a", lim.l2, 1), e("m_a*", lim.ma_star, 1)],
            vec![0, 2, 1],
        ),
        MedianB => (
            vec![e("l_b", lim.l1, 1), e("m_b*", lim.mb_star, 1)],
            vec![0, 2, 1],
        ),
        MedianC => (vec![e("m_c*", lim.mc_star, 0)], vec![0, 1]),
        BisectorA | BisectorB => {
            return Err(Error::UnsupportedPattern(format!(
                "target {kind} repeats a fixed element"
            )))
        }
    };
    let mut t = Table::new(format!("bisectors/{kind}"), edges, spans);
    if matches!(kind, HeightA | HeightB) {
        t.notes.push(format!(
            "two-solution band for {kind} taken as (h**, {}), the attainable maximum",
            if kind == HeightA { "l_a" } else { "l_b" }
        ));
    }
    Ok(t)
}

fn heights_table(an: &HeightsAnalysis, kind: ElementKind) -> Table {
    let e = Table::edge;
    let (h1, h2) = (an.h1, an.h2);
    let regime = match an.regime {
        Regime::Equal => "equal",
        Regime::Upper => "upper",
        Regime::Boundary => "boundary",
        Regime::Lower => "lower",
    };
    let rule = format!("heights/{kind}/{regime}");
    let (edges, spans) = match (kind, an.regime) {
        (ElementKind::BisectorA, Regime::Equal) => {
            (vec![e("h_a", h1, 1), e("sqrt2*h_b", SQRT_2 * h2, 1)], vec![0, 2, 1])
        }
        (ElementKind::BisectorA, Regime::Upper) => {
            let l_max = an.l_max.unwrap_or(f64::NAN);
            (vec![e("h_a", h1, 1), e("l_max", l_max, 2)], vec![0, 3, 1])
        }
        (ElementKind::BisectorA, _) => (vec![e("h_a", h1, 0)], vec![0, 1]),
        (_, Regime::Boundary) => (vec![e("h_b/2", 0.5 * h2, 0)], vec![0, 1]),
        _ => (vec![e("m_a,min", an.ma_min, 1)], vec![0, 2]),
    };
    let mut t = Table::new(rule, edges, spans);
    // Just off a regime boundary the bands collapse onto each other.
    let off = |x: f64| x != 0.0 && x.abs() <= NEAR_EDGE * h2;
    let near_equal = an.regime != Regime::Equal && off(h2 - h1);
    let near_boundary = an.regime != Regime::Boundary && off(2.0 * h1 - h2);
    if near_equal || near_boundary {
        t.outside = true;
        t.notes.push("heights lie just off a regime boundary".into());
    }
    t
}

/// The count the closed-form tables predict for `problem`.
pub fn expected_count(problem: &SolveProblem, cfg: &SolveConfig) -> Result<Expectation> {
    Ok(table(problem, cfg)?.lookup(problem.target.value, cfg.scan.residual_tol))
}

/// Named band edges on the target axis, ascending. Their values do not depend
/// on the target value.
pub fn band_edges(problem: &SolveProblem, cfg: &SolveConfig) -> Result<Vec<(String, f64)>> {
    Ok(table(problem, cfg)?
        .edges
        .into_iter()
        .map(|e| (e.name.to_string(), e.value))
        .collect())
}

fn table(problem: &SolveProblem, cfg: &SolveConfig) -> Result<Table> {
    problem.validate()?;
    let target = problem.target;
    let table = match problem.pattern()? {
        Pattern::Bisectors { l_a, l_b } => {
            let swap = l_a > l_b;
            let spec = BisectorsSpec::new(l_a.max(l_b), l_a.min(l_b))?;
            let kind = if swap { target.kind.swap_ab() } else { target.kind };
            bisectors_table(&bisectors::limits(&spec), kind)?
        }
        Pattern::Heights { h_a, h_b } => {
            let swap = h_a > h_b;
            let kind = heights_kind(target.kind, swap)?;
            let spec = HeightsFamilySpec::new(h_a.min(h_b), h_a.max(h_b))?;
            let an = heights::analyze(&spec, &cfg.scan)?;
            if swap {
                let mut t = Table::new(format!("heights/{}/relabeled", target.kind), vec![], vec![0]);
                t.outside = true;
                t.notes.push("the count table covers h_a <= h_b only".into());
                t
            } else {
                heights_table(&an, kind)
            }
        }
        Pattern::MedianHeight { m_a, h_b } => {
            if target.kind != ElementKind::BisectorC {
                return Err(Error::UnsupportedPattern(format!(
                    "with fixed m_a, h_b the target must be l_c, got {}",
                    target.kind
                )));
            }
            let spec = MedianHeightSpec::new(h_b, m_a)?;
            let n = median_height::branches(&spec)?.len();
            let rule = if n == 1 { "medianheight/l_c/perp" } else { "medianheight/l_c/two-branch" };
            let mut t = Table::new(rule.into(), vec![], vec![n]);
            let gap = 2.0 * m_a - h_b;
            if n == 2 && gap <= NEAR_EDGE * h_b {
                t.outside = true;
                t.notes.push("median lies just above half the height".into());
            }
            t
        }
    };
    Ok(table)
}
