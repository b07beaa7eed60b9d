use thiserror::Error;

use crate::geometry::ElementKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("side {name} = {value} is not a positive finite length")]
    NonPositiveSide { name: char, value: f64 },

    #[error("triangle inequality violated: {failed} (slack {slack:e})")]
    TriangleInequalityViolated { failed: &'static str, slack: f64 },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("{0} is an angle and cannot fix the scale")]
    InvalidScaleKind(ElementKind),

    #[error("function evaluated to a non-finite value at {param}")]
    NonFiniteEvaluation { param: f64 },

    #[error("no convergence after {iterations} iterations (bracket [{lo}, {hi}])")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("infeasible problem: {0}")]
    InfeasibleSpec(String),

    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
