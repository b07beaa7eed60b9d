//! Enumerates the triangles that have two prescribed elements (two bisectors,
//! two heights, or a median and a height) and a prescribed third element.

pub mod bisectors;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod heights;
pub mod median_height;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{AngleTriangle, ElementKind, Tolerance, Triangle};
pub use numerics::ScanConfig;
pub use oracle::{grid_enumerate, verify_report, GridSpec, Verdict};
pub use solver::{expected_count, solve, Constraint, ExpectedCount, Family, SolveConfig, SolveProblem, SolveReport};
