//! Truncated power series: solving, Cartier action, probes and the order-two counterexample.
pub mod becker;
pub mod counterexample;
pub mod probe;
pub mod solve;
pub mod truncation;

pub use becker::{becker_product, BeckerReport};
pub use counterexample::{counterexample_coefficients, verify_counterexample, Assertion, CounterexampleReport};
pub use probe::{guess_relation, kernel_rank_probe, ProbeLevel, ProbeReport, DEFAULT_MARGIN};
pub use solve::{
    equation_residue, frac_residue, operator_residue, row_residue, solve_series, ConsistencyEvent, ConsistencyKind,
    SolveReport,
};
pub use truncation::{cartier_series, Truncation};
