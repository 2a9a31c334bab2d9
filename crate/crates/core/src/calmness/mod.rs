//! Calmness values, the polynomial action, the precalmness decision and witness construction.

pub mod action;
pub mod analysis;
pub mod graph;
pub mod polynomial;
pub mod sequence;
pub mod witness;

pub use action::{act, act_poly};
pub use analysis::{
    decide_precalm, is_precalm, min_clm, precalm_witness, CalmnessAnalysis, CalmnessOptions, PrecalmVerdict, Violation,
    DEFAULT_HORIZON_CAP,
};
pub use graph::{CalmnessGraph, MinClm, NegativeCycle, TailGraph, UnityGraph};
pub use polynomial::{anxious_pole_scan, is_calm, polynomialize, prepolynomialize};
pub use sequence::{clm_of_sequence, SequenceMode, SequenceSpec};
pub use witness::{StrategyRegistry, TraceEvent, WitnessStrategy, WitnessTrace};

#[cfg(test)]
mod tests;
