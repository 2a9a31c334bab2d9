use std::collections::HashSet;

use serde_json::json;

use crate::error::{MahlerError, Result};
use crate::field::{ExtInt, Poly, RatFun};
use crate::orbits::{PointClass, SupportSet};

use super::graph::{CalmnessGraph, MinClm};
use super::sequence::SequenceSpec;
use super::witness::{StrategyRegistry, WitnessTrace};

pub const DEFAULT_HORIZON_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct CalmnessOptions {
    pub horizon_cap: usize,
    pub strategy: String,
}

impl Default for CalmnessOptions {
    fn default() -> Self {
        CalmnessOptions { horizon_cap: DEFAULT_HORIZON_CAP, strategy: "elimination".into() }
    }
}

/// A negative-calmness certificate.
#[derive(Clone, Debug)]
pub struct Violation {
    pub class: PointClass,
    pub sequence: SequenceSpec,
    /// clm of `sequence`.
    pub clm: ExtInt,
    /// Infimum over all sequences at `class` (`-inf` at roots of unity with a negative cycle).
    pub infimum: ExtInt,
}

impl Violation {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "class": self.class.to_string(),
            "sequence": self.sequence.entries,
            "clm": self.clm,
            "infimum": self.infimum,
            "mode": self.sequence.to_json()["mode"],
        })
    }
}

#[derive(Clone, Debug)]
pub struct PrecalmVerdict {
    pub precalm: bool,
    pub witness: Option<Poly>,
    pub violation: Option<Violation>,
    pub trace: WitnessTrace,
}

/// Support set, orbit graphs and minimum calmness for every anxious pole class.
#[derive(Clone, Debug)]
pub struct CalmnessAnalysis {
    pub support: SupportSet,
    pub graphs: Vec<CalmnessGraph>,
    pub mins: Vec<MinClm>,
}

impl CalmnessAnalysis {
    pub fn new(coeffs: &[RatFun], k: u64, cap: usize) -> Result<CalmnessAnalysis> {
        let mut support = SupportSet::new(coeffs, k)?;
        support.refine_orbits(cap);
        let mut graphs = Vec::new();
        let mut mins = Vec::new();
        for s in support.anxious_poles() {
            let start = support.classes[s].class.clone();
            let g = CalmnessGraph::build(&support, &start, cap).map_err(|e| match e {
                MahlerError::HorizonUncertified(c) => MahlerError::Undecided(format!("horizon cap reached at {c}")),
                other => other,
            })?;
            mins.push(g.min_clm());
            graphs.push(g);
        }
        Ok(CalmnessAnalysis { support, graphs, mins })
    }

    pub fn is_precalm(&self) -> bool {
        self.mins.iter().all(|m| m.value >= ExtInt::Fin(0))
    }

    /// First violating class in basis order.
    pub fn violation(&self) -> Option<Violation> {
        self.graphs.iter().zip(&self.mins).find(|(_, m)| m.value < ExtInt::Fin(0)).map(|(g, m)| Violation {
            class: g.start().clone(),
            sequence: m.witness.clone().expect("negative minimum carries a witness"),
            clm: m.witness_clm,
            infimum: m.value,
        })
    }

    /// Graphs of unity classes, one per orbit cycle.
    pub fn distinct_unity_graphs(&self) -> Vec<&super::graph::UnityGraph> {
        let mut seen: HashSet<PointClass> = HashSet::new();
        let mut out = Vec::new();
        for g in &self.graphs {
            if let CalmnessGraph::Unity(u) = g {
                if u.cycle.iter().any(|c| seen.contains(c)) {
                    continue;
                }
                seen.extend(u.cycle.iter().cloned());
                out.push(u);
            }
        }
        out
    }
}

/// Minimum calmness at an anxious start class.
pub fn min_clm(coeffs: &[RatFun], start: &PointClass, k: u64, cap: usize) -> Result<MinClm> {
    let mut support = SupportSet::new(coeffs, k)?;
    support.refine_orbits(cap);
    Ok(CalmnessGraph::build(&support, start, cap)?.min_clm())
}

/// Precalmness decision; a witness is constructed with the configured strategy when precalm.
pub fn is_precalm(coeffs: &[RatFun], k: u64, opts: &CalmnessOptions) -> Result<PrecalmVerdict> {
    let analysis = CalmnessAnalysis::new(coeffs, k, opts.horizon_cap)?;
    let mut trace = WitnessTrace::new(&opts.strategy);
    if !analysis.is_precalm() {
        return Ok(PrecalmVerdict { precalm: false, witness: None, violation: analysis.violation(), trace });
    }
    let h = construct_witness(coeffs, k, opts, &analysis, &mut trace)?;
    Ok(PrecalmVerdict { precalm: true, witness: Some(h), violation: None, trace })
}

/// Decision only, without witness construction.
pub fn decide_precalm(coeffs: &[RatFun], k: u64, cap: usize) -> Result<(bool, Option<Violation>)> {
    let analysis = CalmnessAnalysis::new(coeffs, k, cap)?;
    Ok((analysis.is_precalm(), analysis.violation()))
}

/// `h` with `act(h, coeffs)` calm.
pub fn precalm_witness(coeffs: &[RatFun], k: u64, opts: &CalmnessOptions) -> Result<(Poly, WitnessTrace)> {
    let analysis = CalmnessAnalysis::new(coeffs, k, opts.horizon_cap)?;
    if !analysis.is_precalm() {
        return Err(MahlerError::NotPrecalm);
    }
    let mut trace = WitnessTrace::new(&opts.strategy);
    let h = construct_witness(coeffs, k, opts, &analysis, &mut trace)?;
    Ok((h, trace))
}

fn construct_witness(
    coeffs: &[RatFun],
    k: u64,
    opts: &CalmnessOptions,
    analysis: &CalmnessAnalysis,
    trace: &mut WitnessTrace,
) -> Result<Poly> {
    let registry = StrategyRegistry::with_defaults();
    let strategy = registry
        .get(&opts.strategy)
        .ok_or_else(|| MahlerError::Invalid(format!("unknown witness strategy `{}`", opts.strategy)))?;
    let h = strategy.construct(coeffs, k, opts.horizon_cap, analysis, trace)?;
    let acted = super::action::act_poly(&h, coeffs, k)?;
    let left = super::polynomial::anxious_pole_scan(&acted, k)?;
    if !left.is_empty() {
        return Err(MahlerError::ConstructionFailed(format!(
            "witness leaves anxious poles at {}",
            left.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(h)
}
