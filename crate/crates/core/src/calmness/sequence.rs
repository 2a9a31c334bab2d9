use serde_json::json;

use crate::error::{MahlerError, Result};
use crate::field::local::valuation_at_class;
use crate::field::{ExtInt, RatFun};
use crate::orbits::{classify_point, orbit_step, support_set, Classification, HorizonGuarantee, PointClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceMode {
    /// Closed sequence at an anxious root of unity.
    UnityCycle,
    /// Explicit prefix followed by an implicit tail of zero-weight terms.
    InfiniteTail,
}

/// A sequence `(a_i)` of steps in `1..=n` started at an anxious class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    pub start: PointClass,
    pub entries: Vec<usize>,
    pub mode: SequenceMode,
}

impl SequenceSpec {
    pub fn partial_sums(&self) -> Vec<usize> {
        let mut out = vec![0];
        for a in &self.entries {
            out.push(out.last().unwrap() + a);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "start": self.start.to_string(),
            "entries": self.entries,
            "mode": match self.mode { SequenceMode::UnityCycle => "unity_cycle", SequenceMode::InfiniteTail => "infinite_tail" },
        })
    }
}

/// Sum of valuations of `c_{a_i}` along the orbit of the start class.
pub fn clm_of_sequence(coeffs: &[RatFun], spec: &SequenceSpec, k: u64, cap: usize) -> Result<ExtInt> {
    let n = coeffs.len();
    if spec.entries.iter().any(|&a| a == 0 || a > n) {
        return Err(MahlerError::Invalid("sequence entries must lie in 1..=n".into()));
    }
    let field = coeffs[0].field().clone();
    let total: usize = spec.entries.iter().sum();
    match (spec.mode, classify_point(&spec.start, k)) {
        (_, Classification::Calm) => return Err(MahlerError::Invalid("start class is calm".into())),
        (SequenceMode::UnityCycle, Classification::Anxious { unity: Some((_, m)) }) => {
            if total as u64 % m != 0 {
                return Err(MahlerError::Invalid(format!("unity sequence does not close: sum {total} mod {m}")));
            }
        }
        (SequenceMode::UnityCycle, _) => {
            return Err(MahlerError::Invalid("unity sequence at a non-unity class".into()));
        }
        (SequenceMode::InfiniteTail, Classification::Anxious { unity: Some(_) }) => {
            return Err(MahlerError::Invalid("tail sequence at a root of unity".into()));
        }
        (SequenceMode::InfiniteTail, _) => {
            let support = support_set(coeffs, k)?;
            let h = support.orbit_horizon(&spec.start, cap);
            if h.guarantee == HorizonGuarantee::CapReached {
                return Err(MahlerError::HorizonUncertified(spec.start.to_string()));
            }
            if total < h.t {
                return Err(MahlerError::Invalid(format!("prefix ends at {total}, before the horizon {}", h.t)));
            }
        }
    }
    let mut cls = spec.start.clone();
    let mut sum = ExtInt::Fin(0);
    for &a in &spec.entries {
        let v = valuation_at_class(&coeffs[a - 1], &cls.class_poly(&field))?;
        sum = sum + v;
        for _ in 0..a {
            cls = orbit_step(&cls, k);
        }
    }
    Ok(sum)
}
