use serde_json::{json, Value};

use crate::error::{MahlerError, Result};
use crate::field::{Field, RatFun};
use crate::syntax::wire::{ratfun_from_json, ratfun_to_json};

use super::ring::MahlerOperator;

/// `f(z) = sum_{i=1..n} c_i(z) f(z^(k^i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerEquation {
    pub k: u64,
    pub field: Field,
    /// `coeffs[i-1] = c_i`.
    pub coeffs: Vec<RatFun>,
    /// The caller asserts that no equation of lower order annihilates the solution.
    pub minimal_order_asserted: bool,
}

impl MahlerEquation {
    pub fn new(k: u64, coeffs: Vec<RatFun>) -> Result<MahlerEquation> {
        if k < 2 {
            return Err(MahlerError::Invalid(format!("radix must be at least 2, got {k}")));
        }
        let Some(last) = coeffs.last() else {
            return Err(MahlerError::Invalid("equation needs at least one coefficient".into()));
        };
        if last.is_zero() {
            return Err(MahlerError::Invalid("leading coefficient c_n is zero".into()));
        }
        let field = last.field().clone();
        if coeffs.iter().any(|c| c.field() != &field) {
            return Err(MahlerError::FieldMismatch("coefficients over different fields".into()));
        }
        Ok(MahlerEquation { k, field, coeffs, minimal_order_asserted: false })
    }

    pub fn with_minimal_order(mut self, asserted: bool) -> MahlerEquation {
        self.minimal_order_asserted = asserted;
        self
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// `1 - sum c_i Delta^i`.
    pub fn operator(&self) -> MahlerOperator {
        MahlerOperator::from_equation(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "field": {"cyclotomic_order": self.field.order()},
            "coefficients": self.coeffs.iter().map(ratfun_to_json).collect::<Vec<_>>(),
            "claims": {"minimal_order_asserted": self.minimal_order_asserted},
        })
    }

    pub fn from_json(v: &Value) -> Result<MahlerEquation> {
        let k = v
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| MahlerError::Invalid("equation JSON needs an integer \"k\"".into()))?;
        let order = match v.get("field") {
            None => 1,
            Some(f) => f
                .get("cyclotomic_order")
                .and_then(Value::as_u64)
                .filter(|n| *n >= 1)
                .ok_or_else(|| MahlerError::Invalid("\"field\" needs a positive \"cyclotomic_order\"".into()))?,
        };
        let field = Field::new(order);
        let coeffs = v
            .get("coefficients")
            .and_then(Value::as_array)
            .ok_or_else(|| MahlerError::Invalid("equation JSON needs a \"coefficients\" array".into()))?
            .iter()
            .map(|c| ratfun_from_json(&field, c))
            .collect::<Result<Vec<_>>>()?;
        let minimal = v
            .get("claims")
            .and_then(|c| c.get("minimal_order_asserted"))
            .and_then(Value::as_bool)
            .unwrap_or(false);
        let mut eq = MahlerEquation::new(k, coeffs)?;
        eq.field = field;
        Ok(eq.with_minimal_order(minimal))
    }
}
