use std::collections::BTreeMap;

use crate::error::{MahlerError, Result};
use crate::field::{Field, RatFun};

use super::equation::MahlerEquation;

/// `sum_d terms[d] * Delta_k^d` in the skew ring `K(z)[Delta_k]` with `Delta_k c(z) = c(z^k) Delta_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerOperator {
    pub k: u64,
    pub field: Field,
    pub terms: BTreeMap<usize, RatFun>,
}

impl MahlerOperator {
    pub fn zero(k: u64, field: &Field) -> MahlerOperator {
        MahlerOperator { k, field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(k: u64, field: &Field) -> MahlerOperator {
        MahlerOperator::term(k, RatFun::one(field), 0)
    }

    /// `c * Delta^d`.
    pub fn term(k: u64, c: RatFun, d: usize) -> MahlerOperator {
        let mut op = MahlerOperator::zero(k, c.field());
        op.add_term(d, c);
        op
    }

    pub fn from_equation(eq: &MahlerEquation) -> MahlerOperator {
        let mut op = MahlerOperator::one(eq.k, &eq.field);
        for (i, c) in eq.coeffs.iter().enumerate() {
            op.add_term(i + 1, -c);
        }
        op
    }

    pub fn add_term(&mut self, d: usize, c: RatFun) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&d) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(d, sum);
        }
    }

    pub fn coeff(&self, d: usize) -> RatFun {
        self.terms.get(&d).cloned().unwrap_or_else(|| RatFun::zero(&self.field))
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The equation `f = sum -(t_d / t_0) f(z^(k^d))` annihilated by this operator.
    pub fn to_equation(&self) -> Result<MahlerEquation> {
        let t0 = self.terms.get(&0).ok_or_else(|| MahlerError::Invalid("operator has no constant term".into()))?;
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Err(MahlerError::Invalid("operator has order zero".into()));
        }
        let coeffs = (1..=n).map(|d| -&self.coeff(d).div(t0)).collect();
        MahlerEquation::new(self.k, coeffs)
    }

    pub fn add(&self, other: &MahlerOperator) -> Result<MahlerOperator> {
        check_radix(self, other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(*d, c.clone());
        }
        Ok(out)
    }
}

fn check_radix(a: &MahlerOperator, b: &MahlerOperator) -> Result<()> {
    if a.k != b.k {
        return Err(MahlerError::RadixMismatch(a.k, b.k));
    }
    if a.field != b.field {
        return Err(MahlerError::FieldMismatch("operators over different fields".into()));
    }
    Ok(())
}

/// Noncommutative product `a * b`.
pub fn op_mul(a: &MahlerOperator, b: &MahlerOperator) -> Result<MahlerOperator> {
    check_radix(a, b)?;
    let mut out = MahlerOperator::zero(a.k, &a.field);
    for (da, ca) in &a.terms {
        let shift = a
            .k
            .checked_pow(*da as u32)
            .ok_or_else(|| MahlerError::Invalid(format!("k^{da} overflows")))? as usize;
        for (db, cb) in &b.terms {
            out.add_term(da + db, ca * &cb.compose_pow(shift));
        }
    }
    Ok(out)
}
