use crate::error::{MahlerError, Result};
use crate::field::RatFun;

use super::truncation::Truncation;

#[derive(Clone, Debug)]
pub struct BeckerReport {
    /// `prod_{i>=0} c_0(z^(k^i))^(-1)`.
    pub h: Truncation,
    /// `h(z) c_0(z) - h(z^k)`.
    pub residue: Truncation,
    pub factors: usize,
}

/// Truncated inverse product `h` with `h(z) c_0(z) = h(z^k)`.
pub fn becker_product(c0: &RatFun, k: u64, order: usize) -> Result<BeckerReport> {
    let field = c0.field().clone();
    let at0 = c0.eval(&field.zero());
    if at0.map_or(true, |v| !v.is_one()) {
        return Err(MahlerError::ConstantTermNotOne);
    }
    let mut h = Truncation::one(&field, order);
    let mut e = 1usize;
    let mut factors = 0;
    while e < order {
        let den = Truncation::from_poly(&c0.den().compose_pow(e), order);
        let num = Truncation::from_poly(&c0.num().compose_pow(e), order);
        h = &(&h * &den) * &num.inverse()?;
        factors += 1;
        e = match e.checked_mul(k as usize) {
            Some(x) => x,
            None => break,
        };
    }
    let c = Truncation::from_ratfun(c0, order)?;
    let residue = &(&h * &c) - &h.compose_pow(k as usize, order);
    Ok(BeckerReport { h, residue, factors })
}
