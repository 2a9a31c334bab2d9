use crate::error::{MahlerError, Result};
use crate::field::{Poly, RatFun};

/// `h*(c_i) = h(z^(k^i)) / h(z) * c_i` for `i = 1..n`.
pub fn act(h: &RatFun, coeffs: &[RatFun], k: u64) -> Result<Vec<RatFun>> {
    if h.is_zero() {
        return Err(MahlerError::ZeroAction);
    }
    let hinv = h.inv();
    let mut e: usize = 1;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        e = e.checked_mul(k as usize).ok_or_else(|| MahlerError::Invalid("exponent overflow".into()))?;
        if c.is_zero() {
            out.push(c.clone());
            continue;
        }
        let ratio = &h.compose_pow(e) * &hinv;
        out.push(&ratio * c);
    }
    Ok(out)
}

/// Polynomial variant of [`act`].
pub fn act_poly(h: &Poly, coeffs: &[RatFun], k: u64) -> Result<Vec<RatFun>> {
    act(&RatFun::from_poly(h.clone()), coeffs, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn action_examples() {
        let f = Field::rationals();
        let c = RatFun::new(Poly::from_ints(&f, &[-4, 1]), Poly::from_ints(&f, &[-2, 1]));
        let out = act_poly(&Poly::from_ints(&f, &[-4, 1]), &[c.clone()], 2).unwrap();
        assert_eq!(out, vec![RatFun::from_poly(Poly::from_ints(&f, &[2, 1]))]);
        assert_eq!(act_poly(&Poly::one(&f), &[c.clone()], 2).unwrap(), vec![c.clone()]);
        let out = act_poly(&Poly::z(&f), &[c.clone()], 2).unwrap();
        assert_eq!(out[0], c.mul_poly(&Poly::z(&f)));
        assert_eq!(act(&RatFun::zero(&f), &[c], 2), Err(MahlerError::ZeroAction));
    }
}
