use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{MahlerError, Result};
use crate::field::{ExtInt, Poly, RatFun};
use crate::orbits::{classify_point, PointClass, SupportSet};

use super::action::act_poly;
use super::analysis::{precalm_witness, CalmnessOptions};

/// Anxious classes at which some coefficient has a pole.
pub fn anxious_pole_scan(coeffs: &[RatFun], k: u64) -> Result<Vec<PointClass>> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Ok(Vec::new());
    }
    let s = SupportSet::new(coeffs, k)?;
    Ok(s.anxious_poles().into_iter().map(|i| s.classes[i].class.clone()).collect())
}

pub fn is_calm(coeffs: &[RatFun], k: u64) -> Result<bool> {
    Ok(anxious_pole_scan(coeffs, k)?.is_empty())
}

/// `h` turning a calm sequence into polynomials; built from `z` and `z^(b/q) - 1` factors.
pub fn prepolynomialize(coeffs: &[RatFun], k: u64) -> Result<Poly> {
    let field = coeffs[0].field().clone();
    if coeffs.iter().all(|c| c.is_zero()) {
        return Ok(Poly::one(&field));
    }
    let s = SupportSet::new(coeffs, k)?;
    // exponent per H: key 0 for H_0 = z, otherwise the unity order b.
    let mut need: BTreeMap<u64, u64> = BTreeMap::new();
    for cls in &s.classes {
        let worst = cls.vals.iter().filter_map(|v| v.finite()).filter(|v| *v < 0).map(|v| v.unsigned_abs()).max();
        let Some(e) = worst else { continue };
        if classify_point(&cls.class, k).is_anxious() {
            return Err(MahlerError::NotCalm(cls.class.to_string()));
        }
        let key = match &cls.class {
            PointClass::Zero => 0,
            other => other.unity_order().expect("calm nonzero class is a root of unity"),
        };
        let slot = need.entry(key).or_insert(0);
        *slot = (*slot).max(e);
    }
    let mut h = Poly::one(&field);
    for (b, e) in need {
        let factor = if b == 0 {
            Poly::z(&field)
        } else {
            let q = b.gcd(&k);
            &Poly::monomial(field.one(), (b / q) as usize) - &Poly::one(&field)
        };
        h = &h * &factor.pow(e);
    }
    let acted = act_poly(&h, coeffs, k)?;
    if !acted.iter().all(|c| c.is_polynomial()) {
        return Err(MahlerError::ConstructionFailed("prepolynomial factor left a pole".into()));
    }
    Ok(h)
}

/// `h` with `act(h, coeffs)` all polynomials.
pub fn polynomialize(coeffs: &[RatFun], k: u64, opts: &CalmnessOptions) -> Result<Poly> {
    let (w, _) = precalm_witness(coeffs, k, opts)?;
    let calm = act_poly(&w, coeffs, k)?;
    let h2 = prepolynomialize(&calm, k)?;
    Ok(&h2 * &w)
}

/// Minimum valuation of each coefficient over the anxious classes (for reports).
pub fn min_anxious_valuation(coeffs: &[RatFun], k: u64) -> Result<ExtInt> {
    let s = SupportSet::new(coeffs, k)?;
    Ok(s.classes
        .iter()
        .filter(|c| c.kind.is_anxious())
        .flat_map(|c| c.vals.iter().copied())
        .min()
        .unwrap_or(ExtInt::PosInf))
}
