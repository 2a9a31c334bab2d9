use std::ops::{Add, Mul, Sub};

use serde_json::Value;

use crate::error::{MahlerError, Result};
use crate::field::rational::format_rational;
use crate::field::{Field, FieldElem, Poly, RatFun};
use crate::syntax::wire::elem_to_json;

/// A power series known modulo `z^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub field: Field,
    /// `coeffs[j]` is the coefficient of `z^j`; the length is the truncation order.
    pub coeffs: Vec<FieldElem>,
}

impl Truncation {
    pub fn zero(field: &Field, order: usize) -> Truncation {
        Truncation { field: field.clone(), coeffs: vec![field.zero(); order] }
    }

    pub fn one(field: &Field, order: usize) -> Truncation {
        Truncation::from_poly(&Poly::one(field), order)
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElem>) -> Truncation {
        Truncation { field: field.clone(), coeffs }
    }

    pub fn from_poly(p: &Poly, order: usize) -> Truncation {
        let mut t = Truncation::zero(p.field(), order);
        for (i, c) in p.coeffs().iter().enumerate().take(order) {
            t.coeffs[i] = c.clone();
        }
        t
    }

    /// Power series expansion of a rational function without a pole at `0`.
    pub fn from_ratfun(c: &RatFun, order: usize) -> Result<Truncation> {
        let num = Truncation::from_poly(c.num(), order);
        Ok(&num * &Truncation::from_poly(c.den(), order).inverse()?)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, j: usize) -> FieldElem {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn truncate(&self, order: usize) -> Truncation {
        let mut t = self.clone();
        t.coeffs.truncate(order);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &FieldElem) -> Truncation {
        Truncation { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Truncation> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(MahlerError::Invalid("series with zero constant term has no inverse".into()));
        }
        let inv0 = a0.inv();
        let n = self.order();
        let nz: Vec<(usize, &FieldElem)> =
            self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut out: Vec<FieldElem> = Vec::with_capacity(n);
        for j in 0..n {
            if j == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut acc = self.field.zero();
            for (i, c) in &nz {
                if *i > j {
                    break;
                }
                acc = &acc + &(*c * &out[j - i]);
            }
            out.push(-&(&acc * &inv0));
        }
        Ok(Truncation::from_coeffs(&self.field, out))
    }

    /// `t(z^e)` known modulo `z^order` (at most `e * self.order()`).
    pub fn compose_pow(&self, e: usize, order: usize) -> Truncation {
        let order = order.min(self.order().saturating_mul(e));
        let mut out = Truncation::zero(&self.field, order);
        for (j, c) in self.coeffs.iter().enumerate() {
            let Some(idx) = j.checked_mul(e) else { break };
            if idx >= order {
                break;
            }
            out.coeffs[idx] = c.clone();
        }
        out
    }

    /// Product with a polynomial, keeping the order.
    pub fn mul_poly(&self, p: &Poly) -> Truncation {
        let n = self.order();
        let mut out = Truncation::zero(&self.field, n);
        for (i, c) in p.coeffs().iter().enumerate().take(n) {
            if c.is_zero() {
                continue;
            }
            for (j, a) in self.coeffs.iter().enumerate().take(n - i) {
                if !a.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(c * a);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| match c.as_rational() {
                    Some(r) if self.field.degree() == 1 => Value::String(format_rational(r)),
                    _ => elem_to_json(c),
                })
                .collect(),
        )
    }
}

/// `Lambda_{k,r}`: keeps the coefficients at indices `k j + r`.
pub fn cartier_series(t: &Truncation, r: usize, k: usize) -> Truncation {
    let coeffs = t.coeffs.iter().skip(r).step_by(k).cloned().collect();
    Truncation::from_coeffs(&t.field, coeffs)
}

impl<'a> Add<&'a Truncation> for &'a Truncation {
    type Output = Truncation;
    fn add(self, o: &Truncation) -> Truncation {
        let n = self.order().min(o.order());
        Truncation::from_coeffs(&self.field, (0..n).map(|j| &self.coeffs[j] + &o.coeffs[j]).collect())
    }
}

impl<'a> Sub<&'a Truncation> for &'a Truncation {
    type Output = Truncation;
    fn sub(self, o: &Truncation) -> Truncation {
        let n = self.order().min(o.order());
        Truncation::from_coeffs(&self.field, (0..n).map(|j| &self.coeffs[j] - &o.coeffs[j]).collect())
    }
}

impl<'a> Mul<&'a Truncation> for &'a Truncation {
    type Output = Truncation;
    fn mul(self, o: &Truncation) -> Truncation {
        let n = self.order().min(o.order());
        let mut out = Truncation::zero(&self.field, n);
        let nz: Vec<(usize, &FieldElem)> = o.coeffs.iter().enumerate().take(n).filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in &nz {
                if i + j >= n {
                    break;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * *b);
            }
        }
        out
    }
}
