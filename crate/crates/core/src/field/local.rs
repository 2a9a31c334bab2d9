use super::basis::multiplicity;
use super::poly::Poly;
use super::ratfun::RatFun;
use super::ExtInt;
use crate::error::{MahlerError, Result};

/// The `f`-adic expansion of a rational function, starting at its valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub class_poly: Poly,
    pub valuation: i64,
    /// `digits[j]` is the residue in `K[z]/(f)` at `f^(valuation + j)`.
    pub digits: Vec<Poly>,
}

impl LocalExpansion {
    /// `sum digits[j] * f^j`, the unit part modulo `f^count`.
    pub fn unit_part(&self) -> Poly {
        let f = self.class_poly.field().clone();
        let mut acc = Poly::zero(&f);
        for d in self.digits.iter().rev() {
            acc = &(&acc * &self.class_poly) + d;
        }
        acc
    }
}

pub(crate) fn split_uniform(p: &Poly, f: &Poly) -> Result<(usize, Poly)> {
    let (e, rest) = multiplicity(p, f);
    if !rest.gcd(f).is_constant() {
        return Err(MahlerError::NonUniformClass(f.to_string()));
    }
    Ok((e, rest))
}

/// Multiplicity of `f` in the numerator minus multiplicity in the denominator.
pub fn valuation_at_class(c: &RatFun, f: &Poly) -> Result<ExtInt> {
    if c.is_zero() {
        return Ok(ExtInt::PosInf);
    }
    let (en, _) = split_uniform(c.num(), f)?;
    let (ed, _) = split_uniform(c.den(), f)?;
    Ok(ExtInt::Fin(en as i64 - ed as i64))
}

/// Valuation without the uniformity check, for classes taken from a refined basis.
pub fn valuation_unchecked(c: &RatFun, f: &Poly) -> ExtInt {
    if c.is_zero() {
        return ExtInt::PosInf;
    }
    let en = multiplicity(c.num(), f).0 as i64;
    let ed = if en > 0 { 0 } else { multiplicity(c.den(), f).0 as i64 };
    ExtInt::Fin(en - ed)
}

/// First `count` `f`-adic digits of `c` starting at its valuation.
pub fn local_expansion(c: &RatFun, f: &Poly, count: usize) -> Result<LocalExpansion> {
    if c.is_zero() {
        return Err(MahlerError::ZeroInput);
    }
    let (en, u) = split_uniform(c.num(), f)?;
    let (ed, v) = split_uniform(c.den(), f)?;
    let modulus = f.pow(count as u64);
    let vinv = v.inv_mod(&modulus).ok_or_else(|| MahlerError::NonUniformClass(f.to_string()))?;
    let mut p = u.mul_mod(&vinv, &modulus);
    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        let (q, r) = p.divrem(f);
        digits.push(r);
        p = q;
    }
    Ok(LocalExpansion { class_poly: f.clone(), valuation: en as i64 - ed as i64, digits })
}

/// `h` with `v_{f_i}(h - g_i) >= e_i` for every target, by residues and CRT.
pub fn digit_match(targets: &[(Poly, u32, RatFun)]) -> Result<Poly> {
    let field = match targets.first() {
        Some(t) => t.0.field().clone(),
        None => return Err(MahlerError::Invalid("no targets".into())),
    };
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            if !targets[i].0.gcd(&targets[j].0).is_constant() {
                return Err(MahlerError::ModuliNotCoprime);
            }
        }
    }
    let mut h = Poly::zero(&field);
    let mut m = Poly::one(&field);
    for (f, e, g) in targets {
        let modulus = f.pow(*e as u64);
        let r = if g.is_zero() {
            Poly::zero(&field)
        } else {
            if let ExtInt::Fin(v) = valuation_at_class(g, f)? {
                if v < 0 {
                    return Err(MahlerError::TargetHasPole(f.to_string()));
                }
            }
            let dinv = g.den().inv_mod(&modulus).ok_or(MahlerError::TargetHasPole(f.to_string()))?;
            g.num().mul_mod(&dinv, &modulus)
        };
        let minv = m.inv_mod(&modulus).ok_or(MahlerError::ModuliNotCoprime)?;
        let t = (&r - &h).mul_mod(&minv, &modulus);
        h = &h + &(&m * &t);
        m = &m * &modulus;
        h = h.rem(&m);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn valuation_examples() {
        let f = q();
        let c = RatFun::new(Poly::one(&f), Poly::from_ints(&f, &[1, -1]));
        assert_eq!(valuation_at_class(&c, &Poly::from_ints(&f, &[-1, 1])).unwrap(), ExtInt::Fin(-1));
        let c = RatFun::new(Poly::from_ints(&f, &[-4, 1]), Poly::from_ints(&f, &[-2, 1]));
        assert_eq!(valuation_at_class(&c, &Poly::from_ints(&f, &[-4, 1])).unwrap(), ExtInt::Fin(1));
        assert_eq!(valuation_at_class(&RatFun::zero(&f), &Poly::z(&f)).unwrap(), ExtInt::PosInf);
        let c = RatFun::from_poly(Poly::from_ints(&f, &[-2, 1]));
        assert!(matches!(
            valuation_at_class(&c, &Poly::from_ints(&f, &[-4, 0, 1])),
            Err(MahlerError::NonUniformClass(_))
        ));
    }

    #[test]
    fn expansion_examples() {
        let f = q();
        let a = Poly::from_ints(&f, &[-2, 1]);
        let c = RatFun::new(Poly::one(&f), Poly::from_ints(&f, &[2, -1]));
        let e = local_expansion(&c, &a, 1).unwrap();
        assert_eq!(e.valuation, -1);
        assert_eq!(e.digits[0], Poly::from_ints(&f, &[-1]));
        let e = local_expansion(&RatFun::z(&f), &a, 2).unwrap();
        assert_eq!(e.valuation, 0);
        assert_eq!(e.digits, vec![Poly::from_ints(&f, &[2]), Poly::from_ints(&f, &[1])]);
    }

    #[test]
    fn digit_match_examples() {
        let f = q();
        let k = |v: i64| RatFun::constant(f.from_int(v));
        let h = digit_match(&[(Poly::from_ints(&f, &[-1, 1]), 1, k(3))]).unwrap();
        assert_eq!(h, Poly::from_ints(&f, &[3]));
        let h = digit_match(&[(Poly::from_ints(&f, &[-1, 1]), 1, k(2)), (Poly::from_ints(&f, &[1, 1]), 1, k(0))])
            .unwrap();
        assert_eq!(h, Poly::from_ints(&f, &[1, 1]));
        let z2 = RatFun::from_poly(Poly::from_ints(&f, &[0, 0, 1]));
        let h = digit_match(&[(Poly::from_ints(&f, &[-2, 1]), 2, z2)]).unwrap();
        assert_eq!(h, Poly::from_ints(&f, &[-4, 4]));
        let pole = RatFun::new(Poly::one(&f), Poly::from_ints(&f, &[-1, 1]));
        assert_eq!(
            digit_match(&[(Poly::from_ints(&f, &[-1, 1]), 1, pole)]),
            Err(MahlerError::TargetHasPole("z-1".into()))
        );
    }
}
