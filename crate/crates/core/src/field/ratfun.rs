use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::cyclotomic::{Field, FieldElem};
use super::poly::Poly;

/// Reduced quotient `num/den` with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> RatFun {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun::zero(num.field());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let l = d.lead().unwrap().clone();
        if !l.is_one() {
            let li = l.inv();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFun { num: n, den: d }
    }

    /// Builds without reduction; `den` must be monic and coprime to `num`.
    pub fn from_parts_unchecked(num: Poly, den: Poly) -> RatFun {
        RatFun { num, den }
    }

    pub fn zero(field: &Field) -> RatFun {
        RatFun { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: &Field) -> RatFun {
        RatFun::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let f = p.field().clone();
        RatFun { num: p, den: Poly::one(&f) }
    }

    pub fn constant(c: FieldElem) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn z(field: &Field) -> RatFun {
        RatFun::from_poly(Poly::z(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> RatFun {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> RatFun {
        self * &o.inv()
    }

    pub fn scale(&self, c: &FieldElem) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.field());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFun {
        RatFun::new(&self.num * p, self.den.clone())
    }

    /// `c(z^e)`; stays reduced since `z -> z^e` preserves coprimality.
    pub fn compose_pow(&self, e: usize) -> RatFun {
        RatFun { num: self.num.compose_pow(e), den: self.den.compose_pow(e) }
    }

    pub fn pow(&self, e: i64) -> RatFun {
        let r = RatFun { num: self.num.pow(e.unsigned_abs()), den: self.den.pow(e.unsigned_abs()) };
        if e >= 0 {
            r
        } else {
            r.inv()
        }
    }

    pub fn eval(&self, x: &FieldElem) -> Option<FieldElem> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x).div(&d))
        }
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let (d1, d2) = (self.den.exact_div(&g), o.den.exact_div(&g));
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        RatFun::new(num, &self.den * &d2)
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero(self.field());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun::from_poly(&self.num * &o.num);
        }
        // Cross-cancel before multiplying.
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1);
        let d2 = o.den.exact_div(&g1);
        let n2 = o.num.exact_div(&g2);
        let d1 = self.den.exact_div(&g2);
        let den = &d1 * &d2;
        let l = den.lead().unwrap().clone();
        let num = &n1 * &n2;
        if l.is_one() {
            RatFun { num, den }
        } else {
            let li = l.inv();
            RatFun { num: num.scale(&li), den: den.scale(&li) }
        }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
