use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::cyclotomic::{Field, FieldElem};
use super::rational::{format_rational, Rational};

const MODULAR_GCD_DEGREE: usize = 6;

/// Dense univariate polynomial over `K`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
    field: Field,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly { coeffs: Vec::new(), field: field.clone() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElem) -> Poly {
        let field = c.field().clone();
        Poly::from_coeffs(&field, vec![c])
    }

    /// The indeterminate `z`.
    pub fn z(field: &Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElem, e: usize) -> Poly {
        let field = c.field().clone();
        let mut v = vec![field.zero(); e + 1];
        v[e] = c;
        Poly::from_coeffs(&field, v)
    }

    /// `z - a`.
    pub fn linear(a: &FieldElem) -> Poly {
        let f = a.field().clone();
        Poly::from_coeffs(&f, vec![-a, f.one()])
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, field: field.clone() }
    }

    pub fn from_rationals(field: &Field, cs: &[Rational]) -> Poly {
        Poly::from_coeffs(field, cs.iter().map(|c| field.from_rational(c.clone())).collect())
    }

    pub fn from_ints(field: &Field, cs: &[i64]) -> Poly {
        Poly::from_coeffs(field, cs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect(), field: self.field.clone() }
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Number of trailing zero coefficients (order of vanishing at zero).
    pub fn z_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplies by `z^s`.
    pub fn shift(&self, s: usize) -> Poly {
        if self.is_zero() || s == 0 {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); s];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v, field: self.field.clone() }
    }

    /// Divides by `z^s`, dropping lower terms.
    pub fn unshift(&self, s: usize) -> Poly {
        if s >= self.coeffs.len() {
            return Poly::zero(&self.field);
        }
        Poly::from_coeffs(&self.field, self.coeffs[s..].to_vec())
    }

    /// Remainder modulo `z^n`.
    pub fn truncate(&self, n: usize) -> Poly {
        if self.coeffs.len() <= n {
            return self.clone();
        }
        Poly::from_coeffs(&self.field, self.coeffs[..n].to_vec())
    }

    /// `z^deg * p(1/z)`.
    pub fn reverse(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::from_coeffs(&self.field, v)
    }

    /// `p(z^e)`.
    pub fn compose_pow(&self, e: usize) -> Poly {
        if e == 1 || self.is_constant() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); self.deg() * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * e] = c.clone();
            }
        }
        Poly { coeffs: v, field: self.field.clone() }
    }

    /// `p(c z)`.
    pub fn scale_arg(&self, c: &FieldElem) -> Poly {
        let mut pw = self.field.one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw = &pw * c;
        }
        Poly::from_coeffs(&self.field, v)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let v = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_integer(((i + 1) as i64).into())))
            .collect();
        Poly::from_coeffs(&self.field, v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let linv = d.coeffs[dd].inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &linv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    if !dj.is_zero() {
                        let t = &c * dj;
                        r[i + j] = &r[i + j] - &t;
                    }
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::from_coeffs(&self.field, q), Poly::from_coeffs(&self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn prem(&self, d: &Poly) -> Poly {
        let dd = d.deg();
        let ld = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return self.clone();
        }
        let steps = r.len() - dd;
        for i in (0..steps).rev() {
            let top = r[i + dd].clone();
            for x in r.iter_mut().take(i + dd) {
                *x = &*x * &ld;
            }
            if !top.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate().take(dd) {
                    if !dj.is_zero() {
                        let t = &top * dj;
                        r[i + j] = &r[i + j] - &t;
                    }
                }
            }
            r.truncate(i + dd);
        }
        Poly::from_coeffs(&self.field, r)
    }

    /// Scales to integral coordinates.
    fn clear_denominators(&self) -> Poly {
        let mut l = num_bigint::BigInt::one();
        for c in &self.coeffs {
            l = num_integer::Integer::lcm(&l, &c.denominator_lcm());
        }
        if l.is_one() {
            return self.clone();
        }
        let s = Rational::from_integer(l);
        Poly { coeffs: self.coeffs.iter().map(|c| c.scale(&s)).collect(), field: self.field.clone() }
    }

    /// Monic greatest common divisor, computed with a subresultant remainder sequence.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = if self.deg() >= other.deg() || other.is_zero() {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        if b.is_zero() {
            return a.monic();
        }
        if a.is_zero() {
            return b.monic();
        }
        if b.is_constant() {
            return Poly::one(&self.field);
        }
        if b.deg() == 1 {
            let b = b.monic();
            let root = -&b.coeffs[0];
            return if a.eval(&root).is_zero() { b } else { Poly::one(&self.field) };
        }
        if b.deg() >= MODULAR_GCD_DEGREE {
            if let Some(g) = super::modgcd::modular_gcd(&a, &b) {
                return g;
            }
        }
        a = a.clear_denominators();
        b = b.clear_denominators();
        let f = self.field.clone();
        let mut g = f.one();
        let mut h = f.one();
        loop {
            let delta = (a.deg() - b.deg()) as u64;
            let r = a.prem(&b);
            if r.is_zero() {
                return b.monic();
            }
            if r.is_constant() {
                return Poly::one(&f);
            }
            let denom = &g * &h.pow(delta);
            a = b;
            b = r.scale(&denom.inv());
            g = a.lead().unwrap().clone();
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).div(&h.pow(delta - 1))
            };
        }
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.inv();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn square_free_part(&self) -> Poly {
        if self.is_constant() {
            return Poly::one(&self.field);
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's square-free decomposition: monic `(q_i, i)` with `self = lc * prod q_i^i`.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let mut c = fp.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bit_size()).max().unwrap_or(0)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() { (self, o) } else { (o, self) };
        let mut v = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i] = &v[i] + c;
            }
        }
        Poly::from_coeffs(&self.field, v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = self.coeffs.clone();
        v.resize(n, self.field.zero());
        for (i, c) in o.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i] = &v[i] - c;
            }
        }
        Poly::from_coeffs(&self.field, v)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        let a_nz: Vec<(usize, &FieldElem)> = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let b_nz: Vec<(usize, &FieldElem)> = o.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for &(i, a) in &a_nz {
            for &(j, b) in &b_nz {
                let t = a * b;
                v[i + j] = &v[i + j] + &t;
            }
        }
        Poly::from_coeffs(f, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect(), field: self.field.clone() }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &FieldElem, e: usize, first: bool) -> fmt::Result {
    let mono = match e {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{e}"),
    };
    if let Some(r) = c.as_rational() {
        let neg = r.is_negative();
        let a = r.abs();
        if neg {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        if e == 0 {
            write!(f, "{}", format_rational(&a))
        } else if a.is_one() {
            write!(f, "{mono}")
        } else {
            write!(f, "{}*{mono}", format_rational(&a))
        }
    } else {
        if !first {
            write!(f, "+")?;
        }
        if e == 0 {
            write!(f, "({c})")
        } else {
            write!(f, "({c})*{mono}")
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, e, first)?;
            first = false;
        }
        Ok(())
    }
}
