use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_coeffs(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // Phi_n = prod_{d | n} (x^d - 1)^mu(n/d)
    let mut num: Vec<BigInt> = vec![BigInt::one()];
    let mut den: Vec<BigInt> = vec![BigInt::one()];
    for d in divisors(n) {
        let target = match mobius(n / d) {
            1 => &mut num,
            -1 => &mut den,
            _ => continue,
        };
        let mut next = vec![BigInt::zero(); target.len() + d as usize];
        for (i, c) in target.iter().enumerate() {
            next[i + d as usize] += c;
            next[i] -= c;
        }
        *target = next;
    }
    int_exact_div(&num, &den)
}

pub fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] / lb;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    q
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Multiplicative order of `k` modulo `b` (with `ord_1 = 1`).
pub fn multiplicative_order(k: u64, b: u64) -> Option<u64> {
    if b == 1 {
        return Some(1);
    }
    if k.gcd(&b) != 1 {
        return None;
    }
    let mut x = k % b;
    let mut m = 1;
    while x != 1 {
        x = (x as u128 * k as u128 % b as u128) as u64;
        m += 1;
    }
    Some(m)
}

/// The cyclotomic field `Q(zeta_N)` as `Q[x]/Phi_N`.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    /// Monic `Phi_N`, lowest degree first, length `degree + 1`.
    modulus: Vec<Rational>,
}

/// Shared handle to a cyclotomic field.
#[derive(Clone, Debug)]
pub struct Field(Arc<CyclotomicField>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.order == other.0.order
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(order: u64) -> Field {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus: Vec<Rational> =
            cyclotomic_coeffs(order).into_iter().map(BigRational::from_integer).collect();
        Field(Arc::new(CyclotomicField { order, degree: modulus.len() - 1, modulus }))
    }

    pub fn rationals() -> Field {
        Field::new(1)
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Order of the group of roots of unity contained in the field.
    pub fn unity_order(&self) -> u64 {
        if self.0.order % 2 == 0 {
            self.0.order
        } else {
            2 * self.0.order
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coords: vec![Rational::zero(); self.degree()], field: self.clone() }
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> FieldElem {
        let mut e = self.zero();
        e.coords[0] = r;
        e
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The generator `zeta_N`.
    pub fn zeta(&self) -> FieldElem {
        let mut c = vec![Rational::zero(); self.0.order as usize];
        c[1 % self.0.order as usize] += Rational::one();
        self.reduce_coords(c)
    }

    /// A primitive `M`-th root of unity, `M = unity_order()`.
    pub fn primitive_unity_root(&self) -> FieldElem {
        if self.0.order % 2 == 0 {
            self.zeta()
        } else {
            -self.zeta()
        }
    }

    pub fn from_coords(&self, coords: Vec<Rational>) -> FieldElem {
        self.reduce_coords(coords)
    }

    fn reduce_coords(&self, mut c: Vec<Rational>) -> FieldElem {
        let d = self.degree();
        let m = &self.0.modulus;
        if c.len() > d {
            for i in (d..c.len()).rev() {
                if c[i].is_zero() {
                    continue;
                }
                let lead = std::mem::replace(&mut c[i], Rational::zero());
                for j in 0..d {
                    if !m[j].is_zero() {
                        let t = &lead * &m[j];
                        c[i - d + j] -= t;
                    }
                }
            }
            c.truncate(d);
        }
        while c.len() < d {
            c.push(Rational::zero());
        }
        FieldElem { coords: c, field: self.clone() }
    }
}

/// An element of `Q(zeta_N)` in the power basis `1, zeta, ..., zeta^(phi(N)-1)`.
#[derive(Clone, Debug)]
pub struct FieldElem {
    coords: Vec<Rational>,
    field: Field,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Sum of absolute values of the coordinates, an upper bound on `|x|` in any embedding.
    pub fn abs_bound(&self) -> Rational {
        self.coords.iter().map(|c| c.abs()).fold(Rational::zero(), |a, b| a + b)
    }

    /// Lower bound on `|x|` in every complex embedding (zero when unknown).
    pub fn abs_lower_bound(&self) -> Rational {
        if let Some(r) = self.as_rational() {
            return r.abs();
        }
        if self.is_zero() {
            return Rational::zero();
        }
        // |x| >= 1 / |x^{-1}|
        let inv = self.inv();
        let b = inv.abs_bound();
        if b.is_zero() {
            Rational::zero()
        } else {
            b.recip()
        }
    }

    pub fn bit_size(&self) -> u64 {
        self.coords.iter().map(super::rational::bit_size).sum()
    }

    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero");
        if self.field.degree() == 1 {
            return self.field.from_rational(self.coords[0].recip());
        }
        // Extended Euclid of a(x) against Phi_N(x) over Q.
        let modulus = self.field.0.modulus.clone();
        let a = trim(self.coords.clone());
        let (g, s) = qpoly_ext_gcd(&a, &modulus);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let s: Vec<Rational> = s.into_iter().map(|c| c * &ginv).collect();
        self.field.reduce_coords(s)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
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

    pub fn powi(&self, e: i64) -> FieldElem {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().pow(e.unsigned_abs())
        }
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self * &other.inv()
    }

    pub fn scale(&self, r: &Rational) -> FieldElem {
        FieldElem { coords: self.coords.iter().map(|c| c * r).collect(), field: self.field.clone() }
    }

    /// Order of this element as a root of unity, if it is one.
    pub fn unity_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let m = self.field.unity_order();
        if !self.pow(m).is_one() {
            return None;
        }
        divisors(m).into_iter().find(|&d| self.pow(d).is_one())
    }

    /// Lowest common denominator of the coordinates.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(r));
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{i}"),
            };
            if i == 0 {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
            field: self.field.clone(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
            field: self.field.clone(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let d = self.coords.len();
        if d == 1 {
            return FieldElem { coords: vec![&self.coords[0] * &o.coords[0]], field: self.field.clone() };
        }
        let mut c = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        self.field.reduce_coords(c)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { coords: self.coords.into_iter().map(|c| -c).collect(), field: self.field }
    }
}

impl<'a> Neg for &'a FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { coords: self.coords.iter().map(|c| -c).collect(), field: self.field.clone() }
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn qpoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let mut r = trim(a.to_vec());
    if r.len() <= db || (r.len() == 1 && r[0].is_zero()) {
        return (vec![Rational::zero()], r);
    }
    let lb = b[db].recip();
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lb;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &b[j];
                r[i + j] -= t;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    (q, trim(r))
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    trim(c)
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut c = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        c[i] -= y;
    }
    trim(c)
}

fn is_zero_poly(a: &[Rational]) -> bool {
    a.iter().all(|c| c.is_zero())
}

/// Returns `(g, s)` with `s*a = g (mod m)`.
fn qpoly_ext_gcd(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(m.to_vec()));
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let s = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{rat, ratio};

    #[test]
    fn cyclotomic_small_orders() {
        let as_i64 = |n| cyclotomic_coeffs(n).iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(as_i64(15).len(), 9);
    }

    #[test]
    fn zeta_has_order_n() {
        for n in [3u64, 4, 5, 7, 12] {
            let k = Field::new(n);
            let z = k.zeta();
            assert!(z.pow(n).is_one());
            assert_eq!(z.unity_order(), Some(n));
        }
        let k = Field::new(5);
        assert_eq!(k.unity_order(), 10);
        assert_eq!((-k.zeta()).unity_order(), Some(10));
        assert_eq!(k.from_int(2).unity_order(), None);
    }

    #[test]
    fn inverse_round_trip() {
        let k = Field::new(7);
        let z = k.zeta();
        let x = &(&z * &z) + &k.from_rational(ratio(3, 2));
        let y = x.inv();
        assert!((&x * &y).is_one());
        let q = Field::rationals();
        assert_eq!(q.from_int(4).inv().as_rational(), Some(&ratio(1, 4)));
        assert_eq!(q.from_int(2).powi(-3).as_rational(), Some(&ratio(1, 8)));
        assert_eq!(rat(3), ratio(6, 2));
    }

    #[test]
    fn orders_and_phi() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(3, 5), Some(4));
        assert_eq!(multiplicative_order(2, 6), None);
    }
}
