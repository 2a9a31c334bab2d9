use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::{Poly, Rational};

const BISECTION_STEPS: usize = 24;

fn two_pow(e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        base
    } else {
        base.recip()
    }
}

/// `x^d - sum B_i x^i` at `x`.
fn majorant(b: &[Rational], x: &Rational) -> Rational {
    let d = b.len();
    let mut acc = Rational::one();
    // Horner on x^d - B_{d-1} x^{d-1} - ... - B_0
    for i in (0..d).rev() {
        acc = &acc * x - &b[i];
    }
    acc
}

/// Certified upper bound on the moduli of the roots of `p` (nonzero leading coefficient).
pub fn root_modulus_upper(p: &Poly) -> Rational {
    let d = p.deg();
    if d == 0 {
        return Rational::zero();
    }
    let m = p.monic();
    let b: Vec<Rational> = (0..d).map(|i| m.coeff(i).abs_bound()).collect();
    if b.iter().all(|x| x.is_zero()) {
        return Rational::zero();
    }
    // Unique positive root rho of the majorant; find 2^(e-1) < rho <= 2^e.
    let cauchy = b.iter().fold(Rational::zero(), |a, x| if *x > a { x.clone() } else { a }) + Rational::one();
    let mut hi_e = cauchy.numer().bits() as i64 - cauchy.denom().bits() as i64 + 1;
    let mut lo_e = hi_e;
    loop {
        lo_e -= (hi_e - lo_e).max(1);
        if majorant(&b, &two_pow(lo_e)) <= Rational::zero() || lo_e < -4096 {
            break;
        }
    }
    while hi_e - lo_e > 1 {
        let mid = (hi_e + lo_e) / 2;
        if majorant(&b, &two_pow(mid)) > Rational::zero() {
            hi_e = mid;
        } else {
            lo_e = mid;
        }
    }
    let mut hi = two_pow(hi_e);
    let mut lo = two_pow(lo_e);
    for _ in 0..BISECTION_STEPS {
        let mid = (&hi + &lo) / Rational::from_integer(2.into());
        if majorant(&b, &mid) > Rational::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Certified lower bound on the moduli of the roots of `p`; zero when `p(0) = 0`.
pub fn root_modulus_lower(p: &Poly) -> Rational {
    if p.deg() == 0 {
        return Rational::zero();
    }
    if p.coeff(0).is_zero() {
        return Rational::zero();
    }
    let u = root_modulus_upper(&p.reverse());
    if u.is_zero() {
        Rational::zero()
    } else {
        u.recip()
    }
}
