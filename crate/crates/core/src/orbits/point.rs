use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::cyclotomic::{cyclotomic_coeffs, euler_phi, multiplicative_order};
use crate::field::{Field, FieldElem, Poly, Rational};

/// A Galois-stable set of points, carried by its monic square-free class polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointClass {
    Zero,
    /// A single nonzero point of `K`, with its order when it is a root of unity.
    Element { value: FieldElem, unity_order: Option<u64> },
    /// Primitive `order`-th roots of unity that are not individually in `K`.
    Unity { order: u64, poly: Poly },
    /// Non-unity points outside `K`.
    Algebraic(Poly),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Calm,
    /// `unity` is `(b, m)`: order `b` and the multiplicative order `m` of `k` mod `b`.
    Anxious { unity: Option<(u64, u64)> },
}

impl Classification {
    pub fn is_anxious(self) -> bool {
        matches!(self, Classification::Anxious { .. })
    }
}

impl PointClass {
    pub fn element(value: FieldElem) -> PointClass {
        assert!(!value.is_zero(), "use PointClass::Zero for the origin");
        let unity_order = value.unity_order();
        PointClass::Element { value, unity_order }
    }

    pub fn class_poly(&self, field: &Field) -> Poly {
        match self {
            PointClass::Zero => Poly::z(field),
            PointClass::Element { value, .. } => Poly::linear(value),
            PointClass::Unity { poly, .. } | PointClass::Algebraic(poly) => poly.clone(),
        }
    }

    pub fn unity_order(&self) -> Option<u64> {
        match self {
            PointClass::Element { unity_order, .. } => *unity_order,
            PointClass::Unity { order, .. } => Some(*order),
            _ => None,
        }
    }

    pub fn is_unity(&self) -> bool {
        self.unity_order().is_some()
    }

    pub fn degree(&self) -> usize {
        match self {
            PointClass::Zero | PointClass::Element { .. } => 1,
            PointClass::Unity { poly, .. } | PointClass::Algebraic(poly) => poly.deg(),
        }
    }

    /// Splits a monic square-free polynomial into point classes.
    pub fn split_poly(p: &Poly) -> Vec<PointClass> {
        let mut out = Vec::new();
        let mut rest = p.monic();
        if rest.is_constant() {
            return out;
        }
        if rest.coeff(0).is_zero() {
            out.push(PointClass::Zero);
            rest = rest.unshift(1);
        }
        let (mut out_roots, rest) = PointClass::split_roots(&rest);
        out.append(&mut out_roots);
        if rest.is_constant() {
            return out;
        }
        let e = power_shape(&rest);
        if e > 1 {
            let inner = Poly::from_coeffs(rest.field(), rest.coeffs().iter().step_by(e).cloned().collect());
            for cls in PointClass::split_poly(&inner) {
                let (mut found, piece) = PointClass::split_roots(&cls.class_poly(rest.field()).compose_pow(e));
                out.append(&mut found);
                out.extend(PointClass::leftover(piece));
            }
        } else {
            out.extend(PointClass::leftover(rest));
        }
        out
    }

    fn leftover(rest: Poly) -> Option<PointClass> {
        match rest.deg() {
            0 => None,
            1 => Some(PointClass::element(-&rest.coeff(0))),
            _ => Some(PointClass::Algebraic(rest)),
        }
    }

    /// Extracts roots of unity and rational roots of a monic square-free polynomial with `p(0) != 0`.
    /// Returns the classes found and the remaining factor.
    fn split_roots(p: &Poly) -> (Vec<PointClass>, Poly) {
        let field = p.field().clone();
        let mut out = Vec::new();
        let mut rest = p.monic();
        if rest.is_constant() {
            return (out, rest);
        }
        let m = field.unity_order();
        let omega = field.primitive_unity_root();
        let phi_m = euler_phi(m);
        let mut approx = complex_coeffs(&rest);
        let mut b = 1u64;
        while !rest.is_constant() && b <= 2 * (rest.deg() as u64 * phi_m).pow(2) + 2 {
            if (euler_phi(b.lcm(&m)) / phi_m) as usize <= rest.deg() && may_vanish_on_unity(&approx, b, rest.deg()) {
                let phi_b = Poly::from_coeffs(
                    &field,
                    cyclotomic_coeffs(b).into_iter().map(|c| field.from_rational(Rational::from_integer(c))).collect(),
                );
                let g = phi_b.gcd(&rest.rem(&phi_b));
                if !g.is_constant() {
                    rest = rest.exact_div(&g);
                    approx = complex_coeffs(&rest);
                    if m % b == 0 {
                        let step = m / b;
                        for j in 1..=b {
                            if j.gcd(&b) != 1 {
                                continue;
                            }
                            let root = omega.pow(step * j);
                            if g.eval(&root).is_zero() {
                                out.push(PointClass::Element { value: root, unity_order: Some(b) });
                            }
                        }
                    } else {
                        out.push(PointClass::Unity { order: b, poly: g });
                    }
                }
            }
            b += 1;
        }
        for r in rational_roots_over_field(&rest) {
            let e = field.from_rational(r);
            rest = rest.exact_div(&Poly::linear(&e));
            out.push(PointClass::element(e));
        }
        (out, rest)
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            PointClass::Zero => json!({"kind": "zero"}),
            PointClass::Element { value, .. } => json!({"kind": "element", "value": value.to_strings()}),
            PointClass::Unity { order, poly } => json!({
                "kind": "unity",
                "order": order,
                "poly": crate::syntax::wire::poly_to_json(poly),
            }),
            PointClass::Algebraic(p) => json!({"kind": "algebraic", "poly": crate::syntax::wire::poly_to_json(p)}),
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointClass::Zero => write!(f, "z"),
            PointClass::Element { value, .. } => write!(f, "{}", Poly::linear(value)),
            PointClass::Unity { poly, .. } | PointClass::Algebraic(poly) => write!(f, "{poly}"),
        }
    }
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 20;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut d = BigInt::one();
    let mut iters = 0u64;
    while &d * &d <= n {
        iters += 1;
        if iters > ROOT_SEARCH_LIMIT {
            return None;
        }
        if (&n % &d).is_zero() {
            hi.push(&n / &d);
            lo.push(d.clone());
        }
        d += 1;
    }
    if lo.last() == hi.last() {
        hi.pop();
    }
    lo.extend(hi.into_iter().rev());
    Some(lo)
}

/// Distinct rational roots of a polynomial with rational coefficients, by the rational root test.
/// Returns nothing when a coefficient is irrational or the divisor search is too large.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    if p.deg() < 2 {
        return Vec::new();
    }
    let mut qs = Vec::new();
    for c in p.coeffs() {
        match c.as_rational() {
            Some(r) => qs.push(r.clone()),
            None => return Vec::new(),
        }
    }
    let den = qs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect();
    let Some(num_divs) = small_divisors(&ints[0]) else { return Vec::new() };
    let Some(den_divs) = small_divisors(ints.last().unwrap()) else { return Vec::new() };
    let mut roots: Vec<Rational> = Vec::new();
    let mut rest = p.clone();
    for a in &num_divs {
        for b in &den_divs {
            for sign in [1, -1] {
                let r = Rational::new(a * BigInt::from(sign), b.clone());
                if roots.contains(&r) {
                    continue;
                }
                let e = p.field().from_rational(r.clone());
                if rest.eval(&e).is_zero() {
                    rest = rest.exact_div(&Poly::linear(&e));
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// Largest `e` with `p(z) = r(z^e)`.
fn power_shape(p: &Poly) -> usize {
    let mut e = 0usize;
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            e = e.gcd(&i);
        }
    }
    e.max(1)
}

/// Coefficients under the embedding `zeta -> exp(2 pi i / N)`, or `None` when one overflows `f64`.
fn complex_coeffs(p: &Poly) -> Option<Vec<(f64, f64)>> {
    let n = p.field().order() as f64;
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, x) in c.coords().iter().enumerate() {
            let v = x.to_f64().filter(|v| v.is_finite())?;
            let t = std::f64::consts::TAU * j as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        out.push((re, im));
    }
    Some(out)
}

/// Whether some primitive `b`-th root of unity is numerically close to a root.
/// Without an approximation only small degrees are tried exactly.
fn may_vanish_on_unity(approx: &Option<Vec<(f64, f64)>>, b: u64, deg: usize) -> bool {
    let Some(cs) = approx else { return deg <= 8 };
    let scale: f64 = cs.iter().map(|(re, im)| re.hypot(*im)).sum();
    for j in 1..=b {
        if j.gcd(&b) != 1 {
            continue;
        }
        let t = std::f64::consts::TAU * j as f64 / b as f64;
        let (xr, xi) = (t.cos(), t.sin());
        let (mut ar, mut ai) = (0.0, 0.0);
        for (cr, ci) in cs.iter().rev() {
            let nr = ar * xr - ai * xi + cr;
            ai = ar * xi + ai * xr + ci;
            ar = nr;
        }
        if ar.hypot(ai) <= 1e-7 * scale {
            return true;
        }
    }
    false
}

/// Distinct rational roots of a polynomial over `K`: roots of a coordinate polynomial that annihilate `p`.
pub fn rational_roots_over_field(p: &Poly) -> Vec<Rational> {
    let field = p.field();
    if p.deg() < 2 {
        return Vec::new();
    }
    if p.coeffs().iter().all(|c| c.as_rational().is_some()) {
        return rational_roots(p);
    }
    let mut best: Option<Poly> = None;
    for j in 0..field.degree() {
        let cs: Vec<Rational> = p.coeffs().iter().map(|c| c.coords()[j].clone()).collect();
        let pj = Poly::from_rationals(field, &cs);
        if pj.is_zero() {
            continue;
        }
        if best.as_ref().map_or(true, |b| pj.deg() < b.deg()) {
            best = Some(pj);
        }
    }
    let Some(g) = best else { return Vec::new() };
    let candidates = match g.deg() {
        0 => Vec::new(),
        1 => vec![(-&g.monic().coeff(0)).as_rational().cloned().expect("rational coefficient")],
        _ => rational_roots(&g),
    };
    candidates.into_iter().filter(|r| p.eval(&field.from_rational(r.clone())).is_zero()).collect()
}

pub fn classify_point(p: &PointClass, k: u64) -> Classification {
    match p {
        PointClass::Zero => Classification::Calm,
        other => match other.unity_order() {
            Some(b) if b.gcd(&k) > 1 => Classification::Calm,
            Some(b) => Classification::Anxious { unity: Some((b, multiplicative_order(k, b).unwrap())) },
            None => Classification::Anxious { unity: None },
        },
    }
}

/// Monic polynomial whose roots are the `e`-th powers of the roots of `f`, with multiplicity.
pub fn power_map_charpoly(f: &Poly, e: u64) -> Poly {
    let field = f.field().clone();
    let f = f.monic();
    let d = f.deg();
    if d == 0 {
        return Poly::one(&field);
    }
    if d == 1 {
        return Poly::linear(&(-&f.coeff(0)).pow(e));
    }
    // Power sums s_i of the roots of f, i < d, by Newton's identities.
    let elem: Vec<FieldElem> = (0..=d)
        .map(|j| if j % 2 == 0 { f.coeff(d - j) } else { -&f.coeff(d - j) })
        .collect();
    let s = newton_power_sums(&elem, d, &field);
    let trace = |g: &Poly| -> FieldElem {
        g.coeffs().iter().zip(&s).fold(field.zero(), |acc, (c, si)| &acc + &(c * si))
    };
    let a = Poly::z(&field).pow_mod(e, &f);
    let mut powers = Vec::with_capacity(d);
    let mut cur = Poly::one(&field);
    for _ in 0..d {
        cur = cur.mul_mod(&a, &f);
        powers.push(trace(&cur));
    }
    // Elementary symmetric functions from the power sums P_1..P_d.
    let mut e_sym = vec![field.one()];
    for j in 1..=d {
        let mut acc = field.zero();
        for i in 1..=j {
            let t = &e_sym[j - i] * &powers[i - 1];
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        e_sym.push(acc.scale(&Rational::from_integer((j as i64).into()).recip()));
    }
    let coeffs: Vec<FieldElem> = (0..=d)
        .map(|i| {
            let j = d - i;
            if j % 2 == 0 {
                e_sym[j].clone()
            } else {
                -&e_sym[j]
            }
        })
        .collect();
    Poly::from_coeffs(&field, coeffs)
}

/// Power sums `s_0..s_{d-1}` from elementary symmetric functions `e_0..e_d`.
fn newton_power_sums(e: &[FieldElem], d: usize, field: &Field) -> Vec<FieldElem> {
    let mut s = vec![field.from_int(d as i64)];
    for i in 1..d {
        let mut acc = field.zero();
        for j in 1..i {
            let t = &e[j] * &s[i - j];
            acc = if j % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        let t = e[i].scale(&Rational::from_integer((i as i64).into()));
        acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        s.push(acc);
    }
    s
}

/// `t`-fold iterate of the `k`-power map on roots, with multiplicity.
pub fn power_map_charpoly_iter(f: &Poly, k: u64, t: usize) -> Poly {
    let mut g = f.monic();
    for _ in 0..t {
        g = power_map_charpoly(&g, k);
    }
    g
}

/// Image class of `z -> z^k`.
pub fn orbit_step(p: &PointClass, k: u64) -> PointClass {
    match p {
        PointClass::Zero => PointClass::Zero,
        PointClass::Element { value, .. } => PointClass::element(value.pow(k)),
        PointClass::Unity { order, poly } => {
            let image = power_map_charpoly(poly, k).square_free_part();
            let b = order / order.gcd(&k);
            if image.deg() == 1 {
                PointClass::element(-&image.coeff(0))
            } else {
                PointClass::Unity { order: b, poly: image }
            }
        }
        PointClass::Algebraic(f) => {
            let image = power_map_charpoly(f, k).square_free_part();
            if image.deg() == 1 {
                PointClass::element(-&image.coeff(0))
            } else {
                PointClass::Algebraic(image)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let q = Field::rationals();
        assert_eq!(
            classify_point(&PointClass::element(q.one()), 2),
            Classification::Anxious { unity: Some((1, 1)) }
        );
        let u3 = PointClass::Unity { order: 3, poly: Poly::from_ints(&q, &[1, 1, 1]) };
        assert_eq!(classify_point(&u3, 3), Classification::Calm);
        assert_eq!(classify_point(&PointClass::element(q.from_int(2)), 2), Classification::Anxious { unity: None });
        assert_eq!(classify_point(&PointClass::Zero, 5), Classification::Calm);
    }

    #[test]
    fn orbit_step_examples() {
        let q = Field::rationals();
        assert_eq!(orbit_step(&PointClass::element(q.from_int(2)), 2), PointClass::element(q.from_int(4)));
        let a = PointClass::Algebraic(Poly::from_ints(&q, &[-2, 0, 1]));
        assert_eq!(orbit_step(&a, 2), PointClass::element(q.from_int(2)));
        let phi5 = Poly::from_ints(&q, &[1, 1, 1, 1, 1]);
        let u5 = PointClass::Unity { order: 5, poly: phi5.clone() };
        assert_eq!(orbit_step(&u5, 2), u5);
    }

    #[test]
    fn charpoly_matches_resultant() {
        let q = Field::rationals();
        // roots of z^2 - 2 squared: both 2 -> (z - 2)^2
        let f = Poly::from_ints(&q, &[-2, 0, 1]);
        assert_eq!(power_map_charpoly(&f, 2), Poly::from_ints(&q, &[4, -4, 1]));
        // z^2 - z - 1, cubes: roots phi^3, psi^3 with sum 4 and product -1
        let f = Poly::from_ints(&q, &[-1, -1, 1]);
        assert_eq!(power_map_charpoly(&f, 3), Poly::from_ints(&q, &[-1, -4, 1]));
    }

    #[test]
    fn split_over_cyclotomic_field() {
        let k = Field::new(5);
        // (z^4+z^3+z^2+z+1)(z-2)(z^2+1)
        let p = &(&Poly::from_ints(&k, &[1, 1, 1, 1, 1]) * &Poly::from_ints(&k, &[-2, 1])) * &Poly::from_ints(&k, &[1, 0, 1]);
        let classes = PointClass::split_poly(&p);
        let elems = classes.iter().filter(|c| matches!(c, PointClass::Element { unity_order: Some(5), .. })).count();
        assert_eq!(elems, 4);
        assert!(classes.contains(&PointClass::Unity { order: 4, poly: Poly::from_ints(&k, &[1, 0, 1]) }));
        assert!(classes.contains(&PointClass::element(k.from_int(2))));
    }
}
