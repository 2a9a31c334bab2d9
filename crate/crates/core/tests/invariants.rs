use proptest::prelude::*;

use mahler_core::field::{digit_match, local_expansion, valuation_at_class, ExtInt, Field, FieldElem, Poly, RatFun};
use mahler_core::operators::{cartier_all, op_mul, MahlerEquation, MahlerOperator};
use mahler_core::orbits::PointClass;
use mahler_core::series::{becker_product, Truncation};
use mahler_core::syntax::{equation_to_text, parse_equation};

fn k3() -> Field {
    Field::new(3)
}

fn elem() -> impl Strategy<Value = FieldElem> {
    (-6i64..=6, -6i64..=6).prop_map(|(a, b)| {
        let f = k3();
        &f.from_int(a) + &f.zeta().scale(&mahler_core::field::Rational::from_integer(b.into()))
    })
}

fn nonzero_elem() -> impl Strategy<Value = FieldElem> {
    elem().prop_filter("nonzero", |e| !e.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(elem(), 1..=max_deg + 1).prop_map(|cs| Poly::from_coeffs(&k3(), cs))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(3), nonzero_poly(2)).prop_map(|(n, d)| RatFun::new(n, d))
}

fn nonzero_ratfun() -> impl Strategy<Value = RatFun> {
    ratfun().prop_filter("nonzero", |c| !c.is_zero())
}

fn operator(k: u64) -> impl Strategy<Value = MahlerOperator> {
    prop::collection::vec(ratfun(), 1..=3).prop_map(move |cs| {
        let mut op = MahlerOperator::zero(k, &k3());
        for (d, c) in cs.into_iter().enumerate() {
            op.add_term(d, c);
        }
        op
    })
}

fn linear_root() -> impl Strategy<Value = FieldElem> {
    (-4i64..=4).prop_filter("nonzero", |a| *a != 0).prop_map(|a| k3().from_int(a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn field_inverse(a in nonzero_elem()) {
        prop_assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn poly_division(a in poly(5), d in nonzero_poly(3)) {
        let (q, r) = a.divrem(&d);
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < d.deg());
    }

    #[test]
    fn poly_gcd_divides(a in nonzero_poly(4), b in nonzero_poly(4), c in nonzero_poly(2)) {
        let ac = &a * &c;
        let bc = &b * &c;
        let g = ac.gcd(&bc);
        prop_assert!(g.divides(&ac) && g.divides(&bc));
        prop_assert!(c.divides(&g));
    }

    #[test]
    fn ratfun_field_laws(a in ratfun(), b in ratfun(), c in nonzero_ratfun()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!((&a * &c).div(&c), a.clone());
        prop_assert!(c.den().lead().unwrap().is_one());
    }

    #[test]
    fn valuation_is_additive(a in nonzero_ratfun(), b in nonzero_ratfun(), r in linear_root()) {
        let f = Poly::linear(&r);
        let va = valuation_at_class(&a, &f).unwrap();
        let vb = valuation_at_class(&b, &f).unwrap();
        prop_assert_eq!(valuation_at_class(&(&a * &b), &f).unwrap(), va + vb);
    }

    #[test]
    fn local_expansion_round_trip(c in nonzero_ratfun(), r in linear_root(), count in 1usize..4) {
        let f = Poly::linear(&r);
        let e = local_expansion(&c, &f, count).unwrap();
        let shifted = &c * &RatFun::from_poly(f.clone()).pow(-e.valuation);
        let diff = &shifted - &RatFun::from_poly(e.unit_part());
        let v = valuation_at_class(&diff, &f).unwrap();
        prop_assert!(v >= ExtInt::Fin(count as i64));
    }

    #[test]
    fn digit_match_congruences(g1 in poly(2), g2 in poly(2), e1 in 1u32..3, e2 in 1u32..3) {
        let f = k3();
        let f1 = Poly::linear(&f.from_int(2));
        let f2 = Poly::linear(&f.zeta());
        let t1 = RatFun::from_poly(g1);
        let t2 = RatFun::from_poly(g2);
        let h = RatFun::from_poly(digit_match(&[(f1.clone(), e1, t1.clone()), (f2.clone(), e2, t2.clone())]).unwrap());
        prop_assert!(valuation_at_class(&(&h - &t1), &f1).unwrap() >= ExtInt::Fin(e1 as i64));
        prop_assert!(valuation_at_class(&(&h - &t2), &f2).unwrap() >= ExtInt::Fin(e2 as i64));
    }

    #[test]
    fn cartier_reconstructs(c in ratfun(), k in 2u64..4) {
        let f = k3();
        let mut sum = RatFun::zero(&f);
        for (r, part) in cartier_all(&c, k).into_iter().enumerate() {
            let mono = RatFun::from_poly(Poly::monomial(f.one(), r));
            sum = &sum + &(&mono * &part.compose_pow(k as usize));
        }
        prop_assert_eq!(sum, c);
    }

    #[test]
    fn cartier_is_semilinear(a in ratfun(), b in ratfun(), k in 2u64..4) {
        let prod = cartier_all(&(&a.compose_pow(k as usize) * &b), k);
        for (r, part) in cartier_all(&b, k).into_iter().enumerate() {
            prop_assert_eq!(&prod[r], &(&a * &part));
        }
    }

    #[test]
    fn becker_residue_vanishes(n in poly(2), d in poly(2), k in 2u64..4) {
        let f = k3();
        let one = Poly::one(&f);
        let num = &one + &n.shift(1);
        let den = &one + &d.shift(1);
        let c0 = RatFun::new(num, den);
        let rep = becker_product(&c0, k, 60).unwrap();
        prop_assert!(rep.residue.is_zero());
        prop_assert!(rep.h.coeff(0).is_one());
    }

    #[test]
    fn series_inverse(p in nonzero_poly(4)) {
        prop_assume!(!p.coeff(0).is_zero());
        let t = Truncation::from_poly(&p, 30);
        let prod = &t * &t.inverse().unwrap();
        prop_assert_eq!(prod, Truncation::one(&k3(), 30));
    }

    #[test]
    fn op_mul_associative(a in operator(2), b in operator(2), c in operator(2)) {
        let left = op_mul(&op_mul(&a, &b).unwrap(), &c).unwrap();
        let right = op_mul(&a, &op_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn op_mul_distributes(a in operator(3), b in operator(3), c in operator(3)) {
        let left = op_mul(&a, &b.add(&c).unwrap()).unwrap();
        let right = op_mul(&a, &b).unwrap().add(&op_mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn split_poly_factors(roots in prop::collection::btree_set(-5i64..=5, 1..4), unity in prop::collection::btree_set(0u64..6, 0..3)) {
        let f = k3();
        let mut prod = Poly::one(&f);
        for r in &roots {
            prod = &prod * &Poly::linear(&f.from_int(*r));
        }
        let w = f.primitive_unity_root();
        for j in &unity {
            let u = w.pow(*j);
            if prod.eval(&u).is_zero() {
                continue;
            }
            prod = &prod * &Poly::linear(&u);
        }
        let classes = PointClass::split_poly(&prod);
        let mut back = Poly::one(&f);
        for cls in &classes {
            prop_assert!(!matches!(cls, PointClass::Algebraic(_)));
            back = &back * &cls.class_poly(&f);
        }
        prop_assert_eq!(back, prod.monic());
    }

    #[test]
    fn parse_round_trip(cs in prop::collection::vec(ratfun(), 1..=3), k in 2u64..5) {
        prop_assume!(!cs.last().unwrap().is_zero());
        let eq = MahlerEquation::new(k, cs).unwrap();
        let text = equation_to_text(&eq);
        let back = parse_equation(&text, &k3(), Some(k)).unwrap();
        prop_assert_eq!(back, eq);
    }
}
