use crate::field::{ExtInt, Field, Poly, RatFun, Rational};
use crate::orbits::PointClass;

use super::*;

fn q() -> Field {
    Field::rationals()
}

fn p(f: &Field, cs: &[i64]) -> Poly {
    Poly::from_ints(f, cs)
}

fn rf(f: &Field, num: &[i64], den: &[i64]) -> RatFun {
    RatFun::new(p(f, num), p(f, den))
}

fn counterexample() -> Vec<RatFun> {
    let f = q();
    let c1 = RatFun::new(
        Poly::from_rationals(&f, &[Rational::from_integer((-6).into()), Rational::new(15.into(), 4.into())]),
        p(&f, &[2, -1]),
    );
    let c2 = rf(&f, &[8, -1], &[2, -1]);
    vec![c1, c2]
}

fn opts() -> CalmnessOptions {
    CalmnessOptions::default()
}

#[test]
fn action_examples() {
    let f = q();
    let c = vec![rf(&f, &[-4, 1], &[-2, 1])];
    assert_eq!(act_poly(&p(&f, &[-4, 1]), &c, 2).unwrap(), vec![RatFun::from_poly(p(&f, &[2, 1]))]);
    assert_eq!(act_poly(&Poly::one(&f), &c, 2).unwrap(), c);
    assert_eq!(act_poly(&Poly::z(&f), &c, 2).unwrap(), vec![c[0].mul_poly(&Poly::z(&f))]);
}

#[test]
fn counterexample_sequences() {
    let c = counterexample();
    let two = PointClass::element(q().from_int(2));
    let spec = |entries: Vec<usize>| SequenceSpec { start: two.clone(), entries, mode: SequenceMode::InfiniteTail };
    assert_eq!(clm_of_sequence(&c, &spec(vec![1, 1]), 3, 64).unwrap(), ExtInt::Fin(-1));
    assert_eq!(clm_of_sequence(&c, &spec(vec![1, 2]), 3, 64).unwrap(), ExtInt::Fin(0));
    let zero = vec![RatFun::zero(&q())];
    let one = PointClass::element(q().from_int(2));
    let s = SequenceSpec { start: one, entries: vec![1], mode: SequenceMode::InfiniteTail };
    assert_eq!(clm_of_sequence(&[zero[0].clone(), c[0].clone()], &SequenceSpec { entries: vec![1, 1], ..s }, 3, 64).unwrap(), ExtInt::PosInf);
}

#[test]
fn counterexample_not_precalm() {
    let v = is_precalm(&counterexample(), 3, &opts()).unwrap();
    assert!(!v.precalm);
    let viol = v.violation.unwrap();
    assert_eq!(viol.class.to_string(), "z-2");
    assert_eq!(viol.sequence.entries, vec![1, 1]);
    assert_eq!(viol.clm, ExtInt::Fin(-1));
}

#[test]
fn min_clm_examples() {
    let f = q();
    let c = vec![rf(&f, &[-4, 1], &[-2, 1])];
    let m = min_clm(&c, &PointClass::element(f.from_int(2)), 2, 64).unwrap();
    assert_eq!(m.value, ExtInt::Fin(0));

    let c = vec![rf(&f, &[1], &[1, -1])];
    let m = min_clm(&c, &PointClass::element(f.one()), 2, 64).unwrap();
    assert_eq!(m.value, ExtInt::NegInf);
    assert_eq!(m.witness_clm, ExtInt::Fin(-1));
    assert_eq!(m.witness.unwrap().entries, vec![1]);
}

fn zeta5_example() -> (Field, Vec<RatFun>) {
    let f = Field::new(5);
    let z = f.zeta();
    let c1 = RatFun::new(Poly::linear(&z.pow(2)), Poly::linear(&z));
    (f, vec![c1])
}

#[test]
fn position_dependent_unity_graph() {
    let (f, c) = zeta5_example();
    let m = min_clm(&c, &PointClass::element(f.zeta()), 2, 64).unwrap();
    assert_eq!(m.value, ExtInt::Fin(0));
    let (h, trace) = precalm_witness(&c, 2, &opts()).unwrap();
    assert_eq!(h, Poly::linear(&f.zeta().pow(2)));
    assert_eq!(act_poly(&h, &c, 2).unwrap(), vec![RatFun::from_poly(Poly::linear(&-f.zeta()))]);
    assert!(trace.sigma_decreasing());
}

#[test]
fn witness_examples() {
    let f = q();
    let c = vec![rf(&f, &[-4, 1], &[-2, 1])];
    for strategy in StrategyRegistry::with_defaults().names() {
        let o = CalmnessOptions { strategy: strategy.to_string(), ..opts() };
        let (h, _) = precalm_witness(&c, 2, &o).unwrap();
        assert_eq!(h, p(&f, &[-4, 1]), "{strategy}");
    }
    let calm = vec![rf(&f, &[1, 1], &[1])];
    assert!(precalm_witness(&calm, 2, &opts()).unwrap().0.is_one());
    assert!(is_precalm(&calm, 2, &opts()).unwrap().precalm);
    assert_eq!(precalm_witness(&counterexample(), 3, &opts()).unwrap_err(), crate::MahlerError::NotPrecalm);
}

#[test]
fn prepolynomialize_examples() {
    let f = q();
    assert!(prepolynomialize(&[rf(&f, &[1, 0, 1], &[1])], 2).unwrap().is_one());
    assert_eq!(prepolynomialize(&[rf(&f, &[1], &[0, 1])], 2).unwrap(), Poly::z(&f));
    let h = prepolynomialize(&[rf(&f, &[1], &[1, 1, 1])], 3).unwrap();
    assert_eq!(h, p(&f, &[-1, 1]));
    assert!(matches!(prepolynomialize(&[rf(&f, &[1], &[1, 0, 0, -1])], 3), Err(crate::MahlerError::NotCalm(_))));
}

#[test]
fn polynomialize_examples() {
    let f = q();
    assert_eq!(polynomialize(&[rf(&f, &[-4, 1], &[-2, 1])], 2, &opts()).unwrap(), p(&f, &[-4, 1]));
    assert!(polynomialize(&[rf(&f, &[1, 1], &[1])], 2, &opts()).unwrap().is_one());
    assert_eq!(polynomialize(&[rf(&f, &[1, 1], &[0, 1])], 2, &opts()).unwrap(), Poly::z(&f));
}

#[test]
fn non_unity_witness_with_chain() {
    // pole of c_1 at 2 compensated two steps down the orbit, at 16
    let f = q();
    let c = vec![rf(&f, &[-16, 1], &[-2, 1]), rf(&f, &[64, -20, 1], &[1])];
    let v = is_precalm(&c, 2, &opts()).unwrap();
    assert!(v.precalm);
    let h = v.witness.unwrap();
    assert_eq!(h, &p(&f, &[-4, 1]) * &p(&f, &[-16, 1]));
    assert!(is_calm(&act_poly(&h, &c, 2).unwrap(), 2).unwrap());
    let o = CalmnessOptions { strategy: "potential".into(), ..opts() };
    let (h2, _) = precalm_witness(&c, 2, &o).unwrap();
    assert!(is_calm(&act_poly(&h2, &c, 2).unwrap(), 2).unwrap());
}
