use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::calmness::{decide_precalm, DEFAULT_HORIZON_CAP};
use crate::error::{MahlerError, Result};
use crate::field::{ExtInt, FieldElem, Poly, RatFun};
use crate::operators::{op_mul, regularity_search, MahlerEquation, MahlerOperator, RegularityOptions, RegularityVerdict};
use crate::orbits::{classify_point, HorizonGuarantee, PointClass, SupportSet};
use crate::syntax::wire::ratfun_to_json;

use super::probe::{guess_relation, DEFAULT_MARGIN};
use super::solve::{equation_residue, solve_series};

pub const GUESS_TERMS: usize = 600;
pub const GUESS_DEGREE: usize = 8;
pub const RESIDUE_TERMS: usize = 201;

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub label: char,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub k: u64,
    pub alpha: FieldElem,
    pub equation: MahlerEquation,
    pub psi: RatFun,
    pub order_three: MahlerEquation,
    pub assertions: Vec<Assertion>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "alpha": self.alpha.to_string(),
            "equation": self.equation.to_json(),
            "coefficients_text": self.equation.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "psi": ratfun_to_json(&self.psi),
            "order_three": self.order_three.to_json(),
            "assertions": self.assertions,
            "passed": self.passed(),
        })
    }
}

/// `c_1`, `c_2` and `psi` of the order-two family with parameter `alpha`.
pub fn counterexample_coefficients(k: u64, alpha: &FieldElem) -> (RatFun, RatFun, RatFun) {
    let field = alpha.field().clone();
    let a1 = alpha.pow(k - 1);
    let am = a1.inv();
    let ak = alpha.pow(k);
    let den = Poly::from_coeffs(&field, vec![alpha.clone(), -&field.one()]);
    let c1 = RatFun::new(Poly::from_coeffs(&field, vec![alpha - &ak, &a1 - &am]), den.clone());
    let c2 = RatFun::new(Poly::from_coeffs(&field, vec![ak, -&field.one()]), den.clone());
    let mut top = vec![field.zero(); k as usize + 1];
    top[0] = alpha.clone();
    top[k as usize] = -&field.one();
    let psi = RatFun::new(Poly::from_coeffs(&field, top), den).scale(&(-&am));
    (c1, c2, psi)
}

fn check_hypotheses(k: u64, alpha: &FieldElem) -> Result<()> {
    if k < 3 {
        return Err(MahlerError::ConstraintViolated(format!("k = {k} < 3")));
    }
    if alpha.is_zero() {
        return Err(MahlerError::ConstraintViolated("alpha = 0".into()));
    }
    let a1 = alpha.pow(k - 1);
    if a1.is_one() || (-&a1).is_one() {
        return Err(MahlerError::ConstraintViolated(format!("alpha^{} = {a1}", k - 1)));
    }
    let start = PointClass::element(alpha.clone());
    if !classify_point(&start, k).is_anxious() {
        return Err(MahlerError::ConstraintViolated(format!("{alpha} is calm for k = {k}")));
    }
    let field = alpha.field().clone();
    let beta = alpha.div(&(&field.one() + &a1.inv()));
    let probe = RatFun::from_poly(Poly::linear(&beta));
    let support = SupportSet::new(&[probe], k)?;
    let h = support.orbit_horizon(&start, DEFAULT_HORIZON_CAP);
    if h.guarantee == HorizonGuarantee::CapReached {
        return Err(MahlerError::Undecided(format!("orbit of {alpha} not certified to avoid {beta}")));
    }
    if h.t > 0 {
        return Err(MahlerError::ConstraintViolated(format!("{beta} lies on the orbit of {alpha}")));
    }
    Ok(())
}

/// Builds the order-two equation for `(k, alpha)` and checks the five claimed properties.
pub fn verify_counterexample(k: u64, alpha: &FieldElem) -> Result<CounterexampleReport> {
    check_hypotheses(k, alpha)?;
    let field = alpha.field().clone();
    let (c1, c2, psi) = counterexample_coefficients(k, alpha);
    let eq = MahlerEquation::new(k, vec![c1, c2])?.with_minimal_order(true);
    let mut assertions = Vec::new();

    let (precalm, violation) = decide_precalm(&eq.coeffs, k, DEFAULT_HORIZON_CAP)?;
    let (ok, detail) = match (&precalm, &violation) {
        (false, Some(v)) => (
            v.class == PointClass::element(alpha.clone()) && v.sequence.entries == [1, 1] && v.clm == ExtInt::Fin(-1),
            format!("class {}, sequence {:?}, clm {}", v.class, v.sequence.entries, v.clm),
        ),
        _ => (false, format!("precalm = {precalm}")),
    };
    assertions.push(Assertion { label: 'a', name: "not precalm", passed: ok, detail });

    let f = solve_series(&eq, GUESS_TERMS, &BTreeMap::new())?.solution;
    let guess = guess_relation(&f, k, 1, GUESS_DEGREE, DEFAULT_MARGIN)?;
    assertions.push(Assertion {
        label: 'b',
        name: "no order-one relation",
        passed: guess.is_none(),
        detail: match &guess {
            None => format!("none with degree <= {GUESS_DEGREE} at {GUESS_TERMS} terms"),
            Some(g) => format!("found {:?}", g.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        },
    });

    let lhs = MahlerOperator::one(k, &field).add(&MahlerOperator::term(k, psi.clone(), 1))?;
    let prod = op_mul(&lhs, &MahlerOperator::from_equation(&eq))?;
    let order_three = prod.to_equation()?;
    let poly = (0..=3).all(|d| prod.coeff(d).is_polynomial()) && prod.degree() == Some(3);
    assertions.push(Assertion {
        label: 'c',
        name: "polynomial order-three product",
        passed: poly,
        detail: (0..=3).map(|d| prod.coeff(d).to_string()).collect::<Vec<_>>().join(" | "),
    });

    let (verdict, _) = regularity_search(&eq, &RegularityOptions::default())?;
    let ok = matches!(verdict, RegularityVerdict::Regular { m: 1, .. });
    let detail = match &verdict {
        RegularityVerdict::Regular { m, .. } => format!("Regular, m = {m}"),
        other => other.name().to_string(),
    };
    assertions.push(Assertion { label: 'd', name: "regular", passed: ok, detail });

    let g = f.truncate(RESIDUE_TERMS);
    let r2 = equation_residue(&eq, &g)?;
    let r3 = equation_residue(&order_three, &g)?;
    assertions.push(Assertion {
        label: 'e',
        name: "series satisfies both equations",
        passed: r2.is_zero() && r3.is_zero(),
        detail: format!(
            "residues through z^{}: order two {:?}, order three {:?}",
            RESIDUE_TERMS - 1,
            r2.valuation(),
            r3.valuation()
        ),
    });

    Ok(CounterexampleReport { k, alpha: alpha.clone(), equation: eq, psi, order_three, assertions })
}
