use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{MahlerError, Result};
use crate::field::linalg::rref;
use crate::field::{FieldElem, Poly};
use crate::operators::special::{Cleared, Frac, GammaRow};
use crate::operators::{MahlerEquation, MahlerOperator};

use super::truncation::Truncation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyKind {
    /// The coefficient identity reduced to `0 = 0`.
    Identity,
    /// A seed disagreed with the forced value.
    Contradiction,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyEvent {
    pub index: usize,
    pub kind: ConsistencyKind,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Truncation,
    pub free_parameters: Vec<usize>,
    pub consistency: Vec<ConsistencyEvent>,
}

fn k_pow(k: u64, i: usize) -> Option<usize> {
    k.checked_pow(i as u32).and_then(|v| usize::try_from(v).ok())
}

/// Coefficients of `z^j` in `L f - sum C_i f(z^(k^i))` as `(index, weight)` pairs.
fn identity_terms(cl: &Cleared, k: u64, j: usize) -> Vec<(usize, FieldElem)> {
    let mut terms: BTreeMap<usize, FieldElem> = BTreeMap::new();
    let mut push = |idx: usize, w: FieldElem| {
        let e = terms.entry(idx).or_insert_with(|| w.field().zero());
        *e = &*e + &w;
    };
    for (t, lt) in cl.l.coeffs().iter().enumerate() {
        if t <= j && !lt.is_zero() {
            push(j - t, lt.clone());
        }
    }
    for (i, ci) in cl.c.iter().enumerate() {
        let Some(e) = k_pow(k, i + 1) else { continue };
        for (t, c) in ci.coeffs().iter().enumerate() {
            if t <= j && !c.is_zero() && (j - t) % e == 0 {
                push((j - t) / e, -c);
            }
        }
    }
    terms.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

/// Power-series solution of the equation modulo `z^order`.
pub fn solve_series(eq: &MahlerEquation, order: usize, seeds: &BTreeMap<usize, FieldElem>) -> Result<SolveReport> {
    if order == 0 {
        return Err(MahlerError::Invalid("truncation order must be positive".into()));
    }
    let field = eq.field.clone();
    let cl = Cleared::new(eq);
    let v = cl.l.z_valuation().unwrap_or(0);
    let lv = cl.l.coeff(v);
    let block = (v / (eq.k as usize - 1) + 1).min(order);
    let mut consistency = Vec::new();

    // Initial block: identities of degree < block + v only involve a_0..a_{block-1}.
    let mut rows = Vec::new();
    let mut probe = crate::field::linalg::Echelon::new(&field);
    for j in 0..block + v {
        let mut row = vec![field.zero(); block];
        for (idx, w) in identity_terms(&cl, eq.k, j) {
            row[idx] = w;
        }
        if !probe.insert(row.clone()) {
            consistency.push(ConsistencyEvent { index: j, kind: ConsistencyKind::Identity });
        }
        rows.push(row);
    }
    let (m, pivots) = rref(&rows, block);
    let free: Vec<usize> = (0..block).filter(|c| !pivots.contains(c)).collect();
    let mut a: Vec<FieldElem> = vec![field.zero(); order];
    for (pos, &c) in free.iter().enumerate() {
        a[c] = match seeds.get(&c) {
            Some(s) => s.clone(),
            None if pos == 0 && seeds.is_empty() => field.one(),
            None => field.zero(),
        };
    }
    for (r, &p) in pivots.iter().enumerate() {
        let mut val = field.zero();
        for &c in &free {
            val = &val - &(&m[r][c] * &a[c]);
        }
        a[p] = val;
    }
    let check_seed = |i: usize, val: &FieldElem, consistency: &mut Vec<ConsistencyEvent>| -> Result<()> {
        if let Some(s) = seeds.get(&i) {
            if s != val {
                consistency.push(ConsistencyEvent { index: i, kind: ConsistencyKind::Contradiction });
                return Err(MahlerError::Inconsistent(format!("seed at index {i} contradicts the forced value {val}")));
            }
        }
        Ok(())
    };
    for &p in &pivots {
        check_seed(p, &a[p], &mut consistency)?;
    }

    // Triangular part: the identity of degree i + v determines a_i through L_v.
    let lv_inv = lv.inv();
    for i in block..order {
        let j = i + v;
        let mut acc = field.zero();
        for (idx, w) in identity_terms(&cl, eq.k, j) {
            if idx == i {
                continue;
            }
            acc = &acc + &(&w * &a[idx]);
        }
        a[i] = -&(&acc * &lv_inv);
        check_seed(i, &a[i], &mut consistency)?;
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(MahlerError::Inconsistent("only the zero series satisfies the equation".into()));
    }
    Ok(SolveReport { solution: Truncation::from_coeffs(&field, a), free_parameters: free, consistency })
}

/// `den f - sum num_d f(z^(k^d))` for `f = sum (num_d / den_d) f(z^(k^d))`, over a common denominator.
pub fn frac_residue(k: u64, terms: &[(usize, Frac)], f: &Truncation) -> Result<Truncation> {
    let field = f.field.clone();
    let mut den: Option<Poly> = None;
    for (_, t) in terms.iter().filter(|(_, t)| !t.is_zero()) {
        den = Some(match den {
            None => t.den.clone(),
            Some(d) if d == t.den => d,
            Some(d) => {
                let g = d.gcd(&t.den);
                &d * &t.den.exact_div(&g)
            }
        });
    }
    let den = den.unwrap_or_else(|| Poly::one(&field));
    let order = f.order();
    let mut res = f.mul_poly(&den.truncate(order));
    for (d, t) in terms.iter().filter(|(_, t)| !t.is_zero()) {
        let e = k_pow(k, *d).ok_or_else(|| MahlerError::Invalid(format!("k^{d} overflows")))?;
        let w = &t.num * &den.exact_div(&t.den);
        let shifted = f.compose_pow(e, order);
        res = &res - &shifted.mul_poly(&w.truncate(order));
    }
    Ok(res)
}

/// Cleared residue `L f - sum C_i f(z^(k^i))`.
pub fn equation_residue(eq: &MahlerEquation, f: &Truncation) -> Result<Truncation> {
    let cl = Cleared::new(eq);
    let terms: Vec<(usize, Frac)> =
        cl.c.iter().enumerate().map(|(i, c)| (i + 1, Frac { num: c.clone(), den: cl.l.clone() })).collect();
    frac_residue(eq.k, &terms, f)
}

/// Cleared residue of an operator `1 - sum d_i Delta^i` normalized by its constant term.
pub fn operator_residue(op: &MahlerOperator, f: &Truncation) -> Result<Truncation> {
    let eq = op.to_equation()?;
    equation_residue(&eq, f)
}

/// Cleared residue of the equation `Gamma_m f = 0`.
pub fn row_residue(row: &GammaRow, k: u64, f: &Truncation) -> Result<Truncation> {
    let terms: Vec<(usize, Frac)> = (1..=row.m + row.n()).map(|i| (i, row.entry(i))).collect();
    frac_residue(k, &terms, f)
}
