use serde::Serialize;

use crate::error::{MahlerError, Result};
use crate::field::linalg::{nullspace, Echelon};
use crate::field::{FieldElem, Poly, RatFun};
use crate::operators::MahlerEquation;

use super::truncation::{cartier_series, Truncation};

/// Coefficients every compared vector must retain.
pub const DEFAULT_MARGIN: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeLevel {
    pub level: usize,
    pub words: usize,
    pub new_independent: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    /// Lower bound on the dimension of the span of the Cartier orbit.
    pub rank: usize,
    pub closed: bool,
    /// Coefficients compared per vector.
    pub retained: usize,
    pub levels: Vec<ProbeLevel>,
}

/// Breadth-first span of `Lambda`-words over `levels` levels (the root is level 0).
pub fn kernel_rank_probe(t: &Truncation, k: u64, levels: usize, margin: usize) -> Result<ProbeReport> {
    let ku = k as usize;
    let levels = levels.max(1);
    let mut retained = t.order();
    for _ in 1..levels {
        retained /= ku;
    }
    if retained < margin {
        let needed = margin * ku.pow(levels as u32 - 1);
        return Err(MahlerError::TruncationTooShort { needed, have: t.order() });
    }
    let mut ech = Echelon::new(&t.field);
    let key = |x: &Truncation| -> Vec<FieldElem> { x.coeffs[..retained].to_vec() };
    ech.insert(key(t));
    let mut report = ProbeReport {
        rank: 1,
        closed: false,
        retained,
        levels: vec![ProbeLevel { level: 0, words: 1, new_independent: 1, rank: 1 }],
    };
    let mut frontier = vec![t.clone()];
    for level in 1..levels {
        let mut next = Vec::new();
        let mut words = 0;
        for x in &frontier {
            for r in 0..ku {
                words += 1;
                let y = cartier_series(x, r, ku);
                if ech.insert(key(&y)) {
                    next.push(y);
                }
            }
        }
        report.rank = ech.rank();
        report.levels.push(ProbeLevel { level, words, new_independent: next.len(), rank: report.rank });
        if next.is_empty() {
            report.closed = true;
            break;
        }
        frontier = next;
    }
    Ok(report)
}

/// Candidate equation of least order `<= max_order` with polynomial parts of degree `<= max_degree`
/// satisfied by `t` modulo `z^(order(t) - margin)`.
pub fn guess_relation(
    t: &Truncation,
    k: u64,
    max_order: usize,
    max_degree: usize,
    margin: usize,
) -> Result<Option<MahlerEquation>> {
    let needed = 2 * (max_order + 1) * (max_degree + 1) + margin;
    if t.order() < needed {
        return Err(MahlerError::TruncationTooShort { needed, have: t.order() });
    }
    let field = t.field.clone();
    let nrows = t.order() - margin;
    for order in 1..=max_order {
        let ncols = (order + 1) * (max_degree + 1);
        let mut rows = Vec::with_capacity(nrows);
        for j in 0..nrows {
            let mut row = vec![field.zero(); ncols];
            for i in 0..=order {
                let Some(e) = k.checked_pow(i as u32).map(|e| e as usize) else { continue };
                for d in 0..=max_degree.min(j) {
                    if (j - d) % e == 0 {
                        row[i * (max_degree + 1) + d] = t.coeff((j - d) / e);
                    }
                }
            }
            rows.push(row);
        }
        for v in nullspace(&field, &rows, ncols) {
            let parts: Vec<Poly> =
                v.chunks(max_degree + 1).map(|c| Poly::from_coeffs(&field, c.to_vec())).collect();
            if parts[0].is_zero() {
                continue;
            }
            let Some(top) = (1..=order).rev().find(|&i| !parts[i].is_zero()) else { continue };
            let coeffs =
                (1..=top).map(|i| -&RatFun::new(parts[i].clone(), parts[0].clone())).collect::<Vec<_>>();
            return MahlerEquation::new(k, coeffs).map(Some);
        }
    }
    Ok(None)
}
