use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::field::linalg::Echelon;
use crate::field::{FieldElem, Poly, RatFun};
use crate::orbits::{classify_point, PointClass};

use super::cartier::cartier_all;
use super::equation::MahlerEquation;

#[derive(Clone, Debug, Serialize)]
pub struct KernelLevel {
    pub depth: usize,
    pub words: usize,
    pub new_independent: usize,
    pub rank: usize,
    /// Largest pole order at an anxious class among the elements of this level.
    pub max_anxious_pole_order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelOrbit {
    pub levels: Vec<KernelLevel>,
    pub rank: usize,
    /// A whole level added nothing to the span.
    pub closed: bool,
    /// Maximum pole order seen per anxious class.
    pub pole_orders: BTreeMap<String, u64>,
    pub minimal_order_asserted: bool,
}

/// Kernel element `sum_j h[j] f(z^(k^j))`.
type Elem = Vec<RatFun>;

fn cartier_images(x: &Elem, eq: &MahlerEquation) -> Vec<Elem> {
    let n = eq.n();
    let k = eq.k as usize;
    let mut out: Vec<Elem> = vec![Vec::with_capacity(n); k];
    for j in 0..n {
        let mut u = &x[0] * &eq.coeffs[j];
        if j + 1 < n {
            u = &u + &x[j + 1];
        }
        for (r, part) in cartier_all(&u, eq.k).into_iter().enumerate() {
            out[r].push(part);
        }
    }
    out
}

/// Span of kernel elements over `K`, via a shared denominator.
struct Span {
    elems: Vec<Elem>,
    den: Poly,
    width: usize,
    ech: Echelon,
}

impl Span {
    fn new(eq: &MahlerEquation) -> Span {
        Span { elems: Vec::new(), den: Poly::one(&eq.field), width: 1, ech: Echelon::new(&eq.field) }
    }

    fn flatten(&self, x: &Elem) -> Vec<FieldElem> {
        let field = self.den.field();
        let mut out = Vec::with_capacity(x.len() * self.width);
        for c in x {
            let p = c.num() * &self.den.exact_div(c.den());
            for i in 0..self.width {
                out.push(if i < p.coeffs().len() { p.coeffs()[i].clone() } else { field.zero() });
            }
        }
        out
    }

    fn insert(&mut self, x: Elem) -> bool {
        let mut den = self.den.clone();
        for c in &x {
            let g = den.gcd(c.den());
            den = &den * &c.den().exact_div(&g);
        }
        let den = den.monic();
        let width = x
            .iter()
            .chain(self.elems.iter().flatten())
            .map(|c| c.num().deg() + den.deg() - c.den().deg() + 1)
            .max()
            .unwrap_or(1);
        if den != self.den || width > self.width {
            self.den = den;
            self.width = width;
            self.ech = Echelon::new(self.den.field());
            for e in &self.elems {
                let row = self.flatten(e);
                self.ech.insert(row);
            }
        }
        let row = self.flatten(&x);
        if self.ech.insert(row) {
            self.elems.push(x);
            true
        } else {
            false
        }
    }
}

fn anxious_pole_orders(x: &Elem, k: u64, into: &mut BTreeMap<String, u64>) -> u64 {
    let mut best = 0;
    for c in x {
        if c.den().is_constant() {
            continue;
        }
        for (q, mult) in c.den().square_free_decomposition() {
            for cls in PointClass::split_poly(&q) {
                if classify_point(&cls, k).is_anxious() {
                    let e = mult as u64;
                    best = best.max(e);
                    let slot = into.entry(cls.to_string()).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
        }
    }
    best
}

/// Breadth-first Cartier orbit of `f` inside `sum K(z) f(z^(k^j))`, rewriting through the equation.
pub fn kernel_orbit(eq: &MahlerEquation, depth: usize) -> Result<KernelOrbit> {
    let field = eq.field.clone();
    let mut start = vec![RatFun::zero(&field); eq.n()];
    start[0] = RatFun::one(&field);
    let mut span = Span::new(eq);
    let mut pole_orders = BTreeMap::new();
    span.insert(start.clone());
    let mut levels = vec![KernelLevel {
        depth: 0,
        words: 1,
        new_independent: 1,
        rank: 1,
        max_anxious_pole_order: anxious_pole_orders(&start, eq.k, &mut pole_orders),
    }];
    let mut frontier = vec![start];
    let mut closed = false;
    for d in 1..=depth {
        let mut next = Vec::new();
        let mut words = 0;
        let mut max_pole = 0;
        for x in &frontier {
            for y in cartier_images(x, eq) {
                words += 1;
                max_pole = max_pole.max(anxious_pole_orders(&y, eq.k, &mut pole_orders));
                if span.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        levels.push(KernelLevel {
            depth: d,
            words,
            new_independent: next.len(),
            rank: span.elems.len(),
            max_anxious_pole_order: max_pole,
        });
        if next.is_empty() {
            closed = true;
            break;
        }
        frontier = next;
    }
    Ok(KernelOrbit {
        rank: span.elems.len(),
        levels,
        closed,
        pole_orders,
        minimal_order_asserted: eq.minimal_order_asserted,
    })
}
