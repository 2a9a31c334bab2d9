use crate::error::{MahlerError, Result};
use crate::field::local::split_uniform;
use crate::field::{ExtInt, Field, Poly, RatFun};

use super::equation::MahlerEquation;
use super::ring::MahlerOperator;

/// Largest denominator degree a row may reach before the computation stops.
pub const DEFAULT_DEGREE_BUDGET: usize = 1 << 10;

/// An unreduced fraction.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
}

impl Frac {
    pub fn to_ratfun(&self) -> RatFun {
        RatFun::new(self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Valuation at a class polynomial, checking that `f` does not split the numerator or denominator.
    pub fn valuation(&self, f: &Poly) -> Result<ExtInt> {
        if self.num.is_zero() {
            return Ok(ExtInt::PosInf);
        }
        let (en, _) = split_uniform(&self.num, f)?;
        let (ed, _) = split_uniform(&self.den, f)?;
        Ok(ExtInt::Fin(en as i64 - ed as i64))
    }
}

/// Coefficients `d_{i,m}` of `Gamma_m = (1 + sum_{l<=m} psi_l Delta^l)(1 - sum c_i Delta^i) = 1 - sum d_{i,m} Delta^i`.
#[derive(Clone, Debug)]
pub struct GammaRow {
    pub m: usize,
    /// `d_{i,m}` for `i <= m`, each with its own denominator.
    pub head: Vec<Frac>,
    /// Common denominator of the window `d_{m+1..m+n, m}`.
    pub den: Poly,
    pub window: Vec<Poly>,
}

impl GammaRow {
    pub fn n(&self) -> usize {
        self.window.len()
    }

    /// `d_{i,m}` for `1 <= i <= m + n`.
    pub fn entry(&self, i: usize) -> Frac {
        if i <= self.m {
            self.head[i - 1].clone()
        } else {
            Frac { num: self.window[i - self.m - 1].clone(), den: self.den.clone() }
        }
    }

    pub fn coefficient(&self, i: usize) -> RatFun {
        self.entry(i).to_ratfun()
    }

    /// The annihilating operator `Gamma_m`.
    pub fn operator(&self, k: u64, field: &Field) -> MahlerOperator {
        let mut op = MahlerOperator::one(k, field);
        for i in 1..=self.m + self.n() {
            op.add_term(i, -&self.coefficient(i));
        }
        op
    }

    /// The equation `f = sum_{i=1..m+n} d_{i,m} f(z^(k^i))`.
    pub fn equation(&self, k: u64) -> Result<MahlerEquation> {
        MahlerEquation::new(k, (1..=self.m + self.n()).map(|i| self.coefficient(i)).collect())
    }

    pub fn den_degree(&self) -> usize {
        self.den.deg()
    }
}

/// Common-denominator data of the equation: `L = lcm(den c_i)` and `C_i = c_i L`.
#[derive(Clone, Debug)]
pub struct Cleared {
    pub l: Poly,
    pub c: Vec<Poly>,
}

impl Cleared {
    pub fn new(eq: &MahlerEquation) -> Cleared {
        let mut l = Poly::one(&eq.field);
        for c in &eq.coeffs {
            let g = l.gcd(c.den());
            l = &l * &c.den().exact_div(&g);
        }
        let l = l.monic();
        let c = eq.coeffs.iter().map(|c| c.num() * &l.exact_div(c.den())).collect();
        Cleared { l, c }
    }
}

fn k_pow(k: u64, m: usize) -> Result<usize> {
    k.checked_pow(m as u32)
        .filter(|v| *v <= usize::MAX as u64)
        .map(|v| v as usize)
        .ok_or_else(|| MahlerError::Invalid(format!("k^{m} overflows")))
}

/// Row `0`: `d_{i,0} = c_i` over the common denominator.
pub fn initial_row(cl: &Cleared) -> GammaRow {
    GammaRow { m: 0, head: Vec::new(), den: cl.l.clone(), window: cl.c.clone() }
}

/// Next row for `psi_m = psi_num / den(prev)`.
pub fn next_row(prev: &GammaRow, psi_num: &Poly, k: u64, cl: &Cleared, budget: usize) -> Result<GammaRow> {
    let m = prev.m + 1;
    let n = prev.n();
    let e = k_pow(k, m)?;
    let l_m = cl.l.compose_pow(e);
    let new_deg = prev.den.deg() + l_m.deg();
    if new_deg > budget {
        return Err(MahlerError::Undecided(format!("row {m} exceeds the degree budget {budget}")));
    }
    let mut head = prev.head.clone();
    let d_mm = &prev.window[0] - psi_num;
    head.push(Frac { num: d_mm, den: prev.den.clone() });
    let mut window = Vec::with_capacity(n);
    for i in 1..=n {
        let carried = if i < n { &prev.window[i] * &l_m } else { Poly::zero(cl.l.field()) };
        let added = if psi_num.is_zero() { Poly::zero(cl.l.field()) } else { psi_num * &cl.c[i - 1].compose_pow(e) };
        window.push(&carried + &added);
    }
    Ok(GammaRow { m, head, den: &prev.den * &l_m, window })
}

/// Rows `0..=m_max` of the special operators, where `psi_m = d_{m,m-1}`.
pub fn special_coefficients(eq: &MahlerEquation, m_max: usize, budget: usize) -> Result<Vec<GammaRow>> {
    let cl = Cleared::new(eq);
    let mut rows = vec![initial_row(&cl)];
    for _ in 0..m_max {
        let prev = rows.last().unwrap();
        let psi = prev.window[0].clone();
        rows.push(next_row(prev, &psi, eq.k, &cl, budget)?);
    }
    Ok(rows)
}

/// Lazily produced special rows; yields the budget error once and then stops.
pub struct SpecialRows {
    k: u64,
    cleared: Cleared,
    pending: Option<Result<GammaRow>>,
    budget: usize,
}

impl SpecialRows {
    pub fn new(eq: &MahlerEquation, budget: usize) -> SpecialRows {
        let cleared = Cleared::new(eq);
        let pending = Some(Ok(initial_row(&cleared)));
        SpecialRows { k: eq.k, cleared, pending, budget }
    }
}

impl Iterator for SpecialRows {
    type Item = Result<GammaRow>;

    fn next(&mut self) -> Option<Self::Item> {
        let item = self.pending.take()?;
        if let Ok(row) = &item {
            let psi = row.window[0].clone();
            self.pending = Some(next_row(row, &psi, self.k, &self.cleared, self.budget));
        }
        Some(item)
    }
}
