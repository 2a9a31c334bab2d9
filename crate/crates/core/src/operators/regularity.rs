use serde::Serialize;
use serde_json::{json, Value};

use crate::calmness::{act_poly, anxious_pole_scan, is_precalm, polynomialize, CalmnessOptions, Violation};
use crate::error::{MahlerError, Result};
use crate::field::{digit_match, ExtInt, Poly, RatFun};
use crate::orbits::{Classification, HorizonGuarantee, PointClass, SupportSet};
use crate::syntax::wire::poly_to_json;

use super::equation::MahlerEquation;
use super::special::{initial_row, next_row, Cleared, GammaRow, SpecialRows, DEFAULT_DEGREE_BUDGET};

pub const DEFAULT_M_MAX: usize = 32;

#[derive(Clone, Debug)]
pub struct RegularityOptions {
    pub calm: CalmnessOptions,
    pub m_max: usize,
    pub degree_budget: usize,
}

impl Default for RegularityOptions {
    fn default() -> Self {
        RegularityOptions { calm: CalmnessOptions::default(), m_max: DEFAULT_M_MAX, degree_budget: DEFAULT_DEGREE_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularRoute {
    OrderOne,
    Precalm,
    SpecialOperators,
}

#[derive(Clone, Debug)]
pub enum RegularityVerdict {
    /// `f / scale` satisfies `calm_equation`.
    Regular { m: usize, calm_equation: MahlerEquation, scale: Poly, route: RegularRoute },
    NotRegular { violation: Violation },
    AssumptionViolated { reason: String },
    Unknown { diagnostics: String },
}

impl RegularityVerdict {
    pub fn is_definite(&self) -> bool {
        !matches!(self, RegularityVerdict::Unknown { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegularityVerdict::Regular { .. } => "Regular",
            RegularityVerdict::NotRegular { .. } => "NotRegular",
            RegularityVerdict::AssumptionViolated { .. } => "AssumptionViolated",
            RegularityVerdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RegularityVerdict::Regular { m, calm_equation, scale, route } => json!({
                "verdict": self.name(),
                "witness_m": m,
                "route": route,
                "scale": poly_to_json(scale),
                "scale_text": scale.to_string(),
                "calm_equation": calm_equation.to_json(),
                "calm_coefficients_text": calm_equation.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
            RegularityVerdict::NotRegular { violation } => json!({
                "verdict": self.name(),
                "violation": violation.to_json(),
            }),
            RegularityVerdict::AssumptionViolated { reason } => json!({"verdict": self.name(), "reason": reason}),
            RegularityVerdict::Unknown { diagnostics } => json!({"verdict": self.name(), "diagnostics": diagnostics}),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WindowRecord {
    pub m: usize,
    pub valuations: Vec<ExtInt>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClassScan {
    pub class: String,
    /// Smallest `m` with no pole of any `c_i` at the orbit steps beyond `m`.
    pub orbit_clean_from: Option<usize>,
    pub windows: Vec<WindowRecord>,
    pub witness_m: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BSetRecord {
    pub m: usize,
    /// `(class polynomial, exponent)` factors of the product over `B_m`.
    pub factors: Vec<(String, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiRecord {
    pub m: usize,
    pub h: String,
    pub psi_numerator_degree: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchTrace {
    pub classes: Vec<ClassScan>,
    pub digit_depth: Option<i64>,
    pub b_sets: Vec<BSetRecord>,
    pub psi_choices: Vec<PsiRecord>,
    pub witness_m: Option<usize>,
    pub notes: Vec<String>,
}

/// The anxious pole classes of an equation over its orbit-refined support.
#[derive(Clone, Debug)]
pub struct AnxiousPoleSet {
    pub support: SupportSet,
    pub classes: Vec<PointClass>,
    pub has_unity: bool,
}

pub fn anxious_pole_set(eq: &MahlerEquation, cap: usize) -> Result<AnxiousPoleSet> {
    let mut support = SupportSet::new(&eq.coeffs, eq.k)?;
    support.refine_orbits(cap);
    let idx = support.anxious_poles();
    let classes: Vec<PointClass> = idx.iter().map(|&i| support.classes[i].class.clone()).collect();
    let has_unity = idx.iter().any(|&i| matches!(support.classes[i].kind, Classification::Anxious { unity: Some(_) }));
    Ok(AnxiousPoleSet { support, classes, has_unity })
}

fn undecided_to_unknown<T>(r: Result<T>) -> std::result::Result<T, RegularityVerdict> {
    r.map_err(|e| RegularityVerdict::Unknown { diagnostics: e.to_string() })
}

/// Complete decision for equations of order one.
pub fn order_one_decide(eq: &MahlerEquation, opts: &RegularityOptions) -> Result<RegularityVerdict> {
    if eq.n() != 1 {
        return Err(MahlerError::Invalid(format!("order-one decision needs n = 1, got {}", eq.n())));
    }
    let v = match is_precalm(&eq.coeffs, eq.k, &opts.calm) {
        Ok(v) => v,
        Err(MahlerError::Undecided(d)) => return Ok(RegularityVerdict::Unknown { diagnostics: d }),
        Err(e) => return Err(e),
    };
    if !v.precalm {
        return Ok(RegularityVerdict::NotRegular { violation: v.violation.expect("violation present") });
    }
    precalm_route(eq, opts, RegularRoute::OrderOne)
}

fn precalm_route(eq: &MahlerEquation, opts: &RegularityOptions, route: RegularRoute) -> Result<RegularityVerdict> {
    let h = polynomialize(&eq.coeffs, eq.k, &opts.calm)?;
    let calm = act_poly(&h, &eq.coeffs, eq.k)?;
    Ok(RegularityVerdict::Regular { m: 0, calm_equation: MahlerEquation::new(eq.k, calm)?, scale: h, route })
}

/// Regularity via the special operators.
pub fn regularity_search(eq: &MahlerEquation, opts: &RegularityOptions) -> Result<(RegularityVerdict, SearchTrace)> {
    let mut trace = SearchTrace::default();
    if !eq.minimal_order_asserted && eq.n() > 1 {
        trace.notes.push("minimal order not asserted; a Regular verdict does not depend on it".into());
    }
    if eq.n() == 1 {
        return Ok((order_one_decide(eq, opts)?, trace));
    }
    match is_precalm(&eq.coeffs, eq.k, &opts.calm) {
        Ok(v) if v.precalm => return Ok((precalm_route(eq, opts, RegularRoute::Precalm)?, trace)),
        Ok(_) => {}
        Err(MahlerError::Undecided(d)) => trace.notes.push(format!("precalmness undecided: {d}")),
        Err(e) => return Err(e),
    }
    let cap = opts.calm.horizon_cap;
    let v = match undecided_to_unknown(anxious_pole_set(eq, cap)) {
        Ok(v) => v,
        Err(u) => return Ok((u, trace)),
    };
    if v.has_unity {
        let reason = format!(
            "anxious poles at roots of unity: {}",
            v.classes.iter().filter(|c| c.is_unity()).map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        );
        return Ok((RegularityVerdict::AssumptionViolated { reason }, trace));
    }
    match scan_classes(eq, &v, opts, &mut trace) {
        Ok(Some((m_star, rows))) => {
            trace.witness_m = Some(m_star);
            let calm = calmify_equation(eq, m_star, &v, &rows, opts.degree_budget, &mut trace)?;
            let verdict = RegularityVerdict::Regular {
                m: m_star,
                calm_equation: calm,
                scale: Poly::one(&eq.field),
                route: RegularRoute::SpecialOperators,
            };
            Ok((verdict, trace))
        }
        Ok(None) => {
            let diag = trace
                .classes
                .iter()
                .filter(|c| c.witness_m.is_none())
                .map(|c| {
                    let last = c.windows.last().map(|w| format!("{:?}", w.valuations)).unwrap_or_default();
                    format!("{}: no m <= {} found (last window {last})", c.class, c.windows.len().saturating_sub(1))
                })
                .collect::<Vec<_>>()
                .join("; ");
            Ok((RegularityVerdict::Unknown { diagnostics: diag }, trace))
        }
        Err(MahlerError::Undecided(d)) | Err(MahlerError::NonUniformClass(d)) => {
            Ok((RegularityVerdict::Unknown { diagnostics: d }, trace))
        }
        Err(e) => Err(e),
    }
}

/// First `m` per class satisfying the window condition; `None` when some class exhausts the scan.
fn scan_classes(
    eq: &MahlerEquation,
    v: &AnxiousPoleSet,
    opts: &RegularityOptions,
    trace: &mut SearchTrace,
) -> Result<Option<(usize, Vec<GammaRow>)>> {
    let mut rows: Vec<GammaRow> = Vec::new();
    let mut source = SpecialRows::new(eq, opts.degree_budget);
    let mut budget_hit: Option<String> = None;
    let mut all_found = true;
    let mut m_star = 0;
    for class in &v.classes {
        let mut scan = ClassScan { class: class.to_string(), ..Default::default() };
        let horizon = v.support.orbit_horizon(class, opts.calm.horizon_cap);
        if horizon.guarantee == HorizonGuarantee::CapReached {
            return Err(MahlerError::Undecided(format!("horizon cap reached at {class}")));
        }
        let mut last_pole = 0;
        for (j, step) in horizon.steps.iter().enumerate().take(horizon.t) {
            for i in 1..=eq.n() {
                if v.support.valuation(step, i)? < ExtInt::Fin(0) {
                    last_pole = j;
                }
            }
        }
        scan.orbit_clean_from = Some(last_pole);
        let f = class.class_poly(&eq.field);
        for m in 0..=opts.m_max {
            while rows.len() <= m && budget_hit.is_none() {
                match source.next() {
                    Some(Ok(r)) => rows.push(r),
                    Some(Err(e)) => budget_hit = Some(e.to_string()),
                    None => budget_hit = Some("row source exhausted".into()),
                }
            }
            if rows.len() <= m {
                break;
            }
            let row = &rows[m];
            let vals = (1..=eq.n()).map(|i| row.entry(m + i).valuation(&f)).collect::<Result<Vec<_>>>()?;
            let ok = m >= last_pole && vals.iter().all(|x| *x >= ExtInt::Fin(0));
            scan.windows.push(WindowRecord { m, valuations: vals });
            if ok {
                scan.witness_m = Some(m);
                m_star = m_star.max(m);
                break;
            }
        }
        if scan.witness_m.is_none() {
            all_found = false;
            if let Some(b) = &budget_hit {
                trace.notes.push(format!("{class}: {b}"));
            }
        }
        trace.classes.push(scan);
    }
    if !all_found {
        return Ok(None);
    }
    rows.truncate(m_star + 1);
    Ok(Some((m_star, rows)))
}

/// The calm equation of order `n + m0` built from modified multipliers `psi'_m`.
pub fn calmify_equation(
    eq: &MahlerEquation,
    m0: usize,
    v: &AnxiousPoleSet,
    rows: &[GammaRow],
    budget: usize,
    trace: &mut SearchTrace,
) -> Result<MahlerEquation> {
    let field = eq.field.clone();
    if m0 == 0 || v.classes.is_empty() {
        if !anxious_pole_scan(&eq.coeffs, eq.k)?.is_empty() {
            return Err(MahlerError::ConstructionFailed("m0 = 0 but the equation is not calm".into()));
        }
        return Ok(eq.clone());
    }
    let vpolys: Vec<Poly> = v.classes.iter().map(|c| c.class_poly(&field)).collect();
    let mut depth = 1i64;
    for f in &vpolys {
        for row in rows.iter().take(m0 + 1) {
            for i in 1..=eq.n() {
                if let ExtInt::Fin(x) = row.entry(row.m + i).valuation(f)? {
                    depth = depth.max(-x);
                }
            }
        }
    }
    trace.digit_depth = Some(depth);
    let base = SupportSet::new(&eq.coeffs, eq.k)?;
    let poles: Vec<(Poly, i64)> = base
        .classes
        .iter()
        .filter_map(|c| {
            let worst = c.vals.iter().filter_map(|x| x.finite()).min()?;
            (worst < 0).then(|| (c.poly.clone(), -worst))
        })
        .collect();
    let cl = Cleared::new(eq);
    let mut row = initial_row(&cl);
    for m in 1..=m0 {
        let e = eq.k.pow(m as u32) as usize;
        let mut prod = Poly::one(&field);
        let mut factors = Vec::new();
        for (p, ex) in &poles {
            let mut q = p.compose_pow(e).square_free_part().monic();
            for f in &vpolys {
                let g = q.gcd(f);
                if !g.is_constant() {
                    q = q.exact_div(&g).monic();
                }
            }
            if q.is_constant() {
                continue;
            }
            factors.push((q.to_string(), *ex));
            prod = &prod * &q.pow(*ex as u64);
        }
        trace.b_sets.push(BSetRecord { m, factors });
        let inv_prod = RatFun::new(Poly::one(&field), prod.clone());
        let targets: Vec<(Poly, u32, RatFun)> =
            vpolys.iter().map(|f| (f.clone(), depth as u32, inv_prod.clone())).collect();
        let h = digit_match(&targets)?;
        let psi = &(&h * &prod) * &row.window[0];
        trace.psi_choices.push(PsiRecord { m, h: h.to_string(), psi_numerator_degree: psi.degree().unwrap_or(0) });
        row = next_row(&row, &psi, eq.k, &cl, budget)?;
    }
    let calm = row.equation(eq.k)?;
    let left = anxious_pole_scan(&calm.coeffs, eq.k)?;
    if !left.is_empty() {
        return Err(MahlerError::ConstructionFailed(format!(
            "calmified equation keeps anxious poles at {}",
            left.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(calm)
}
