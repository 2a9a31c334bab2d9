use std::collections::HashMap;

use serde::Serialize;

use crate::error::{MahlerError, Result};
use crate::field::{ExtInt, Poly, RatFun};
use crate::orbits::power_map_charpoly;
use crate::orbits::{Classification, HorizonGuarantee, SupportSet};

use super::action::act_poly;
use super::analysis::CalmnessAnalysis;
use super::graph::{CalmnessGraph, UnityGraph};

const MAX_STEPS: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceEvent {
    Fold { class: String, m: usize, s_table: Vec<Vec<ExtInt>> },
    ZeroFill { class: String, p: i64, filled: Vec<usize> },
    Normalize { class: String, position: usize, index: usize, minclm: i64 },
    SigmaStep { class: String, j: usize, s_j: Vec<usize>, factor: String, sigma_before: i64, sigma_after: i64 },
    NonUnityStep { class: String, i0: usize, j0: usize, factor: String },
    Potential { class: String, exponent: i64 },
}

/// Log of a witness construction.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessTrace {
    pub strategy: String,
    pub events: Vec<TraceEvent>,
}

impl WitnessTrace {
    pub fn new(strategy: &str) -> WitnessTrace {
        WitnessTrace { strategy: strategy.to_string(), events: Vec::new() }
    }

    /// Whether sigma strictly decreases across every logged unity step.
    pub fn sigma_decreasing(&self) -> bool {
        self.events.iter().all(|e| match e {
            TraceEvent::SigmaStep { sigma_before, sigma_after, .. } => sigma_after < sigma_before,
            _ => true,
        })
    }
}

/// A way of building a polynomial `h` with `act(h, coeffs)` calm for precalm input.
pub trait WitnessStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn construct(
        &self,
        coeffs: &[RatFun],
        k: u64,
        cap: usize,
        analysis: &CalmnessAnalysis,
        trace: &mut WitnessTrace,
    ) -> Result<Poly>;
}

/// Witness strategies selectable by name.
pub struct StrategyRegistry {
    entries: Vec<Box<dyn WitnessStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> StrategyRegistry {
        StrategyRegistry { entries: Vec::new() }
    }

    pub fn with_defaults() -> StrategyRegistry {
        let mut r = StrategyRegistry::empty();
        r.register(Box::new(Elimination));
        r.register(Box::new(Potential));
        r
    }

    pub fn register(&mut self, s: Box<dyn WitnessStrategy>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn get(&self, name: &str) -> Option<&dyn WitnessStrategy> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

fn class_product(g: &UnityGraph, exps: &[i64]) -> Poly {
    let field = g.cycle[0].class_poly(&crate::field::Field::rationals()).field().clone();
    let field = if g.cycle.is_empty() { field } else { unity_field(g) };
    let mut h = Poly::one(&field);
    for (j, &e) in exps.iter().enumerate() {
        if e > 0 {
            h = &h * &g.cycle[j].class_poly(&field).pow(e as u64);
        }
    }
    h
}

fn unity_field(g: &UnityGraph) -> crate::field::Field {
    match &g.cycle[0] {
        crate::orbits::PointClass::Element { value, .. } => value.field().clone(),
        crate::orbits::PointClass::Unity { poly, .. } | crate::orbits::PointClass::Algebraic(poly) => poly.field().clone(),
        crate::orbits::PointClass::Zero => crate::field::Field::rationals(),
    }
}

/// Shortest walk weights on `Z_m` with step `a` from `j` weighted `table[j][a-1]`.
fn table_distances(table: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = table.len();
    let mut all = Vec::with_capacity(m);
    for s in 0..m {
        let mut dist: Vec<Option<i64>> = vec![None; m];
        dist[s] = Some(0);
        for _ in 0..m {
            let mut changed = false;
            for u in 0..m {
                let Some(du) = dist[u] else { continue };
                for a in 1..=m {
                    let v = (u + a) % m;
                    let cand = du + table[u][a - 1];
                    if dist[v].map_or(true, |dv| cand < dv) {
                        dist[v] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        all.push(dist.into_iter().map(|d| d.expect("complete step graph")).collect());
    }
    all
}

fn sigma(table: &[Vec<i64>]) -> i64 {
    -table.iter().flatten().filter(|v| **v < 0).sum::<i64>()
}

/// The elimination procedure: unity cycles by folding, zero-filling, normalization and sigma reduction,
/// then the pole-by-pole loop for non-unity classes.
pub struct Elimination;

impl Elimination {
    fn eliminate_unity(&self, g: &UnityGraph, trace: &mut WitnessTrace) -> Result<Vec<i64>> {
        let m = g.m_class();
        let n = g.n();
        let label = g.cycle[0].to_string();
        // Fold to length m.
        let mut s: Vec<Vec<ExtInt>> = vec![vec![ExtInt::PosInf; m]; m];
        for (j, row) in s.iter_mut().enumerate() {
            for (i, cell) in row.iter_mut().enumerate() {
                let mut idx = i + 1;
                while idx <= n {
                    let v = g.weights[j][idx - 1];
                    if v < *cell {
                        *cell = v;
                    }
                    idx += m;
                }
            }
        }
        trace.events.push(TraceEvent::Fold { class: label.clone(), m, s_table: s.clone() });
        // Zero-fill.
        let present: Vec<bool> = (0..m).map(|i| s[0][i].is_finite()).collect();
        let p: i64 = (0..m)
            .filter(|&i| present[i])
            .map(|i| (0..m).map(|j| s[j][i].finite().unwrap().abs()).sum::<i64>())
            .sum();
        let filled: Vec<usize> = (0..m).filter(|&i| !present[i]).map(|i| i + 1).collect();
        let mut t: Vec<Vec<i64>> = (0..m)
            .map(|j| (0..m).map(|i| if present[i] { s[j][i].finite().unwrap() } else { p }).collect())
            .collect();
        trace.events.push(TraceEvent::ZeroFill { class: label.clone(), p, filled });
        // Normalize minimal calmnesses through each term to zero.
        for _ in 0..MAX_STEPS {
            let dist = table_distances(&t);
            let mut found = None;
            'search: for a in 0..m {
                for b in 1..=m {
                    let x = t[a][b - 1] + dist[(a + b) % m][a];
                    if x > 0 {
                        found = Some((a, b, x));
                        break 'search;
                    }
                    if x < 0 {
                        return Err(MahlerError::ConstructionFailed(format!("negative minimal calmness at {label}")));
                    }
                }
            }
            match found {
                None => break,
                Some((a, b, x)) => {
                    t[a][b - 1] -= x;
                    trace.events.push(TraceEvent::Normalize { class: label.clone(), position: a, index: b, minclm: x });
                }
            }
        }
        // Sigma reduction.
        let mut exps = vec![0i64; m];
        for _ in 0..MAX_STEPS {
            let before = sigma(&t);
            if before == 0 {
                return Ok(exps);
            }
            let vmin: Vec<i64> = t.iter().map(|row| *row.iter().min().unwrap()).collect();
            let j = (0..m).min_by_key(|&j| (vmin[j], j)).unwrap();
            let s_j: Vec<usize> = (1..=m).filter(|&i| t[j][i - 1] == vmin[j]).collect();
            let mut factor_positions = Vec::new();
            for &i0 in &s_j {
                let j0 = (j + i0) % m;
                factor_positions.push(j0);
                exps[j0] += 1;
                for jp in 0..m {
                    for i in 1..=m {
                        let hit_i = i % m == (j0 + m - jp) % m;
                        if jp == j0 && !hit_i {
                            t[jp][i - 1] -= 1;
                        } else if hit_i && jp != j0 {
                            t[jp][i - 1] += 1;
                        }
                    }
                }
            }
            let after = sigma(&t);
            let field = unity_field(g);
            let factor = factor_positions
                .iter()
                .fold(Poly::one(&field), |acc, &j0| &acc * &g.cycle[j0].class_poly(&field));
            trace.events.push(TraceEvent::SigmaStep {
                class: label.clone(),
                j,
                s_j,
                factor: factor.to_string(),
                sigma_before: before,
                sigma_after: after,
            });
            if after >= before {
                return Err(MahlerError::ConstructionFailed(format!("sigma did not decrease at {label}")));
            }
        }
        Err(MahlerError::ConstructionFailed("sigma reduction did not terminate".into()))
    }
}

impl WitnessStrategy for Elimination {
    fn name(&self) -> &'static str {
        "elimination"
    }

    fn construct(
        &self,
        coeffs: &[RatFun],
        k: u64,
        cap: usize,
        analysis: &CalmnessAnalysis,
        trace: &mut WitnessTrace,
    ) -> Result<Poly> {
        let field = coeffs[0].field().clone();
        let mut h = Poly::one(&field);
        for g in analysis.distinct_unity_graphs() {
            let exps = self.eliminate_unity(g, trace)?;
            h = &h * &class_product(g, &exps);
        }
        let mut cur = act_poly(&h, coeffs, k)?;
        for _ in 0..MAX_STEPS {
            let mut support = SupportSet::new(&cur, k)?;
            support.refine_orbits(cap);
            let poles = support.anxious_poles();
            let Some(&s) = poles.first() else { return Ok(h) };
            let cls = &support.classes[s];
            if let Classification::Anxious { unity: Some(_) } = cls.kind {
                return Err(MahlerError::ConstructionFailed(format!("pole left at root of unity {}", cls.class)));
            }
            let i0 = cls.vals.iter().position(|v| *v < ExtInt::Fin(0)).unwrap() + 1;
            let horizon = support.orbit_horizon(&cls.class, cap);
            if horizon.guarantee == HorizonGuarantee::CapReached {
                return Err(MahlerError::HorizonUncertified(cls.class.to_string()));
            }
            let mut j0 = None;
            let mut j = 1;
            while i0 * j < horizon.t {
                if support.valuation(&horizon.steps[i0 * j], i0)? > ExtInt::Fin(0) {
                    j0 = Some(j);
                    break;
                }
                j += 1;
            }
            let j0 = j0.ok_or_else(|| {
                MahlerError::ConstructionFailed(format!("no positive valuation downstream of {}", cls.class))
            })?;
            let f_alpha = cls.poly.clone();
            let mut factor = Poly::one(&field);
            let mut image = f_alpha.clone();
            for step in 1..=(i0 * j0) {
                image = power_map_charpoly(&image, k).square_free_part();
                if step % i0 == 0 {
                    factor = &factor * &image;
                }
            }
            trace.events.push(TraceEvent::NonUnityStep { class: cls.class.to_string(), i0, j0, factor: factor.to_string() });
            cur = act_poly(&factor, &cur, k)?;
            h = &h * &factor;
        }
        Err(MahlerError::ConstructionFailed("non-unity elimination did not terminate".into()))
    }
}

/// Closed-form witness from shortest-path potentials on the orbit graphs.
pub struct Potential;

impl WitnessStrategy for Potential {
    fn name(&self) -> &'static str {
        "potential"
    }

    fn construct(
        &self,
        coeffs: &[RatFun],
        _k: u64,
        _cap: usize,
        analysis: &CalmnessAnalysis,
        trace: &mut WitnessTrace,
    ) -> Result<Poly> {
        let field = coeffs[0].field().clone();
        let mut h = Poly::one(&field);
        for g in analysis.distinct_unity_graphs() {
            let d = g.class_min_walk_from().ok_or(MahlerError::NotPrecalm)?;
            let c = d.iter().map(|x| -x).max().unwrap_or(0);
            let exps: Vec<i64> = d.iter().map(|x| c + x).collect();
            for (j, e) in exps.iter().enumerate() {
                trace.events.push(TraceEvent::Potential { class: g.cycle[j].to_string(), exponent: *e });
            }
            h = &h * &class_product(g, &exps);
        }
        let mut exps: HashMap<Poly, i64> = HashMap::new();
        let mut order: Vec<(Poly, String)> = Vec::new();
        for g in &analysis.graphs {
            let CalmnessGraph::Tail(tg) = g else { continue };
            let best = tg.best_from();
            for t in 0..tg.t() {
                let e = best[t].finite().ok_or_else(|| {
                    MahlerError::ConstructionFailed("infinite potential inside the horizon".into())
                })?;
                if e < 0 {
                    return Err(MahlerError::NotPrecalm);
                }
                let p = tg.horizon.steps[t].class_poly(&field);
                match exps.get(&p) {
                    Some(&old) if old != e => {
                        return Err(MahlerError::ConstructionFailed(format!("inconsistent potential at {p}")));
                    }
                    Some(_) => {}
                    None => {
                        exps.insert(p.clone(), e);
                        order.push((p, tg.horizon.steps[t].to_string()));
                    }
                }
            }
        }
        for (p, label) in order {
            let e = exps[&p];
            trace.events.push(TraceEvent::Potential { class: label, exponent: e });
            if e > 0 {
                h = &h * &p.pow(e as u64);
            }
        }
        Ok(h)
    }
}
