use crate::error::{MahlerError, Result};
use crate::field::basis::coprime_basis;
use crate::field::local::valuation_unchecked;
use crate::field::{ExtInt, Field, Poly, RatFun, Rational};

use super::bounds::{root_modulus_lower, root_modulus_upper};
use super::point::{classify_point, orbit_step, Classification, PointClass};

/// Coefficient bit size beyond which orbit enumeration gives up.
pub const ORBIT_BIT_LIMIT: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct SupportClass {
    pub class: PointClass,
    pub poly: Poly,
    /// `vals[i]` is the valuation of `c_{i+1}`; `+inf` for a zero coefficient.
    pub vals: Vec<ExtInt>,
    pub kind: Classification,
}

impl SupportClass {
    pub fn has_pole(&self) -> bool {
        self.vals.iter().any(|v| *v < ExtInt::Fin(0))
    }

    /// `(zero multiplicity, pole multiplicity)` of coefficient `i` (1-based).
    pub fn multiplicities(&self, i: usize) -> (u64, u64) {
        match self.vals[i - 1] {
            ExtInt::Fin(v) if v >= 0 => (v as u64, 0),
            ExtInt::Fin(v) => (0, v.unsigned_abs()),
            _ => (0, 0),
        }
    }
}

/// Result of locating a class polynomial in the support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Member(usize),
    Disjoint,
    /// Shares roots with a basis class without being equal to it.
    Partial(usize),
}

/// Coprime basis of the zeros and poles of a coefficient list, split into point classes.
#[derive(Clone, Debug)]
pub struct SupportSet {
    pub field: Field,
    pub k: u64,
    pub coeffs: Vec<RatFun>,
    pub classes: Vec<SupportClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum HorizonGuarantee {
    HeightCertified,
    CapReached,
}

#[derive(Clone, Debug)]
pub struct OrbitHorizon {
    /// Orbit classes at exponents `0..T+n`.
    pub steps: Vec<PointClass>,
    pub t: usize,
    pub guarantee: HorizonGuarantee,
}

/// Raw orbit enumeration until certified escape from the support or the cap.
struct OrbitWalk {
    steps: Vec<PointClass>,
    last_hit: Option<usize>,
    certified: bool,
}

pub fn support_set(coeffs: &[RatFun], k: u64) -> Result<SupportSet> {
    SupportSet::new(coeffs, k)
}

impl SupportSet {
    pub fn new(coeffs: &[RatFun], k: u64) -> Result<SupportSet> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(MahlerError::AllCoefficientsZero);
        }
        let field = coeffs[0].field().clone();
        let mut polys = Vec::new();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            polys.push(c.num().clone());
            polys.push(c.den().clone());
        }
        let mut s = SupportSet { field, k, coeffs: coeffs.to_vec(), classes: Vec::new() };
        for b in coprime_basis(&polys) {
            for cls in PointClass::split_poly(&b) {
                s.push_class(cls);
            }
        }
        Ok(s)
    }

    fn push_class(&mut self, class: PointClass) {
        let poly = class.class_poly(&self.field);
        let vals = self.coeffs.iter().map(|c| valuation_unchecked(c, &poly)).collect();
        let kind = classify_point(&class, self.k);
        self.classes.push(SupportClass { class, poly, vals, kind });
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Indices of anxious classes where some coefficient has a pole, in basis order.
    pub fn anxious_poles(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i].kind.is_anxious() && self.classes[i].has_pole()).collect()
    }

    pub fn lookup(&self, p: &PointClass) -> Lookup {
        let poly = p.class_poly(&self.field);
        if let Some(i) = self.classes.iter().position(|c| c.poly == poly) {
            return Lookup::Member(i);
        }
        for (i, c) in self.classes.iter().enumerate() {
            let meets = match p {
                PointClass::Element { value, .. } => c.poly.eval(value).is_zero(),
                PointClass::Zero => c.poly.coeff(0).is_zero(),
                _ => !c.poly.gcd(&poly).is_constant(),
            };
            if meets {
                return Lookup::Partial(i);
            }
        }
        Lookup::Disjoint
    }

    /// Valuation of `c_i` (1-based) at a class that is a member of, or disjoint from, the support.
    pub fn valuation(&self, p: &PointClass, i: usize) -> Result<ExtInt> {
        match self.lookup(p) {
            Lookup::Member(j) => Ok(self.classes[j].vals[i - 1]),
            Lookup::Disjoint => Ok(if self.coeffs[i - 1].is_zero() { ExtInt::PosInf } else { ExtInt::Fin(0) }),
            Lookup::Partial(_) => Err(MahlerError::NonUniformClass(p.to_string())),
        }
    }

    fn bounds(&self) -> Option<(Rational, Rational)> {
        let nz: Vec<&SupportClass> = self.classes.iter().filter(|c| c.class != PointClass::Zero).collect();
        if nz.is_empty() {
            return None;
        }
        let hi = nz.iter().map(|c| root_modulus_upper(&c.poly)).max().unwrap();
        let lo = nz.iter().map(|c| root_modulus_lower(&c.poly)).min().unwrap();
        Some((hi, lo))
    }

    fn walk(&self, start: &PointClass, cap: usize) -> OrbitWalk {
        let one = Rational::from_integer(1.into());
        let thresholds = self.bounds().map(|(hi, lo)| {
            (if hi > one { hi } else { one.clone() }, if lo < one { lo } else { one.clone() })
        });
        let mut steps = vec![start.clone()];
        let mut last_hit = None;
        let mut certified = false;
        loop {
            let t = steps.len() - 1;
            let cls = &steps[t];
            if self.lookup(cls) != Lookup::Disjoint {
                last_hit = Some(t);
            } else {
                let escaped = match &thresholds {
                    None => true,
                    Some((thr_hi, thr_lo)) => {
                        let p = cls.class_poly(&self.field);
                        root_modulus_lower(&p) > *thr_hi || root_modulus_upper(&p) < *thr_lo
                    }
                };
                if escaped {
                    certified = true;
                    break;
                }
            }
            if t + 1 >= cap || cls.class_poly(&self.field).max_coeff_bits() > ORBIT_BIT_LIMIT {
                break;
            }
            let next = orbit_step(cls, self.k);
            steps.push(next);
        }
        OrbitWalk { steps, last_hit, certified }
    }

    /// Orbit classes of a non-unity start until a certified tail, padded to `T + n` entries.
    pub fn orbit_horizon(&self, start: &PointClass, cap: usize) -> OrbitHorizon {
        let w = self.walk(start, cap);
        let n = self.n();
        if !w.certified {
            return OrbitHorizon { t: w.steps.len(), steps: w.steps, guarantee: HorizonGuarantee::CapReached };
        }
        let t = w.last_hit.map_or(0, |h| h + 1);
        let mut steps = w.steps;
        steps.truncate(t + n);
        while steps.len() < t + n {
            let next = orbit_step(steps.last().unwrap(), self.k);
            steps.push(next);
        }
        OrbitHorizon { steps, t, guarantee: HorizonGuarantee::HeightCertified }
    }

    /// The class-level cycle `g_0, g_1, ...` of an anxious unity class, closed when it returns to `g_0`.
    pub fn unity_cycle(&self, start: &PointClass) -> Vec<PointClass> {
        let mut cyc = vec![start.clone()];
        loop {
            let next = orbit_step(cyc.last().unwrap(), self.k);
            if next == *start {
                return cyc;
            }
            cyc.push(next);
        }
    }

    fn orbit_for_refinement(&self, idx: usize, cap: usize) -> Vec<PointClass> {
        let start = &self.classes[idx].class;
        match self.classes[idx].kind {
            Classification::Anxious { unity: Some(_) } => self.unity_cycle(start),
            _ => self.walk(start, cap).steps,
        }
    }

    fn replace_class(&mut self, idx: usize, pieces: [Poly; 2]) {
        self.classes.remove(idx);
        for p in pieces {
            for cls in PointClass::split_poly(&p) {
                self.push_class(cls);
            }
        }
    }

    /// Splits classes until every orbit class of every anxious pole class is a basis class or disjoint
    /// from the support.
    pub fn refine_orbits(&mut self, cap: usize) {
        'restart: loop {
            for s in self.anxious_poles() {
                let orbit = self.orbit_for_refinement(s, cap);
                for t in 1..orbit.len() {
                    let j = match self.lookup(&orbit[t]) {
                        Lookup::Partial(j) => j,
                        _ => continue,
                    };
                    let g = orbit[t].class_poly(&self.field);
                    let b = self.classes[j].poly.clone();
                    let h = b.gcd(&g);
                    if h != b {
                        let rest = b.exact_div(&h).monic();
                        self.replace_class(j, [h, rest]);
                    } else {
                        let mut pre = h;
                        for u in (1..=t).rev() {
                            let below = orbit[u - 1].class_poly(&self.field);
                            pre = below.gcd(&pre.compose_pow(self.k as usize));
                        }
                        let whole = self.classes[s].poly.clone();
                        let rest = whole.exact_div(&pre).monic();
                        self.replace_class(s, [pre, rest]);
                    }
                    continue 'restart;
                }
            }
            return;
        }
    }
}
