use std::collections::VecDeque;

use crate::error::{MahlerError, Result};
use crate::field::ExtInt;
use crate::orbits::{Classification, HorizonGuarantee, OrbitHorizon, PointClass, SupportSet};

use super::sequence::{SequenceMode, SequenceSpec};

/// Walk weights on the orbit cycle of an anxious root of unity.
#[derive(Clone, Debug)]
pub struct UnityGraph {
    /// Class-level cycle `g_0 -> g_1 -> ...`, closing back at `g_0`.
    pub cycle: Vec<PointClass>,
    /// Point-level period `m`: the multiplicative order of `k` mod the point order.
    pub m_point: usize,
    /// `weights[j][a-1] = v_{g_j}(c_a)`.
    pub weights: Vec<Vec<ExtInt>>,
}

/// Walk weights on the orbit of a non-unity class up to its horizon.
#[derive(Clone, Debug)]
pub struct TailGraph {
    pub horizon: OrbitHorizon,
    /// `weights[t][a-1]` for `t < T`.
    pub weights: Vec<Vec<ExtInt>>,
}

#[derive(Clone, Debug)]
pub enum CalmnessGraph {
    Unity(UnityGraph),
    Tail(TailGraph),
}

/// Closed walk `prefix + cycle^repeat + suffix` with a negative cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeCycle {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
    pub suffix: Vec<usize>,
    pub repeat: usize,
    pub cycle_weight: i64,
}

#[derive(Clone, Debug)]
pub struct MinClm {
    /// The infimum of clm over all admissible sequences.
    pub value: ExtInt,
    /// A minimizing sequence, or a negative closed walk when the infimum is `-inf`.
    pub witness: Option<SequenceSpec>,
    /// clm of `witness`.
    pub witness_clm: ExtInt,
    pub negative_cycle: Option<NegativeCycle>,
}

impl CalmnessGraph {
    pub fn build(support: &SupportSet, start: &PointClass, cap: usize) -> Result<CalmnessGraph> {
        let n = support.n();
        let row = |cls: &PointClass| -> Result<Vec<ExtInt>> { (1..=n).map(|a| support.valuation(cls, a)).collect() };
        match crate::orbits::classify_point(start, support.k) {
            Classification::Calm => Err(MahlerError::Invalid(format!("class {start} is calm"))),
            Classification::Anxious { unity: Some((_, m)) } => {
                let cycle = support.unity_cycle(start);
                let weights = cycle.iter().map(row).collect::<Result<Vec<_>>>()?;
                Ok(CalmnessGraph::Unity(UnityGraph { cycle, m_point: m as usize, weights }))
            }
            Classification::Anxious { unity: None } => {
                let horizon = support.orbit_horizon(start, cap);
                if horizon.guarantee == HorizonGuarantee::CapReached {
                    return Err(MahlerError::HorizonUncertified(start.to_string()));
                }
                let weights = horizon.steps[..horizon.t].iter().map(row).collect::<Result<Vec<_>>>()?;
                Ok(CalmnessGraph::Tail(TailGraph { horizon, weights }))
            }
        }
    }

    pub fn start(&self) -> &PointClass {
        match self {
            CalmnessGraph::Unity(g) => &g.cycle[0],
            CalmnessGraph::Tail(g) => &g.horizon.steps[0],
        }
    }

    pub fn min_clm(&self) -> MinClm {
        match self {
            CalmnessGraph::Unity(g) => g.min_clm(),
            CalmnessGraph::Tail(g) => g.min_clm(),
        }
    }
}

impl TailGraph {
    pub fn t(&self) -> usize {
        self.horizon.t
    }

    pub fn n(&self) -> usize {
        self.weights.first().map_or(0, |r| r.len())
    }

    /// `best[t]`: minimum weight from node `t` into the tail window, with `best[t] = 0` for `t >= T`.
    pub fn best_from(&self) -> Vec<ExtInt> {
        let t_max = self.t();
        let n = self.n();
        let mut best = vec![ExtInt::Fin(0); t_max + n.max(1)];
        for t in (0..t_max).rev() {
            let mut b = ExtInt::PosInf;
            for a in 1..=n {
                let w = self.weights[t][a - 1];
                if w == ExtInt::PosInf {
                    continue;
                }
                let cand = w + best[t + a];
                if cand < b {
                    b = cand;
                }
            }
            best[t] = b;
        }
        best
    }

    /// Lexicographically smallest minimizing path from node 0.
    fn min_clm(&self) -> MinClm {
        let best = self.best_from();
        let start = self.horizon.steps[0].clone();
        let value = best[0];
        if value == ExtInt::PosInf {
            return MinClm { value, witness: None, witness_clm: value, negative_cycle: None };
        }
        let mut entries = Vec::new();
        let mut t = 0;
        while t < self.t() {
            let a = (1..=self.n())
                .find(|&a| {
                    let w = self.weights[t][a - 1];
                    w != ExtInt::PosInf && w + best[t + a] == best[t]
                })
                .expect("optimal step exists");
            entries.push(a);
            t += a;
        }
        let witness = SequenceSpec { start, entries, mode: SequenceMode::InfiniteTail };
        MinClm { value, witness: Some(witness), witness_clm: value, negative_cycle: None }
    }
}

impl UnityGraph {
    pub fn m_class(&self) -> usize {
        self.cycle.len()
    }

    pub fn n(&self) -> usize {
        self.weights.first().map_or(0, |r| r.len())
    }

    /// Finite weight of the edge `u -> u + a` on `nodes` positions.
    fn w(&self, u: usize, a: usize) -> Option<i64> {
        self.weights[u % self.m_class()][a - 1].finite()
    }

    fn edges(&self, nodes: usize) -> Vec<(usize, usize, usize, i64)> {
        let mut out = Vec::new();
        for u in 0..nodes {
            for a in 1..=self.n() {
                if let Some(w) = self.w(u, a) {
                    out.push((u, (u + a) % nodes, a, w));
                }
            }
        }
        out
    }

    fn closure(nodes: usize, edges: &[(usize, usize, usize, i64)], from: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; nodes];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(u, v, _, _) in edges {
                let (s, d) = if forward { (u, v) } else { (v, u) };
                if s == x && !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    /// Fewest-edge path `from -> to` inside `allowed`, as step list.
    fn bfs_path(nodes: usize, edges: &[(usize, usize, usize, i64)], allowed: &[bool], from: usize, to: usize) -> Vec<usize> {
        if from == to {
            return Vec::new();
        }
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(u, v, a, _) in edges {
                if u == x && allowed[v] && !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, a));
                    queue.push_back(v);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, a) = prev[cur].expect("path exists inside the strongly connected part");
            steps.push(a);
            cur = p;
        }
        steps.reverse();
        steps
    }

    fn walk_weight(&self, start: usize, steps: &[usize], nodes: usize) -> i64 {
        let mut pos = start;
        let mut total = 0;
        for &a in steps {
            total += self.w(pos, a).expect("finite edge");
            pos = (pos + a) % nodes;
        }
        total
    }

    /// Point-level analysis on `Z_m`.
    fn min_clm(&self) -> MinClm {
        let nodes = self.m_point;
        let start = self.cycle[0].clone();
        let all_edges = self.edges(nodes);
        let reach = Self::closure(nodes, &all_edges, 0, true);
        let coreach = Self::closure(nodes, &all_edges, 0, false);
        let inside: Vec<bool> = (0..nodes).map(|i| reach[i] && coreach[i]).collect();
        let edges: Vec<_> = all_edges.into_iter().filter(|&(u, v, _, _)| inside[u] && inside[v]).collect();

        let mut dist: Vec<Option<i64>> = vec![None; nodes];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; nodes];
        dist[0] = Some(0);
        let mut relaxed_at = None;
        for round in 0..nodes {
            let mut changed = None;
            for &(u, v, a, w) in &edges {
                if let Some(du) = dist[u] {
                    if dist[v].map_or(true, |dv| du + w < dv) {
                        dist[v] = Some(du + w);
                        pred[v] = Some((u, a));
                        changed = Some(v);
                    }
                }
            }
            match changed {
                None => break,
                Some(v) if round + 1 == nodes => relaxed_at = Some(v),
                _ => {}
            }
        }

        if let Some(v) = relaxed_at {
            let mut x = v;
            for _ in 0..nodes {
                x = pred[x].unwrap().0;
            }
            let mut cycle = Vec::new();
            let mut cur = x;
            loop {
                let (p, a) = pred[cur].unwrap();
                cycle.push(a);
                cur = p;
                if cur == x {
                    break;
                }
            }
            cycle.reverse();
            let prefix = Self::bfs_path(nodes, &edges, &inside, 0, x);
            let suffix = Self::bfs_path(nodes, &edges, &inside, x, 0);
            let wc = self.walk_weight(x, &cycle, nodes);
            let wp = self.walk_weight(0, &prefix, nodes);
            let ws = self.walk_weight(x, &suffix, nodes);
            let rest = wp + ws;
            let repeat = if rest + wc < 0 { 1 } else { (rest / (-wc)) as usize + 1 };
            let mut entries = prefix.clone();
            for _ in 0..repeat {
                entries.extend(&cycle);
            }
            entries.extend(&suffix);
            let clm = rest + repeat as i64 * wc;
            return MinClm {
                value: ExtInt::NegInf,
                witness: Some(SequenceSpec { start, entries, mode: SequenceMode::UnityCycle }),
                witness_clm: ExtInt::Fin(clm),
                negative_cycle: Some(NegativeCycle { prefix, cycle, suffix, repeat, cycle_weight: wc }),
            };
        }

        // Minimum nonempty closed walk: best edge back into 0.
        let mut best: Option<(i64, usize, usize)> = None;
        for &(u, v, a, w) in &edges {
            if v != 0 {
                continue;
            }
            if let Some(du) = dist[u] {
                if best.map_or(true, |(b, _, _)| du + w < b) {
                    best = Some((du + w, u, a));
                }
            }
        }
        match best {
            None => MinClm { value: ExtInt::PosInf, witness: None, witness_clm: ExtInt::PosInf, negative_cycle: None },
            Some((val, u, a)) => {
                let mut entries = vec![a];
                let mut cur = u;
                while cur != 0 {
                    let (p, b) = pred[cur].unwrap();
                    entries.push(b);
                    cur = p;
                }
                entries.reverse();
                MinClm {
                    value: ExtInt::Fin(val),
                    witness: Some(SequenceSpec { start, entries, mode: SequenceMode::UnityCycle }),
                    witness_clm: ExtInt::Fin(val),
                    negative_cycle: None,
                }
            }
        }
    }

    /// Minimum weight of a walk from class node `j` of length at least zero on the class cycle.
    pub fn class_min_walk_from(&self) -> Option<Vec<i64>> {
        let m = self.m_class();
        let edges = self.edges(m);
        // d[j] = min(0, min_a w + d[j+a]); Bellman-Ford on reversed relaxation.
        let mut d = vec![0i64; m];
        for _ in 0..=m {
            let mut changed = false;
            for &(u, v, _, w) in &edges {
                if w + d[v] < d[u] {
                    d[u] = w + d[v];
                    changed = true;
                }
            }
            if !changed {
                return Some(d);
            }
        }
        None
    }

    /// Class-level shortest walk weights `dist[s][t]` (empty walk allowed, so `dist[s][s] <= 0`).
    pub fn class_distances(&self) -> Vec<Vec<Option<i64>>> {
        let m = self.m_class();
        let edges = self.edges(m);
        let mut all = Vec::with_capacity(m);
        for s in 0..m {
            let mut dist: Vec<Option<i64>> = vec![None; m];
            dist[s] = Some(0);
            for _ in 0..m {
                let mut changed = false;
                for &(u, v, _, w) in &edges {
                    if let Some(du) = dist[u] {
                        if dist[v].map_or(true, |dv| du + w < dv) {
                            dist[v] = Some(du + w);
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            all.push(dist);
        }
        all
    }
}
