// SPDX-License-Identifier: Apache-2.0

//! Parameterized Baswana–Kavitha 2-approximation.
//!
//! An `r`-hierarchy `V = S_0 ⊇ S_1 ⊇ ... ⊇ S_k` with `k = round((1 - r) log2 n)`
//! halves the source set per level; a pivot set `S` sampled at rate `n^(r-1)`
//! is added to every level to keep clusters small. [`bk_scheme`] computes
//! level-wise pivot estimates on sparsified graphs and [`bk_apsp`] combines
//! them with shortest paths from `S_k`. At `r = 1/2` with exact shortest paths
//! this is the classic `O(m sqrt(n) + n^2)` 2-approximation.

use rand::Rng;
use rayon::prelude::*;

use crate::bunches::{compute_bunches, log_factor, BunchParams, BunchStructure};
use crate::dist::{sat_add, Rational, Stretch, INF};
use crate::estimate::EstimateMatrix;
use crate::graph::{dijkstra_from, Graph, Pivots};
use crate::rng::{seeded_rng, stream};
use crate::weighted::mssp;

/// Size constant for the per-level bounds `|S_i| <= c (n / 2^i) ln n`.
pub const LEVEL_SIZE_CONST: f64 = 4.0;
const MAX_RETRIES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct RHierarchy {
    pub r: f64,
    pub k: usize,
    /// `S_0, ..., S_k`, each sorted.
    pub levels: Vec<Vec<usize>>,
    /// Pivots with respect to each level.
    pub pivots: Vec<Pivots>,
    /// The cluster-bounding set mixed into every level.
    pub cluster_set: Vec<usize>,
    /// Whether the cluster-bounding sample met its size bounds, and after
    /// how many samples.
    pub cluster_bounds_ok: bool,
    pub cluster_attempts: usize,
    /// Bunches and clusters with respect to `S_k`.
    pub top: BunchStructure,
    pub attempts: usize,
}

impl RHierarchy {
    pub fn n(&self) -> usize {
        self.top.n()
    }

    #[inline]
    pub fn pivot(&self, i: usize, u: usize) -> Option<usize> {
        self.pivots[i].of(u)
    }

    #[inline]
    pub fn pivot_dist(&self, i: usize, u: usize) -> u64 {
        self.pivots[i].dist[u]
    }

    pub fn level_bound(&self, i: usize) -> f64 {
        let n = self.n();
        LEVEL_SIZE_CONST * (n as f64 / 2f64.powi(i as i32)) * log_factor(n)
    }

    pub fn top_bound(&self) -> f64 {
        let n = self.n();
        LEVEL_SIZE_CONST * (n.max(1) as f64).powf(self.r) * log_factor(n)
    }

    pub fn within_bounds(&self) -> bool {
        let levels_ok = self
            .levels
            .iter()
            .enumerate()
            .all(|(i, s)| s.len() as f64 <= self.level_bound(i));
        levels_ok && self.levels[self.k].len() as f64 <= self.top_bound()
    }
}

/// Number of levels above `S_0`.
pub fn level_count(n: usize, r: f64) -> usize {
    ((1.0 - r) * (n.max(1) as f64).log2()).round().max(0.0) as usize
}

pub fn build_r_hierarchy(g: &Graph, r: f64, seed: u64) -> RHierarchy {
    let mut attempt = 0;
    loop {
        let mut h = build_once(g, r, seed.wrapping_add(attempt as u64));
        h.attempts = attempt + 1;
        if h.within_bounds() || attempt >= MAX_RETRIES {
            return h;
        }
        attempt += 1;
    }
}

fn build_once(g: &Graph, r: f64, seed: u64) -> RHierarchy {
    let n = g.n();
    let r = r.clamp(0.0, 1.0);
    let k = level_count(n, r);
    let p = (n.max(1) as f64).powf(r - 1.0);
    let bunches = compute_bunches(g, p, seed);
    let cluster_bounds_ok = bunches.within_bounds(&BunchParams::default());

    let mut rng = seeded_rng(seed, stream::HIERARCHY);
    let mut sub: Vec<usize> = (0..n).collect();
    let mut levels = vec![sub.clone()];
    for _ in 1..=k {
        sub.retain(|_| rng.random_bool(0.5));
        let mut level = sub.clone();
        level.extend_from_slice(&bunches.sources);
        level.sort_unstable();
        level.dedup();
        levels.push(level);
    }
    let pivots: Vec<Pivots> = levels.par_iter().map(|s| Pivots::compute(g, s)).collect();
    let top = BunchStructure::from_sources(g, &levels[k], p);
    RHierarchy {
        r,
        k,
        levels,
        pivots,
        cluster_set: bunches.sources,
        cluster_bounds_ok,
        cluster_attempts: bunches.attempts,
        top,
        attempts: 1,
    }
}

/// Estimates `δ(s, v)` produced by the level-wise scheme; a real path length
/// or `INF` for every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotEstimates {
    pub delta: EstimateMatrix,
}

impl PivotEstimates {
    /// `min over i of δ(u, p_i(u)) + δ(p_i(u), v)` and the symmetric term.
    pub fn through_pivots(&self, h: &RHierarchy, u: usize, v: usize) -> u64 {
        let mut best = INF;
        for i in 0..=h.k {
            for (a, b) in [(u, v), (v, u)] {
                if let Some(p) = h.pivot(i, a) {
                    best = best.min(sat_add(self.delta.get(a, p), self.delta.get(p, b)));
                }
            }
        }
        best
    }
}

pub fn bk_scheme(g: &Graph, h: &RHierarchy) -> PivotEstimates {
    let n = g.n();
    let k = h.k;
    let mut delta = EstimateMatrix::unknown(n);

    for i in 0..=k {
        for u in 0..n {
            if let Some(p) = h.pivot(i, u) {
                delta.lower_sym(u, p, h.pivot_dist(i, u));
            }
        }
    }

    let in_top: Vec<bool> = membership(n, &h.levels[k]);
    for u in (0..n).filter(|&u| !in_top[u]) {
        for (x, dx) in h.top.bunch(u) {
            for i in 0..=k {
                let Some(p) = h.pivot(i, u) else { continue };
                let base = sat_add(h.pivot_dist(i, u), dx);
                for (y, w) in g.neighbors(x) {
                    delta.lower_sym(p, y, sat_add(base, w));
                }
            }
        }
    }

    for i in 0..k {
        let next = &h.pivots[i + 1].dist;
        // E_A: edges no heavier than the distance from one endpoint to A
        let sparse = g.filter_edges(|a, b, w| w <= next[a] || w <= next[b]);
        let rows: Vec<(usize, Vec<u64>)> = h.levels[i]
            .par_iter()
            .map(|&s| (s, dijkstra_from(&sparse, delta.row(s).to_vec())))
            .collect();
        for (s, row) in rows {
            for (v, d) in row.into_iter().enumerate() {
                delta.lower_sym(s, v, d);
            }
        }
    }
    PivotEstimates { delta }
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &s in set {
        member[s] = true;
    }
    member
}

/// `(2 + eps)`-approximate APSP for any `r` in `[0, 1]`.
pub fn bk_apsp(g: &Graph, r: f64, eps: Rational, seed: u64) -> EstimateMatrix {
    let h = build_r_hierarchy(g, r, seed);
    bk_apsp_with(g, &h, eps)
}

pub fn bk_apsp_with(g: &Graph, h: &RHierarchy, eps: Rational) -> EstimateMatrix {
    let n = g.n();
    let mut est = bk_scheme(g, h);
    let top = &h.levels[h.k];
    let rows = mssp(g, top, eps / 2);
    for (&s, row) in top.iter().zip(rows) {
        for (v, d) in row.into_iter().enumerate() {
            est.delta.lower_sym(s, v, d);
        }
    }
    let mut out = EstimateMatrix::unknown(n);
    out.par_rows_mut().enumerate().for_each(|(u, row)| {
        for (v, x) in row.iter_mut().enumerate() {
            *x = if u == v {
                0
            } else if let Some(d) = h.top.in_bunch(u, v).or_else(|| h.top.in_bunch(v, u)) {
                d
            } else {
                est.through_pivots(h, u, v)
            };
        }
    });
    out.with_contract(Stretch::multiplicative(Rational::from_integer(2) + eps))
}
