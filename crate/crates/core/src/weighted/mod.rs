// SPDX-License-Identifier: Apache-2.0

//! Weighted (2 + eps)-approximate APSP and the bunch-based distance oracles.
//!
//! Every estimate is the minimum of two kinds of candidates: a path through a
//! pivot (`d(u, p(u)) + d(p(u), v)`) and the "adjacent" value
//!
//! ```text
//! adj(u, v) = min { d(u, u') + w(u', v') + d(v', v) : {u', v'} ∈ E, u' ∈ B(u), v' ∈ B(v) }
//! ```
//!
//! which is exact whenever a shortest path runs inside `B(u) ∪ B(v)`.

mod oracle;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bunches::{compute_bunches, BunchStructure};
use crate::dist::{is_finite, sat_add, Rational, Stretch, INF};
use crate::estimate::EstimateMatrix;
use crate::graph::{dijkstra, Graph};

pub use oracle::{
    build_oracle_2, build_oracle_2w, default_rate_2, default_rate_2w, query_oracle_2, Candidates,
    DistanceOracle2, DistanceOracle2W, QueryTrace, RateChoice,
};

/// Sparse table over unordered vertex pairs; missing pairs read as `INF`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairTable {
    map: HashMap<(u32, u32), u64>,
}

impl PairTable {
    #[inline]
    fn key(u: usize, v: usize) -> (u32, u32) {
        (u.min(v) as u32, u.max(v) as u32)
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.map.get(&Self::key(u, v)).copied().unwrap_or(INF)
    }

    /// Keeps the smaller of the stored and offered values.
    pub fn offer(&mut self, u: usize, v: usize, d: u64) {
        self.map
            .entry(Self::key(u, v))
            .and_modify(|x| *x = (*x).min(d))
            .or_insert(d);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Entries `(u, v, value)` with `u < v`, sorted by key.
    pub fn sorted_entries(&self) -> Vec<(u32, u32, u64)> {
        let mut out: Vec<_> = self.map.iter().map(|(&(u, v), &d)| (u, v, d)).collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn from_entries(entries: impl IntoIterator<Item = (u32, u32, u64)>) -> Self {
        PairTable {
            map: entries.into_iter().map(|(u, v, d)| ((u, v), d)).collect(),
        }
    }

    fn merge(mut self, other: PairTable) -> PairTable {
        let (mut big, small) = if self.map.len() >= other.map.len() {
            (std::mem::take(&mut self.map), other.map)
        } else {
            (other.map, std::mem::take(&mut self.map))
        };
        for (k, d) in small {
            big.entry(k).and_modify(|x| *x = (*x).min(d)).or_insert(d);
        }
        PairTable { map: big }
    }
}

pub type AdjacentTable = PairTable;

/// Distances from every vertex of `sources` to all of `V`, one row per
/// source in the given order.
///
/// Rows may be `(1 + eps)`-approximate by contract; this implementation runs
/// exact Dijkstra for every `eps`, which satisfies any such contract.
pub fn mssp(g: &Graph, sources: &[usize], _eps: Rational) -> Vec<Vec<u64>> {
    sources.par_iter().map(|&s| dijkstra(g, s).dist).collect()
}

/// The adjacent table by enumerating, for every edge `{u', v'}`, all pairs of
/// cluster members `u ∈ C(u')`, `v ∈ C(v')`.
pub fn adjacent_via_edges(g: &Graph, bs: &BunchStructure) -> AdjacentTable {
    let edges: Vec<_> = g.edges().collect();
    edges
        .par_iter()
        .fold(PairTable::default, |mut table, &(a, b, w)| {
            for (x, y) in [(a, b), (b, a)] {
                for (u, du) in bs.cluster(x) {
                    let left = sat_add(du, w);
                    for (v, dv) in bs.cluster(y) {
                        if u != v {
                            table.offer(u, v, sat_add(left, dv));
                        }
                    }
                }
            }
            table
        })
        .reduce(PairTable::default, PairTable::merge)
}

/// The adjacent values as a dense matrix (`INF` where no qualifying edge
/// exists, 0 on the diagonal), computed in two phases per source `u`.
///
/// Phase a relaxes the bunch edges out of `u` and then one graph edge,
/// giving `a(v') = min { d(u, u') + w(u', v') : u' ∈ B(u) }`. Phase b
/// stitches through the clusters: `v ∈ C(v')` receives `a(v') + d(v', v)`.
/// The relaxations follow this layered order only; chaining further bunch
/// edges would find shorter real paths but no longer equal `adj(u, v)`.
pub fn adjacent_via_bunch_dijkstra(g: &Graph, bs: &BunchStructure) -> EstimateMatrix {
    let n = g.n();
    let mut out = EstimateMatrix::unknown(n);
    out.par_rows_mut().enumerate().for_each(|(u, row)| {
        let mut a = vec![INF; n];
        for (x, dx) in bs.bunch(u) {
            for (y, w) in g.neighbors(x) {
                let d = sat_add(dx, w);
                if d < a[y] {
                    a[y] = d;
                }
            }
        }
        for (y, &ay) in a.iter().enumerate() {
            if !is_finite(ay) {
                continue;
            }
            for (v, dv) in bs.cluster(y) {
                let d = sat_add(ay, dv);
                if d < row[v] {
                    row[v] = d;
                }
            }
        }
        row[u] = 0;
    });
    out
}

/// `(2 + eps)`-approximate APSP on a weighted graph: pivot paths from exact
/// (or `(1 + eps)`) distances out of the pivot set, combined with the
/// adjacent values.
pub fn dense_apsp(g: &Graph, p: f64, eps: Rational, seed: u64) -> EstimateMatrix {
    let bs = compute_bunches(g, p, seed);
    dense_apsp_with(g, &bs, eps)
}

pub fn dense_apsp_with(g: &Graph, bs: &BunchStructure, eps: Rational) -> EstimateMatrix {
    let n = g.n();
    let rows = mssp(g, &bs.sources, eps);
    let mut index = vec![usize::MAX; n];
    for (i, &s) in bs.sources.iter().enumerate() {
        index[s] = i;
    }
    let mut est = adjacent_via_bunch_dijkstra(g, bs);
    // the pivot-path candidate through p(u) covers both (u, v) and (v, u)
    let through: Vec<Option<&[u64]>> = (0..n)
        .map(|u| bs.pivot(u).map(|p| rows[index[p]].as_slice()))
        .collect();
    est.par_rows_mut().enumerate().for_each(|(u, row)| {
        let du = bs.pivot_dist(u);
        if let Some(ru) = through[u] {
            for (v, x) in row.iter_mut().enumerate() {
                *x = (*x).min(sat_add(du, ru[v]));
            }
        }
        for (v, x) in row.iter_mut().enumerate() {
            if let Some(rv) = through[v] {
                *x = (*x).min(sat_add(bs.pivot_dist(v), rv[u]));
            }
        }
    });
    let two = Rational::from_integer(2);
    est.with_contract(Stretch::multiplicative(two + eps))
}
