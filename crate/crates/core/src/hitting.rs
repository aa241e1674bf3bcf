// SPDX-License-Identifier: Apache-2.0

//! Deterministic hitting sets for high-degree neighbourhoods.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::Graph;

/// Size constant in `|S| <= HIT_SIZE_CONST * (n / s) * ln n + 1`.
pub const HIT_SIZE_CONST: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    pub s: usize,
    /// Sorted vertex ids.
    pub members: Vec<usize>,
}

impl HittingSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn size_bound(n: usize, s: usize) -> f64 {
        HIT_SIZE_CONST * (n as f64 / s.max(1) as f64) * (n.max(1) as f64).ln() + 1.0
    }

    /// Every vertex of degree `>= s` has a neighbour in the set.
    pub fn hits(&self, g: &Graph) -> bool {
        let mut member = vec![false; g.n()];
        for &x in &self.members {
            member[x] = true;
        }
        (0..g.n())
            .filter(|&u| g.degree(u) >= self.s)
            .all(|u| g.neighbors(u).any(|(v, _)| member[v]))
    }

    pub fn within_bound(&self, n: usize) -> bool {
        self.len() as f64 <= Self::size_bound(n, self.s)
    }
}

/// Greedy set cover over the vertices of degree `>= s`.
///
/// A candidate covers the high-degree vertices adjacent to it (never
/// itself). Each round takes the candidate covering the most uncovered
/// vertices, smallest id first on ties. Since every element has at least `s`
/// covering candidates, greedy stays within `(n / s)(1 + ln n)`.
pub fn hit(g: &Graph, s: usize) -> HittingSet {
    let s = s.max(1);
    let n = g.n();
    let mut uncovered: Vec<bool> = (0..n).map(|u| g.degree(u) >= s).collect();
    let mut remaining = uncovered.iter().filter(|&&x| x).count();

    // gain[v] = number of uncovered high-degree neighbours of v
    let mut gain = vec![0usize; n];
    for (u, _) in uncovered.iter().enumerate().filter(|(_, &x)| x) {
        for (v, _) in g.neighbors(u) {
            gain[v] += 1;
        }
    }
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = gain
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(v, &c)| (c, Reverse(v)))
        .collect();

    let mut members = Vec::new();
    // lazy heap: stored gains only ever overestimate, so a popped entry whose
    // gain is current is a true maximum with the smallest id among ties.
    while remaining > 0 {
        let Some((c, Reverse(v))) = heap.pop() else {
            break;
        };
        if c != gain[v] {
            if gain[v] > 0 {
                heap.push((gain[v], Reverse(v)));
            }
            continue;
        }
        members.push(v);
        for (u, _) in g.neighbors(v) {
            if uncovered[u] {
                uncovered[u] = false;
                remaining -= 1;
                for (x, _) in g.neighbors(u) {
                    gain[x] -= 1;
                }
            }
        }
    }
    members.sort_unstable();
    HittingSet { s, members }
}
