// SPDX-License-Identifier: Apache-2.0

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::Graph;
use crate::dist::{is_finite, sat_add, INF};
use crate::error::Result;

/// Distances from a single source; `INF` marks unreachable vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceVector {
    pub source: usize,
    pub dist: Vec<u64>,
}

pub fn dijkstra(g: &Graph, src: usize) -> DistanceVector {
    let mut init = vec![INF; g.n()];
    init[src] = 0;
    DistanceVector {
        source: src,
        dist: dijkstra_from(g, init),
    }
}

/// Dijkstra where `dist` holds initial upper bounds, equivalent to a virtual
/// source joined to every `v` by an edge of weight `dist[v]`.
pub(crate) fn dijkstra_from(g: &Graph, mut dist: Vec<u64>) -> Vec<u64> {
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = dist
        .iter()
        .enumerate()
        .filter(|(_, &d)| is_finite(d))
        .map(|(v, &d)| Reverse((d, v as u32)))
        .collect();
    while let Some(Reverse((d, u))) = heap.pop() {
        let u = u as usize;
        if d > dist[u] {
            continue;
        }
        for (v, w) in g.neighbors(u) {
            let nd = sat_add(d, w);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v as u32)));
            }
        }
    }
    dist
}

/// Hop distances; only defined on unweighted graphs.
pub fn bfs(g: &Graph, src: usize) -> Result<DistanceVector> {
    g.require_unweighted("bfs")?;
    Ok(DistanceVector {
        source: src,
        dist: bfs_unchecked(g, src),
    })
}

pub(crate) fn bfs_unchecked(g: &Graph, src: usize) -> Vec<u64> {
    let mut dist = vec![INF; g.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.neighbors(u) {
            if dist[v] == INF {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Nearest member of a source set for every vertex.
///
/// Ties between equidistant sources go to the smallest id. Vertices that
/// cannot reach the set have no pivot and distance `INF`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivots {
    pub pivot: Vec<Option<u32>>,
    pub dist: Vec<u64>,
}

impl Pivots {
    pub fn compute(g: &Graph, sources: &[usize]) -> Self {
        let n = g.n();
        let mut best: Vec<(u64, u32)> = vec![(INF, u32::MAX); n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            let label = (0, s as u32);
            if label < best[s] {
                best[s] = label;
                heap.push(Reverse(label_with(label, s)));
            }
        }
        // lexicographic (distance, source id) labels: the minimum over
        // sources is preserved along shortest paths, so plain Dijkstra
        // settles the smallest-id nearest source.
        while let Some(Reverse((d, s, u))) = heap.pop() {
            let u = u as usize;
            if (d, s) > best[u] {
                continue;
            }
            for (v, w) in g.neighbors(u) {
                let label = (sat_add(d, w), s);
                if label < best[v] {
                    best[v] = label;
                    heap.push(Reverse(label_with(label, v)));
                }
            }
        }
        Pivots {
            pivot: best
                .iter()
                .map(|&(d, s)| is_finite(d).then_some(s))
                .collect(),
            dist: best.iter().map(|&(d, _)| d).collect(),
        }
    }

    #[inline]
    pub fn of(&self, u: usize) -> Option<usize> {
        self.pivot[u].map(|p| p as usize)
    }
}

#[inline]
fn label_with((d, s): (u64, u32), v: usize) -> (u64, u32, u32) {
    (d, s, v as u32)
}

/// Truncated Dijkstra from `center` that only settles vertices `u` with
/// `d(center, u) < limit[u]`.
///
/// With `limit = d(·, S)` this returns the cluster `{u : d(u, center) < d(u, S)}`
/// with exact distances: the set is closed under taking prefixes of shortest
/// paths from `center`, so pruning at the boundary loses nothing inside it.
pub fn grow_cluster(g: &Graph, center: usize, limit: &[u64]) -> Vec<(usize, u64)> {
    let mut found = Vec::new();
    if limit[center] == 0 {
        return found;
    }
    let mut seen: std::collections::HashMap<usize, u64> = std::collections::HashMap::new();
    let mut heap = BinaryHeap::from([Reverse((0u64, center as u32))]);
    seen.insert(center, 0);
    while let Some(Reverse((d, u))) = heap.pop() {
        let u = u as usize;
        if seen.get(&u).is_some_and(|&best| d > best) {
            continue;
        }
        found.push((u, d));
        for (v, w) in g.neighbors(u) {
            let nd = sat_add(d, w);
            if nd < limit[v] && seen.get(&v).map_or(true, |&best| nd < best) {
                seen.insert(v, nd);
                heap.push(Reverse((nd, v as u32)));
            }
        }
    }
    found.sort_unstable();
    found
}
