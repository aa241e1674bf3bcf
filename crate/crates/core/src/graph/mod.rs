// SPDX-License-Identifier: Apache-2.0

//! Immutable undirected graphs in compressed adjacency form.

mod exact;
mod gen;
mod io;
mod sssp;

pub use exact::exact_apsp;
pub use gen::gen_gnp;
pub use io::{load_graph, parse_graph, write_graph};
pub use sssp::{bfs, dijkstra, grow_cluster, DistanceVector, Pivots};
pub(crate) use sssp::{bfs_unchecked, dijkstra_from};

use crate::dist::MAX_WEIGHT;
use crate::error::{Error, Result};

/// Undirected graph with non-negative integer weights.
///
/// Parallel edges are collapsed to their minimum weight and self-loops are
/// dropped on construction, so every unordered pair carries at most one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Canonical edge list, `u < v`, sorted.
    edges: Vec<(u32, u32, u64)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("too many vertices: {n}")));
        }
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if w > MAX_WEIGHT {
                return Err(Error::InvalidParameter(format!("weight {w} exceeds 2^40")));
            }
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            list.push((a as u32, b as u32, w));
        }
        list.sort_unstable();
        // sorted by (u, v, w): the first of each run is the minimum weight
        list.dedup_by(|next, kept| next.0 == kept.0 && next.1 == kept.1);
        Ok(Self::from_canonical(n, list))
    }

    fn from_canonical(n: usize, edges: Vec<(u32, u32, u64)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v, _) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * edges.len()];
        let mut weights = vec![0u64; 2 * edges.len()];
        // canonical order makes each adjacency list sorted by neighbour id:
        // for vertex x, neighbours y < x arrive (as u) in increasing order
        // before any neighbour y > x.
        for &(u, v, w) in &edges {
            let i = fill[v as usize];
            targets[i] = u;
            weights[i] = w;
            fill[v as usize] += 1;
        }
        for &(u, v, w) in &edges {
            let i = fill[u as usize];
            targets[i] = v;
            weights[i] = w;
            fill[u as usize] += 1;
        }
        Graph {
            n,
            edges,
            offsets,
            targets,
            weights,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Neighbours of `u` with edge weights, sorted by neighbour id.
    #[inline]
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.weights[range])
            .map(|(&v, &w)| (v as usize, w))
    }

    /// Canonical edges `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v, w)| (u as usize, v as usize, w))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        let range = self.offsets[u]..self.offsets[u + 1];
        let adj = &self.targets[range.clone()];
        adj.binary_search(&(v as u32))
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1)
    }

    pub(crate) fn require_unweighted(&self, what: &str) -> Result<()> {
        if self.is_unweighted() {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "{what} requires an unweighted graph (all weights 1)"
            )))
        }
    }

    /// Subgraph on the same vertex set keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize, u64) -> bool) -> Graph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v, w)| keep(u as usize, v as usize, w))
            .collect();
        Self::from_canonical(self.n, edges)
    }
}

/// Keeps an edge iff at least one endpoint has degree (in `g`) at most
/// `threshold`.
pub fn degree_filtered_subgraph(g: &Graph, threshold: f64) -> Graph {
    let light: Vec<bool> = (0..g.n())
        .map(|u| g.degree(u) as f64 <= threshold)
        .collect();
    g.filter_edges(|u, v, _| light[u] || light[v])
}
