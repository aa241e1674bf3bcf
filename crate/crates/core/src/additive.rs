// SPDX-License-Identifier: Apache-2.0

//! Purely additive `+k` APSP for unweighted graphs (even `k`).
//!
//! With `l = k/2 + 1` levels and degree thresholds `h_1 > ... > h_{l-1}`,
//! `h_i = ceil(n^(1 - i/l))`, level `i` runs shortest paths from a hitting
//! set `D_i` of the vertices of degree `>= h_i` (`D_l = V`) on the edges
//! touching a vertex of degree `< h_{i-1}` (all edges at level 1), plus one
//! edge from every dense vertex to its dominator and star edges carrying the
//! estimates found so far. Each level past the first costs at most 2 on top
//! of the previous one, giving `+2(l - 1) = +k`.

use rayon::prelude::*;

use crate::dist::{Rational, Stretch, INF};
use crate::error::{Error, Result};
use crate::estimate::EstimateMatrix;
use crate::graph::{dijkstra_from, Graph};
use crate::hitting::hit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveConfig {
    pub k: usize,
    /// `h_1, ..., h_{l-1}`.
    pub thresholds: Vec<usize>,
}

impl AdditiveConfig {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let max_k = max_additive_k(n);
        if k % 2 != 0 || k < 2 || k > max_k {
            return Err(Error::InvalidParameter(format!(
                "additive k must be even and in [2, {max_k}], got {k}"
            )));
        }
        let levels = k / 2 + 1;
        let nf = n.max(1) as f64;
        let thresholds = (1..levels)
            .map(|i| nf.powf(1.0 - i as f64 / levels as f64).ceil() as usize)
            .collect();
        Ok(AdditiveConfig { k, thresholds })
    }
}

/// `2 * ceil(log2 n)`, and at least 2.
pub fn max_additive_k(n: usize) -> usize {
    (2 * (n.max(1) as f64).log2().ceil() as usize).max(2)
}

pub fn additive_apsp_2(g: &Graph) -> Result<EstimateMatrix> {
    additive_apsp_k(g, 2)
}

pub fn additive_apsp_k(g: &Graph, k: usize) -> Result<EstimateMatrix> {
    g.require_unweighted("additive APSP")?;
    let cfg = AdditiveConfig::new(g.n(), k)?;
    Ok(run(g, &cfg))
}

fn run(g: &Graph, cfg: &AdditiveConfig) -> EstimateMatrix {
    let n = g.n();
    let h = &cfg.thresholds;
    let levels = h.len() + 1;
    let deg = g.degrees();

    let mut sources: Vec<Vec<usize>> = h.iter().map(|&s| hit(g, s).members).collect();
    sources.push((0..n).collect());

    // E*: every vertex of degree >= h_j to its smallest neighbour in D_j
    let mut dominator_edges = Vec::new();
    for (j, &s) in h.iter().enumerate() {
        let mut member = vec![false; n];
        for &x in &sources[j] {
            member[x] = true;
        }
        for x in (0..n).filter(|&x| deg[x] >= s) {
            if let Some((y, _)) = g.neighbors(x).find(|&(y, _)| member[y]) {
                dominator_edges.push((x, y, 1));
            }
        }
    }

    let mut delta = EstimateMatrix::unknown(n);
    for i in 0..levels {
        let mut edges = dominator_edges.clone();
        edges.extend(
            g.edges()
                .filter(|&(a, b, _)| i == 0 || deg[a] < h[i - 1] || deg[b] < h[i - 1]),
        );
        let level_graph = Graph::from_edges(n, edges).expect("subgraph of a valid graph");
        let rows: Vec<(usize, Vec<u64>)> = sources[i]
            .par_iter()
            .map(|&u| (u, dijkstra_from(&level_graph, delta.row(u).to_vec())))
            .collect();
        for (u, row) in rows {
            for (v, d) in row.into_iter().enumerate() {
                if d < INF {
                    delta.lower_sym(u, v, d);
                }
            }
        }
    }
    delta.with_contract(Stretch::new(
        Rational::from_integer(1),
        Rational::from_integer(cfg.k as u64),
    ))
}
