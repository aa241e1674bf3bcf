// SPDX-License-Identifier: Apache-2.0

use rand::Rng;

use super::Graph;
use crate::rng::{seeded_rng, stream};

/// Erdős–Rényi `G(n, p_edge)` with weights uniform on `[1, w_max]`.
///
/// Unordered pairs are visited in lexicographic order and each draws one
/// Bernoulli trial followed, if included, by one weight draw, so the output is
/// a pure function of the arguments.
pub fn gen_gnp(n: usize, p_edge: f64, w_max: u64, seed: u64) -> Graph {
    let p_edge = p_edge.clamp(0.0, 1.0);
    let w_max = w_max.max(1);
    let mut rng = seeded_rng(seed, stream::GNP);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p_edge) {
                let w = if w_max == 1 {
                    1
                } else {
                    rng.random_range(1..=w_max)
                };
                edges.push((u, v, w));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are in range")
}
