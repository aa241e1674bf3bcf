// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::sssp::dijkstra_from;
use super::Graph;
use crate::dist::{Stretch, INF};
use crate::estimate::EstimateMatrix;

/// Exact APSP by one Dijkstra per source. This is the reference every
/// approximation is audited against.
pub fn exact_apsp(g: &Graph) -> EstimateMatrix {
    let n = g.n();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut init = vec![INF; n];
            init[s] = 0;
            dijkstra_from(g, init)
        })
        .collect();
    EstimateMatrix::from_rows(rows, Some(Stretch::EXACT))
}
