// SPDX-License-Identifier: Apache-2.0

//! Seeded benchmark inputs shared by the criterion targets.

use apsp_core::{gen_gnp, Graph};

/// Sizes used for the oracle preprocessing scaling runs.
pub const ORACLE_SIZES: [usize; 3] = [500, 1000, 2000];

/// `G(n, p)` with expected average degree 6, so `m` is about `3n`.
pub fn sparse(n: usize, w_max: u64, seed: u64) -> Graph {
    gen_gnp(n, (6.0 / (n.max(2) - 1) as f64).min(1.0), w_max, seed)
}

/// Unweighted `G(n, p)` with edge probability `p`.
pub fn unweighted(n: usize, p: f64, seed: u64) -> Graph {
    gen_gnp(n, p, 1, seed)
}
