// SPDX-License-Identifier: Apache-2.0

//! Degree-layered APSP for unweighted graphs.
//!
//! Pairs joined by a shortest path of light vertices (degree `<= n^(1-r)`)
//! are left to algorithm A on the subgraph of edges with a light endpoint.
//! For every level `i` from `floor((1-r) log2 n)` to `ceil(log2 n)`, the
//! vertices of degree `>= 2^i` are dominated by a hitting set `S_i`; exact
//! distances from `S_i` in the subgraph `G_i` of edges with an endpoint of
//! degree `<= 2^(i+1)` are combined through `S_i` by algorithm B. A pair
//! whose heaviest path vertex sits at level `i` gets
//! `mult_B * d + 2 mult_B + add_B` from that level.
//!
//! The levels start at the floor rather than the nearest integer so that a
//! heavy vertex with degree just above `n^(1-r)` is always dominated. The
//! output also takes the direct edges: for adjacent pairs the level bound
//! `mult_B + 2` would otherwise exceed the instantiations' stretch.

use rayon::prelude::*;

use crate::additive::additive_apsp_k;
use crate::bk::bk_apsp;
use crate::dist::{is_finite, sat_add, Rational, Stretch, INF};
use crate::error::{Error, Result};
use crate::estimate::EstimateMatrix;
use crate::graph::{bfs_unchecked, degree_filtered_subgraph, exact_apsp, Graph};
use crate::hitting::{hit, HittingSet};
use crate::minplus::{paths_through_set, MinPlusMatrix, MulBackend, NaiveBackend};

/// `r` for the min-plus 2-approximation.
pub const TWO_APPROX_R: f64 = 0.468;
/// `r` for the combinatorial 2-approximation.
pub const COMBINATORIAL_R: f64 = 0.25;

/// Balanced `r` for the near-additive instantiation with additive term `k`.
pub fn near_additive_r(k: usize) -> f64 {
    match k {
        2 => 0.69609339,
        4 => 0.64297733,
        6 => 0.60723159,
        8 => 0.58084427,
        _ => 0.5,
    }
}

/// APSP routine run on the sparse subgraph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlgoA {
    Exact,
    /// The hierarchy-based 2-approximation at the given `r`, exact shortest
    /// paths from the top level.
    Bk {
        r: f64,
        seed: u64,
    },
    /// `+k` additive APSP.
    Additive {
        k: usize,
    },
}

impl AlgoA {
    pub fn contract(&self) -> Stretch {
        match *self {
            AlgoA::Exact => Stretch::EXACT,
            AlgoA::Bk { .. } => Stretch::from_ints(2, 0),
            AlgoA::Additive { k } => Stretch::from_ints(1, k as u64),
        }
    }

    fn run(&self, g: &Graph) -> Result<EstimateMatrix> {
        match *self {
            AlgoA::Exact => Ok(exact_apsp(g)),
            AlgoA::Bk { r, seed } => Ok(bk_apsp(g, r, Rational::from_integer(0), seed)),
            AlgoA::Additive { k } => additive_apsp_k(g, k),
        }
    }
}

/// Shortest two-hop paths through a set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlgoB {
    /// Scaled min-plus product, `(1 + eps, 0)`; `eps = 0` is exact.
    MinPlus { eps: Rational },
    /// Exact, without the min-plus module.
    Star,
}

impl AlgoB {
    pub fn contract(&self) -> Stretch {
        match *self {
            AlgoB::MinPlus { eps } => Stretch::multiplicative(Rational::from_integer(1) + eps),
            AlgoB::Star => Stretch::EXACT,
        }
    }

    fn run(
        &self,
        dist_s: &[Vec<u64>],
        n: usize,
        backend: &dyn MulBackend,
    ) -> Result<EstimateMatrix> {
        match *self {
            AlgoB::Star => Ok(star_dijkstra_b(dist_s, n)),
            AlgoB::MinPlus { eps } => {
                let mut d = MinPlusMatrix::filled(n, dist_s.len(), INF);
                for (a, row) in dist_s.iter().enumerate() {
                    for (v, &x) in row.iter().enumerate() {
                        d.set(v, a, x);
                    }
                }
                let c = paths_through_set(&d, eps, backend)?;
                Ok(EstimateMatrix::from_vec(n, c.into_vec(), None))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameworkConfig {
    pub r: f64,
    pub algo_a: AlgoA,
    pub algo_b: AlgoB,
}

impl FrameworkConfig {
    /// Per pair, either A's contract or `(mult_B, add_B + 2 mult_B)`.
    pub fn level_contract(&self) -> Stretch {
        let b = self.algo_b.contract();
        Stretch::new(b.mult, b.add + b.mult * 2)
    }

    /// Levels `i` visited for an `n`-vertex graph.
    pub fn levels(&self, n: usize) -> std::ops::RangeInclusive<u32> {
        let log = (n.max(1) as f64).log2();
        let lo = ((1.0 - self.r.clamp(0.0, 1.0)) * log).floor() as u32;
        lo..=log.ceil() as u32
    }
}

/// One level: hitting set, filtered subgraph and exact distances from the set.
#[derive(Clone, Debug)]
pub struct LevelContext {
    pub i: u32,
    pub hitting: HittingSet,
    pub subgraph: Graph,
    /// `|S_i|` rows of distances in the subgraph.
    pub dist_s: Vec<Vec<u64>>,
}

impl LevelContext {
    pub fn build(g: &Graph, i: u32) -> Self {
        let n = g.n();
        let s = 1usize.checked_shl(i).unwrap_or(usize::MAX).min(n.max(1));
        let hitting = hit(g, s);
        let subgraph = degree_filtered_subgraph(g, 2f64.powi(i as i32 + 1));
        let dist_s = hitting
            .members
            .par_iter()
            .map(|&a| bfs_unchecked(&subgraph, a))
            .collect();
        LevelContext {
            i,
            hitting,
            subgraph,
            dist_s,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LevelOutput {
    pub i: u32,
    pub hitting: HittingSet,
    /// Kept only when requested.
    pub estimate: Option<EstimateMatrix>,
}

#[derive(Clone, Debug)]
pub struct FrameworkRun {
    pub estimate: EstimateMatrix,
    pub levels: Vec<LevelOutput>,
    /// Algorithm A's output, kept only when levels are kept.
    pub sparse: Option<EstimateMatrix>,
}

/// `min(δ_A, min_i δ_i, w)` with `w` the direct edges.
pub fn framework_apsp(g: &Graph, cfg: &FrameworkConfig) -> Result<EstimateMatrix> {
    Ok(framework_run(g, cfg, false, &NaiveBackend)?.estimate)
}

pub fn framework_run(
    g: &Graph,
    cfg: &FrameworkConfig,
    keep_levels: bool,
    backend: &dyn MulBackend,
) -> Result<FrameworkRun> {
    g.require_unweighted("the degree-layered framework")?;
    let n = g.n();
    let light = degree_filtered_subgraph(g, (n.max(1) as f64).powf(1.0 - cfg.r));
    let sparse = cfg.algo_a.run(&light)?;
    let mut est = sparse.clone();
    for (u, v, w) in g.edges() {
        est.lower_sym(u, v, w);
    }

    let mut levels = Vec::new();
    for i in cfg.levels(n) {
        let ctx = LevelContext::build(g, i);
        let mut out = LevelOutput {
            i,
            hitting: ctx.hitting.clone(),
            estimate: None,
        };
        if !ctx.hitting.is_empty() {
            let level = cfg.algo_b.run(&ctx.dist_s, n, backend)?;
            est.min_assign(&level);
            if keep_levels {
                out.estimate = Some(level);
            }
        }
        levels.push(out);
    }
    for u in 0..n {
        est.set(u, u, 0);
    }
    let contract = cfg.algo_a.contract().max(cfg.level_contract());
    Ok(FrameworkRun {
        estimate: est.with_contract(contract),
        levels,
        sparse: keep_levels.then_some(sparse),
    })
}

/// `min over a of dist_s[a][u] + dist_s[a][v]` for all pairs, i.e. shortest
/// paths on the star graph joining each `a` to every vertex.
pub fn star_dijkstra_b(dist_s: &[Vec<u64>], n: usize) -> EstimateMatrix {
    let mut out = EstimateMatrix::from_vec(n, vec![INF; n * n], None);
    out.par_rows_mut().enumerate().for_each(|(u, row)| {
        for ds in dist_s {
            let du = ds[u];
            if !is_finite(du) {
                continue;
            }
            for (x, &dv) in row.iter_mut().zip(ds) {
                let d = sat_add(du, dv);
                if d < *x {
                    *x = d;
                }
            }
        }
    });
    out
}

/// `(2 + eps)`-approximate APSP: the hierarchy 2-approximation on the sparse
/// part and `(1 + eps/2)` min-plus products through the levels.
pub fn two_approx_unweighted(
    g: &Graph,
    r: f64,
    eps: Rational,
    seed: u64,
) -> Result<EstimateMatrix> {
    if *eps.numer() == 0 {
        return Err(Error::InvalidParameter(
            "two_approx_unweighted needs eps > 0".into(),
        ));
    }
    let cfg = FrameworkConfig {
        r,
        algo_a: AlgoA::Bk { r: 0.5, seed },
        algo_b: AlgoB::MinPlus { eps: eps / 2 },
    };
    let m = framework_apsp(g, &cfg)?;
    Ok(m.with_contract(Stretch::multiplicative(Rational::from_integer(2) + eps)))
}

/// 2-approximate APSP without the min-plus module.
pub fn two_approx_combinatorial(g: &Graph, seed: u64) -> Result<EstimateMatrix> {
    let cfg = FrameworkConfig {
        r: COMBINATORIAL_R,
        algo_a: AlgoA::Bk { r: 0.5, seed },
        algo_b: AlgoB::Star,
    };
    let m = framework_apsp(g, &cfg)?;
    Ok(m.with_contract(Stretch::from_ints(2, 0)))
}

/// `(1 + eps, k)`-approximate APSP for even `k`; `r = None` picks the
/// balanced value for `k`.
pub fn near_additive_apsp(
    g: &Graph,
    k: usize,
    eps: Rational,
    r: Option<f64>,
) -> Result<EstimateMatrix> {
    if k % 2 != 0 || k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be even and >= 2, got {k}"
        )));
    }
    if *eps.numer() == 0 {
        return Err(Error::InvalidParameter(
            "near_additive_apsp needs eps > 0".into(),
        ));
    }
    let cfg = FrameworkConfig {
        r: r.unwrap_or_else(|| near_additive_r(k)),
        algo_a: AlgoA::Additive { k },
        algo_b: AlgoB::MinPlus { eps: eps / 2 },
    };
    let m = framework_apsp(g, &cfg)?;
    Ok(m.with_contract(Stretch::new(
        Rational::from_integer(1) + eps,
        Rational::from_integer(k as u64),
    )))
}

/// `min(floor(δ), δ')` for a `(2 + eps, 0)` estimate `δ` and a `(1, L)`
/// estimate `δ'`: a 2-approximation when `eps * L <= 1`.
///
/// Pairs with `d < L` have `floor((2 + eps) d) = 2d`; pairs with `d >= L`
/// have `δ' <= d + L <= 2d`.
pub fn reduce_2eps_to_2(
    g: &Graph,
    delta_2eps: &EstimateMatrix,
    delta_add: &EstimateMatrix,
) -> Result<EstimateMatrix> {
    g.require_unweighted("the 2 + eps reduction")?;
    if delta_2eps.n() != g.n() || delta_add.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "graph n = {}, estimates n = {} and {}",
            g.n(),
            delta_2eps.n(),
            delta_add.n()
        )));
    }
    let (Some(c1), Some(c2)) = (delta_2eps.contract, delta_add.contract) else {
        return Err(Error::Contract(
            "both estimates need a declared contract".into(),
        ));
    };
    let two = Rational::from_integer(2);
    let one = Rational::from_integer(1);
    if c1.mult < two || *c1.add.numer() != 0 || c2.mult != one {
        return Err(Error::Contract(format!(
            "expected (2 + eps, 0) and (1, L) contracts, got {c1} and {c2}"
        )));
    }
    let eps = c1.mult - two;
    if eps * c2.add > one {
        return Err(Error::Contract(format!(
            "eps = {eps} is too large for additive term {}",
            c2.add
        )));
    }
    let mut out = delta_2eps.clone();
    out.min_assign(delta_add);
    Ok(out.with_contract(Stretch::from_ints(2, 0)))
}

/// Additive term `L` and `eps = 1/L` used by [`two_approx_apsp`]: the
/// smallest even `L >= log2 n`.
pub fn reduction_parameters(n: usize) -> (usize, Rational) {
    let log = (n.max(2) as f64).log2();
    let l = (2.0 * (log / 2.0).ceil()).max(2.0) as usize;
    (l, Rational::new(1, l as u64))
}

/// 2-approximate APSP for unweighted graphs: the `(2 + eps)` min-plus
/// instantiation at `eps = 1/L` merged with `+L` additive APSP.
pub fn two_approx_apsp(g: &Graph, r: f64, seed: u64) -> Result<EstimateMatrix> {
    let (l, eps) = reduction_parameters(g.n());
    let approx = two_approx_unweighted(g, r, eps, seed)?;
    let additive = additive_apsp_k(g, l)?;
    reduce_2eps_to_2(g, &approx, &additive)
}
