// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use apsp_core::audit::{audit, audit_with, audit_with_extra, StretchAudit};
use apsp_core::bk::{bk_apsp_with, build_r_hierarchy};
use apsp_core::bunches::{BunchParams, BunchStructure};
use apsp_core::dist::{is_finite, sat_add, Rational, Stretch, INF};
use apsp_core::framework::{
    near_additive_apsp, two_approx_apsp, two_approx_combinatorial, FrameworkConfig,
    COMBINATORIAL_R, TWO_APPROX_R,
};
use apsp_core::hitting::{hit, HittingSet};
use apsp_core::minplus::{approx_minplus, invocations, MinPlusMatrix, NaiveBackend};
use apsp_core::weighted::{
    build_oracle_2, build_oracle_2w, default_rate_2, default_rate_2w, dense_apsp_with, QueryTrace,
    RateChoice,
};
use apsp_core::{compute_bunches, exact_apsp, gen_gnp, EstimateMatrix, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Size-bound observations collected by every randomized run.
#[derive(Default)]
struct SizeLog {
    checks: usize,
    failures: Vec<String>,
}

thread_local! {
    static SIZES: RefCell<SizeLog> = RefCell::new(SizeLog::default());
}

fn record_size(ok: bool, what: impl FnOnce() -> String) {
    SIZES.with(|s| {
        let mut s = s.borrow_mut();
        s.checks += 1;
        if !ok {
            s.failures.push(what());
        }
    });
}

fn record_bunches(bs: &BunchStructure, label: &str) {
    let params = BunchParams::default();
    let ok = bs.within_bounds(&params) && bs.attempts <= params.max_retries + 1;
    record_size(ok, || {
        format!(
            "{label}: |S| = {}, max bunch {}, max cluster {}, bounds {:.1}/{:.1}",
            bs.sources.len(),
            bs.max_bunch(),
            bs.max_cluster(),
            bs.source_bound(&params),
            bs.bunch_bound(&params)
        )
    });
}

fn record_levels(g: &Graph, r: f64, label: &str) {
    let cfg = FrameworkConfig {
        r,
        algo_a: apsp_core::framework::AlgoA::Exact,
        algo_b: apsp_core::framework::AlgoB::Star,
    };
    let n = g.n();
    for i in cfg.levels(n) {
        let s = (1usize << i).min(n);
        let h = hit(g, s);
        record_size(h.within_bound(n) && h.hits(g), || {
            format!(
                "{label}: hitting set for s = {s} has {} > {:.1}",
                h.len(),
                HittingSet::size_bound(n, s)
            )
        });
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn summarize(audits: &[StretchAudit]) -> (u64, f64, u64) {
    let violations = audits.iter().map(|a| a.violations).sum();
    let ratio = audits.iter().map(|a| a.max_ratio).fold(0.0, f64::max);
    let surplus = audits.iter().map(|a| a.max_surplus).max().unwrap_or(0);
    (violations, ratio, surplus)
}

/// 30 unweighted graphs: n in {50, 100, 200} times p_edge in {0.05, 0.2, 0.5}.
fn unweighted_corpus() -> Vec<(Graph, u64)> {
    (0..30)
        .map(|i| {
            let n = [50, 100, 200][i % 3];
            let p = [0.05, 0.2, 0.5][(i / 3) % 3];
            let seed = 1000 + i as u64;
            (gen_gnp(n, p, 1, seed), seed)
        })
        .collect()
}

/// 20 weighted graphs with n <= 150 and w_max <= 100.
fn weighted_corpus() -> Vec<(Graph, u64)> {
    (0..20)
        .map(|i| {
            let n = [60, 90, 120, 150][i % 4];
            let p = [0.04, 0.1, 0.25, 0.5, 0.15][i / 4];
            let w = [100, 10][i % 2];
            let seed = 2000 + i as u64;
            (gen_gnp(n, p, w, seed), seed)
        })
        .collect()
}

/// 20 sparse weighted graphs with m close to 3n and n <= 300.
fn sparse_corpus() -> Vec<(Graph, u64)> {
    (0..20)
        .map(|i| {
            let n = [100, 150, 200, 250, 300][i % 5];
            let seed = 3000 + i as u64;
            (
                gen_gnp(n, 6.0 / (n - 1) as f64, [100, 1, 1000, 20][i / 5], seed),
                seed,
            )
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut audits = Vec::new();
    for (g, seed) in unweighted_corpus() {
        let m = two_approx_apsp(&g, TWO_APPROX_R, seed).expect("unweighted input");
        audits.push(audit(&exact_apsp(&g), &m, Stretch::from_ints(2, 0)).unwrap());
        record_levels(&g, TWO_APPROX_R, "two-approx");
    }
    let secs = start.elapsed().as_secs_f64();
    let (violations, ratio, _) = summarize(&audits);
    outcome(
        violations == 0 && secs < 60.0,
        format!(
            "30 graphs, {violations} violations, max ratio {ratio:.3}, {secs:.1} s (limit 60 s)"
        ),
    )
}

fn criterion_2() -> Outcome {
    let before = invocations();
    let mut audits = Vec::new();
    for (g, seed) in unweighted_corpus() {
        let m = two_approx_combinatorial(&g, seed).expect("unweighted input");
        audits.push(audit(&exact_apsp(&g), &m, Stretch::from_ints(2, 0)).unwrap());
        record_levels(&g, COMBINATORIAL_R, "combinatorial");
    }
    let calls = invocations() - before;
    let (violations, ratio, _) = summarize(&audits);
    outcome(
        violations == 0 && calls == 0,
        format!("30 graphs, {violations} violations, max ratio {ratio:.3}, min-plus calls {calls}"),
    )
}

fn criterion_3() -> Outcome {
    let corpus = unweighted_corpus();
    let exact: Vec<EstimateMatrix> = corpus.iter().map(|(g, _)| exact_apsp(g)).collect();
    let mut audits = Vec::new();
    for k in [2usize, 4, 6, 8] {
        for eps in [Rational::new(1, 10), Rational::new(1, 2)] {
            for ((g, _), d) in corpus.iter().zip(&exact) {
                let m = near_additive_apsp(g, k, eps, None).expect("valid parameters");
                let stretch = Stretch::new(
                    Rational::from_integer(1) + eps,
                    Rational::from_integer(k as u64),
                );
                audits.push(audit(d, &m, stretch).unwrap());
            }
        }
    }
    let (violations, _, surplus) = summarize(&audits);
    outcome(
        violations == 0,
        format!(
            "{} runs, {violations} violations, max surplus over d {surplus}",
            audits.len()
        ),
    )
}

/// Some shortest path runs entirely inside `B(u) ∪ B(v)`, with bunches
/// derived from exact distances and the pivot set alone.
fn exact_bunches(d: &EstimateMatrix, sources: &[usize]) -> Vec<Vec<bool>> {
    let n = d.n();
    (0..n)
        .map(|u| {
            let (mut ds, mut pivot) = (INF, None);
            for &s in sources {
                if d.get(u, s) < ds {
                    ds = d.get(u, s);
                    pivot = Some(s);
                }
            }
            (0..n)
                .map(|v| d.get(u, v) < ds || pivot == Some(v))
                .collect()
        })
        .collect()
}

fn path_inside(
    g: &Graph,
    d: &EstimateMatrix,
    allowed: impl Fn(usize) -> bool,
    u: usize,
    v: usize,
) -> bool {
    let duv = d.get(u, v);
    if !is_finite(duv) || !allowed(u) {
        return false;
    }
    // vertices on shortest u-v paths, in order of distance from u
    let mut on: Vec<usize> = (0..g.n())
        .filter(|&x| allowed(x) && d.get(u, x) + d.get(x, v) == duv)
        .collect();
    on.sort_by_key(|&x| d.get(u, x));
    let mut reach = vec![false; g.n()];
    reach[u] = true;
    for &x in &on {
        if !reach[x] {
            continue;
        }
        for (y, w) in g.neighbors(x) {
            if allowed(y) && d.get(u, x) + w == d.get(u, y) && d.get(u, y) + d.get(y, v) == duv {
                reach[y] = true;
            }
        }
    }
    reach[v]
}

fn criterion_4() -> Outcome {
    let mut audits = Vec::new();
    let (mut checked, mut inexact) = (0usize, 0usize);
    for (g, seed) in weighted_corpus() {
        let d = exact_apsp(&g);
        for p in [0.2, 0.4] {
            let bs = compute_bunches(&g, p, seed);
            record_bunches(&bs, "dense");
            let inside = (g.n() <= 120).then(|| exact_bunches(&d, &bs.sources));
            for eps in [Rational::from_integer(0), Rational::new(1, 4)] {
                let m = dense_apsp_with(&g, &bs, eps);
                let stretch = Stretch::multiplicative(Rational::from_integer(2) + eps);
                audits.push(audit(&d, &m, stretch).unwrap());
                if let Some(b) = &inside {
                    for u in 0..g.n() {
                        for v in 0..g.n() {
                            if u != v && path_inside(&g, &d, |x| b[u][x] || b[v][x], u, v) {
                                checked += 1;
                                inexact += (m.get(u, v) != d.get(u, v)) as usize;
                            }
                        }
                    }
                }
            }
        }
    }
    let (violations, ratio, _) = summarize(&audits);
    outcome(
        violations == 0 && inexact == 0 && checked > 0,
        format!(
            "{} runs, {violations} violations, max ratio {ratio:.3}; adjacent-case pairs {checked}, inexact {inexact}",
            audits.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut audits = Vec::new();
    let mut per_n: Vec<(usize, u64)> = Vec::new();
    for (g, seed) in sparse_corpus() {
        let n = g.n();
        let o = build_oracle_2(&g, default_rate_2(n), seed);
        record_bunches(o.bunches(), "oracle-2");
        audits.push(audit_with(
            &exact_apsp(&g),
            Stretch::from_ints(2, 0),
            |u, v| o.query(u, v),
        ));
        let mut trace = QueryTrace::default();
        for u in 0..n {
            for v in 0..n {
                o.query_traced(u, v, &mut trace);
            }
        }
        per_n.push((n, trace.max_lookups));
    }
    let cost = |n| {
        let c: Vec<u64> = per_n.iter().filter(|e| e.0 == n).map(|e| e.1).collect();
        (c.iter().min().copied(), c.iter().max().copied())
    };
    let (c100, c300) = (cost(100), cost(300));
    let constant = c100.0.is_some() && c100.0 == c100.1 && c100 == c300;
    let (violations, ratio, _) = summarize(&audits);
    outcome(
        violations == 0 && constant,
        format!(
            "20 graphs, {violations} violations, max ratio {ratio:.3}; lookups per query n=100: {:?}, n=300: {:?}",
            c100.1, c300.1
        ),
    )
}

/// Per source, the least possible heaviest edge over shortest paths.
fn min_max_edge(g: &Graph, src: usize) -> Vec<u64> {
    let mut best = vec![(INF, INF); g.n()];
    best[src] = (0, 0);
    let mut heap = BinaryHeap::from([Reverse((0u64, 0u64, src))]);
    while let Some(Reverse((d, w, u))) = heap.pop() {
        if (d, w) > best[u] {
            continue;
        }
        for (v, wv) in g.neighbors(u) {
            let label = (sat_add(d, wv), w.max(wv));
            if label < best[v] {
                best[v] = label;
                heap.push(Reverse((label.0, label.1, v)));
            }
        }
    }
    best.into_iter().map(|(_, w)| w).collect()
}

fn criterion_6() -> Outcome {
    let mut audits = Vec::new();
    for (g, seed) in sparse_corpus() {
        let n = g.n();
        let w: Vec<Vec<u64>> = (0..n).map(|s| min_max_edge(&g, s)).collect();
        let o = build_oracle_2w(&g, default_rate_2w(n, g.m(), RateChoice::Time), seed);
        record_bunches(o.bunches(), "oracle-2w");
        audits.push(audit_with_extra(
            &exact_apsp(&g),
            2,
            |u, v| w[u][v],
            |u, v| o.query(u, v),
        ));
    }
    let (violations, _, surplus) = summarize(&audits);
    outcome(
        violations == 0,
        format!("20 graphs, {violations} violations, max est - d {surplus}"),
    )
}

fn criterion_7() -> Outcome {
    let mut audits = Vec::new();
    let (mut bunch_pairs, mut inexact) = (0usize, 0usize);
    for (g, seed) in weighted_corpus() {
        let d = exact_apsp(&g);
        for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let h = build_r_hierarchy(&g, r, seed);
            record_size(
                h.within_bounds() && h.cluster_bounds_ok && h.attempts <= 21,
                || {
                    format!(
                        "r-hierarchy r = {r}: level sizes {:?}",
                        h.levels.iter().map(Vec::len).collect::<Vec<_>>()
                    )
                },
            );
            let m = bk_apsp_with(&g, &h, Rational::from_integer(0));
            audits.push(audit(&d, &m, Stretch::from_ints(2, 0)).unwrap());
            let b = exact_bunches(&d, &h.levels[h.k]);
            for u in 0..g.n() {
                for v in 0..g.n() {
                    if b[u][v] {
                        bunch_pairs += 1;
                        inexact += (m.get(u, v) != d.get(u, v)) as usize;
                    }
                }
            }
        }
    }
    let (violations, ratio, _) = summarize(&audits);
    outcome(
        violations == 0 && inexact == 0,
        format!(
            "{} runs, {violations} violations, max ratio {ratio:.3}; bunch pairs {bunch_pairs}, inexact {inexact}",
            audits.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let epsilons = [
        Rational::new(1, 10),
        Rational::new(1, 4),
        Rational::from_integer(1),
    ];
    let (mut violations, mut worst) = (0usize, 0f64);
    for t in 0..200 {
        let (r, c, q) = (
            rng.random_range(1..=16),
            rng.random_range(1..=16),
            rng.random_range(1..=16),
        );
        let w: u64 = rng.random_range(1..=10_000);
        let mut random = |rows, cols| {
            let data = (0..rows * cols)
                .map(|_| {
                    if rng.random_bool(0.1) {
                        INF
                    } else {
                        rng.random_range(0..=w)
                    }
                })
                .collect();
            MinPlusMatrix::new(rows, cols, data).unwrap()
        };
        let (a, b) = (random(r, c), random(c, q));
        let eps = epsilons[t % 3];
        let approx = approx_minplus(&a, &b, eps, &NaiveBackend).unwrap();
        for i in 0..r {
            for j in 0..q {
                let exact = (0..c)
                    .map(|k| sat_add(a.get(i, k), b.get(k, j)))
                    .min()
                    .unwrap();
                let x = approx.get(i, j);
                let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
                let ok = if is_finite(exact) {
                    x >= exact && x as u128 * den <= (den + num) * exact as u128
                } else {
                    !is_finite(x)
                };
                if !ok {
                    violations += 1;
                }
                if is_finite(exact) && exact > 0 {
                    worst = worst.max(x as f64 / exact as f64 - 1.0);
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("200 instances, {violations} violations, max relative error {worst:.4}"),
    )
}

fn criterion_9() -> Outcome {
    SIZES.with(|s| {
        let s = s.borrow();
        let mut detail = format!(
            "{} size checks over the runs above, {} failures",
            s.checks,
            s.failures.len()
        );
        if let Some(first) = s.failures.first() {
            detail.push_str(&format!(" (first: {first})"));
        }
        outcome(s.failures.is_empty() && s.checks > 0, detail)
    })
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    for n in [500, 1000, 2000] {
        let g = gen_gnp(n, 6.0 / (n - 1) as f64, 100, 10_000 + n as u64);
        let start = Instant::now();
        let o = build_oracle_2(&g, default_rate_2(n), 1);
        let secs = start.elapsed().as_secs_f64();
        parts.push(format!(
            "n={n} m={} {secs:.3}s {}KiB",
            g.m(),
            o.size_bytes() / 1024
        ));
    }
    outcome(true, format!("reported only: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("unweighted 2-approximation", criterion_1),
        ("combinatorial 2-approximation", criterion_2),
        ("near-additive (1+eps, k)", criterion_3),
        ("weighted (2+eps) dense", criterion_4),
        ("sparse 2-oracle", criterion_5),
        ("(2, W) oracle", criterion_6),
        ("parameterized hierarchy", criterion_7),
        ("approximate min-plus", criterion_8),
        ("structural size bounds", criterion_9),
        ("oracle preprocessing scaling", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let status = if result.ok { "PASS" } else { "FAIL" };
        failed += !result.ok as usize;
        println!(
            "criterion {:>2} {status} {name}: {} [{:.1}s]",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
