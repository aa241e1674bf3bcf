// SPDX-License-Identifier: Apache-2.0

//! `apsp`: generate graphs, run the approximation algorithms, build and
//! query distance oracles, and audit estimates against exact distances.
//!
//! Exit status is 0 on success, 1 when an audit finds a violating pair and
//! 2 for usage or input errors.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apsp_core::audit::{audit, audit_with_extra};
use apsp_core::bk::{bk_apsp_with, build_r_hierarchy};
use apsp_core::dist::{is_finite, parse_rational, Rational, Stretch};
use apsp_core::estimate::MATRIX_MAGIC;
use apsp_core::framework::{
    near_additive_apsp, two_approx_apsp, two_approx_combinatorial, TWO_APPROX_R,
};
use apsp_core::graph::write_graph;
use apsp_core::weighted::{
    build_oracle_2, build_oracle_2w, default_rate_2, default_rate_2w, dense_apsp_with, Candidates,
    DistanceOracle2, DistanceOracle2W, RateChoice,
};
use apsp_core::{compute_bunches, exact_apsp, gen_gnp, load_graph, EstimateMatrix, Graph};
use clap::{Args, Parser, Subcommand, ValueEnum};

use apsp_cli::{AuditSummary, RunReport};

#[derive(Parser)]
#[command(name = "apsp", version, about = "Approximate all-pairs shortest paths")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded G(n, p) graph with weights in 1..=wmax.
    Gen(GenArgs),
    /// Compute an all-pairs estimate matrix.
    Apsp(ApspArgs),
    /// Build or query a distance oracle.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Check d <= estimate <= mult*d + add for every pair.
    Verify(VerifyArgs),
    /// Time oracle preprocessing on sparse graphs of growing size.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(short = 'p', long, default_value_t = 0.1)]
    p: f64,
    #[arg(short = 'w', long = "wmax", default_value_t = 1)]
    wmax: u64,
    #[arg(short = 's', long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    TwoApprox,
    TwoApproxComb,
    NearAdditive,
    DenseWeighted,
    Bk,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Bin,
    Text,
}

#[derive(Args)]
struct ApspArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Hierarchy/framework exponent; defaults per algorithm.
    #[arg(long)]
    r: Option<f64>,
    /// Pivot sampling rate for dense-weighted; defaults to n^(-1/3).
    #[arg(long)]
    p: Option<f64>,
    /// Accepts `0.25` or `1/4`.
    #[arg(long, value_parser = rational)]
    eps: Option<Rational>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Also compute exact distances and audit the declared contract.
    #[arg(long)]
    audit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Two,
    TwoW,
}

#[derive(Subcommand)]
enum OracleCmd {
    Build(OracleBuildArgs),
    /// Print the estimate for (u, v) and the candidates it is the minimum of.
    Query(OracleQueryArgs),
}

#[derive(Args)]
struct OracleBuildArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Kind::Two)]
    kind: Kind,
    /// Sampling rate; defaults to the time-balanced rate for the kind.
    #[arg(long)]
    p: Option<f64>,
    /// Use the space-balanced rate n^(-1/3) for two-w.
    #[arg(long)]
    space: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: PathBuf,
    /// Query every pair and audit against exact distances.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct OracleQueryArgs {
    blob: PathBuf,
    u: usize,
    v: usize,
    #[arg(long, value_enum, default_value_t = Kind::Two)]
    kind: Kind,
}

#[derive(Args)]
struct VerifyArgs {
    exact: PathBuf,
    estimate: PathBuf,
    #[arg(long, value_parser = rational, default_value = "1")]
    mult: Rational,
    #[arg(long, value_parser = rational, default_value = "0")]
    add: Rational,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [500, 1000, 2000])]
    sizes: Vec<usize>,
    /// Average degree of the generated graphs, so m is about avg_deg * n / 2.
    #[arg(long, default_value_t = 6.0)]
    avg_deg: f64,
    #[arg(long = "wmax", default_value_t = 100)]
    wmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Violation,
    Usage(String),
}

impl From<apsp_core::Error> for Failure {
    fn from(e: apsp_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Apsp(a) => cmd_apsp(a),
        Cmd::Oracle(OracleCmd::Build(a)) => cmd_oracle_build(a),
        Cmd::Oracle(OracleCmd::Query(a)) => cmd_oracle_query(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `APSP_THREADS` caps the rayon pool; unset or 0 leaves it automatic.
fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var("APSP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("APSP_THREADS must be a count, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn print_report(r: &RunReport) -> CmdResult {
    print!("{r}");
    if r.violations() > 0 {
        return Err(Failure::Violation);
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    if a.n == 0 {
        return Err(usage("-n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(usage("-p must lie in [0, 1]"));
    }
    if a.wmax == 0 || a.wmax > apsp_core::MAX_WEIGHT {
        return Err(usage(format!(
            "-w must lie in 1..={}",
            apsp_core::MAX_WEIGHT
        )));
    }
    let g = gen_gnp(a.n, a.p, a.wmax, a.seed);
    match &a.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_graph(&g, &mut out)?;
            out.flush()?;
        }
        None => write_graph(&g, io::stdout().lock())?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<Graph, Failure> {
    load_graph(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check_rate(p: f64) -> CmdResult {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--p must lie in (0, 1], got {p}")))
    }
}

fn check_r(r: f64) -> CmdResult {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(usage(format!("--r must lie in [0, 1], got {r}")))
    }
}

fn cmd_apsp(a: ApspArgs) -> CmdResult {
    let g = load(&a.graph)?;
    let n = g.n();
    let mut rep = RunReport::new("apsp");
    rep.algorithm = Some(Algo::name(a.algo).into());
    rep.param("n", n);
    rep.param("m", g.m());
    rep.param("seed", a.seed);
    let zero = Rational::from_integer(0);

    let m = match a.algo {
        Algo::Exact => rep
            .time("solve", || exact_apsp(&g))
            .with_contract(Stretch::EXACT),
        Algo::TwoApprox => {
            let r = a.r.unwrap_or(TWO_APPROX_R);
            check_r(r)?;
            rep.param("r", r);
            rep.time("solve", || two_approx_apsp(&g, r, a.seed))?
        }
        Algo::TwoApproxComb => rep.time("solve", || two_approx_combinatorial(&g, a.seed))?,
        Algo::NearAdditive => {
            let eps = a.eps.unwrap_or(Rational::new(1, 2));
            rep.param("k", a.k);
            rep.param("eps", eps);
            if let Some(r) = a.r {
                check_r(r)?;
                rep.param("r", r);
            }
            rep.time("solve", || near_additive_apsp(&g, a.k, eps, a.r))?
        }
        Algo::DenseWeighted => {
            let p = a.p.unwrap_or_else(|| default_rate_2(n));
            check_rate(p)?;
            let eps = a.eps.unwrap_or(zero);
            rep.param("p", p);
            rep.param("eps", eps);
            let bs = rep.time("bunches", || compute_bunches(&g, p, a.seed));
            rep.size("pivots", bs.sources.len());
            rep.size("bunch_entries", bs.bunches.total());
            rep.size("max_bunch", bs.max_bunch());
            rep.size("max_cluster", bs.max_cluster());
            rep.time("solve", || dense_apsp_with(&g, &bs, eps))
        }
        Algo::Bk => {
            let r = a.r.unwrap_or(0.5);
            check_r(r)?;
            let eps = a.eps.unwrap_or(zero);
            rep.param("r", r);
            rep.param("eps", eps);
            let h = rep.time("hierarchy", || build_r_hierarchy(&g, r, a.seed));
            rep.size("levels", h.k);
            rep.size("top_pivots", h.levels[h.k].len());
            rep.size("top_bunch_entries", h.top.bunches.total());
            rep.time("solve", || bk_apsp_with(&g, &h, eps))
        }
    };
    let contract = m.contract.unwrap_or(Stretch::EXACT);
    rep.param("contract", contract);

    if a.audit {
        let d = rep.time("exact", || exact_apsp(&g));
        let result = rep.time("audit", || audit(&d, &m, contract))?;
        rep.audit = Some(AuditSummary::new(contract, &result));
    }
    if let Some(path) = &a.output {
        write_matrix(&m, path, a.format)?;
        rep.output = Some(path.display().to_string());
    }
    print_report(&rep)
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::TwoApprox => "two-approx",
            Algo::TwoApproxComb => "two-approx-comb",
            Algo::NearAdditive => "near-additive",
            Algo::DenseWeighted => "dense-weighted",
            Algo::Bk => "bk",
        }
    }
}

fn write_matrix(m: &EstimateMatrix, path: &Path, format: Format) -> CmdResult {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        Format::Bin => m.write_binary(&mut out)?,
        Format::Text => m.write_text(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Either on-disk form, told apart by the binary magic.
fn read_matrix(path: &Path) -> Result<EstimateMatrix, Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let m = if bytes.starts_with(MATRIX_MAGIC) {
        EstimateMatrix::read_binary(&bytes[..])
    } else {
        EstimateMatrix::read_text(&bytes[..])
    };
    m.map_err(|e| usage(format!("{}: {e}", path.display())))
}

enum Oracle {
    Two(DistanceOracle2),
    TwoW(DistanceOracle2W),
}

impl Oracle {
    fn n(&self) -> usize {
        match self {
            Oracle::Two(o) => o.n(),
            Oracle::TwoW(o) => o.n(),
        }
    }

    fn query(&self, u: usize, v: usize) -> u64 {
        match self {
            Oracle::Two(o) => o.query(u, v),
            Oracle::TwoW(o) => o.query(u, v),
        }
    }

    fn explain(&self, u: usize, v: usize) -> Candidates {
        match self {
            Oracle::Two(o) => o.explain(u, v),
            Oracle::TwoW(o) => o.explain(u, v),
        }
    }
}

fn cmd_oracle_build(a: OracleBuildArgs) -> CmdResult {
    let g = load(&a.graph)?;
    let n = g.n();
    let mut rep = RunReport::new("oracle-build");
    rep.param("n", n);
    rep.param("m", g.m());
    rep.param("seed", a.seed);
    let (kind, p) = match a.kind {
        Kind::Two => ("two", a.p.unwrap_or_else(|| default_rate_2(n))),
        Kind::TwoW => {
            let choice = if a.space {
                RateChoice::Space
            } else {
                RateChoice::Time
            };
            (
                "two-w",
                a.p.unwrap_or_else(|| default_rate_2w(n, g.m(), choice)),
            )
        }
    };
    check_rate(p)?;
    rep.param("kind", kind);
    rep.param("p", p);

    let oracle = rep.time("build", || match a.kind {
        Kind::Two => Oracle::Two(build_oracle_2(&g, p, a.seed)),
        Kind::TwoW => Oracle::TwoW(build_oracle_2w(&g, p, a.seed)),
    });
    let (bs, table, bytes) = match &oracle {
        Oracle::Two(o) => (o.bunches(), o.adjacent().len(), o.size_bytes()),
        Oracle::TwoW(o) => (o.bunches(), o.overlap().len(), o.size_bytes()),
    };
    rep.size("pivots", bs.sources.len());
    rep.size("bunch_entries", bs.bunches.total());
    rep.size("table_entries", table);
    rep.size("bytes", bytes);

    if a.audit {
        let d = rep.time("exact", || exact_apsp(&g));
        // the (2, W) allowance is per pair; the graph's heaviest edge bounds it
        let (contract, extra) = match a.kind {
            Kind::Two => ("(2, 0)".to_string(), 0),
            Kind::TwoW => (format!("(2, {})", g.max_weight()), g.max_weight()),
        };
        let result = rep.time("audit", || {
            audit_with_extra(&d, 2, |_, _| extra, |u, v| oracle.query(u, v))
        });
        rep.audit = Some(AuditSummary::new(contract, &result));
    }

    let mut out = BufWriter::new(File::create(&a.output)?);
    match &oracle {
        Oracle::Two(o) => o.write_to(&mut out)?,
        Oracle::TwoW(o) => o.write_to(&mut out)?,
    }
    out.flush()?;
    rep.output = Some(a.output.display().to_string());
    print_report(&rep)
}

fn cmd_oracle_query(a: OracleQueryArgs) -> CmdResult {
    let mut input = BufReader::new(
        File::open(&a.blob).map_err(|e| usage(format!("{}: {e}", a.blob.display())))?,
    );
    let oracle = match a.kind {
        Kind::Two => Oracle::Two(DistanceOracle2::read_from(&mut input)?),
        Kind::TwoW => Oracle::TwoW(DistanceOracle2W::read_from(&mut input)?),
    };
    let n = oracle.n();
    if a.u >= n || a.v >= n {
        return Err(usage(format!("vertex out of range for n = {n}")));
    }
    let c = oracle.explain(a.u, a.v);
    println!("{}", show(oracle.query(a.u, a.v)));
    println!("table={}", show(c.table));
    println!("via_pivot_u={}", show(c.via_pivot_u));
    println!("via_pivot_v={}", show(c.via_pivot_v));
    Ok(())
}

fn show(d: u64) -> String {
    if is_finite(d) {
        d.to_string()
    } else {
        "inf".into()
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let mut rep = RunReport::new("verify");
    let exact = read_matrix(&a.exact)?;
    let estimate = read_matrix(&a.estimate)?;
    let contract = Stretch::new(a.mult, a.add);
    rep.param("n", exact.n());
    let result = rep.time("audit", || audit(&exact, &estimate, contract))?;
    rep.audit = Some(AuditSummary::new(contract, &result));
    for (u, v, d, est) in &result.examples {
        eprintln!(
            "violation: ({u}, {v}) d = {} estimate = {}",
            show(*d),
            show(*est)
        );
    }
    print_report(&rep)
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let mut rep = RunReport::new("bench");
    rep.param("avg_deg", a.avg_deg);
    rep.param("wmax", a.wmax);
    rep.param("seed", a.seed);
    for &n in &a.sizes {
        if n < 2 {
            return Err(usage("bench sizes must be at least 2"));
        }
        let p = (a.avg_deg / (n - 1) as f64).min(1.0);
        let g = gen_gnp(n, p, a.wmax.max(1), a.seed);
        rep.size(&format!("n{n}.m"), g.m());
        let o2 = rep.time(&format!("n{n}.two_build"), || {
            build_oracle_2(&g, default_rate_2(n), a.seed)
        });
        rep.size(&format!("n{n}.two_bytes"), o2.size_bytes());
        let rate = default_rate_2w(n, g.m(), RateChoice::Time);
        let ow = rep.time(&format!("n{n}.two_w_build"), || {
            build_oracle_2w(&g, rate, a.seed)
        });
        rep.size(&format!("n{n}.two_w_bytes"), ow.size_bytes());
    }
    print_report(&rep)
}
