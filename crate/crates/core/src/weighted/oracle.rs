// SPDX-License-Identifier: Apache-2.0

//! Constant-time query oracles.
//!
//! Both oracles store exact distances from the pivot set `S` to all of `V`
//! plus a sparse pair table. [`DistanceOracle2`] keeps the adjacent table
//! and answers within `2d`; [`DistanceOracle2W`] keeps the smaller overlap
//! table `min { d(u, w) + d(w, v) : w ∈ B(u) ∩ B(v) }` and answers within
//! `2d + W(u, v)`, where `W(u, v)` is the heaviest edge on a shortest path.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rayon::prelude::*;

use super::{adjacent_via_edges, mssp, PairTable};
use crate::bunches::{compute_bunches, BunchStructure};
use crate::dist::{sat_add, Rational, Stretch, INF};
use crate::error::{Error, Result};
use crate::graph::Graph;

const ORACLE_MAGIC: &[u8; 8] = b"APSPORCL";
const ORACLE_VERSION: u32 = 1;
const KIND_2: u8 = 2;
const KIND_2W: u8 = 3;

/// Table lookups performed by instrumented queries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub queries: u64,
    pub lookups: u64,
    /// Largest lookup count of a single query.
    pub max_lookups: u64,
}

impl QueryTrace {
    fn record(&mut self, lookups: u64) {
        self.queries += 1;
        self.lookups += lookups;
        self.max_lookups = self.max_lookups.max(lookups);
    }
}

/// Sampling rate for the `(2, 0)` oracle: `n^(-1/3)`.
pub fn default_rate_2(n: usize) -> f64 {
    clamp_rate((n.max(1) as f64).powf(-1.0 / 3.0), n)
}

/// How the `(2, W)` oracle picks its sampling rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RateChoice {
    /// `m^(-1/3)` for `m <= n^(3/2)`, `n^(-1/2)` otherwise.
    #[default]
    Time,
    /// `n^(-1/3)`.
    Space,
}

pub fn default_rate_2w(n: usize, m: usize, choice: RateChoice) -> f64 {
    let nf = n.max(1) as f64;
    let p = match choice {
        RateChoice::Space => nf.powf(-1.0 / 3.0),
        RateChoice::Time if (m as f64) <= nf.powf(1.5) => (m.max(1) as f64).powf(-1.0 / 3.0),
        RateChoice::Time => nf.powf(-0.5),
    };
    clamp_rate(p, n)
}

/// The three values a query takes the minimum of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidates {
    pub table: u64,
    /// `d(u, p(u)) + d(p(u), v)`, `INF` when `u` has no pivot.
    pub via_pivot_u: u64,
    pub via_pivot_v: u64,
}

impl Candidates {
    pub fn best(&self) -> u64 {
        self.table.min(self.via_pivot_u).min(self.via_pivot_v)
    }
}

fn clamp_rate(p: f64, n: usize) -> f64 {
    p.clamp(1.0 / n.max(1) as f64, 1.0)
}

/// Pivot set distances and one pair table.
#[derive(Clone, Debug, PartialEq)]
struct Core {
    bs: BunchStructure,
    /// Row of each pivot in `rows`, `u32::MAX` for non-pivots.
    index: Vec<u32>,
    /// `|S| × n`, row-major.
    rows: Vec<u64>,
    table: PairTable,
}

impl Core {
    fn new(g: &Graph, bs: BunchStructure, table: PairTable) -> Self {
        let n = g.n();
        let rows = mssp(g, &bs.sources, Rational::from_integer(0)).concat();
        Core {
            index: source_index(n, &bs.sources),
            bs,
            rows,
            table,
        }
    }

    fn query(&self, u: usize, v: usize, trace: Option<&mut QueryTrace>) -> u64 {
        if u == v {
            if let Some(t) = trace {
                t.record(0);
            }
            return 0;
        }
        let n = self.bs.n();
        let mut lookups = 0;
        let mut best = self.table.get(u, v);
        lookups += 1;
        for (a, b) in [(u, v), (v, u)] {
            let p = self.bs.pivots.pivot[a];
            lookups += 1;
            if let Some(p) = p {
                let row = self.index[p as usize] as usize;
                let cand = sat_add(self.bs.pivot_dist(a), self.rows[row * n + b]);
                lookups += 3;
                best = best.min(cand);
            }
        }
        if let Some(t) = trace {
            t.record(lookups);
        }
        best
    }

    fn explain(&self, u: usize, v: usize) -> Candidates {
        if u == v {
            return Candidates {
                table: 0,
                via_pivot_u: 0,
                via_pivot_v: 0,
            };
        }
        let n = self.bs.n();
        let via = |a: usize, b: usize| match self.bs.pivots.pivot[a] {
            Some(p) => sat_add(
                self.bs.pivot_dist(a),
                self.rows[self.index[p as usize] as usize * n + b],
            ),
            None => INF,
        };
        Candidates {
            table: self.table.get(u, v),
            via_pivot_u: via(u, v),
            via_pivot_v: via(v, u),
        }
    }

    fn write(&self, out: &mut impl Write, kind: u8, eps: Rational) -> Result<()> {
        out.write_all(ORACLE_MAGIC)?;
        out.write_u32::<LittleEndian>(ORACLE_VERSION)?;
        out.write_u8(kind)?;
        out.write_u64::<LittleEndian>(*eps.numer())?;
        out.write_u64::<LittleEndian>(*eps.denom())?;
        self.bs.write_to(out)?;
        for &x in &self.rows {
            out.write_u64::<LittleEndian>(x)?;
        }
        let entries = self.table.sorted_entries();
        out.write_u64::<LittleEndian>(entries.len() as u64)?;
        for (u, v, d) in entries {
            out.write_u32::<LittleEndian>(u)?;
            out.write_u32::<LittleEndian>(v)?;
            out.write_u64::<LittleEndian>(d)?;
        }
        Ok(())
    }

    fn read(input: &mut impl Read, want_kind: u8) -> Result<(Self, Rational)> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != ORACLE_MAGIC {
            return Err(Error::Format("not an oracle file (bad magic)".into()));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != ORACLE_VERSION {
            return Err(Error::Format(format!(
                "oracle version {version}, expected {ORACLE_VERSION}"
            )));
        }
        let kind = input.read_u8()?;
        if kind != want_kind {
            return Err(Error::Format(format!(
                "oracle kind {kind}, expected {want_kind}"
            )));
        }
        let num = input.read_u64::<LittleEndian>()?;
        let den = input.read_u64::<LittleEndian>()?;
        if den == 0 {
            return Err(Error::Format("zero denominator".into()));
        }
        let bs = BunchStructure::read_from(input)?;
        let n = bs.n();
        let mut rows = vec![0u64; bs.sources.len() * n];
        input.read_u64_into::<LittleEndian>(&mut rows)?;
        let count = input.read_u64::<LittleEndian>()? as usize;
        let mut entries = Vec::with_capacity(count.min(1 << 24));
        for _ in 0..count {
            let u = input.read_u32::<LittleEndian>()?;
            let v = input.read_u32::<LittleEndian>()?;
            let d = input.read_u64::<LittleEndian>()?;
            if u >= v || v as usize >= n {
                return Err(Error::Format("bad pair table entry".into()));
            }
            entries.push((u, v, d));
        }
        if bs.sources.iter().any(|&s| s >= n) {
            return Err(Error::Format("pivot out of range".into()));
        }
        let core = Core {
            index: source_index(n, &bs.sources),
            bs,
            rows,
            table: PairTable::from_entries(entries),
        };
        Ok((core, Rational::new(num, den)))
    }

    fn size_bytes(&self) -> usize {
        8 + 4 + 1 + 16 + self.bs.size_bytes() + 8 * self.rows.len() + 8 + 16 * self.table.len()
    }
}

fn source_index(n: usize, sources: &[usize]) -> Vec<u32> {
    let mut index = vec![u32::MAX; n];
    for (i, &s) in sources.iter().enumerate() {
        index[s] = i as u32;
    }
    index
}

/// `(2, 0)` oracle: pivot paths plus the adjacent table.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceOracle2 {
    core: Core,
    pub eps: Rational,
}

pub fn build_oracle_2(g: &Graph, p: f64, seed: u64) -> DistanceOracle2 {
    let bs = compute_bunches(g, p, seed);
    let table = adjacent_via_edges(g, &bs);
    DistanceOracle2 {
        core: Core::new(g, bs, table),
        eps: Rational::from_integer(0),
    }
}

pub fn query_oracle_2(o: &DistanceOracle2, u: usize, v: usize) -> u64 {
    o.query(u, v)
}

impl DistanceOracle2 {
    pub fn n(&self) -> usize {
        self.core.bs.n()
    }

    pub fn bunches(&self) -> &BunchStructure {
        &self.core.bs
    }

    pub fn adjacent(&self) -> &PairTable {
        &self.core.table
    }

    pub fn contract(&self) -> Stretch {
        Stretch::multiplicative(Rational::from_integer(2) + self.eps)
    }

    pub fn query(&self, u: usize, v: usize) -> u64 {
        self.core.query(u, v, None)
    }

    pub fn query_traced(&self, u: usize, v: usize, trace: &mut QueryTrace) -> u64 {
        self.core.query(u, v, Some(trace))
    }

    pub fn explain(&self, u: usize, v: usize) -> Candidates {
        self.core.explain(u, v)
    }

    pub fn size_bytes(&self) -> usize {
        self.core.size_bytes()
    }

    pub fn write_to(&self, out: &mut impl Write) -> Result<()> {
        self.core.write(out, KIND_2, self.eps)
    }

    pub fn read_from(input: &mut impl Read) -> Result<Self> {
        let (core, eps) = Core::read(input, KIND_2)?;
        Ok(DistanceOracle2 { core, eps })
    }
}

/// `(2, W)` oracle: pivot paths plus the overlap table.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceOracle2W {
    core: Core,
}

pub fn build_oracle_2w(g: &Graph, p: f64, seed: u64) -> DistanceOracle2W {
    let bs = compute_bunches(g, p, seed);
    let table = overlap_table(&bs);
    DistanceOracle2W {
        core: Core::new(g, bs, table),
    }
}

/// `min { d(u, w) + d(w, v) : w ∈ B(u), v ∈ C(w) }` for every pair it
/// reaches.
pub fn overlap_table(bs: &BunchStructure) -> PairTable {
    (0..bs.n())
        .into_par_iter()
        .fold(PairTable::default, |mut table, u| {
            for (w, dw) in bs.bunch(u) {
                for (v, dv) in bs.cluster(w) {
                    if v != u {
                        table.offer(u, v, sat_add(dw, dv));
                    }
                }
            }
            table
        })
        .reduce(PairTable::default, PairTable::merge)
}

impl DistanceOracle2W {
    pub fn n(&self) -> usize {
        self.core.bs.n()
    }

    pub fn bunches(&self) -> &BunchStructure {
        &self.core.bs
    }

    pub fn overlap(&self) -> &PairTable {
        &self.core.table
    }

    pub fn query(&self, u: usize, v: usize) -> u64 {
        self.core.query(u, v, None)
    }

    pub fn query_traced(&self, u: usize, v: usize, trace: &mut QueryTrace) -> u64 {
        self.core.query(u, v, Some(trace))
    }

    pub fn explain(&self, u: usize, v: usize) -> Candidates {
        self.core.explain(u, v)
    }

    pub fn size_bytes(&self) -> usize {
        self.core.size_bytes()
    }

    pub fn write_to(&self, out: &mut impl Write) -> Result<()> {
        self.core.write(out, KIND_2W, Rational::from_integer(0))
    }

    pub fn read_from(input: &mut impl Read) -> Result<Self> {
        let (core, _) = Core::read(input, KIND_2W)?;
        Ok(DistanceOracle2W { core })
    }
}
