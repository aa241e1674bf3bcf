// SPDX-License-Identifier: Apache-2.0

//! Pivot sets, bunches and clusters.
//!
//! For a pivot set `S`, the bunch of `u` is `{v : d(u, v) < d(u, S)}` together
//! with the pivot `p(u)`, and the cluster of `v` is `{u : v ∈ B(u)}`. Clusters
//! are grown directly (a truncated Dijkstra from every non-pivot vertex) and
//! bunches are obtained by inverting them.
//!
//! Sampling `S` at rate `p` bounds bunches by `O(log n / p)` with high
//! probability but says nothing on its own about a single cluster. Instead of
//! the deterministic refinement that forces both bounds at once,
//! [`compute_bunches`] resamples with the next seed whenever a size bound
//! fails, up to [`BunchParams::max_retries`] times.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{grow_cluster, Graph, Pivots};
use crate::rng::{seeded_rng, stream};

const BUNCH_MAGIC: &[u8; 8] = b"APSPBNCH";
const BUNCH_VERSION: u32 = 1;

/// Size constants for the retry loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BunchParams {
    /// Bunches and clusters must stay within `c_b * ln n / p`.
    pub c_b: f64,
    /// The pivot set must stay within `c_s * p * n * ln n`.
    pub c_s: f64,
    pub max_retries: usize,
}

impl Default for BunchParams {
    fn default() -> Self {
        BunchParams {
            c_b: 4.0,
            c_s: 4.0,
            max_retries: 20,
        }
    }
}

/// `max(1, ln n)`; the log factor used by every size bound.
pub fn log_factor(n: usize) -> f64 {
    (n.max(1) as f64).ln().max(1.0)
}

/// Compressed per-vertex lists of `(vertex, distance)` sorted by vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLists {
    offsets: Vec<usize>,
    entries: Vec<(u32, u64)>,
}

impl VertexLists {
    fn from_lists(lists: Vec<Vec<(usize, u64)>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut entries = Vec::new();
        for mut list in lists {
            list.sort_unstable();
            entries.extend(list.into_iter().map(|(v, d)| (v as u32, d)));
            offsets.push(entries.len());
        }
        VertexLists { offsets, entries }
    }

    #[inline]
    pub fn of(&self, u: usize) -> impl ExactSizeIterator<Item = (usize, u64)> + '_ {
        self.entries[self.offsets[u]..self.offsets[u + 1]]
            .iter()
            .map(|&(v, d)| (v as usize, d))
    }

    #[inline]
    pub fn len_of(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Stored distance for `v` in the list of `u`.
    pub fn find(&self, u: usize, v: usize) -> Option<u64> {
        let list = &self.entries[self.offsets[u]..self.offsets[u + 1]];
        list.binary_search_by_key(&(v as u32), |e| e.0)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn max_len(&self) -> usize {
        self.offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    fn write(&self, out: &mut impl Write) -> Result<()> {
        for &o in &self.offsets {
            out.write_u64::<LittleEndian>(o as u64)?;
        }
        for &(v, d) in &self.entries {
            out.write_u32::<LittleEndian>(v)?;
            out.write_u64::<LittleEndian>(d)?;
        }
        Ok(())
    }

    fn read(input: &mut impl Read, n: usize) -> Result<Self> {
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(input.read_u64::<LittleEndian>()? as usize);
        }
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("non-monotone list offsets".into()));
        }
        let total = offsets[n];
        let mut entries = Vec::with_capacity(total.min(1 << 24));
        for _ in 0..total {
            let v = input.read_u32::<LittleEndian>()?;
            if v as usize >= n {
                return Err(Error::Format("list entry out of range".into()));
            }
            entries.push((v, input.read_u64::<LittleEndian>()?));
        }
        Ok(VertexLists { offsets, entries })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BunchStructure {
    n: usize,
    /// Sampling rate the pivot set was drawn at.
    pub p: f64,
    /// Sorted pivot set.
    pub sources: Vec<usize>,
    pub pivots: Pivots,
    pub bunches: VertexLists,
    pub clusters: VertexLists,
    /// Number of samples drawn, including the accepted one.
    pub attempts: usize,
}

impl BunchStructure {
    /// Bunches and clusters for a given pivot set.
    pub fn from_sources(g: &Graph, sources: &[usize], p: f64) -> Self {
        let n = g.n();
        let mut sources = sources.to_vec();
        sources.sort_unstable();
        sources.dedup();
        let pivots = Pivots::compute(g, &sources);

        let mut clusters: Vec<Vec<(usize, u64)>> = (0..n)
            .into_par_iter()
            .map(|w| grow_cluster(g, w, &pivots.dist))
            .collect();
        // the pivot belongs to every bunch it serves
        for u in 0..n {
            if let Some(p) = pivots.of(u) {
                clusters[p].push((u, pivots.dist[u]));
            }
        }
        let mut bunches: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (w, cluster) in clusters.iter().enumerate() {
            for &(u, d) in cluster {
                bunches[u].push((w, d));
            }
        }
        BunchStructure {
            n,
            p,
            sources,
            pivots,
            bunches: VertexLists::from_lists(bunches),
            clusters: VertexLists::from_lists(clusters),
            attempts: 1,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pivot(&self, u: usize) -> Option<usize> {
        self.pivots.of(u)
    }

    /// `d(u, S)`, `INF` when no pivot is reachable.
    #[inline]
    pub fn pivot_dist(&self, u: usize) -> u64 {
        self.pivots.dist[u]
    }

    #[inline]
    pub fn bunch(&self, u: usize) -> impl ExactSizeIterator<Item = (usize, u64)> + '_ {
        self.bunches.of(u)
    }

    #[inline]
    pub fn cluster(&self, v: usize) -> impl ExactSizeIterator<Item = (usize, u64)> + '_ {
        self.clusters.of(v)
    }

    /// `d(u, v)` if `v ∈ B(u)`.
    pub fn in_bunch(&self, u: usize, v: usize) -> Option<u64> {
        self.bunches.find(u, v)
    }

    pub fn max_bunch(&self) -> usize {
        self.bunches.max_len()
    }

    pub fn max_cluster(&self) -> usize {
        self.clusters.max_len()
    }

    pub fn bunch_bound(&self, params: &BunchParams) -> f64 {
        params.c_b * log_factor(self.n) / self.p
    }

    pub fn source_bound(&self, params: &BunchParams) -> f64 {
        params.c_s * self.p * self.n as f64 * log_factor(self.n)
    }

    pub fn within_bounds(&self, params: &BunchParams) -> bool {
        let b = self.bunch_bound(params);
        self.sources.len() as f64 <= self.source_bound(params)
            && self.max_bunch() as f64 <= b
            && self.max_cluster() as f64 <= b
    }

    /// Serialized size in bytes.
    pub fn size_bytes(&self) -> usize {
        let lists = |l: &VertexLists| 8 * l.offsets.len() + 12 * l.entries.len();
        8 + 4
            + 8
            + 8
            + 8
            + 8 * self.sources.len()
            + 12 * self.n
            + lists(&self.bunches)
            + lists(&self.clusters)
    }

    /// Versioned binary blob: header, `S`, pivot array, bunch and cluster
    /// lists in CSR form. All integers little-endian.
    pub fn write_to(&self, out: &mut impl Write) -> Result<()> {
        out.write_all(BUNCH_MAGIC)?;
        out.write_u32::<LittleEndian>(BUNCH_VERSION)?;
        out.write_u64::<LittleEndian>(self.n as u64)?;
        out.write_f64::<LittleEndian>(self.p)?;
        out.write_u64::<LittleEndian>(self.sources.len() as u64)?;
        for &s in &self.sources {
            out.write_u64::<LittleEndian>(s as u64)?;
        }
        for u in 0..self.n {
            out.write_u32::<LittleEndian>(self.pivots.pivot[u].unwrap_or(u32::MAX))?;
            out.write_u64::<LittleEndian>(self.pivots.dist[u])?;
        }
        self.bunches.write(out)?;
        self.clusters.write(out)
    }

    pub fn read_from(input: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != BUNCH_MAGIC {
            return Err(Error::Format("not a bunch structure (bad magic)".into()));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != BUNCH_VERSION {
            return Err(Error::Format(format!(
                "bunch structure version {version}, expected {BUNCH_VERSION}"
            )));
        }
        let n = input.read_u64::<LittleEndian>()? as usize;
        let p = input.read_f64::<LittleEndian>()?;
        let k = input.read_u64::<LittleEndian>()? as usize;
        if k > n {
            return Err(Error::Format("pivot set larger than n".into()));
        }
        let mut sources = Vec::with_capacity(k);
        for _ in 0..k {
            sources.push(input.read_u64::<LittleEndian>()? as usize);
        }
        let mut pivot = Vec::with_capacity(n);
        let mut dist = Vec::with_capacity(n);
        for _ in 0..n {
            let p = input.read_u32::<LittleEndian>()?;
            pivot.push((p != u32::MAX).then_some(p));
            dist.push(input.read_u64::<LittleEndian>()?);
        }
        let bunches = VertexLists::read(input, n)?;
        let clusters = VertexLists::read(input, n)?;
        Ok(BunchStructure {
            n,
            p,
            sources,
            pivots: Pivots { pivot, dist },
            bunches,
            clusters,
            attempts: 1,
        })
    }
}

/// Samples every vertex into `S` independently with probability `p`.
pub fn sample_sources(n: usize, p: f64, seed: u64) -> Vec<usize> {
    let mut rng = seeded_rng(seed, stream::BUNCH_SAMPLE);
    let p = p.clamp(0.0, 1.0);
    (0..n).filter(|_| rng.random_bool(p)).collect()
}

/// Pivot set sampled at rate `p` with its bunches and clusters, resampling
/// with seeds `seed + 1, seed + 2, ...` until the size bounds hold.
///
/// If the retry budget runs out the last sample is returned anyway: every
/// consumer stays correct for any pivot set, only slower. Callers that gate
/// on sizes check [`BunchStructure::within_bounds`].
pub fn compute_bunches(g: &Graph, p: f64, seed: u64) -> BunchStructure {
    compute_bunches_with(g, p, seed, &BunchParams::default())
}

pub fn compute_bunches_with(g: &Graph, p: f64, seed: u64, params: &BunchParams) -> BunchStructure {
    let n = g.n().max(1);
    let p = p.clamp(1.0 / n as f64, 1.0);
    let mut attempt = 0;
    loop {
        let sources = sample_sources(g.n(), p, seed.wrapping_add(attempt as u64));
        let mut bs = BunchStructure::from_sources(g, &sources, p);
        bs.attempts = attempt + 1;
        if bs.within_bounds(params) || attempt >= params.max_retries {
            return bs;
        }
        attempt += 1;
    }
}
