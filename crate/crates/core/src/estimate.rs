// SPDX-License-Identifier: Apache-2.0

//! Dense `n × n` distance-estimate tables and their on-disk formats.
//!
//! Binary: the 8-byte magic `APSPESTM`, `n` as `u64`, then `n²` row-major
//! `u64` values, all little-endian; `INF` is stored as `2^63 - 1`.
//! Text: one `u v value` line per ordered pair, `inf` for `INF`.

use std::io::{BufRead, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rayon::prelude::*;

use crate::dist::{is_finite, Stretch, INF};
use crate::error::{Error, Result};

pub const MATRIX_MAGIC: &[u8; 8] = b"APSPESTM";

/// Text output is refused above this size.
pub const TEXT_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateMatrix {
    n: usize,
    data: Vec<u64>,
    /// Declared `(mult, add)` guarantee; `None` for matrices read from disk.
    pub contract: Option<Stretch>,
}

impl EstimateMatrix {
    /// All `INF` except a zero diagonal.
    pub fn unknown(n: usize) -> Self {
        let mut data = vec![INF; n * n];
        for u in 0..n {
            data[u * n + u] = 0;
        }
        EstimateMatrix {
            n,
            data,
            contract: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, contract: Option<Stretch>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "rows must be square");
            data.extend(row);
        }
        EstimateMatrix { n, data, contract }
    }

    pub fn from_vec(n: usize, data: Vec<u64>, contract: Option<Stretch>) -> Self {
        assert_eq!(data.len(), n * n);
        EstimateMatrix { n, data, contract }
    }

    pub fn with_contract(mut self, contract: Stretch) -> Self {
        self.contract = Some(contract);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.data[u * self.n + v]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, d: u64) {
        self.data[u * self.n + v] = d;
    }

    /// Lowers both `(u, v)` and `(v, u)` to `d` if smaller.
    #[inline]
    pub fn lower_sym(&mut self, u: usize, v: usize, d: u64) {
        let n = self.n;
        if d < self.data[u * n + v] {
            self.data[u * n + v] = d;
        }
        if d < self.data[v * n + u] {
            self.data[v * n + u] = d;
        }
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, u64> {
        self.data.chunks_mut(self.n.max(1))
    }

    pub fn par_rows_mut(&mut self) -> rayon::slice::ChunksMut<'_, u64> {
        self.data.par_chunks_mut(self.n.max(1))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    /// Entrywise minimum with `other`, in place.
    pub fn min_assign(&mut self, other: &EstimateMatrix) {
        assert_eq!(self.n, other.n);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b < *a {
                *a = b;
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.get(u, v) == self.get(v, u)))
    }

    pub fn write_binary(&self, mut out: impl Write) -> Result<()> {
        out.write_all(MATRIX_MAGIC)?;
        out.write_u64::<LittleEndian>(self.n as u64)?;
        for &d in &self.data {
            out.write_u64::<LittleEndian>(d.min(INF))?;
        }
        Ok(())
    }

    pub fn read_binary(mut input: impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MATRIX_MAGIC {
            return Err(Error::Format("not an estimate matrix (bad magic)".into()));
        }
        let n = input.read_u64::<LittleEndian>()? as usize;
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| Error::Format(format!("matrix dimension {n} overflows")))?;
        let mut data = Vec::with_capacity(cells.min(1 << 26));
        for _ in 0..cells {
            data.push(input.read_u64::<LittleEndian>()?.min(INF));
        }
        Ok(EstimateMatrix {
            n,
            data,
            contract: None,
        })
    }

    pub fn write_text(&self, mut out: impl Write) -> Result<()> {
        if self.n > TEXT_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "text output refused for n = {} > {TEXT_LIMIT}; use binary",
                self.n
            )));
        }
        writeln!(out, "{}", self.n)?;
        for u in 0..self.n {
            for v in 0..self.n {
                let d = self.get(u, v);
                if is_finite(d) {
                    writeln!(out, "{u} {v} {d}")?;
                } else {
                    writeln!(out, "{u} {v} inf")?;
                }
            }
        }
        Ok(())
    }

    /// Reads the text form; pairs not listed stay `INF` (diagonal 0).
    pub fn read_text(input: impl BufRead) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let n: usize = loop {
            let (i, line) = lines
                .next()
                .ok_or_else(|| Error::parse(1, "missing size line"))?;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            break line
                .trim()
                .parse()
                .map_err(|_| Error::parse(i + 1, "malformed size line"))?;
        };
        let mut m = EstimateMatrix::unknown(n);
        for (i, line) in lines {
            let line = line?;
            let mut it = line.split_whitespace();
            let (Some(u), Some(v), Some(d), None) = (it.next(), it.next(), it.next(), it.next())
            else {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(i + 1, "expected `u v value`"));
            };
            let bad = || Error::parse(i + 1, "malformed triple");
            let u: usize = u.parse().map_err(|_| bad())?;
            let v: usize = v.parse().map_err(|_| bad())?;
            if u >= n || v >= n {
                return Err(Error::parse(i + 1, "vertex id out of range"));
            }
            let d = if d == "inf" {
                INF
            } else {
                d.parse::<u64>().map_err(|_| bad())?.min(INF)
            };
            m.set(u, v, d);
        }
        Ok(m)
    }
}
