// SPDX-License-Identifier: Apache-2.0

//! Distance (min-plus) products, exact and `(1 + eps)`-approximate.
//!
//! The approximate product is the scaling reduction to small-integer
//! products: level `l` keeps entries `<= 2^l`, rounds them up to multiples of
//! `2^l / R` and multiplies the resulting integers in `{0, ..., R}` with a
//! [`MulBackend`]. `R` is the least power of two `>= 4 / eps`. Every level
//! only rounds up, so the combined result never underestimates, and the
//! level at which the larger summand of an optimal pair first fits bounds
//! the error by `2 * 2^l / R < eps * (A ⋆ B)[i][j]`.
//!
//! Because `R` is a power of two, level `l` rescales by the integer `2^l / R`
//! when `2^l >= R` and reproduces entries exactly when `2^l <= R`, so all
//! outputs are integers and products with small values are exact.

use std::cell::Cell;

use rayon::prelude::*;

use crate::dist::{is_finite, sat_add, Rational, INF};
use crate::error::{Error, Result};

thread_local! {
    static INVOCATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of distance products started on the current thread.
pub fn invocations() -> u64 {
    INVOCATIONS.with(Cell::get)
}

fn count_invocation() {
    INVOCATIONS.with(|c| c.set(c.get() + 1));
}

/// Rectangular matrix over `{0, ..., W} ∪ {INF}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPlusMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MinPlusMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x.min(INF)).collect();
        Ok(MinPlusMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn filled(rows: usize, cols: usize, value: u64) -> Self {
        MinPlusMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// `0` on the diagonal, `INF` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::filled(n, n, INF);
        for i in 0..n {
            m.set(i, i, 0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::filled(self.cols, self.rows, INF);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Largest finite entry (`W`), at least 1.
    pub fn bound(&self) -> u64 {
        self.data
            .iter()
            .copied()
            .filter(|&x| is_finite(x))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.data
    }
}

/// Multiplies the small-integer level matrices of the scaling reduction.
///
/// Implementations must return exactly the min-plus product of their inputs.
pub trait MulBackend: Sync {
    fn name(&self) -> &str;
    fn multiply(&self, a: &MinPlusMatrix, b: &MinPlusMatrix) -> MinPlusMatrix;
}

/// Cubic min-plus kernel.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveBackend;

impl MulBackend for NaiveBackend {
    fn name(&self) -> &str {
        "naive"
    }

    fn multiply(&self, a: &MinPlusMatrix, b: &MinPlusMatrix) -> MinPlusMatrix {
        naive_product(a, b)
    }
}

fn naive_product(a: &MinPlusMatrix, b: &MinPlusMatrix) -> MinPlusMatrix {
    let (n1, n2, n3) = (a.rows, a.cols, b.cols);
    let mut out = vec![INF; n1 * n3];
    out.par_chunks_mut(n3.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            for k in 0..n2 {
                let aik = a.data[i * n2 + k];
                if !is_finite(aik) {
                    continue;
                }
                for (c, &bkj) in row.iter_mut().zip(&b.data[k * n3..(k + 1) * n3]) {
                    let s = sat_add(aik, bkj);
                    if s < *c {
                        *c = s;
                    }
                }
            }
        });
    MinPlusMatrix {
        rows: n1,
        cols: n3,
        data: out,
    }
}

fn check_dims(a: &MinPlusMatrix, b: &MinPlusMatrix) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// `C[i][j] = min_k A[i][k] + B[k][j]`.
pub fn exact_minplus(a: &MinPlusMatrix, b: &MinPlusMatrix) -> Result<MinPlusMatrix> {
    check_dims(a, b)?;
    count_invocation();
    Ok(naive_product(a, b))
}

/// Resolution `R` for a given `eps`: least power of two `>= 4 / eps`.
pub fn resolution(eps: Rational) -> u64 {
    // 4 / eps = 4 * den / num
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    let need = (4 * den).div_ceil(num);
    (need.max(1) as u64).next_power_of_two()
}

/// Number of scaling levels for entry bound `w`: `ceil(log2 w) + 1`.
pub fn level_count(w: u64) -> u32 {
    let w = w.max(1);
    (u64::BITS - (w - 1).leading_zeros()) + 1
}

/// `(1 + eps)`-approximate distance product.
pub fn approx_minplus(
    a: &MinPlusMatrix,
    b: &MinPlusMatrix,
    eps: Rational,
    backend: &dyn MulBackend,
) -> Result<MinPlusMatrix> {
    check_dims(a, b)?;
    if *eps.numer() == 0 {
        return Err(Error::InvalidParameter(
            "approx_minplus needs eps > 0".into(),
        ));
    }
    count_invocation();
    let r = resolution(eps);
    let w = a.bound().max(b.bound());
    let mut out = MinPlusMatrix::filled(a.rows, b.cols, INF);
    for level in 0..level_count(w) {
        let (ea, eb) = (encode(a, level, r), encode(b, level, r));
        let prod = backend.multiply(&ea, &eb);
        for (o, &p) in out.data.iter_mut().zip(&prod.data) {
            if is_finite(p) {
                let v = decode(p, level, r);
                if v < *o {
                    *o = v;
                }
            }
        }
    }
    Ok(out)
}

/// Entries `<= 2^level` become `ceil(x * R / 2^level)`; larger ones `INF`.
fn encode(m: &MinPlusMatrix, level: u32, r: u64) -> MinPlusMatrix {
    let cap = 1u64 << level;
    let r = r as u128;
    let data = m
        .data
        .iter()
        .map(|&x| {
            if x > cap {
                INF
            } else {
                ((x as u128 * r).div_ceil(cap as u128)) as u64
            }
        })
        .collect();
    MinPlusMatrix {
        rows: m.rows,
        cols: m.cols,
        data,
    }
}

/// Inverse scaling `p * 2^level / R`, exact because both are powers of two
/// and rounding (when `2^level < R`) only occurs upward.
fn decode(p: u64, level: u32, r: u64) -> u64 {
    let scaled = p as u128 * (1u128 << level);
    scaled.div_ceil(r as u128) as u64
}

/// Shortest two-hop paths through a set: `C[u][v] = min_a D[u][a] + D[v][a]`
/// for `D` of shape `n × |S|`. `eps = 0` is exact.
pub fn paths_through_set(
    dist_s: &MinPlusMatrix,
    eps: Rational,
    backend: &dyn MulBackend,
) -> Result<MinPlusMatrix> {
    let t = dist_s.transpose();
    if *eps.numer() == 0 {
        exact_minplus(dist_s, &t)
    } else {
        approx_minplus(dist_s, &t, eps, backend)
    }
}
