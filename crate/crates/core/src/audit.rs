// SPDX-License-Identifier: Apache-2.0

//! Pairwise stretch audits of an estimate against exact distances.

use crate::dist::{is_finite, Stretch};
use crate::error::{Error, Result};
use crate::estimate::EstimateMatrix;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StretchAudit {
    /// Ordered pairs `(u, v)` with `u != v` that were checked.
    pub pairs: u64,
    /// Largest `est / d` over pairs with finite positive `d`.
    pub max_ratio: f64,
    /// Largest `est - d` over finite pairs.
    pub max_surplus: u64,
    /// Pairs violating `d <= est <= mult*d + add`.
    pub violations: u64,
    /// First few violating pairs as `(u, v, d, est)`.
    pub examples: Vec<(usize, usize, u64, u64)>,
}

impl StretchAudit {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, u: usize, v: usize, d: u64, est: u64, stretch: &Stretch) {
        self.pairs += 1;
        if is_finite(d) && is_finite(est) && est >= d {
            self.max_surplus = self.max_surplus.max(est - d);
            if d > 0 {
                self.max_ratio = self.max_ratio.max(est as f64 / d as f64);
            }
        }
        if !stretch.admits(d, est) {
            self.violations += 1;
            if self.examples.len() < 8 {
                self.examples.push((u, v, d, est));
            }
        }
    }
}

pub fn audit(
    exact: &EstimateMatrix,
    estimate: &EstimateMatrix,
    stretch: Stretch,
) -> Result<StretchAudit> {
    if exact.n() != estimate.n() {
        return Err(Error::DimensionMismatch(format!(
            "exact has n = {}, estimate has n = {}",
            exact.n(),
            estimate.n()
        )));
    }
    Ok(audit_with(exact, stretch, |u, v| estimate.get(u, v)))
}

/// Audits an estimate given as a query function, e.g. a distance oracle.
pub fn audit_with(
    exact: &EstimateMatrix,
    stretch: Stretch,
    mut query: impl FnMut(usize, usize) -> u64,
) -> StretchAudit {
    let mut out = StretchAudit::default();
    for u in 0..exact.n() {
        for v in 0..exact.n() {
            if u != v {
                out.record(u, v, exact.get(u, v), query(u, v), &stretch);
            }
        }
    }
    out
}

/// Audits against a per-pair additive allowance: `d <= est <= mult*d + extra(u, v)`.
pub fn audit_with_extra(
    exact: &EstimateMatrix,
    mult: u64,
    mut extra: impl FnMut(usize, usize) -> u64,
    mut query: impl FnMut(usize, usize) -> u64,
) -> StretchAudit {
    let mut out = StretchAudit::default();
    for u in 0..exact.n() {
        for v in 0..exact.n() {
            if u != v {
                let stretch = Stretch::from_ints(mult, extra(u, v));
                out.record(u, v, exact.get(u, v), query(u, v), &stretch);
            }
        }
    }
    out
}
