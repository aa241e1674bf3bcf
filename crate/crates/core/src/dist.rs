// SPDX-License-Identifier: Apache-2.0

//! Distance arithmetic and stretch contracts.
//!
//! Distances are `u64` with [`INF`] as the unreachable sentinel. Every sum of
//! real distances stays far below the sentinel because edge weights are capped
//! at [`MAX_WEIGHT`], so [`sat_add`] only ever saturates when an operand is
//! already infinite.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Unreachable / unknown distance.
pub const INF: u64 = (1 << 63) - 1;

/// Largest admissible edge weight.
pub const MAX_WEIGHT: u64 = 1 << 40;

/// Exact non-negative rational used for stretch factors and `eps` parameters.
pub type Rational = Ratio<u64>;

#[inline]
pub fn sat_add(a: u64, b: u64) -> u64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

#[inline]
pub fn is_finite(d: u64) -> bool {
    d < INF
}

/// Parses `"3"`, `"1/4"` or a plain decimal such as `"0.25"` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a non-negative rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(bad)?;
        return Ok(Ratio::new(num, den));
    }
    s.parse::<u64>().map(Ratio::from_integer).map_err(|_| bad())
}

pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// An `(mult, add)` approximation contract: `d <= est <= mult * d + add`.
///
/// A pair that is disconnected (`d = INF`) satisfies any contract iff the
/// estimate is also `INF`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stretch {
    pub mult: Rational,
    pub add: Rational,
}

impl Stretch {
    pub const EXACT: Stretch = Stretch {
        mult: Ratio::new_raw(1, 1),
        add: Ratio::new_raw(0, 1),
    };

    pub fn new(mult: Rational, add: Rational) -> Self {
        Stretch { mult, add }
    }

    pub fn multiplicative(mult: Rational) -> Self {
        Stretch::new(mult, Ratio::from_integer(0))
    }

    pub fn additive(add: u64) -> Self {
        Stretch::new(Ratio::from_integer(1), Ratio::from_integer(add))
    }

    pub fn from_ints(mult: u64, add: u64) -> Self {
        Stretch::new(Ratio::from_integer(mult), Ratio::from_integer(add))
    }

    /// Upper bound admitted for a pair at true distance `d`, as an exact
    /// comparison `est <= mult*d + add`.
    pub fn admits(&self, d: u64, est: u64) -> bool {
        if !is_finite(d) {
            return !is_finite(est);
        }
        if !is_finite(est) || est < d {
            return false;
        }
        // est * md * ad <= mn * d * ad + an * md
        let (mn, md) = (*self.mult.numer() as u128, *self.mult.denom() as u128);
        let (an, ad) = (*self.add.numer() as u128, *self.add.denom() as u128);
        let lhs = est as u128 * md * ad;
        let rhs = mn * d as u128 * ad + an * md;
        lhs <= rhs
    }

    /// Loosest contract implied by either of two contracts.
    pub fn max(self, other: Stretch) -> Stretch {
        Stretch::new(self.mult.max(other.mult), self.add.max(other.add))
    }
}

impl fmt::Display for Stretch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.mult, self.add)
    }
}

impl FromStr for Stretch {
    type Err = Error;

    /// `"mult,add"` e.g. `"2,0"` or `"1.1,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let (m, a) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidParameter(format!("expected MULT,ADD: {s:?}")))?;
        Ok(Stretch::new(parse_rational(m)?, parse_rational(a)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_addition() {
        assert_eq!(sat_add(3, 4), 7);
        assert_eq!(sat_add(INF, 0), INF);
        assert_eq!(sat_add(5, INF), INF);
        assert_eq!(sat_add(INF - 1, INF - 1), INF);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_rational("1/3").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_rational("2").unwrap(), Ratio::from_integer(2));
        assert_eq!(parse_rational(".5").unwrap(), Ratio::new(1, 2));
        assert!(parse_rational("-1").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn stretch_admission_is_exact() {
        let s = Stretch::new(Ratio::new(11, 10), Ratio::from_integer(2));
        // 1.1 * 30 + 2 = 35 exactly
        assert!(s.admits(30, 35));
        assert!(!s.admits(30, 36));
        assert!(!s.admits(30, 29));
        assert!(s.admits(INF, INF));
        assert!(!s.admits(INF, 5));
        assert!(!s.admits(5, INF));
        assert!(Stretch::EXACT.admits(0, 0));
    }
}
