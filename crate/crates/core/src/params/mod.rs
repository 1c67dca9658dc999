//! Truncation error bounds and the faithful-rounding parameter solver.
//!
//! All arithmetic is exact. The truncation error `delta` satisfies
//! `lo <= delta <= hi` (see [`delta_bounds`]); a constant `C` (a multiple of
//! `2^k`) yields faithful rounding iff `hi - 2^k < C < lo + 2^n`.

mod delta;
mod helpers;

pub use delta::{
    delta_bounds, delta_bounds_brute, delta_from_low_bits, worst_case_patterns, BruteBounds,
    DeltaBounds, PatternFormula, PatternRole, WorstCasePattern, BRUTE_FORCE_MAX_K,
};
pub use helpers::{helper, helper_constructive, Helper};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::error::ParamsError;

/// Why a `(n, k, C)` triple is not a faithful scheme.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("width {0} is odd")]
    OddWidth(u32),
    #[error("truncation depth {0} is odd")]
    OddTruncation(u32),
    #[error("truncation depth {0} is below 2")]
    TruncationTooSmall(u32),
    #[error("truncation depth {k} is not below width {n}")]
    TruncationNotBelowWidth { n: u32, k: u32 },
    #[error("constant {c} is not a multiple of 2^{k}")]
    NotMultiple { c: BigInt, k: u32 },
    #[error("no constant is faithful for n={n}, k={k}")]
    Infeasible { n: u32, k: u32 },
    #[error("constant {c} is below the minimum {cmin} (C* >= {cstar_min})")]
    BelowMinimum {
        c: BigInt,
        cmin: BigInt,
        cstar_min: BigInt,
    },
    #[error("constant {c} is above the maximum {cmax} (C* <= {cstar_max})")]
    AboveMaximum {
        c: BigInt,
        cmax: BigInt,
        cstar_max: BigInt,
    },
}

/// Largest even `k < n` with `k <= 5 * 2^(n-k-2)`.
pub fn k_star(n: u32) -> Result<u32, ParamsError> {
    if n < 4 {
        return Err(ParamsError::WidthTooSmall(n));
    }
    let fits = |k: u32| {
        let e = i64::from(n) - i64::from(k) - 2;
        if e >= 0 {
            // k <= 5 * 2^e; for e >= 32 this always holds since k < n < 2^32
            e >= 32 || u64::from(k) <= 5u64 << e
        } else {
            (u64::from(k) << (-e)) <= 5
        }
    };
    Ok((2..n)
        .step_by(2)
        .filter(|&k| fits(k))
        .max()
        .expect("k = 2 fits for every n >= 4"))
}

/// Valid compensation constants for `(n, k)`, as absolute values and as
/// multiples of `2^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CRange {
    pub n: u32,
    pub k: u32,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub cmin: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub cmax: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub cstar_min: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub cstar_max: BigInt,
}

impl CRange {
    pub fn contains(&self, c: &BigInt) -> bool {
        &self.cmin <= c && c <= &self.cmax
    }

    /// Every admissible `C*` (may be large for shallow truncations).
    pub fn cstars(&self) -> impl Iterator<Item = BigInt> + '_ {
        num_iter_range(&self.cstar_min, &self.cstar_max)
    }
}

fn num_iter_range<'a>(lo: &'a BigInt, hi: &'a BigInt) -> impl Iterator<Item = BigInt> + 'a {
    let mut next = lo.clone();
    std::iter::from_fn(move || {
        if &next > hi {
            return None;
        }
        let out = next.clone();
        next += 1;
        Some(out)
    })
}

fn check_nk(n: u32, k: u32) -> Result<(), ParamsError> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(ParamsError::InvalidTruncation(k));
    }
    if k >= n {
        return Err(ParamsError::TruncationNotBelowWidth { n, k });
    }
    Ok(())
}

/// Multiples of `2^k` strictly inside `(hi - 2^k, lo + 2^n)`.
pub fn c_range(n: u32, k: u32) -> Result<CRange, ParamsError> {
    check_nk(n, k)?;
    let bounds = delta_bounds(k)?;
    let step = BigInt::one() << k;
    let top = BigInt::one() << n;
    // m * 2^k > hi - 2^k  <=>  m >= floor(hi / 2^k)
    let cstar_min = bounds.hi.div_floor(&step);
    // m * 2^k < lo + 2^n  <=>  m <= ceil((lo + 2^n) / 2^k) - 1
    let cstar_max = (bounds.lo + top).div_ceil(&step) - 1;
    if cstar_min > cstar_max {
        return Err(ParamsError::NoValidConstant { n, k });
    }
    Ok(CRange {
        n,
        k,
        cmin: &cstar_min * &step,
        cmax: &cstar_max * &step,
        cstar_min,
        cstar_max,
    })
}

/// Whether some valid constant exists, via the floor/ceiling inequality
/// `floor((2k - s)/5) + ceil((2k + s)/5) < 2^(n-k)` with `s = (-1)^(k/2)`.
pub fn truncation_feasible(n: u32, k: u32) -> Result<bool, ParamsError> {
    check_nk(n, k)?;
    let s: i64 = if (k / 2).is_multiple_of(2) { 1 } else { -1 };
    let k2 = 2 * i64::from(k);
    let lhs = (k2 - s).div_euclid(5) - (-(k2 + s)).div_euclid(5);
    Ok(BigInt::from(lhs) < (BigInt::one() << (n - k)))
}

/// The closed-form rational `C*` bounds
/// `(2k - 5 - s)/5 <= C* <= (5 * 2^(n-k) - 2k - s)/5`, `s = (-1)^(k/2)`.
///
/// Advisory only: [`c_range`] is authoritative. The lower bound here is not
/// strict, so at `n = 4` it admits `C* = 0`, which is not faithful.
pub fn c_star_closed(n: u32, k: u32) -> Result<(BigRational, BigRational), ParamsError> {
    check_nk(n, k)?;
    let s = if (k / 2).is_multiple_of(2) { 1 } else { -1 };
    let kk = BigInt::from(k);
    let lo = BigRational::new(&kk * 2 - 5 - s, BigInt::from(5));
    let hi = BigRational::new((BigInt::one() << (n - k)) * 5 - &kk * 2 - s, BigInt::from(5));
    Ok((lo, hi))
}

/// Integer hull `[ceil(lo), floor(hi)]` of a rational interval.
pub fn integer_hull(lo: &BigRational, hi: &BigRational) -> (BigInt, BigInt) {
    (lo.ceil().to_integer(), hi.floor().to_integer())
}

/// Accepts `(n, k, C)` iff `n` and `k` are even, `2 <= k < n`, `C` is a
/// multiple of `2^k` and `hi - 2^k < C < lo + 2^n`.
pub fn validate_scheme(n: u32, k: u32, c: &BigInt) -> Result<(), Rejection> {
    if !n.is_multiple_of(2) {
        return Err(Rejection::OddWidth(n));
    }
    if !k.is_multiple_of(2) {
        return Err(Rejection::OddTruncation(k));
    }
    if k < 2 {
        return Err(Rejection::TruncationTooSmall(k));
    }
    if k >= n {
        return Err(Rejection::TruncationNotBelowWidth { n, k });
    }
    let step = BigInt::one() << k;
    if !c.mod_floor(&step).is_zero() {
        return Err(Rejection::NotMultiple { c: c.clone(), k });
    }
    let range = c_range(n, k).map_err(|_| Rejection::Infeasible { n, k })?;
    if c < &range.cmin {
        return Err(Rejection::BelowMinimum {
            c: c.clone(),
            cmin: range.cmin,
            cstar_min: range.cstar_min,
        });
    }
    if c > &range.cmax {
        return Err(Rejection::AboveMaximum {
            c: c.clone(),
            cmax: range.cmax,
            cstar_max: range.cstar_max,
        });
    }
    Ok(())
}

/// One row of the optimal-parameter table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamRow {
    pub n: u32,
    pub k_star: u32,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub c_star_min: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub c_star_max: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub delta_lo: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub delta_hi: BigInt,
}

/// Optimal truncation and constant range for width `n`.
pub fn param_row(n: u32) -> Result<ParamRow, ParamsError> {
    let k = k_star(n)?;
    let range = c_range(n, k)?;
    let bounds = delta_bounds(k)?;
    Ok(ParamRow {
        n,
        k_star: k,
        c_star_min: range.cstar_min,
        c_star_max: range.cstar_max,
        delta_lo: bounds.lo,
        delta_hi: bounds.hi,
    })
}

/// `ParamRow` for each width, failing on the first invalid one.
pub fn sweep(widths: &[u32]) -> Result<Vec<ParamRow>, ParamsError> {
    widths.iter().map(|&n| param_row(n)).collect()
}
