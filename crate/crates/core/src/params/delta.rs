use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::helpers::{exact_div, helper, Helper};
use crate::error::ParamsError;
use crate::exec::Exec;
use crate::word::Word;

/// Largest `k` the brute-force oracle enumerates without an override.
pub const BRUTE_FORCE_MAX_K: u32 = 14;

/// Tight bounds on the truncation error for a `k`-column cut.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBounds {
    pub k: u32,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub lo: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub hi: BigInt,
}

fn check_k(k: u32) -> Result<(), ParamsError> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(ParamsError::InvalidTruncation(k));
    }
    Ok(())
}

/// `(-1)^(k/2)`.
fn parity_sign(k: u32) -> i64 {
    if (k / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Closed-form extremes of `delta`.
pub fn delta_bounds(k: u32) -> Result<DeltaBounds, ParamsError> {
    check_k(k)?;
    let s = parity_sign(k);
    let p = BigInt::one() << k;
    let kk = i64::from(k);
    let hi = exact_div(&p * (10 * kk - 5 * s - 1) + 5 + s, 25);
    let lo = -exact_div(&p * (10 * kk + 5 * s - 1) - 5 + s, 25);
    Ok(DeltaBounds { k, lo, hi })
}

/// `delta` from the low `k` bits of each operand (raw patterns).
pub fn delta_from_low_bits(a: u128, b: u128, k: u32) -> i128 {
    let da = low_digits(a, k);
    let db = low_digits(b, k);
    triangle_sum(&da, &db)
}

fn low_digits(bits: u128, k: u32) -> Vec<i8> {
    Word::from_bits(bits, k)
        .and_then(|w| w.booth_digits())
        .expect("k is even and >= 2")
        .iter()
        .map(|d| d.value())
        .collect()
}

fn triangle_sum(da: &[i8], db: &[i8]) -> i128 {
    let half = da.len();
    let mut total = 0i128;
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        // sum_{j < half - i} 4^j B_j(b), then scale by 4^i B_i(a)
        let inner: i128 = db[..half - i]
            .iter()
            .enumerate()
            .map(|(j, &y)| i128::from(y) << (2 * j))
            .sum();
        total += (i128::from(x) * inner) << (2 * i);
    }
    total
}

/// Exhaustive extremes of `delta` with the lexicographically first operand
/// pairs attaining them (raw low-`k`-bit patterns, `a` major).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteBounds {
    pub k: u32,
    pub lo: i128,
    pub hi: i128,
    pub argmin: (u64, u64),
    pub argmax: (u64, u64),
}

impl BruteBounds {
    fn merge(self, other: BruteBounds) -> BruteBounds {
        let (lo, argmin) = if (other.lo, other.argmin) < (self.lo, self.argmin) {
            (other.lo, other.argmin)
        } else {
            (self.lo, self.argmin)
        };
        // ties on the maximum keep the lexicographically smaller pair
        let (hi, argmax) = if other.hi > self.hi || (other.hi == self.hi && other.argmax < self.argmax) {
            (other.hi, other.argmax)
        } else {
            (self.hi, self.argmax)
        };
        BruteBounds { k: self.k, lo, hi, argmin, argmax }
    }
}

/// Enumerates all `2^(2k)` low-bit operand pairs. Refuses `k` above
/// [`BRUTE_FORCE_MAX_K`] unless `force` is set.
pub fn delta_bounds_brute(k: u32, force: bool, exec: Exec) -> Result<BruteBounds, ParamsError> {
    check_k(k)?;
    if k > BRUTE_FORCE_MAX_K && !force {
        return Err(ParamsError::CostGuard { cases_log2: 2 * k });
    }
    let size = 1u64 << k;
    let digits: Vec<Vec<i8>> = (0..size).map(|v| low_digits(u128::from(v), k)).collect();
    let identity = || BruteBounds {
        k,
        lo: i128::MAX,
        hi: i128::MIN,
        argmin: (u64::MAX, u64::MAX),
        argmax: (u64::MAX, u64::MAX),
    };
    let result = exec.map_reduce(
        size,
        |a| {
            let mut local = identity();
            let da = &digits[a as usize];
            for (b, db) in digits.iter().enumerate() {
                let d = triangle_sum(da, db);
                let b = b as u64;
                if d < local.lo {
                    local.lo = d;
                    local.argmin = (a, b);
                }
                if d > local.hi {
                    local.hi = d;
                    local.argmax = (a, b);
                }
            }
            local
        },
        identity,
        BruteBounds::merge,
    );
    Ok(result)
}

/// Which extreme a pattern attains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternRole {
    Max,
    Min,
    /// Non-extremal comparison pattern (all-ones, alternating, zero).
    Reference,
}

/// How the predicted `delta` of a pattern is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternFormula {
    /// `4 Y_{k/4} - X_{k/4}`, `k/2` even.
    FourYMinusX,
    /// `Z_{(k+2)/4} - 4 W_{(k-2)/4}`, `k/2` odd.
    ZMinusFourWOdd,
    /// `Z_{k/4} - 4 W_{k/4}`, `k/2` even.
    ZMinusFourW,
    /// `-X_{(k+2)/4} + 4 Y_{(k-2)/4}`, `k/2` odd.
    FourYMinusXOdd,
    /// `1`.
    OnesOnes,
    /// `(2^k + 2) / 3`.
    OnesAlternating10,
    /// `-(2^k - 1) / 3`.
    OnesAlternating01,
    /// `0`.
    Zeros,
    /// Direct evaluation; used for the alternating-by-alternating rows.
    Evaluated,
}

/// Low-`k`-bit operand patterns (MSB first) with their predicted `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstCasePattern {
    pub k: u32,
    pub a_pattern: String,
    pub b_pattern: String,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub predicted: BigInt,
    pub role: PatternRole,
    pub formula: PatternFormula,
}

impl WorstCasePattern {
    pub fn a_bits(&self) -> u128 {
        u128::from_str_radix(&self.a_pattern, 2).expect("binary pattern")
    }

    pub fn b_bits(&self) -> u128 {
        u128::from_str_radix(&self.b_pattern, 2).expect("binary pattern")
    }

    pub fn is_extremal(&self) -> bool {
        self.role != PatternRole::Reference
    }
}

fn repeat(unit: &str, k: u32) -> String {
    unit.chars().cycle().take(k as usize).collect()
}

/// Extremal patterns for the parity of `k/2`, followed by the non-extremal
/// reference patterns.
pub fn worst_case_patterns(k: u32) -> Result<Vec<WorstCasePattern>, ParamsError> {
    check_k(k)?;
    let pat = |a: String, b: String, predicted: BigInt, role, formula| WorstCasePattern {
        k,
        a_pattern: a,
        b_pattern: b,
        predicted,
        role,
        formula,
    };
    let h = helper;
    let mut out = Vec::new();
    if (k / 2).is_multiple_of(2) {
        let m = k / 4;
        out.push(pat(
            repeat("1001", k),
            repeat("0110", k),
            h(Helper::Y, m) * 4 - h(Helper::X, m),
            PatternRole::Max,
            PatternFormula::FourYMinusX,
        ));
        out.push(pat(
            repeat("0110", k),
            repeat("0110", k),
            h(Helper::Z, m) - h(Helper::W, m) * 4,
            PatternRole::Min,
            PatternFormula::ZMinusFourW,
        ));
    } else {
        let (up, down) = ((k + 2) / 4, (k - 2) / 4);
        out.push(pat(
            repeat("1001", k),
            repeat("1001", k),
            h(Helper::Z, up) - h(Helper::W, down) * 4,
            PatternRole::Max,
            PatternFormula::ZMinusFourWOdd,
        ));
        out.push(pat(
            repeat("1001", k),
            repeat("0110", k),
            h(Helper::Y, down) * 4 - h(Helper::X, up),
            PatternRole::Min,
            PatternFormula::FourYMinusXOdd,
        ));
    }

    let p = BigInt::one() << k;
    let ones = repeat("1", k);
    let alt10 = repeat("10", k);
    let alt01 = repeat("01", k);
    out.push(pat(ones.clone(), ones.clone(), BigInt::one(), PatternRole::Reference, PatternFormula::OnesOnes));
    out.push(pat(
        ones.clone(),
        alt10.clone(),
        exact_div(&p + 2u32, 3),
        PatternRole::Reference,
        PatternFormula::OnesAlternating10,
    ));
    out.push(pat(
        ones,
        alt01.clone(),
        -exact_div(&p - 1u32, 3),
        PatternRole::Reference,
        PatternFormula::OnesAlternating01,
    ));
    for (a, b) in [(&alt10, &alt10), (&alt10, &alt01), (&alt01, &alt01)] {
        let a_bits = u128::from_str_radix(a, 2).expect("binary");
        let b_bits = u128::from_str_radix(b, 2).expect("binary");
        let value = BigInt::from(delta_from_low_bits(a_bits, b_bits, k));
        out.push(pat(a.clone(), b.clone(), value, PatternRole::Reference, PatternFormula::Evaluated));
    }
    let zeros = repeat("0", k);
    out.push(pat(zeros.clone(), zeros, BigInt::from(0), PatternRole::Reference, PatternFormula::Zeros));
    Ok(out)
}
