use num_bigint::BigInt;

use super::array::MAX_MULTIPLIER_WIDTH;
use crate::error::ArrayError;
use crate::params::{validate_scheme, Rejection};

/// One multiplier instance: width `n`, truncation depth `k` and compensation
/// constant `C = c_star * 2^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncScheme {
    n: u32,
    k: u32,
    c_star: i128,
    validated: bool,
}

impl TruncScheme {
    /// A scheme whose constant lies in the faithful range.
    pub fn new(n: u32, k: u32, c_star: i128) -> Result<Self, ArrayError> {
        let scheme = Self::unvalidated(n, k, c_star)?;
        validate_scheme(n, k, &BigInt::from(scheme.c()))?;
        Ok(Self {
            validated: true,
            ..scheme
        })
    }

    /// A structurally valid scheme whose constant may lie outside the faithful
    /// range. Boundary and mutation experiments need these.
    pub fn unvalidated(n: u32, k: u32, c_star: i128) -> Result<Self, ArrayError> {
        if !n.is_multiple_of(2) {
            return Err(Rejection::OddWidth(n).into());
        }
        if !(4..=MAX_MULTIPLIER_WIDTH).contains(&n) {
            return Err(ArrayError::UnsupportedWidth(n));
        }
        if !k.is_multiple_of(2) {
            return Err(Rejection::OddTruncation(k).into());
        }
        if k < 2 {
            return Err(Rejection::TruncationTooSmall(k).into());
        }
        if k >= n {
            return Err(Rejection::TruncationNotBelowWidth { n, k }.into());
        }
        if c_star.checked_mul(1i128 << k).is_none() {
            return Err(ArrayError::InvalidTruncation { n, k });
        }
        Ok(Self {
            n,
            k,
            c_star,
            validated: false,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c_star(&self) -> i128 {
        self.c_star
    }

    /// `C = c_star * 2^k`.
    pub fn c(&self) -> i128 {
        self.c_star << self.k
    }

    /// Whether the constant was checked against the faithful range.
    pub fn is_validated(&self) -> bool {
        self.validated
    }
}
