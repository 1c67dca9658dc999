use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// The four hexadecimal-summation helpers used to express extremal `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Helper {
    X,
    Y,
    Z,
    W,
}

impl Helper {
    pub const ALL: [Helper; 4] = [Helper::X, Helper::Y, Helper::Z, Helper::W];
}

/// `num / den`, asserting the division is exact.
pub(crate) fn exact_div(num: BigInt, den: i64) -> BigInt {
    let (q, r) = num.div_rem(&BigInt::from(den));
    assert!(r.is_zero(), "{num} is not divisible by {den}");
    q
}

fn pow16(m: u32) -> BigInt {
    BigInt::one() << (4 * m)
}

/// Closed form of the helper at `m` digits. All four are zero at `m = 0`.
pub fn helper(kind: Helper, m: u32) -> BigInt {
    let p = pow16(m);
    let m = BigInt::from(m);
    let (scale, slope, intercept) = match kind {
        Helper::X => (2, 60, 49),
        Helper::Y => (2, 60, 19),
        Helper::Z => (4, 30, 17),
        Helper::W => (8, 15, 1),
    };
    let inner = p * (m * slope - intercept) + intercept;
    exact_div(inner * scale, 225)
}

/// The helper built directly from its rows of repeated hex digits:
/// `X` is one row of `2`s over two copies of each shifted row of `4`s,
/// `Y = X + 44..4`, `Z = Y - 22..2` and `W = Z + 44..4`.
pub fn helper_constructive(kind: Helper, m: u32) -> BigInt {
    if m == 0 {
        return BigInt::zero();
    }
    let p = pow16(m);
    let repunit = |digit: i64| exact_div((&p - 1u32) * digit, 15);
    let shifted_fours: BigInt = (1..m)
        .map(|i| exact_div((&p - pow16(i)) * 4, 15))
        .sum();
    let x = repunit(2) + shifted_fours * 2;
    match kind {
        Helper::X => x,
        Helper::Y => x + repunit(4),
        Helper::Z => x + repunit(4) - repunit(2),
        Helper::W => x + repunit(4) * 2 - repunit(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(helper(Helper::X, 1), BigInt::from(2));
        assert_eq!(helper(Helper::Y, 1), BigInt::from(6));
        assert_eq!(helper(Helper::Z, 1), BigInt::from(4));
        assert_eq!(helper(Helper::W, 1), BigInt::from(8));
        assert_eq!(helper(Helper::X, 2), BigInt::from(162));
        // 0x22 + 0x40 + 0x40
        assert_eq!(helper_constructive(Helper::X, 2), BigInt::from(0x22 + 0x40 + 0x40));
        assert_eq!(helper(Helper::W, 0), BigInt::zero());
        assert_eq!(
            helper_constructive(Helper::Y, 1) - helper_constructive(Helper::X, 1),
            BigInt::from(4)
        );
    }

    #[test]
    fn closed_forms_match_rows() {
        for m in 0..=16 {
            for kind in Helper::ALL {
                assert_eq!(helper(kind, m), helper_constructive(kind, m), "{kind:?} {m}");
            }
        }
    }

    proptest! {
        #[test]
        fn differences(m in 0u32..40) {
            let x = helper(Helper::X, m);
            let y = helper(Helper::Y, m);
            let z = helper(Helper::Z, m);
            let w = helper(Helper::W, m);
            let fifteenth = exact_div(pow16(m) - 1u32, 15);
            prop_assert_eq!(&y - &x, &fifteenth * 4);
            prop_assert_eq!(&w - &z, &fifteenth * 4);
            prop_assert_eq!(&y - &z, &fifteenth * 2);
        }
    }
}
