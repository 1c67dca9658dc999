//! Booth radix-4 partial-product arrays.
//!
//! The arithmetic here is the double Booth decomposition
//! `a*b = sum_{i,j} 4^(i+j) B_i(a) B_j(b)`: terms with `i + j < k/2` form the
//! truncated part `delta`, everything else is `M`. The commutative truncated
//! array realises `M` bit by bit, so it is symmetric in `a` and `b` by
//! construction.

mod array;
mod expr;
mod program;
mod scheme;

pub use array::{
    build_commutative_truncated_array, build_standard_array, build_truncated_array,
    evaluate_array, height_profile, round_output, ArrayBit, ArrayKind, BitRole, PPArray,
    MAX_MULTIPLIER_WIDTH,
};
pub use expr::{BitExpr, BoothSelect, Operand};
pub use program::{ArrayEvaluator, LANES};
pub use scheme::TruncScheme;

use crate::error::{ArrayError, WordError};
use crate::word::Word;

fn check_pair(a: &Word, b: &Word) -> Result<u32, ArrayError> {
    if a.width() != b.width() {
        return Err(ArrayError::WidthMismatch {
            a: a.width(),
            b: b.width(),
            expected: a.width(),
        });
    }
    if !a.width().is_multiple_of(2) {
        return Err(WordError::OddWidth(a.width()).into());
    }
    Ok(a.width())
}

fn check_truncation(n: u32, k: u32) -> Result<(), ArrayError> {
    if !k.is_multiple_of(2) || k >= n {
        return Err(ArrayError::InvalidTruncation { n, k });
    }
    Ok(())
}

/// Partial products `4^(i+j) * B_i(a) * B_j(b)` of the double Booth expansion,
/// visited in row-major order.
fn for_each_double_booth_term(
    a: &Word,
    b: &Word,
    mut visit: impl FnMut(usize, usize, i128),
) -> Result<(), ArrayError> {
    check_pair(a, b)?;
    let da = a.booth_digits()?;
    let db = b.booth_digits()?;
    for (i, x) in da.iter().enumerate() {
        for (j, y) in db.iter().enumerate() {
            let pp = i128::from(x.value()) * i128::from(y.value());
            visit(i, j, pp << (2 * (i + j)));
        }
    }
    Ok(())
}

/// `sum_{i,j} 4^(i+j) PP_{i,j}` with both operands Booth encoded.
pub fn double_booth_product(a: &Word, b: &Word) -> Result<i128, ArrayError> {
    let mut total = 0i128;
    for_each_double_booth_term(a, b, |_, _, t| total += t)?;
    Ok(total)
}

/// Splits `a*b` into the part `M` kept by a `k`-column truncation and the
/// deleted triangle `delta` made of the terms with `i + j < k/2`.
pub fn split_m_delta(a: &Word, b: &Word, k: u32) -> Result<(i128, i128), ArrayError> {
    let n = check_pair(a, b)?;
    check_truncation(n, k)?;
    let half = (k / 2) as usize;
    let (mut m, mut delta) = (0i128, 0i128);
    for_each_double_booth_term(a, b, |i, j, t| {
        if i + j < half {
            delta += t;
        } else {
            m += t;
        }
    })?;
    Ok((m, delta))
}

/// Symbolic compensation bit `s'_i` for a `k`-column truncation:
/// `nonzero_i & (b[k-2i-1] ^ a[2i+1])`.
///
/// When the Booth digit of row `i` is negative this is `~b[k-2i-1]`, when it
/// is positive it is `b[k-2i-1]`: the bit of `b` just below the cut that the
/// lowest kept b-digit `B_j(b)` reads. For `2i >= k` the b index is negative
/// and the expression degenerates to the ordinary Booth sign bit `s_i`.
pub fn compensation_bit(k: u32, row: u32) -> BitExpr {
    let sel = BoothSelect::for_row(Operand::A, row);
    let below_cut = BitExpr::booth_input(Operand::B, i64::from(k) - 2 * i64::from(row) - 1);
    BitExpr::and(&sel.nonzero(), &BitExpr::xor(&below_cut, &sel.x))
}

/// The `k/2` compensation bits evaluated on concrete operands.
pub fn s_bits(a: &Word, b: &Word, k: u32) -> Result<Vec<bool>, ArrayError> {
    let n = check_pair(a, b)?;
    if k < 2 {
        return Err(ArrayError::InvalidTruncation { n, k });
    }
    check_truncation(n, k)?;
    Ok((0..k / 2)
        .map(|i| compensation_bit(k, i).eval(a, b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_bit_str(s).unwrap()
    }

    #[test]
    fn double_booth_examples() {
        assert_eq!(double_booth_product(&w("0110"), &w("0011")).unwrap(), 18);
        assert_eq!(double_booth_product(&w("1010"), &w("0101")).unwrap(), -30);
    }

    #[test]
    fn double_booth_exhaustive_n8() {
        for x in 0..256u128 {
            for y in 0..256u128 {
                let a = Word::from_bits(x, 8).unwrap();
                let b = Word::from_bits(y, 8).unwrap();
                assert_eq!(
                    double_booth_product(&a, &b).unwrap(),
                    a.signed_value() * b.signed_value()
                );
            }
        }
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let a = Word::new(1, 4).unwrap();
        let b = Word::new(1, 6).unwrap();
        assert!(matches!(
            double_booth_product(&a, &b),
            Err(ArrayError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let a = w("0110");
        let b = w("0011");
        assert_eq!(split_m_delta(&a, &b, 0).unwrap(), (18, 0));
        // PP_{0,0} = B(1,0,0) * B(1,0,0) = 4
        assert_eq!(split_m_delta(&w("0010"), &w("0010"), 2).unwrap().1, 4);
        assert!(split_m_delta(&a, &b, 4).is_err());
        assert!(split_m_delta(&a, &b, 1).is_err());
    }

    #[test]
    fn decomposition_exhaustive_to_ten_bits() {
        for n in [4u32, 6, 8, 10] {
            for k in (0..n).step_by(2) {
                for x in 0..1u128 << n {
                    let a = Word::from_bits(x, n).unwrap();
                    // a full sweep of b at the largest width is slow in
                    // debug builds, so stride it there
                    let step = if n == 10 { 7 } else { 1 };
                    for y in (0..1u128 << n).step_by(step) {
                        let b = Word::from_bits(y, n).unwrap();
                        let (m, d) = split_m_delta(&a, &b, k).unwrap();
                        assert_eq!(m + d, a.signed_value() * b.signed_value());
                    }
                }
            }
        }
    }

    #[test]
    fn s_bit_examples() {
        // a = 0: no row has a[2i+1] = 1 or a nonzero digit
        for y in 0..16u128 {
            let b = Word::from_bits(y, 4).unwrap();
            assert_eq!(s_bits(&w("0000"), &b, 2).unwrap(), vec![false]);
        }
        assert_eq!(s_bits(&w("0010"), &w("0010"), 2).unwrap(), vec![false]);
        assert_eq!(s_bits(&w("0010"), &w("0001"), 2).unwrap(), vec![true]);
        assert!(s_bits(&w("0010"), &w("0001"), 0).is_err());
        assert!(s_bits(&w("0010"), &w("0001"), 4).is_err());
    }

    #[test]
    fn compensation_bit_degenerates_to_sign_bit() {
        for k in [2u32, 4, 6] {
            for row in k / 2..8 {
                let generalised = compensation_bit(k, row);
                let sign = BoothSelect::for_row(Operand::A, row).neg;
                assert!(generalised.equivalent(&sign), "k={k} row={row}");
            }
        }
    }
}
