use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::expr::{BitExpr, BoothSelect, Operand};
use super::{compensation_bit, TruncScheme};
use crate::error::ArrayError;
use crate::word::Word;

/// Multiplier widths above this do not fit a 128-bit product.
pub const MAX_MULTIPLIER_WIDTH: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrayKind {
    /// Full Booth array, evaluates to `a*b`.
    Standard,
    /// Standard array with the low `k` columns removed plus `C`; not commutative.
    Truncated,
    /// Truncated array plus the `k/2` compensation bits; evaluates to `M + C`.
    CommutativeTruncated,
}

/// Where a bit in the array came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BitRole {
    /// Bit of the selected multiple `(+-1 | +-2) * b`, possibly inverted.
    Product { row: u32 },
    /// Complemented row sign bit (sign-extension prevention).
    SignComplement { row: u32 },
    /// The `+1` completing the two's complement of a negative row.
    Negate { row: u32 },
    /// Compensation bit `s'_i`, always in column `k`.
    Compensation { row: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayBit {
    pub expr: BitExpr,
    pub role: BitRole,
}

/// Weight-indexed columns of single-bit expressions plus a hardwired constant.
///
/// The array value is `sum_w 2^w * (set bits in column w) + offset`. `offset`
/// is the exact (possibly negative) sum of all hardwired constants: the
/// sign-extension prevention terms and the compensation constant `C`. Its
/// materialised bit pattern is [`PPArray::constant_bits`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPArray {
    n: u32,
    k: u32,
    kind: ArrayKind,
    columns: Vec<Vec<ArrayBit>>,
    offset: i128,
}

impl PPArray {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    /// Exact sum of the hardwired constants.
    pub fn offset(&self) -> i128 {
        self.offset
    }

    /// `offset mod 2^(2n)`: the constant ones a circuit actually wires in.
    pub fn constant_bits(&self) -> u128 {
        let width = 2 * self.n;
        let wrapped = self.offset as u128;
        if width >= 128 {
            wrapped
        } else {
            wrapped & ((1u128 << width) - 1)
        }
    }

    /// Column at `weight`; empty below `k` and above `2n - 1`.
    pub fn column(&self, weight: u32) -> &[ArrayBit] {
        self.columns
            .get(weight as usize)
            .map_or(&[][..], Vec::as_slice)
    }

    /// `(weight, bit)` for every symbolic bit, LSB column first.
    pub fn bits(&self) -> impl Iterator<Item = (u32, &ArrayBit)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(w, col)| col.iter().map(move |bit| (w as u32, bit)))
    }

    pub fn bit_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Number of compensation bits currently in the array.
    pub fn compensation_bits(&self) -> usize {
        self.bits()
            .filter(|(_, b)| matches!(b.role, BitRole::Compensation { .. }))
            .count()
    }

    /// Copy with the compensation bit of `row` deleted. Used as a mutation
    /// control: the result should no longer be commutative.
    pub fn without_compensation_bit(&self, row: u32) -> PPArray {
        let mut out = self.clone();
        for col in &mut out.columns {
            col.retain(|b| b.role != BitRole::Compensation { row });
        }
        out
    }

    fn push(&mut self, weight: u32, expr: BitExpr, role: BitRole) {
        if weight < self.k || weight >= 2 * self.n {
            return;
        }
        match expr {
            BitExpr::Const(false) => {}
            BitExpr::Const(true) => self.offset += 1i128 << weight,
            expr => self.columns[weight as usize].push(ArrayBit { expr, role }),
        }
    }
}

fn check_width(n: u32) -> Result<(), ArrayError> {
    if !n.is_multiple_of(2) || !(4..=MAX_MULTIPLIER_WIDTH).contains(&n) {
        return Err(ArrayError::UnsupportedWidth(n));
    }
    Ok(())
}

/// Booth rows encoding `a`, with every bit below weight `k` dropped.
///
/// Row `i` has weight `4^i` and value `d_i * b` for the digit `d_i` of `a`. It
/// is laid out as `n + 1` bits of `(|d_i| * b) ^ neg_i` plus `neg_i` in its
/// lowest column. The top (sign) bit `p` is replaced by `~p` together with the
/// constant `-2^(2i+n)`, since `-2^m p = 2^m ~p - 2^m`.
fn booth_rows(n: u32, k: u32, kind: ArrayKind) -> PPArray {
    let mut arr = PPArray {
        n,
        k,
        kind,
        columns: vec![Vec::new(); 2 * n as usize],
        offset: 0,
    };
    for row in 0..n / 2 {
        let sel = BoothSelect::for_row(Operand::A, row);
        let base = 2 * row;
        for j in 0..=n {
            // b sign-extends past its top bit
            let b_j = BitExpr::input(Operand::B, j.min(n - 1));
            let b_jm1 = BitExpr::booth_input(Operand::B, i64::from(j) - 1);
            let multiple = BitExpr::or(&BitExpr::and(&sel.one, &b_j), &BitExpr::and(&sel.two, &b_jm1));
            let bit = BitExpr::xor(&multiple, &sel.neg);
            if j == n {
                arr.push(base + n, BitExpr::not(&bit), BitRole::SignComplement { row });
                arr.offset -= 1i128 << (base + n);
            } else {
                arr.push(base + j, bit, BitRole::Product { row });
            }
        }
        arr.push(base, sel.neg.clone(), BitRole::Negate { row });
    }
    arr
}

/// Standard Booth radix-4 array of an `n x n` signed multiplier.
pub fn build_standard_array(n: u32) -> Result<PPArray, ArrayError> {
    check_width(n)?;
    Ok(booth_rows(n, 0, ArrayKind::Standard))
}

/// Standard array with the low `k` columns removed and constant `c` added.
/// This is the usual non-commutative truncated Booth multiplier.
pub fn build_truncated_array(scheme: &TruncScheme) -> Result<PPArray, ArrayError> {
    check_width(scheme.n())?;
    let mut arr = booth_rows(scheme.n(), scheme.k(), ArrayKind::Truncated);
    arr.offset += scheme.c();
    Ok(arr)
}

/// Commutative truncated array: the truncated array plus `s'_i` for
/// `i in [0, k/2)`, all in column `k`.
pub fn build_commutative_truncated_array(scheme: &TruncScheme) -> Result<PPArray, ArrayError> {
    let mut arr = build_truncated_array(scheme)?;
    arr.kind = ArrayKind::CommutativeTruncated;
    for row in 0..scheme.k() / 2 {
        arr.push(scheme.k(), compensation_bit(scheme.k(), row), BitRole::Compensation { row });
    }
    Ok(arr)
}

fn check_operands(arr: &PPArray, a: &Word, b: &Word) -> Result<(), ArrayError> {
    if a.width() != arr.n || b.width() != arr.n {
        return Err(ArrayError::WidthMismatch {
            a: a.width(),
            b: b.width(),
            expected: arr.n,
        });
    }
    Ok(())
}

/// Exact value of the array on `(a, b)`, interpreting every bit expression.
pub fn evaluate_array(arr: &PPArray, a: &Word, b: &Word) -> Result<i128, ArrayError> {
    check_operands(arr, a, b)?;
    let mut total = BigInt::from(arr.offset);
    for (w, col) in arr.columns.iter().enumerate() {
        let set = col.iter().filter(|bit| bit.expr.eval(a, b)).count();
        total += BigInt::from(set) << w;
    }
    Ok(total
        .to_i128()
        .expect("array values of n <= 64 multipliers fit in 128 bits"))
}

/// Sums the array and drops the low `n` columns: `floor(value / 2^n)` as an
/// `n`-bit word.
pub fn round_output(arr: &PPArray, a: &Word, b: &Word) -> Result<Word, ArrayError> {
    let value = evaluate_array(arr, a, b)?;
    Ok(Word::new(value >> arr.n, arr.n)?)
}

/// Bits per column (symbolic bits plus set bits of the constant), indexed by
/// weight `0..2n`.
pub fn height_profile(arr: &PPArray) -> Vec<usize> {
    let constant = arr.constant_bits();
    arr.columns
        .iter()
        .enumerate()
        .map(|(w, col)| col.len() + ((constant >> w) & 1) as usize)
        .collect()
}
