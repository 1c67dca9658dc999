use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::word::Word;

/// Which multiplier operand an input bit is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operand {
    A,
    B,
}

/// Single-bit Boolean expression over operand bits.
///
/// Children are reference counted so the Booth select signals of a row are
/// shared by every bit of that row. The smart constructors fold constants,
/// which is how out-of-range Booth reads (`a[-1]`, `b[-1]`) disappear from
/// the built arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BitExpr {
    Const(bool),
    Input(Operand, u32),
    Not(Arc<BitExpr>),
    And(Arc<BitExpr>, Arc<BitExpr>),
    Or(Arc<BitExpr>, Arc<BitExpr>),
    Xor(Arc<BitExpr>, Arc<BitExpr>),
}

impl BitExpr {
    pub fn input(operand: Operand, index: u32) -> Self {
        BitExpr::Input(operand, index)
    }

    /// `operand[index]`, or constant 0 for negative indices.
    pub fn booth_input(operand: Operand, index: i64) -> Self {
        match u32::try_from(index) {
            Ok(i) => BitExpr::Input(operand, i),
            Err(_) => BitExpr::Const(false),
        }
    }

    pub fn not(x: &BitExpr) -> Self {
        match x {
            BitExpr::Const(v) => BitExpr::Const(!v),
            BitExpr::Not(inner) => (**inner).clone(),
            _ => BitExpr::Not(Arc::new(x.clone())),
        }
    }

    pub fn and(x: &BitExpr, y: &BitExpr) -> Self {
        match (x, y) {
            (BitExpr::Const(false), _) | (_, BitExpr::Const(false)) => BitExpr::Const(false),
            (BitExpr::Const(true), e) | (e, BitExpr::Const(true)) => e.clone(),
            _ => BitExpr::And(Arc::new(x.clone()), Arc::new(y.clone())),
        }
    }

    pub fn or(x: &BitExpr, y: &BitExpr) -> Self {
        match (x, y) {
            (BitExpr::Const(true), _) | (_, BitExpr::Const(true)) => BitExpr::Const(true),
            (BitExpr::Const(false), e) | (e, BitExpr::Const(false)) => e.clone(),
            _ => BitExpr::Or(Arc::new(x.clone()), Arc::new(y.clone())),
        }
    }

    pub fn xor(x: &BitExpr, y: &BitExpr) -> Self {
        match (x, y) {
            (BitExpr::Const(false), e) | (e, BitExpr::Const(false)) => e.clone(),
            (BitExpr::Const(true), e) | (e, BitExpr::Const(true)) => BitExpr::not(e),
            _ => BitExpr::Xor(Arc::new(x.clone()), Arc::new(y.clone())),
        }
    }

    /// Evaluates against concrete operands. Input indices must be inside the
    /// operand words; the array builders guarantee this.
    pub fn eval(&self, a: &Word, b: &Word) -> bool {
        self.eval_with(&|op, i| {
            let w = match op {
                Operand::A => a,
                Operand::B => b,
            };
            (w.bits() >> i) & 1 == 1
        })
    }

    pub fn eval_with(&self, input: &impl Fn(Operand, u32) -> bool) -> bool {
        match self {
            BitExpr::Const(v) => *v,
            BitExpr::Input(op, i) => input(*op, *i),
            BitExpr::Not(x) => !x.eval_with(input),
            BitExpr::And(x, y) => x.eval_with(input) && y.eval_with(input),
            BitExpr::Or(x, y) => x.eval_with(input) || y.eval_with(input),
            BitExpr::Xor(x, y) => x.eval_with(input) ^ y.eval_with(input),
        }
    }

    /// Input bits the expression reads.
    pub fn support(&self) -> BTreeSet<(Operand, u32)> {
        let mut out = BTreeSet::new();
        self.collect_support(&mut out);
        out
    }

    fn collect_support(&self, out: &mut BTreeSet<(Operand, u32)>) {
        match self {
            BitExpr::Const(_) => {}
            BitExpr::Input(op, i) => {
                out.insert((*op, *i));
            }
            BitExpr::Not(x) => x.collect_support(out),
            BitExpr::And(x, y) | BitExpr::Or(x, y) | BitExpr::Xor(x, y) => {
                x.collect_support(out);
                y.collect_support(out);
            }
        }
    }

    /// Semantic equality by truth table over the joint support.
    ///
    /// Panics if the joint support exceeds 20 variables.
    pub fn equivalent(&self, other: &BitExpr) -> bool {
        let vars: Vec<_> = self.support().union(&other.support()).copied().collect();
        assert!(vars.len() <= 20, "support too large for truth-table check");
        (0u32..1 << vars.len()).all(|assignment| {
            let lookup = |op: Operand, i: u32| {
                let pos = vars.iter().position(|&v| v == (op, i)).unwrap();
                (assignment >> pos) & 1 == 1
            };
            self.eval_with(&lookup) == other.eval_with(&lookup)
        })
    }
}

impl fmt::Display for BitExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitExpr::Const(v) => write!(f, "{}", u8::from(*v)),
            BitExpr::Input(Operand::A, i) => write!(f, "a{i}"),
            BitExpr::Input(Operand::B, i) => write!(f, "b{i}"),
            BitExpr::Not(x) => write!(f, "~{x}"),
            BitExpr::And(x, y) => write!(f, "({x} & {y})"),
            BitExpr::Or(x, y) => write!(f, "({x} | {y})"),
            BitExpr::Xor(x, y) => write!(f, "({x} ^ {y})"),
        }
    }
}

/// Select signals of one radix-4 Booth row, decoded from
/// `x = a[2i+1], y = a[2i], z = a[2i-1]`.
#[derive(Clone, Debug)]
pub struct BoothSelect {
    pub x: BitExpr,
    /// Digit magnitude is 1.
    pub one: BitExpr,
    /// Digit magnitude is 2.
    pub two: BitExpr,
    /// Digit is negative: `x & ~(y & z)`.
    pub neg: BitExpr,
}

impl BoothSelect {
    pub fn for_row(operand: Operand, row: u32) -> Self {
        let r = i64::from(row);
        let x = BitExpr::booth_input(operand, 2 * r + 1);
        let y = BitExpr::booth_input(operand, 2 * r);
        let z = BitExpr::booth_input(operand, 2 * r - 1);
        let one = BitExpr::xor(&y, &z);
        let nx = BitExpr::not(&x);
        let ny = BitExpr::not(&y);
        let nz = BitExpr::not(&z);
        let two = BitExpr::or(
            &BitExpr::and(&x, &BitExpr::and(&ny, &nz)),
            &BitExpr::and(&nx, &BitExpr::and(&y, &z)),
        );
        let neg = BitExpr::and(&x, &BitExpr::not(&BitExpr::and(&y, &z)));
        Self { x, one, two, neg }
    }

    /// Digit is non-zero.
    pub fn nonzero(&self) -> BitExpr {
        BitExpr::or(&self.one, &self.two)
    }
}
