use std::collections::HashMap;

use super::array::PPArray;
use super::expr::{BitExpr, Operand};
use crate::word::Word;

/// Operand pairs evaluated per pass, one per bit of a `u64`.
pub const LANES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Const(bool),
    A(u32),
    B(u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Xor(u32, u32),
}

/// A partial-product array compiled to a flat, common-subexpression-free gate
/// list and evaluated bit-sliced: lane `l` of every `u64` belongs to operand
/// pair `l`. Column sums are formed with bit-sliced carry-save adders, so the
/// result is exact modulo `2^(2n)` and the sign is recovered from bit `2n-1`.
#[derive(Clone, Debug)]
pub struct ArrayEvaluator {
    n: u32,
    ops: Vec<Op>,
    columns: Vec<Vec<u32>>,
    offset: u128,
}

struct Compiler {
    ops: Vec<Op>,
    index: HashMap<Op, u32>,
}

impl Compiler {
    fn intern(&mut self, op: Op) -> u32 {
        if let Some(&id) = self.index.get(&op) {
            return id;
        }
        let id = self.ops.len() as u32;
        self.ops.push(op);
        self.index.insert(op, id);
        id
    }

    fn compile(&mut self, expr: &BitExpr) -> u32 {
        let op = match expr {
            BitExpr::Const(v) => Op::Const(*v),
            BitExpr::Input(Operand::A, i) => Op::A(*i),
            BitExpr::Input(Operand::B, i) => Op::B(*i),
            BitExpr::Not(x) => Op::Not(self.compile(x)),
            BitExpr::And(x, y) => Op::And(self.compile(x), self.compile(y)),
            BitExpr::Or(x, y) => Op::Or(self.compile(x), self.compile(y)),
            BitExpr::Xor(x, y) => Op::Xor(self.compile(x), self.compile(y)),
        };
        self.intern(op)
    }
}

impl ArrayEvaluator {
    pub fn new(arr: &PPArray) -> Self {
        let mut c = Compiler {
            ops: Vec::new(),
            index: HashMap::new(),
        };
        let width = 2 * arr.n();
        let columns = (0..width)
            .map(|w| arr.column(w).iter().map(|bit| c.compile(&bit.expr)).collect())
            .collect();
        Self {
            n: arr.n(),
            ops: c.ops,
            columns,
            offset: arr.constant_bits(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct gates after sharing.
    pub fn gate_count(&self) -> usize {
        self.ops.len()
    }

    /// Exact array values for up to [`LANES`] operand pairs given as raw
    /// `n`-bit patterns.
    pub fn eval_batch(&self, a: &[u128], b: &[u128]) -> Vec<i128> {
        assert_eq!(a.len(), b.len());
        assert!(a.len() <= LANES);
        let lanes = a.len();
        let n = self.n as usize;
        let transpose = |xs: &[u128]| -> Vec<u64> {
            (0..n)
                .map(|j| {
                    xs.iter()
                        .enumerate()
                        .fold(0u64, |acc, (l, x)| acc | ((((x >> j) & 1) as u64) << l))
                })
                .collect()
        };
        let a_planes = transpose(a);
        let b_planes = transpose(b);

        let mut vals: Vec<u64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Const(false) => 0,
                Op::Const(true) => u64::MAX,
                Op::A(i) => a_planes[i as usize],
                Op::B(i) => b_planes[i as usize],
                Op::Not(x) => !vals[x as usize],
                Op::And(x, y) => vals[x as usize] & vals[y as usize],
                Op::Or(x, y) => vals[x as usize] | vals[y as usize],
                Op::Xor(x, y) => vals[x as usize] ^ vals[y as usize],
            };
            vals.push(v);
        }

        let width = 2 * n;
        let mut sums = [0u128; LANES];
        let mut carries: Vec<u64> = Vec::new();
        let mut stack: Vec<u64> = Vec::new();
        for (w, col) in self.columns.iter().enumerate() {
            stack.clear();
            stack.append(&mut carries);
            stack.extend(col.iter().map(|&id| vals[id as usize]));
            while stack.len() >= 3 {
                let z = stack.pop().unwrap();
                let y = stack.pop().unwrap();
                let x = stack.pop().unwrap();
                let t = x ^ y;
                stack.push(t ^ z);
                carries.push((x & y) | (z & t));
            }
            if stack.len() == 2 {
                let (x, y) = (stack[0], stack[1]);
                stack.truncate(1);
                stack[0] = x ^ y;
                carries.push(x & y);
            }
            let mut plane = stack.first().copied().unwrap_or(0);
            while plane != 0 {
                let l = plane.trailing_zeros() as usize;
                sums[l] |= 1u128 << w;
                plane &= plane - 1;
            }
        }

        let shift = 128 - width as u32;
        sums[..lanes]
            .iter()
            .map(|&s| (((s.wrapping_add(self.offset)) << shift) as i128) >> shift)
            .collect()
    }

    pub fn eval(&self, a: &Word, b: &Word) -> i128 {
        self.eval_batch(&[a.bits()], &[b.bits()])[0]
    }

    /// Rounded outputs `floor(value / 2^n)` as raw `n`-bit patterns.
    pub fn round_batch(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let mask = (1u128 << self.n) - 1;
        self.eval_batch(a, b)
            .into_iter()
            .map(|v| ((v >> self.n) as u128) & mask)
            .collect()
    }
}
