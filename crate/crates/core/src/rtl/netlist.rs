use std::collections::HashMap;

use crate::booth::{BitExpr, Operand, LANES};
use crate::error::NetlistError;
use crate::word::Word;

pub type SignalId = usize;

/// Cell kinds. Adders drive `(sum, carry)`; [`CellKind::Add`] sums
/// `inputs.len() / width` operand vectors modulo `2^width`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Input(Operand, u32),
    Const(bool),
    Not,
    And,
    Or,
    Xor,
    HalfAdder,
    FullAdder,
    Add { width: usize },
}

impl CellKind {
    fn arity(&self) -> Option<usize> {
        match self {
            CellKind::Input(..) | CellKind::Const(_) => Some(0),
            CellKind::Not => Some(1),
            CellKind::And | CellKind::Or | CellKind::Xor | CellKind::HalfAdder => Some(2),
            CellKind::FullAdder => Some(3),
            CellKind::Add { .. } => None,
        }
    }

    fn output_count(&self) -> usize {
        match self {
            CellKind::HalfAdder | CellKind::FullAdder => 2,
            CellKind::Add { width } => *width,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub kind: CellKind,
    pub inputs: Vec<SignalId>,
    pub outputs: Vec<SignalId>,
}

/// Column heights after one reduction stage, with the stage's height limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub limit: usize,
    pub heights: Vec<usize>,
}

/// Topologically ordered gate-level netlist of an `n x n` multiplier.
///
/// `product` holds the summed array bits for weights `k..2n`; `outputs` are
/// the top `n` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist {
    pub n: u32,
    pub k: u32,
    pub signals: usize,
    pub cells: Vec<Cell>,
    pub product: Vec<SignalId>,
    pub outputs: Vec<SignalId>,
    /// Initial column heights followed by one entry per reduction stage.
    pub stages: Vec<Stage>,
}

impl Netlist {
    /// Checks ordering, single drivers, arities and output counts.
    pub fn validate(&self) -> Result<(), NetlistError> {
        let mut driven = vec![false; self.signals];
        for (i, cell) in self.cells.iter().enumerate() {
            let expected = match cell.kind.arity() {
                Some(a) => a,
                None => {
                    let CellKind::Add { width } = cell.kind else { unreachable!() };
                    if width == 0 || cell.inputs.len() % width != 0 {
                        return Err(NetlistError::Arity {
                            cell: i,
                            got: cell.inputs.len(),
                            expected: width,
                        });
                    }
                    cell.inputs.len()
                }
            };
            if cell.inputs.len() != expected {
                return Err(NetlistError::Arity {
                    cell: i,
                    got: cell.inputs.len(),
                    expected,
                });
            }
            if cell.outputs.len() != cell.kind.output_count() {
                return Err(NetlistError::Arity {
                    cell: i,
                    got: cell.outputs.len(),
                    expected: cell.kind.output_count(),
                });
            }
            for &s in &cell.inputs {
                if s >= self.signals || !driven[s] {
                    return Err(NetlistError::UndrivenSignal { signal: s, cell: i });
                }
            }
            for &s in &cell.outputs {
                if s >= self.signals {
                    return Err(NetlistError::UndrivenSignal { signal: s, cell: i });
                }
                if driven[s] {
                    return Err(NetlistError::MultipleDrivers(s));
                }
                driven[s] = true;
            }
        }
        let width = (2 * self.n - self.k) as usize;
        if self.product.len() != width {
            return Err(NetlistError::OutputCount {
                got: self.product.len(),
                expected: width,
            });
        }
        if self.outputs.len() != self.n as usize {
            return Err(NetlistError::OutputCount {
                got: self.outputs.len(),
                expected: self.n as usize,
            });
        }
        for (i, &s) in self.product.iter().chain(&self.outputs).enumerate() {
            if s >= self.signals || !driven[s] {
                return Err(NetlistError::UndrivenSignal {
                    signal: s,
                    cell: self.cells.len() + i,
                });
            }
        }
        Ok(())
    }

    pub fn cell_count(&self, pred: impl Fn(&CellKind) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.kind)).count()
    }

    /// Bit-sliced evaluation of up to [`LANES`] operand pairs (raw patterns).
    /// Returns the signed `2n`-bit value of the product bus for each lane.
    pub fn eval_batch(&self, a: &[u128], b: &[u128]) -> Vec<i128> {
        assert_eq!(a.len(), b.len());
        assert!(a.len() <= LANES);
        let plane = |xs: &[u128], j: u32| -> u64 {
            xs.iter()
                .enumerate()
                .fold(0u64, |acc, (l, x)| acc | ((((x >> j) & 1) as u64) << l))
        };
        let mut vals = vec![0u64; self.signals];
        for cell in &self.cells {
            let ins: Vec<u64> = cell.inputs.iter().map(|&s| vals[s]).collect();
            match cell.kind {
                CellKind::Input(Operand::A, j) => vals[cell.outputs[0]] = plane(a, j),
                CellKind::Input(Operand::B, j) => vals[cell.outputs[0]] = plane(b, j),
                CellKind::Const(v) => vals[cell.outputs[0]] = if v { u64::MAX } else { 0 },
                CellKind::Not => vals[cell.outputs[0]] = !ins[0],
                CellKind::And => vals[cell.outputs[0]] = ins[0] & ins[1],
                CellKind::Or => vals[cell.outputs[0]] = ins[0] | ins[1],
                CellKind::Xor => vals[cell.outputs[0]] = ins[0] ^ ins[1],
                CellKind::HalfAdder => {
                    vals[cell.outputs[0]] = ins[0] ^ ins[1];
                    vals[cell.outputs[1]] = ins[0] & ins[1];
                }
                CellKind::FullAdder => {
                    let t = ins[0] ^ ins[1];
                    vals[cell.outputs[0]] = t ^ ins[2];
                    vals[cell.outputs[1]] = (ins[0] & ins[1]) | (ins[2] & t);
                }
                CellKind::Add { width } => {
                    let mut acc = vec![0u64; width];
                    for op in ins.chunks(width) {
                        let mut carry = 0u64;
                        for (x, &y) in acc.iter_mut().zip(op) {
                            let t = *x ^ y;
                            let s = t ^ carry;
                            carry = (*x & y) | (carry & t);
                            *x = s;
                        }
                    }
                    for (&s, v) in cell.outputs.iter().zip(acc) {
                        vals[s] = v;
                    }
                }
            }
        }
        let width = 2 * self.n;
        let shift = 128 - width;
        (0..a.len())
            .map(|l| {
                let raw = self
                    .product
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (i, &s)| acc | ((((vals[s] >> l) & 1) as u128) << (self.k as usize + i)));
                ((raw << shift) as i128) >> shift
            })
            .collect()
    }

    /// Output-bus patterns for each lane.
    pub fn output_batch(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let mask = (1u128 << self.n) - 1;
        self.eval_batch(a, b)
            .into_iter()
            .map(|v| ((v >> self.n) as u128) & mask)
            .collect()
    }

    fn check(&self, a: &Word, b: &Word) -> Result<(), NetlistError> {
        if a.width() != self.n || b.width() != self.n {
            return Err(NetlistError::WidthMismatch {
                a: a.width(),
                b: b.width(),
                expected: self.n,
            });
        }
        Ok(())
    }
}

/// Signed `2n`-bit value of the product bus (bits below `k` read as zero).
pub fn netlist_evaluate(nl: &Netlist, a: &Word, b: &Word) -> Result<i128, NetlistError> {
    nl.validate()?;
    nl.check(a, b)?;
    Ok(nl.eval_batch(&[a.bits()], &[b.bits()])[0])
}

/// The `n`-bit output bus.
pub fn netlist_output(nl: &Netlist, a: &Word, b: &Word) -> Result<Word, NetlistError> {
    nl.validate()?;
    nl.check(a, b)?;
    let bits = nl.output_batch(&[a.bits()], &[b.bits()])[0];
    Ok(Word::from_bits(bits, nl.n).expect("n is a valid width"))
}

/// Incremental netlist construction with structural sharing of logic gates.
pub(crate) struct Builder {
    n: u32,
    signals: usize,
    cells: Vec<Cell>,
    shared: HashMap<(CellKind, Vec<SignalId>), SignalId>,
    inputs: HashMap<(Operand, u32), SignalId>,
}

impl Builder {
    pub(crate) fn new(n: u32) -> Self {
        let mut b = Self {
            n,
            signals: 0,
            cells: Vec::new(),
            shared: HashMap::new(),
            inputs: HashMap::new(),
        };
        for op in [Operand::A, Operand::B] {
            for j in 0..n {
                let s = b.cell(CellKind::Input(op, j), Vec::new())[0];
                b.inputs.insert((op, j), s);
            }
        }
        b
    }

    /// Appends a cell and returns its fresh output signals.
    pub(crate) fn cell(&mut self, kind: CellKind, inputs: Vec<SignalId>) -> Vec<SignalId> {
        let outputs: Vec<SignalId> = (self.signals..self.signals + kind.output_count()).collect();
        self.signals += outputs.len();
        self.cells.push(Cell {
            kind,
            inputs,
            outputs: outputs.clone(),
        });
        outputs
    }

    fn gate(&mut self, kind: CellKind, mut inputs: Vec<SignalId>) -> SignalId {
        if kind != CellKind::Not {
            inputs.sort_unstable();
        }
        if let Some(&s) = self.shared.get(&(kind, inputs.clone())) {
            return s;
        }
        let s = self.cell(kind, inputs.clone())[0];
        self.shared.insert((kind, inputs), s);
        s
    }

    pub(crate) fn constant(&mut self, v: bool) -> SignalId {
        self.gate(CellKind::Const(v), Vec::new())
    }

    pub(crate) fn expr(&mut self, e: &BitExpr) -> SignalId {
        match e {
            BitExpr::Const(v) => self.constant(*v),
            BitExpr::Input(op, j) => self.inputs[&(*op, *j)],
            BitExpr::Not(x) => {
                let x = self.expr(x);
                self.gate(CellKind::Not, vec![x])
            }
            BitExpr::And(x, y) | BitExpr::Or(x, y) | BitExpr::Xor(x, y) => {
                let kind = match e {
                    BitExpr::And(..) => CellKind::And,
                    BitExpr::Or(..) => CellKind::Or,
                    _ => CellKind::Xor,
                };
                let (x, y) = (self.expr(x), self.expr(y));
                self.gate(kind, vec![x, y])
            }
        }
    }

    pub(crate) fn finish(self, k: u32, product: Vec<SignalId>, stages: Vec<Stage>) -> Netlist {
        let outputs = product[(self.n - k) as usize..].to_vec();
        Netlist {
            n: self.n,
            k,
            signals: self.signals,
            cells: self.cells,
            product,
            outputs,
            stages,
        }
    }
}
