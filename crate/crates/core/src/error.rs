use thiserror::Error;

use crate::params::Rejection;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word width {0} is outside 2..=128")]
    InvalidWidth(u32),
    #[error("Booth radix-4 encoding needs an even width, got {0}")]
    OddWidth(u32),
    #[error("bit index {index} is outside a {width}-bit word")]
    IndexOutOfRange { index: i64, width: u32 },
    #[error("invalid binary digit {0:?}")]
    BadDigit(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("unsupported multiplier width {0}: must be even and within 4..=64")]
    UnsupportedWidth(u32),
    #[error("truncation depth {k} is invalid for width {n}: must be even with k < n")]
    InvalidTruncation { n: u32, k: u32 },
    #[error("operand widths {a} and {b} do not match the {expected}-bit array")]
    WidthMismatch { a: u32, b: u32, expected: u32 },
    #[error(transparent)]
    Scheme(#[from] Rejection),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("width {0} is too small: need n >= 4")]
    WidthTooSmall(u32),
    #[error("truncation depth {0} must be even and at least 2")]
    InvalidTruncation(u32),
    #[error("truncation depth {k} must be below width {n}")]
    TruncationNotBelowWidth { n: u32, k: u32 },
    #[error("no valid compensation constant for n={n}, k={k}: max(delta) - 2^k < C < min(delta) + 2^n has no multiple of 2^k")]
    NoValidConstant { n: u32, k: u32 },
    #[error("exhaustive enumeration over 2^{cases_log2} cases refused; pass the override to run it anyway")]
    CostGuard { cases_log2: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("exhaustive run over 2^{cases_log2} pairs exceeds the 2^{limit_log2} guard")]
    CostGuard { cases_log2: u32, limit_log2: u32 },
    #[error("operand widths {a} and {b} and output width {out} differ")]
    WidthMismatch { a: u32, b: u32, out: u32 },
    #[error(transparent)]
    Array(#[from] ArrayError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("signal {signal} is used by cell {cell} before it is driven")]
    UndrivenSignal { signal: usize, cell: usize },
    #[error("signal {0} is driven more than once")]
    MultipleDrivers(usize),
    #[error("cell {cell} has {got} inputs, expected {expected}")]
    Arity {
        cell: usize,
        got: usize,
        expected: usize,
    },
    #[error("netlist has {got} output bits, expected {expected}")]
    OutputCount { got: usize, expected: usize },
    #[error("operand widths {a} and {b} do not match the {expected}-bit netlist")]
    WidthMismatch { a: u32, b: u32, expected: u32 },
    #[error("verilog line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("exhaustive testbench refused for n={0}: limit is n <= 10")]
    ExhaustiveTooWide(u32),
    #[error("`{0}` is not a valid Verilog module name")]
    ModuleName(String),
    #[error(transparent)]
    Array(#[from] ArrayError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}
