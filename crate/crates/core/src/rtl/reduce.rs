use std::fmt;
use std::str::FromStr;

use super::netlist::{Builder, CellKind, Netlist, SignalId, Stage};
use crate::booth::PPArray;

/// How the array columns are summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    /// Dadda tree of full and half adders down to two rows, then one adder.
    #[default]
    Dadda,
    /// One multi-operand addition over the array rows.
    DirectSum,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Dadda => "dadda",
            Style::DirectSum => "direct-sum",
        })
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dadda" => Ok(Style::Dadda),
            "direct-sum" => Ok(Style::DirectSum),
            other => Err(format!("unknown style `{other}` (expected dadda or direct-sum)")),
        }
    }
}

/// Dadda stage limits below `height`, largest first: `..., 9, 6, 4, 3, 2`.
pub fn dadda_limits(height: usize) -> Vec<usize> {
    let mut seq = vec![2usize];
    while seq.last().is_some_and(|&d| d * 3 / 2 < height) {
        let d = *seq.last().unwrap();
        seq.push(d * 3 / 2);
    }
    seq.retain(|&d| d < height);
    seq.reverse();
    seq
}

fn heights(cols: &[Vec<SignalId>]) -> Vec<usize> {
    cols.iter().map(Vec::len).collect()
}

fn dadda_stage(b: &mut Builder, cols: Vec<Vec<SignalId>>, limit: usize) -> Vec<Vec<SignalId>> {
    let width = cols.len();
    let mut next: Vec<Vec<SignalId>> = vec![Vec::new(); width];
    for (w, pool) in cols.into_iter().enumerate() {
        let mut h = pool.len() + next[w].len();
        let mut idx = 0;
        while h > limit {
            let left = pool.len() - idx;
            let (kind, take) = if h - limit >= 2 && left >= 3 {
                (CellKind::FullAdder, 3)
            } else if left >= 2 {
                (CellKind::HalfAdder, 2)
            } else {
                break;
            };
            let out = b.cell(kind, pool[idx..idx + take].to_vec());
            idx += take;
            h -= take - 1;
            next[w].push(out[0]);
            if w + 1 < width {
                next[w + 1].push(out[1]);
            }
        }
        next[w].extend_from_slice(&pool[idx..]);
    }
    next
}

/// Builds a gate-level netlist whose product bus equals the array value
/// modulo `2^(2n)`. Hardwired constant bits become constant cells.
pub fn reduce_to_netlist(arr: &PPArray, style: Style) -> Netlist {
    let (n, k) = (arr.n(), arr.k());
    let mut b = Builder::new(n);
    let constant = arr.constant_bits();
    debug_assert_eq!(constant & ((1u128 << k) - 1), 0);
    let mut cols: Vec<Vec<SignalId>> = (k..2 * n)
        .map(|w| {
            let mut col: Vec<SignalId> = arr.column(w).iter().map(|bit| b.expr(&bit.expr)).collect();
            if (constant >> w) & 1 == 1 {
                col.push(b.constant(true));
            }
            col
        })
        .collect();
    let max = cols.iter().map(Vec::len).max().unwrap_or(0);
    let mut stages = vec![Stage {
        limit: max,
        heights: heights(&cols),
    }];
    let rows = match style {
        Style::Dadda => {
            for limit in dadda_limits(max) {
                cols = dadda_stage(&mut b, cols, limit);
                stages.push(Stage {
                    limit,
                    heights: heights(&cols),
                });
            }
            2
        }
        Style::DirectSum => max.max(1),
    };
    let width = cols.len();
    let zero = b.constant(false);
    let mut inputs = Vec::with_capacity(rows * width);
    for r in 0..rows {
        inputs.extend(cols.iter().map(|col| col.get(r).copied().unwrap_or(zero)));
    }
    let product = b.cell(CellKind::Add { width }, inputs);
    b.finish(k, product, stages)
}
