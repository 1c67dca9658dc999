use std::collections::HashMap;
use std::fmt::Write;

use super::netlist::{Cell, CellKind, Netlist, SignalId};
use super::reduce::{reduce_to_netlist, Style};
use crate::booth::{Operand, PPArray, TruncScheme};
use crate::error::{EmitError, NetlistError};

pub const TOOL: &str = "fbooth";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Whether `name` is a plain Verilog identifier.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn check_module_name(name: &str) -> Result<(), EmitError> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(EmitError::ModuleName(name.to_string()))
    }
}

fn concat(ids: &[SignalId]) -> String {
    let parts: Vec<String> = ids.iter().rev().map(|s| format!("s{s}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Verilog-2001 text of `nl` as module `name`, preceded by `header` comment
/// lines. Adder cells instantiate the `<name>_fa` / `<name>_ha` submodules.
pub fn netlist_to_verilog(nl: &Netlist, name: &str, header: &[String]) -> Result<String, EmitError> {
    check_module_name(name)?;
    let (n, k) = (nl.n, nl.k);
    let mut v = String::new();
    for line in header {
        writeln!(v, "// {line}").unwrap();
    }
    writeln!(v).unwrap();
    writeln!(v, "module {name}_fa (input x, input y, input z, output s, output c);").unwrap();
    writeln!(v, "  assign s = x ^ y ^ z;").unwrap();
    writeln!(v, "  assign c = (x & y) | (z & (x ^ y));").unwrap();
    writeln!(v, "endmodule").unwrap();
    writeln!(v).unwrap();
    writeln!(v, "module {name}_ha (input x, input y, output s, output c);").unwrap();
    writeln!(v, "  assign s = x ^ y;").unwrap();
    writeln!(v, "  assign c = x & y;").unwrap();
    writeln!(v, "endmodule").unwrap();
    writeln!(v).unwrap();
    writeln!(
        v,
        "module {name} (input [{m}:0] a, input [{m}:0] b, output [{m}:0] out);",
        m = n - 1
    )
    .unwrap();
    writeln!(v, "  wire [{}:{k}] acc;", 2 * n - 1).unwrap();
    for (i, cell) in nl.cells.iter().enumerate() {
        let o = &cell.outputs;
        let x = |j: usize| format!("s{}", cell.inputs[j]);
        match cell.kind {
            CellKind::Input(op, j) => {
                let bus = if op == Operand::A { "a" } else { "b" };
                writeln!(v, "  wire s{} = {bus}[{j}];", o[0]).unwrap();
            }
            CellKind::Const(c) => writeln!(v, "  wire s{} = 1'b{};", o[0], u8::from(c)).unwrap(),
            CellKind::Not => writeln!(v, "  wire s{} = ~{};", o[0], x(0)).unwrap(),
            CellKind::And => writeln!(v, "  wire s{} = {} & {};", o[0], x(0), x(1)).unwrap(),
            CellKind::Or => writeln!(v, "  wire s{} = {} | {};", o[0], x(0), x(1)).unwrap(),
            CellKind::Xor => writeln!(v, "  wire s{} = {} ^ {};", o[0], x(0), x(1)).unwrap(),
            CellKind::HalfAdder => {
                writeln!(v, "  wire s{}, s{};", o[0], o[1]).unwrap();
                writeln!(
                    v,
                    "  {name}_ha u{i} (.x({}), .y({}), .s(s{}), .c(s{}));",
                    x(0),
                    x(1),
                    o[0],
                    o[1]
                )
                .unwrap();
            }
            CellKind::FullAdder => {
                writeln!(v, "  wire s{}, s{};", o[0], o[1]).unwrap();
                writeln!(
                    v,
                    "  {name}_fa u{i} (.x({}), .y({}), .z({}), .s(s{}), .c(s{}));",
                    x(0),
                    x(1),
                    x(2),
                    o[0],
                    o[1]
                )
                .unwrap();
            }
            CellKind::Add { width } => {
                let ops: Vec<String> = (0..cell.inputs.len() / width).map(|j| format!("add{i}_op{j}")).collect();
                for (j, chunk) in cell.inputs.chunks(width).enumerate() {
                    writeln!(v, "  wire [{}:0] {} = {};", width - 1, ops[j], concat(chunk)).unwrap();
                }
                writeln!(v, "  wire [{}:0] add{i}_sum = {};", width - 1, ops.join(" + ")).unwrap();
                for (j, s) in o.iter().enumerate() {
                    writeln!(v, "  wire s{s} = add{i}_sum[{j}];").unwrap();
                }
            }
        }
    }
    writeln!(v, "  assign acc = {};", concat(&nl.product)).unwrap();
    writeln!(v, "  assign out = acc[{}:{n}];", 2 * n - 1).unwrap();
    writeln!(v, "endmodule").unwrap();
    Ok(v)
}

/// Header comment lines describing a scheme.
pub fn scheme_header(scheme: &TruncScheme, style: Style) -> Vec<String> {
    vec![
        "Booth radix-4 multiplier with truncated low columns and symmetric compensation".to_string(),
        format!("generated by {TOOL} {VERSION}"),
        format!(
            "n={} k={} c_star={} c={} style={style}",
            scheme.n(),
            scheme.k(),
            scheme.c_star(),
            scheme.c()
        ),
    ]
}

/// Reduces `arr` with `style` and emits it as module `name`.
pub fn emit_hdl(arr: &PPArray, scheme: &TruncScheme, style: Style, name: &str) -> Result<String, EmitError> {
    check_module_name(name)?;
    let nl = reduce_to_netlist(arr, style);
    netlist_to_verilog(&nl, name, &scheme_header(scheme, style))
}

fn perr(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Parse { line, msg: msg.into() }
}

struct Reader {
    names: HashMap<String, SignalId>,
    buses: HashMap<String, Vec<SignalId>>,
    sums: HashMap<String, Vec<SignalId>>,
    pending: Vec<String>,
    cells: Vec<Cell>,
    signals: usize,
}

impl Reader {
    fn lookup(&self, line: usize, name: &str) -> Result<SignalId, NetlistError> {
        self.names
            .get(name.trim())
            .copied()
            .ok_or_else(|| perr(line, format!("unknown signal `{}`", name.trim())))
    }

    fn define(&mut self, line: usize, name: &str, id: SignalId) -> Result<(), NetlistError> {
        if self.names.insert(name.trim().to_string(), id).is_some() {
            return Err(perr(line, format!("`{}` defined twice", name.trim())));
        }
        Ok(())
    }

    fn push(&mut self, kind: CellKind, inputs: Vec<SignalId>, count: usize) -> Vec<SignalId> {
        let outputs: Vec<SignalId> = (self.signals..self.signals + count).collect();
        self.signals += count;
        self.cells.push(Cell {
            kind,
            inputs,
            outputs: outputs.clone(),
        });
        outputs
    }

    fn concat(&self, line: usize, text: &str) -> Result<Vec<SignalId>, NetlistError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| perr(line, "expected a concatenation"))?;
        let mut ids = inner
            .split(',')
            .map(|s| self.lookup(line, s))
            .collect::<Result<Vec<_>, _>>()?;
        ids.reverse();
        Ok(ids)
    }

    fn wire(&mut self, line: usize, name: &str, rhs: &str) -> Result<(), NetlistError> {
        let rhs = rhs.trim();
        let index = |s: &str| -> Option<(String, u32)> {
            let (bus, rest) = s.split_once('[')?;
            Some((bus.to_string(), rest.strip_suffix(']')?.parse().ok()?))
        };
        let id = if rhs == "1'b0" || rhs == "1'b1" {
            self.push(CellKind::Const(rhs == "1'b1"), Vec::new(), 1)[0]
        } else if let Some(x) = rhs.strip_prefix('~') {
            let x = self.lookup(line, x)?;
            self.push(CellKind::Not, vec![x], 1)[0]
        } else if let Some((x, op, y)) = [" & ", " | ", " ^ "]
            .iter()
            .find_map(|op| rhs.split_once(op).map(|(x, y)| (x, *op, y)))
        {
            let kind = match op {
                " & " => CellKind::And,
                " | " => CellKind::Or,
                _ => CellKind::Xor,
            };
            let (x, y) = (self.lookup(line, x)?, self.lookup(line, y)?);
            self.push(kind, vec![x, y], 1)[0]
        } else if let Some((bus, j)) = index(rhs) {
            match bus.as_str() {
                "a" => self.push(CellKind::Input(Operand::A, j), Vec::new(), 1)[0],
                "b" => self.push(CellKind::Input(Operand::B, j), Vec::new(), 1)[0],
                _ => *self
                    .sums
                    .get(&bus)
                    .and_then(|s| s.get(j as usize))
                    .ok_or_else(|| perr(line, format!("unknown bus `{bus}`")))?,
            }
        } else {
            return Err(perr(line, format!("unsupported expression `{rhs}`")));
        };
        self.define(line, name, id)
    }

    fn instance(&mut self, line: usize, text: &str, full: bool) -> Result<(), NetlistError> {
        let pins: Vec<&str> = text
            .split(".")
            .skip(1)
            .map(|p| {
                let open = p.find('(').unwrap_or(0);
                let close = p.find(')').unwrap_or(p.len());
                &p[open + 1..close]
            })
            .collect();
        let arity = if full { 3 } else { 2 };
        if pins.len() != arity + 2 {
            return Err(perr(line, "wrong pin count"));
        }
        let inputs = pins[..arity]
            .iter()
            .map(|p| self.lookup(line, p))
            .collect::<Result<Vec<_>, _>>()?;
        let kind = if full { CellKind::FullAdder } else { CellKind::HalfAdder };
        let out = self.push(kind, inputs, 2);
        for (p, id) in pins[arity..].iter().zip(out) {
            if !self.pending.iter().any(|d| d == p) {
                return Err(perr(line, format!("`{p}` is not declared")));
            }
            self.define(line, p, id)?;
        }
        Ok(())
    }
}

fn parse_range(text: &str) -> Option<(u32, u32)> {
    let inner = text.trim().strip_prefix('[')?.split(']').next()?;
    let (hi, lo) = inner.split_once(':')?;
    Some((hi.trim().parse().ok()?, lo.trim().parse().ok()?))
}

/// Parses the subset of Verilog produced by [`netlist_to_verilog`] back into
/// a netlist (reduction-stage records are not recovered).
pub fn parse_verilog(text: &str) -> Result<Netlist, NetlistError> {
    let mut r = Reader {
        names: HashMap::new(),
        buses: HashMap::new(),
        sums: HashMap::new(),
        pending: Vec::new(),
        cells: Vec::new(),
        signals: 0,
    };
    let mut top: Option<(String, u32)> = None;
    let mut in_top = false;
    let mut k = None;
    let mut product = None;
    let mut outputs_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with("//") {
            continue;
        }
        if let Some(rest) = s.strip_prefix("module ") {
            let name = rest.split_whitespace().next().unwrap_or("");
            if rest.contains("input [") {
                let (hi, _) = rest
                    .split_once("input ")
                    .and_then(|(_, t)| parse_range(t))
                    .ok_or_else(|| perr(line, "bad port list"))?;
                top = Some((name.to_string(), hi + 1));
                in_top = true;
            }
            continue;
        }
        if s == "endmodule" {
            in_top = false;
            continue;
        }
        if !in_top {
            continue;
        }
        let (_, n) = top.as_ref().expect("inside top module");
        let name = &top.as_ref().unwrap().0;
        let body = s
            .strip_suffix(';')
            .ok_or_else(|| perr(line, "missing `;`"))?;
        if let Some(decl) = body.strip_prefix("wire [") {
            let decl = format!("[{decl}");
            let (hi, lo) = parse_range(&decl).ok_or_else(|| perr(line, "bad range"))?;
            let rest = decl.split_once(']').unwrap().1.trim();
            if rest == "acc" {
                if hi != 2 * n - 1 {
                    return Err(perr(line, "accumulator width does not match ports"));
                }
                k = Some(lo);
                continue;
            }
            let (lhs, rhs) = rest
                .split_once(" = ")
                .ok_or_else(|| perr(line, "expected an assignment"))?;
            let width = (hi + 1) as usize;
            if lhs.ends_with("_sum") {
                let mut inputs = Vec::new();
                for op in rhs.split(" + ") {
                    let bus = r
                        .buses
                        .get(op.trim())
                        .ok_or_else(|| perr(line, format!("unknown operand `{op}`")))?;
                    if bus.len() != width {
                        return Err(perr(line, "operand width mismatch"));
                    }
                    inputs.extend_from_slice(bus);
                }
                let out = r.push(CellKind::Add { width }, inputs, width);
                r.sums.insert(lhs.to_string(), out);
            } else {
                let ids = r.concat(line, rhs)?;
                if ids.len() != width {
                    return Err(perr(line, "concatenation width mismatch"));
                }
                r.buses.insert(lhs.to_string(), ids);
            }
        } else if let Some(rest) = body.strip_prefix("wire ") {
            match rest.split_once(" = ") {
                Some((lhs, rhs)) => r.wire(line, lhs, rhs)?,
                None => r.pending = rest.split(',').map(|p| p.trim().to_string()).collect(),
            }
        } else if let Some(rhs) = body.strip_prefix("assign acc = ") {
            product = Some(r.concat(line, rhs)?);
        } else if body.starts_with("assign out = acc[") {
            outputs_seen = true;
        } else if let Some(rest) = body.strip_prefix(&format!("{name}_fa ")) {
            r.instance(line, rest, true)?;
        } else if let Some(rest) = body.strip_prefix(&format!("{name}_ha ")) {
            r.instance(line, rest, false)?;
        } else {
            return Err(perr(line, format!("unsupported statement `{s}`")));
        }
    }
    let (_, n) = top.ok_or_else(|| perr(0, "no top module"))?;
    let k = k.ok_or_else(|| perr(0, "missing accumulator declaration"))?;
    let product = product.ok_or_else(|| perr(0, "missing accumulator assignment"))?;
    if !outputs_seen || product.len() < (n - k) as usize {
        return Err(perr(0, "missing output assignment"));
    }
    let outputs = product[(n - k) as usize..].to_vec();
    let nl = Netlist {
        n,
        k,
        signals: r.signals,
        cells: r.cells,
        product,
        outputs,
        stages: Vec::new(),
    };
    nl.validate()?;
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::booth::{build_commutative_truncated_array, build_standard_array};

    fn scheme() -> TruncScheme {
        TruncScheme::new(8, 4, 1).unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("mul_16"));
        assert!(is_identifier("_x"));
        assert!(!is_identifier("16mul"));
        assert!(!is_identifier("a-b"));
        assert!(!is_identifier(""));
    }

    #[test]
    fn module_name_propagates() {
        let arr = build_commutative_truncated_array(&scheme()).unwrap();
        let text = emit_hdl(&arr, &scheme(), Style::Dadda, "my_mult").unwrap();
        assert!(text.contains("module my_mult (input [7:0] a, input [7:0] b, output [7:0] out);"));
        assert!(text.contains("module my_mult_fa "));
        assert!(text.contains("// n=8 k=4 c_star=1 c=16 style=dadda"));
        assert!(text.contains("wire [15:4] acc;"));
        assert!(emit_hdl(&arr, &scheme(), Style::Dadda, "bad name").is_err());
    }

    #[test]
    fn parse_round_trip() {
        for style in [Style::Dadda, Style::DirectSum] {
            let arr = build_commutative_truncated_array(&scheme()).unwrap();
            let nl = reduce_to_netlist(&arr, style);
            let text = netlist_to_verilog(&nl, "m", &[]).unwrap();
            let back = parse_verilog(&text).unwrap();
            assert_eq!(back.cells, nl.cells);
            assert_eq!(back.product, nl.product);
            assert_eq!(back.outputs, nl.outputs);
        }
        let nl = reduce_to_netlist(&build_standard_array(4).unwrap(), Style::Dadda);
        let back = parse_verilog(&netlist_to_verilog(&nl, "m", &[]).unwrap()).unwrap();
        assert_eq!((back.k, back.cells.len()), (0, nl.cells.len()));
    }

    #[test]
    fn parse_errors() {
        let arr = build_commutative_truncated_array(&scheme()).unwrap();
        let text = emit_hdl(&arr, &scheme(), Style::Dadda, "m").unwrap();
        let broken = text.replacen("wire s0 = a[0];", "wire s0 = q[0];", 1);
        assert!(matches!(parse_verilog(&broken), Err(NetlistError::Parse { .. })));
        let broken = text.replacen("wire s1 = a[1];\n", "", 1);
        assert!(parse_verilog(&broken).is_err());
        assert!(parse_verilog("").is_err());
    }
}
