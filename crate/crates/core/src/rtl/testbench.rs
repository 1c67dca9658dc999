use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::verilog::{check_module_name, TOOL, VERSION};
use crate::booth::TruncScheme;
use crate::error::EmitError;
use crate::verify::directed_low_patterns;

/// Widest `n` for which an exhaustive testbench is emitted.
pub const EXHAUSTIVE_TB_MAX_N: u32 = 10;

/// Where testbench vectors come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vectors {
    Exhaustive,
    Random { seed: u64, count: u64 },
    /// Worst-case low-bit patterns under `completions` high-bit fillings each
    /// (all-zero, all-one, then random).
    Directed { seed: u64, completions: u64 },
}

/// Operand pairs (raw `n`-bit patterns) for a vector source.
pub fn testbench_vectors(scheme: &TruncScheme, vectors: Vectors) -> Result<Vec<(u128, u128)>, EmitError> {
    let n = scheme.n();
    let mask = (1u128 << n) - 1;
    Ok(match vectors {
        Vectors::Exhaustive => {
            if n > EXHAUSTIVE_TB_MAX_N {
                return Err(EmitError::ExhaustiveTooWide(n));
            }
            (0..=mask).flat_map(|a| (0..=mask).map(move |b| (a, b))).collect()
        }
        Vectors::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| (rng.random::<u128>() & mask, rng.random::<u128>() & mask))
                .collect()
        }
        Vectors::Directed { seed, completions } => {
            let k = scheme.k();
            let high = (1u128 << (n - k)) - 1;
            let mut out = Vec::new();
            for (i, (lo_a, lo_b)) in directed_low_patterns(k).into_iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let mut fill = |t: u64| match t {
                    0 => 0,
                    1 => high,
                    _ => rng.random::<u128>() & high,
                };
                for t in 0..completions {
                    let a = (fill(t) << k) | lo_a;
                    let b = (fill(t) << k) | lo_b;
                    out.push((a, b));
                }
            }
            out
        }
    })
}

fn describe(v: Vectors) -> String {
    match v {
        Vectors::Exhaustive => "exhaustive".to_string(),
        Vectors::Random { seed, count } => format!("random seed={seed} count={count}"),
        Vectors::Directed { seed, completions } => format!("directed seed={seed} completions={completions}"),
    }
}

/// Self-checking testbench for module `module`. Each vector is checked with
/// `lsbs == 0 ? out == msbs : out - msbs <= 1` on the `2n`-bit product.
pub fn emit_testbench(scheme: &TruncScheme, vectors: Vectors, module: &str) -> Result<String, EmitError> {
    check_module_name(module)?;
    let pairs = testbench_vectors(scheme, vectors)?;
    let n = scheme.n();
    let (m, w) = (n - 1, 2 * n - 1);
    let digits = n.div_ceil(4) as usize;
    let mut v = String::new();
    writeln!(v, "// Self-checking testbench for {module}").unwrap();
    writeln!(v, "// generated by {TOOL} {VERSION}").unwrap();
    writeln!(
        v,
        "// n={n} k={} c_star={} vectors: {}",
        scheme.k(),
        scheme.c_star(),
        describe(vectors)
    )
    .unwrap();
    writeln!(v, "`timescale 1ns/1ps").unwrap();
    writeln!(v, "module {module}_tb;").unwrap();
    writeln!(v, "  reg [{m}:0] a, b;").unwrap();
    writeln!(v, "  wire [{m}:0] out;").unwrap();
    writeln!(v, "  reg signed [{w}:0] y;").unwrap();
    writeln!(v, "  reg [{m}:0] lsbs, msbs, diff;").unwrap();
    writeln!(v, "  integer errors, checked;").unwrap();
    writeln!(v, "  {module} dut (.a(a), .b(b), .out(out));").unwrap();
    writeln!(v, "  task check(input [{m}:0] ta, input [{m}:0] tb);").unwrap();
    writeln!(v, "    begin").unwrap();
    writeln!(v, "      a = ta;").unwrap();
    writeln!(v, "      b = tb;").unwrap();
    writeln!(v, "      #1;").unwrap();
    writeln!(v, "      y = $signed(ta) * $signed(tb);").unwrap();
    writeln!(v, "      lsbs = y[{m}:0];").unwrap();
    writeln!(v, "      msbs = y[{w}:{n}];").unwrap();
    writeln!(v, "      diff = out - msbs;").unwrap();
    writeln!(v, "      checked = checked + 1;").unwrap();
    writeln!(v, "      if ((lsbs == 0) ? (out != msbs) : (diff > 1)) begin").unwrap();
    writeln!(v, "        errors = errors + 1;").unwrap();
    writeln!(v, "        $display(\"FAIL a=%h b=%h out=%h\", ta, tb, out);").unwrap();
    writeln!(v, "      end").unwrap();
    writeln!(v, "    end").unwrap();
    writeln!(v, "  endtask").unwrap();
    writeln!(v, "  initial begin").unwrap();
    writeln!(v, "    errors = 0;").unwrap();
    writeln!(v, "    checked = 0;").unwrap();
    for (a, b) in pairs {
        writeln!(v, "    check({n}'h{a:0digits$x}, {n}'h{b:0digits$x});").unwrap();
    }
    writeln!(v, "    if (errors == 0) $display(\"PASS %0d vectors\", checked);").unwrap();
    writeln!(v, "    else $display(\"FAIL %0d of %0d vectors\", errors, checked);").unwrap();
    writeln!(v, "    $finish;").unwrap();
    writeln!(v, "  end").unwrap();
    writeln!(v, "endmodule").unwrap();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(text: &str) -> usize {
        text.lines().filter(|l| l.trim_start().starts_with("check(")).count()
    }

    #[test]
    fn exhaustive_counts() {
        let s = TruncScheme::new(8, 4, 1).unwrap();
        let tb = emit_testbench(&s, Vectors::Exhaustive, "m").unwrap();
        assert_eq!(count(&tb), 65536);
        assert!(tb.contains("check(8'h7f, 8'h80);"));
        let wide = TruncScheme::new(16, 12, 4).unwrap();
        assert!(matches!(
            emit_testbench(&wide, Vectors::Exhaustive, "m"),
            Err(EmitError::ExhaustiveTooWide(16))
        ));
    }

    #[test]
    fn random_is_deterministic() {
        let s = TruncScheme::new(16, 12, 4).unwrap();
        let v = Vectors::Random { seed: 1, count: 100 };
        let x = emit_testbench(&s, v, "m").unwrap();
        assert_eq!(x, emit_testbench(&s, v, "m").unwrap());
        assert_eq!(count(&x), 100);
        assert_ne!(x, emit_testbench(&s, Vectors::Random { seed: 2, count: 100 }, "m").unwrap());
    }

    #[test]
    fn directed_embeds_worst_case_patterns() {
        let s = TruncScheme::new(64, 58, 23).unwrap();
        let pairs = testbench_vectors(&s, Vectors::Directed { seed: 0, completions: 4 }).unwrap();
        let low = (1u128 << 58) - 1;
        let p1001: u128 = u128::from_str_radix(&"1001".repeat(15)[2..], 2).unwrap();
        let p0110: u128 = u128::from_str_radix(&"0110".repeat(15)[2..], 2).unwrap();
        assert!(pairs.iter().any(|&(a, b)| a & low == p1001 && b & low == p0110));
        assert_eq!(pairs[0].0 >> 58, 0);
        assert_eq!(pairs[1].0 >> 58, 0x3f);
        let tb = emit_testbench(&s, Vectors::Directed { seed: 0, completions: 4 }, "m").unwrap();
        assert_eq!(count(&tb), pairs.len());
    }
}
