//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fbooth::booth::{
    build_commutative_truncated_array, build_truncated_array, evaluate_array, height_profile, ArrayEvaluator,
    TruncScheme,
};
use fbooth::params::{
    c_range, delta_bounds, delta_bounds_brute, delta_from_low_bits, helper, helper_constructive, k_star,
    validate_scheme, worst_case_patterns, Helper, PatternRole,
};
use fbooth::rtl::{emit_hdl, parse_verilog, Netlist, Style};
use fbooth::verify::{
    commutativity_verify, commutativity_verify_array, directed_verify, exhaustive_verify, Mode, Options,
};
use fbooth::{Exec, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn opts() -> Options {
    Options::with_exec(Exec::default())
}

fn cstar_range(n: u32, k: u32) -> (i128, i128) {
    let r = c_range(n, k).expect("feasible");
    (
        i128::try_from(r.cstar_min).unwrap(),
        i128::try_from(r.cstar_max).unwrap(),
    )
}

const TABLE: [(u32, u32, i128, i128); 6] = [
    (8, 4, 1, 14),
    (16, 12, 4, 11),
    (24, 20, 7, 7),
    (32, 26, 10, 53),
    (53, 46, 18, 109),
    (64, 58, 23, 41),
];

fn parameter_table() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fbooth"))
        .args(["--format", "json", "sweep", "--n-list", "8,16,24,32,53,64"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), "sweep exited nonzero")?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = report["result"]["rows"].as_array().ok_or("no rows")?;
    ensure(rows.len() == TABLE.len(), "row count")?;
    let mut matched = 0;
    for (row, (n, k, lo, hi)) in rows.iter().zip(TABLE) {
        ensure(row["n"] == n, format!("row order: expected n={n}"))?;
        let got = (
            row["k_star"].as_u64().unwrap_or(0) as u32,
            row["c_star_min"].as_str().unwrap_or(""),
            row["c_star_max"].as_str().unwrap_or(""),
        );
        ensure(
            got == (k, lo.to_string().as_str(), hi.to_string().as_str()),
            format!("n={n}: got {got:?}"),
        )?;
        matched += 3;
    }
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("{matched} values match, {elapsed:.2?}"))
}

fn delta_tightness() -> Check {
    let start = Instant::now();
    for k in (2..=12).step_by(2) {
        let closed = delta_bounds(k).map_err(|e| e.to_string())?;
        let brute = delta_bounds_brute(k, false, Exec::default()).map_err(|e| e.to_string())?;
        ensure(
            closed.lo.to_string() == brute.lo.to_string() && closed.hi.to_string() == brute.hi.to_string(),
            format!("k={k}: closed [{}, {}] brute [{}, {}]", closed.lo, closed.hi, brute.lo, brute.hi),
        )?;
        for p in worst_case_patterns(k).map_err(|e| e.to_string())? {
            let got = delta_from_low_bits(p.a_bits(), p.b_bits(), k).to_string();
            ensure(got == p.predicted.to_string(), format!("k={k} pattern {} x {}", p.a_pattern, p.b_pattern))?;
            let target = match p.role {
                PatternRole::Max => Some(&closed.hi),
                PatternRole::Min => Some(&closed.lo),
                PatternRole::Reference => None,
            };
            if let Some(t) = target {
                ensure(got == t.to_string(), format!("k={k}: extremal pattern misses the bound"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), format!("took {elapsed:?}"))?;
    Ok(format!("k = 2..12 brute force equals closed form, patterns attain bounds, {elapsed:.2?}"))
}

fn exhaustive_faithful() -> Check {
    let start = Instant::now();
    let mut schemes = 0;
    for n in [4u32, 6, 8, 10] {
        let k = k_star(n).map_err(|e| e.to_string())?;
        let (lo, hi) = cstar_range(n, k);
        for cstar in lo..=hi {
            ensure(
                validate_scheme(n, k, &(cstar << k).into()).is_ok(),
                format!("n={n} C*={cstar} rejected"),
            )?;
            let v = exhaustive_verify(&TruncScheme::new(n, k, cstar).unwrap(), &opts()).map_err(|e| e.to_string())?;
            ensure(v.pass && v.checked == 1 << (2 * n), format!("n={n} C*={cstar}: {:?}", v.counterexample))?;
            schemes += 1;
        }
        ensure(validate_scheme(n, k, &((lo - 1) << k).into()).is_err(), "below range accepted")?;
        ensure(validate_scheme(n, k, &((hi + 1) << k).into()).is_err(), "above range accepted")?;
    }
    let (lo, hi) = cstar_range(8, 4);
    for cstar in [lo - 1, hi + 1] {
        let v = exhaustive_verify(&TruncScheme::unvalidated(8, 4, cstar).unwrap(), &opts()).map_err(|e| e.to_string())?;
        ensure(!v.pass, format!("n=8 C*={cstar} outside the range passed"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("{schemes} schemes pass exhaustively, both n=8 boundary neighbours fail, {elapsed:.2?}"))
}

fn commutativity() -> Check {
    for n in [4u32, 6, 8, 10] {
        let k = k_star(n).unwrap();
        let s = TruncScheme::new(n, k, cstar_range(n, k).0).unwrap();
        let v = commutativity_verify(&s, Mode::Exhaustive, &opts()).map_err(|e| e.to_string())?;
        ensure(v.pass, format!("n={n} exhaustive"))?;
    }
    for (n, k, lo, _) in TABLE.iter().copied().filter(|t| [16, 24, 32, 64].contains(&t.0)) {
        let s = TruncScheme::new(n, k, lo).unwrap();
        let mode = Mode::Random {
            seed: 2024,
            trials: 1_000_000,
        };
        let v = commutativity_verify(&s, mode, &opts()).map_err(|e| e.to_string())?;
        ensure(v.pass && v.checked == 1_000_000, format!("n={n} random"))?;
    }
    let arr = build_commutative_truncated_array(&TruncScheme::new(8, 4, 1).unwrap()).unwrap();
    let v = commutativity_verify_array(&arr.without_compensation_bit(1), Mode::Exhaustive, &opts())
        .map_err(|e| e.to_string())?;
    ensure(!v.pass, "mutated array is still commutative")?;
    Ok(format!(
        "exhaustive n = 4..10, 10^6 random at n = 16/24/32/64, mutant fails ({} asymmetric pairs)",
        v.violations
    ))
}

fn directed() -> Check {
    let mut runs = 0;
    for (n, k, lo, hi) in TABLE.iter().copied().filter(|t| [16, 24, 32, 64].contains(&t.0)) {
        for cstar in [lo, hi] {
            let s = TruncScheme::new(n, k, cstar).unwrap();
            let v = directed_verify(&s, 100_000, 77, &opts()).map_err(|e| e.to_string())?;
            ensure(v.pass, format!("n={n} C*={cstar}: {:?}", v.counterexample))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} schemes pass with 10^5 completions per worst-case pattern"))
}

fn helpers() -> Check {
    for m in 0..=16 {
        for kind in Helper::ALL {
            ensure(helper(kind, m) == helper_constructive(kind, m), format!("{kind:?} m={m}"))?;
        }
    }
    let fixed = [(Helper::X, 1, 2), (Helper::Y, 1, 6), (Helper::Z, 1, 4), (Helper::W, 1, 8), (Helper::X, 2, 162)];
    for (kind, m, want) in fixed {
        ensure(helper(kind, m) == want.into(), format!("{kind:?}_{m}"))?;
    }
    Ok("closed forms equal constructive sums for m = 0..16".to_string())
}

fn compare(nl: &Netlist, eval: &ArrayEvaluator, a: &[u128], b: &[u128]) -> Result<(), String> {
    let got = nl.eval_batch(a, b);
    let want = eval.eval_batch(a, b);
    ensure(got == want, format!("netlist and array disagree near a={:#x} b={:#x}", a[0], b[0]))
}

fn emission() -> Check {
    let mut total = 0u64;
    for (n, k, cstar, count) in [(8u32, 4u32, 1i128, 0u64), (16, 12, 4, 100_000), (64, 58, 23, 100_000)] {
        let s = TruncScheme::new(n, k, cstar).unwrap();
        let arr = build_commutative_truncated_array(&s).unwrap();
        let eval = ArrayEvaluator::new(&arr);
        for style in [Style::Dadda, Style::DirectSum] {
            let nl = parse_verilog(&emit_hdl(&arr, &s, style, "acc_mul").unwrap()).map_err(|e| e.to_string())?;
            if count == 0 {
                for a in 0..256u128 {
                    let bs: Vec<u128> = (0..256).collect();
                    for chunk in bs.chunks(64) {
                        compare(&nl, &eval, &vec![a; chunk.len()], chunk)?;
                    }
                }
                total += 65536;
            } else {
                let mask = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
                let mut rng = ChaCha8Rng::seed_from_u64(u64::from(n));
                for i in 0..count / 64 + 1 {
                    let lanes = if i == count / 64 { (count % 64) as usize } else { 64 };
                    let a: Vec<u128> = (0..lanes).map(|_| rng.random::<u128>() & mask).collect();
                    let b: Vec<u128> = (0..lanes).map(|_| rng.random::<u128>() & mask).collect();
                    compare(&nl, &eval, &a, &b)?;
                    if i < 16 {
                        for l in 0..lanes {
                            let (wa, wb) = (Word::from_bits(a[l], n).unwrap(), Word::from_bits(b[l], n).unwrap());
                            let exact = evaluate_array(&arr, &wa, &wb).unwrap();
                            ensure(nl.eval_batch(&a[l..=l], &b[l..=l])[0] == exact, "interpreter disagrees")?;
                        }
                    }
                }
                total += count;
            }
        }
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_fbooth"))
            .args(["emit", "--n", "16", "--module-name", "acc_mul", "--out-dir"])
            .arg(d.path())
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.success(), "emit failed")?;
    }
    for f in ["acc_mul.v", "acc_mul_tb.v", "acc_mul.json"] {
        let x = std::fs::read(dirs[0].path().join(f)).map_err(|e| e.to_string())?;
        let y = std::fs::read(dirs[1].path().join(f)).map_err(|e| e.to_string())?;
        ensure(x == y, format!("{f} differs between runs"))?;
    }
    Ok(format!("{total} vectors agree across both styles, emitted files byte-stable"))
}

fn column_k() -> Check {
    let mut checked = Vec::new();
    for (n, k, lo, _) in TABLE {
        if n % 2 == 1 {
            continue;
        }
        let s = TruncScheme::new(n, k, lo).unwrap();
        let comm = build_commutative_truncated_array(&s).unwrap();
        let plain = build_truncated_array(&s).unwrap();
        let (hc, ht) = (height_profile(&comm), height_profile(&plain));
        for w in 0..(2 * n) as usize {
            let extra = if w == k as usize { (k / 2) as usize } else { 0 };
            ensure(hc[w] == ht[w] + extra, format!("n={n} column {w}: {} vs {}", hc[w], ht[w]))?;
        }
        ensure(comm.compensation_bits() == (k / 2) as usize, format!("n={n} bit count"))?;
        checked.push(n.to_string());
    }
    Ok(format!("exactly k/2 extra bits in column k for n = {} (n = 53 has no Booth array)", checked.join("/")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("parameter table", parameter_table),
        ("delta bound tightness", delta_tightness),
        ("exhaustive faithful rounding", exhaustive_faithful),
        ("commutativity", commutativity),
        ("directed wide-width verification", directed),
        ("helper coherence", helpers),
        ("emission equivalence", emission),
        ("column-k structure", column_k),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
