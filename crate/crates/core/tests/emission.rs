use std::path::PathBuf;

use fbooth::booth::{build_commutative_truncated_array, evaluate_array, height_profile, TruncScheme};
use fbooth::rtl::{emit_hdl, netlist_to_verilog, parse_verilog, reduce_to_netlist, Style};
use fbooth::word::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/mul16.v")
}

fn golden_text() -> String {
    let s = TruncScheme::new(16, 12, 4).unwrap();
    let arr = build_commutative_truncated_array(&s).unwrap();
    emit_hdl(&arr, &s, Style::Dadda, "mul16").unwrap()
}

/// Set `FBOOTH_BLESS=1` to rewrite the snapshot after an intended change.
#[test]
fn golden_n16_dadda() {
    let text = golden_text();
    if std::env::var_os("FBOOTH_BLESS").is_some() {
        std::fs::write(golden_path(), &text).unwrap();
    }
    let stored = std::fs::read_to_string(golden_path()).expect("golden file present");
    assert!(stored == text, "emitted text differs from tests/golden/mul16.v");
    assert_eq!(golden_text(), text);
}

#[test]
fn parsed_golden_matches_array() {
    let s = TruncScheme::new(16, 12, 4).unwrap();
    let arr = build_commutative_truncated_array(&s).unwrap();
    let nl = parse_verilog(&golden_text()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let (a, b) = (rng.random::<u16>() as u128, rng.random::<u16>() as u128);
        let (wa, wb) = (Word::from_bits(a, 16).unwrap(), Word::from_bits(b, 16).unwrap());
        assert_eq!(nl.eval_batch(&[a], &[b])[0], evaluate_array(&arr, &wa, &wb).unwrap());
    }
}

#[test]
fn emitted_n8_exhaustive_equivalence() {
    let s = TruncScheme::new(8, 4, 1).unwrap();
    let arr = build_commutative_truncated_array(&s).unwrap();
    for style in [Style::Dadda, Style::DirectSum] {
        let nl = parse_verilog(&emit_hdl(&arr, &s, style, "m8").unwrap()).unwrap();
        for a in 0..256u128 {
            let bs: Vec<u128> = (0..256).collect();
            for chunk in bs.chunks(64) {
                let got = nl.eval_batch(&vec![a; chunk.len()], chunk);
                for (i, &b) in chunk.iter().enumerate() {
                    let (wa, wb) = (Word::from_bits(a, 8).unwrap(), Word::from_bits(b, 8).unwrap());
                    assert_eq!(got[i], evaluate_array(&arr, &wa, &wb).unwrap(), "{style} {a} {b}");
                }
            }
        }
    }
}

#[test]
fn random_equivalence_at_wide_widths() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, k, c) in [(32u32, 26u32, 10i128), (64, 58, 23)] {
        let s = TruncScheme::new(n, k, c).unwrap();
        let arr = build_commutative_truncated_array(&s).unwrap();
        let nl = reduce_to_netlist(&arr, Style::Dadda);
        let mask = if n == 64 { u64::MAX as u128 } else { (1u128 << n) - 1 };
        for _ in 0..64 {
            let a: Vec<u128> = (0..64).map(|_| rng.random::<u128>() & mask).collect();
            let b: Vec<u128> = (0..64).map(|_| rng.random::<u128>() & mask).collect();
            let got = nl.eval_batch(&a, &b);
            for i in 0..64 {
                let (wa, wb) = (Word::from_bits(a[i], n).unwrap(), Word::from_bits(b[i], n).unwrap());
                assert_eq!(got[i], evaluate_array(&arr, &wa, &wb).unwrap());
            }
        }
        let text = netlist_to_verilog(&nl, "m", &[]).unwrap();
        assert_eq!(parse_verilog(&text).unwrap().cells, nl.cells);
    }
}

#[test]
fn column_k_capacity() {
    for (n, k, c) in [(8u32, 4u32, 1i128), (16, 12, 4), (24, 20, 7), (32, 26, 10), (64, 58, 23)] {
        let s = TruncScheme::new(n, k, c).unwrap();
        let comm = build_commutative_truncated_array(&s).unwrap();
        let plain = fbooth::booth::build_truncated_array(&s).unwrap();
        assert_eq!(comm.compensation_bits(), (k / 2) as usize);
        let (hc, ht) = (height_profile(&comm), height_profile(&plain));
        assert_eq!(hc[k as usize], ht[k as usize] + (k / 2) as usize);
        let rows = ht.iter().copied().max().unwrap();
        assert!(hc[k as usize] <= rows + (k / 2) as usize);
    }
}

#[test]
fn emission_is_deterministic() {
    let s = TruncScheme::new(24, 20, 7).unwrap();
    let arr = build_commutative_truncated_array(&s).unwrap();
    for style in [Style::Dadda, Style::DirectSum] {
        assert_eq!(
            emit_hdl(&arr, &s, style, "m").unwrap(),
            emit_hdl(&build_commutative_truncated_array(&s).unwrap(), &s, style, "m").unwrap()
        );
    }
}
