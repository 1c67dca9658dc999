use fbooth::booth::{build_commutative_truncated_array, split_m_delta, ArrayEvaluator, TruncScheme};
use fbooth::params::{c_range, k_star};
use fbooth::verify::{
    commutativity_verify, commutativity_verify_array, directed_verify, exhaustive_verify, random_verify, Mode,
    Options,
};
use fbooth::{Exec, Word};
use proptest::prelude::*;

fn opts() -> Options {
    Options::with_exec(Exec::default())
}

#[test]
fn every_accepted_constant_is_faithful_up_to_n8() {
    for n in [4u32, 6, 8] {
        let k = k_star(n).unwrap();
        let r = c_range(n, k).unwrap();
        for cstar in r.cstars() {
            let s = TruncScheme::new(n, k, i128::try_from(cstar).unwrap()).unwrap();
            let v = exhaustive_verify(&s, &opts()).unwrap();
            assert!(v.pass, "n={n} C*={}", s.c_star());
            assert_eq!(v.checked, 1 << (2 * n));
            assert!(v.histogram.zero > 0 && v.histogram.one > 0);
        }
    }
}

#[test]
fn constants_just_outside_the_range_fail_at_n8() {
    let r = c_range(8, 4).unwrap();
    let lo = i128::try_from(r.cstar_min.clone()).unwrap() - 1;
    let hi = i128::try_from(r.cstar_max.clone()).unwrap() + 1;
    for cstar in [lo, hi] {
        let s = TruncScheme::unvalidated(8, 4, cstar).unwrap();
        let v = exhaustive_verify(&s, &opts()).unwrap();
        assert!(!v.pass, "C*={cstar}");
        let cex = v.counterexample.unwrap();
        assert!(!cex.expected.contains(&cex.out));
    }
}

#[test]
fn commutative_exhaustively_and_mutants_are_not() {
    for n in [4u32, 6, 8] {
        let k = k_star(n).unwrap();
        let cstar = i128::try_from(c_range(n, k).unwrap().cstar_min).unwrap();
        let s = TruncScheme::new(n, k, cstar).unwrap();
        assert!(commutativity_verify(&s, Mode::Exhaustive, &opts()).unwrap().pass);
    }
    let arr = build_commutative_truncated_array(&TruncScheme::new(8, 4, 1).unwrap()).unwrap();
    let v = commutativity_verify_array(&arr.without_compensation_bit(0), Mode::Exhaustive, &opts()).unwrap();
    assert!(!v.pass);
}

#[test]
fn directed_at_wide_widths() {
    for (n, k, lo, hi) in [(24u32, 20u32, 7i128, 7i128), (32, 26, 10, 53)] {
        for cstar in [lo, hi] {
            let s = TruncScheme::new(n, k, cstar).unwrap();
            assert!(directed_verify(&s, 4096, 17, &opts()).unwrap().pass, "n={n} {cstar}");
        }
    }
}

#[test]
fn verdicts_do_not_depend_on_scheduling() {
    let s = TruncScheme::new(16, 12, 4).unwrap();
    let run = |exec| random_verify(&s, 99, 20_000, &Options::with_exec(exec)).unwrap();
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
    let run = |exec| directed_verify(&s, 5000, 3, &Options::with_exec(exec)).unwrap();
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
    let r = Mode::Random { seed: 4, trials: 10_000 };
    let run = |exec| commutativity_verify(&s, r, &Options::with_exec(exec)).unwrap();
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The compensated array value is the kept part of the product plus `C`.
    #[test]
    fn array_value_is_m_plus_c(a in any::<u64>(), b in any::<u64>(), pick in 0usize..4) {
        let (n, k, c) = [(16u32, 12u32, 4i128), (24, 20, 7), (32, 26, 53), (64, 58, 41)][pick];
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let s = TruncScheme::new(n, k, c).unwrap();
        let eval = ArrayEvaluator::new(&build_commutative_truncated_array(&s).unwrap());
        let wa = Word::from_bits(u128::from(a & mask), n).unwrap();
        let wb = Word::from_bits(u128::from(b & mask), n).unwrap();
        let (m, _) = split_m_delta(&wa, &wb, k).unwrap();
        prop_assert_eq!(eval.eval(&wa, &wb), m + s.c());
        prop_assert_eq!(eval.eval(&wa, &wb), eval.eval(&wb, &wa));
    }
}
