//! Faithful-rounding and commutativity oracles with exhaustive, random and
//! directed harnesses.
//!
//! All harnesses evaluate the compiled array ([`ArrayEvaluator`]) 64 operand
//! pairs at a time over fixed chunks, so verdicts do not depend on how many
//! workers run them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::booth::{build_commutative_truncated_array, ArrayEvaluator, PPArray, TruncScheme, LANES};
use crate::error::VerifyError;
use crate::exec::Exec;
use crate::params::worst_case_patterns;
use crate::word::Word;

/// Enumerations above `2^LIMIT_LOG2` cases are refused without an override.
pub const LIMIT_LOG2: u32 = 28;

const CHUNK: u64 = 1 << 12;

/// Outcome of checking one `(a, b, out)` triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseVerdict {
    pub pass: bool,
    /// `out - floor(a*b / 2^n)`.
    pub error: i128,
    /// Whether `a*b` is a multiple of `2^n`.
    pub exact: bool,
}

fn mask(n: u32) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn sign_extend(bits: u128, n: u32) -> i128 {
    let shift = 128 - n;
    ((bits << shift) as i128) >> shift
}

#[inline]
fn classify(n: u32, a: u128, b: u128, out: u128) -> CaseVerdict {
    let p = sign_extend(a, n) * sign_extend(b, n);
    let q = p >> n;
    let exact = p & (mask(n) as i128) == 0;
    let error = sign_extend(out, n) - q;
    let pass = if exact { error == 0 } else { error == 0 || error == 1 };
    CaseVerdict { pass, error, exact }
}

/// Signed-arithmetic faithfulness check of `out` against `a * b`.
pub fn faithful_check(a: &Word, b: &Word, out: &Word) -> Result<CaseVerdict, VerifyError> {
    let n = a.width();
    if b.width() != n || out.width() != n {
        return Err(VerifyError::WidthMismatch {
            a: n,
            b: b.width(),
            out: out.width(),
        });
    }
    Ok(classify(n, a.bits(), b.bits(), out.bits()))
}

/// The same check phrased on bit vectors: with `y` the `2n`-bit product,
/// `lsbs == 0 ? out == msbs : (out - msbs) mod 2^n <= 1`.
pub fn faithful_check_bits(a: &Word, b: &Word, out: &Word) -> bool {
    let n = a.width();
    let y = (a.signed_value() * b.signed_value()) as u128 & mask(2 * n);
    let lsbs = y & mask(n);
    let msbs = y >> n;
    let diff = out.bits().wrapping_sub(msbs) & mask(n);
    if lsbs == 0 {
        out.bits() == msbs
    } else {
        diff <= 1
    }
}

/// A failing case. `expected` lists the acceptable signed outputs. All values
/// fit in 64 bits for `n <= 64`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: i64,
    pub b: i64,
    pub out: i64,
    pub expected: Vec<i64>,
    #[serde(skip)]
    order: (u128, u128),
}

impl Counterexample {
    fn faithful(n: u32, a: u128, b: u128, out: u128) -> Self {
        let (sa, sb) = (sign_extend(a, n), sign_extend(b, n));
        let p = sa * sb;
        let q = p >> n;
        let expected = if p & (mask(n) as i128) == 0 { vec![q] } else { vec![q, q + 1] };
        Self {
            a: sa as i64,
            b: sb as i64,
            out: sign_extend(out, n) as i64,
            expected: expected.into_iter().map(|e| e as i64).collect(),
            order: (a, b),
        }
    }

    fn swapped(n: u32, a: u128, b: u128, out: u128, other: u128) -> Self {
        Self {
            a: sign_extend(a, n) as i64,
            b: sign_extend(b, n) as i64,
            out: sign_extend(out, n) as i64,
            expected: vec![sign_extend(other, n) as i64],
            order: (a, b),
        }
    }

    /// Raw operand patterns, used to pick the lexicographically first failure.
    pub fn order(&self) -> (u128, u128) {
        self.order
    }
}

/// Occurrences of each error value `out - floor(a*b / 2^n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub zero: u64,
    pub one: u64,
    pub other: u64,
}

/// Aggregated result of a harness run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
    pub checked: u64,
    pub violations: u64,
    pub histogram: Histogram,
}

impl Verdict {
    pub fn empty() -> Self {
        Self {
            pass: true,
            ..Self::default()
        }
    }

    /// Associative, commutative merge; the lexicographically first
    /// counterexample is kept.
    pub fn merge(self, other: Verdict) -> Verdict {
        let counterexample = match (self.counterexample, other.counterexample) {
            (Some(x), Some(y)) => Some(if y.order < x.order { y } else { x }),
            (x, y) => x.or(y),
        };
        Verdict {
            pass: counterexample.is_none(),
            counterexample,
            checked: self.checked + other.checked,
            violations: self.violations + other.violations,
            histogram: Histogram {
                zero: self.histogram.zero + other.histogram.zero,
                one: self.histogram.one + other.histogram.one,
                other: self.histogram.other + other.histogram.other,
            },
        }
    }

    fn fail(&mut self, cex: Counterexample) {
        self.violations += 1;
        self.pass = false;
        match &self.counterexample {
            Some(c) if c.order <= cex.order => {}
            _ => self.counterexample = Some(cex),
        }
    }
}

/// Harness settings shared by every mode.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub exec: Exec,
    /// Lifts the [`LIMIT_LOG2`] cost guard.
    pub allow_large: bool,
}

impl Options {
    pub fn with_exec(exec: Exec) -> Self {
        Self {
            exec,
            allow_large: false,
        }
    }

    fn guard(&self, cases_log2: u32) -> Result<(), VerifyError> {
        if cases_log2 > LIMIT_LOG2 && !self.allow_large {
            return Err(VerifyError::CostGuard {
                cases_log2,
                limit_log2: LIMIT_LOG2,
            });
        }
        Ok(())
    }
}

/// Commutativity harness mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

fn faithful_batch(eval: &ArrayEvaluator, a: &[u128], b: &[u128], v: &mut Verdict) {
    let n = eval.n();
    let outs = eval.round_batch(a, b);
    for ((&x, &y), &out) in a.iter().zip(b).zip(&outs) {
        let c = classify(n, x, y, out);
        v.checked += 1;
        match c.error {
            0 => v.histogram.zero += 1,
            1 => v.histogram.one += 1,
            _ => v.histogram.other += 1,
        }
        if !c.pass {
            v.fail(Counterexample::faithful(n, x, y, out));
        }
    }
}

fn swap_batch(eval: &ArrayEvaluator, a: &[u128], b: &[u128], v: &mut Verdict) {
    let n = eval.n();
    let ab = eval.round_batch(a, b);
    let ba = eval.round_batch(b, a);
    for i in 0..a.len() {
        v.checked += 1;
        if ab[i] != ba[i] {
            v.fail(Counterexample::swapped(n, a[i], b[i], ab[i], ba[i]));
        }
    }
}

type Batch = fn(&ArrayEvaluator, &[u128], &[u128], &mut Verdict);

fn run_exhaustive(eval: &ArrayEvaluator, opts: &Options, batch: Batch) -> Result<Verdict, VerifyError> {
    let n = eval.n();
    opts.guard(2 * n)?;
    let total: u128 = 1u128 << (2 * n);
    let chunks = total.div_ceil(u128::from(CHUNK)) as u64;
    let m = mask(n);
    Ok(opts.exec.map_reduce(
        chunks,
        |c| {
            let mut v = Verdict::empty();
            let start = u128::from(c) * u128::from(CHUNK);
            let end = (start + u128::from(CHUNK)).min(total);
            let mut idx = start;
            let (mut a, mut b) = (Vec::with_capacity(LANES), Vec::with_capacity(LANES));
            while idx < end {
                a.clear();
                b.clear();
                let stop = (idx + LANES as u128).min(end);
                for i in idx..stop {
                    a.push(i >> n);
                    b.push(i & m);
                }
                batch(eval, &a, &b, &mut v);
                idx = stop;
            }
            v
        },
        Verdict::empty,
        Verdict::merge,
    ))
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_random(eval: &ArrayEvaluator, seed: u64, trials: u64, exec: Exec, batch: Batch) -> Verdict {
    let m = mask(eval.n());
    exec.map_reduce(
        trials.div_ceil(CHUNK),
        |c| {
            let mut rng = chunk_rng(seed, c);
            let mut v = Verdict::empty();
            let mut left = CHUNK.min(trials - c * CHUNK);
            while left > 0 {
                let lanes = left.min(LANES as u64) as usize;
                let a: Vec<u128> = (0..lanes).map(|_| rng.random::<u128>() & m).collect();
                let b: Vec<u128> = (0..lanes).map(|_| rng.random::<u128>() & m).collect();
                batch(eval, &a, &b, &mut v);
                left -= lanes as u64;
            }
            v
        },
        Verdict::empty,
        Verdict::merge,
    )
}

fn scheme_evaluator(scheme: &TruncScheme) -> Result<ArrayEvaluator, VerifyError> {
    Ok(ArrayEvaluator::new(&build_commutative_truncated_array(scheme)?))
}

/// Checks every operand pair of the compensated array for `scheme`.
pub fn exhaustive_verify(scheme: &TruncScheme, opts: &Options) -> Result<Verdict, VerifyError> {
    opts.guard(2 * scheme.n())?;
    exhaustive_verify_array(&build_commutative_truncated_array(scheme)?, opts)
}

/// [`exhaustive_verify`] on an arbitrary array.
pub fn exhaustive_verify_array(arr: &PPArray, opts: &Options) -> Result<Verdict, VerifyError> {
    opts.guard(2 * arr.n())?;
    run_exhaustive(&ArrayEvaluator::new(arr), opts, faithful_batch)
}

/// Uniform random operand pairs, reproducible from `seed`.
pub fn random_verify(scheme: &TruncScheme, seed: u64, trials: u64, opts: &Options) -> Result<Verdict, VerifyError> {
    let eval = scheme_evaluator(scheme)?;
    Ok(run_random(&eval, seed, trials, opts.exec, faithful_batch))
}

/// `round(a, b) == round(b, a)` for the compensated array of `scheme`.
pub fn commutativity_verify(scheme: &TruncScheme, mode: Mode, opts: &Options) -> Result<Verdict, VerifyError> {
    if mode == Mode::Exhaustive {
        opts.guard(2 * scheme.n())?;
    }
    commutativity_verify_array(&build_commutative_truncated_array(scheme)?, mode, opts)
}

/// [`commutativity_verify`] on an arbitrary (for instance mutated) array.
pub fn commutativity_verify_array(arr: &PPArray, mode: Mode, opts: &Options) -> Result<Verdict, VerifyError> {
    let eval = ArrayEvaluator::new(arr);
    match mode {
        Mode::Exhaustive => run_exhaustive(&eval, opts, swap_batch),
        Mode::Random { seed, trials } => Ok(run_random(&eval, seed, trials, opts.exec, swap_batch)),
    }
}

/// Low-bit operand pairs that attain the extremes of the truncation error,
/// in both operand orders.
pub fn directed_low_patterns(k: u32) -> Vec<(u128, u128)> {
    let mut out: Vec<(u128, u128)> = Vec::new();
    for p in worst_case_patterns(k).expect("k is even and >= 2") {
        if !p.is_extremal() {
            continue;
        }
        for pair in [(p.a_bits(), p.b_bits()), (p.b_bits(), p.a_bits())] {
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}

/// Embeds the worst-case low-`k`-bit patterns under `highbit_trials` high-bit
/// completions each. The first two completions are all-zero and all-one high
/// bits; the rest are random.
pub fn directed_verify(
    scheme: &TruncScheme,
    highbit_trials: u64,
    seed: u64,
    opts: &Options,
) -> Result<Verdict, VerifyError> {
    let eval = scheme_evaluator(scheme)?;
    let (n, k) = (scheme.n(), scheme.k());
    let patterns = directed_low_patterns(k);
    let per_pattern = highbit_trials.div_ceil(CHUNK);
    let high = mask(n - k);
    Ok(opts.exec.map_reduce(
        per_pattern * patterns.len() as u64,
        |c| {
            let (lo_a, lo_b) = patterns[(c / per_pattern) as usize];
            let first = (c % per_pattern) * CHUNK;
            let last = (first + CHUNK).min(highbit_trials);
            let mut rng = chunk_rng(seed, c);
            let completion = |t: u64, rng: &mut ChaCha8Rng| match t {
                0 => 0,
                1 => high,
                _ => rng.random::<u128>() & high,
            };
            let mut v = Verdict::empty();
            let mut t = first;
            while t < last {
                let stop = (t + LANES as u64).min(last);
                let (mut a, mut b) = (Vec::with_capacity(LANES), Vec::with_capacity(LANES));
                for i in t..stop {
                    a.push((completion(i, &mut rng) << k) | lo_a);
                    b.push((completion(i, &mut rng) << k) | lo_b);
                }
                faithful_batch(&eval, &a, &b, &mut v);
                t = stop;
            }
            v
        },
        Verdict::empty,
        Verdict::merge,
    ))
}
