mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fbooth::booth::{build_commutative_truncated_array, TruncScheme};
use fbooth::exec::with_jobs;
use fbooth::params::{c_range, delta_bounds, delta_bounds_brute, k_star, param_row, sweep};
use fbooth::rtl::{certificate, certificate_json, emit_hdl, emit_testbench, Style, Vectors};
use fbooth::verify::{commutativity_verify, directed_verify, exhaustive_verify, random_verify, Mode, Options, Verdict};
use fbooth::Exec;

use report::{bounds_body, Body, EmittedFile, Row, RunReport, SchemeInfo};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fbooth", version, about = "Truncated Booth radix-4 multiplier generator and verifier")]
struct Cli {
    /// Output format. `csv` is only accepted by `sweep`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the verification harnesses.
    #[arg(long, global = true, env = "FBOOTH_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Random,
    Directed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StyleArg {
    Dadda,
    DirectSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TbArg {
    Exhaustive,
    Random,
    Directed,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal truncation and constant range for a width.
    Params {
        #[arg(long)]
        n: u32,
    },
    /// Extremes of the truncation error for `k` removed columns.
    Bounds {
        #[arg(long)]
        k: u32,
        /// Also enumerate every low-bit operand pair.
        #[arg(long)]
        brute: bool,
        /// Lift the enumeration size guard.
        #[arg(long)]
        force: bool,
    },
    /// Check faithful rounding and commutativity of a scheme.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long = "c-star", allow_hyphen_values = true)]
        c_star: i128,
        #[arg(long, value_enum, default_value_t = VerifyMode::Random)]
        mode: VerifyMode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random pairs, or high-bit completions per pattern in directed mode.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Lift the exhaustive enumeration guard.
        #[arg(long)]
        allow_large: bool,
    },
    /// Write `<name>.v`, `<name>_tb.v` and `<name>.json`.
    Emit {
        #[arg(long)]
        n: u32,
        /// Defaults to the optimal truncation.
        #[arg(long)]
        k: Option<u32>,
        /// Defaults to the smallest valid constant.
        #[arg(long = "c-star", allow_hyphen_values = true)]
        c_star: Option<i128>,
        #[arg(long, value_enum, default_value_t = StyleArg::Dadda)]
        style: StyleArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Defaults to `fbooth_mul<n>`.
        #[arg(long)]
        module_name: Option<String>,
        #[arg(long, value_enum, default_value_t = TbArg::Directed)]
        tb: TbArg,
        #[arg(long, default_value_t = 1)]
        tb_seed: u64,
        /// Random vectors, or completions per pattern in directed mode.
        #[arg(long, default_value_t = 64)]
        tb_count: u64,
    },
    /// Parameter table for a list of widths.
    Sweep {
        /// Comma-separated widths, e.g. `8,16,24`.
        #[arg(long, default_value = "")]
        n_list: String,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INVALID,
        msg: e.to_string(),
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_IO,
        msg: format!("{}: {e}", path.display()),
    }
}

struct Outcome {
    scheme: Option<SchemeInfo>,
    pass: bool,
    seeds: Vec<u64>,
    body: Body,
    text: String,
}

fn scheme_info(s: &TruncScheme) -> SchemeInfo {
    SchemeInfo {
        n: s.n(),
        k: s.k(),
        c_star: s.c_star().to_string(),
        c: s.c().to_string(),
        validated: s.is_validated(),
    }
}

fn row_text(r: &Row) -> String {
    format!(
        "n={} k*={} C* in [{}, {}] C in [{}, {}] delta in [{}, {}]\n",
        r.n, r.k_star, r.c_star_min, r.c_star_max, r.cmin, r.cmax, r.delta_lo, r.delta_hi
    )
}

fn verdict_text(label: &str, v: &Verdict, histogram: bool) -> String {
    let mut s = format!(
        "{label}: {} ({} checked, {} violations",
        if v.pass { "PASS" } else { "FAIL" },
        v.checked,
        v.violations
    );
    if histogram {
        write!(s, ", e=0: {}, e=1: {}", v.histogram.zero, v.histogram.one).unwrap();
    }
    s.push_str(")\n");
    if let Some(c) = &v.counterexample {
        writeln!(s, "  counterexample a={} b={} out={} expected {:?}", c.a, c.b, c.out, c.expected).unwrap();
    }
    s
}

fn parse_widths(list: &str) -> Result<Vec<u32>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|e| invalid(format!("bad width `{s}`: {e}"))))
        .collect()
}

fn run(command: &Command, format: Format) -> Result<Outcome, Failure> {
    let opts = Options::with_exec(Exec::default());
    match command {
        Command::Params { n } => {
            let row = Row::from(&param_row(*n).map_err(invalid)?);
            Ok(Outcome {
                scheme: None,
                pass: true,
                seeds: vec![],
                text: row_text(&row),
                body: Body::Params { row },
            })
        }
        Command::Bounds { k, brute, force } => {
            let closed = delta_bounds(*k).map_err(invalid)?;
            let brute = if *brute {
                Some(delta_bounds_brute(*k, *force, opts.exec).map_err(invalid)?)
            } else {
                None
            };
            let body = bounds_body(&closed, brute.as_ref());
            let mut text = format!("k={} delta in [{}, {}]\n", k, closed.lo, closed.hi);
            if let Body::Bounds { brute: Some(b), .. } = &body {
                writeln!(
                    text,
                    "brute force: [{}, {}] argmin {:?} argmax {:?} {}",
                    b.lo,
                    b.hi,
                    b.argmin,
                    b.argmax,
                    if b.agree { "agree" } else { "DISAGREE" }
                )
                .unwrap();
            }
            let pass = match &body {
                Body::Bounds { brute: Some(b), .. } => b.agree,
                _ => true,
            };
            Ok(Outcome {
                scheme: None,
                pass,
                seeds: vec![],
                body,
                text,
            })
        }
        Command::Verify {
            n,
            k,
            c_star,
            mode,
            seed,
            trials,
            allow_large,
        } => {
            // constants outside the faithful range still run, so the harness can
            // report the violation
            let scheme = TruncScheme::new(*n, *k, *c_star)
                .or_else(|_| TruncScheme::unvalidated(*n, *k, *c_star))
                .map_err(invalid)?;
            let opts = Options {
                allow_large: *allow_large,
                ..opts
            };
            let random = Mode::Random {
                seed: *seed,
                trials: *trials,
            };
            let (faithful, commutativity, seeds) = match mode {
                VerifyMode::Exhaustive => (
                    exhaustive_verify(&scheme, &opts).map_err(invalid)?,
                    commutativity_verify(&scheme, Mode::Exhaustive, &opts).map_err(invalid)?,
                    vec![],
                ),
                VerifyMode::Random => (
                    random_verify(&scheme, *seed, *trials, &opts).map_err(invalid)?,
                    commutativity_verify(&scheme, random, &opts).map_err(invalid)?,
                    vec![*seed],
                ),
                VerifyMode::Directed => (
                    directed_verify(&scheme, *trials, *seed, &opts).map_err(invalid)?,
                    commutativity_verify(&scheme, random, &opts).map_err(invalid)?,
                    vec![*seed],
                ),
            };
            let text = verdict_text("faithful", &faithful, true) + &verdict_text("commutative", &commutativity, false);
            Ok(Outcome {
                scheme: Some(scheme_info(&scheme)),
                pass: faithful.pass && commutativity.pass,
                seeds,
                body: Body::Verify {
                    mode: format!("{mode:?}").to_lowercase(),
                    faithful,
                    commutativity,
                },
                text,
            })
        }
        Command::Emit {
            n,
            k,
            c_star,
            style,
            out_dir,
            module_name,
            tb,
            tb_seed,
            tb_count,
        } => {
            let k = match k {
                Some(k) => *k,
                None => k_star(*n).map_err(invalid)?,
            };
            let c_star = match c_star {
                Some(c) => *c,
                None => {
                    let r = c_range(*n, k).map_err(invalid)?;
                    i128::try_from(r.cstar_min).map_err(|_| invalid("constant out of range"))?
                }
            };
            let scheme = TruncScheme::new(*n, k, c_star).map_err(invalid)?;
            let style = match style {
                StyleArg::Dadda => Style::Dadda,
                StyleArg::DirectSum => Style::DirectSum,
            };
            let name = module_name.clone().unwrap_or_else(|| format!("fbooth_mul{n}"));
            let vectors = match tb {
                TbArg::Exhaustive => Vectors::Exhaustive,
                TbArg::Random => Vectors::Random {
                    seed: *tb_seed,
                    count: *tb_count,
                },
                TbArg::Directed => Vectors::Directed {
                    seed: *tb_seed,
                    completions: *tb_count,
                },
            };
            let arr = build_commutative_truncated_array(&scheme).map_err(invalid)?;
            let hdl = emit_hdl(&arr, &scheme, style, &name).map_err(invalid)?;
            let bench = emit_testbench(&scheme, vectors, &name).map_err(invalid)?;
            let cert = certificate_json(&certificate(&scheme, style, &name).map_err(invalid)?);
            std::fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
            let mut files = Vec::new();
            for (file, text) in [
                (format!("{name}.v"), hdl),
                (format!("{name}_tb.v"), bench),
                (format!("{name}.json"), cert),
            ] {
                let path = out_dir.join(file);
                std::fs::write(&path, &text).map_err(|e| io(&path, e))?;
                files.push(EmittedFile {
                    path: path.display().to_string(),
                    bytes: text.len() as u64,
                });
            }
            let text = files.iter().fold(String::new(), |mut s, f| {
                writeln!(s, "wrote {} ({} bytes)", f.path, f.bytes).unwrap();
                s
            });
            let seeds = if *tb == TbArg::Exhaustive { vec![] } else { vec![*tb_seed] };
            Ok(Outcome {
                scheme: Some(scheme_info(&scheme)),
                pass: true,
                seeds,
                body: Body::Emit {
                    style: style.to_string(),
                    module: name,
                    testbench: format!("{tb:?}").to_lowercase(),
                    files,
                },
                text,
            })
        }
        Command::Sweep { n_list } => {
            let widths = parse_widths(n_list)?;
            let rows: Vec<Row> = sweep(&widths).map_err(invalid)?.iter().map(Row::from).collect();
            let text = if format == Format::Csv {
                let mut s = String::from("n,k_star,c_star_min,c_star_max,delta_lo,delta_hi\n");
                for r in &rows {
                    writeln!(s, "{},{},{},{},{},{}", r.n, r.k_star, r.c_star_min, r.c_star_max, r.delta_lo, r.delta_hi)
                        .unwrap();
                }
                s
            } else {
                rows.iter().map(row_text).collect()
            };
            Ok(Outcome {
                scheme: None,
                pass: true,
                seeds: vec![],
                body: Body::Sweep { rows },
                text,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep { .. }) {
        eprintln!("error: csv output is only available for sweep");
        return ExitCode::from(EXIT_INVALID);
    }
    let started = Instant::now();
    let format = cli.format;
    let outcome = with_jobs(cli.jobs, || run(&cli.command, format));
    match outcome {
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
        Ok(o) => {
            match format {
                Format::Json => {
                    let report = RunReport {
                        tool: fbooth::rtl::TOOL.to_string(),
                        version: fbooth::rtl::VERSION.to_string(),
                        command: std::env::args().collect(),
                        scheme: o.scheme,
                        pass: o.pass,
                        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
                        seeds: o.seeds,
                        result: o.body,
                    };
                    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                }
                Format::Text | Format::Csv => print!("{}", o.text),
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}
