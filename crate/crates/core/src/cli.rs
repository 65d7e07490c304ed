//! The `mqw` command line.
//!
//! Exit codes: 0 when every certification passes, 1 on input errors, 2 when a
//! comparison is still undecided at the maximum precision, 3 when a
//! certification is decided and fails.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::extsquare::{expand, norm1_closed, norm1_direct, CoefficientFile};
use crate::interval::{Interval, MAX_PRECISION};
use crate::lemmas::{parse_lemmas, run_suites, SuiteConfig};
use crate::multiquad::MultiQuadField;
use crate::quadunit::{fundamental_unit, log_unit};
use crate::search::{enumerate_min, theorem_report, SearchResult, SearchSpec, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "mqw", version, about = "Certified exterior-square unit norms for real multi-quadratic fields")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Working precision in bits for logarithms of units.
    #[arg(long, global = true, env = "MQW_PRECISION_BITS", default_value_t = 128)]
    pub precision_bits: u32,
    /// Worker threads for search; all cores when omitted.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    /// Comma-separated square-free generators.
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    pub max_coeff: i64,
    #[arg(long, default_value_t = 2)]
    pub max_support: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental unit of Q(√m).
    FundUnit { m: u64 },
    /// Radicands, units and logs of every quadratic subfield.
    Field {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u64>,
    },
    /// Both 1-norm evaluations of an element read from a coefficient file.
    Norm {
        #[arg(long)]
        coeffs: PathBuf,
    },
    /// Minimum norm over a bounded search.
    Search(SearchArgs),
    /// Certify the floor over a bounded search, or run the lemma suites.
    Verify {
        /// `all` runs the group, matrix and unit suites instead of a search.
        #[arg(long)]
        lemmas: Option<String>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1000)]
        m_max: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Bound constants for dimension n, with margins for an optional element.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        coeffs: Option<PathBuf>,
    },
}

/// Exit code and the text written to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn read_coeffs(path: &PathBuf) -> Result<CoefficientFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: malformed coefficient file: {e}", path.display())))
}

fn check_precision(p: u32) -> Result<()> {
    if !(32..=MAX_PRECISION).contains(&p) {
        return Err(Error::InvalidArgument(format!("precision must be between 32 and {MAX_PRECISION} bits, got {p}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct FundUnitReport<'a> {
    schema: u32,
    unit: &'a crate::quadunit::QuadUnit,
    log: Interval,
}

#[derive(Serialize)]
struct NormReport {
    schema: u32,
    generators: Vec<u64>,
    support: usize,
    direct: Interval,
    closed: Interval,
    agree: bool,
}

fn search_outcome(r: &SearchResult, format: Format, verify: bool) -> Outcome {
    let code = if !r.is_decided() {
        EXIT_UNDECIDED
    } else if r.all_above_floor {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let stdout = match (format, verify) {
        (Format::Json, false) => json(r),
        (Format::Json, true) => json(&theorem_report(r)),
        (Format::Csv, _) => r.to_csv(),
        (Format::Text, _) => {
            let t = theorem_report(r);
            let mut s = String::new();
            let _ = writeln!(s, "generators      {:?}", r.generators);
            let _ = writeln!(
                s,
                "search          K = {}, support <= {} of {} slots{}",
                r.max_coeff,
                r.max_support,
                r.slot_count,
                if r.is_complete() { "" } else { " (support capped)" }
            );
            let _ = writeln!(s, "visited         {}", r.visited_count);
            let _ = writeln!(s, "minimum norm    {}", r.minimum_norm);
            let _ = writeln!(s, "minimizers      {}", r.minimizers.len());
            for w in &r.minimizers {
                let terms: Vec<String> = w.coefficients().map(|(b, c, k)| format!("{k}·[{b},{c}]")).collect();
                let _ = writeln!(s, "  {}", terms.join(" + "));
            }
            let _ = writeln!(s, "floor           {}", r.certified_floor);
            let _ = writeln!(s, "margin          {}", r.margin());
            if verify {
                let _ = writeln!(s, "implied floor   {}", t.theorem_floor);
            }
            let status = match code {
                EXIT_OK => "certified",
                EXIT_UNDECIDED => "undecided",
                _ => "FAILED",
            };
            let _ = writeln!(s, "all above floor {} ({status})", r.all_above_floor);
            s
        }
    };
    Outcome::ok(code, stdout)
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let format = if cfg.json { Format::Json } else { cfg.format };
    check_precision(cfg.precision_bits)?;
    let p = cfg.precision_bits;
    let nested_only = |what: &str| -> Result<()> {
        if format == Format::Csv {
            Err(Error::InvalidArgument(format!("csv output is only available for search tables, not {what}")))
        } else {
            Ok(())
        }
    };
    match &cfg.command {
        Command::FundUnit { m } => {
            nested_only("fund-unit")?;
            let u = fundamental_unit(*m)?;
            let log = log_unit(&u, p)?;
            Ok(Outcome::ok(
                EXIT_OK,
                match format {
                    Format::Json => json(&FundUnitReport { schema: 1, unit: &u, log }),
                    _ => format!(
                        "m = {}\nunit = {u}\na = {}, b = {}, k = {}\nnorm = {}\nlog = {log}\n",
                        u.m, u.a, u.b, u.k, u.norm_sign
                    ),
                },
            ))
        }
        Command::Field { gens } => {
            nested_only("field")?;
            let f = MultiQuadField::new(gens, p)?;
            let r = f.report();
            Ok(Outcome::ok(
                EXIT_OK,
                match format {
                    Format::Json => json(&r),
                    _ => {
                        let mut s = format!("generators {:?}, degree {}\n", r.generators, f.degree());
                        for sf in &r.subfields {
                            let _ = writeln!(s, "{}  d = {:<6} u = {}  log = {}", sf.a, sf.radicand, sf.unit, sf.log);
                        }
                        s
                    }
                },
            ))
        }
        Command::Norm { coeffs } => {
            nested_only("norm")?;
            let file = read_coeffs(coeffs)?;
            let report = if file.generators.is_empty() {
                if !file.coefficients.is_empty() {
                    return Err(Error::Parse("coefficients given without generators".into()));
                }
                NormReport {
                    schema: 1,
                    generators: vec![],
                    support: 0,
                    direct: Interval::zero(p),
                    closed: Interval::zero(p),
                    agree: true,
                }
            } else {
                let f = MultiQuadField::new(&file.generators, p)?;
                let w = file.element()?;
                let direct = norm1_direct(&expand(&f, &w)?);
                let closed = norm1_closed(&f, &w)?;
                NormReport {
                    schema: 1,
                    generators: file.generators.clone(),
                    support: w.support_size(),
                    agree: direct.intersects(&closed),
                    direct,
                    closed,
                }
            };
            let code = if report.agree { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome::ok(
                code,
                match format {
                    Format::Json => json(&report),
                    _ => format!(
                        "direct {}\nclosed {}\nagree  {}\n",
                        report.direct, report.closed, report.agree
                    ),
                },
            ))
        }
        Command::Search(a) => {
            let r = enumerate_min(&search_spec(a, p, cfg.threads)?)?;
            Ok(search_outcome(&r, format, false))
        }
        Command::Verify {
            lemmas: Some(sel),
            n_max,
            m_max,
            samples,
            ..
        } => {
            nested_only("lemma suites")?;
            parse_lemmas(sel)?;
            let rep = run_suites(&SuiteConfig {
                n_max: *n_max,
                m_max: *m_max,
                samples: *samples,
                seed: cfg.seed,
            })?;
            let code = if rep.passed() { EXIT_OK } else { EXIT_FAILED };
            Ok(Outcome::ok(
                code,
                match format {
                    Format::Json => json(&rep),
                    _ => {
                        let mut s = String::new();
                        for e in &rep.entries {
                            let n = e.n.map(|n| format!("n={n}")).unwrap_or_default();
                            let _ = writeln!(
                                s,
                                "{} {:<16} {:<5} {}",
                                if e.passed { "PASS" } else { "FAIL" },
                                e.suite,
                                n,
                                e.detail
                            );
                        }
                        s
                    }
                },
            ))
        }
        Command::Verify { search, .. } => {
            let r = enumerate_min(&search_spec(search, p, cfg.threads)?)?;
            Ok(search_outcome(&r, format, true))
        }
        Command::Bounds { n, coeffs } => {
            nested_only("bounds")?;
            let mut rep = BoundReport::new(*n)?;
            if let Some(path) = coeffs {
                let file = read_coeffs(path)?;
                let f = MultiQuadField::new(&file.generators, p)?;
                rep.add_margin(&f, &file.element()?)?;
            }
            let code = if rep.margins.iter().all(|m| m.margin.lo().signum() >= 0) {
                EXIT_OK
            } else if rep.margins.iter().any(|m| m.margin.contains_zero()) {
                EXIT_UNDECIDED
            } else {
                EXIT_FAILED
            };
            Ok(Outcome::ok(
                code,
                match format {
                    Format::Json => json(&rep),
                    _ => {
                        let mut s = format!("n = {}\nproto bound   {}\ntheorem bound {}\n", rep.n, rep.proto_bound, rep.theorem_bound);
                        if let Some(cf) = &rep.cf_bound {
                            let _ = writeln!(s, "2-norm bound (j = {}, degree {}) {}, floor {}", cf.j, cf.degree, cf.rhs, cf.floor);
                        }
                        for m in &rep.margins {
                            let _ = writeln!(s, "element norm {} margin {}", m.norm, m.margin);
                        }
                        s
                    }
                },
            ))
        }
    }
}

fn search_spec(a: &SearchArgs, p: u32, threads: Option<usize>) -> Result<SearchSpec> {
    if a.gens.is_empty() {
        return Err(Error::InvalidArgument("--gens is required".into()));
    }
    let mut spec = SearchSpec::new(MultiQuadField::new(&a.gens, p)?, a.max_coeff, a.max_support);
    spec.thread_count = threads;
    spec.budget = a.budget;
    Ok(spec)
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cfg) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fund_unit_13() {
        let o = run(["mqw", "fund-unit", "13"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("a = 3, b = 1, k = 2"), "{}", o.stdout);
        let o = run(["mqw", "fund-unit", "12"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("square-free"), "{}", o.stderr);
    }

    #[test]
    fn bounds_2() {
        let o = run(["mqw", "bounds", "--n", "2"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("3.3930"));
        assert!(o.stdout.contains("0.8482"));
        let j = run(["mqw", "--json", "bounds", "--n", "2"]);
        assert_eq!(j, run(["mqw", "bounds", "--n", "2", "--format", "json"]));
        assert!(j.stdout.contains("\"schema\": 1"));
    }

    #[test]
    fn csv_is_search_only() {
        let o = run(["mqw", "--format", "csv", "bounds", "--n", "2"]);
        assert_eq!(o.code, 1);
        let o = run(["mqw", "--format", "csv", "search", "--gens", "2,5", "--max-support", "1"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "minimizer,b,c,n\n0,1,2,1\n");
    }

    #[test]
    fn budget_refusal() {
        let o = run(["mqw", "search", "--gens", "2,3,5", "--max-coeff", "3", "--max-support", "3", "--budget", "10"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("budget"), "{}", o.stderr);
    }
}
