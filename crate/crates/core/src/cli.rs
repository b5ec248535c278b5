//! Command-line front end.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the witness is
//! printed), 2 for usage errors and unreadable or malformed input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::builder::RangedU64ValueParser;
use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::Error;
use crate::induced::{intersection_inclusion_check, InducedMatroid, CONSTRUCTION_THEOREMS};
use crate::matroid::{self, all_passed};
use crate::oracle::{all_clean, cross_validate, sweep_all_partitions};
use crate::rough::{check_approx_properties, CheckMode, Partition};
use crate::setfam::SetFamily;
use crate::universe::{Subset, Universe, DEFAULT_CAP, HARD_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "roughmat",
    version,
    about = "Support matroids of equivalence relations, with exhaustive checks"
)]
pub struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Largest universe for which power sets are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP,
          value_parser = RangedU64ValueParser::<usize>::new().range(1..=HARD_CAP as u64))]
    pub cap: usize,

    /// Seed for sampled property checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper approximation of a set, and whether it is precise.
    Approx {
        partition: PathBuf,
        /// Family file holding exactly one set.
        set: PathBuf,
        /// Also check the approximation-operator properties.
        #[arg(long)]
        properties: bool,
        /// Pair count when the universe exceeds the cap.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Print S(R), B(R), I(R), H(R), L(R) and r(U) of the induced matroid.
    Induce { partition: PathBuf },
    /// Check a family against an axiom system.
    CheckAxioms(CheckAxiomsArgs),
    /// Cross-validate every induced structure against brute force.
    Verify { partition: PathBuf },
    /// Cross-validate every partition of {1..n}.
    Sweep { n: usize },
    /// Compare S of the common refinement with the intersection of the S families.
    Intersect { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("system").required(true).args(["independents", "supports", "closed"])))]
pub struct CheckAxiomsArgs {
    /// I1-I3
    #[arg(long)]
    pub independents: bool,
    /// S1-S3
    #[arg(long)]
    pub supports: bool,
    /// F1-F3
    #[arg(long)]
    pub closed: bool,
    /// Universe labels in order; defaults to the elements of the family.
    #[arg(long)]
    pub universe: Option<String>,
    pub family: PathBuf,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

enum Failure {
    Usage(String),
    // partial report plus failure line
    Check(String),
}

impl Failure {
    fn input(path: &Path, err: Error) -> Failure {
        if err.is_check_failure() {
            Failure::Check(check_line(&err))
        } else {
            Failure::Usage(format!("error: {}: {err}", path.display()))
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        if err.is_check_failure() {
            Failure::Check(check_line(&err))
        } else {
            Failure::Usage(format!("error: {err}"))
        }
    }
}

fn check_line(err: &Error) -> String {
    match err {
        Error::TheoremViolation { theorem, detail } => {
            format!("THEOREM {theorem} FAIL {detail}\n")
        }
        Error::AxiomFailure(report) => format!("{report}\n"),
        other => format!("FAIL {other}\n"),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::new(EXIT_OK, text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let mut out = String::new();
    let result = execute(cli, &mut out);
    let (code, stderr) = match result {
        Ok(true) => (EXIT_OK, String::new()),
        Ok(false) => (EXIT_CHECK_FAILED, String::new()),
        Err(Failure::Check(line)) => {
            out.push_str(&line);
            (EXIT_CHECK_FAILED, String::new())
        }
        Err(Failure::Usage(msg)) => return Outcome::usage(msg + "\n"),
    };
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &out) {
            return Outcome::usage(format!("error: {}: {e}\n", path.display()));
        }
        out.clear();
    }
    Outcome {
        code,
        stdout: out,
        stderr,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("error: {}: {e}", path.display())))
}

fn load_partition(path: &Path, cap: usize) -> Result<Partition, Failure> {
    Partition::parse(&read(path)?, cap).map_err(|e| Failure::input(path, e))
}

fn write_family(out: &mut String, name: &str, fam: &SetFamily) {
    let _ = writeln!(out, "FAMILY {name} size={}", fam.len());
    for s in fam.iter() {
        let _ = writeln!(out, "{s}");
    }
}

fn execute(cli: &Cli, out: &mut String) -> Result<bool, Failure> {
    match &cli.command {
        Command::Approx {
            partition,
            set,
            properties,
            samples,
        } => {
            let p = load_partition(partition, cli.cap)?;
            let fam = SetFamily::parse(&read(set)?, Some(p.universe()), cli.cap)
                .map_err(|e| Failure::input(set, e))?;
            if fam.len() != 1 {
                return Err(Failure::Usage(format!(
                    "error: {}: expected exactly one set, found {}",
                    set.display(),
                    fam.len()
                )));
            }
            let x = fam.iter().next().expect("one member");
            let lower = p.lower_approx(&x)?;
            let upper = p.upper_approx(&x)?;
            let verdict = if p.is_precise(&x)? {
                "PRECISE"
            } else {
                "ROUGH"
            };
            let _ = writeln!(out, "APPROX X={x} lower={lower} upper={upper} {verdict}");
            if *properties {
                let mode = if p.universe().ensure_exhaustive().is_ok() {
                    CheckMode::Exhaustive
                } else {
                    CheckMode::Sampled {
                        samples: *samples,
                        seed: cli.seed,
                    }
                };
                let report = check_approx_properties(&p, mode)?;
                out.push_str(&report.to_string());
                return Ok(report.all_passed());
            }
            Ok(true)
        }
        Command::Induce { partition } => {
            let p = load_partition(partition, cli.cap)?;
            let _ = writeln!(out, "PARTITION {p}");
            let m = InducedMatroid::new(&p)?;
            for name in CONSTRUCTION_THEOREMS {
                let _ = writeln!(out, "THEOREM {name} PASS");
            }
            write_family(out, "S(R)", m.supports());
            write_family(out, "B(R)", m.bases());
            write_family(out, "I(R)", m.independents());
            write_family(out, "H(R)", m.hyperplanes());
            write_family(out, "L(R)", m.closed_sets());
            let _ = writeln!(out, "RANK r(U)={}", m.rank(&Subset::full(p.universe()))?);
            Ok(true)
        }
        Command::CheckAxioms(args) => {
            let universe = match &args.universe {
                Some(labels) => Some(
                    Universe::with_cap(labels.split_whitespace(), cli.cap)
                        .map_err(|e| Failure::Usage(format!("error: --universe: {e}")))?,
                ),
                None => None,
            };
            let fam = SetFamily::parse(&read(&args.family)?, universe.as_ref(), cli.cap)
                .map_err(|e| Failure::input(&args.family, e))?;
            let reports = if args.independents {
                matroid::check_independence_axioms(&fam)
            } else if args.supports {
                matroid::check_support_axioms(&fam)
            } else {
                matroid::check_closedset_axioms(&fam)?
            };
            for r in &reports {
                let _ = writeln!(out, "{r}");
            }
            Ok(all_passed(&reports))
        }
        Command::Verify { partition } => {
            let p = load_partition(partition, cli.cap)?;
            let _ = writeln!(out, "PARTITION {p}");
            let diffs = cross_validate(&p)?;
            for d in &diffs {
                let _ = writeln!(out, "{d}");
            }
            let failures = diffs.iter().filter(|d| !d.is_clean()).count();
            let _ = writeln!(out, "VERIFY diffs={} failures={failures}", diffs.len());
            Ok(all_clean(&diffs))
        }
        Command::Sweep { n } => {
            let summary = sweep_all_partitions(*n)?;
            let _ = writeln!(out, "{summary}");
            if let Some((p, diffs)) = &summary.first_failure {
                let _ = writeln!(out, "PARTITION {p}");
                for d in diffs {
                    let _ = writeln!(out, "{d}");
                }
            }
            Ok(summary.failures == 0)
        }
        Command::Intersect { first, second } => {
            let p1 = load_partition(first, cli.cap)?;
            let p2 = load_partition(second, cli.cap)?;
            let mut a: Vec<&String> = p1.universe().labels().iter().collect();
            let mut b: Vec<&String> = p2.universe().labels().iter().collect();
            a.sort();
            b.sort();
            if a != b {
                return Err(Failure::Usage(
                    "error: the two partitions list different universes".into(),
                ));
            }
            // align element order with the first file
            let p2 = Partition::new(
                p1.universe(),
                &p2.blocks()
                    .map(|b| Subset::from_labels(p1.universe(), b.labels()))
                    .collect::<Result<Vec<_>, _>>()?,
            )?;
            let report = intersection_inclusion_check(&p1, &p2)?;
            let _ = writeln!(out, "REFINED {}", report.refined);
            let _ = writeln!(
                out,
                "SUPPORTS refined={} common={}",
                report.refined_supports, report.common_supports
            );
            let _ = writeln!(out, "{report}");
            Ok(true)
        }
    }
}
