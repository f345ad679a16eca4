//! `tcbound`: command-line front end for covers, nerves, cohomology and TC bounds.
//!
//! Exit codes: 0 on success, 1 when a verification fails (a family that is
//! not the claimed cover, inconsistent bounds, a failing catalog entry), 2 on
//! malformed input. Reports go to standard output or `--out`; diagnostics go
//! to standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use tcbound_core::bounds::{BoundsError, FactBase, Interval};
use tcbound_core::catalog::{Catalog, CatalogError, EntryOutcome, Mismatch};
use tcbound_core::cohomology::cohomology_z2;
use tcbound_core::cover::{ostrand_extend, product_cover, CoverError};
use tcbound_core::formats::{
    action_for_family, complex_from_json, complex_to_json, cohomology_to_json, family_from_json, family_to_json,
    metric_from_json, parse_assertion, read_file, report_to_json, space_from_path, zcl_to_json, FormatError,
};
use tcbound_core::nerve::{extend_same_nerve, nerve_of, MetricError};
use tcbound_core::ring::zero_divisor_cup_length;

#[derive(Parser)]
#[command(name = "tcbound", version, about = "Finite cover calculus and topological complexity bounds")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a family is a k-cover of its points.
    VerifyCover {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Extend an (n+1)-set cover to an (m+1)-set (n+1)-cover.
    OstrandExtend {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Permutation action the sets must be invariant under.
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Diagonal product of an (n+1)-cover and an (m+1)-cover of equal length.
    ProductCover {
        #[arg(long)]
        family_a: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        family_b: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Nerve of a family, as a complex on the set indices.
    Nerve {
        #[arg(long)]
        family: PathBuf,
    },
    /// Extend a cover of a subset of a metric space to the whole space with the same nerve.
    ExtendNerve {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    /// Betti numbers and cup products over Z/2.
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Zero-divisor cup length over Z/2.
    Zcl {
        #[arg(long)]
        complex: PathBuf,
        /// Stop searching once this length is reached.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Derive interval bounds for a described space.
    Bounds {
        #[arg(long)]
        space: PathBuf,
        /// Extra fact `KEY=LO..HI`, e.g. `TC_space(X)=2..inf`. Repeatable.
        #[arg(long = "assert", value_name = "KEY=LO..HI")]
        assertions: Vec<String>,
    },
    /// Check the built-in catalog against the engine.
    CatalogRun {
        /// Only run this entry.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    /// Input was well formed but failed a check.
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

fn is_verification_failure(e: &CoverError) -> bool {
    matches!(e, CoverError::NotACover { .. } | CoverError::NotInvariant { .. } | CoverError::ProductPrecondition(_))
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        if is_verification_failure(&e) {
            CliError::Verification(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Inconsistency { .. } | BoundsError::Replay { .. } | BoundsError::NoFixpoint(_) => {
                CliError::Verification(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Cover(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Cover(c) => c.into(),
            FormatError::Metric(m) => m.into(),
            FormatError::Bounds(b) => b.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// A rendered report and whether the command's check passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

fn load(path: &Path) -> Result<String, CliError> {
    Ok(read_file(path)?)
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn interval_json(i: &Interval) -> serde_json::Value {
    match i.hi() {
        Some(h) => json!({"lo": i.lo(), "hi": h}),
        None => json!({"lo": i.lo(), "hi": "inf"}),
    }
}

fn outcome_json(o: &EntryOutcome) -> serde_json::Value {
    let mismatches: Vec<serde_json::Value> = o
        .mismatches
        .iter()
        .map(|m| match m {
            Mismatch::Bound { quantity, expected, actual } => json!({
                "quantity": quantity.to_string(),
                "expected": interval_json(expected),
                "actual": actual.as_ref().map(interval_json),
            }),
            Mismatch::Zcl { expected, actual } => json!({
                "quantity": "zcl",
                "expected": expected,
                "actual": actual,
            }),
        })
        .collect();
    let mut v = json!({"name": o.name, "passed": o.passed(), "mismatches": mismatches});
    if let Some(e) = &o.error {
        v["error"] = json!(e);
    }
    v
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::VerifyCover { family, k } => {
            let f = family_from_json(&load(&family)?)?;
            let is_cover = f.is_k_cover_fast(k)?;
            Ok(Output { text: pretty(&json!({"isKCover": is_cover, "minOrder": f.min_order()})), passed: is_cover })
        }
        Command::OstrandExtend { family, n, m, action } => {
            let f = family_from_json(&load(&family)?)?;
            let action = action.map(|p| load(&p).and_then(|t| Ok(action_for_family(&t, &f)?))).transpose()?;
            Ok(Output::ok(family_to_json(&ostrand_extend(&f, n, m, action.as_ref())?)))
        }
        Command::ProductCover { family_a, n, family_b, m } => {
            let a = family_from_json(&load(&family_a)?)?;
            let b = family_from_json(&load(&family_b)?)?;
            Ok(Output::ok(family_to_json(&product_cover(&a, n, &b, m)?)))
        }
        Command::Nerve { family } => {
            let f = family_from_json(&load(&family)?)?;
            Ok(Output::ok(complex_to_json(&nerve_of(&f))))
        }
        Command::ExtendNerve { metric, family } => {
            let space = metric_from_json(&load(&metric)?)?;
            let f = family_from_json(&load(&family)?)?;
            Ok(Output::ok(family_to_json(&extend_same_nerve(&space, &f)?)))
        }
        Command::Cohomology { complex } => {
            let k = complex_from_json(&load(&complex)?)?;
            let h = cohomology_z2(&k);
            Ok(Output::ok(cohomology_to_json(&h.betti, &h.ring)))
        }
        Command::Zcl { complex, cap } => {
            let k = complex_from_json(&load(&complex)?)?;
            let ring = cohomology_z2(&k).ring;
            Ok(Output::ok(zcl_to_json(&ring, &zero_divisor_cup_length(&ring, cap))))
        }
        Command::Bounds { space, assertions } => {
            let descriptor = space_from_path(&space)?;
            let extra = assertions.iter().map(|a| parse_assertion(a)).collect::<Result<Vec<_>, _>>()?;
            let mut base = FactBase::for_descriptor(&descriptor)?;
            for (q, i) in &extra {
                base.assert_fact(q, *i, "user assertion")?;
            }
            base.propagate()?;
            base.check_consistency()?;
            Ok(Output::ok(report_to_json(&base.report())))
        }
        Command::CatalogRun { name } => {
            let catalog = Catalog::builtin()?;
            let outcomes = match name {
                Some(n) => vec![tcbound_core::catalog::check_entry(catalog.lookup(&n)?)],
                None => catalog.run_all(),
            };
            let passed = outcomes.iter().all(EntryOutcome::passed);
            let json = serde_json::Value::Array(outcomes.iter().map(outcome_json).collect());
            Ok(Output { text: pretty(&json), passed })
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(cli.command).and_then(|output| {
        emit(&output.text, cli.out.as_deref())?;
        if output.passed {
            Ok(())
        } else {
            Err(CliError::Verification("verification failed".to_string()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tcbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
