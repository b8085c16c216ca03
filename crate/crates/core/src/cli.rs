//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 2 when an identity fails or a bound
//! is violated under a satisfied hypothesis, 3 for invalid input, 4 for
//! numerical failures (domain errors, unreached quadrature tolerance) and
//! output errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{evaluate_all, BoundSuite, EvalOptions, HolderPair, TheoremId, DEFAULT_HOLDS_TOL};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::identity::{check_lemma1, check_lemma2, ProblemSpec};
use crate::quasi::{load_corpus, load_corpus_file, CorpusEntry, CORPUS_ORDERS, DEFAULT_GRID};
use crate::report::{emit_report, Format, Report};
use crate::search::{best_p, best_x};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Environment variable overriding the default identity tolerance.
pub const TOL_ENV: &str = "QCBOUND_TOL";
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    VerifyIdentity,
    VerifyBounds,
    Tightness,
    CorpusReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }
    }
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub expr: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub tol: f64,
    pub grid: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub corpus_file: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "qcbound",
    version,
    about = "Corrected endpoint quadrature identities and quasi-convexity error certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Check both quadrature identities numerically.
    VerifyIdentity(ProblemArgs),
    /// Evaluate every applicable error bound against the measured error.
    VerifyBounds(ProblemArgs),
    /// Search x and p for the tightest certificate of each bound.
    Tightness(ProblemArgs),
    /// Run identities and bounds over the built-in corpus.
    CorpusReport(CorpusArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Acceptance tolerance for identity residuals [default: 1e-8, or $QCBOUND_TOL]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid size of the quasi-convexity check
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Integrand in t, e.g. "exp(t)" or "t^(5/2)"
    #[arg(long)]
    pub expr: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// Evaluation point of the endpoint rule [default: (a+b)/2]
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Derivative order
    #[arg(long)]
    pub n: usize,
    /// Hölder exponent p [default: 2, or the conjugate of --q]
    #[arg(long)]
    pub p: Option<f64>,
    /// Hölder exponent q [default: the conjugate of p]
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Extra entries, one `name; expr; a; b` per line
    #[arg(long)]
    pub corpus_file: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn default_tol() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| Error::InvalidInput(format!("{TOL_ENV}=`{s}` is not a positive real"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn resolve_pair(p: Option<f64>, q: Option<f64>) -> Result<HolderPair> {
    match (p, q) {
        (None, None) => Ok(HolderPair::default()),
        (Some(p), None) => HolderPair::from_p(p),
        (None, Some(q)) => HolderPair::from_q(q),
        (Some(p), Some(q)) => HolderPair::new(p, q),
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, problem, corpus_file, common) = match self.command {
            CliCommand::VerifyIdentity(p) => (Command::VerifyIdentity, Some(p), None, None),
            CliCommand::VerifyBounds(p) => (Command::VerifyBounds, Some(p), None, None),
            CliCommand::Tightness(p) => (Command::Tightness, Some(p), None, None),
            CliCommand::CorpusReport(c) => (Command::CorpusReport, None, c.corpus_file, Some(c.common)),
        };
        let (expr, a, b, x, n, pair, common) = match problem {
            Some(pa) => {
                let pair = resolve_pair(pa.p, pa.q)?;
                let x = pa.x.unwrap_or(0.5 * (pa.a + pa.b));
                (pa.expr, pa.a, pa.b, x, pa.n, pair, pa.common)
            }
            None => (
                String::new(),
                0.0,
                1.0,
                0.5,
                1,
                HolderPair::default(),
                common.expect("corpus arguments"),
            ),
        };
        let tol = match common.tol {
            Some(t) => t,
            None => default_tol()?,
        };
        let config = RunConfig {
            command,
            expr,
            a,
            b,
            x,
            n,
            p: pair.p,
            q: pair.q,
            tol,
            grid: common.grid,
            format: common.format.into(),
            output: common.output,
            corpus_file,
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.grid < 3 {
            return Err(Error::InvalidInput(format!("grid must be >= 3, got {}", self.grid)));
        }
        HolderPair::new(self.p, self.q)?;
        if self.command != Command::CorpusReport {
            ProblemSpec::new(self.a, self.b, self.x, self.n)?;
        }
        Ok(())
    }

    fn spec(&self) -> Result<ProblemSpec> {
        ProblemSpec::new(self.a, self.b, self.x, self.n)
    }

    fn pair(&self) -> Result<HolderPair> {
        HolderPair::new(self.p, self.q)
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            holds_tol: DEFAULT_HOLDS_TOL,
            grid: self.grid,
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    /// Human-readable remarks (skipped bounds, strictness notes).
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(Report::passes)
    }
}

fn identity_reports(f: &Expr, spec: &ProblemSpec, tol: f64) -> Result<Vec<Report>> {
    Ok(vec![
        check_lemma1(f, spec, tol)?.into(),
        check_lemma2(f, spec.a, spec.b, spec.n, tol)?.into(),
    ])
}

fn bound_notes(suite: &BoundSuite, notes: &mut Vec<String>) {
    for s in &suite.skipped {
        notes.push(format!("{} skipped: {}", s.theorem_id, s.reason));
    }
    if let Some(r) = suite.get(TheoremId::T31) {
        if r.slack_ratio > 1.0 {
            notes.push(format!(
                "T31 holds strictly (slack ratio {:.6}); its bound is an inequality, not an equality",
                r.slack_ratio
            ));
        }
    }
}

fn tightness_reports(f: &Expr, cfg: &RunConfig, notes: &mut Vec<String>) -> Result<Vec<Report>> {
    let hp = cfg.pair()?;
    let mut out = Vec::new();
    for id in [TheoremId::T21, TheoremId::T22, TheoremId::T23] {
        match best_x(f, cfg.a, cfg.b, cfg.n, id, Some(hp)) {
            Ok(r) => out.push(r.into()),
            Err(e @ Error::KernelDivergent { .. }) => notes.push(format!("{id} x-search skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    let mut p_targets = vec![TheoremId::T22, TheoremId::T23];
    if cfg.n >= 2 {
        p_targets.push(TheoremId::T32);
    }
    for id in p_targets {
        match best_p(f, cfg.a, cfg.b, cfg.n, id, Some(cfg.x)) {
            Ok(r) => out.push(r.into()),
            Err(e @ Error::NoFeasibleParameter(_)) => notes.push(format!("{id} p-search skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn corpus_reports(entries: &[CorpusEntry], cfg: &RunConfig, notes: &mut Vec<String>) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for entry in entries {
        let (a, b) = entry.interval;
        for n in CORPUS_ORDERS {
            for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let x = if frac == 1.0 { b } else { a + frac * (b - a) };
                out.push(check_lemma1(&entry.expr, &ProblemSpec::new(a, b, x, n)?, cfg.tol)?.into());
            }
            out.push(check_lemma2(&entry.expr, a, b, n, cfg.tol)?.into());
            let spec = ProblemSpec::midpoint(a, b, n)?;
            for hp in HolderPair::sweep_set() {
                let suite = evaluate_all(&entry.expr, &spec, hp, cfg.eval_options())?;
                for s in &suite.skipped {
                    if s.theorem_id == TheoremId::T23 {
                        notes.push(format!("{} n={n}: {} skipped: {}", entry.name, s.theorem_id, s.reason));
                    }
                }
                out.extend(suite.reports.into_iter().map(Report::from));
            }
        }
    }
    Ok(out)
}

/// Execute a command without writing anything.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut outcome = Outcome::default();
    match cfg.command {
        Command::CorpusReport => {
            let mut entries = load_corpus()?;
            if let Some(path) = &cfg.corpus_file {
                entries.extend(load_corpus_file(path)?);
            }
            outcome.reports = corpus_reports(&entries, cfg, &mut outcome.notes)?;
        }
        command => {
            let f = parse(&cfg.expr)?;
            let spec = cfg.spec()?;
            outcome.reports = match command {
                Command::VerifyIdentity => identity_reports(&f, &spec, cfg.tol)?,
                Command::VerifyBounds => {
                    let suite = evaluate_all(&f, &spec, cfg.pair()?, cfg.eval_options())?;
                    bound_notes(&suite, &mut outcome.notes);
                    if suite.reports.iter().any(|r| !r.hypothesis_ok) {
                        outcome.notes.push(
                            "quasi-convexity hypothesis fails on the grid for some rows; dominance is not asserted there"
                                .into(),
                        );
                    }
                    suite.reports.into_iter().map(Report::from).collect()
                }
                _ => tightness_reports(&f, cfg, &mut outcome.notes)?,
            };
        }
    }
    Ok(outcome)
}

pub fn exit_code_for(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INVALID_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

/// Run a command, writing the report to `cfg.output` or `out` and messages
/// to `err`. Returns the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match execute(cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code_for(&e);
        }
    };
    let text = match emit_report(&outcome.reports, cfg.format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_NUMERICAL;
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing report: {e}");
        return EXIT_NUMERICAL;
    }
    // notes go with a table, otherwise to stderr to keep the data clean
    for note in &outcome.notes {
        let _ = if cfg.format == Format::Table && cfg.output.is_none() {
            writeln!(out, "note: {note}")
        } else {
            writeln!(err, "note: {note}")
        };
    }
    if outcome.all_pass() {
        EXIT_OK
    } else {
        let _ = writeln!(err, "some checks failed");
        EXIT_CHECK_FAILED
    }
}
