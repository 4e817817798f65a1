//! Command-line front end for `qes-core`.
//!
//! Every subcommand produces a text body (JSON or CSV) and an exit code:
//! 0 success, 2 usage or input error, 3 no admissible state, 4 failed
//! verification.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod document;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qes_core::eval::{self, Wavefunction};
use qes_core::quartic::{self, ConstraintSearch, FixedParameter};
use qes_core::sextic::{self, BetheConfig};
use qes_core::verify::{self, FdConfig, SpectrumReport};
use qes_core::{Family, Parity, QesError, QesState};

use document::{fmt_f64, ModelRecord, ResultDocument, SCHEMA_VERSION};

/// Largest accepted `|E_qes - E_fd|` in `verify` and `solve --verify`.
pub const VERIFY_TOL: f64 = 1e-4;
pub const DEFAULT_EXPORT_SAMPLES: usize = 801;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_STATES: u8 = 3;
pub const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qes",
    version,
    about = "Quasi-exactly solvable symmetrized oscillators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible QES states of a family at given parameters.
    Solve(SolveArgs),
    /// Cross-check the states of a result document by finite differences.
    Verify(VerifyArgs),
    /// Tabulate V and psi on a grid.
    Export(ExportArgs),
    /// Raw multistart solution of the sextic Bethe equations.
    Bethe(BetheArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Quartic,
    Sextic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Quartic => Family::Quartic,
            FamilyArg::Sextic => Family::Sextic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FdArgs {
    /// Grid points on the half line (default 4000).
    #[arg(long)]
    pub points: Option<usize>,
    /// Half-line length (default 8 quartic, 5 sextic).
    #[arg(long)]
    pub length: Option<f64>,
}

impl FdArgs {
    fn config(&self, family: Family, parity: Parity) -> FdConfig {
        let mut cfg = FdConfig::for_family(family, parity);
        if let Some(n) = self.points {
            cfg.points = n;
        }
        if let Some(l) = self.length {
            cfg.length = l;
        }
        cfg
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Sextic only: fix `c` and solve the Bethe equations directly.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Newton starts for the Bethe path.
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    /// Quartic constraint-search range in `b`.
    #[arg(long, default_value_t = -5.0)]
    pub b_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub b_max: f64,
    /// Attach finite-difference verification reports.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub fd: FdArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Result document; `-` or absent reads standard input.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub fd: FdArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["figure", "input"])))]
pub struct ExportArgs {
    /// Reproduce the data behind figure 1-4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub figure: Option<u8>,
    /// Result document to export a state from.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// State index within the document.
    #[arg(long, default_value_t = 0)]
    pub state: usize,
    /// Half-width of the grid (default 6 quartic, 4 sextic).
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EXPORT_SAMPLES)]
    pub samples: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct BetheArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Failure that stops a command before it has a body to emit.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(QesError),
    Io(io::Error),
}

impl std::error::Error for CliError {}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<QesError> for CliError {
    fn from(e: QesError) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Rendered result of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub code: u8,
    pub destination: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Export(args) => cmd_export(&args),
        Command::Bethe(args) => cmd_bethe(&args),
    }
}

/// Write `out.body` to its destination (standard output when `None`).
pub fn emit(out: &Output) -> io::Result<()> {
    match &out.destination {
        Some(path) => fs::write(path, &out.body),
        None => {
            use io::Write;
            let mut stdout = io::stdout().lock();
            stdout.write_all(out.body.as_bytes())?;
            stdout.flush()
        }
    }
}

fn render(doc: &ResultDocument) -> Result<String, CliError> {
    document::to_canonical_string(doc).map_err(|e| CliError::Io(e.into()))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Solve a family and return the document, before verification.
pub fn solve_document(args: &SolveArgs) -> Result<ResultDocument, CliError> {
    let family: Family = args.family.into();
    let parity: Parity = args.parity.into();
    let n = args.n;
    let mut diagnostics = Vec::new();
    let (states, method, (a, b, c)) = match family {
        Family::Quartic => {
            if args.c.is_some() {
                return Err(usage("--c applies to the sextic family only"));
            }
            match (n, parity, args.a, args.b) {
                (0, Parity::Even, Some(a), None) | (1, Parity::Odd, Some(a), None) => (
                    quartic::quartic_family_solve(n, parity, FixedParameter::A(a))?,
                    "closed-form",
                    (Some(a), None, None),
                ),
                (1, Parity::Even, None, Some(b)) => (
                    quartic::quartic_family_solve(n, parity, FixedParameter::B(b))?,
                    "closed-form",
                    (None, Some(b), None),
                ),
                (_, _, Some(a), Some(b)) => {
                    let sector = quartic::solve_quartic_sector(a, b, n)?;
                    if sector.complex_eigenvalues > 0 {
                        diagnostics.push(format!(
                            "{} complex eigenvalues of the gauge operator dropped",
                            sector.complex_eigenvalues
                        ));
                    }
                    let mut states = Vec::new();
                    for mut s in sector.states {
                        if quartic::matching_filter(&mut s, parity) {
                            s.node_count = Some(eval::count_nodes(
                                &s,
                                eval::default_window(family),
                                eval::DEFAULT_NODE_SAMPLES,
                            )?);
                            states.push(s);
                        }
                    }
                    (states, "matrix", (Some(a), Some(b), None))
                }
                (_, _, Some(a), None) => {
                    if !(args.b_max > args.b_min) {
                        return Err(usage("--b-max must exceed --b-min"));
                    }
                    let search = ConstraintSearch {
                        b_min: args.b_min,
                        b_max: args.b_max,
                        ..ConstraintSearch::default()
                    };
                    (
                        quartic::quartic_constraint_search(a, n, parity, &search)?,
                        "constraint-search",
                        (Some(a), None, None),
                    )
                }
                (1, Parity::Even, _, None) => return Err(usage("quartic n=1 even needs --b")),
                _ => return Err(usage("quartic solve needs --a (and optionally --b)")),
            }
        }
        Family::Sextic => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return Err(usage("sextic solve needs --a and --b"));
            };
            match args.c {
                Some(c) => {
                    let cfg = BetheConfig {
                        starts: args.starts,
                        seed: args.seed,
                        ..BetheConfig::default()
                    };
                    let (states, solution) = sextic::sextic_bethe_states(n, parity, a, b, c, &cfg)?;
                    diagnostics.push(format!(
                        "{} root sets, {} failed starts, {} degenerate starts",
                        solution.root_sets.len(),
                        solution.failed_starts,
                        solution.degenerate_starts
                    ));
                    (states, "bethe", (Some(a), Some(b), Some(c)))
                }
                None => match sextic::sextic_family_solve(n, parity, a, b) {
                    Ok(states) => (states, "closed-form", (Some(a), Some(b), None)),
                    Err(QesError::Unsupported { .. }) => {
                        return Err(usage(format!(
                            "no closed family for sextic n={n} {parity}; pass --c to solve the Bethe equations"
                        )))
                    }
                    Err(e) => return Err(e.into()),
                },
            }
        }
    };
    if states.is_empty() {
        diagnostics.push("no admissible state".to_string());
    }
    let model = ModelRecord {
        family,
        n,
        parity,
        a,
        b,
        c,
        method: method.to_string(),
        seed: args.seed,
    };
    Ok(ResultDocument::new(model, states, diagnostics))
}

/// Attach finite-difference reports; returns whether every state passed.
pub fn attach_verification(doc: &mut ResultDocument, fd: &FdArgs) -> Result<bool, CliError> {
    let mut reports = Vec::with_capacity(doc.states.len());
    for state in &doc.states {
        let parity = state.parity.ok_or(QesError::MissingParity)?;
        let cfg = fd.config(state.family, parity);
        reports.push(verify::verify_state(state, &state.potential, &cfg)?);
    }
    let ok = reports
        .iter()
        .all(|r: &SpectrumReport| r.passes(VERIFY_TOL));
    doc.verification = Some(reports);
    Ok(ok)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Output, CliError> {
    let mut doc = solve_document(args)?;
    let mut code = if doc.states.is_empty() {
        EXIT_NO_STATES
    } else {
        EXIT_OK
    };
    if args.verify && !doc.states.is_empty() && !attach_verification(&mut doc, &args.fd)? {
        code = EXIT_VERIFY_FAILED;
    }
    Ok(Output {
        body: render(&doc)?,
        code,
        destination: args.output.clone(),
    })
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn load_document(path: Option<&PathBuf>) -> Result<ResultDocument, CliError> {
    let text = read_input(path)?;
    document::parse(&text).map_err(|e| usage(format!("cannot parse result document: {e}")))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Output, CliError> {
    let mut doc = load_document(args.input.as_ref())?;
    let ok = attach_verification(&mut doc, &args.fd)?;
    let code = if ok { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Output {
        body: render(&doc)?,
        code,
        destination: args.output.clone(),
    })
}

/// Columns of a grid export, all sampled on the same abscissae.
struct Table {
    xs: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("x").chain(self.columns.iter().map(|(n, _)| n.as_str()));
        w.write_record(header).map_err(csv_error)?;
        for (i, x) in self.xs.iter().enumerate() {
            let row = std::iter::once(fmt_f64(*x))
                .chain(self.columns.iter().map(|(_, col)| fmt_f64(col[i])));
            w.write_record(row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(io::Error::other(e)))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.into())
}

fn potential_column(state: &QesState, window: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    Ok(eval::sample_potential(&state.potential, window, samples)?
        .ys()
        .to_vec())
}

fn psi_column(state: &QesState, window: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    Ok(eval::sample_wavefunction(state, window, samples)?
        .ys()
        .to_vec())
}

fn signed_label(a: f64) -> String {
    if a > 0.0 {
        format!("+{a}")
    } else {
        format!("{a}")
    }
}

/// States shown in a figure, labelled by `a`.
pub fn figure_states(figure: u8) -> Result<Vec<(f64, QesState)>, CliError> {
    let b = -1.0;
    let pick = |n: usize, parity: Parity, a: f64| -> Result<QesState, CliError> {
        let states = sextic::sextic_family_solve(n, parity, a, b)?;
        let chosen = if n == 0 {
            states.into_iter().next()
        } else {
            // the figures use the negative gauge root c
            states
                .into_iter()
                .find(|s| s.gauge.c.is_some_and(|c| c < 0.0))
        };
        chosen.ok_or_else(|| usage(format!("no state for figure {figure} at a={a}")))
    };
    match figure {
        1 | 2 => [0.0, 1.0, -1.0]
            .into_iter()
            .map(|a| Ok((a, pick(0, Parity::Even, a)?)))
            .collect(),
        3 | 4 => [1.0, -1.0]
            .into_iter()
            .map(|a| Ok((a, pick(1, Parity::Even, a)?)))
            .collect(),
        _ => Err(usage(format!("unknown figure {figure}"))),
    }
}

pub fn cmd_export(args: &ExportArgs) -> Result<Output, CliError> {
    if args.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let table = if let Some(fig) = args.figure {
        let window = args.window.unwrap_or(eval::default_window(Family::Sextic));
        let xs = eval::uniform_grid(-window, window, args.samples);
        let mut columns = Vec::new();
        for (a, state) in figure_states(fig)? {
            let (name, col) = if fig % 2 == 1 {
                ("V", potential_column(&state, window, args.samples)?)
            } else {
                ("psi", psi_column(&state, window, args.samples)?)
            };
            columns.push((format!("{name}[a={}]", signed_label(a)), col));
        }
        Table { xs, columns }
    } else {
        let doc = load_document(args.input.as_ref())?;
        let state = doc.states.get(args.state).ok_or_else(|| {
            usage(format!(
                "state {} not in document ({} states)",
                args.state,
                doc.states.len()
            ))
        })?;
        Wavefunction::new(state)?;
        let window = args.window.unwrap_or(eval::default_window(state.family));
        Table {
            xs: eval::uniform_grid(-window, window, args.samples),
            columns: vec![
                (
                    "V".to_string(),
                    potential_column(state, window, args.samples)?,
                ),
                ("psi".to_string(), psi_column(state, window, args.samples)?),
            ],
        }
    };
    Ok(Output {
        body: table.to_csv()?,
        code: EXIT_OK,
        destination: args.output.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheModel {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub seed: u64,
    pub starts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRootSet {
    pub roots: Vec<f64>,
    pub energy: f64,
    pub max_residual: f64,
    /// Parity whose matching constraint the set satisfies, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheDocument {
    pub schema_version: String,
    pub model: BetheModel,
    pub root_sets: Vec<BetheRootSet>,
    pub failed_starts: usize,
    pub degenerate_starts: usize,
}

pub fn bethe_document(args: &BetheArgs) -> Result<BetheDocument, CliError> {
    let cfg = BetheConfig {
        starts: args.starts,
        seed: args.seed,
        ..BetheConfig::default()
    };
    let solution = sextic::solve_bethe(args.n, args.a, args.b, args.c, &cfg)?;
    let mut root_sets = Vec::with_capacity(solution.root_sets.len());
    for roots in &solution.root_sets {
        let residuals = sextic::bethe_residuals(roots.as_slice(), args.a, args.b, args.c)?;
        let parity = [Parity::Even, Parity::Odd]
            .into_iter()
            .find(|&p| sextic::sextic_matching_filter(roots, args.c, p));
        root_sets.push(BetheRootSet {
            roots: roots.as_slice().to_vec(),
            energy: sextic::sextic_energy(roots, args.a, args.b, args.c, args.n)?,
            max_residual: residuals.iter().fold(0f64, |m, r| m.max(r.abs())),
            parity,
        });
    }
    Ok(BetheDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        model: BetheModel {
            n: args.n,
            a: args.a,
            b: args.b,
            c: args.c,
            seed: args.seed,
            starts: args.starts,
        },
        root_sets,
        failed_starts: solution.failed_starts,
        degenerate_starts: solution.degenerate_starts,
    })
}

pub fn cmd_bethe(args: &BetheArgs) -> Result<Output, CliError> {
    let doc = bethe_document(args)?;
    let code = if doc.root_sets.is_empty() {
        EXIT_NO_STATES
    } else {
        EXIT_OK
    };
    Ok(Output {
        body: document::to_canonical_string(&doc).map_err(|e| CliError::Io(e.into()))?,
        code,
        destination: args.output.clone(),
    })
}
