use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idemnorm::linalg::DenseMatrix;
use idemnorm::report::NormReport;
use idemnorm::schur::{f0, gamma2, paper_witness, witness_lower_bound, DEFAULT_GAMMA2_TOL};
use idemnorm::sweep::{sweep_with, NormMode, SweepReport};
use idemnorm::verify::{default_groups, verify_paper, VerifySummary};
use idemnorm::{Error, Group, Subset};
use serde::Serialize;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Norms of idempotents chi_S on finite groups.
///
/// Groups are written `Z6`, `Z2xZ4`, `S3`, `D4`, `Q8`, or a path to a Cayley
/// table JSON file `{"n": .., "identity": .., "table": [[..]]}`. Abelian
/// elements are indexed in mixed radix with the last factor fastest, so in
/// `Z2xZ4` the tuple `(1,1)` is element 5. The order cap can be raised with
/// IDEMNORM_MAX_ORDER.
#[derive(Parser)]
#[command(name = "idemnorm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; csv is only available for sweeps.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Norm, coset structure and closed-form prediction for one subset.
    Norm(NormArgs),
    /// Classify every subset of a group up to translation.
    Sweep(SweepArgs),
    /// gamma_2 (Schur multiplier) norm bracket of a matrix.
    Schur(SchurArgs),
    /// Run the full set of reproduction checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct NormArgs {
    #[arg(short, long)]
    group: String,
    /// Elements `0,1,3` or, on abelian groups, tuples `(0,1),(1,3)`.
    #[arg(short, long, allow_hyphen_values = true)]
    subset: String,
    /// Also compute the cb-norm bracket on abelian groups.
    #[arg(long)]
    cb: bool,
    /// Target gap of the cb-norm bracket.
    #[arg(long, default_value_t = DEFAULT_GAMMA2_TOL)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(short, long)]
    group: String,
    /// Use cb-norms (always the case on nonabelian groups).
    #[arg(long)]
    cb: bool,
    /// Band around thresholds (default 1e-9, or 5e-3 for cb-norms).
    #[arg(long)]
    tol: Option<f64>,
    /// Include the wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SchurArgs {
    /// JSON matrix literal such as `[[1,0],[0,[0,1]]]`, or a path to one.
    matrix: Option<String>,
    /// Use the 3x3 forbidden pattern [[1,1,1],[1,1,0],[1,0,1]].
    #[arg(long, conflicts_with = "matrix")]
    f0: bool,
    /// Only evaluate the fixed witness pair on F0 (requires --f0).
    #[arg(long, requires = "f0")]
    witness_only: bool,
    /// Target gap of the bracket.
    #[arg(long, default_value_t = DEFAULT_GAMMA2_TOL)]
    tol: f64,
    /// Write the feasibility certificate to this file.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated groups (default: the standard list).
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<String>>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Serialize)]
struct WitnessReport {
    witness_lower_bound: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::NonFinite | Error::NotHermitian(_) | Error::ZeroWitness => {
                EXIT_NUMERIC
            }
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Norm(a) => cmd_norm(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Schur(a) => cmd_schur(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| usage(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::from(Error::from(e)))?;
    s.push('\n');
    Ok(s)
}

fn no_csv(cli: &Cli) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(usage("csv output is only available for sweep"));
    }
    Ok(())
}

fn cmd_norm(cli: &Cli, a: &NormArgs) -> Result<u8, Failure> {
    no_csv(cli)?;
    let g = Group::parse(&a.group)?;
    let s = Subset::parse(&g, &a.subset)?;
    let r = NormReport::compute(&g, &s, a.cb, a.tol)?;
    let text = match cli.format {
        Format::Text => {
            let mut t = format!(
                "group      {} (order {})\nsubset     {}\n",
                g.name(),
                g.order(),
                r.subset
            );
            t += &format!("kind       {}", r.analysis.kind.as_str());
            if let Some(q) = r.analysis.relative_order {
                t += &format!(" (q = {q})");
            }
            t.push('\n');
            if let Some(v) = r.bs_norm {
                t += &format!("norm       {v:.10}\n");
            }
            if let Some(b) = r.cb_norm {
                t += &format!("cb norm    [{:.10}, {:.10}]\n", b.lower, b.upper);
            }
            if let Some(p) = r.predicted {
                t += &format!("predicted  {p:.10}\n");
            }
            if let (Some(w), Some(bound)) = (r.witness, r.witness_bound) {
                t += &format!("witness    u={} v={} w={} bound {bound:.10}\n", w.u(), w.v(), w.w());
            }
            t
        }
        _ => to_json(&r)?,
    };
    emit(cli, &text)?;
    Ok(0)
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<u8, Failure> {
    let g = Group::parse(&a.group)?;
    let mode = if a.cb { NormMode::Cb } else { NormMode::default_for(&g) };
    let tol = a.tol.unwrap_or(mode.default_tol());
    let mut report = sweep_with(&g, mode, tol)?;
    let elapsed = report.wall_time_secs;
    if !a.timing {
        report.wall_time_secs = None;
    }
    let text = match cli.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Text => sweep_text(&report),
    };
    emit(cli, &text)?;
    if let (Some(t), Format::Text) = (elapsed, cli.format) {
        eprintln!("wall time {t:.3}s");
    }
    Ok(if report.is_clean() { 0 } else { EXIT_VIOLATION })
}

fn sweep_text(r: &SweepReport) -> String {
    let mut t = format!(
        "group {} (order {}), mode {}, tol {:e}\n",
        r.group.name,
        r.group.order,
        r.mode.as_str(),
        r.tol
    );
    for k in &r.totals {
        t += &format!(
            "{:<11} {:>6} classes {:>9} subsets\n",
            k.kind.as_str(),
            k.classes,
            k.subsets
        );
    }
    t += &format!("violations  {}\n", r.violations.len());
    for v in &r.violations {
        t += &format!("  {:?} {} {} norm {:.10}\n", v.rule, v.subset, v.kind.as_str(), v.norm);
    }
    t += &format!("extremal    {}\n", r.extremal.len());
    for s in &r.extremal {
        t += &format!("  {s}\n");
    }
    t
}

fn read_matrix(arg: &str) -> Result<DenseMatrix, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg)).map_err(|e| usage(format!("{arg}: {e}")))?
    };
    Ok(DenseMatrix::parse_json(&text)?)
}

fn cmd_schur(cli: &Cli, a: &SchurArgs) -> Result<u8, Failure> {
    no_csv(cli)?;
    let m = match (&a.matrix, a.f0) {
        (_, true) => f0(),
        (Some(arg), false) => read_matrix(arg)?,
        (None, false) => return Err(usage("schur needs a matrix or --f0")),
    };
    if a.witness_only {
        let v = witness_lower_bound(&m, &paper_witness())?;
        let text = match cli.format {
            Format::Text => format!("witness lower bound {v:.15}\n"),
            _ => to_json(&WitnessReport { witness_lower_bound: v })?,
        };
        emit(cli, &text)?;
        return Ok(0);
    }
    let b = gamma2(&m, a.tol)?;
    if let Some(path) = &a.certificate {
        fs::write(path, to_json(&b.certificate)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let text = match cli.format {
        Format::Text => format!(
            "gamma2 in [{:.10}, {:.10}] (gap {:.2e}, {} projections)\n",
            b.lower,
            b.upper,
            b.gap(),
            b.projections
        ),
        _ => to_json(&b)?,
    };
    emit(cli, &text)?;
    Ok(0)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<u8, Failure> {
    no_csv(cli)?;
    let groups = match &a.groups {
        None => default_groups(),
        Some(list) => list
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| Group::parse(s.trim()))
            .collect::<idemnorm::Result<Vec<_>>>()?,
    };
    let summary = verify_paper(&groups, a.tol);
    let text = match cli.format {
        Format::Text => verify_text(&summary),
        _ => to_json(&summary)?,
    };
    emit(cli, &text)?;
    if summary.all_passed() {
        return Ok(0);
    }
    for f in summary.failures() {
        eprintln!("failed: {} ({})", f.name, f.detail);
    }
    if a.tol == 0.0 {
        eprintln!("note: a zero tolerance leaves no slack at threshold boundaries");
    }
    Ok(EXIT_VIOLATION)
}

fn verify_text(s: &VerifySummary) -> String {
    let mut t = String::new();
    for i in &s.items {
        t += &format!(
            "{} {:<28} {}\n",
            if i.passed { "PASS" } else { "FAIL" },
            i.name,
            i.detail
        );
    }
    t
}
