//! Command-line front end: constructions, containment checks, the
//! classifier, solution-free sets, marking runs, exact extremal numbers,
//! and density sweeps, with machine-readable outputs.
//!
//! Exit codes: 0 success, 1 domain error (caps, budgets, bad files),
//! 2 usage error. All error text goes to standard error.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use zom::behrend;
use zom::classify;
use zom::constructions::{self, BuildLimits, Variant};
use zom::contains::{contains_with, Outcome, SearchOptions};
use zom::error::Error;
use zom::extremal::{self, ExOptions};
use zom::marking;
use zom::matrix::Matrix01;
use zom::pattern::Pattern;
use zom::registry::registry_pattern;

#[derive(Parser)]
#[command(name = "zom", version, about = "Forbidden 0-1 matrix toolkit")]
struct Cli {
    /// Worker threads for the parallel code paths (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Cell cap for constructions; the ZOM_CELL_CAP environment variable
    /// overrides the default, and this flag overrides both.
    #[arg(long, global = true)]
    cell_cap: Option<u64>,

    /// Cap on the number of 1s a construction may emit.
    #[arg(long, global = true)]
    ones_cap: Option<u64>,

    /// Seed for randomized inputs (reserved; current subcommands are
    /// fully deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a labeled matrix and write it with its label sidecar.
    Construct(ConstructArgs),
    /// Search a matrix file for a pattern.
    Check(CheckArgs),
    /// Emit the structural classification of a pattern as JSON.
    Classify(ClassifyArgs),
    /// Build and verify a solution-free integer set.
    Behrend(BehrendArgs),
    /// Run the marking procedure on a matrix and audit the leftovers.
    Mark(MarkArgs),
    /// Exact extremal number on a tiny host by branch and bound.
    Ex(ExArgs),
    /// Density sweep over construction parameters, as CSV.
    Density(DensityArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction family: a, at, or dense.
    variant: String,
    #[arg(long)]
    b: usize,
    /// Side parameter m (computed automatically for the dense variant).
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    /// Output matrix file.
    #[arg(short, long)]
    out: PathBuf,
    /// Label sidecar path; defaults to <out>.json.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Registry name (s0, p3, ...) or file:<path> for a pattern file.
    #[arg(long)]
    pattern: String,
    /// Host matrix file.
    #[arg(long)]
    matrix: PathBuf,
    /// Backtrack node budget.
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    pattern: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BehrendArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    h: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MarkArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    t: u32,
    /// Scale base; defaults to the exact ceiling of (log2 n)^(1/t).
    #[arg(long)]
    zeta: Option<u32>,
    /// Node budget for the containment audit.
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    n: usize,
    /// Columns; defaults to n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Cell cap for the search (hosts beyond it are rejected).
    #[arg(long, default_value_t = 36)]
    max_cells: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    /// Construction family: a, at, or dense.
    #[arg(long)]
    variant: String,
    /// Range of b values: "2", "1..3", or "1,2,3".
    #[arg(long)]
    b: String,
    /// Range of m values (ignored by the dense variant).
    #[arg(long)]
    m: Option<String>,
    /// Range of t values (required for at and dense).
    #[arg(long)]
    t: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        zom::set_thread_count(cli.threads);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let limits = build_limits(&cli);
    match &cli.command {
        Command::Construct(args) => construct(args, &limits),
        Command::Check(args) => check(args),
        Command::Classify(args) => classify_cmd(args),
        Command::Behrend(args) => behrend_cmd(args),
        Command::Mark(args) => mark(args),
        Command::Ex(args) => ex(args),
        Command::Density(args) => density(args, &limits),
    }
}

fn build_limits(cli: &Cli) -> BuildLimits {
    let mut limits = BuildLimits::default();
    if let Ok(v) = std::env::var("ZOM_CELL_CAP") {
        if let Ok(v) = v.parse() {
            limits.max_cells = v;
        }
    }
    if let Some(v) = cli.cell_cap {
        limits.max_cells = v;
    }
    if let Some(v) = cli.ones_cap {
        limits.max_ones = v;
    }
    limits
}

fn parse_variant(name: &str) -> Result<Variant, Error> {
    match name.to_ascii_lowercase().as_str() {
        "a" => Ok(Variant::A),
        "at" => Ok(Variant::At),
        "dense" => Ok(Variant::Dense),
        other => Err(Error::InvalidArgument(format!(
            "unknown variant '{other}' (expected a, at, dense)"
        ))),
    }
}

/// Pattern argument: `file:<path>` or a registry name.
fn load_pattern(spec: &str) -> Result<Pattern, Error> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path)?;
        return Pattern::parse(&text);
    }
    registry_pattern(spec, None)
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn construct(args: &ConstructArgs, limits: &BuildLimits) -> Result<(), Error> {
    let variant = parse_variant(&args.variant)?;
    let lm = match variant {
        Variant::A => {
            let m = args.m.ok_or_else(|| Error::InvalidArgument("variant a needs --m".into()))?;
            constructions::build_a(args.b, m, limits)?
        }
        Variant::At => {
            let m = args.m.ok_or_else(|| Error::InvalidArgument("variant at needs --m".into()))?;
            let t = args.t.ok_or_else(|| Error::InvalidArgument("variant at needs --t".into()))?;
            constructions::build_at(args.b, m, t, limits)?
        }
        Variant::Dense => {
            let t = args
                .t
                .ok_or_else(|| Error::InvalidArgument("variant dense needs --t".into()))?;
            behrend::build_dense_s0t(args.b, t, limits)?.0
        }
    };
    fs::write(&args.out, lm.matrix.to_file_string())?;
    let sidecar_path = args
        .labels
        .clone()
        .unwrap_or_else(|| sidecar_default(&args.out));
    let sidecar = serde_json::to_string_pretty(&lm.sidecar()).expect("sidecar serializes");
    fs::write(&sidecar_path, sidecar)?;
    println!(
        "wrote {}x{} matrix with {} ones to {} (labels: {})",
        lm.matrix.rows(),
        lm.matrix.cols(),
        lm.matrix.weight(),
        args.out.display(),
        sidecar_path.display()
    );
    Ok(())
}

fn sidecar_default(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase", tag = "outcome")]
enum CheckOutcome {
    Witness { rows: Vec<u32>, cols: Vec<u32> },
    Free,
    Unknown,
}

fn check(args: &CheckArgs) -> Result<(), Error> {
    let p = load_pattern(&args.pattern)?;
    let host = Matrix01::parse_file(&fs::read_to_string(&args.matrix)?)?;
    let opts = SearchOptions {
        node_budget: args.budget,
        ..Default::default()
    };
    let outcome = contains_with(&p, &host, &opts);
    match args.format.as_str() {
        "json" => {
            let out = match &outcome {
                Outcome::Witness(occ) => CheckOutcome::Witness {
                    rows: occ.rows.clone(),
                    cols: occ.cols.clone(),
                },
                Outcome::Free => CheckOutcome::Free,
                Outcome::Unknown => CheckOutcome::Unknown,
            };
            println!("{}", serde_json::to_string(&out).expect("serializes"));
        }
        "text" => match &outcome {
            Outcome::Witness(occ) => {
                println!("contains rows={:?} cols={:?}", occ.rows, occ.cols)
            }
            Outcome::Free => println!("free"),
            Outcome::Unknown => println!("unknown"),
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown format '{other}' (expected text or json)"
            )))
        }
    }
    if outcome == Outcome::Unknown {
        return Err(Error::BudgetExceeded(
            "containment search hit the node budget".into(),
        ));
    }
    Ok(())
}

fn classify_cmd(args: &ClassifyArgs) -> Result<(), Error> {
    let p = load_pattern(&args.pattern)?;
    let report = classify::classify(&p);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_or_print(&args.out, &(json + "\n"))
}

fn behrend_cmd(args: &BehrendArgs) -> Result<(), Error> {
    let set = behrend::behrend_set(args.n, args.h)?;
    let json = serde_json::to_string_pretty(&set).expect("set serializes");
    write_or_print(&args.out, &(json + "\n"))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MarkParamsOut {
    t: u32,
    zeta: u32,
    eps_denominator: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MarkReportOut {
    params: MarkParamsOut,
    rows: usize,
    cols: usize,
    weight: usize,
    per_step_counts: [u64; 4],
    signature_type_counts: marking::SignatureTypeCounts,
    structural_bound: u64,
    marked_total: u64,
    unmarked: Vec<(u32, u32)>,
    audit_result: marking::AuditOutcome,
}

fn mark(args: &MarkArgs) -> Result<(), Error> {
    let host = Matrix01::parse_file(&fs::read_to_string(&args.matrix)?)?;
    let zeta = args.zeta.unwrap_or_else(|| marking::default_zeta(&host, args.t));
    let report = marking::run_marking(&host, args.t, zeta, &marking::MarkOptions::default())?;
    let audit = marking::audit_unmarked(
        &host,
        args.t,
        &report,
        &SearchOptions {
            node_budget: args.budget,
            ..Default::default()
        },
    )?;
    let out = MarkReportOut {
        params: MarkParamsOut {
            t: report.t,
            zeta: report.zeta,
            eps_denominator: report.eps_denominator,
        },
        rows: report.rows,
        cols: report.cols,
        weight: report.weight,
        per_step_counts: report.per_step_counts,
        signature_type_counts: report.signature_type_counts,
        structural_bound: report.structural_bound,
        marked_total: report.marked_total,
        unmarked: report.unmarked,
        audit_result: audit,
    };
    let json = serde_json::to_string_pretty(&out).expect("report serializes");
    write_or_print(&args.out, &(json + "\n"))
}

fn ex(args: &ExArgs) -> Result<(), Error> {
    let p = load_pattern(&args.pattern)?;
    let m = args.m.unwrap_or(args.n);
    let res = extremal::exact_ex(
        &p,
        args.n,
        m,
        &ExOptions {
            node_budget: args.budget,
            max_cells: args.max_cells,
        },
    )?;
    let json = serde_json::to_string_pretty(&res).expect("result serializes");
    write_or_print(&args.out, &(json + "\n"))
}

fn parse_range(spec: &str) -> Result<Vec<u64>, Error> {
    let bad = |s: &str| Error::InvalidArgument(format!("bad range '{s}'"));
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad(spec))?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad(spec))?;
        if lo > hi {
            return Err(bad(spec));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad(spec)))
        .collect()
}

fn density(args: &DensityArgs, limits: &BuildLimits) -> Result<(), Error> {
    let variant = parse_variant(&args.variant)?;
    let bs = parse_range(&args.b)?;
    let ms = match (&args.m, variant) {
        (_, Variant::Dense) => vec![0],
        (Some(m), _) => parse_range(m)?,
        (None, _) => {
            return Err(Error::InvalidArgument("this variant needs --m".into()));
        }
    };
    let ts: Vec<Option<u32>> = match (&args.t, variant) {
        (Some(t), _) => parse_range(t)?.into_iter().map(|t| Some(t as u32)).collect(),
        (None, Variant::A) => vec![None],
        (None, _) => {
            return Err(Error::InvalidArgument("this variant needs --t".into()));
        }
    };
    let mut grid = Vec::new();
    for &b in &bs {
        for &m in &ms {
            for &t in &ts {
                grid.push((b as usize, m as u32, t));
            }
        }
    }
    let rows = extremal::density_table(variant, &grid, limits)?;
    write_or_print(&args.out, &extremal::density_csv(&rows))
}
