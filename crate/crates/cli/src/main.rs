//! `linwenger`: build, inspect and verify Wenger-type graphs.
//!
//! Exit codes: 0 success, 1 IO error, 2 invalid configuration, 3 budget
//! exceeded, 4 a computed value disagrees with its prediction.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use linwenger::field::is_prime;
use linwenger::graph::ExportFormat;
use linwenger::metrics::{MetricsError, MetricsReport};
use linwenger::parse::{parse_f_list, parse_modulus};
use linwenger::spectrum::{self, SpectrumEntry, SpectrumError, SpectrumReport};
use linwenger::verify::{self, Status, VerifyConfig};
use linwenger::{Budget, BuildMode, FamilyKind, FamilySpec, Graph, GraphError};

#[derive(Parser)]
#[command(name = "linwenger", version, about = "Wenger-type bipartite graphs over GF(p^e)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and export it.
    Build(BuildArgs),
    /// Print the exact spectrum.
    Spectrum(SpectrumArgs),
    /// Components, diameter and girth against their predictions.
    Metrics(MetricsArgs),
    /// Run the built-in verification matrix.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Wenger,
    Linearized,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Enum,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dimacs,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lazy,
    Materialized,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest vertex count to materialize or sweep.
    #[arg(long, default_value_t = Budget::default().max_vertices)]
    max_vertices: u64,
    /// Largest number of polynomial evaluations for enumeration.
    #[arg(long, default_value_t = Budget::default().max_evals)]
    max_evals: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_vertices: self.max_vertices, max_evals: self.max_evals }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: usize,
    /// Required unless the family is custom, where it defaults to the f-list length.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Family::Linearized)]
    family: Family,
    /// Custom family polynomials, e.g. `0,1;0,0,1` for f_2 = x, f_3 = x^2.
    #[arg(long)]
    f_list: Option<String>,
    /// Field modulus coefficients, low degree first, e.g. `1,1,1`.
    #[arg(long)]
    modulus: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Mode::Lazy)]
    mode: Mode,
    /// Output file; stdout when omitted (the summary then goes to stderr).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Method::Enum)]
    method: Method,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Seed for witness pair sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random vertex pairs checked with path witnesses (linearized, m <= e).
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rewire one edge of every built graph before checking.
    #[arg(long)]
    perturb: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum CliError {
    Io(String),
    Config(String),
    Budget(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Config(m) | CliError::Budget(m) | CliError::Mismatch(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            GraphError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            SpectrumError::Graph(g) => g.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Graph(g) => g.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn json_out<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn family_spec(args: &GraphArgs) -> Result<FamilySpec, CliError> {
    if !is_prime(args.p as u64) {
        return Err(CliError::Config(format!("p must be prime (got {})", args.p)));
    }
    let config = |e: &dyn std::fmt::Display| CliError::Config(e.to_string());
    let mut spec = match (args.family, &args.f_list) {
        (Family::Custom, Some(text)) => {
            let list = parse_f_list(text, args.p, args.e).map_err(|e| config(&e))?;
            if let Some(m) = args.m.filter(|&m| m != list.len()) {
                return Err(CliError::Config(format!("--m {m} but the f-list has {} polynomials", list.len())));
            }
            FamilySpec::custom(args.p, args.e, list)
        }
        (Family::Custom, None) => return Err(CliError::Config("custom family needs --f-list".into())),
        (_, Some(_)) => return Err(CliError::Config("--f-list is only valid with --family custom".into())),
        (family, None) => {
            let m = args.m.ok_or_else(|| CliError::Config("--m is required".into()))?;
            match family {
                Family::Wenger => FamilySpec::wenger(args.p, args.e, m),
                _ => FamilySpec::linearized(args.p, args.e, m),
            }
        }
    };
    if let Some(text) = &args.modulus {
        spec = spec.with_modulus(parse_modulus(text, args.p).map_err(|e| config(&e))?);
    }
    Ok(spec)
}

fn build_graph(args: &GraphArgs, mode: BuildMode) -> Result<Graph, CliError> {
    let spec = family_spec(args)?;
    Ok(Graph::build(&spec, mode, args.budget.budget())?)
}

fn cmd_build(args: &BuildArgs) -> Result<(), CliError> {
    let mode = match args.mode {
        Mode::Lazy => BuildMode::Lazy,
        Mode::Materialized => BuildMode::Materialized,
    };
    let graph = build_graph(&args.graph, mode)?;
    let format = match args.format {
        Format::Edgelist => ExportFormat::EdgeList,
        Format::Dimacs => ExportFormat::Dimacs,
        Format::Json => ExportFormat::JsonMeta,
    };
    let budget = args.graph.budget.budget();
    let meta = graph.meta();
    let summary = format!(
        "{} {} {} {} {} {} {}",
        meta.family, meta.p, meta.e, meta.m, meta.vertices, meta.edges, meta.regular
    );
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            graph.export(format, budget, BufWriter::new(file))?;
            println!("{summary}");
        }
        None => {
            graph.export(format, budget, BufWriter::new(io::stdout().lock()))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn print_table(report: &SpectrumReport) {
    println!("{:>14}  multiplicity", "eigenvalue");
    for e in &report.entries {
        println!("{:>14}  {}", e.to_string(), e.multiplicity);
    }
    println!("{:>14}  {}", "total", report.total);
}

// Rows keyed by eigenvalue, with the multiplicity from each report.
fn side_by_side(closed: &SpectrumReport, enumerated: &SpectrumReport) {
    let mut keys: Vec<SpectrumEntry> = closed.entries.iter().chain(&enumerated.entries).cloned().collect();
    keys.sort_by(SpectrumEntry::cmp_desc);
    keys.dedup_by(|a, b| a.sign == b.sign && a.radicand == b.radicand);
    println!("{:>14}  {:>14}  {:>14}", "eigenvalue", "closed", "enumerated");
    for k in keys {
        println!(
            "{:>14}  {:>14}  {:>14}",
            k.to_string(),
            closed.multiplicity(k.sign, &k.radicand),
            enumerated.multiplicity(k.sign, &k.radicand)
        );
    }
}

fn closed_report(spec: &FamilySpec) -> Result<SpectrumReport, CliError> {
    if spec.family != FamilyKind::Linearized {
        return Err(CliError::Config("the closed form covers the linearized family only".into()));
    }
    let table = spectrum::closed_form_linearized(spec.p, spec.e, spec.m)?;
    Ok(table.to_report(spec.clone()))
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let spec = family_spec(&args.graph)?;
    let budget = args.graph.budget.budget();
    let closed = match args.method {
        Method::Closed | Method::Both => Some(closed_report(&spec)?),
        Method::Enum => None,
    };
    let enumerated = match args.method {
        Method::Enum | Method::Both => {
            let family = spec.realize().map_err(|e| CliError::Config(e.to_string()))?;
            Some(spectrum::spectrum_enumerate(&family, budget)?)
        }
        Method::Closed => None,
    };
    match (closed, enumerated) {
        (Some(c), Some(e)) => {
            let matched = c.same_spectrum(&e);
            if args.json {
                json_out(&serde_json::json!({ "closed_form": c, "enumerated": e, "match": matched }))?;
            } else {
                side_by_side(&c, &e);
                println!("{}", if matched { "MATCH" } else { "MISMATCH" });
            }
            if !matched {
                return Err(CliError::Mismatch("closed form and enumeration disagree".into()));
            }
        }
        (Some(r), None) | (None, Some(r)) => {
            if args.json {
                json_out(&r)?;
            } else {
                print_table(&r);
            }
        }
        (None, None) => unreachable!("every method yields a report"),
    }
    Ok(())
}

fn cmd_metrics(args: &MetricsArgs) -> Result<(), CliError> {
    let graph = build_graph(&args.graph, BuildMode::Materialized)?;
    let report = MetricsReport::compute(&graph)?;
    let witnesses = witness_sample(&graph, args.seed, args.samples)?;
    if args.json {
        json_out(&report)?;
    } else {
        println!("{}", report.summary());
        if let Some((ok, n)) = witnesses {
            println!("path witnesses {ok}/{n} valid (seed {})", args.seed);
        }
    }
    let witnesses_ok = witnesses.is_none_or(|(ok, n)| ok == n);
    if report.matches.all() && witnesses_ok {
        Ok(())
    } else {
        Err(CliError::Mismatch("metrics disagree with predictions".into()))
    }
}

// (valid, sampled) for seeded random vertex pairs, when witnesses apply.
fn witness_sample(graph: &Graph, seed: u64, samples: usize) -> Result<Option<(usize, usize)>, CliError> {
    let fam = graph.family();
    if !fam.is_linearized() || fam.m() > fam.field().degree() || samples == 0 {
        return Ok(None);
    }
    let bound = 2 * (fam.m() + 1);
    let n = graph.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = || rng.gen_range(0..n);
    let mut ok = 0;
    for _ in 0..samples {
        let (a, b) = (graph.decode(next())?, graph.decode(next())?);
        let w = linwenger::metrics::diameter_witness(fam, &a, &b)?;
        if w.len() <= bound && w.is_valid(fam) {
            ok += 1;
        }
    }
    Ok(Some((ok, samples)))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        budget: args.budget.budget(),
        seed: args.seed,
        perturb: args.perturb,
        ..VerifyConfig::default()
    };
    let results = verify::run_all(cfg);
    if args.json {
        json_out(&results)?;
    } else {
        for r in &results {
            println!("{}", r.line());
        }
    }
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    if failed > 0 {
        Err(CliError::Mismatch(format!("{failed} criteria failed")))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
