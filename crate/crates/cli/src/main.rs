//! `ssflip`: generate graphs, build codes, verify properties, run decoding
//! trials and benchmark the decoder.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use ssflip::harness::{
    bench, plan_trials, verify_suite, BenchConfig, CheckStatus, ErrorModel, GuaranteeRadius, HarnessError,
    SideSelection, SimulationSummary, TrialConfig, TrialRecord, TrialRunner, VerifyReport, VerifySettings,
    WeightScaling, HARNESS_SUBSET_CEILING, SCHEMA_VERSION,
};
use ssflip::{BipartiteGraph, CssCode, GraphError};

#[derive(Parser)]
#[command(name = "ssflip", version, about = "Small-set-flip decoding of hypergraph product codes")]
struct Cli {
    /// Master seed for graph generation and trial sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports and records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for trials; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random biregular bipartite graph and write it as text.
    GenGraph(GraphShape),
    /// Build the hypergraph product code of a graph and report its parameters.
    BuildCode {
        #[command(flatten)]
        graph: GraphSource,
        /// Include the check matrices as lists of row supports.
        #[arg(long)]
        matrices: bool,
    },
    /// Run the verification suite on a graph and its code.
    Verify {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        expansion: ExpansionArgs,
        /// Random errors per sampled property.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Largest number of errors enumerated per exhaustive weight.
        #[arg(long, default_value_t = 200_000)]
        max_exhaustive: u128,
        /// Candidate budget for distance and coset searches.
        #[arg(long, default_value_t = 50_000_000)]
        oracle_ceiling: u128,
    },
    /// Decode random or exhaustive errors and write one record per trial.
    Simulate(SimulateArgs),
    /// Measure decode time and generator evaluations across sizes.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct GraphShape {
    /// Number of left vertices.
    #[arg(long)]
    na: usize,
    /// Number of right vertices.
    #[arg(long)]
    nb: usize,
    /// Degree of every left vertex.
    #[arg(long)]
    da: usize,
    /// Degree of every right vertex.
    #[arg(long)]
    db: usize,
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Graph file in the text format written by `gen-graph`.
    #[arg(long, conflicts_with_all = ["na", "nb", "da", "db"])]
    graph: Option<PathBuf>,
    /// Left side size of a freshly generated graph.
    #[arg(long, requires_all = ["nb", "da", "db"])]
    na: Option<usize>,
    /// Right side size of a freshly generated graph.
    #[arg(long)]
    nb: Option<usize>,
    /// Left degree of a freshly generated graph.
    #[arg(long)]
    da: Option<usize>,
    /// Right degree of a freshly generated graph.
    #[arg(long)]
    db: Option<usize>,
}

#[derive(Args, Clone)]
struct ExpansionArgs {
    /// Largest subset size for exhaustive expansion certification.
    #[arg(long, default_value_t = 4)]
    max_subset_size: usize,
    /// Budget of subsets for exhaustive certification.
    #[arg(long, default_value_t = HARNESS_SUBSET_CEILING)]
    subset_ceiling: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Z,
    Both,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphSource,
    #[command(flatten)]
    expansion: ExpansionArgs,
    /// Random supports per weight, or every support of each weight.
    #[arg(long, value_enum, default_value_t = ModelArg::Random)]
    model: ModelArg,
    /// Smallest error weight.
    #[arg(long, default_value_t = 1)]
    min_weight: usize,
    /// Largest error weight.
    #[arg(long, default_value_t = 4)]
    max_weight: usize,
    /// Trials per weight and error type for the random model.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Error types to decode.
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    side: SideArg,
    /// Skip the stabilizer-equivalence check of corrections.
    #[arg(long)]
    no_equivalence: bool,
    /// Record zero wall times so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Expansion parameters `gamma_a,delta_a,gamma_b,delta_b` used for the
    /// guaranteed radius instead of exhaustive certification.
    #[arg(long, value_delimiter = ',')]
    assume: Option<Vec<f64>>,
}

#[derive(Args)]
struct BenchArgs {
    /// Left-side sizes.
    #[arg(long, value_delimiter = ',', default_value = "24,48,96")]
    sizes: Vec<usize>,
    /// Left degree.
    #[arg(long, default_value_t = 3)]
    da: usize,
    /// Right degree.
    #[arg(long, default_value_t = 4)]
    db: usize,
    /// Error weight for the fixed-weight rows.
    #[arg(long, default_value_t = 2)]
    weight: usize,
    /// Factor `c` for rows with weight `ceil(c * sqrt(n))`.
    #[arg(long, default_value_t = 0.1)]
    sqrt_factor: f64,
    /// Decoded errors per row.
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

/// A failed run, mapped to the process exit code.
enum Failure {
    /// A property check or guarantee failed (exit 1).
    Check(String),
    /// Bad arguments or unreadable input (exit 2).
    Usage(String),
    /// An oracle request exceeded its budget (exit 3).
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Infeasible(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("json error: {e}"))
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::DegreeEquation { .. } | GraphError::Shape(_) | GraphError::InvalidParameters(_) => {
                Failure::Usage(e.to_string())
            }
            GraphError::Infeasible { .. } => Failure::Infeasible(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidConfig(m) => Failure::Usage(m),
            HarnessError::Graph(g) => g.into(),
            HarnessError::Oracle(ssflip::oracle::OracleError::Infeasible { .. }) => Failure::Infeasible(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ssflip: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::GenGraph(shape) => {
            let g = BipartiteGraph::generate_biregular(shape.na, shape.nb, shape.da, shape.db, cli.seed)?;
            let mut out = open_output(cli.out.as_deref())?;
            out.write_all(g.to_text().as_bytes())?;
            out.flush()?;
            Ok(())
        }
        Command::BuildCode { graph, matrices } => build_code(cli, &load_graph(graph, cli.seed)?, *matrices),
        Command::Verify {
            graph,
            expansion,
            samples,
            max_exhaustive,
            oracle_ceiling,
        } => {
            let settings = VerifySettings {
                max_subset_size: expansion.max_subset_size,
                ceiling: expansion.subset_ceiling,
                oracle_ceiling: *oracle_ceiling,
                samples: *samples,
                max_exhaustive: *max_exhaustive,
                seed: cli.seed,
            };
            let report = match &graph.graph {
                Some(path) => match BipartiteGraph::from_text(&read_text(path)?) {
                    Ok(g) => verify_suite(&g, &settings)?,
                    Err(e) => VerifyReport::invalid_graph(&e),
                },
                None => verify_suite(&load_graph(graph, cli.seed)?, &settings)?,
            };
            write_verify(cli, &report)?;
            if report.failed > 0 {
                Err(Failure::Check(format!("{} checks failed", report.failed)))
            } else if report.skipped > 0 {
                Err(Failure::Infeasible(format!("{} checks skipped as infeasible", report.skipped)))
            } else {
                Ok(())
            }
        }
        Command::Simulate(args) => simulate(cli, args),
        Command::Bench(args) => run_bench(cli, args),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(src: &GraphSource, seed: u64) -> Result<BipartiteGraph, Failure> {
    match (&src.graph, src.na, src.nb, src.da, src.db) {
        (Some(path), ..) => BipartiteGraph::from_text(&read_text(path)?)
            .map_err(|e| Failure::Check(format!("invalid graph file: {e}"))),
        (None, Some(na), Some(nb), Some(da), Some(db)) => Ok(BipartiteGraph::generate_biregular(na, nb, da, db, seed)?),
        _ => Err(Failure::Usage("give --graph FILE or all of --na --nb --da --db".into())),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn build_code(cli: &Cli, graph: &BipartiteGraph, matrices: bool) -> Result<(), Failure> {
    let code = CssCode::hypergraph_product(graph.clone());
    let p = code.parameters();
    let mut out = open_output(cli.out.as_deref())?;
    match cli.format {
        Format::Json => {
            let mut doc = json!({ "schema": SCHEMA_VERSION, "kind": "code", "parameters": p });
            if matrices {
                let rows = |m: &ssflip::Gf2SparseMatrix| (0..m.rows()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>();
                doc["h_x"] = json!(rows(code.h_x()));
                doc["h_z"] = json!(rows(code.h_z()));
            }
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(p)?;
            w.flush()?;
            return Ok(());
        }
    }
    out.flush()?;
    Ok(())
}

fn write_verify(cli: &Cli, report: &VerifyReport) -> Result<(), Failure> {
    let mut out = open_output(cli.out.as_deref())?;
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "status", "cases", "detail"])?;
            for c in &report.checks {
                w.write_record([&c.name, status_label(c.status), &c.cases.to_string(), &c.detail])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<(), Failure> {
    let graph = load_graph(&args.graph, cli.seed)?;
    let radius = match &args.assume {
        Some(v) if v.len() == 4 => Some(GuaranteeRadius::assume(&graph, v[0], v[1], v[2], v[3])),
        Some(_) => return Err(Failure::Usage("--assume takes gamma_a,delta_a,gamma_b,delta_b".into())),
        None => match GuaranteeRadius::certify(&graph, args.expansion.max_subset_size, args.expansion.subset_ceiling)
        {
            Ok(r) => Some(r),
            Err(HarnessError::Graph(GraphError::Infeasible { .. })) => None,
            Err(e) => return Err(e.into()),
        },
    };
    let code = CssCode::hypergraph_product(graph);
    let cfg = TrialConfig {
        model: match args.model {
            ModelArg::Random => ErrorModel::RandomSupport,
            ModelArg::Exhaustive => ErrorModel::Exhaustive,
        },
        min_weight: args.min_weight,
        max_weight: args.max_weight,
        trials_per_weight: args.trials,
        master_seed: cli.seed,
        side: match args.side {
            SideArg::X => SideSelection::X,
            SideArg::Z => SideSelection::Z,
            SideArg::Both => SideSelection::Both,
        },
        check_equivalence: !args.no_equivalence,
        timed: !args.no_timing,
    };
    let specs = plan_trials(&code, &cfg)?;
    let threads = cli.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))?;
    let chunk = specs.len().div_ceil(threads * 4).max(1);
    let mut records: Vec<TrialRecord> = pool.install(|| {
        specs
            .par_chunks(chunk)
            .map(|part| {
                let mut runner = TrialRunner::new(&code, &cfg, radius)?;
                part.iter().map(|s| runner.run(s)).collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<Vec<_>>, HarnessError>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    records.sort_by_key(|r| r.trial);
    let summary = SimulationSummary::build(&code, &cfg, radius, &records);

    let mut out = open_output(cli.out.as_deref())?;
    match cli.format {
        Format::Json => {
            for r in &records {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
            serde_json::to_writer(&mut out, &summary)?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &records {
                w.serialize(r)?;
            }
            w.flush()?;
            eprintln!("{}", serde_json::to_string(&summary)?);
        }
    }
    if summary.guaranteed_failures > 0 || summary.accounting_violations > 0 {
        return Err(Failure::Check(format!(
            "{} guaranteed-regime failures, {} accounting violations",
            summary.guaranteed_failures, summary.accounting_violations
        )));
    }
    Ok(())
}

fn run_bench(cli: &Cli, args: &BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        delta_a: args.da,
        delta_b: args.db,
        scalings: vec![WeightScaling::Fixed(args.weight), WeightScaling::Sqrt(args.sqrt_factor)],
        trials: args.trials,
        seed: cli.seed,
    };
    let report = bench(&cfg)?;
    let mut out = open_output(cli.out.as_deref())?;
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "n_a",
                "n_b",
                "n",
                "scaling",
                "weight",
                "trials",
                "mean_decode_us",
                "mean_evaluations",
                "mean_syndrome_weight",
                "evaluations_per_syndrome_unit",
                "success_rate",
                "trace_consistent",
            ])?;
            for r in &report.rows {
                let scaling = match r.scaling {
                    WeightScaling::Fixed(w) => format!("fixed:{w}"),
                    WeightScaling::Sqrt(c) => format!("sqrt:{c}"),
                };
                w.write_record([
                    r.n_a.to_string(),
                    r.n_b.to_string(),
                    r.n.to_string(),
                    scaling,
                    r.weight.to_string(),
                    r.trials.to_string(),
                    format!("{:.3}", r.mean_decode_us),
                    format!("{:.3}", r.mean_evaluations),
                    format!("{:.3}", r.mean_syndrome_weight),
                    format!("{:.3}", r.evaluations_per_syndrome_unit),
                    format!("{:.4}", r.success_rate),
                    r.trace_consistent.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    if report.rows.iter().any(|r| !r.trace_consistent) {
        return Err(Failure::Check("evaluation budget exceeded".into()));
    }
    Ok(())
}

fn status_label(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped => "skipped",
        CheckStatus::NotApplicable => "not_applicable",
    }
}
