//! `tradenet` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 when some
//! simulation scenarios failed (the others still produce output).

pub mod manifest;
pub mod output;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::centrality::{rank_edges_by, rank_nodes, IndicatorKind, InfluenceRanking};
use crate::efficiency::network_efficiency;
use crate::ingest::{build_yearly_networks, parse_trade_file, write_network_records, Flow, ParseReport};
use crate::network::{Element, FlowRecord, TradeNetwork};
use crate::resilience::summarize;
use crate::simulation::{
    rank_by_impact, run_random_control, run_shock_recovery, RecoveryOrder, ScenarioConfig,
    TargetKind,
};
use crate::synthetic::{hub_dominated, HubNetworkSpec};

pub use manifest::{RunManifest, ScenarioSpec, YearSelection};
pub use output::{ScenarioFailure, ScenarioOutcome, REPORT_HEADER, TRAJECTORY_HEADER};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tradenet", version, about = "Trade network resilience simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-year network statistics: year,N,N_E,W,density.
    Ingest(IngestArgs),
    /// Per-year normalized network efficiency.
    Efficiency(EfficiencyArgs),
    /// Top-K elements under an influence indicator.
    Rank(RankArgs),
    /// Exact single-element efficiency impact scan.
    Impact(ImpactArgs),
    /// Shock-recovery scenarios from a manifest or flags.
    Simulate(SimulateArgs),
    /// Write a synthetic hub-dominated network as trade records.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Trade records (csv or csv.gz).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Which reported direction builds the networks.
    #[arg(long, default_value = "import")]
    pub flow: Flow,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also print record and row-error counts to stderr.
    #[arg(long)]
    pub summary: bool,
    /// Fail on any malformed row.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `all`, `1988-2022` or `2008,2020`.
    #[arg(long, default_value = "all")]
    pub years: YearSelection,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub year: i32,
    #[arg(long, default_value = "out_degree")]
    pub indicator: IndicatorKind,
    #[arg(long, default_value = "nodes")]
    pub target: TargetKind,
    /// Number of rows, or `all`.
    #[arg(long, default_value = "10", value_parser = parse_top)]
    pub top: usize,
    /// Seed for random and module-based indicators.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ImpactArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub year: i32,
    #[arg(long, default_value = "nodes")]
    pub target: TargetKind,
    /// Number of rows, or `all`.
    #[arg(long, default_value = "10", value_parser = parse_top)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML run manifest; excludes the scenario flags below.
    #[arg(long, conflicts_with_all = ["input", "output_dir", "indicators"])]
    pub manifest: Option<PathBuf>,
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, default_value = "all")]
    pub years: YearSelection,
    #[arg(long, default_value = "import")]
    pub flow: Flow,
    #[arg(long, default_value = "nodes")]
    pub target: TargetKind,
    /// Comma-separated indicators, one scenario each.
    #[arg(long, value_delimiter = ',', default_value = "out_degree")]
    pub indicators: Vec<IndicatorKind>,
    #[arg(long, default_value_t = 0.01)]
    pub batch_fraction: f64,
    #[arg(long, default_value_t = 0.5)]
    pub shock_depth: f64,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long)]
    pub reverse_recovery: bool,
    #[arg(long)]
    pub recompute_rankings: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores); overrides the manifest.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Skip summary.json.
    #[arg(long)]
    pub no_json: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub nodes: usize,
    #[arg(long, default_value_t = 2)]
    pub links_per_node: usize,
    #[arg(long, default_value_t = 2020)]
    pub seed: u64,
    /// One network per year; consecutive years use consecutive seeds.
    #[arg(long, default_value = "2020")]
    pub years: YearSelection,
}

fn parse_top(s: &str) -> Result<usize, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(usize::MAX);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("top must be >= 1".into()),
        Ok(k) => Ok(k),
        Err(e) => Err(format!("`{s}`: {e}")),
    }
}

/// Command failure; the message goes to stderr and the process exits with 1.
#[derive(Debug)]
pub struct Invalid(pub String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

pub fn run(cli: Cli) -> u8 {
    let res = match cli.command {
        Command::Ingest(a) => cmd_ingest(&a).map(|_| EXIT_OK),
        Command::Efficiency(a) => cmd_efficiency(&a).map(|_| EXIT_OK),
        Command::Rank(a) => cmd_rank(&a).map(|_| EXIT_OK),
        Command::Impact(a) => cmd_impact(&a).map(|_| EXIT_OK),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Generate(a) => cmd_generate(&a).map(|_| EXIT_OK),
    };
    match res {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    }
}

fn report_row_errors(report: &ParseReport) {
    for e in &report.errors {
        eprintln!("line {}: {}", e.line, e.message);
    }
}

fn load(input: &Path, flow: Flow) -> Result<(ParseReport, BTreeMap<i32, TradeNetwork>), Invalid> {
    let report = parse_trade_file(input)?;
    report_row_errors(&report);
    let mut nets = build_yearly_networks(&report.records, flow)?;
    // years whose rows were all zero-valued are empty networks, not missing
    for &year in &report.years_seen {
        if let std::collections::btree_map::Entry::Vacant(slot) = nets.entry(year) {
            slot.insert(TradeNetwork::build(year, Vec::<FlowRecord>::new())?);
        }
    }
    Ok((report, nets))
}

fn load_year(args: &InputArgs, year: i32) -> Result<TradeNetwork, Invalid> {
    let (_, mut nets) = load(&args.input, args.flow)?;
    nets.remove(&year)
        .ok_or_else(|| Invalid(format!("year {year} not present in {}", args.input.display())))
}

fn stdout_csv() -> csv::Writer<io::StdoutLock<'static>> {
    csv::Writer::from_writer(io::stdout().lock())
}

pub fn cmd_ingest(args: &IngestArgs) -> Result<(), Invalid> {
    let (report, nets) = load(&args.input.input, args.input.flow)?;
    if args.strict && !report.is_clean() {
        return Err(Invalid(format!("{} malformed row(s)", report.errors.len())));
    }
    if args.summary {
        eprintln!(
            "records: {}, row errors: {}, zero-value rows dropped: {}, years: {}",
            report.records.len(),
            report.errors.len(),
            report.zero_value_dropped,
            report.years_seen.len()
        );
    }
    let mut w = stdout_csv();
    w.write_record(["year", "N", "N_E", "W", "density"])?;
    for (year, net) in &nets {
        let s = net.stats();
        w.write_record([
            year.to_string(),
            s.nodes.to_string(),
            s.edges.to_string(),
            s.total_volume.to_string(),
            s.density.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_efficiency(args: &EfficiencyArgs) -> Result<(), Invalid> {
    let (_, nets) = load(&args.input.input, args.input.flow)?;
    let available: Vec<i32> = nets.keys().copied().collect();
    let years = args.years.resolve(&available)?;
    if let Some(y) = years.iter().find(|y| !nets.contains_key(y)) {
        return Err(Invalid(format!("year {y} not present in {}", args.input.input.display())));
    }
    let rows: Vec<_> = years
        .par_iter()
        .map(|y| {
            let net = &nets[y];
            (*y, net.node_count(), net.edge_count(), network_efficiency(net))
        })
        .collect();
    let mut w = stdout_csv();
    w.write_record(["year", "N", "N_E", "mean_weight", "E", "E_W"])?;
    for (year, n, ne, eff) in rows {
        w.write_record([
            year.to_string(),
            n.to_string(),
            ne.to_string(),
            eff.reference_mean_weight.to_string(),
            eff.raw_efficiency.to_string(),
            eff.normalized_efficiency.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn element_fields(net: &TradeNetwork, el: Element) -> [String; 2] {
    match el {
        Element::Node(n) => [net.code(n).to_string(), String::new()],
        Element::Edge(e) => {
            let edge = net.edge(e);
            [net.code(edge.source).to_string(), net.code(edge.target).to_string()]
        }
    }
}

fn write_ranked(
    net: &TradeNetwork,
    kind: TargetKind,
    score_name: &str,
    rows: impl Iterator<Item = (Element, f64)>,
) -> Result<(), Invalid> {
    let mut w = stdout_csv();
    match kind {
        TargetKind::Nodes => w.write_record(["rank", "code", score_name])?,
        TargetKind::Edges => w.write_record(["rank", "source", "target", score_name])?,
    }
    for (i, (el, score)) in rows.enumerate() {
        let [a, b] = element_fields(net, el);
        let rank = (i + 1).to_string();
        match kind {
            TargetKind::Nodes => w.write_record([rank, a, score.to_string()])?,
            TargetKind::Edges => w.write_record([rank, a, b, score.to_string()])?,
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_rank(args: &RankArgs) -> Result<(), Invalid> {
    let net = load_year(&args.input, args.year)?;
    let ranking: InfluenceRanking = match args.target {
        TargetKind::Nodes => rank_nodes(&net, args.indicator, args.seed)?,
        TargetKind::Edges => rank_edges_by(&net, args.indicator, args.seed)?,
    };
    write_ranked(&net, args.target, "score", ranking.top(args.top))
}

pub fn cmd_impact(args: &ImpactArgs) -> Result<(), Invalid> {
    let net = load_year(&args.input, args.year)?;
    let scored = rank_by_impact(&net, args.target, args.top)?;
    write_ranked(&net, args.target, "impact", scored.into_iter())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), Invalid> {
    let years = args.years.resolve(&[])?;
    let mut buf = Vec::new();
    for (i, &year) in years.iter().enumerate() {
        let spec = HubNetworkSpec {
            nodes: args.nodes,
            links_per_node: args.links_per_node,
            seed: args.seed.wrapping_add(i as u64),
            year,
            ..HubNetworkSpec::default()
        };
        let mut part = Vec::new();
        write_network_records(&hub_dominated(&spec), &mut part)?;
        // keep a single header
        let skip = if i == 0 { 0 } else { part.iter().position(|&b| b == b'\n').map_or(0, |p| p + 1) };
        buf.extend_from_slice(&part[skip..]);
    }
    output::write_atomic(&args.output, &buf)?;
    Ok(())
}

fn manifest_from_flags(args: &SimulateArgs) -> Result<RunManifest, Invalid> {
    let input = args
        .input
        .clone()
        .ok_or_else(|| Invalid("simulate needs --manifest or --input".into()))?;
    let output_dir = args
        .output_dir
        .clone()
        .ok_or_else(|| Invalid("simulate needs --output-dir".into()))?;
    let recovery_order = if args.reverse_recovery {
        RecoveryOrder::ReverseShockOrder
    } else {
        RecoveryOrder::ShockOrder
    };
    let scenarios = args
        .indicators
        .iter()
        .map(|&indicator| ScenarioSpec {
            batch_fraction: Some(args.batch_fraction),
            shock_depth: Some(args.shock_depth),
            recovery_order: Some(recovery_order),
            replicates: Some(args.replicates),
            recompute_rankings: Some(args.recompute_rankings),
            ..ScenarioSpec::new(args.target, indicator)
        })
        .collect();
    Ok(RunManifest {
        input,
        output_dir,
        years: args.years.clone(),
        master_seed: args.seed,
        flow: args.flow,
        jobs: 0,
        json: !args.no_json,
        scenarios,
    })
}

pub fn run_id(year: i32, config: &ScenarioConfig, index: usize) -> String {
    format!(
        "{year}-{}-{}-{index:02}",
        config.target_kind.name(),
        config.indicator.name()
    )
}

/// Runs one scenario. Random scenarios with two or more replicates report
/// the replicate mean with its per-step spread.
pub fn execute_scenario(
    net: &TradeNetwork,
    config: &ScenarioConfig,
    run_id: String,
) -> Result<ScenarioOutcome, String> {
    let (trajectory, std, replicates) =
        if config.indicator == IndicatorKind::Random && config.replicates >= 2 {
            let rc = run_random_control(net, config).map_err(|e| e.to_string())?;
            (rc.mean, rc.std, config.replicates)
        } else {
            (run_shock_recovery(net, config).map_err(|e| e.to_string())?, Vec::new(), 1)
        };
    Ok(ScenarioOutcome {
        run_id,
        year: net.year(),
        indicator: config.indicator.name().to_string(),
        target_kind: config.target_kind.name().to_string(),
        report: summarize(&trajectory),
        trajectory,
        std,
        replicates,
    })
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<u8, Invalid> {
    let mut manifest = match &args.manifest {
        Some(path) => RunManifest::load(path)?,
        None => manifest_from_flags(args)?,
    };
    if let Some(j) = args.jobs {
        manifest.jobs = j;
    }
    if args.no_json {
        manifest.json = false;
    }
    simulate(&manifest)
}

/// Executes a validated manifest and writes all outputs under its
/// `output_dir`.
pub fn simulate(manifest: &RunManifest) -> Result<u8, Invalid> {
    manifest.validate()?;
    let (_, nets) = load(&manifest.input, manifest.flow)?;
    let available: Vec<i32> = nets.keys().copied().collect();
    let years = manifest.years.resolve(&available)?;
    if years.is_empty() {
        return Err(Invalid("no years selected".into()));
    }
    if let Some(y) = years.iter().find(|y| !nets.contains_key(y)) {
        return Err(Invalid(format!("year {y} not present in {}", manifest.input.display())));
    }
    let traj_dir = manifest.output_dir.join("trajectories");
    fs::create_dir_all(&traj_dir)
        .map_err(|e| Invalid(format!("cannot create {}: {e}", traj_dir.display())))?;

    let configs = manifest.configs();
    let tasks: Vec<(i32, usize, &ScenarioConfig)> = years
        .iter()
        .flat_map(|&y| configs.iter().map(move |(&i, c)| (y, i, c)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.jobs)
        .build()
        .map_err(|e| Invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<ScenarioOutcome, ScenarioFailure>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(year, index, config)| {
                let fail = |message: String| ScenarioFailure {
                    scenario: index,
                    year,
                    message,
                };
                let id = run_id(year, config, index);
                let outcome = execute_scenario(&nets[&year], config, id).map_err(fail)?;
                let bytes = output::trajectory_csv(&outcome).map_err(|e| fail(e.to_string()))?;
                let path = traj_dir.join(format!("{}.csv", outcome.run_id));
                output::write_atomic(&path, &bytes)
                    .map_err(|e| fail(format!("{}: {e}", path.display())))?;
                Ok(outcome)
            })
            .collect()
    });

    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(f) => {
                eprintln!("scenario {} (year {}) failed: {}", f.scenario, f.year, f.message);
                failures.push(f);
            }
        }
    }
    output::write_atomic(
        &manifest.output_dir.join("reports.csv"),
        &output::reports_csv(&outcomes)?,
    )?;
    if manifest.json {
        output::write_atomic(
            &manifest.output_dir.join("summary.json"),
            &output::summary_json(&outcomes, &failures)?,
        )?;
    }
    let mut err = io::stderr().lock();
    let _ = writeln!(
        err,
        "{} scenario(s) written to {}, {} failed",
        outcomes.len(),
        manifest.output_dir.display(),
        failures.len()
    );
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_PARTIAL })
}
