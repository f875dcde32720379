//! `dirroute`: network generation and validation, routing queries and
//! baseline-vs-directional simulation runs.

mod error;
mod export;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirroute::discovery::{rss_bfs, DiscoveryOutcome, RoutingBudget, SearchParams, DEFAULT_HANDLING_CHARGE};
use dirroute::geo::SectorParams;
use dirroute::network::{emit, generate_network, load_network, GeneratorParams, HubId, Network};
use dirroute::pathfinding::{min_time_table, shortest_path};
use dirroute::policy::RoutingMode;
use dirroute::sim::{compare_runs, generate_shipments, run_simulation, write_event_log, ScenarioConfig, Shipment};
use serde_json::json;

use error::{CliError, Kind};
use export::{discovery_geojson, path_geojson, pretty, sha256_hex, write_file, OutDir, RunManifest};

/// Seed of the network generated when `sim` runs without `--network`.
const DEFAULT_NETWORK_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "dirroute", version, about = "Directional freight routing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or validate network documents.
    #[command(subcommand)]
    Net(NetCommand),
    /// One-shot routing queries.
    #[command(subcommand)]
    Route(RouteCommand),
    /// Simulate consolidation and dispatch.
    #[command(subcommand)]
    Sim(SimCommand),
}

#[derive(Subcommand)]
enum NetCommand {
    /// Write a seeded synthetic network.
    Gen {
        #[arg(long, default_value_t = 30)]
        hubs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        k_nearest: usize,
        #[arg(long, default_value_t = 2)]
        terminals: usize,
        #[arg(long, default_value_t = 50.0)]
        speed_mph: f64,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a network document and report every violation.
    Validate {
        #[arg(long)]
        network: PathBuf,
    },
}

#[derive(Args)]
struct Endpoints {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// Also write a GeoJSON rendering.
    #[arg(long)]
    geojson: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RouteCommand {
    /// Minimum travel-time path.
    Sp(Endpoints),
    /// Sector-constrained candidate area for a shipment at `--from`.
    Discover {
        #[command(flatten)]
        endpoints: Endpoints,
        /// Hours left until the deadline.
        #[arg(long)]
        budget: f64,
        #[arg(long, default_value_t = 50.0)]
        half_width: f64,
        #[arg(long, default_value_t = DEFAULT_HANDLING_CHARGE)]
        handling: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Baseline,
    Directional,
}

impl From<ModeArg> for RoutingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Baseline => RoutingMode::Baseline,
            ModeArg::Directional => RoutingMode::Directional,
        }
    }
}

#[derive(Args)]
struct Scenario {
    /// Network document; a 30-hub network is generated when absent.
    #[arg(long)]
    network: Option<PathBuf>,
    /// Seed of the generated network (ignored with `--network`).
    #[arg(long, default_value_t = DEFAULT_NETWORK_SEED)]
    network_seed: u64,
    /// Scenario configuration (JSON, ScenarioConfig field names).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shipment generation seed; overrides the configuration file.
    #[arg(long)]
    seed: Option<u64>,
    /// Shipment count; overrides the configuration file.
    #[arg(long)]
    shipments: Option<usize>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum SimCommand {
    /// Run one routing mode.
    Run {
        #[command(flatten)]
        scenario: Scenario,
        /// Overrides the configuration file.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Run both modes on the same shipments and compare them.
    Compare {
        #[command(flatten)]
        scenario: Scenario,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::usage(first));
            return ExitCode::from(Kind::Usage.exit_code());
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.kind.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Net(NetCommand::Gen {
            hubs,
            seed,
            k_nearest,
            terminals,
            speed_mph,
            out,
        }) => {
            let params = GeneratorParams {
                hub_count: hubs,
                k_nearest,
                terminal_count: terminals,
                speed_mph,
                ..Default::default()
            };
            let text = emit(&generate_network(&params, seed)?);
            match out {
                Some(path) => write_file(&path, &text),
                None => stdout(&text),
            }
        }
        Command::Net(NetCommand::Validate { network }) => {
            let net = read_network(&network)?;
            stdout(&format!(
                "ok: {} hubs, {} arcs, {} terminals\n",
                net.hubs().len(),
                net.arcs().len(),
                net.terminals().count()
            ))
        }
        Command::Route(RouteCommand::Sp(ends)) => {
            let net = read_network(&ends.network)?;
            let path = shortest_path(&net, &HubId::new(&ends.from), &HubId::new(&ends.to))?;
            if let Some(g) = &ends.geojson {
                write_file(g, &path_geojson(&net, &path.hubs))?;
            }
            stdout(&pretty(&path))
        }
        Command::Route(RouteCommand::Discover {
            endpoints: ends,
            budget,
            half_width,
            handling,
        }) => {
            let net = read_network(&ends.network)?;
            let (from, to) = (HubId::new(&ends.from), HubId::new(&ends.to));
            let sector = SectorParams::new(half_width).map_err(|e| CliError::usage(e.to_string()))?;
            let params = SearchParams::new(sector, handling)?;
            let budget = RoutingBudget::new(budget)?;
            let path = shortest_path(&net, &from, &to)?;
            let table = min_time_table(&net, &to)?;
            let outcome = rss_bfs(&net, &table, &from, &to, budget, &params)?;
            if let Some(g) = &ends.geojson {
                let cs = match &outcome {
                    DiscoveryOutcome::Found(cs) => Some(cs),
                    DiscoveryOutcome::Infeasible { .. } => None,
                };
                write_file(g, &discovery_geojson(&net, cs, &path.hubs))?;
            }
            stdout(&pretty(&outcome))
        }
        Command::Sim(SimCommand::Run { scenario, mode }) => sim_run(scenario, mode.map(Into::into)),
        Command::Sim(SimCommand::Compare { scenario }) => sim_compare(scenario),
    }
}

fn stdout(text: &str) -> Result<(), CliError> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::new(Kind::Internal, format!("cannot write to standard output: {e}")))
}

fn read_network(path: &Path) -> Result<Network, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    load_network(&text).map_err(|e| CliError::new(Kind::Validation, format!("{}: {e}", path.display())))
}

/// Network, its canonical document text, and the resolved configuration
/// (flags > file > defaults).
struct Prepared {
    net: Network,
    network_text: String,
    cfg: ScenarioConfig,
    shipments: Vec<Shipment>,
}

fn prepare(s: &Scenario, mode: Option<RoutingMode>) -> Result<Prepared, CliError> {
    let net = match &s.network {
        Some(path) => read_network(path)?,
        None => generate_network(&GeneratorParams::default(), s.network_seed)?,
    };
    let mut cfg = match &s.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = s.seed {
        cfg.seed = seed;
    }
    if let Some(n) = s.shipments {
        cfg.shipment_count = n;
    }
    if let Some(m) = mode {
        cfg.mode = m;
    }
    cfg.validate()?;
    let shipments = generate_shipments(&net, &cfg)?;
    Ok(Prepared {
        network_text: emit(&net),
        net,
        cfg,
        shipments,
    })
}

fn manifest(command: &str, p: &Prepared, config_text: &str, shipments_text: &str) -> RunManifest {
    RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        seed: p.cfg.seed,
        config_digest: sha256_hex(config_text.as_bytes()),
        network_digest: sha256_hex(p.network_text.as_bytes()),
        shipments_digest: sha256_hex(shipments_text.as_bytes()),
        outputs: Default::default(),
    }
}

fn sim_run(s: Scenario, mode: Option<RoutingMode>) -> Result<(), CliError> {
    let p = prepare(&s, mode)?;
    let result = run_simulation(&p.net, &p.shipments, &p.cfg)?;

    let config_text = pretty(&p.cfg);
    let shipments_text = pretty(&p.shipments);
    let mut out = OutDir::new(s.out_dir);
    out.put("config.json", &config_text)?;
    out.put("network.json", &p.network_text)?;
    out.put("shipments.json", &shipments_text)?;
    out.put("events.jsonl", &write_event_log(&result.log))?;
    out.put("trips.json", &pretty(&result.trips))?;
    out.put("kpi.json", &pretty(&result.kpis))?;
    let m = manifest("sim run", &p, &config_text, &shipments_text);
    out.finish(m)?;
    stdout(&pretty(&result.kpis))
}

fn sim_compare(s: Scenario) -> Result<(), CliError> {
    let p = prepare(&s, Some(RoutingMode::Baseline))?;
    let base_cfg = p.cfg.clone();
    let dir_cfg = ScenarioConfig {
        mode: RoutingMode::Directional,
        ..base_cfg.clone()
    };
    let base = run_simulation(&p.net, &p.shipments, &base_cfg)?;
    let dir = run_simulation(&p.net, &p.shipments, &dir_cfg)?;
    let report = compare_runs(&base_cfg, &base.kpis, &dir_cfg, &dir.kpis)?;

    // the mode recorded in the configuration is irrelevant to a comparison
    let config_text = pretty(&json!({"baseline": base_cfg, "directional": dir_cfg}));
    let shipments_text = pretty(&p.shipments);
    let table = report.to_table();
    let mut out = OutDir::new(s.out_dir);
    out.put("config.json", &config_text)?;
    out.put("network.json", &p.network_text)?;
    out.put("shipments.json", &shipments_text)?;
    out.put("events.baseline.jsonl", &write_event_log(&base.log))?;
    out.put("events.directional.jsonl", &write_event_log(&dir.log))?;
    out.put("kpi.baseline.json", &pretty(&base.kpis))?;
    out.put("kpi.directional.json", &pretty(&dir.kpis))?;
    out.put("comparison.json", &pretty(&report))?;
    out.put("comparison.txt", &table)?;
    let m = manifest("sim compare", &p, &config_text, &shipments_text);
    out.finish(m)?;
    stdout(&table)
}
