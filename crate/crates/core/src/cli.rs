//! Command-line surface: `gen | run | pareto | sweep | oracle`.
//!
//! Every command resolves its flags into a [`RunManifest`], computes the full
//! output [`Bundle`] in memory, and only then writes it. Replaying a manifest
//! with `--manifest` reproduces the bundle byte for byte.

use std::ffi::OsString;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::genetic::{evolve, GaConfig, SelectionParams};
use crate::oracle::{dijkstra_delay, enumerate_paths, exact_pareto_front, exact_weighted_optimum, DEFAULT_MAX_NODES};
use crate::pareto::{default_reference, dominates, nsga_evolve, weighted_sum_sweep, NsgaParams, ObjectiveVector};
use crate::qos::{path_qos, BandwidthRule, Constraints, Weights};
use crate::report::{self, Bundle, NamedPathRow};
use crate::topology::{
    load_topology, save_topology, Area, AttrRanges, NodeId, Path, RouteQuery, Topology, TopologyParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_NO_ROUTE: i32 = 3;
pub const EXIT_TOPOLOGY: i32 = 4;
pub const EXIT_GUARD: i32 = 5;

/// Generation attempts (seed, seed+1, ...) when a route is required.
pub const MAX_CONNECT_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parameter(_) | Error::Path(_) => EXIT_PARAMETER,
            Error::NoRoute { .. } => EXIT_NO_ROUTE,
            Error::Format { .. } => EXIT_TOPOLOGY,
            Error::Size { .. } => EXIT_GUARD,
            Error::Io(_) => EXIT_IO,
        };
        CliError::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "meshqos",
    version,
    about = "Adaptive GA multi-QoS routing for wireless mesh networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random geometric topology.
    Gen(GenArgs),
    /// Evolve the weighted-sum optimal route with the adaptive GA.
    Run(RunArgs),
    /// Evolve Pareto fronts with NSGA and snapshot the archive.
    Pareto(ParetoArgs),
    /// Weighted-sum sweep over random weights plus one NSGA archive.
    Sweep(SweepArgs),
    /// Exhaustive ground truth on a small topology.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    MaxNode,
    BottleneckMin,
}

impl From<RuleArg> for BandwidthRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::MaxNode => BandwidthRule::MaxNode,
            RuleArg::BottleneckMin => BandwidthRule::BottleneckMin,
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated {what}, got `{s}`"));
    }
    parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|_| format!("cannot parse `{p}` in `{s}`")))
        .collect()
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_list::<f64>(s, 2, "numbers")?;
    Ok((v[0], v[1]))
}

fn parse_area(s: &str) -> Result<(f64, f64), String> {
    if s.contains(',') {
        parse_pair(s)
    } else {
        let w: f64 = s.trim().parse().map_err(|_| format!("cannot parse area `{s}`"))?;
        Ok((w, w))
    }
}

fn parse_route(s: &str) -> Result<(u32, u32), String> {
    let v = parse_list::<u32>(s, 2, "node ids")?;
    Ok((v[0], v[1]))
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    let v = parse_list::<f64>(s, 3, "weights")?;
    Weights::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

fn parse_constraints(s: &str) -> Result<(f64, f64, u32), String> {
    let v = parse_list::<String>(s, 3, "constraints")?;
    let d = v[0].parse().map_err(|_| format!("bad dmax `{}`", v[0]))?;
    let b = v[1].parse().map_err(|_| format!("bad bmin `{}`", v[1]))?;
    let h = v[2].parse().map_err(|_| format!("bad hmax `{}`", v[2]))?;
    Ok((d, b, h))
}

/// Parameters for generating a topology when no `--topology` file is given.
#[derive(Debug, Clone, Args)]
pub struct TopoGenArgs {
    #[arg(long, default_value_t = 50)]
    pub nodes: usize,
    /// `W,H` in meters, or a single value for a square.
    #[arg(long, value_parser = parse_area, default_value = "1000,1000")]
    pub area: (f64, f64),
    #[arg(long, default_value_t = 200.0)]
    pub radius: f64,
    /// Node delay sampling interval `lo,hi` in ms.
    #[arg(long, value_parser = parse_pair, default_value = "1,10")]
    pub delay_range: (f64, f64),
    /// Node bandwidth sampling interval `lo,hi` in Mbps.
    #[arg(long, value_parser = parse_pair, default_value = "1,10")]
    pub bandwidth_range: (f64, f64),
}

impl TopoGenArgs {
    fn params(&self) -> TopologyParams {
        TopologyParams {
            node_count: self.nodes,
            area: Area {
                width: self.area.0,
                height: self.area.1,
            },
            coverage_radius: self.radius,
            attr_ranges: AttrRanges {
                delay_ms: self.delay_range,
                bandwidth_mbps: self.bandwidth_range,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, required_unless_present = "manifest")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub topo: TopoGenArgs,
    /// Regenerate with seed+1 (up to 100 attempts) until `S,D` are connected.
    #[arg(long, value_parser = parse_route)]
    pub require_route: Option<(u32, u32)>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Replay a previously written manifest; other flags except --out are ignored.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, required_unless_present = "manifest")]
    pub seed: Option<u64>,
    /// Topology file; when absent a topology is generated from the flags below.
    #[arg(long)]
    pub topology: Option<PathBuf>,
    /// Seed for a generated topology (defaults to --seed).
    #[arg(long)]
    pub topology_seed: Option<u64>,
    #[command(flatten)]
    pub topo: TopoGenArgs,
    #[arg(long, default_value_t = 1)]
    pub source: u32,
    /// Destination node; defaults to the highest node id.
    #[arg(long)]
    pub dest: Option<u32>,
    #[arg(long, value_enum, default_value = "max-node")]
    pub bandwidth_rule: RuleArg,
    /// `a1,a2,a3` summing to 1.
    #[arg(long, value_parser = parse_weights, default_value = "0.5,0.15,0.35")]
    pub weights: Weights,
    /// `dmax,bmin,hmax`.
    #[arg(long, value_parser = parse_constraints, default_value = "50,1,10")]
    pub constraints: (f64, f64, u32),
    #[arg(long, default_value_t = 50)]
    pub pop: usize,
    #[arg(long, default_value_t = 100)]
    pub gens: u32,
    #[arg(long, default_value_t = 0.75)]
    pub pc: f64,
    #[arg(long, default_value_t = 0.01)]
    pub pm: f64,
    #[arg(long, default_value_t = 2)]
    pub tournament_size: usize,
    #[arg(long, default_value_t = 1.5)]
    pub rank_pressure: f64,
    #[arg(long, default_value_t = 0.5)]
    pub steady_state_fraction: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma_floor: f64,
    #[arg(long, default_value_t = 10.0)]
    pub boltzmann_t0: f64,
    #[arg(long, default_value_t = 0.95)]
    pub boltzmann_decay: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Replay a previously written manifest; other flags except --out are ignored.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Named paths to compare, one per line: `NAME: n1 n2 ... nk`.
    #[arg(long)]
    pub paths: Option<PathBuf>,
    /// Compare against the exhaustive optimum (small topologies only).
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',', default_value = "100,200,1000")]
    pub checkpoints: Vec<u32>,
    #[arg(long, default_value_t = 0.1)]
    pub sigma_share: f64,
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Generations of the accompanying NSGA run.
    #[arg(long, default_value_t = 200)]
    pub nsga_gens: u32,
    #[arg(long, default_value_t = 0.1)]
    pub sigma_share: f64,
    /// Worker threads for the weight samples.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Check every winner against the enumerated path set.
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub topology: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub source: u32,
    #[arg(long)]
    pub dest: Option<u32>,
    #[arg(long, value_enum, default_value = "max-node")]
    pub bandwidth_rule: RuleArg,
    #[arg(long, value_parser = parse_weights, default_value = "0.5,0.15,0.35")]
    pub weights: Weights,
    #[arg(long, value_parser = parse_constraints, default_value = "50,1,10")]
    pub constraints: (f64, f64, u32),
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub guard: usize,
    /// Also write `oracle.json` into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// --- manifest ------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologySource {
    File {
        path: String,
        sha256: String,
    },
    Generated {
        params: TopologyParams,
        requested_seed: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPath {
    pub name: String,
    pub path: Path,
}

/// Fully resolved configuration of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub topology: TopologySource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<RouteQuery>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nsga: Option<NsgaParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require_route: Option<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named_paths: Option<Vec<NamedPath>>,
    #[serde(default)]
    pub oracle_check: bool,
    pub notes: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, seed: u64, topology: TopologySource) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            topology,
            query: None,
            ga: None,
            nsga: None,
            checkpoints: None,
            samples: None,
            require_route: None,
            named_paths: None,
            oracle_check: false,
            notes: Vec::new(),
        }
    }
}

fn read_manifest(path: &FsPath, command: &str) -> CliResult<RunManifest> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::new(EXIT_PARAMETER, format!("cannot read manifest {}: {e}", path.display())))?;
    let m: RunManifest = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::new(EXIT_PARAMETER, format!("bad manifest {}: {e}", path.display())))?;
    if m.command != command {
        return Err(CliError::new(
            EXIT_PARAMETER,
            format!("manifest is for `{}`, not `{command}`", m.command),
        ));
    }
    Ok(m)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_topology_file(path: &FsPath) -> CliResult<(Topology, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::new(EXIT_TOPOLOGY, format!("cannot read topology {}: {e}", path.display())))?;
    let t = load_topology(&bytes).map_err(|e| CliError::new(EXIT_TOPOLOGY, format!("{}: {e}", path.display())))?;
    Ok((t, sha256_hex(&bytes)))
}

/// Generates with `seed`, `seed+1`, ... until `route` is connected.
fn generate_connected(params: &TopologyParams, seed: u64, route: Option<(u32, u32)>) -> CliResult<(Topology, u64)> {
    params.validate()?;
    if let Some((s, d)) = route {
        let n = params.node_count as u32;
        if s == d || s < 1 || d < 1 || s > n || d > n {
            return Err(CliError::new(
                EXIT_PARAMETER,
                format!("invalid route {s},{d} for {n} nodes"),
            ));
        }
    }
    for attempt in 0..MAX_CONNECT_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        let t = Topology::generate(params, s)?;
        match route {
            None => return Ok((t, s)),
            Some((a, b)) if t.is_connected(NodeId(a), NodeId(b)) => return Ok((t, s)),
            Some((a, b)) => {
                eprintln!(
                    "seed {s}: nodes {a} and {b} are disconnected, retrying with seed {}",
                    s.wrapping_add(1)
                );
            }
        }
    }
    Err(CliError::new(
        EXIT_NO_ROUTE,
        format!("no connected topology after {MAX_CONNECT_ATTEMPTS} attempts from seed {seed}"),
    ))
}

fn resolve_topology(source: &TopologySource, route: Option<(u32, u32)>) -> CliResult<(Topology, TopologySource)> {
    match source {
        TopologySource::File { path, sha256 } => {
            let (t, hash) = read_topology_file(FsPath::new(path))?;
            if !sha256.is_empty() && *sha256 != hash {
                return Err(CliError::new(
                    EXIT_TOPOLOGY,
                    format!("{path}: content hash differs from manifest"),
                ));
            }
            Ok((
                t,
                TopologySource::File {
                    path: path.clone(),
                    sha256: hash,
                },
            ))
        }
        TopologySource::Generated {
            params, requested_seed, ..
        } => {
            let (t, seed) = generate_connected(params, *requested_seed, route)?;
            Ok((
                t,
                TopologySource::Generated {
                    params: *params,
                    requested_seed: *requested_seed,
                    seed,
                },
            ))
        }
    }
}

fn query_for(t: &Topology, source: u32, dest: Option<u32>) -> CliResult<RouteQuery> {
    let d = dest.unwrap_or(t.node_count() as u32);
    Ok(RouteQuery::new(t, NodeId(source), NodeId(d))?)
}

impl CommonArgs {
    fn ga_config(&self, seed: u64) -> CliResult<GaConfig> {
        let (d, b, h) = self.constraints;
        let cfg = GaConfig {
            population_size: self.pop,
            generations: self.gens,
            crossover_prob: self.pc,
            mutation_prob: self.pm,
            weights: self.weights,
            constraints: Constraints::new(d, b, h)?,
            bandwidth_rule: self.bandwidth_rule.into(),
            seed,
            selection_params: SelectionParams {
                tournament_size: self.tournament_size,
                rank_pressure: self.rank_pressure,
                steady_state_fraction: self.steady_state_fraction,
                sigma_floor: self.sigma_floor,
                boltzmann_t0: self.boltzmann_t0,
                boltzmann_decay: self.boltzmann_decay,
            },
            ..GaConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Topology source plus the resolved topology and query.
    fn setup(&self, command: &str) -> CliResult<(RunManifest, Topology, RouteQuery)> {
        let seed = self.seed.expect("clap enforces --seed");
        let source = match &self.topology {
            Some(p) => TopologySource::File {
                path: p.display().to_string(),
                sha256: String::new(),
            },
            None => TopologySource::Generated {
                params: self.topo.params(),
                requested_seed: self.topology_seed.unwrap_or(seed),
                seed: 0,
            },
        };
        let route = match &source {
            TopologySource::Generated { params, .. } => {
                Some((self.source, self.dest.unwrap_or(params.node_count as u32)))
            }
            TopologySource::File { .. } => None,
        };
        let (t, source) = resolve_topology(&source, route)?;
        let q = query_for(&t, self.source, self.dest)?;
        let mut m = RunManifest::new(command, seed, source);
        m.query = Some(q);
        m.ga = Some(self.ga_config(seed)?);
        if let Some(r) = route {
            m.require_route = Some(r);
        }
        Ok((m, t, q))
    }
}

fn replay_setup(m: &RunManifest) -> CliResult<(Topology, RouteQuery, GaConfig)> {
    let (t, _) = resolve_topology(&m.topology, m.require_route)?;
    let q = m
        .query
        .ok_or_else(|| CliError::new(EXIT_PARAMETER, "manifest lacks a query"))?;
    let q = RouteQuery::new(&t, q.source, q.destination)?;
    let ga =
        m.ga.ok_or_else(|| CliError::new(EXIT_PARAMETER, "manifest lacks a GA configuration"))?;
    ga.validate()?;
    Ok((t, q, ga))
}

// --- commands ------------------------------------------------------------

pub fn cmd_gen(args: &GenArgs) -> CliResult<Bundle> {
    let (params, requested, route) = match &args.manifest {
        Some(p) => {
            let m = read_manifest(p, "gen")?;
            let TopologySource::Generated {
                params, requested_seed, ..
            } = m.topology
            else {
                return Err(CliError::new(
                    EXIT_PARAMETER,
                    "gen manifest must describe a generated topology",
                ));
            };
            (params, requested_seed, m.require_route)
        }
        None => (
            args.topo.params(),
            args.seed.expect("clap enforces --seed"),
            args.require_route,
        ),
    };
    let (t, seed) = generate_connected(&params, requested, route)?;
    let mut m = RunManifest::new(
        "gen",
        requested,
        TopologySource::Generated {
            params,
            requested_seed: requested,
            seed,
        },
    );
    m.require_route = route;
    let mut b = Bundle::new();
    b.add("topology.json", save_topology(&t));
    b.add_json("manifest.json", &m);
    Ok(b)
}

fn parse_named_paths(text: &str) -> CliResult<Vec<NamedPath>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let name = tokens.next().unwrap().trim_end_matches(':').to_string();
        let ids: Result<Vec<u32>, _> = tokens.map(str::parse::<u32>).collect();
        let ids = ids.map_err(|_| CliError::new(EXIT_PARAMETER, format!("paths line {}: bad node id", lineno + 1)))?;
        if ids.is_empty() {
            return Err(CliError::new(
                EXIT_PARAMETER,
                format!("paths line {}: no nodes", lineno + 1),
            ));
        }
        out.push(NamedPath {
            name,
            path: Path::from_ids(&ids),
        });
    }
    Ok(out)
}

pub fn cmd_run(args: &RunArgs) -> CliResult<Bundle> {
    let (m, t, q, cfg) = match &args.common.manifest {
        Some(p) => {
            let m = read_manifest(p, "run")?;
            let (t, q, cfg) = replay_setup(&m)?;
            (m, t, q, cfg)
        }
        None => {
            let (mut m, t, q) = args.common.setup("run")?;
            if let Some(p) = &args.paths {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::new(EXIT_PARAMETER, format!("cannot read {}: {e}", p.display())))?;
                m.named_paths = Some(parse_named_paths(&text)?);
            }
            m.oracle_check = args.oracle_check;
            m.notes
                .push("normalized_cost = population_best_cost / initial_best_cost".into());
            let cfg = m.ga.unwrap();
            (m, t, q, cfg)
        }
    };

    let result = evolve(&t, &q, &cfg)?;
    let mut best = report::best_json(&result.best, &cfg.constraints);
    best["source"] = json!(q.source);
    best["destination"] = json!(q.destination);
    best["initial_best_cost"] = json!(result.initial_best_cost);
    if m.oracle_check {
        let exact = exact_weighted_optimum(&t, &q, &cfg.weights, &cfg.constraints, cfg.bandwidth_rule)?;
        best["oracle"] = match exact {
            Some((p, c)) => json!({
                "path": p,
                "cost": c,
                "match": (c - result.best.cost).abs() <= 1e-9 * c.abs().max(1.0),
            }),
            None => json!({ "path": null, "cost": null, "match": !result.best.is_feasible(&cfg.constraints) }),
        };
    }

    let mut b = Bundle::new();
    b.add_json("manifest.json", &m);
    b.add("topology.json", save_topology(&t));
    b.add_json("best.json", &best);
    b.add("trace.csv", report::trace_csv(&result));
    b.add("trace.jsonl", crate::genetic::trace_to_jsonl(&result.trace));
    b.add("methods.csv", report::methods_csv(&result.trace));
    if let Some(named) = &m.named_paths {
        let model = cfg.cost_model();
        let rows: Vec<NamedPathRow> = named
            .iter()
            .map(|n| NamedPathRow {
                name: n.name.clone(),
                path: n.path.clone(),
                evaluated: if t.validate_path(&q, &n.path) {
                    model.evaluate(&t, n.path.clone()).ok()
                } else {
                    None
                },
            })
            .collect();
        b.add("paths.csv", report::paths_csv(&rows));
    }
    Ok(b)
}

fn front_diff(got: &[ObjectiveVector], exact: &[ObjectiveVector]) -> serde_json::Value {
    let missing: Vec<&ObjectiveVector> = exact.iter().filter(|v| !got.contains(v)).collect();
    let extra: Vec<&ObjectiveVector> = got.iter().filter(|v| !exact.contains(v)).collect();
    json!({
        "equal": missing.is_empty() && extra.is_empty(),
        "exact_front_size": exact.len(),
        "archive_front_size": got.len(),
        "missing": missing,
        "extra": extra,
    })
}

pub fn cmd_pareto(args: &ParetoArgs) -> CliResult<Bundle> {
    let (m, t, q, cfg, params, checkpoints) = match &args.common.manifest {
        Some(p) => {
            let m = read_manifest(p, "pareto")?;
            let (t, q, cfg) = replay_setup(&m)?;
            let params = m
                .nsga
                .ok_or_else(|| CliError::new(EXIT_PARAMETER, "manifest lacks NSGA parameters"))?;
            let cps = m.checkpoints.clone().unwrap_or_default();
            (m, t, q, cfg, params, cps)
        }
        None => {
            let (mut m, t, q) = args.common.setup("pareto")?;
            let mut cps = args.checkpoints.clone();
            cps.sort_unstable();
            cps.dedup();
            if cps.is_empty() {
                return Err(CliError::new(EXIT_PARAMETER, "at least one checkpoint is required"));
            }
            let params = NsgaParams {
                sigma_share: args.sigma_share,
                population_size: args.common.pop,
                generations: *cps.last().unwrap(),
            };
            m.nsga = Some(params);
            m.checkpoints = Some(cps.clone());
            m.oracle_check = args.oracle_check;
            let cfg = m.ga.unwrap();
            (m, t, q, cfg, params, cps)
        }
    };

    let r = nsga_evolve(&t, &q, &cfg, &params, &checkpoints)?;
    let reference = default_reference(&cfg.constraints);
    let mut b = Bundle::new();
    b.add_json("manifest.json", &m);
    b.add("topology.json", save_topology(&t));
    for snap in &r.snapshots {
        b.add_json(
            format!("fronts/front_gen{:05}.json", snap.generation),
            &report::front_json(snap, &reference),
        );
    }
    b.add("hypervolume.csv", report::hypervolume_csv(&r.snapshots, &reference));
    if m.oracle_check {
        let exact = exact_pareto_front(&t, &q, &cfg.constraints, cfg.bandwidth_rule)?;
        b.add_json("oracle_diff.json", &front_diff(&r.archive.front(), &exact.front()));
    }
    Ok(b)
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Bundle> {
    let (m, t, q, cfg, params, samples) = match &args.common.manifest {
        Some(p) => {
            let m = read_manifest(p, "sweep")?;
            let (t, q, cfg) = replay_setup(&m)?;
            let params = m
                .nsga
                .ok_or_else(|| CliError::new(EXIT_PARAMETER, "manifest lacks NSGA parameters"))?;
            let samples = m
                .samples
                .ok_or_else(|| CliError::new(EXIT_PARAMETER, "manifest lacks sample count"))?;
            (m, t, q, cfg, params, samples)
        }
        None => {
            if args.samples == 0 {
                return Err(CliError::new(EXIT_PARAMETER, "--samples must be >= 1"));
            }
            let (mut m, t, q) = args.common.setup("sweep")?;
            let params = NsgaParams {
                sigma_share: args.sigma_share,
                population_size: args.common.pop,
                generations: args.nsga_gens,
            };
            m.nsga = Some(params);
            m.samples = Some(args.samples);
            m.oracle_check = args.oracle_check;
            let cfg = m.ga.unwrap();
            (m, t, q, cfg, params, args.samples)
        }
    };

    let points = weighted_sum_sweep(&t, &q, &cfg, samples, args.jobs.max(1))?;
    let nsga = nsga_evolve(&t, &q, &cfg, &params, &[])?;
    let mut b = Bundle::new();
    b.add_json("manifest.json", &m);
    b.add("topology.json", save_topology(&t));
    b.add("sweep.csv", report::sweep_csv(&points, &nsga.archive.sorted_entries()));
    if m.oracle_check {
        let exact = exact_pareto_front(&t, &q, &cfg.constraints, cfg.bandwidth_rule)?;
        let mut rows = Vec::new();
        for p in &points {
            let dominated = exact
                .entries()
                .iter()
                .any(|e| dominates(&e.objectives, &p.objectives).unwrap_or(false));
            rows.push(json!({
                "sample": p.sample,
                "all_weights_positive": p.weights.all_positive(),
                "non_dominated": !dominated,
            }));
        }
        b.add_json("sweep_check.json", &rows);
    }
    Ok(b)
}

/// Returns the bundle (possibly empty) and a human-readable summary.
pub fn cmd_oracle(args: &OracleArgs) -> CliResult<(Bundle, String)> {
    let (t, _) = read_topology_file(&args.topology)?;
    let q = query_for(&t, args.source, args.dest)?;
    let rule: BandwidthRule = args.bandwidth_rule.into();
    let (d, bmin, h) = args.constraints;
    let c = Constraints::new(d, bmin, h)?;
    let paths = enumerate_paths(&t, &q, args.guard)?;
    let optimum = exact_weighted_optimum(&t, &q, &args.weights, &c, rule)?;
    let front = exact_pareto_front(&t, &q, &c, rule)?;
    let dijkstra = match dijkstra_delay(&t, &q) {
        Ok((p, delay)) => json!({ "path": p, "delay_ms": delay }),
        Err(_) => serde_json::Value::Null,
    };
    let listed: Vec<serde_json::Value> = paths
        .iter()
        .map(|p| {
            let qos = path_qos(&t, p, rule).expect("enumerated paths are valid");
            json!({ "path": p, "delay_ms": qos.delay, "bandwidth_mbps": qos.bandwidth, "hops": qos.hops })
        })
        .collect();
    let doc = json!({
        "source": q.source,
        "destination": q.destination,
        "path_count": paths.len(),
        "paths": listed,
        "weighted_optimum": optimum.as_ref().map(|(p, cost)| json!({ "path": p, "cost": cost })),
        "pareto_front": front.sorted_entries().iter().map(|e| json!({
            "path": e.path,
            "delay_ms": e.qos.delay,
            "bandwidth_mbps": e.qos.bandwidth,
            "hops": e.qos.hops,
        })).collect::<Vec<_>>(),
        "dijkstra_delay": dijkstra,
    });
    let mut summary = format!("{} simple paths from {} to {}\n", paths.len(), q.source, q.destination);
    for p in &paths {
        summary.push_str(&format!("  {p}\n"));
    }
    if let Some((p, cost)) = &optimum {
        summary.push_str(&format!("weighted optimum: {p} (cost {cost})\n"));
    } else {
        summary.push_str("weighted optimum: none feasible\n");
    }
    summary.push_str(&format!("pareto front: {} paths\n", front.len()));
    let mut b = Bundle::new();
    if args.out.is_some() {
        b.add_json("oracle.json", &doc);
    }
    Ok((b, summary))
}

fn write_bundle(b: &Bundle, dir: &FsPath) -> CliResult<()> {
    b.write_to(dir)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot write {}: {e}", dir.display())))
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Gen(a) => write_bundle(&cmd_gen(a)?, &a.out),
        Command::Run(a) => write_bundle(&cmd_run(a)?, &a.common.out),
        Command::Pareto(a) => write_bundle(&cmd_pareto(a)?, &a.common.out),
        Command::Sweep(a) => write_bundle(&cmd_sweep(a)?, &a.common.out),
        Command::Oracle(a) => {
            let (b, summary) = cmd_oracle(a)?;
            print!("{summary}");
            if let Some(dir) = &a.out {
                write_bundle(&b, dir)?;
            }
            Ok(())
        }
    }
}
