//! Reproducible experiment runs behind the `entrocone` binary.
//!
//! Every run computes its results in memory first and only then writes the
//! output directory: `config.json` (replayable with `replay`),
//! `manifest.json`, `summary.json` and the data files. Failed runs write
//! nothing.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::agent::{self, ActionSpace, AgentConfig, Outcome, Target};
use crate::ensemble::{self, GapPolicy, Violator};
use crate::entropy::{entropy_vector, single_qubit_parties, spectrum_stats, EntropyVector};
use crate::error::{Error, Result};
use crate::hypercone::{edges_5, hypergraph_5, realize_5qubit, regions_5};
use crate::inequal::{ingleton_instances, min_gap, InequalityInstance, VIOLATION_THRESHOLD};
use crate::magic::magic_witness;
use crate::optimize::{
    self, track_resources, vectorize, Cost, Method, OptRun, OptimizerConfig, Scope, StopReason,
};
use crate::qsim::{named, Circuit, GateKind, PureState};
use crate::seed;

/// Formats with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..12).contains(&e) {
        let s = format!("{:.*}", (11 - e).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.11e}", x)
    }
}

/// CSV text from a header and rows.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Parser, Debug)]
#[command(name = "entrocone", version, about = "Entropy-inequality violation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Master seed.
    #[arg(long, global = true, env = seed::SEED_ENV)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Q-learning search for a gate sequence violating an inequality.
    Violate(ViolateArgs),
    /// Per-gate gap and resource trajectory of a circuit.
    Track(TrackArgs),
    /// CMA-ES / COBYLA restarts minimizing the Ingleton gap.
    Optimize(OptimizeArgs),
    /// Counts (and optionally dumps) Ingleton instances.
    Instances(InstancesArgs),
    /// Gap distribution of Haar-random states.
    HaarScan(HaarScanArgs),
    /// Stability radius of a converged violator.
    Stability(StabilityArgs),
    /// Distances between independently converged violators.
    Distances(DistancesArgs),
    /// Entropy/capacity correlations over maximal violators.
    Correlate(CorrelateArgs),
    /// Hypergraph realization of a five-qubit entropy vector.
    HypergraphVerify(HypergraphArgs),
    /// Per-gate entropy, capacity, non-flatness and witness table.
    Resources(ResourcesArgs),
    /// Re-runs a written config.json.
    #[serde(skip)]
    Replay { config: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Violate(_) => "violate",
            Command::Track(_) => "track",
            Command::Optimize(_) => "optimize",
            Command::Instances(_) => "instances",
            Command::HaarScan(_) => "haar-scan",
            Command::Stability(_) => "stability",
            Command::Distances(_) => "distances",
            Command::Correlate(_) => "correlate",
            Command::HypergraphVerify(_) => "hypergraph-verify",
            Command::Resources(_) => "resources",
            Command::Replay { .. } => "replay",
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ViolateArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Comma-separated gate kinds.
    #[arg(long, default_value = "H,CNOT")]
    pub gates: String,
    /// mmi, mmi:A,B,C, ingleton, ingleton:A,B,C,D (qubit masks) or a JSON file.
    #[arg(long, default_value = "mmi")]
    pub target: String,
    #[arg(long, default_value_t = 0.8)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 5000)]
    pub episodes: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Use the bare inequality difference as reward.
    #[arg(long)]
    pub no_shaping: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct TrackArgs {
    /// Circuit file, or @psi-abcdr / @ghz:N.
    #[arg(long)]
    pub circuit: String,
    /// Initial state JSON; |0…0⟩ when absent.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// Qubit masks to track.
    #[arg(long, value_delimiter = ',')]
    pub subsystems: Vec<u64>,
    #[arg(long, default_value = "ingleton")]
    pub target: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct ResourcesArgs {
    /// Circuit file, or @psi-abcdr / @ghz:N.
    #[arg(long)]
    pub circuit: String,
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// Qubit masks; every nonempty proper subset when absent.
    #[arg(long, value_delimiter = ',')]
    pub subsystems: Vec<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    CmaEs,
    Cobyla,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::CmaEs => vec![Method::CmaEs],
            MethodArg::Cobyla => vec![Method::Cobyla],
            MethodArg::Both => vec![Method::CmaEs, Method::Cobyla],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeArg {
    Full,
    Single,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Full => Scope::FullSet,
            ScopeArg::Single => Scope::SingleInstance,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    Canonical,
    MinOverForms,
}

impl From<PolicyArg> for GapPolicy {
    fn from(p: PolicyArg) -> GapPolicy {
        match p {
            PolicyArg::Canonical => GapPolicy::Canonical,
            PolicyArg::MinOverForms => GapPolicy::MinOverForms,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Stop a restart once its gap is below −value.
    #[arg(long)]
    pub target_violation: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = ScopeArg::Full)]
    pub scope: ScopeArg,
    #[arg(long, default_value_t = 100_000)]
    pub max_evals: usize,
    /// Also write the resource table along the best run.
    #[arg(long)]
    pub track: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct InstancesArgs {
    #[arg(long)]
    pub n: usize,
    /// Count without identifying complementary subsets.
    #[arg(long)]
    pub no_purity: bool,
    /// Write instances.json.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct HaarScanArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Canonical)]
    pub policy: PolicyArg,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct StabilityArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Violator state JSON; found by a fresh run when absent.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Cobyla)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = ScopeArg::Single)]
    pub scope: ScopeArg,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2"
    )]
    pub norms: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct DistancesArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::CmaEs)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = ScopeArg::Full)]
    pub scope: ScopeArg,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CorrelateArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Restarts to run; the ensemble keeps those near the best cost.
    #[arg(long, default_value_t = 100)]
    pub ensemble: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::CmaEs)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = ScopeArg::Single)]
    pub scope: ScopeArg,
    /// Runs within this of the best cost count as maximal.
    #[arg(long, default_value_t = 0.01)]
    pub window: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct HypergraphArgs {
    /// Five-qubit state JSON.
    #[arg(long, conflicts_with = "entropy")]
    pub state: Option<PathBuf>,
    /// Entropy vector JSON map over five parties.
    #[arg(long)]
    pub entropy: Option<PathBuf>,
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        if let Command::Replay { config } = &cli.command {
            let mut cfg: ExperimentConfig = serde_json::from_str(&read(config)?)?;
            cfg.out_dir = cli.out;
            cfg.jobs = cli.jobs.or(cfg.jobs);
            return Ok(cfg);
        }
        Ok(ExperimentConfig {
            command: cli.command,
            seed: seed::resolve(cli.seed),
            jobs: cli.jobs,
            out_dir: cli.out,
        })
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    BudgetExhausted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::BudgetExhausted => 2,
        }
    }
}

/// In-memory result of a run.
#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub summary: Value,
    /// (file name, contents).
    pub files: Vec<(String, String)>,
    /// Short human-readable result for stdout.
    pub headline: String,
}

impl Report {
    fn new(summary: Value, headline: String) -> Self {
        Report {
            status: Status::Success,
            summary,
            files: Vec::new(),
            headline,
        }
    }

    fn file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.to_string(), contents));
        self
    }
}

/// Runs the configured experiment without touching the filesystem output.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report> {
    match &cfg.command {
        Command::Violate(a) => violate(a, cfg.seed),
        Command::Track(a) => track(a),
        Command::Optimize(a) => optimize(a, cfg.seed, cfg.jobs),
        Command::Instances(a) => instances(a),
        Command::HaarScan(a) => haar_scan(a, cfg.seed, cfg.jobs),
        Command::Stability(a) => stability(a, cfg.seed, cfg.jobs),
        Command::Distances(a) => distances(a, cfg.seed, cfg.jobs),
        Command::Correlate(a) => correlate(a, cfg.seed, cfg.jobs),
        Command::HypergraphVerify(a) => hypergraph_verify(a),
        Command::Resources(a) => resources(a),
        Command::Replay { .. } => Err(Error::InvalidConfig("nested replay".into())),
    }
}

/// Writes config, manifest, summary and data files into `cfg.out_dir`.
pub fn write_outputs(cfg: &ExperimentConfig, report: &Report, wall_time: f64) -> Result<()> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64() - wall_time)
        .unwrap_or(0.0);
    let manifest = json!({
        "crate": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name(),
        "seed": cfg.seed,
        "jobs": cfg.jobs,
        "started_unix": started,
        "wall_time_s": wall_time,
        "status": report.status,
        "files": report.files.iter().map(|(n, _)| n).collect::<Vec<_>>(),
    });
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&report.summary)?)?;
    for (name, contents) in &report.files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

/// Full entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let cfg = match ExperimentConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let t0 = Instant::now();
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Err(e) = write_outputs(&cfg, &report, t0.elapsed().as_secs_f64()) {
        eprintln!("error: {e}");
        return 1;
    }
    println!("{}", report.headline);
    report.status.exit_code()
}

// ---------------------------------------------------------------------------
// Input helpers

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn read_state(path: &Path) -> Result<PureState> {
    PureState::from_json(&read(path)?)
}

fn parse_masks(list: &str) -> Result<Vec<u64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad qubit mask {s:?}")))
        })
        .collect()
}

/// Instances over the single-qubit parties of an `n`-qubit register.
pub fn parse_target(spec: &str, n: usize) -> Result<Vec<InequalityInstance>> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    match (name, args) {
        ("mmi", "") => Ok(vec![InequalityInstance::mmi(n, 1, 2, 4)?]),
        ("mmi", a) => match parse_masks(a)?[..] {
            [x, y, z] => Ok(vec![InequalityInstance::mmi(n, x, y, z)?]),
            _ => Err(Error::InvalidConfig("mmi takes three masks".into())),
        },
        ("ingleton", "") => Ok(ingleton_instances(n, true)?.instances),
        ("ingleton", a) => match parse_masks(a)?[..] {
            [w, x, y, z] => Ok(vec![InequalityInstance::ingleton(n, [w, x, y, z])?]),
            _ => Err(Error::InvalidConfig("ingleton takes four masks".into())),
        },
        _ => {
            let text = read(Path::new(spec))?;
            let inst: Vec<InequalityInstance> = match serde_json::from_str(&text) {
                Ok(v) => v,
                Err(_) => vec![serde_json::from_str(&text)?],
            };
            if let Some(i) = inst.iter().find(|i| i.n_parties != n) {
                return Err(Error::DimensionMismatch(i.n_parties, n));
            }
            Ok(inst)
        }
    }
}

/// A circuit file or one of the built-in circuits.
pub fn load_circuit(spec: &str) -> Result<Circuit> {
    match spec {
        "@psi-abcdr" => Ok(named::psi_abcdr_circuit()),
        s if s.starts_with("@ghz:") => {
            let n = s[5..]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad circuit name {s:?}")))?;
            Ok(named::ghz_circuit(n))
        }
        s if s.starts_with('@') => Err(Error::InvalidConfig(format!("unknown circuit {s:?}"))),
        path => Circuit::parse(&read(Path::new(path))?, None),
    }
}

/// The starting state, with the circuit widened to its register.
fn initial_state(initial: &Option<PathBuf>, circuit: Circuit) -> Result<(PureState, Circuit)> {
    match initial {
        Some(p) => {
            let s = read_state(p)?;
            if s.n_qubits() < circuit.n_qubits() {
                return Err(Error::DimensionMismatch(s.n_qubits(), circuit.n_qubits()));
            }
            let wide = Circuit::from_gates(s.n_qubits(), circuit.gates().to_vec())?;
            Ok((s, wide))
        }
        None => Ok((PureState::zero(circuit.n_qubits()), circuit)),
    }
}

fn check_subsystems(masks: &[u64], n: usize) -> Result<()> {
    for &m in masks {
        if m == 0 || m >> n != 0 {
            return Err(Error::InvalidSubsystem { mask: m, n_qubits: n });
        }
    }
    Ok(())
}

/// The state before any gate and after each gate.
fn trajectory(state: &PureState, circuit: &Circuit) -> Result<Vec<PureState>> {
    let mut states = vec![state.clone()];
    state.run_circuit_with(circuit, |_, s| states.push(s.clone()))?;
    Ok(states)
}

fn state_json(state: &PureState, extra: Value) -> Result<String> {
    let mut v = serde_json::to_value(state.to_file())?;
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    Ok(serde_json::to_string_pretty(&v)?)
}

fn ev_json(ev: &EntropyVector) -> Value {
    json!(ev.to_json_map())
}

// ---------------------------------------------------------------------------
// Subcommands

fn violate(a: &ViolateArgs, seed: u64) -> Result<Report> {
    let kinds = a
        .gates
        .split(',')
        .map(|g| g.trim().parse::<GateKind>())
        .collect::<Result<Vec<_>>>()?;
    let space = ActionSpace::from_kinds(a.n, &kinds)?;
    let target = Target::new(single_qubit_parties(a.n), parse_target(&a.target, a.n)?)?;
    let cfg = AgentConfig {
        learning_rate: a.alpha,
        exploration: a.epsilon,
        discount: a.gamma,
        max_steps: a.steps,
        max_episodes: a.episodes,
        shaping: !a.no_shaping,
        seed,
        ..AgentConfig::default()
    };
    let initial = PureState::zero(a.n);
    let result = agent::train_to_violation(&initial, &space, &target, &cfg)?;
    match result.outcome {
        Outcome::Violated {
            circuit,
            state,
            gap,
            episode,
            log,
        } => {
            let ev = target.entropy_vector(&state)?;
            let rows: Vec<Vec<String>> = log
                .iter()
                .map(|r| {
                    vec![
                        (r.step + 1).to_string(),
                        space.gate(r.action).to_string(),
                        fmt_num(r.gap),
                        fmt_num(r.reward),
                    ]
                })
                .collect();
            let summary = json!({
                "violated": true,
                "episode": episode,
                "gates": circuit.len(),
                "gap": gap,
                "difference": -gap,
                "entropy_vector": ev_json(&ev),
                "q_states": result.table.n_states(),
            });
            Ok(Report::new(
                summary,
                format!("violation in episode {episode} after {} gates, difference {}", circuit.len(), fmt_num(-gap)),
            )
            .file("circuit.txt", circuit.to_string())
            .file("state.json", state_json(&state, json!({ "gap": gap }))?)
            .file("trajectory.csv", csv_text(&["gate_index", "gate", "gap", "reward"], &rows)?))
        }
        Outcome::BudgetExhausted { episodes, best_gap } => {
            let mut r = Report::new(
                json!({ "violated": false, "episodes": episodes, "best_gap": best_gap }),
                format!("no violation in {episodes} episodes; best gap {}", fmt_num(best_gap)),
            );
            r.status = Status::BudgetExhausted;
            Ok(r)
        }
    }
}

fn track(a: &TrackArgs) -> Result<Report> {
    let (state, circuit) = initial_state(&a.initial, load_circuit(&a.circuit)?)?;
    let n = state.n_qubits();
    check_subsystems(&a.subsystems, n)?;
    let instances = parse_target(&a.target, n)?;
    let parties = single_qubit_parties(n);

    let mut header: Vec<String> = ["gate_index", "gate", "gap", "difference", "violated"]
        .map(String::from)
        .to_vec();
    for m in &a.subsystems {
        for q in ["s_vn", "capacity", "nonflatness", "witness2"] {
            header.push(format!("{q}_{m}"));
        }
    }
    let mut rows = Vec::new();
    let mut first_violation = None;
    let states = trajectory(&state, &circuit)?;
    let mut last_ev = None;
    for (i, s) in states.iter().enumerate() {
        let ev = entropy_vector(s, &parties)?;
        let (_, gap) = min_gap(&instances, &ev)?;
        let violated = gap < -VIOLATION_THRESHOLD;
        if violated && first_violation.is_none() {
            first_violation = Some(i);
        }
        let gate = if i == 0 { String::new() } else { circuit.gates()[i - 1].to_string() };
        let mut row = vec![i.to_string(), gate, fmt_num(gap), fmt_num(-gap), violated.to_string()];
        for &m in &a.subsystems {
            let st = spectrum_stats(s, m)?;
            let w = magic_witness(&s.partial_trace(m)?, 2.0)?;
            row.extend([st.s_vn, st.capacity, st.nonflatness, w].map(fmt_num));
        }
        rows.push(row);
        last_ev = Some((gap, ev));
    }
    let (final_gap, ev) = last_ev.expect("trajectory has the initial state");
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Report::new(
        json!({
            "gates": circuit.len(),
            "first_violation": first_violation,
            "final_gap": final_gap,
            "final_difference": -final_gap,
            "final_entropy_vector": ev_json(&ev),
        }),
        format!(
            "{} gates; final difference {}; first violation at {}",
            circuit.len(),
            fmt_num(-final_gap),
            first_violation.map_or("none".into(), |i| i.to_string())
        ),
    )
    .file("trajectory.csv", csv_text(&header, &rows)?))
}

fn resources(a: &ResourcesArgs) -> Result<Report> {
    let (state, circuit) = initial_state(&a.initial, load_circuit(&a.circuit)?)?;
    let n = state.n_qubits();
    let masks: Vec<u64> = if a.subsystems.is_empty() {
        (1..(1u64 << n) - 1).collect()
    } else {
        a.subsystems.clone()
    };
    check_subsystems(&masks, n)?;
    let mut rows = Vec::new();
    for (i, s) in trajectory(&state, &circuit)?.iter().enumerate() {
        for &m in &masks {
            let st = spectrum_stats(s, m)?;
            let w = magic_witness(&s.partial_trace(m)?, 2.0)?;
            let mut row = vec![i.to_string(), m.to_string()];
            row.extend([st.s_vn, st.capacity, st.nonflatness, w].map(fmt_num));
            rows.push(row);
        }
    }
    let header = ["gate_index", "subsystem_mask", "s_vn", "capacity", "nonflatness", "witness2"];
    Ok(Report::new(
        json!({ "gates": circuit.len(), "subsystems": masks }),
        format!("{} rows", rows.len()),
    )
    .file("resources.csv", csv_text(&header, &rows)?))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::CmaEs => "cma-es",
        Method::Cobyla => "cobyla",
    }
}

fn stop_name(s: StopReason) -> Value {
    serde_json::to_value(s).unwrap_or(Value::Null)
}

fn optimizer_config(method: Method, scope: ScopeArg, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        method,
        scope: scope.into(),
        seed,
        ..OptimizerConfig::default()
    }
}

/// Restarts per method; method k uses master seed `derive(seed, k)`.
fn campaign(
    n: usize,
    methods: &[Method],
    restarts: usize,
    base: &OptimizerConfig,
    seed: u64,
    jobs: Option<usize>,
) -> Result<(Cost, Vec<(Method, Vec<OptRun>)>)> {
    let cost = Cost::for_scope(n, base.scope)?;
    let mut out = Vec::new();
    for (k, &m) in methods.iter().enumerate() {
        let cfg = OptimizerConfig {
            method: m,
            seed: seed::derive(seed, k as u64),
            ..base.clone()
        };
        out.push((m, optimize::restarts(restarts, &cfg, &cost, jobs)?));
    }
    Ok((cost, out))
}

fn optimize(a: &OptimizeArgs, seed: u64, jobs: Option<usize>) -> Result<Report> {
    if a.restarts == 0 {
        return Err(Error::InvalidConfig("need at least one restart".into()));
    }
    let base = OptimizerConfig {
        max_evals: a.max_evals,
        target_violation: a.target_violation,
        ..optimizer_config(Method::CmaEs, a.scope, 0)
    };
    base.validate()?;
    let (cost, results) = campaign(a.n, &a.method.methods(), a.restarts, &base, seed, jobs)?;

    let mut run_rows = Vec::new();
    let mut trace_rows = Vec::new();
    let mut per_method = serde_json::Map::new();
    let mut best: Option<(Method, usize, &OptRun)> = None;
    let mut exhausted = 0;
    for (m, runs) in &results {
        let best_m = runs.iter().map(|r| r.final_cost).fold(f64::INFINITY, f64::min);
        let near = runs.iter().filter(|r| r.final_cost <= best_m + 0.01).count();
        for (i, r) in runs.iter().enumerate() {
            let (idx, _) = cost.evaluate_state(&r.state())?;
            run_rows.push(vec![
                method_name(*m).into(),
                i.to_string(),
                fmt_num(r.final_cost),
                r.evals.to_string(),
                stop_name(r.stop).as_str().unwrap_or("").to_string(),
                cost.instances()[idx].label.clone(),
            ]);
            for tp in &r.trace {
                trace_rows.push(vec![method_name(*m).into(), i.to_string(), tp.evals.to_string(), fmt_num(tp.cost)]);
            }
            if !r.converged() {
                exhausted += 1;
            }
            if best.is_none_or(|(_, _, b)| r.final_cost < b.final_cost) {
                best = Some((*m, i, r));
            }
        }
        per_method.insert(
            method_name(*m).into(),
            json!({
                "best_cost": best_m,
                "within_0_01": near as f64 / runs.len() as f64,
                "converged": runs.iter().filter(|r| r.converged()).count(),
            }),
        );
    }
    let (bm, bi, brun) = best.expect("at least one restart");
    let (bidx, _) = cost.evaluate_state(&brun.state())?;
    let instance = &cost.instances()[bidx];
    let mut report = Report::new(
        json!({
            "n": a.n,
            "scope": base.scope,
            "restarts": a.restarts,
            "best_cost": brun.final_cost,
            "best_method": method_name(bm),
            "best_restart": bi,
            "best_instance": instance.label,
            "methods": per_method,
            "budget_exhausted": exhausted,
        }),
        format!("best gap {} ({} restart {bi})", fmt_num(brun.final_cost), method_name(bm)),
    )
    .file(
        "runs.csv",
        csv_text(&["method", "restart", "final_cost", "evals", "stop", "instance"], &run_rows)?,
    )
    .file("trace.csv", csv_text(&["method", "restart", "evals", "cost"], &trace_rows)?)
    .file(
        "best_state.json",
        state_json(&brun.state(), json!({ "gap": brun.final_cost, "instance": instance.label }))?,
    );

    if a.track {
        let cfg = OptimizerConfig {
            record_iterates: true,
            method: bm,
            seed: brun_seed(seed, &results, bm, bi),
            ..base.clone()
        };
        let replay = optimize::minimize(&brun.x0, &cfg, &cost)?;
        let subs = ensemble::ingleton_subsystems();
        let table = track_resources(&replay, &cost, &subs)?;
        let mut rows = Vec::new();
        for r in &table.rows {
            for s in &r.subsystems {
                rows.push(vec![
                    r.iteration.to_string(),
                    r.evals.to_string(),
                    fmt_num(r.cost),
                    ensemble::role_label(s.role_mask),
                    s.qubits.to_string(),
                    fmt_num(s.s_vn),
                    fmt_num(s.capacity),
                    fmt_num(r.witness2),
                ]);
            }
        }
        report = report.file(
            "resources.csv",
            csv_text(
                &["iteration", "evals", "cost", "subsystem", "qubits", "s_vn", "capacity", "witness2_abcd"],
                &rows,
            )?,
        );
    }
    if exhausted == results.iter().map(|(_, r)| r.len()).sum::<usize>() {
        report.status = Status::BudgetExhausted;
    }
    Ok(report)
}

/// Optimizer seed used by restart `i` of method `m` in [`campaign`].
fn brun_seed(seed: u64, results: &[(Method, Vec<OptRun>)], m: Method, i: usize) -> u64 {
    let k = results.iter().position(|(mm, _)| *mm == m).unwrap_or(0);
    seed::derive(seed::derive(seed, k as u64), i as u64)
}

fn instances(a: &InstancesArgs) -> Result<Report> {
    let set = ingleton_instances(a.n, !a.no_purity)?;
    let mut r = Report::new(
        json!({ "n": a.n, "purity": set.purity_assumed, "count": set.len() }),
        set.len().to_string(),
    );
    if a.dump {
        r = r.file("instances.json", serde_json::to_string_pretty(&set.instances)?);
    }
    Ok(r)
}

fn haar_scan(a: &HaarScanArgs, seed: u64, jobs: Option<usize>) -> Result<Report> {
    let (h, gaps) = ensemble::haar_gap_scan(a.n, a.samples, a.policy.into(), seed, jobs)?;
    let rows: Vec<Vec<String>> = gaps.iter().enumerate().map(|(i, g)| vec![i.to_string(), fmt_num(*g)]).collect();
    let hist: Vec<Vec<String>> = h
        .edges
        .windows(2)
        .zip(&h.counts)
        .map(|(e, c)| vec![fmt_num(e[0]), fmt_num(e[1]), c.to_string()])
        .collect();
    Ok(Report::new(
        json!({
            "n": a.n,
            "samples": h.samples,
            "policy": h.policy,
            "mu": h.mean,
            "sigma": h.std,
            "kl": h.kl_to_normal,
            "violations": h.violations,
            "zero_z": h.zero_z,
        }),
        format!(
            "mu {} sigma {} kl {} violations {}",
            fmt_num(h.mean),
            fmt_num(h.std),
            fmt_num(h.kl_to_normal),
            h.violations
        ),
    )
    .file("gaps.csv", csv_text(&["sample", "gap"], &rows)?)
    .file("histogram.csv", csv_text(&["lo", "hi", "count"], &hist)?))
}

fn single_method(m: MethodArg) -> Result<Method> {
    match m {
        MethodArg::CmaEs => Ok(Method::CmaEs),
        MethodArg::Cobyla => Ok(Method::Cobyla),
        MethodArg::Both => Err(Error::InvalidConfig("choose one method".into())),
    }
}

fn stability(a: &StabilityArgs, seed: u64, jobs: Option<usize>) -> Result<Report> {
    let cfg = optimizer_config(single_method(a.method)?, a.scope, seed);
    cfg.validate()?;
    let cost = Cost::for_scope(a.n, cfg.scope)?;
    let x_star = match &a.state {
        Some(p) => {
            let s = read_state(p)?;
            optimize::minimize(&vectorize(&s), &cfg, &cost)?.x_star
        }
        None => {
            let ref_cfg = OptimizerConfig {
                seed: seed::derive(seed, 0),
                ..cfg.clone()
            };
            optimize::restarts(1, &ref_cfg, &cost, jobs)?.remove(0).x_star
        }
    };
    let reference_cost = cost.cost(&x_star)?;
    let scan_cfg = OptimizerConfig {
        seed: seed::derive(seed, 1),
        ..cfg
    };
    let est = ensemble::stability_scan(&x_star, &a.norms, a.trials, &scan_cfg, &cost, jobs)?;
    let curve: Vec<Vec<String>> = est
        .curve
        .iter()
        .map(|p| {
            vec![
                fmt_num(p.delta_norm),
                fmt_num(p.mean_fidelity),
                p.fidelities.len().to_string(),
                p.excluded.to_string(),
            ]
        })
        .collect();
    let fids: Vec<Vec<String>> = est
        .curve
        .iter()
        .flat_map(|p| p.fidelities.iter().enumerate().map(|(t, f)| vec![fmt_num(p.delta_norm), t.to_string(), fmt_num(*f)]))
        .collect();
    Ok(Report::new(
        json!({
            "reference_cost": reference_cost,
            "xi": est.xi,
            "xi_uncertainty": est.xi_uncertainty,
            "fidelity_bar": ensemble::FIDELITY_BAR,
            "trials": a.trials,
        }),
        format!(
            "xi {} ± {}",
            est.xi.map_or("none".into(), fmt_num),
            fmt_num(est.xi_uncertainty)
        ),
    )
    .file("curve.csv", csv_text(&["delta_norm", "mean_fidelity", "kept", "excluded"], &curve)?)
    .file("fidelities.csv", csv_text(&["delta_norm", "trial", "fidelity"], &fids)?)
    .file("reference_state.json", state_json(&optimize::devectorize(&x_star)?, json!({ "gap": reference_cost }))?))
}

fn distances(a: &DistancesArgs, seed: u64, jobs: Option<usize>) -> Result<Report> {
    let cfg = optimizer_config(single_method(a.method)?, a.scope, seed);
    let cost = Cost::for_scope(a.n, cfg.scope)?;
    let runs = optimize::restarts(2 * a.pairs, &cfg, &cost, jobs)?;
    let pairs: Vec<(OptRun, OptRun)> = runs
        .chunks(2)
        .filter(|c| c[0].converged() && c[1].converged())
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect();
    let d = ensemble::solution_distances(&pairs)?;
    let rows: Vec<Vec<String>> = d
        .iter()
        .enumerate()
        .map(|(i, r)| vec![i.to_string(), fmt_num(r.euclidean), fmt_num(r.trace)])
        .collect();
    let min_e = d.iter().map(|r| r.euclidean).fold(f64::INFINITY, f64::min);
    let min_t = d.iter().map(|r| r.trace).fold(f64::INFINITY, f64::min);
    Ok(Report::new(
        json!({
            "pairs": d.len(),
            "skipped": a.pairs - d.len(),
            "min_euclidean": min_e,
            "min_trace": min_t,
            "all_above_half": min_e > 0.5 && min_t > 0.5,
        }),
        format!("{} pairs; min D_E {} min D_T {}", d.len(), fmt_num(min_e), fmt_num(min_t)),
    )
    .file("distances.csv", csv_text(&["pair", "euclidean", "trace"], &rows)?))
}

fn correlate(a: &CorrelateArgs, seed: u64, jobs: Option<usize>) -> Result<Report> {
    let cfg = optimizer_config(single_method(a.method)?, a.scope, seed);
    let cost = Cost::for_scope(a.n, cfg.scope)?;
    let runs = optimize::restarts(a.ensemble, &cfg, &cost, jobs)?;
    let best = runs.iter().map(|r| r.final_cost).fold(f64::INFINITY, f64::min);
    let violators = runs
        .iter()
        .filter(|r| r.converged() && r.final_cost <= best + a.window)
        .map(|r| Violator::from_run(r, &cost))
        .collect::<Result<Vec<_>>>()?;
    let subs = ensemble::ingleton_subsystems();
    let corr = ensemble::resource_correlation(&violators, &subs)?;
    let mut rows = Vec::new();
    for (i, v) in violators.iter().enumerate() {
        for &rm in &subs {
            let st = spectrum_stats(&v.state, optimize::role_qubits(v.roles, rm))?;
            rows.push(vec![i.to_string(), ensemble::role_label(rm), fmt_num(st.s_vn), fmt_num(st.capacity)]);
        }
    }
    let crows: Vec<Vec<String>> = corr
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                fmt_num(c.mean_s_vn),
                fmt_num(c.mean_capacity),
                c.pearson.map_or("undefined".into(), fmt_num),
            ]
        })
        .collect();
    let headline = corr
        .iter()
        .map(|c| format!("{} {}", c.label, c.pearson.map_or("undefined".into(), fmt_num)))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Report::new(
        json!({
            "restarts": a.ensemble,
            "ensemble": violators.len(),
            "best_cost": best,
            "correlations": corr,
        }),
        headline,
    )
    .file("ensemble.csv", csv_text(&["state", "subsystem", "s_vn", "capacity"], &rows)?)
    .file("correlations.csv", csv_text(&["subsystem", "mean_s_vn", "mean_capacity", "pearson"], &crows)?))
}

fn hypergraph_verify(a: &HypergraphArgs) -> Result<Report> {
    let ev = match (&a.state, &a.entropy) {
        (Some(p), None) => {
            let s = read_state(p)?;
            if s.n_qubits() != 5 {
                return Err(Error::DimensionMismatch(s.n_qubits(), 5));
            }
            entropy_vector(&s, &single_qubit_parties(5))?
        }
        (None, Some(p)) => EntropyVector::from_json_map(5, &serde_json::from_str(&read(p)?)?)?,
        _ => return Err(Error::InvalidConfig("pass exactly one of --state or --entropy".into())),
    };
    let res = realize_5qubit(&ev)?;
    let graph = hypergraph_5(&res.weights);
    let mut min_cut_matches = 0;
    for r in regions_5() {
        let mc = graph.min_cut_entropy(r)?;
        if (mc.weight - ev.get(r)?).abs() < 1e-9 {
            min_cut_matches += 1;
        }
    }
    let rows: Vec<Vec<String>> = edges_5()
        .iter()
        .zip(&res.weights)
        .map(|(&e, &w)| vec![edge_label(e), e.to_string(), fmt_num(w)])
        .collect();
    Ok(Report::new(
        json!({
            "weights": res.weights,
            "residual": res.residual,
            "all_nonneg": res.all_nonneg,
            "closed_form_deviation": res.closed_form_deviation,
            "min_cut_matches": min_cut_matches,
        }),
        format!(
            "residual {} nonnegative {} weights [{}]",
            fmt_num(res.residual),
            res.all_nonneg,
            res.weights.iter().map(|w| fmt_num(*w)).collect::<Vec<_>>().join(", ")
        ),
    )
    .file("weights.csv", csv_text(&["edge", "mask", "weight"], &rows)?))
}

fn edge_label(mask: u64) -> String {
    (0..5)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| char::from(b'A' + i as u8))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.169925001), "-0.169925001");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn targets_parse() {
        assert_eq!(parse_target("mmi", 4).unwrap().len(), 1);
        assert_eq!(parse_target("ingleton", 4).unwrap().len(), 3);
        assert_eq!(parse_target("ingleton:1,2,4,8", 5).unwrap().len(), 1);
        assert!(parse_target("mmi:1,2", 4).is_err());
    }

    #[test]
    fn builtin_circuits() {
        assert_eq!(load_circuit("@ghz:3").unwrap().n_qubits(), 3);
        assert_eq!(load_circuit("@psi-abcdr").unwrap().n_qubits(), 6);
        assert!(load_circuit("@nope").is_err());
    }
}
