use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use powergraph::centralized::{g2mvc_53, g2mvc_hybrid_traced};
use powergraph::exact::{exact_mds_square, exact_mvc_square, ExactConfig};
use powergraph::generators::{connected_gnp, gnp, random_tree, random_weights, rng_from_seed};
use powergraph::lowerbound::{
    bits_from_hex, bits_to_hex, gen_mds_base, gen_mds_square_approx_unweighted, gen_mds_square_exact,
    gen_mvc_base, gen_mvc_square, gen_mwds_square_approx, gen_mwvc_square, Family, Gadget, LowerBoundInstance,
    Params, Partition, SetSystem, Thresholds,
};
use powergraph::mds::{g2mds_logd_traced, MdsConfig};
use powergraph::mvc::{g2mvc_cc_voting_traced, g2mvc_eps_traced, g2mvc_trivial, g2mwvc_eps_traced, RunConfig};
use powergraph::rational::{parse_rational, Rational};
use powergraph::sim::{Model, RoundStats};
use powergraph::{is_feasible, Graph, ProblemKind, Solution};

use crate::format::{read_graph, write_graph, ParseError};
use crate::report::{RunReport, SweepRow};

/// Environment variable that overrides the simulator's round cap.
pub const ROUND_CAP_ENV: &str = "POWERGRAPH_ROUND_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] powergraph::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Io(_) => "io",
            CliError::Config(_) => "config",
            CliError::Core(e) => e.kind(),
        }
    }

    /// Single-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "powergraph", version, about = "Vertex cover and dominating set on the square of a graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random graph or a lower-bound instance.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Run an algorithm and print a JSON report.
    Run(RunArgs),
    /// Check a vertex set against a graph.
    Verify(VerifyArgs),
    /// Run a fixed experiment matrix and print CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    Random(RandomArgs),
    Lb(LbArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RandomModel {
    Gnp,
    Tree,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long, value_enum, default_value = "gnp")]
    model: RandomModel,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attach integer weights drawn from 1..=MAX.
    #[arg(long, value_name = "MAX")]
    weights: Option<i64>,
    /// Resample G(n, p) until connected.
    #[arg(long)]
    connected: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LbArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(short = 'T', long = "t")]
    t: Option<usize>,
    #[arg(long, default_value_t = 8)]
    ell: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value = "0")]
    x: String,
    #[arg(long, default_value = "0")]
    y: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Graph file; the sidecar defaults to this path with `.json` appended.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    #[value(name = "g2mvc-eps")]
    G2mvcEps,
    #[value(name = "g2mwvc-eps")]
    G2mwvcEps,
    #[value(name = "g2mvc-trivial")]
    G2mvcTrivial,
    #[value(name = "g2mvc-cc")]
    G2mvcCc,
    #[value(name = "g2mvc-53")]
    G2mvc53,
    #[value(name = "g2mvc-hybrid")]
    G2mvcHybrid,
    #[value(name = "g2mds-logd")]
    G2mdsLogd,
    #[value(name = "exact-mvc2")]
    ExactMvc2,
    #[value(name = "exact-mds2")]
    ExactMds2,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::G2mvcEps => "g2mvc-eps",
            Algo::G2mwvcEps => "g2mwvc-eps",
            Algo::G2mvcTrivial => "g2mvc-trivial",
            Algo::G2mvcCc => "g2mvc-cc",
            Algo::G2mvc53 => "g2mvc-53",
            Algo::G2mvcHybrid => "g2mvc-hybrid",
            Algo::G2mdsLogd => "g2mds-logd",
            Algo::ExactMvc2 => "exact-mvc2",
            Algo::ExactMds2 => "exact-mds2",
        }
    }

    fn uses_eps(self) -> bool {
        matches!(self, Algo::G2mvcEps | Algo::G2mwvcEps | Algo::G2mvcCc)
    }

    fn weighted(self) -> bool {
        matches!(self, Algo::G2mwvcEps | Algo::ExactMvc2 | Algo::ExactMds2)
    }

    fn kind(self) -> ProblemKind {
        match self {
            Algo::G2mdsLogd | Algo::ExactMds2 => ProblemKind::Ds2,
            _ => ProblemKind::Vc2,
        }
    }

    /// Models the algorithm can run in; the first is the default.
    fn models(self) -> &'static [ModelArg] {
        match self {
            Algo::G2mvcEps | Algo::G2mwvcEps | Algo::G2mvcHybrid | Algo::G2mdsLogd => {
                &[ModelArg::Congest, ModelArg::Clique]
            }
            Algo::G2mvcCc => &[ModelArg::Clique],
            Algo::G2mvcTrivial | Algo::G2mvc53 | Algo::ExactMvc2 | Algo::ExactMds2 => &[ModelArg::Central],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Congest,
    Clique,
    Central,
}

impl ModelArg {
    fn name(self) -> &'static str {
        match self {
            ModelArg::Congest => "congest",
            ModelArg::Clique => "clique",
            ModelArg::Central => "central",
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "1/2")]
    eps: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Message size limit in words (default 8).
    #[arg(long)]
    bandwidth: Option<usize>,
    /// Also solve exactly and report the ratio.
    #[arg(long)]
    with_opt: bool,
    /// Record wall-clock time (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// Largest instance the exact solver accepts (non-isolated vertices).
    #[arg(long, default_value_t = 64)]
    exact_cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Whitespace- or comma-separated vertex ids, or a run report.
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    kind: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Acceptance,
    Smoke,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Number of seeded instances (default 50 for acceptance, 4 for smoke).
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    timing: bool,
}

/// Parses `args` (program name first), runs the command and writes its
/// output to `out`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            write!(out, "{e}").map_err(io_err)?;
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Err(CliError::Usage(first.to_string()));
        }
    };
    match cli.command {
        Command::Gen { what: GenCommand::Random(a) } => gen_random(&a, out),
        Command::Gen { what: GenCommand::Lb(a) } => gen_lb(&a, out),
        Command::Run(a) => {
            let g = load_graph(&a.input)?;
            let opts = RunOptions {
                eps: parse_eps(&a.eps)?,
                seed: a.seed,
                model: a.model,
                bandwidth: a.bandwidth,
                with_opt: a.with_opt,
                timing: a.timing,
                exact_cap: a.exact_cap,
                round_cap: round_cap_from_env()?,
            };
            let report = run_algo(&g, a.algo, &opts)?;
            writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")).map_err(io_err)
        }
        Command::Verify(a) => verify(&a, out),
        Command::Sweep(a) => sweep(&a, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(read_graph(&read_file(path)?)?)
}

fn parse_eps(s: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| CliError::Config(e.to_string()))
}

fn round_cap_from_env() -> CliResult<Option<u64>> {
    match std::env::var(ROUND_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{ROUND_CAP_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn gen_random(a: &RandomArgs, out: &mut dyn Write) -> CliResult<()> {
    if !(0.0..=1.0).contains(&a.p) {
        return Err(CliError::Config(format!("p = {} outside [0, 1]", a.p)));
    }
    let mut rng = rng_from_seed(a.seed);
    let g = match a.model {
        RandomModel::Gnp if a.connected => {
            if a.n > 1 && a.p == 0.0 {
                return Err(CliError::Config("G(n, 0) is never connected".into()));
            }
            connected_gnp(a.n, a.p, a.seed)
        }
        RandomModel::Gnp => gnp(a.n, a.p, &mut rng),
        RandomModel::Tree => random_tree(a.n, &mut rng),
    };
    let g = match a.weights {
        Some(max) if max < 1 => return Err(CliError::Config("weight bound must be at least 1".into())),
        Some(max) => g.with_weights(random_weights(a.n, max, &mut rng)).expect("positive weights"),
        None => g,
    };
    emit(&write_graph(&g), a.out.as_deref(), out)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// Instance metadata written next to the graph file.
#[derive(Serialize)]
struct Sidecar<'a> {
    family: Family,
    params: &'a Params,
    x: String,
    y: String,
    problem: ProblemKind,
    partition: &'a Partition,
    cut: &'a [(usize, usize)],
    cut_cap: usize,
    thresholds: &'a Thresholds,
    gadgets: &'a [Gadget],
    x_edges: &'a [(usize, usize)],
    y_edges: &'a [(usize, usize)],
    labels: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    set_system: Option<&'a SetSystem>,
}

pub fn sidecar_json(inst: &LowerBoundInstance) -> String {
    let sidecar = Sidecar {
        family: inst.family,
        params: &inst.params,
        x: bits_to_hex(&inst.x),
        y: bits_to_hex(&inst.y),
        problem: inst.problem,
        partition: &inst.partition,
        cut: &inst.cut,
        cut_cap: inst.cut_cap,
        thresholds: &inst.thresholds,
        gadgets: &inst.gadgets,
        x_edges: &inst.x_edges,
        y_edges: &inst.y_edges,
        labels: &inst.labels,
        set_system: inst.set_system.as_ref(),
    };
    serde_json::to_string(&sidecar).expect("sidecar serializes") + "\n"
}

fn gen_lb(a: &LbArgs, out: &mut dyn Write) -> CliResult<()> {
    let family: Family = a.family.parse().map_err(CliError::Config)?;
    let inst = if family.uses_set_system() {
        let t = a.t.ok_or_else(|| CliError::Config(format!("{family} needs -T")))?;
        let (x, y) = (bits_from_hex(&a.x, t * t)?, bits_from_hex(&a.y, t * t)?);
        match family {
            Family::MwdsSqApprox => gen_mwds_square_approx(t, a.ell, a.r, &x, &y, a.seed)?,
            _ => gen_mds_square_approx_unweighted(t, a.ell, a.r, &x, &y, a.seed)?,
        }
    } else {
        let k = a.k.ok_or_else(|| CliError::Config(format!("{family} needs --k")))?;
        let len = k.checked_mul(k).ok_or_else(|| CliError::Config("k too large".into()))?;
        let (x, y) = (bits_from_hex(&a.x, len)?, bits_from_hex(&a.y, len)?);
        match family {
            Family::MvcBase => gen_mvc_base(k, &x, &y)?,
            Family::MvcSq => gen_mvc_square(k, &x, &y)?,
            Family::MwvcSq => gen_mwvc_square(k, &x, &y)?,
            Family::MdsBase => gen_mds_base(k, &x, &y)?,
            _ => gen_mds_square_exact(k, &x, &y)?,
        }
    };
    emit(&write_graph(&inst.graph), a.out.as_deref(), out)?;
    let sidecar = a.sidecar.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = sidecar {
        write_file(&path, &sidecar_json(&inst))?;
    }
    Ok(())
}

/// Settings for a single algorithm run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub eps: Rational,
    pub seed: u64,
    pub model: Option<ModelArg>,
    pub bandwidth: Option<usize>,
    pub with_opt: bool,
    pub timing: bool,
    pub exact_cap: usize,
    pub round_cap: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            eps: Rational::new(1, 2),
            seed: 0,
            model: None,
            bandwidth: None,
            with_opt: false,
            timing: false,
            exact_cap: 64,
            round_cap: None,
        }
    }
}

pub fn run_algo(g: &Graph, algo: Algo, opts: &RunOptions) -> CliResult<RunReport> {
    let model_arg = match opts.model {
        Some(m) if !algo.models().contains(&m) => {
            return Err(CliError::Config(format!("{} does not run in the {} model", algo.name(), m.name())));
        }
        Some(m) => m,
        None => algo.models()[0],
    };
    let mut model = match model_arg {
        ModelArg::Clique => Model::clique(),
        _ => Model::congest(),
    };
    if let Some(words) = opts.bandwidth {
        model = model.with_bandwidth(words);
    }
    let exact = ExactConfig::with_cap(opts.exact_cap);
    let cfg = RunConfig { model, seed: opts.seed, round_cap: opts.round_cap, exact };
    let input = if algo.weighted() { g.clone() } else { g.clone().without_weights() };
    let g = &input;
    let eps = opts.eps;

    let started = Instant::now();
    let (solution, stats): (Solution, RoundStats) = match algo {
        Algo::G2mvcEps => {
            let run = g2mvc_eps_traced(g, &eps, &cfg)?;
            (run.solution, run.stats)
        }
        Algo::G2mwvcEps => {
            let run = g2mwvc_eps_traced(g, &eps, &cfg)?;
            (run.solution, run.stats)
        }
        Algo::G2mvcTrivial => (g2mvc_trivial(g, 2)?, RoundStats::default()),
        Algo::G2mvcCc => {
            let (run, _) = g2mvc_cc_voting_traced(g, &eps, &cfg)?;
            (run.solution, run.stats)
        }
        Algo::G2mvc53 => (g2mvc_53(g).0, RoundStats::default()),
        Algo::G2mvcHybrid => {
            let run = g2mvc_hybrid_traced(g, &cfg)?;
            (run.solution, run.stats)
        }
        Algo::G2mdsLogd => {
            let mds_cfg = MdsConfig { model, seed: opts.seed, round_cap: opts.round_cap, ..MdsConfig::default() };
            let run = g2mds_logd_traced(g, &mds_cfg)?;
            (run.solution, run.stats)
        }
        Algo::ExactMvc2 => (exact_mvc_square(g, &exact)?, RoundStats::default()),
        Algo::ExactMds2 => (exact_mds_square(g, &exact)?, RoundStats::default()),
    };
    let wall_ms = opts.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
    let feasible = is_feasible(g, algo.kind(), &solution.members).map_err(powergraph::Error::from)?;
    if !feasible {
        return Err(CliError::Core(powergraph::Error::Contract(format!("{} returned an infeasible set", algo.name()))));
    }
    let mut report = RunReport {
        algo: algo.name().to_string(),
        model: model_arg.name().to_string(),
        n: g.n(),
        m: g.m(),
        eps: algo.uses_eps().then(|| eps.to_string()),
        seed: opts.seed,
        rounds: stats.rounds,
        messages: stats.messages,
        max_message_bits: stats.max_message_bits,
        violations: stats.violations,
        value: solution.value,
        value_exact: solution.value.to_string(),
        feasible,
        opt: None,
        ratio: None,
        wall_ms,
        members: solution.members,
    };
    if opts.with_opt {
        let opt = match algo.kind() {
            ProblemKind::Ds2 => exact_mds_square(g, &exact)?.value,
            _ => exact_mvc_square(g, &exact)?.value,
        };
        report.set_opt(opt);
    }
    Ok(report)
}

fn parse_members(text: &str) -> CliResult<Vec<usize>> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(ParseError { line: e.line(), message: e.to_string() }))?;
        let members = v
            .get("members")
            .and_then(|m| m.as_array())
            .ok_or_else(|| CliError::Parse(ParseError { line: 1, message: "report has no `members` array".into() }))?;
        return members
            .iter()
            .map(|m| {
                m.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| CliError::Parse(ParseError { line: 1, message: format!("bad vertex `{m}`") }))
            })
            .collect();
    }
    let mut members = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v = tok
                .parse()
                .map_err(|_| CliError::Parse(ParseError { line: idx + 1, message: format!("bad vertex `{tok}`") }))?;
            members.push(v);
        }
    }
    Ok(members)
}

#[derive(Serialize)]
struct VerifyReport {
    kind: ProblemKind,
    n: usize,
    size: usize,
    #[serde(serialize_with = "as_plain")]
    value: Rational,
    feasible: bool,
}

fn as_plain<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let g = load_graph(&a.input)?;
    let kind: ProblemKind = a.kind.parse().map_err(CliError::Config)?;
    let mut members = parse_members(&read_file(&a.solution)?)?;
    members.sort_unstable();
    members.dedup();
    let feasible = is_feasible(&g, kind, &members).map_err(powergraph::Error::from)?;
    let report = VerifyReport { kind, n: g.n(), size: members.len(), value: g.set_value(&members), feasible };
    writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes")).map_err(io_err)
}

/// One row of a sweep: instance key, graph, algorithm, options.
pub struct SweepItem {
    pub key: String,
    pub graph: Graph,
    pub algo: Algo,
    pub opts: RunOptions,
}

/// The acceptance matrix: seeded connected `G(n, p)` with `n ∈ [8, 16]`,
/// `p ∈ {0.2, 0.4}`; the ε-algorithms for `ε ∈ {1, 1/2, 1/3}` (weights in
/// `[1, 16]` for the weighted one), the 5/3 algorithm and the dominating
/// set algorithm, each with the exact optimum.
pub fn acceptance_items(seeds: usize) -> Vec<SweepItem> {
    let mut items = Vec::new();
    for s in 0..seeds as u64 {
        let n = 8 + (s % 9) as usize;
        let p = if s % 2 == 0 { 0.2 } else { 0.4 };
        let g = connected_gnp(n, p, s);
        let weights = random_weights(n, 16, &mut rng_from_seed(s ^ 0x5eed));
        let wg = g.clone().with_weights(weights).expect("positive weights");
        let key = format!("gnp-n{n}-p{p}-s{s}");
        let opts = |eps: Rational| RunOptions { eps, seed: s, with_opt: true, ..RunOptions::default() };
        for eps in [Rational::from_integer(1), Rational::new(1, 2), Rational::new(1, 3)] {
            items.push(SweepItem { key: key.clone(), graph: g.clone(), algo: Algo::G2mvcEps, opts: opts(eps) });
            items.push(SweepItem { key: key.clone(), graph: wg.clone(), algo: Algo::G2mwvcEps, opts: opts(eps) });
        }
        for algo in [Algo::G2mvc53, Algo::G2mdsLogd] {
            items.push(SweepItem { key: key.clone(), graph: g.clone(), algo, opts: opts(Rational::new(1, 2)) });
        }
    }
    items
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let items = match a.suite {
        Suite::Acceptance => acceptance_items(a.seeds.unwrap_or(50)),
        Suite::Smoke => acceptance_items(a.seeds.unwrap_or(4)),
    };
    let round_cap = round_cap_from_env()?;
    let mut writer = csv::Writer::from_writer(out);
    for item in &items {
        let opts = RunOptions { timing: a.timing, round_cap, ..item.opts.clone() };
        let report = run_algo(&item.graph, item.algo, &opts)?;
        writer.serialize(SweepRow::new(&item.key, &report)).map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.flush().map_err(io_err)
}
