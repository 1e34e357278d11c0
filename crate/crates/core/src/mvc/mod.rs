//! Distributed `(1+ε)`-approximations for vertex cover on `G²`.
//!
//! Every algorithm has two phases. Phase I moves vertices into the cover
//! greedily, center by center, until every vertex has few neighbors left in
//! the residual set `U`. Phase II elects a leader, gathers the edges `F`
//! incident to `U`, rebuilds `G²[U]` from `F`, solves it exactly and
//! distributes the answer.

mod phase1;
mod residual;
mod voting;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{exact_mvc_with, ExactConfig};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::sim::{Model, Network, RoundStats};
use crate::solution::{ProblemKind, Solution};

pub use voting::{g2mvc_cc_voting, g2mvc_cc_voting_traced, VotingTrace};

/// Run settings shared by the distributed algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub model: Model,
    pub seed: u64,
    /// Overrides the simulator's default `100·n²` round cap.
    pub round_cap: Option<u64>,
    /// Size guard for the leader's exact solve.
    pub exact: ExactConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { model: Model::congest(), seed: 0, round_cap: None, exact: ExactConfig::default() }
    }
}

impl RunConfig {
    pub fn with_model(model: Model) -> Self {
        Self { model, ..Self::default() }
    }
}

/// Everything a Phase I + Phase II run produced, for inspection in tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase1Trace {
    /// Effective epsilon used by Phase I (`1/⌈1/ε⌉` for the unweighted
    /// algorithm, `ε` itself for the weighted one).
    pub eps_prime: Rational,
    /// Membership in the cover when Phase I ends.
    pub phase1_cover: Vec<bool>,
    /// Vertex groups moved into the cover together, with their center.
    pub batches: Vec<Batch>,
    /// Residual vertices after Phase I.
    pub residual: Vec<usize>,
    /// Edges with at least one residual endpoint, as gathered by the leader.
    pub gathered_edges: Vec<(usize, usize)>,
    /// Optimal cover of `G²[U]` computed by the leader.
    pub residual_cover: Vec<usize>,
    pub phase1_rounds: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub center: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributedRun {
    pub solution: Solution,
    pub stats: RoundStats,
    pub trace: Phase1Trace,
}

/// `(⌈1/ε⌉, 1/⌈1/ε⌉)`.
pub fn effective_epsilon(eps: &Rational) -> Result<(usize, Rational)> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidEpsilon(crate::rational::format_rational(eps)));
    }
    let l = eps.recip().ceil().to_integer() as usize;
    Ok((l, Rational::new(1, l as i64)))
}

/// Rebuilds `G²[U]` from the edges incident to `U`: two residual vertices
/// are adjacent iff they share an edge of `F` or a common endpoint in `F`.
pub fn build_h_from_f(n: usize, f: &[(usize, usize)], u: &[usize]) -> Graph {
    let base = Graph::from_edges_dedup(n, f.iter().copied()).expect("edges of a simple graph");
    let mut keep = vec![false; n];
    for &v in u {
        keep[v] = true;
    }
    base.square().induced_on(&keep).without_weights()
}

/// The whole vertex set, a cover of `G^r` within `1 + 1/⌊r/2⌋` of optimal
/// on connected graphs. Uses no communication.
pub fn g2mvc_trivial(g: &Graph, r: usize) -> Result<Solution> {
    if r == 0 {
        return Err(Error::Domain("power must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(Solution::new(g, ProblemKind::Vc2, (0..g.n()).collect()))
}

/// Unweighted `(1+ε)`-approximation in `O(n/ε)` rounds.
pub fn g2mvc_eps(g: &Graph, eps: &Rational, model: Model) -> Result<(Solution, RoundStats)> {
    let run = g2mvc_eps_traced(g, eps, &RunConfig::with_model(model))?;
    Ok((run.solution, run.stats))
}

pub fn g2mvc_eps_traced(g: &Graph, eps: &Rational, cfg: &RunConfig) -> Result<DistributedRun> {
    let (l, eps_prime) = effective_epsilon(eps)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let g = &g.clone().without_weights();
    if *eps > Rational::one() {
        return Ok(all_vertices(g, eps_prime));
    }
    let mut net = Network::new(g, cfg.model, cfg.seed).with_round_cap(cfg.round_cap);
    let phase1 = phase1::center_scan(&mut net, l)?;
    finish(g, &mut net, phase1, eps_prime, |residual| exact_mvc_with(&residual.h, &cfg.exact).map(|s| s.members))
}

/// Weighted `(1+ε)`-approximation in `O(n log n/ε)` rounds.
pub fn g2mwvc_eps(g: &Graph, eps: &Rational, model: Model) -> Result<(Solution, RoundStats)> {
    let run = g2mwvc_eps_traced(g, eps, &RunConfig::with_model(model))?;
    Ok((run.solution, run.stats))
}

pub fn g2mwvc_eps_traced(g: &Graph, eps: &Rational, cfg: &RunConfig) -> Result<DistributedRun> {
    effective_epsilon(eps)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut net = Network::new(g, cfg.model, cfg.seed).with_round_cap(cfg.round_cap);
    let phase1 = phase1::class_scan(&mut net, *eps)?;
    finish(g, &mut net, phase1, *eps, |residual| exact_mvc_with(&residual.h, &cfg.exact).map(|s| s.members))
}

/// Phase I with `ε = 1/2`, then the leader runs the 5/3-approximation on
/// the residual graph instead of an exact solver. Polynomial local work.
pub(crate) fn hybrid_traced(g: &Graph, cfg: &RunConfig) -> Result<DistributedRun> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let g = &g.clone().without_weights();
    let mut net = Network::new(g, cfg.model, cfg.seed).with_round_cap(cfg.round_cap);
    let phase1 = phase1::center_scan(&mut net, 2)?;
    finish(g, &mut net, phase1, Rational::new(1, 2), |residual| {
        Ok(crate::centralized::five_thirds_on(&residual.edges_graph, &residual.in_residual).0)
    })
}

fn all_vertices(g: &Graph, eps_prime: Rational) -> DistributedRun {
    DistributedRun {
        solution: Solution::new(g, ProblemKind::Vc2, (0..g.n()).collect()),
        stats: RoundStats::default(),
        trace: Phase1Trace {
            eps_prime,
            phase1_cover: vec![true; g.n()],
            batches: Vec::new(),
            residual: Vec::new(),
            gathered_edges: Vec::new(),
            residual_cover: Vec::new(),
            phase1_rounds: 0,
        },
    }
}

fn finish<S>(
    g: &Graph,
    net: &mut Network<'_>,
    phase1: phase1::Phase1Outcome,
    eps_prime: Rational,
    solve: S,
) -> Result<DistributedRun>
where
    S: FnOnce(&residual::ResidualView) -> Result<Vec<usize>>,
{
    let phase1_rounds = net.stats().rounds;
    let outcome = residual::gather_and_solve(net, &phase1.knowledge, g.is_weighted(), solve)?;
    let members: Vec<usize> =
        (0..g.n()).filter(|&v| !phase1.knowledge[v].in_residual || outcome.in_cover[v]).collect();
    Ok(DistributedRun {
        solution: Solution::new(g, ProblemKind::Vc2, members),
        stats: net.stats(),
        trace: Phase1Trace {
            eps_prime,
            phase1_cover: phase1.knowledge.iter().map(|k| !k.in_residual).collect(),
            batches: phase1.batches,
            residual: (0..g.n()).filter(|&v| phase1.knowledge[v].in_residual).collect(),
            gathered_edges: outcome.edges,
            residual_cover: outcome.residual_cover,
            phase1_rounds,
        },
    })
}
