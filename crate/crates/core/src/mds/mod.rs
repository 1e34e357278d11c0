//! Distributed `O(log Δ)`-approximation for dominating set on `G²`,
//! simulated on `G` in CONGEST.
//!
//! Each phase: every vertex estimates how many uncovered vertices its
//! closed two-hop ball holds and rounds that up to a power of two; vertices
//! whose rounded value is maximal within four hops become candidates and
//! draw random ranks; every uncovered vertex votes for the lowest-ranked
//! candidate within two hops; candidates whose estimated vote count is at
//! least an eighth of their estimated ball join. Coverage flags are exact,
//! so the output is feasible whatever the estimates say.

mod estimate;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::message::{join_words, split_words};
use crate::sim::{Message, Model, Network, NodeInfo, NodeProgram, RoundStats, StepContext};
use crate::solution::{ProblemKind, Solution};

pub use estimate::{estimate_2hop_counts, within_bracket, Estimate, EstimateConfig};
use estimate::{count_on, CountMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsConfig {
    pub model: Model,
    pub seed: u64,
    pub round_cap: Option<u64>,
    /// Estimator settings; defaults to [`EstimateConfig::for_n`].
    pub estimate: Option<EstimateConfig>,
    /// Consecutive phases without a joiner tolerated before giving up.
    pub stall_cap: usize,
}

impl Default for MdsConfig {
    fn default() -> Self {
        Self { model: Model::congest(), seed: 0, round_cap: None, estimate: None, stall_cap: 32 }
    }
}

/// What happened in one phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdsPhase {
    /// Uncovered vertices at the start of the phase.
    pub uncovered: Vec<usize>,
    /// Per-vertex estimate of the uncovered part of its two-hop ball.
    pub estimates: Vec<Estimate>,
    pub candidates: Vec<usize>,
    /// Estimated vote count of every candidate.
    pub votes: Vec<(usize, Estimate)>,
    pub joined: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MdsRun {
    pub solution: Solution,
    pub stats: RoundStats,
    pub phases: Vec<MdsPhase>,
}

/// Spreads the best `(primary, secondary)` key for a fixed number of
/// rounds. The primary part spans `words` words, the secondary one word.
struct Flood {
    id: usize,
    rounds: usize,
    words: usize,
    prefer_min: bool,
    draw_rank: bool,
    step: usize,
    best: Option<(u64, u64)>,
    done: bool,
}

impl Flood {
    fn better(&self, key: (u64, u64)) -> bool {
        match self.best {
            None => true,
            Some(b) if self.prefer_min => key < b,
            Some(b) => key > b,
        }
    }
}

impl NodeProgram for Flood {
    type Output = Option<(u64, u64)>;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        let bits = ctx.word_bits();
        if self.step == 0 && self.draw_rank {
            let top = (ctx.n() as u64).saturating_pow(4).max(1);
            self.best = Some((ctx.rng().random_range(1..=top), self.id as u64));
        }
        for (_, msg) in ctx.inbox() {
            let key = (join_words(&msg.words()[..self.words], bits), msg.word(self.words));
            if self.better(key) {
                self.best = Some(key);
            }
        }
        if self.step == self.rounds {
            self.done = true;
            return;
        }
        self.step += 1;
        if let Some((p, s)) = self.best {
            let mut msg: Message = split_words(p, bits, self.words).collect();
            msg.push(s);
            ctx.broadcast(&msg);
        }
    }

    fn is_halted(&self) -> bool {
        self.done
    }

    fn into_output(self) -> Self::Output {
        self.best
    }
}

fn flood(
    net: &mut Network<'_>,
    rounds: usize,
    words: usize,
    prefer_min: bool,
    start: &[Option<(u64, u64)>],
    draw_rank: &[bool],
) -> Result<Vec<Option<(u64, u64)>>> {
    Ok(net.run(|info: NodeInfo<'_>| Flood {
        id: info.id,
        rounds,
        words,
        prefer_min,
        draw_rank: draw_rank[info.id],
        step: 0,
        best: start[info.id],
        done: false,
    })?)
}

/// `log₂` of the smallest power of two at least `estimate`, plus one;
/// zero for an empty ball.
fn rounded_density(e: &Estimate) -> u64 {
    match e.exact {
        Some(0) => 0,
        Some(d) => d.next_power_of_two().trailing_zeros() as u64 + 1,
        None => {
            let s = e.value();
            if s <= 0.0 {
                0
            } else {
                s.log2().ceil().max(0.0) as u64 + 1
            }
        }
    }
}

/// `O(log Δ)`-approximate dominating set of `G²` in polylog rounds.
pub fn g2mds_logd(g: &Graph, seed: u64) -> Result<(Solution, RoundStats)> {
    let run = g2mds_logd_traced(g, &MdsConfig { seed, ..MdsConfig::default() })?;
    Ok((run.solution, run.stats))
}

pub fn g2mds_logd_traced(g: &Graph, cfg: &MdsConfig) -> Result<MdsRun> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let est_cfg = cfg.estimate.clone().unwrap_or_else(|| EstimateConfig::for_n(n));
    est_cfg.validate(n, cfg.model)?;
    let mut net = Network::new(g, cfg.model, cfg.seed).with_round_cap(cfg.round_cap);
    let mut covered = vec![false; n];
    let mut in_set = vec![false; n];
    let mut phases = Vec::new();
    let mut stalled = 0;
    let no_draw = vec![false; n];

    while covered.iter().any(|&c| !c) {
        let uncovered: Vec<bool> = covered.iter().map(|&c| !c).collect();
        let estimates = count_on(&mut net, &est_cfg, CountMode::Closed, &uncovered, &vec![None; n])?;

        let density: Vec<Option<(u64, u64)>> =
            estimates.iter().map(|e| Some(rounded_density(e)).filter(|&r| r > 0).map(|r| (r, 0))).collect();
        let ball_max = flood(&mut net, 4, 1, false, &density, &no_draw)?;
        let candidate: Vec<bool> = (0..n).map(|v| density[v].is_some() && density[v] == ball_max[v]).collect();

        let ranked = flood(&mut net, 2, 4, true, &vec![None; n], &candidate)?;
        let labels: Vec<Option<usize>> =
            (0..n).map(|v| if uncovered[v] { ranked[v].map(|(_, c)| c as usize) } else { None }).collect();
        let voters: Vec<bool> = labels.iter().map(Option::is_some).collect();
        let votes = count_on(&mut net, &est_cfg, CountMode::PerLabel, &voters, &labels)?;

        let joins: Vec<bool> = (0..n).map(|v| candidate[v] && 8.0 * votes[v].value() >= estimates[v].value()).collect();
        let start: Vec<Option<(u64, u64)>> = joins.iter().map(|&j| j.then_some((1, 0))).collect();
        let reached = flood(&mut net, 2, 1, false, &start, &no_draw)?;
        for v in 0..n {
            in_set[v] |= joins[v];
            covered[v] |= reached[v].is_some();
        }

        let joined: Vec<usize> = (0..n).filter(|&v| joins[v]).collect();
        stalled = if joined.is_empty() { stalled + 1 } else { 0 };
        phases.push(MdsPhase {
            uncovered: (0..n).filter(|&v| uncovered[v]).collect(),
            estimates,
            candidates: (0..n).filter(|&v| candidate[v]).collect(),
            votes: (0..n).filter(|&v| candidate[v]).map(|v| (v, votes[v])).collect(),
            joined,
        });
        if stalled >= cfg.stall_cap {
            return Err(Error::Stalled { phases: stalled });
        }
    }

    Ok(MdsRun { solution: Solution::from_mask(g, ProblemKind::Ds2, &in_set), stats: net.stats(), phases })
}
