//! Randomized congested-clique variant: candidates are thinned by random
//! votes instead of a sequential scan, giving `O(log n + 1/ε)` rounds.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::exact_mvc_with;
use crate::graph::Graph;
use crate::rational::Rational;
use crate::sim::message::{join_words, split_words};
use crate::sim::{Message, Model, Network, NodeInfo, NodeProgram, RoundStats, StepContext};
use crate::solution::Solution;

use super::phase1::{NodeKnowledge, Phase1Outcome};
use super::{effective_epsilon, DistributedRun, RunConfig};

const LEADER: usize = 0;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VotingTrace {
    /// Voting phases in which at least one candidate existed.
    pub phases: usize,
    /// `(phase, candidate)` for every successful candidate.
    pub successes: Vec<(usize, usize)>,
}

/// Six rounds per phase: candidates report to the leader, the leader stops
/// everyone when none exist, candidates send random ranks to their residual
/// neighbors, residual vertices vote for the highest rank (larger id on
/// ties), candidates with at least `d_R/8` votes recruit their residual
/// neighbors, and recruits tell their neighbors.
struct Voter {
    id: usize,
    neighbors: Vec<usize>,
    threshold: usize,
    step: usize,
    in_residual: bool,
    neighbor_in_residual: Vec<bool>,
    alive: bool,
    candidate: bool,
    any_candidate: bool,
    stop: bool,
    phases: usize,
    joined: Option<(usize, usize)>,
    success: Option<usize>,
    done: bool,
}

impl Voter {
    fn residual_degree(&self) -> usize {
        self.neighbor_in_residual.iter().filter(|&&r| r).count()
    }

    fn residual_neighbors(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.iter().zip(&self.neighbor_in_residual).filter(|(_, &r)| r).map(|(&v, _)| v)
    }
}

impl NodeProgram for Voter {
    type Output = (NodeKnowledge, Option<(usize, usize)>, Option<usize>, usize);

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        let (phase, slot) = (self.step / 6, self.step % 6);
        self.step += 1;
        match slot {
            0 => {
                for (from, _) in ctx.inbox() {
                    if let Ok(i) = self.neighbors.binary_search(from) {
                        self.neighbor_in_residual[i] = false;
                    }
                }
                self.candidate = self.alive && self.residual_degree() > self.threshold;
                self.alive = self.candidate;
                if self.id == LEADER {
                    self.any_candidate = self.candidate;
                } else if self.candidate {
                    ctx.send(LEADER, Message::from_words(&[1]));
                }
            }
            1 => {
                if self.id == LEADER {
                    self.any_candidate |= !ctx.inbox().is_empty();
                    if !self.any_candidate {
                        self.stop = true;
                        for v in (0..ctx.n()).filter(|&v| v != LEADER) {
                            ctx.send(v, Message::from_words(&[0]));
                        }
                    }
                }
            }
            2 => {
                self.stop |= !ctx.inbox().is_empty();
                if self.stop {
                    self.done = true;
                    return;
                }
                self.phases = phase + 1;
                if self.candidate {
                    let n = ctx.n() as u64;
                    let rank = ctx.rng().random_range(1..=n.saturating_pow(4).max(1));
                    let msg: Message = split_words(rank, ctx.word_bits(), 4).collect();
                    let targets: Vec<usize> = self.residual_neighbors().collect();
                    for v in targets {
                        ctx.send(v, msg.clone());
                    }
                }
            }
            3 => {
                if self.in_residual {
                    let bits = ctx.word_bits();
                    let choice = ctx.inbox().iter().map(|(from, m)| (join_words(m.words(), bits), *from)).max();
                    if let Some((_, c)) = choice {
                        ctx.send(c, Message::from_words(&[1]));
                    }
                }
            }
            4 => {
                if self.candidate && 8 * ctx.inbox().len() >= self.residual_degree() {
                    let targets: Vec<usize> = self.residual_neighbors().collect();
                    for v in targets {
                        ctx.send(v, Message::from_words(&[1]));
                    }
                    self.alive = false;
                    self.success = Some(phase);
                }
            }
            _ => {
                if let Some((center, _)) = ctx.inbox().first() {
                    self.in_residual = false;
                    self.joined = Some((phase, *center));
                    ctx.broadcast(&Message::from_words(&[0]));
                }
            }
        }
    }

    fn is_halted(&self) -> bool {
        self.done
    }

    fn into_output(self) -> Self::Output {
        let knowledge = NodeKnowledge {
            in_residual: self.in_residual,
            neighbor_in_residual: self.neighbor_in_residual,
            weight: None,
            neighbor_weights: Vec::new(),
        };
        (knowledge, self.joined, self.success, self.phases)
    }
}

/// Congested-clique `(1+ε)`-approximation with random voting.
pub fn g2mvc_cc_voting(g: &Graph, eps: &Rational, seed: u64) -> Result<(Solution, RoundStats)> {
    let cfg = RunConfig { seed, ..RunConfig::with_model(Model::clique()) };
    let (run, _) = g2mvc_cc_voting_traced(g, eps, &cfg)?;
    Ok((run.solution, run.stats))
}

/// As [`g2mvc_cc_voting`]; the model in `cfg` is forced to the clique, only
/// its bandwidth is used.
pub fn g2mvc_cc_voting_traced(g: &Graph, eps: &Rational, cfg: &RunConfig) -> Result<(DistributedRun, VotingTrace)> {
    let (l, eps_prime) = effective_epsilon(eps)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let g = &g.clone().without_weights();
    let model = Model::clique().with_bandwidth(cfg.model.bandwidth_words);
    let mut net = Network::new(g, model, cfg.seed).with_round_cap(cfg.round_cap);
    let out = net.run(|info: NodeInfo<'_>| Voter {
        id: info.id,
        neighbors: info.neighbors.to_vec(),
        threshold: 8 * l + 2,
        step: 0,
        in_residual: true,
        neighbor_in_residual: vec![true; info.neighbors.len()],
        alive: true,
        candidate: false,
        any_candidate: false,
        stop: false,
        phases: 0,
        joined: None,
        success: None,
        done: false,
    })?;
    let phases = out.iter().map(|o| o.3).max().unwrap_or(0);
    let successes = out.iter().enumerate().filter_map(|(v, o)| o.2.map(|p| (p, v))).collect();
    let joined: Vec<Option<(usize, usize)>> = out.iter().map(|o| o.1).collect();
    let phase1 = Phase1Outcome {
        knowledge: out.into_iter().map(|o| o.0).collect(),
        batches: super::phase1::batches_from(&joined),
    };
    let run = super::finish(g, &mut net, phase1, eps_prime, |residual| {
        exact_mvc_with(&residual.h, &cfg.exact).map(|s| s.members)
    })?;
    Ok((run, VotingTrace { phases, successes }))
}
