//! Synchronous round simulator for the CONGEST and congested-clique models
//! with per-message bandwidth accounting.
//!
//! Every node runs a [`NodeProgram`]. In each round the simulator steps every
//! node that is still running or has mail, collects the messages it sends,
//! validates them against the model, and delivers them at the start of the
//! next round. Successive runs on one [`Network`] share the round counter,
//! the per-node random streams and the statistics, so protocols compose by
//! running one after another.

pub mod message;
pub mod primitives;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub use message::Message;
pub use primitives::{elect_leader_bfs, pipelined_convergecast, BfsTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Messages only along edges of the input graph.
    Congest,
    /// Any node may message any other node.
    Clique,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    /// Words per message; a word has `⌈log₂(n+1)⌉` bits.
    pub bandwidth_words: usize,
}

impl Model {
    pub const DEFAULT_BANDWIDTH_WORDS: usize = 8;

    pub fn congest() -> Self {
        Self { kind: ModelKind::Congest, bandwidth_words: Self::DEFAULT_BANDWIDTH_WORDS }
    }

    pub fn clique() -> Self {
        Self { kind: ModelKind::Clique, bandwidth_words: Self::DEFAULT_BANDWIDTH_WORDS }
    }

    pub fn with_bandwidth(mut self, words: usize) -> Self {
        self.bandwidth_words = words;
        self
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Congest => "congest",
            ModelKind::Clique => "clique",
        }
    }
}

/// Bits per word for an `n`-node network.
pub fn word_bits(n: usize) -> u32 {
    let n = n as u64 + 1;
    (u64::BITS - (n - 1).leading_zeros()).max(1)
}

/// Default round cap, `100·n²`.
pub fn default_round_cap(n: usize) -> u64 {
    (100 * (n as u64).pow(2)).max(100)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    pub rounds: u64,
    pub messages: u64,
    pub max_message_bits: u64,
    pub violations: u64,
}

impl RoundStats {
    pub fn absorb(&mut self, other: &RoundStats) {
        self.rounds += other.rounds;
        self.messages += other.messages;
        self.max_message_bits = self.max_message_bits.max(other.max_message_bits);
        self.violations += other.violations;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("node {node} sent {bits} bits in round {round}, limit is {limit} bits")]
    Bandwidth { node: usize, round: u64, bits: u64, limit: u64 },
    #[error("node {node} sent a word {value} wider than {word_bits} bits in round {round}")]
    Encoding { node: usize, round: u64, value: u64, word_bits: u32 },
    #[error("node {node} cannot send to {to} in round {round}")]
    IllegalSend { node: usize, round: u64, to: usize },
    #[error("node {node} holds an item of {words} words, messages carry at most {limit} words")]
    ItemTooLarge { node: usize, words: usize, limit: usize },
    #[error("round cap {cap} reached without termination")]
    RoundCap { cap: u64 },
}

/// What a node sees during one step.
pub struct StepContext<'a> {
    id: usize,
    n: usize,
    round: u64,
    word_bits: u32,
    bandwidth_words: usize,
    neighbors: &'a [usize],
    inbox: &'a [(usize, Message)],
    rng: &'a mut ChaCha8Rng,
    outbox: &'a mut Vec<(usize, Message)>,
}

impl StepContext<'_> {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Global round number of this step, starting at 1.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn bandwidth_words(&self) -> usize {
        self.bandwidth_words
    }

    pub fn neighbors(&self) -> &[usize] {
        self.neighbors
    }

    /// Messages delivered this round, ordered by sender id.
    pub fn inbox(&self) -> &[(usize, Message)] {
        self.inbox
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        self.rng
    }

    pub fn send(&mut self, to: usize, msg: Message) {
        self.outbox.push((to, msg));
    }

    /// Sends a copy of `msg` to every neighbor in the input graph.
    pub fn broadcast(&mut self, msg: &Message) {
        for &v in self.neighbors {
            self.outbox.push((v, msg.clone()));
        }
    }
}

/// Per-node state machine.
pub trait NodeProgram {
    type Output;

    fn step(&mut self, ctx: &mut StepContext<'_>);

    /// A halted node is only stepped again when a message arrives.
    fn is_halted(&self) -> bool;

    fn into_output(self) -> Self::Output;
}

/// Static facts a node knows before the first round.
#[derive(Clone, Copy, Debug)]
pub struct NodeInfo<'a> {
    pub id: usize,
    pub n: usize,
    pub neighbors: &'a [usize],
}

/// A simulated network: graph, model, per-node random streams and
/// cumulative statistics.
pub struct Network<'g> {
    graph: &'g Graph,
    model: Model,
    word_bits: u32,
    rngs: Vec<ChaCha8Rng>,
    stats: RoundStats,
    round_cap: u64,
}

impl<'g> Network<'g> {
    pub fn new(graph: &'g Graph, model: Model, seed: u64) -> Self {
        let rngs = (0..graph.n())
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                rng
            })
            .collect();
        Self {
            graph,
            model,
            word_bits: word_bits(graph.n()),
            rngs,
            stats: RoundStats::default(),
            round_cap: default_round_cap(graph.n()),
        }
    }

    pub fn with_round_cap(mut self, cap: Option<u64>) -> Self {
        if let Some(cap) = cap {
            self.round_cap = cap;
        }
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn stats(&self) -> RoundStats {
        self.stats
    }

    pub fn round_cap(&self) -> u64 {
        self.round_cap
    }

    /// Runs one protocol to termination: no message in flight and every
    /// node halted. Rounds in which nothing is sent and after which every
    /// node has halted are local computation and are not counted.
    pub fn run<P, F>(&mut self, mut factory: F) -> Result<Vec<P::Output>, SimError>
    where
        P: NodeProgram,
        F: FnMut(NodeInfo<'_>) -> P,
    {
        let n = self.graph.n();
        let mut programs: Vec<P> = (0..n)
            .map(|id| factory(NodeInfo { id, n, neighbors: self.graph.neighbors(id) }))
            .collect();
        let mut inboxes: Vec<Vec<(usize, Message)>> = vec![Vec::new(); n];
        let mut outbox = Vec::new();
        let mut stamp = vec![u64::MAX; n];
        let limit_bits = self.model.bandwidth_words as u64 * self.word_bits as u64;
        let max_word = if self.word_bits >= 64 { u64::MAX } else { (1u64 << self.word_bits) - 1 };
        let mut sender_token: u64 = 0;

        loop {
            let active = programs.iter().zip(&inboxes).any(|(p, inbox)| !p.is_halted() || !inbox.is_empty());
            if !active {
                return Ok(programs.into_iter().map(NodeProgram::into_output).collect());
            }
            if self.stats.rounds >= self.round_cap {
                return Err(SimError::RoundCap { cap: self.round_cap });
            }
            let round = self.stats.rounds + 1;
            let mut next: Vec<Vec<(usize, Message)>> = vec![Vec::new(); n];
            let mut sent = 0u64;
            for id in 0..n {
                if programs[id].is_halted() && inboxes[id].is_empty() {
                    continue;
                }
                outbox.clear();
                sender_token += 1;
                let mut ctx = StepContext {
                    id,
                    n,
                    round,
                    word_bits: self.word_bits,
                    bandwidth_words: self.model.bandwidth_words,
                    neighbors: self.graph.neighbors(id),
                    inbox: &inboxes[id],
                    rng: &mut self.rngs[id],
                    outbox: &mut outbox,
                };
                programs[id].step(&mut ctx);
                for (to, msg) in outbox.drain(..) {
                    let legal = to < n
                        && to != id
                        && stamp[to] != sender_token
                        && (self.model.kind == ModelKind::Clique || self.graph.has_edge(id, to));
                    if !legal {
                        self.stats.violations += 1;
                        return Err(SimError::IllegalSend { node: id, round, to });
                    }
                    stamp[to] = sender_token;
                    if let Some(&value) = msg.words().iter().find(|&&w| w > max_word) {
                        self.stats.violations += 1;
                        return Err(SimError::Encoding { node: id, round, value, word_bits: self.word_bits });
                    }
                    // An empty message still occupies the edge for one word.
                    let bits = msg.len().max(1) as u64 * self.word_bits as u64;
                    if bits > limit_bits {
                        self.stats.violations += 1;
                        return Err(SimError::Bandwidth { node: id, round, bits, limit: limit_bits });
                    }
                    self.stats.max_message_bits = self.stats.max_message_bits.max(bits);
                    next[to].push((id, msg));
                    sent += 1;
                }
            }
            self.stats.messages += sent;
            inboxes = next;
            if sent > 0 || programs.iter().any(|p| !p.is_halted()) {
                self.stats.rounds += 1;
            }
        }
    }
}

/// One-shot convenience wrapper: runs a single protocol on a fresh network.
pub fn run<P, F>(
    g: &Graph,
    factory: F,
    model: Model,
    seed: u64,
    round_cap: Option<u64>,
) -> Result<(Vec<P::Output>, RoundStats), SimError>
where
    P: NodeProgram,
    F: FnMut(NodeInfo<'_>) -> P,
{
    let mut net = Network::new(g, model, seed).with_round_cap(round_cap);
    let outputs = net.run(factory)?;
    Ok((outputs, net.stats()))
}
