//! Two-hop cardinality estimation with minima of exponential samples.
//!
//! Every counted vertex draws `r` independent Exp(1) samples. After two
//! relay-min exchanges a vertex `v` holds, per sample index, the minimum
//! over the counted vertices in its closed two-hop ball. The minimum of `d`
//! Exp(1) variables is Exp(d), so `r / Σ minima` estimates `d`. Vertices
//! whose neighbors all have short lists learn `d` exactly from explicit id
//! lists instead.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::sim::message::{join_words, split_words};
use crate::sim::{word_bits, Message, Model, Network, NodeInfo, NodeProgram, StepContext};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Relative accuracy target, in `(0, 1/4)`.
    pub eps: Rational,
    /// Samples per counted vertex.
    pub samples: usize,
    /// Words per fixed-point sample.
    pub precision_words: usize,
    /// Longest id list forwarded explicitly.
    pub exact_threshold: usize,
}

impl EstimateConfig {
    /// Defaults for an `n`-vertex graph: `ε = 1/8`, `⌈(3/ε²)·2·ln n⌉`
    /// samples, two-word samples and lists of up to `⌈8 ln n⌉` ids.
    pub fn for_n(n: usize) -> Self {
        Self::with_eps(n, Rational::new(1, 8))
    }

    pub fn with_eps(n: usize, eps: Rational) -> Self {
        let ln_n = (n.max(1) as f64).ln();
        let e = crate::rational::to_f64(&eps);
        let samples = ((3.0 / (e * e)) * 2.0 * ln_n).ceil().max(1.0) as usize;
        let exact_threshold = (8.0 * ln_n).ceil().max(1.0) as usize;
        Self { eps, samples, precision_words: 2, exact_threshold }
    }

    /// Upper bound on the probability that one vertex misses the bracket.
    pub fn failure_bound(&self) -> f64 {
        let e = crate::rational::to_f64(&self.eps);
        (-e * e * self.samples as f64 / 3.0).exp()
    }

    pub fn validate(&self, n: usize, model: Model) -> Result<()> {
        let quarter = Rational::new(1, 4);
        if self.eps <= Rational::zero() || self.eps >= quarter {
            return Err(Error::Config(format!("estimator epsilon {} outside (0, 1/4)", self.eps)));
        }
        if self.samples == 0 || self.exact_threshold == 0 || self.precision_words == 0 {
            return Err(Error::Config("samples, precision and exact threshold must be positive".into()));
        }
        if model.bandwidth_words < 2 || self.precision_words > model.bandwidth_words {
            return Err(Error::Config(format!(
                "{} words per sample do not fit {}-word messages",
                self.precision_words, model.bandwidth_words
            )));
        }
        if self.precision_words as u64 * word_bits(n) as u64 > 64 {
            return Err(Error::Config("sample precision exceeds 64 bits".into()));
        }
        Ok(())
    }
}

/// What one vertex learned about its count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Exact count, when every forwarded list fit.
    pub exact: Option<usize>,
    /// Sampling estimate, when the sampling stage ran.
    pub sampled: Option<f64>,
}

impl Estimate {
    /// The exact count if known, else the sampled estimate.
    pub fn value(&self) -> f64 {
        match (self.exact, self.sampled) {
            (Some(d), _) => d as f64,
            (None, Some(s)) => s,
            (None, None) => 0.0,
        }
    }
}

/// Which vertices a count covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CountMode {
    /// `v` counts the members of its closed two-hop ball.
    Closed,
    /// `v` counts the members of its closed two-hop ball labeled `v`;
    /// relays forward a separate minimum to each labeled neighbor.
    PerLabel,
}

#[derive(Clone, Copy, Debug)]
struct Schedule {
    chunk_rounds: usize,
    sampling: bool,
    sample_rounds: usize,
    per_message: usize,
    precision: usize,
    bits: u32,
    frac_bits: u32,
    infinity: u64,
}

impl Schedule {
    fn new(n: usize, cfg: &EstimateConfig, bandwidth: usize) -> Self {
        let bits = word_bits(n);
        let per_message = bandwidth / cfg.precision_words;
        let code_bits = cfg.precision_words as u32 * bits;
        let infinity = if code_bits >= 64 { u64::MAX } else { (1u64 << code_bits) - 1 };
        Self {
            chunk_rounds: cfg.exact_threshold.div_ceil(bandwidth - 1).max(1),
            // Lists of at most n ids always fit, so sampling adds nothing.
            sampling: n > cfg.exact_threshold,
            sample_rounds: cfg.samples.div_ceil(per_message),
            per_message,
            precision: cfg.precision_words,
            bits,
            // Two integer bits: minima that matter are far below 4.
            frac_bits: code_bits.saturating_sub(2),
            infinity,
        }
    }

    fn slot(&self, step: usize) -> Slot {
        let c = self.chunk_rounds;
        let s = if self.sampling { self.sample_rounds } else { 0 };
        match step {
            0 => Slot::Info,
            k if k <= c => Slot::Chunk(k - 1),
            k if k <= c + s => Slot::Relay1(k - c - 1),
            k if k <= c + 2 * s => Slot::Relay2(k - c - s - 1),
            _ => Slot::Finish,
        }
    }

    fn encode(&self, codes: &[u64]) -> Message {
        codes.iter().flat_map(|&c| split_words(c, self.bits, self.precision)).collect()
    }

    fn decode<'m>(&self, msg: &'m Message) -> impl Iterator<Item = u64> + 'm {
        let (bits, p) = (self.bits, self.precision);
        msg.words().chunks(p).map(move |w| join_words(w, bits))
    }

    fn chunk(&self, k: usize, r: usize) -> std::ops::Range<usize> {
        (k * self.per_message).min(r)..((k + 1) * self.per_message).min(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Info,
    Chunk(usize),
    Relay1(usize),
    Relay2(usize),
    Finish,
}

const TAG_MORE: u64 = 1;
const TAG_LAST: u64 = 2;
const TAG_OVERFLOW: u64 = 3;

struct Counter {
    id: usize,
    mode: CountMode,
    sched: Schedule,
    samples: usize,
    threshold: usize,
    member: bool,
    label: Option<usize>,
    neighbors: Vec<usize>,
    neighbor_member: Vec<bool>,
    neighbor_label: Vec<Option<usize>>,
    step: usize,
    /// Outgoing id lists, keyed by receiver (`None` = every neighbor).
    lists: Vec<(Option<usize>, Vec<u64>)>,
    collected: Vec<usize>,
    overflow: bool,
    own: Vec<u64>,
    /// Per-label minima over the closed neighborhood (label `usize::MAX`
    /// stands for "any" in closed mode).
    relay: std::collections::BTreeMap<usize, Vec<u64>>,
    ball: Vec<u64>,
    done: bool,
}

const ANY: usize = usize::MAX;

impl Counter {
    fn key(&self, label: Option<usize>) -> Option<usize> {
        match self.mode {
            CountMode::Closed => Some(ANY),
            CountMode::PerLabel => label,
        }
    }

    fn contributes(&self) -> bool {
        match self.mode {
            CountMode::Closed => self.member,
            CountMode::PerLabel => self.label.is_some(),
        }
    }

    fn build_lists(&mut self) {
        let mut closed: Vec<(usize, bool, Option<usize>)> = vec![(self.id, self.member, self.label)];
        closed.extend(
            self.neighbors.iter().zip(&self.neighbor_member).zip(&self.neighbor_label).map(|((&u, &m), &l)| (u, m, l)),
        );
        closed.sort_unstable_by_key(|c| c.0);
        match self.mode {
            CountMode::Closed => {
                let list: Vec<u64> = closed.iter().filter(|c| c.1).map(|c| c.0 as u64).collect();
                self.collected.extend(list.iter().map(|&u| u as usize));
                self.lists.push((None, list));
            }
            CountMode::PerLabel => {
                let own: Vec<usize> = closed.iter().filter(|c| c.2 == Some(self.id)).map(|c| c.0).collect();
                self.collected.extend(own);
                for &c in &self.neighbors {
                    let list: Vec<u64> = closed.iter().filter(|x| x.2 == Some(c)).map(|x| x.0 as u64).collect();
                    self.lists.push((Some(c), list));
                }
            }
        }
        self.lists.retain(|(_, l)| !l.is_empty());
    }

    fn send_chunk(&self, ctx: &mut StepContext<'_>, k: usize) {
        let per = ctx.bandwidth_words() - 1;
        for (to, list) in &self.lists {
            let msg = if list.len() > self.threshold {
                if k > 0 {
                    continue;
                }
                Message::from_words(&[TAG_OVERFLOW])
            } else {
                let start = k * per;
                if start >= list.len() {
                    continue;
                }
                let end = (start + per).min(list.len());
                let mut m = Message::from_words(&[if end == list.len() { TAG_LAST } else { TAG_MORE }]);
                m.extend(list[start..end].iter().copied());
                m
            };
            match to {
                Some(c) => ctx.send(*c, msg),
                None => ctx.broadcast(&msg),
            }
        }
    }

    fn draw(&mut self, ctx: &mut StepContext<'_>) {
        let scale = (1u64 << self.sched.frac_bits) as f64;
        let cap = self.sched.infinity - 1;
        let rng = ctx.rng();
        self.own = (0..self.samples)
            .map(|_| {
                let y = -(1.0 - rng.random::<f64>()).ln();
                ((y * scale).round() as u64).min(cap)
            })
            .collect();
    }

    fn absorb(&mut self, key: usize, offset: usize, codes: impl Iterator<Item = u64>) {
        let inf = self.sched.infinity;
        let r = self.samples;
        let slot = self.relay.entry(key).or_insert_with(|| vec![inf; r]);
        for (j, c) in codes.enumerate() {
            slot[offset + j] = slot[offset + j].min(c);
        }
    }

    fn process(&mut self, slot: Slot, ctx: &StepContext<'_>) {
        match slot {
            Slot::Info => {
                for (from, msg) in ctx.inbox() {
                    let i = self.neighbors.binary_search(from).expect("messages come from neighbors");
                    self.neighbor_member[i] = msg.word(0) == 1;
                    self.neighbor_label[i] = msg.word(1).checked_sub(1).map(|l| l as usize);
                }
            }
            Slot::Chunk(_) => {
                for (_, msg) in ctx.inbox() {
                    if msg.word(0) == TAG_OVERFLOW {
                        self.overflow = true;
                    } else {
                        self.collected.extend(msg.words()[1..].iter().map(|&u| u as usize));
                    }
                }
            }
            Slot::Relay1(k) => {
                let offset = self.sched.chunk(k, self.samples).start;
                for (from, msg) in ctx.inbox() {
                    let i = self.neighbors.binary_search(from).expect("messages come from neighbors");
                    if let Some(key) = self.key(self.neighbor_label[i]) {
                        let codes: Vec<u64> = self.sched.decode(msg).collect();
                        self.absorb(key, offset, codes.into_iter());
                    }
                }
            }
            Slot::Relay2(k) => {
                let offset = self.sched.chunk(k, self.samples).start;
                for (_, msg) in ctx.inbox() {
                    for (j, c) in self.sched.decode(msg).enumerate() {
                        self.ball[offset + j] = self.ball[offset + j].min(c);
                    }
                }
            }
            Slot::Finish => {}
        }
    }

    fn act(&mut self, slot: Slot, ctx: &mut StepContext<'_>) {
        match slot {
            Slot::Info => {
                let label = self.label.map_or(0, |l| l as u64 + 1);
                ctx.broadcast(&Message::from_words(&[self.member as u64, label]));
            }
            Slot::Chunk(k) => {
                if k == 0 {
                    self.build_lists();
                }
                self.send_chunk(ctx, k);
            }
            Slot::Relay1(k) => {
                if k == 0 && self.contributes() {
                    self.draw(ctx);
                    let own = std::mem::take(&mut self.own);
                    if let Some(key) = self.key(self.label) {
                        self.absorb(key, 0, own.iter().copied());
                    }
                    self.own = own;
                }
                if self.contributes() {
                    let range = self.sched.chunk(k, self.samples);
                    ctx.broadcast(&self.sched.encode(&self.own[range]));
                }
            }
            Slot::Relay2(k) => {
                if k == 0 {
                    let own_key = match self.mode {
                        CountMode::Closed => ANY,
                        CountMode::PerLabel => self.id,
                    };
                    self.ball = self.relay.get(&own_key).cloned().unwrap_or_else(|| vec![self.sched.infinity; self.samples]);
                }
                let range = self.sched.chunk(k, self.samples);
                let inf = self.sched.infinity;
                for (&key, mins) in &self.relay {
                    let part = &mins[range.clone()];
                    if part.iter().all(|&c| c == inf) {
                        continue;
                    }
                    let msg = self.sched.encode(part);
                    match self.mode {
                        CountMode::Closed => ctx.broadcast(&msg),
                        // Minima for labels outside N(w) are useless to w.
                        CountMode::PerLabel if self.neighbors.binary_search(&key).is_ok() => ctx.send(key, msg),
                        CountMode::PerLabel => {}
                    }
                }
            }
            Slot::Finish => self.done = true,
        }
    }

    fn result(&self) -> Estimate {
        let exact = (!self.overflow).then(|| {
            let mut ids = self.collected.clone();
            ids.sort_unstable();
            ids.dedup();
            ids.len()
        });
        let sampled = self.sched.sampling.then(|| {
            if self.ball.first().is_none_or(|&c| c == self.sched.infinity) {
                return 0.0;
            }
            let total: u64 = self.ball.iter().sum();
            let scale = (1u64 << self.sched.frac_bits) as f64;
            self.samples as f64 * scale / (total as f64).max(0.5)
        });
        Estimate { exact, sampled }
    }
}

impl NodeProgram for Counter {
    type Output = Estimate;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        if self.step > 0 {
            let prev = self.sched.slot(self.step - 1);
            self.process(prev, ctx);
        }
        let slot = self.sched.slot(self.step);
        self.step += 1;
        self.act(slot, ctx);
    }

    fn is_halted(&self) -> bool {
        self.done
    }

    fn into_output(self) -> Estimate {
        self.result()
    }
}

/// Runs one counting protocol on `net`. `members[v]` marks counted
/// vertices; in per-label mode `labels[v]` names the vertex `v` counts for.
pub(crate) fn count_on(
    net: &mut Network<'_>,
    cfg: &EstimateConfig,
    mode: CountMode,
    members: &[bool],
    labels: &[Option<usize>],
) -> Result<Vec<Estimate>> {
    let n = net.graph().n();
    cfg.validate(n, net.model())?;
    let sched = Schedule::new(n, cfg, net.model().bandwidth_words);
    let out = net.run(|info: NodeInfo<'_>| Counter {
        id: info.id,
        mode,
        sched,
        samples: cfg.samples,
        threshold: cfg.exact_threshold,
        member: members[info.id],
        label: labels[info.id],
        neighbors: info.neighbors.to_vec(),
        neighbor_member: vec![false; info.neighbors.len()],
        neighbor_label: vec![None; info.neighbors.len()],
        step: 0,
        lists: Vec::new(),
        collected: Vec::new(),
        overflow: false,
        own: Vec::new(),
        relay: Default::default(),
        ball: Vec::new(),
        done: false,
    })?;
    Ok(out)
}

/// Estimates `|N₂[v] ∩ U|` for every vertex `v`, with `N₂[v]` the closed
/// two-hop ball, by simulation in CONGEST.
pub fn estimate_2hop_counts(g: &Graph, u: &[usize], cfg: &EstimateConfig, seed: u64) -> Result<Vec<Estimate>> {
    g.check_vertices(u)?;
    let mut members = vec![false; g.n()];
    for &v in u {
        members[v] = true;
    }
    let mut net = Network::new(g, Model::congest(), seed);
    count_on(&mut net, cfg, CountMode::Closed, &members, &vec![None; g.n()])
}

/// True when `estimate` lies in `[(1−ε)d, (1+ε)d]`.
pub fn within_bracket(estimate: f64, truth: usize, eps: &Rational) -> bool {
    let e = crate::rational::to_f64(eps);
    let d = truth as f64;
    estimate >= (1.0 - e) * d && estimate <= (1.0 + e) * d
}
