//! Phase I programs: the unweighted center scan and the weighted class scan.

use crate::error::Result;
use crate::rational::Rational;
use crate::sim::message::{join_words, split_words};
use crate::sim::{Message, Network, NodeInfo, NodeProgram, StepContext};

use super::Batch;

/// What a node knows when Phase I ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NodeKnowledge {
    pub in_residual: bool,
    /// Aligned with the node's sorted neighbor list.
    pub neighbor_in_residual: Vec<bool>,
    /// Own weight and neighbor weights (weighted runs only).
    pub weight: Option<Rational>,
    pub neighbor_weights: Vec<Rational>,
}

pub(crate) struct Phase1Outcome {
    pub knowledge: Vec<NodeKnowledge>,
    pub batches: Vec<Batch>,
}

/// Groups joiners by the (step, center) that recruited them.
pub(crate) fn batches_from(joined: &[Option<(usize, usize)>]) -> Vec<Batch> {
    let mut keyed: Vec<((usize, usize), usize)> =
        joined.iter().enumerate().filter_map(|(v, j)| j.map(|(step, center)| ((step, center), v))).collect();
    keyed.sort_unstable();
    let mut batches: Vec<Batch> = Vec::new();
    let mut last = None;
    for ((step, center), v) in keyed {
        if last != Some((step, center)) {
            batches.push(Batch { center, members: Vec::new() });
            last = Some((step, center));
        }
        batches.last_mut().expect("just pushed").members.push(v);
    }
    batches
}

/// Unweighted scan. Each iteration takes four rounds: candidates (vertices
/// with more than `threshold` residual neighbors) announce themselves,
/// neighbors relay the largest candidate id they heard, a candidate that is
/// the largest in its two-hop ball fires and recruits its residual
/// neighbors, and recruits tell their neighbors they left. After
/// `⌊n/(threshold+1)⌋` iterations no candidate can remain, since every
/// firing removes more than `threshold` vertices.
struct CenterScan {
    id: usize,
    neighbors: Vec<usize>,
    threshold: usize,
    iterations: usize,
    step: usize,
    in_residual: bool,
    neighbor_in_residual: Vec<bool>,
    may_fire: bool,
    candidate: bool,
    ball_max: Option<usize>,
    joined: Option<(usize, usize)>,
    done: bool,
}

impl CenterScan {
    fn residual_degree(&self) -> usize {
        self.neighbor_in_residual.iter().filter(|&&r| r).count()
    }

    fn mark_left(&mut self, ctx: &StepContext<'_>) {
        for (from, _) in ctx.inbox() {
            if let Ok(i) = self.neighbors.binary_search(from) {
                self.neighbor_in_residual[i] = false;
            }
        }
    }
}

impl NodeProgram for CenterScan {
    type Output = (NodeKnowledge, Option<(usize, usize)>);

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        let (iteration, slot) = (self.step / 4, self.step % 4);
        self.step += 1;
        if iteration == self.iterations {
            self.mark_left(ctx);
            self.done = true;
            return;
        }
        match slot {
            0 => {
                self.mark_left(ctx);
                self.candidate = self.may_fire && self.residual_degree() > self.threshold;
                if self.candidate {
                    ctx.broadcast(&Message::from_words(&[self.id as u64]));
                }
            }
            1 => {
                let heard = ctx.inbox().iter().map(|(_, m)| m.word(0) as usize);
                self.ball_max = heard.chain(self.candidate.then_some(self.id)).max();
                if let Some(m) = self.ball_max {
                    ctx.broadcast(&Message::from_words(&[m as u64 + 1]));
                }
            }
            2 => {
                let two_hop_max = ctx.inbox().iter().map(|(_, m)| m.word(0) as usize - 1).chain(self.ball_max).max();
                if self.candidate && two_hop_max == Some(self.id) {
                    for (i, &v) in self.neighbors.iter().enumerate() {
                        if self.neighbor_in_residual[i] {
                            ctx.send(v, Message::from_words(&[1]));
                        }
                    }
                    self.may_fire = false;
                }
            }
            _ => {
                if let Some((center, _)) = ctx.inbox().first() {
                    debug_assert!(self.in_residual, "only residual vertices are recruited");
                    debug_assert_eq!(ctx.inbox().len(), 1, "firing centers are four hops apart");
                    self.in_residual = false;
                    self.joined = Some((iteration, *center));
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
        (knowledge, self.joined)
    }
}

pub(crate) fn center_scan(net: &mut Network<'_>, threshold: usize) -> Result<Phase1Outcome> {
    let iterations = net.graph().n() / (threshold + 1);
    let out = net.run(|info: NodeInfo<'_>| CenterScan {
        id: info.id,
        neighbors: info.neighbors.to_vec(),
        threshold,
        iterations,
        step: 0,
        in_residual: true,
        neighbor_in_residual: vec![true; info.neighbors.len()],
        may_fire: true,
        candidate: false,
        ball_max: None,
        joined: None,
        done: false,
    })?;
    let (knowledge, joined): (Vec<_>, Vec<_>) = out.into_iter().unzip();
    Ok(Phase1Outcome { knowledge, batches: batches_from(&joined) })
}

/// Encodes a nonnegative rational as four words: numerator and denominator,
/// two words each. Values that do not fit produce an oversized top word,
/// which the simulator rejects as an encoding error.
pub(crate) fn encode_weight(w: &Rational, bits: u32) -> impl Iterator<Item = u64> {
    split_words(*w.numer() as u64, bits, 2).chain(split_words(*w.denom() as u64, bits, 2))
}

pub(crate) fn decode_weight(words: &[u64], bits: u32) -> Rational {
    Rational::new(join_words(&words[..2], bits) as i64, join_words(&words[2..4], bits) as i64)
}

/// Weight class of `w` relative to the smallest positive neighbor weight:
/// the `i` with `base·2^i ≤ w < base·2^(i+1)`.
pub(crate) fn weight_class(w: &Rational, base: &Rational) -> usize {
    let mut i = 0;
    let mut upper = *base * Rational::from_integer(2);
    while *w >= upper {
        upper *= Rational::from_integer(2);
        i += 1;
    }
    i
}

/// Residual neighbors that a center selects: every class `i` with
/// `max·(1+ε) ≤ total·ε` over the class's residual members.
pub(crate) fn selected_classes(
    neighbor_weights: &[Rational],
    neighbor_in_residual: &[bool],
    eps: &Rational,
) -> Vec<usize> {
    let zero = Rational::from_integer(0);
    let Some(base) = neighbor_weights.iter().filter(|w| **w > zero).min().copied() else {
        return Vec::new();
    };
    let mut classes: std::collections::BTreeMap<usize, (Rational, Rational, Vec<usize>)> = Default::default();
    for (i, w) in neighbor_weights.iter().enumerate() {
        if !neighbor_in_residual[i] || *w == zero {
            continue;
        }
        let entry = classes.entry(weight_class(w, &base)).or_insert((zero, zero, Vec::new()));
        entry.0 = entry.0.max(*w);
        entry.1 += *w;
        entry.2.push(i);
    }
    let one = Rational::from_integer(1);
    classes
        .into_values()
        .filter(|(max, total, _)| *max * (one + *eps) <= *total * *eps)
        .flat_map(|(_, _, members)| members)
        .collect()
}

/// Weighted scan: one round to exchange weights, then two rounds per vertex
/// in id order. In its slot a center selects every qualifying weight class
/// of its residual neighborhood; recruits leave and notify their neighbors.
struct ClassScan {
    id: usize,
    n: usize,
    neighbors: Vec<usize>,
    eps: Rational,
    weight: Rational,
    step: usize,
    in_residual: bool,
    neighbor_in_residual: Vec<bool>,
    neighbor_weights: Vec<Rational>,
    joined: Option<(usize, usize)>,
    done: bool,
}

impl ClassScan {
    fn mark_left(&mut self, ctx: &StepContext<'_>) {
        for (from, _) in ctx.inbox() {
            if let Ok(i) = self.neighbors.binary_search(from) {
                self.neighbor_in_residual[i] = false;
            }
        }
    }
}

impl NodeProgram for ClassScan {
    type Output = (NodeKnowledge, Option<(usize, usize)>);

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        let step = self.step;
        self.step += 1;
        if step == 0 {
            let msg: Message = encode_weight(&self.weight, ctx.word_bits()).collect();
            ctx.broadcast(&msg);
            return;
        }
        if step == 1 {
            let bits = ctx.word_bits();
            for (from, msg) in ctx.inbox() {
                let i = self.neighbors.binary_search(from).expect("message from a neighbor");
                self.neighbor_weights[i] = decode_weight(msg.words(), bits);
                self.neighbor_in_residual[i] = self.neighbor_weights[i] > Rational::from_integer(0);
            }
        }
        let (center, second) = ((step - 1) / 2, (step - 1) % 2 == 1);
        if center == self.n {
            self.mark_left(ctx);
            self.done = true;
            return;
        }
        if !second {
            if step > 1 {
                self.mark_left(ctx);
            }
            if center == self.id {
                for i in selected_classes(&self.neighbor_weights, &self.neighbor_in_residual, &self.eps) {
                    ctx.send(self.neighbors[i], Message::from_words(&[1]));
                }
            }
        } else if let Some((from, _)) = ctx.inbox().first() {
            self.in_residual = false;
            self.joined = Some((center, *from));
            ctx.broadcast(&Message::from_words(&[0]));
        }
    }

    fn is_halted(&self) -> bool {
        self.done
    }

    fn into_output(self) -> Self::Output {
        let knowledge = NodeKnowledge {
            in_residual: self.in_residual,
            neighbor_in_residual: self.neighbor_in_residual,
            weight: Some(self.weight),
            neighbor_weights: self.neighbor_weights,
        };
        (knowledge, self.joined)
    }
}

pub(crate) fn class_scan(net: &mut Network<'_>, eps: Rational) -> Result<Phase1Outcome> {
    let g = net.graph();
    let out = net.run(|info: NodeInfo<'_>| {
        let weight = g.weight(info.id);
        ClassScan {
            id: info.id,
            n: info.n,
            neighbors: info.neighbors.to_vec(),
            eps,
            weight,
            step: 0,
            // Zero-weight vertices enter the cover for free.
            in_residual: weight > Rational::from_integer(0),
            neighbor_in_residual: vec![true; info.neighbors.len()],
            neighbor_weights: vec![Rational::from_integer(0); info.neighbors.len()],
            joined: None,
            done: false,
        }
    })?;
    let (knowledge, joined): (Vec<_>, Vec<_>) = out.into_iter().unzip();
    Ok(Phase1Outcome { knowledge, batches: batches_from(&joined) })
}
