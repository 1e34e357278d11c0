//! Phase II: gather the edges around the residual set at a leader, solve
//! the residual square there and tell every node the answer.

use crate::error::Result;
use crate::graph::Graph;
use crate::rational::Rational;
use crate::sim::primitives::{build_bfs_tree, convergecast, downcast, scatter_flags, BfsTree};
use crate::sim::{Message, ModelKind, Network};

use super::phase1::{decode_weight, encode_weight, NodeKnowledge};

const EDGE: u64 = 0;
const WEIGHT: u64 = 1;

/// What the leader reconstructs.
pub(crate) struct ResidualView {
    /// `G²[U]`, weighted when the input is.
    pub h: Graph,
    /// The gathered edges as a graph on all vertex ids.
    pub edges_graph: Graph,
    pub in_residual: Vec<bool>,
}

pub(crate) struct GatherOutcome {
    pub in_cover: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
    pub residual_cover: Vec<usize>,
}

/// Items a node contributes: each gathered edge is reported once, by its
/// smaller endpoint, with both endpoints' residual flags.
fn items_of(v: usize, neighbors: &[usize], k: &NodeKnowledge, weighted: bool, bits: u32) -> Vec<Message> {
    let mut items = Vec::new();
    for (i, &u) in neighbors.iter().enumerate() {
        if u > v && (k.in_residual || k.neighbor_in_residual[i]) {
            let flags = u64::from(k.in_residual) | (u64::from(k.neighbor_in_residual[i]) << 1);
            items.push(Message::from_words(&[EDGE, v as u64, u as u64, flags]));
        }
    }
    if weighted && k.in_residual {
        let mut msg = Message::from_words(&[WEIGHT, v as u64]);
        msg.extend(encode_weight(&k.weight.expect("weighted run"), bits));
        items.push(msg);
    }
    items
}

pub(crate) fn gather_and_solve<S>(
    net: &mut Network<'_>,
    knowledge: &[NodeKnowledge],
    weighted: bool,
    solve: S,
) -> Result<GatherOutcome>
where
    S: FnOnce(&ResidualView) -> Result<Vec<usize>>,
{
    let g = net.graph();
    let n = g.n();
    let bits = net.word_bits();
    let clique = net.model().kind == ModelKind::Clique;
    let tree = if clique { BfsTree::direct(n, 0) } else { build_bfs_tree(net)? };
    let items: Vec<Vec<Message>> =
        (0..n).map(|v| items_of(v, g.neighbors(v), &knowledge[v], weighted, bits)).collect();
    let gathered = convergecast(net, &tree, items)?;

    let mut edges = Vec::new();
    let mut in_residual = vec![false; n];
    let mut weights = vec![Rational::from_integer(0); n];
    for item in &gathered {
        let w = item.words();
        match w[0] {
            EDGE => {
                let (a, b) = (w[1] as usize, w[2] as usize);
                edges.push((a, b));
                in_residual[a] |= w[3] & 1 == 1;
                in_residual[b] |= w[3] & 2 == 2;
            }
            _ => {
                let v = w[1] as usize;
                in_residual[v] = true;
                weights[v] = decode_weight(&w[2..6], bits);
            }
        }
    }
    edges.sort_unstable();
    let residual: Vec<usize> = (0..n).filter(|&v| in_residual[v]).collect();
    let mut h = super::build_h_from_f(n, &edges, &residual);
    if weighted {
        h = h.with_weights(weights)?;
    }
    let edges_graph = Graph::from_edges(n, edges.iter().copied())?;
    let view = ResidualView { h, edges_graph, in_residual };
    let mut residual_cover = solve(&view)?;
    residual_cover.sort_unstable();

    let in_cover = if clique {
        let mut flags = vec![false; n];
        for &v in &residual_cover {
            flags[v] = true;
        }
        scatter_flags(net, tree.leader, flags)?
    } else {
        let announced: Vec<Message> = residual_cover.iter().map(|&v| Message::from_words(&[v as u64])).collect();
        let heard = downcast(net, &tree, announced)?;
        (0..n).map(|v| heard[v].iter().any(|m| m.word(0) == v as u64)).collect()
    };
    Ok(GatherOutcome { in_cover, edges, residual_cover })
}
