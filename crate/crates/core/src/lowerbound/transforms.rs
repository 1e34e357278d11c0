//! Per-edge gadget transforms used by the centralized hardness reductions.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;

use super::{Gadget, GadgetKind};

fn extend_weights(g: &Graph, h: Graph) -> Graph {
    match g.weights() {
        Some(w) => {
            let mut w = w.to_vec();
            w.resize(h.n(), Rational::from_integer(1));
            h.with_weights(w).expect("weights are non-negative")
        }
        None => h,
    }
}

/// Hangs a path of `length` new vertices off every edge, with the head
/// adjacent to both endpoints. New vertices follow the original ones.
pub fn dangling_transform(g: &Graph, length: usize, delete_original: bool) -> Graph {
    dangling_transform_with_gadgets(g, length, delete_original).0
}

pub fn dangling_transform_with_gadgets(g: &Graph, length: usize, delete_original: bool) -> (Graph, Vec<Gadget>) {
    let mut edges = Vec::new();
    let mut gadgets = Vec::new();
    let mut next = g.n();
    for (u, v) in g.edges() {
        if !delete_original {
            edges.push((u, v));
        }
        if length == 0 {
            continue;
        }
        let path: Vec<usize> = (next..next + length).collect();
        next += length;
        edges.push((u, path[0]));
        edges.push((v, path[0]));
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        gadgets.push(Gadget { kind: GadgetKind::Dangling, name: format!("DP[{u},{v}]"), path, attached: vec![u, v] });
    }
    let h = Graph::from_edges(next, edges).expect("fresh gadget vertices");
    (extend_weights(g, h), gadgets)
}

/// One head per edge (adjacent to both endpoints, edge deleted), a second
/// vertex per edge, and one shared tail `[3]-[4]-[5]` joined to every second
/// vertex.
pub fn merged_dangling_transform(g: &Graph) -> Result<Graph> {
    Ok(merged_dangling_transform_with_gadgets(g)?.0)
}

pub fn merged_dangling_transform_with_gadgets(g: &Graph) -> Result<(Graph, Vec<Gadget>)> {
    if g.m() == 0 {
        return Err(Error::Domain("merged transform needs at least one edge".into()));
    }
    let n = g.n();
    let tail = [n, n + 1, n + 2];
    let mut edges = vec![(tail[0], tail[1]), (tail[1], tail[2])];
    let mut gadgets = Vec::new();
    let mut next = n + 3;
    for (u, v) in g.edges() {
        let (h1, h2) = (next, next + 1);
        next += 2;
        edges.extend([(u, h1), (v, h1), (h1, h2), (h2, tail[0])]);
        gadgets.push(Gadget {
            kind: GadgetKind::Merged,
            name: format!("DP[{u},{v}]"),
            path: vec![h1, h2, tail[0], tail[1], tail[2]],
            attached: vec![u, v],
        });
    }
    let h = Graph::from_edges(next, edges).expect("fresh gadget vertices");
    Ok((extend_weights(g, h), gadgets))
}
