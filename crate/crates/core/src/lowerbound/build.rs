use crate::graph::Graph;
use crate::rational::Rational;

use super::{Gadget, GadgetKind, Side};

/// Incremental construction of a labeled, partitioned graph.
#[derive(Default)]
pub(crate) struct Builder {
    pub labels: Vec<String>,
    pub sides: Vec<Side>,
    pub weights: Vec<Rational>,
    pub edges: Vec<(usize, usize)>,
    pub gadgets: Vec<Gadget>,
    pub x_edges: Vec<(usize, usize)>,
    pub y_edges: Vec<(usize, usize)>,
}

impl Builder {
    pub fn vertex(&mut self, label: impl Into<String>, side: Side) -> usize {
        self.weighted(label, side, Rational::from_integer(1))
    }

    pub fn weighted(&mut self, label: impl Into<String>, side: Side, weight: Rational) -> usize {
        self.labels.push(label.into());
        self.sides.push(side);
        self.weights.push(weight);
        self.labels.len() - 1
    }

    pub fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u.min(v), u.max(v)));
    }

    /// Path `[1..=len]` whose head is joined to every vertex in `attached`.
    pub fn path_gadget(&mut self, name: &str, len: usize, attached: &[usize], side: Side, kind: GadgetKind) -> usize {
        let path: Vec<usize> = (1..=len).map(|i| self.vertex(format!("{name}[{i}]"), side)).collect();
        for w in path.windows(2) {
            self.edge(w[0], w[1]);
        }
        for &a in attached {
            self.edge(path[0], a);
        }
        self.gadgets.push(Gadget { kind, name: name.to_string(), path, attached: attached.to_vec() });
        self.gadgets.len() - 1
    }

    /// Side for a vertex hanging off `u` and `v`: Alice only if both are.
    pub fn side_of(&self, u: usize, v: usize) -> Side {
        if self.sides[u] == Side::Alice && self.sides[v] == Side::Alice {
            Side::Alice
        } else {
            Side::Bob
        }
    }

    pub fn graph(&self, weighted: bool) -> Graph {
        let g = Graph::from_edges_dedup(self.labels.len(), self.edges.iter().copied())
            .expect("builder produces valid edges");
        if weighted {
            g.with_weights(self.weights.clone()).expect("builder weights are non-negative")
        } else {
            g
        }
    }
}
