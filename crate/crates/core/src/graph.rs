//! Undirected simple graphs with optional rational vertex weights.

use std::collections::VecDeque;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("negative weight on vertex {0}")]
    NegativeWeight(usize),
}

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    weights: Option<Vec<Rational>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], weights: None }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self { adj, weights: None })
    }

    /// Same as [`Graph::from_edges`] but silently drops repeated edges.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        list.sort_unstable();
        list.dedup();
        Self::from_edges(n, list)
    }

    /// Attaches weights, one per vertex, all nonnegative.
    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self, GraphError> {
        if weights.len() != self.n() {
            return Err(GraphError::WeightCount { expected: self.n(), got: weights.len() });
        }
        if let Some(v) = weights.iter().position(|w| w.is_negative()) {
            return Err(GraphError::NegativeWeight(v));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn without_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// Weight of `v`; 1 in the unweighted case.
    pub fn weight(&self, v: usize) -> Rational {
        match &self.weights {
            Some(w) => w[v],
            None => Rational::one(),
        }
    }

    /// Total weight (or cardinality) of a vertex set.
    pub fn set_value(&self, members: &[usize]) -> Rational {
        match &self.weights {
            Some(w) => rational::sum(members.iter().map(|&v| &w[v])),
            None => Rational::from_integer(members.len() as i64),
        }
    }

    pub fn check_vertices(&self, members: &[usize]) -> Result<(), GraphError> {
        match members.iter().find(|&&v| v >= self.n()) {
            Some(&v) => Err(GraphError::OutOfRange { vertex: v, n: self.n() }),
            None => Ok(()),
        }
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// True iff `u != v` and the two vertices are at distance at most two.
    pub fn within_two(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        if self.has_edge(u, v) {
            return true;
        }
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Sorted list of vertices at distance 1 or 2 from `v`, excluding `v`.
    pub fn two_hop_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.adj[v].clone();
        for &w in &self.adj[v] {
            out.extend_from_slice(&self.adj[w]);
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&u| u != v);
        out
    }

    /// The square `G²`: same vertices and weights, edges between vertices at
    /// distance at most two.
    pub fn square(&self) -> Graph {
        let adj = (0..self.n()).map(|v| self.two_hop_neighbors(v)).collect();
        Graph { adj, weights: self.weights.clone() }
    }

    /// Subgraph keeping all vertex ids but only edges with both ends in `keep`.
    pub fn induced_on(&self, keep: &[bool]) -> Graph {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, list)| if keep[u] { list.iter().copied().filter(|&v| keep[v]).collect() } else { Vec::new() })
            .collect();
        Graph { adj, weights: self.weights.clone() }
    }

    /// Number of vertices with at least one incident edge.
    pub fn non_isolated(&self) -> usize {
        self.adj.iter().filter(|l| !l.is_empty()).count()
    }
}

/// Lazy view of `G²` over a borrowed base graph.
#[derive(Clone, Debug)]
pub struct SquareView<'g> {
    base: &'g Graph,
    materialized: Option<Graph>,
}

impl<'g> SquareView<'g> {
    pub fn new(base: &'g Graph) -> Self {
        Self { base, materialized: None }
    }

    pub fn materialized(base: &'g Graph) -> Self {
        Self { base, materialized: Some(base.square()) }
    }

    pub fn base(&self) -> &Graph {
        self.base
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        match &self.materialized {
            Some(sq) => sq.has_edge(u, v),
            None => self.base.within_two(u, v),
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        match &self.materialized {
            Some(sq) => sq.neighbors(v).to_vec(),
            None => self.base.two_hop_neighbors(v),
        }
    }

    pub fn to_graph(&self) -> Graph {
        self.materialized.clone().unwrap_or_else(|| self.base.square())
    }
}
