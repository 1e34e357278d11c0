//! Centralized 5/3-approximation for vertex cover on `G²`, and the
//! distributed hybrid that runs it at the Phase II leader.
//!
//! Part 1 takes vertex-disjoint triangles of the square greedily; what
//! remains is triangle-free and its edges of `G` form a matching. Part 2
//! eliminates vertices of degree at most three with local rules whose picks
//! can each be charged to disjoint edges. Part 3 finishes with a maximal
//! matching on a residual of minimum degree four.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::Result;
use crate::exact::adjacency_bitsets;
use crate::graph::Graph;
use crate::mvc::{DistributedRun, RunConfig};
use crate::sim::{Model, RoundStats};
use crate::solution::{ProblemKind, Solution};

/// Vertices and edges of the residual square at a checkpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// One application of a low-degree rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDegreeStep {
    pub pivot: usize,
    pub degree: usize,
    pub taken: Vec<usize>,
    /// Pairwise disjoint edges among the touched vertices; any cover needs
    /// one endpoint of each.
    pub witness_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTrace {
    /// Cover vertices added by each part.
    pub taken: [Vec<usize>; 3],
    /// Vertices that left the residual graph during each part.
    pub removed: [Vec<usize>; 3],
    /// Residual after the triangle part.
    pub after_triangles: Snapshot,
    /// Residual after the low-degree part.
    pub after_low_degree: Snapshot,
    pub low_degree_steps: Vec<LowDegreeStep>,
    /// Low-degree steps whose neighbor choices did not exist; zero whenever
    /// the residual really is triangle-free with the stated minimum degree.
    pub precondition_failures: usize,
}

impl PhaseTrace {
    pub fn sizes(&self) -> [usize; 3] {
        [self.taken[0].len(), self.taken[1].len(), self.taken[2].len()]
    }

    /// Checks the structural facts the 5/3 analysis relies on, with `base`
    /// the graph whose square was processed.
    pub fn check_invariants(&self, base: &Graph) -> std::result::Result<(), String> {
        let r = &self.after_triangles;
        let adj: std::collections::BTreeSet<(usize, usize)> = r.edges.iter().copied().collect();
        for &(u, v) in &r.edges {
            for &w in &r.vertices {
                if w > v && adj.contains(&(u, w)) && adj.contains(&(v, w)) {
                    return Err(format!("triangle {{{u}, {v}, {w}}} survives the triangle part"));
                }
            }
        }
        let mut red_degree = vec![0usize; base.n()];
        let mut blue = 0usize;
        for &(u, v) in &r.edges {
            if base.has_edge(u, v) {
                red_degree[u] += 1;
                red_degree[v] += 1;
            } else {
                blue += 1;
            }
        }
        if let Some(v) = red_degree.iter().position(|&d| d > 1) {
            return Err(format!("vertex {v} has {} red edges", red_degree[v]));
        }
        let s1 = self.taken[0].len();
        if s1 < blue {
            return Err(format!("s1 = {s1} < {blue} blue edges"));
        }
        let rp = &self.after_low_degree;
        let mut degree = vec![0usize; base.n()];
        for &(u, v) in &rp.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some(&v) = rp.vertices.iter().find(|&&v| degree[v] < 4) {
            return Err(format!("vertex {v} has degree {} after the low-degree part", degree[v]));
        }
        if 2 * s1 < 3 * rp.vertices.len() {
            return Err(format!("s1 = {s1} < 3/2 · {}", rp.vertices.len()));
        }
        if self.precondition_failures > 0 {
            return Err(format!("{} low-degree steps lacked their neighbor choices", self.precondition_failures));
        }
        Ok(())
    }
}

struct Residual {
    adj: Vec<BitSet>,
    alive: BitSet,
    trace: PhaseTrace,
}

impl Residual {
    fn degree(&self, v: usize) -> usize {
        self.adj[v].intersection_len(&self.alive)
    }

    fn live_neighbors(&self, v: usize) -> BitSet {
        self.adj[v].intersection(&self.alive)
    }

    /// Moves `cover` into the solution and drops vertices left isolated.
    fn take(&mut self, part: usize, cover: &[usize]) {
        let mut touched = BitSet::new(self.adj.len());
        for &v in cover {
            if self.alive.contains(v) {
                self.alive.remove(v);
                self.trace.taken[part].push(v);
                self.trace.removed[part].push(v);
                touched.union_with(&self.adj[v]);
            }
        }
        for w in touched.intersection(&self.alive).iter() {
            if self.degree(w) == 0 {
                self.alive.remove(w);
                self.trace.removed[part].push(w);
            }
        }
    }

    fn snapshot(&self) -> Snapshot {
        let vertices: Vec<usize> = self.alive.iter().collect();
        let edges = vertices
            .iter()
            .flat_map(|&u| self.live_neighbors(u).iter().filter(move |&v| v > u).map(move |v| (u, v)).collect::<Vec<_>>())
            .collect();
        Snapshot { vertices, edges }
    }

    fn triangles(&mut self) {
        for u in 0..self.adj.len() {
            while self.alive.contains(u) {
                let found = self.live_neighbors(u).iter().filter(|&v| v > u).find_map(|v| {
                    let common = self.live_neighbors(u).intersection(&self.adj[v]);
                    common.iter().find(|&w| w > v).map(|w| (v, w))
                });
                match found {
                    Some((v, w)) => self.take(0, &[u, v, w]),
                    None => break,
                }
            }
        }
    }

    fn smallest_neighbor_except(&self, v: usize, excluded: &[usize]) -> Option<usize> {
        self.live_neighbors(v).iter().find(|w| !excluded.contains(w))
    }

    fn low_degree(&mut self) {
        loop {
            let Some((degree, x)) = self.alive.iter().map(|v| (self.degree(v), v)).min() else {
                return;
            };
            if degree > 3 {
                return;
            }
            let ys: Vec<usize> = self.live_neighbors(x).iter().collect();
            let (taken, witness_edges) = match degree {
                1 => (vec![ys[0]], vec![(x, ys[0])]),
                2 => match self.smallest_neighbor_except(ys[0], &[x]) {
                    Some(z) => (vec![z, ys[0], ys[1]], vec![(x, ys[1]), (ys[0], z)]),
                    None => {
                        self.trace.precondition_failures += 1;
                        (ys.clone(), vec![(x, ys[0])])
                    }
                },
                _ => {
                    let z1 = self.smallest_neighbor_except(ys[0], &[x, ys[0], ys[1], ys[2]]);
                    let z2 = z1.and_then(|z1| self.smallest_neighbor_except(ys[1], &[x, ys[0], ys[1], ys[2], z1]));
                    match (z1, z2) {
                        (Some(z1), Some(z2)) => (
                            vec![ys[0], ys[1], ys[2], z1, z2],
                            vec![(ys[0], z1), (ys[1], z2), (x, ys[2])],
                        ),
                        _ => {
                            self.trace.precondition_failures += 1;
                            (ys.clone(), vec![(x, ys[0])])
                        }
                    }
                }
            };
            self.take(1, &taken);
            let mut taken = taken;
            taken.sort_unstable();
            self.trace.low_degree_steps.push(LowDegreeStep { pivot: x, degree, taken, witness_edges });
        }
    }

    fn matching(&mut self) {
        let mut matched = Vec::new();
        let mut free = self.alive.clone();
        for u in self.alive.iter() {
            if !free.contains(u) {
                continue;
            }
            if let Some(v) = self.adj[u].intersection(&free).iter().find(|&v| v > u) {
                free.remove(u);
                free.remove(v);
                matched.extend([u, v]);
            }
        }
        for v in self.alive.iter() {
            self.trace.removed[2].push(v);
        }
        matched.sort_unstable();
        self.trace.taken[2] = matched;
        self.alive = BitSet::new(self.adj.len());
    }
}

/// Runs the three parts on `base²` restricted to `active`. Edges of `base`
/// are the red edges of the analysis. Returns the cover and the trace.
pub fn five_thirds_on(base: &Graph, active: &[bool]) -> (Vec<usize>, PhaseTrace) {
    let square = base.square().induced_on(active);
    let adj = adjacency_bitsets(&square);
    let mut alive = BitSet::new(base.n());
    let mut trace = PhaseTrace::default();
    for v in 0..base.n() {
        if active[v] {
            if square.degree(v) > 0 {
                alive.insert(v);
            } else {
                trace.removed[0].push(v);
            }
        }
    }
    let mut state = Residual { adj, alive, trace };
    state.triangles();
    state.trace.after_triangles = state.snapshot();
    state.low_degree();
    state.trace.after_low_degree = state.snapshot();
    state.matching();
    let mut trace = state.trace;
    for part in &mut trace.removed {
        part.sort_unstable();
    }
    for part in &mut trace.taken {
        part.sort_unstable();
    }
    let mut cover: Vec<usize> = trace.taken.iter().flatten().copied().collect();
    cover.sort_unstable();
    (cover, trace)
}

/// 5/3-approximate vertex cover of `g²` in polynomial time.
pub fn g2mvc_53(g: &Graph) -> (Solution, PhaseTrace) {
    let g = g.clone().without_weights();
    let (cover, trace) = five_thirds_on(&g, &vec![true; g.n()]);
    (Solution::new(&g, ProblemKind::Vc2, cover), trace)
}

/// Phase I with `ε = 1/2`, after which the leader runs the 5/3 algorithm
/// on the residual square instead of an exact solver.
pub fn g2mvc_hybrid(g: &Graph, model: Model) -> Result<(Solution, RoundStats)> {
    let run = g2mvc_hybrid_traced(g, &RunConfig::with_model(model))?;
    Ok((run.solution, run.stats))
}

pub fn g2mvc_hybrid_traced(g: &Graph, cfg: &RunConfig) -> Result<DistributedRun> {
    crate::mvc::hybrid_traced(g, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, star};

    #[test]
    fn triangle_takes_three() {
        let (sol, trace) = g2mvc_53(&complete(3));
        assert_eq!(sol.members, vec![0, 1, 2]);
        assert_eq!(trace.sizes(), [3, 0, 0]);
    }

    #[test]
    fn path_of_four() {
        // P4² has triangles {0,1,2} and {1,2,3}; the first one is taken and 3
        // is left isolated.
        let (sol, trace) = g2mvc_53(&path(4));
        assert_eq!(sol.members, vec![0, 1, 2]);
        assert_eq!(trace.removed[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn single_edge_uses_degree_one_rule() {
        let (sol, trace) = g2mvc_53(&path(2));
        assert_eq!(sol.members, vec![1]);
        assert_eq!(trace.low_degree_steps.len(), 1);
        assert_eq!(trace.low_degree_steps[0].pivot, 0);
    }

    #[test]
    fn six_cycle_uses_degree_two_rule_after_triangles() {
        let g = cycle(6);
        let (sol, trace) = g2mvc_53(&g);
        assert!(crate::is_feasible(&g, ProblemKind::Vc2, &sol.members).unwrap());
        assert!(trace.check_invariants(&g).is_ok());
    }

    #[test]
    fn invariants_hold_on_small_families() {
        for g in [path(7), cycle(8), star(5), complete(6), cycle(11)] {
            let (sol, trace) = g2mvc_53(&g);
            assert!(crate::is_feasible(&g, ProblemKind::Vc2, &sol.members).unwrap());
            trace.check_invariants(&g).unwrap();
            let removed: usize = trace.removed.iter().map(Vec::len).sum();
            assert_eq!(removed, g.n());
        }
    }
}
