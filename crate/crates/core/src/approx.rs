//! Greedy maximal-matching 2-approximation for vertex cover.

use crate::graph::Graph;
use crate::solution::{ProblemKind, Solution};

/// Both endpoints of a maximal matching built greedily in lexicographic edge
/// order. Feasible and at most twice the optimum.
pub fn matching_2approx(g: &Graph) -> Solution {
    let mut matched = vec![false; g.n()];
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
        }
    }
    Solution::from_mask(g, ProblemKind::Vc1, &matched)
}
