//! Solutions tagged with their problem kind, and feasibility checks.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};
use crate::rational::Rational;

/// Which problem a vertex set answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Vertex cover of `G²`.
    Vc2,
    /// Dominating set of `G²`.
    Ds2,
    /// Vertex cover of `G`.
    Vc1,
    /// Dominating set of `G`.
    Ds1,
}

impl ProblemKind {
    pub fn on_square(self) -> bool {
        matches!(self, ProblemKind::Vc2 | ProblemKind::Ds2)
    }

    pub fn is_cover(self) -> bool {
        matches!(self, ProblemKind::Vc1 | ProblemKind::Vc2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Vc2 => "vc2",
            ProblemKind::Ds2 => "ds2",
            ProblemKind::Vc1 => "vc1",
            ProblemKind::Ds1 => "ds1",
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vc2" => Ok(ProblemKind::Vc2),
            "ds2" => Ok(ProblemKind::Ds2),
            "vc1" => Ok(ProblemKind::Vc1),
            "ds1" => Ok(ProblemKind::Ds1),
            other => Err(format!("unknown problem kind `{other}`")),
        }
    }
}

/// A vertex set with its kind and value (cardinality or total weight).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub kind: ProblemKind,
    pub members: Vec<usize>,
    pub value: Rational,
}

impl Solution {
    /// Sorts and deduplicates `members` and computes the value on `g`.
    pub fn new(g: &Graph, kind: ProblemKind, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let value = g.set_value(&members);
        Self { kind, members, value }
    }

    pub fn from_mask(g: &Graph, kind: ProblemKind, mask: &[bool]) -> Self {
        Self::new(g, kind, (0..mask.len()).filter(|&v| mask[v]).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}

/// Checks whether `members` covers every edge (cover kinds) or dominates
/// every vertex (dominating kinds) of `g` or of `g²`.
pub fn is_feasible(g: &Graph, kind: ProblemKind, members: &[usize]) -> Result<bool, GraphError> {
    g.check_vertices(members)?;
    let mut chosen = vec![false; g.n()];
    for &v in members {
        chosen[v] = true;
    }
    let ok = (0..g.n()).all(|v| {
        let nbrs: Vec<usize> = if kind.on_square() { g.two_hop_neighbors(v) } else { g.neighbors(v).to_vec() };
        if kind.is_cover() {
            chosen[v] || nbrs.iter().all(|&u| chosen[u])
        } else {
            chosen[v] || nbrs.iter().any(|&u| chosen[u])
        }
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};

    #[test]
    fn c5_square_needs_four_cover_vertices() {
        let g = cycle(5);
        assert!(is_feasible(&g, ProblemKind::Vc2, &[0, 1, 2, 3]).unwrap());
        assert!(is_feasible(&g, ProblemKind::Vc2, &[1, 2, 3, 4]).unwrap());
        assert!(!is_feasible(&g, ProblemKind::Vc2, &[0, 2, 4]).unwrap());
        assert!(!is_feasible(&g, ProblemKind::Vc2, &[0, 1, 2]).unwrap());
        assert!(is_feasible(&g, ProblemKind::Vc1, &[0, 2, 4]).unwrap());
    }

    #[test]
    fn domination_on_graph_and_square() {
        assert!(is_feasible(&Graph::empty(1), ProblemKind::Ds2, &[0]).unwrap());
        assert!(!is_feasible(&Graph::empty(1), ProblemKind::Ds2, &[]).unwrap());
        let p5 = path(5);
        assert!(is_feasible(&p5, ProblemKind::Ds2, &[2]).unwrap());
        assert!(!is_feasible(&p5, ProblemKind::Ds1, &[2]).unwrap());
        assert!(is_feasible(&p5, ProblemKind::Ds1, &[1, 3]).unwrap());
    }

    #[test]
    fn out_of_range_is_an_input_error() {
        assert!(matches!(
            is_feasible(&path(3), ProblemKind::Vc2, &[3]),
            Err(GraphError::OutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn value_tracks_weights() {
        let g = path(3).with_weights(vec![Rational::new(1, 2), Rational::from_integer(2), Rational::from_integer(3)]).unwrap();
        let s = Solution::new(&g, ProblemKind::Vc1, vec![2, 0, 0]);
        assert_eq!(s.members, vec![0, 2]);
        assert_eq!(s.value, Rational::new(7, 2));
    }
}
