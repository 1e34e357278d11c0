//! Exact minimum (weighted) vertex cover and dominating set by branch and
//! bound. These are the ground-truth oracles for every approximation test.

mod ds;
mod vc;

use num_integer::Integer;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solution::{ProblemKind, Solution};

/// Size guard for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    /// Maximum number of non-isolated vertices accepted.
    pub vertex_cap: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self { vertex_cap: 64 }
    }
}

impl ExactConfig {
    pub fn with_cap(vertex_cap: usize) -> Self {
        Self { vertex_cap }
    }
}

/// Minimum vertex cover of `g` (minimum weight when `g` is weighted).
pub fn exact_mvc(g: &Graph) -> Result<Solution> {
    exact_mvc_with(g, &ExactConfig::default())
}

pub fn exact_mvc_with(g: &Graph, cfg: &ExactConfig) -> Result<Solution> {
    let members = mvc_members(g, cfg)?;
    Ok(Solution::new(g, ProblemKind::Vc1, members))
}

/// Minimum vertex cover of `g²`, tagged as a `G²` solution of `g`.
pub fn exact_mvc_square(g: &Graph, cfg: &ExactConfig) -> Result<Solution> {
    let members = mvc_members(&g.square(), cfg)?;
    Ok(Solution::new(g, ProblemKind::Vc2, members))
}

/// Minimum dominating set of `g` (minimum weight when `g` is weighted).
pub fn exact_mds(g: &Graph) -> Result<Solution> {
    exact_mds_with(g, &ExactConfig::default())
}

pub fn exact_mds_with(g: &Graph, cfg: &ExactConfig) -> Result<Solution> {
    let members = mds_members(g, cfg)?;
    Ok(Solution::new(g, ProblemKind::Ds1, members))
}

/// Minimum dominating set of `g²`, tagged as a `G²` solution of `g`.
pub fn exact_mds_square(g: &Graph, cfg: &ExactConfig) -> Result<Solution> {
    let members = mds_members(&g.square(), cfg)?;
    Ok(Solution::new(g, ProblemKind::Ds2, members))
}

fn check_cap(g: &Graph, cfg: &ExactConfig) -> Result<()> {
    let vertices = g.non_isolated();
    if vertices > cfg.vertex_cap {
        return Err(Error::SizeCap { vertices, cap: cfg.vertex_cap });
    }
    Ok(())
}

fn mvc_members(g: &Graph, cfg: &ExactConfig) -> Result<Vec<usize>> {
    check_cap(g, cfg)?;
    let weights = integer_weights(g)?;
    let adj = adjacency_bitsets(g);
    let mut active = BitSet::new(g.n());
    for v in 0..g.n() {
        if g.degree(v) > 0 {
            active.insert(v);
        }
    }
    let independent = vc::max_weight_independent_set(&adj, &weights, &active);
    Ok(active.iter().filter(|&v| !independent.contains(v)).collect())
}

fn mds_members(g: &Graph, cfg: &ExactConfig) -> Result<Vec<usize>> {
    check_cap(g, cfg)?;
    let weights = integer_weights(g)?;
    let mut closed = adjacency_bitsets(g);
    for (v, set) in closed.iter_mut().enumerate() {
        set.insert(v);
    }
    Ok(ds::min_weight_dominating_set(&closed, &weights).iter().collect())
}

pub(crate) fn adjacency_bitsets(g: &Graph) -> Vec<BitSet> {
    (0..g.n()).map(|v| BitSet::from_iter_with_capacity(g.n(), g.neighbors(v).iter().copied())).collect()
}

/// Rescales rational weights to a common denominator so the solvers can use
/// exact integer arithmetic.
pub(crate) fn integer_weights(g: &Graph) -> Result<Vec<u64>> {
    let Some(weights) = g.weights() else {
        return Ok(vec![1; g.n()]);
    };
    let mut lcm: i64 = 1;
    for w in weights {
        lcm = lcm.checked_mul(*w.denom() / lcm.gcd(w.denom())).ok_or(Error::WeightOverflow)?;
    }
    let scaled: Vec<u64> = weights
        .iter()
        .map(|w| w.numer().checked_mul(lcm / w.denom()).map(|v| v as u64).ok_or(Error::WeightOverflow))
        .collect::<Result<_>>()?;
    scaled.iter().try_fold(0u64, |acc, &w| acc.checked_add(w)).ok_or(Error::WeightOverflow)?;
    Ok(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, star};
    use crate::rational::Rational;

    fn weighted(g: Graph, w: &[i64]) -> Graph {
        g.with_weights(w.iter().map(|&x| Rational::from_integer(x)).collect()).unwrap()
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(exact_mvc(&complete(5)).unwrap().value, Rational::from_integer(4));
        let p4 = exact_mvc(&path(4)).unwrap();
        assert_eq!(p4.value, Rational::from_integer(2));
        assert!(crate::is_feasible(&path(4), ProblemKind::Vc1, &p4.members).unwrap());
        assert_eq!(exact_mvc(&Graph::empty(5)).unwrap().value, Rational::from_integer(0));
        assert_eq!(exact_mvc(&cycle(7)).unwrap().value, Rational::from_integer(4));
    }

    #[test]
    fn weighted_vertex_cover_prefers_light_side() {
        let g = weighted(star(4), &[10, 1, 1, 1, 1]);
        let s = exact_mvc(&g).unwrap();
        assert_eq!(s.members, vec![1, 2, 3, 4]);
        assert_eq!(s.value, Rational::from_integer(4));
        let g = weighted(star(4), &[3, 1, 1, 1, 1]);
        assert_eq!(exact_mvc(&g).unwrap().members, vec![0]);
    }

    #[test]
    fn fractional_weights_are_exact() {
        let g = path(3)
            .with_weights(vec![Rational::new(1, 3), Rational::new(3, 4), Rational::new(1, 2)])
            .unwrap();
        assert_eq!(exact_mvc(&g).unwrap().value, Rational::new(3, 4));
    }

    #[test]
    fn dominating_set_examples() {
        assert_eq!(exact_mds(&star(6)).unwrap().members, vec![0]);
        assert_eq!(exact_mds(&path(5)).unwrap().value, Rational::from_integer(2));
        let k2 = weighted(path(2), &[3, 1]);
        assert_eq!(exact_mds(&k2).unwrap().value, Rational::from_integer(1));
        assert_eq!(exact_mds(&Graph::empty(3)).unwrap().members, vec![0, 1, 2]);
        assert_eq!(exact_mds(&cycle(9)).unwrap().value, Rational::from_integer(3));
    }

    #[test]
    fn zero_weight_vertices_are_free() {
        let g = weighted(path(3), &[1, 0, 1]);
        assert_eq!(exact_mds(&g).unwrap().value, Rational::from_integer(0));
        assert_eq!(exact_mvc(&g).unwrap().value, Rational::from_integer(0));
    }

    #[test]
    fn cap_counts_non_isolated_vertices() {
        let big = Graph::from_edges(100, [(0, 1)]).unwrap();
        assert!(exact_mvc(&big).is_ok());
        let err = exact_mvc_with(&complete(10), &ExactConfig::with_cap(9)).unwrap_err();
        assert_eq!(err, Error::SizeCap { vertices: 10, cap: 9 });
    }

    #[test]
    fn square_helpers_tag_kind() {
        let s = exact_mvc_square(&cycle(5), &ExactConfig::default()).unwrap();
        assert_eq!((s.kind, s.len()), (ProblemKind::Vc2, 4));
        let d = exact_mds_square(&path(5), &ExactConfig::default()).unwrap();
        assert_eq!((d.kind, d.members.clone()), (ProblemKind::Ds2, vec![2]));
    }
}
