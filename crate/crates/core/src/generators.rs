//! Deterministic graph families and seeded random graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::rational::Rational;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid gnp")
}

/// `G(n, p)` resampled until connected, from a dedicated stream for `seed`.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    loop {
        let g = gnp(n, p, &mut rng);
        if g.is_connected() {
            return g;
        }
    }
}

/// Uniform random recursive tree with shuffled labels.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (labels[rng.random_range(0..i)], labels[i])).collect();
    Graph::from_edges(n, edges).expect("valid tree")
}

/// Integer weights drawn uniformly from `1..=max`.
pub fn random_weights(n: usize, max: i64, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n).map(|_| Rational::from_integer(rng.random_range(1..=max.max(1)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_have_expected_sizes() {
        assert_eq!(path(5).m(), 4);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(star(6).m(), 6);
        assert_eq!(complete(5).m(), 10);
        assert_eq!(path(0).n(), 0);
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(connected_gnp(12, 0.3, 9), connected_gnp(12, 0.3, 9));
        let t1 = random_tree(20, &mut rng_from_seed(4));
        let t2 = random_tree(20, &mut rng_from_seed(4));
        assert_eq!(t1, t2);
        assert_eq!(t1.m(), 19);
        assert!(t1.is_connected());
        assert!(connected_gnp(10, 0.2, 1).is_connected());
    }
}
