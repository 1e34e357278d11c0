#![allow(dead_code)]

use powergraph::rational::Rational;
use powergraph::{is_feasible, Graph, ProblemKind};
use proptest::prelude::*;

/// Minimum value over all feasible subsets, by full enumeration.
pub fn brute_force(g: &Graph, kind: ProblemKind) -> Rational {
    let n = g.n();
    assert!(n <= 16, "brute force is for tiny graphs");
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let value = g.set_value(&members);
        if best.is_some_and(|b| value >= b) {
            continue;
        }
        if is_feasible(g, kind, &members).unwrap() {
            best = Some(value);
        }
    }
    best.expect("V itself is feasible")
}

/// Pairwise distances by Floyd–Warshall, independent of the BFS in the crate.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &u in g.neighbors(v) {
            d[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

prop_compose! {
    pub fn arb_graph(max_n: usize)(n in 1..=max_n)(
        n in Just(n),
        bits in proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
    ) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[k] {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }
}

prop_compose! {
    pub fn arb_connected_graph(max_n: usize)(g in arb_graph(max_n), seed in any::<u64>()) -> Graph {
        connect(g, seed)
    }
}

prop_compose! {
    pub fn arb_weighted_graph(max_n: usize, max_w: i64)(g in arb_graph(max_n))(
        weights in proptest::collection::vec(0..=max_w, g.n()),
        g in Just(g),
    ) -> Graph {
        g.with_weights(weights.into_iter().map(Rational::from_integer).collect()).unwrap()
    }
}

/// Adds edges between consecutive components so the graph becomes connected.
pub fn connect(g: Graph, seed: u64) -> Graph {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let dist = g.bfs_distances(s);
        for v in 0..n {
            if dist[v].is_some() {
                comp[v] = reps.len();
            }
        }
        reps.push(s);
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for w in reps.windows(2) {
        let offset = (seed as usize) % n;
        let a = (0..n).map(|i| (i + offset) % n).find(|&v| comp[v] == comp[w[0]]).unwrap();
        edges.push((a, w[1]));
    }
    let out = Graph::from_edges_dedup(n, edges).unwrap();
    match g.weights() {
        Some(w) => out.with_weights(w.to_vec()).unwrap(),
        None => out,
    }
}

/// All graphs on `n` labelled vertices, one per isomorphism class, that are
/// connected. Canonical form: lexicographically smallest sorted edge list
/// over all relabelings.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> =
                    edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
