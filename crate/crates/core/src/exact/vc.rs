//! Maximum-weight independent set by branch and bound; its complement is a
//! minimum-weight vertex cover.

use crate::bitset::BitSet;

struct Search<'a> {
    adj: &'a [BitSet],
    weights: &'a [u64],
    /// Vertices by decreasing weight, then increasing id.
    order: Vec<usize>,
    best_weight: u64,
    best: BitSet,
}

pub(super) fn max_weight_independent_set(adj: &[BitSet], weights: &[u64], active: &BitSet) -> BitSet {
    let mut order: Vec<usize> = active.iter().collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let mut search = Search { adj, weights, order, best_weight: 0, best: BitSet::new(adj.len()) };
    let (greedy, greedy_weight) = search.greedy(active);
    search.best = greedy;
    search.best_weight = greedy_weight;
    search.branch(active.clone(), BitSet::new(adj.len()), 0);
    search.best
}

impl Search<'_> {
    fn greedy(&self, active: &BitSet) -> (BitSet, u64) {
        let mut free = active.clone();
        let mut set = BitSet::new(self.adj.len());
        let mut total = 0;
        for &v in &self.order {
            if free.contains(v) {
                set.insert(v);
                total += self.weights[v];
                free.remove(v);
                free.difference_with(&self.adj[v]);
            }
        }
        (set, total)
    }

    fn branch(&mut self, mut pool: BitSet, mut chosen: BitSet, mut weight: u64) {
        self.reduce(&mut pool, &mut chosen, &mut weight);
        if pool.is_empty() {
            if weight > self.best_weight {
                self.best_weight = weight;
                self.best = chosen;
            }
            return;
        }
        if weight + self.clique_cover_bound(&pool) <= self.best_weight {
            return;
        }
        let pivot = pool
            .iter()
            .max_by(|&a, &b| {
                let (da, db) = (self.adj[a].intersection_len(&pool), self.adj[b].intersection_len(&pool));
                da.cmp(&db).then(b.cmp(&a))
            })
            .expect("pool is nonempty");

        let mut with = pool.difference(&self.adj[pivot]);
        with.remove(pivot);
        let mut chosen_with = chosen.clone();
        chosen_with.insert(pivot);
        self.branch(with, chosen_with, weight + self.weights[pivot]);

        pool.remove(pivot);
        self.branch(pool, chosen, weight);
    }

    /// Isolated, pendant and dominance reductions, applied to a fixpoint.
    fn reduce(&self, pool: &mut BitSet, chosen: &mut BitSet, weight: &mut u64) {
        loop {
            let mut changed = false;
            for v in pool.clone().iter() {
                if !pool.contains(v) {
                    continue;
                }
                let nbrs = self.adj[v].intersection(pool);
                let degree = nbrs.len();
                if degree == 0 || (degree == 1 && self.weights[v] >= self.weights[nbrs.first().unwrap_or(v)]) {
                    chosen.insert(v);
                    *weight += self.weights[v];
                    pool.remove(v);
                    pool.difference_with(&nbrs);
                    changed = true;
                    continue;
                }
                // A neighbor u whose closed neighborhood contains v's can be
                // swapped for v in any independent set.
                for u in nbrs.iter() {
                    if self.weights[v] < self.weights[u] {
                        continue;
                    }
                    let mut rest = nbrs.clone();
                    rest.remove(u);
                    if rest.is_subset(&self.adj[u]) {
                        pool.remove(u);
                        changed = true;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Sum over a greedy clique partition of the heaviest weight per clique.
    fn clique_cover_bound(&self, pool: &BitSet) -> u64 {
        let mut cliques: Vec<BitSet> = Vec::new();
        let mut bound = 0;
        for &v in &self.order {
            if !pool.contains(v) {
                continue;
            }
            match cliques.iter_mut().find(|common| common.contains(v)) {
                Some(common) => common.intersect_with(&self.adj[v]),
                None => {
                    bound += self.weights[v];
                    cliques.push(self.adj[v].intersection(pool));
                }
            }
        }
        bound
    }
}
