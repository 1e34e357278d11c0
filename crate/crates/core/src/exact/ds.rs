//! Minimum-weight dominating set as weighted set cover over closed
//! neighborhoods, by branch and bound.

use crate::bitset::BitSet;

struct Search<'a> {
    closed: &'a [BitSet],
    weights: &'a [u64],
    best_cost: u64,
    best: BitSet,
}

pub(super) fn min_weight_dominating_set(closed: &[BitSet], weights: &[u64]) -> BitSet {
    let n = closed.len();
    let mut chosen = BitSet::new(n);
    let mut uncovered = BitSet::full(n);
    let mut allowed = BitSet::full(n);
    for v in (0..n).filter(|&v| weights[v] == 0) {
        chosen.insert(v);
        uncovered.difference_with(&closed[v]);
        allowed.remove(v);
    }
    let (greedy, greedy_cost) = greedy(closed, weights, &uncovered, &allowed, &chosen);
    let mut search = Search { closed, weights, best_cost: greedy_cost, best: greedy };
    search.branch(uncovered, allowed, chosen, 0);
    search.best
}

fn greedy(closed: &[BitSet], weights: &[u64], uncovered: &BitSet, allowed: &BitSet, chosen: &BitSet) -> (BitSet, u64) {
    let mut uncovered = uncovered.clone();
    let mut chosen = chosen.clone();
    let mut cost = 0;
    while !uncovered.is_empty() {
        // Maximize coverage per unit weight; compare cross-multiplied.
        let pick = allowed
            .iter()
            .filter(|&s| !chosen.contains(s))
            .map(|s| (s, closed[s].intersection_len(&uncovered) as u64))
            .filter(|&(_, c)| c > 0)
            .max_by(|&(a, ca), &(b, cb)| (ca * weights[b]).cmp(&(cb * weights[a])).then(b.cmp(&a)))
            .map(|(s, _)| s)
            .expect("every vertex dominates itself");
        chosen.insert(pick);
        cost += weights[pick];
        uncovered.difference_with(&closed[pick]);
    }
    (chosen, cost)
}

impl Search<'_> {
    fn candidates(&self, element: usize, allowed: &BitSet) -> BitSet {
        self.closed[element].intersection(allowed)
    }

    fn branch(&mut self, mut uncovered: BitSet, mut allowed: BitSet, mut chosen: BitSet, mut cost: u64) {
        loop {
            if cost >= self.best_cost {
                return;
            }
            if uncovered.is_empty() {
                self.best_cost = cost;
                self.best = chosen;
                return;
            }
            for s in allowed.clone().iter() {
                if !self.closed[s].intersects(&uncovered) {
                    allowed.remove(s);
                }
            }
            let mut forced = None;
            for e in uncovered.iter() {
                let cands = self.candidates(e, &allowed);
                match cands.len() {
                    0 => return,
                    1 => {
                        forced = cands.first();
                        break;
                    }
                    _ => {}
                }
            }
            if let Some(s) = forced {
                chosen.insert(s);
                cost += self.weights[s];
                uncovered.difference_with(&self.closed[s]);
                allowed.remove(s);
                continue;
            }
            if self.drop_dominated_sets(&uncovered, &mut allowed) | self.drop_dominated_elements(&mut uncovered, &allowed) {
                continue;
            }
            break;
        }

        if cost + self.packing_bound(&uncovered, &allowed) >= self.best_cost {
            return;
        }

        let pivot = uncovered
            .iter()
            .min_by_key(|&e| (self.candidates(e, &allowed).len(), e))
            .expect("uncovered is nonempty");
        let mut options: Vec<(usize, u64)> = self
            .candidates(pivot, &allowed)
            .iter()
            .map(|s| (s, self.closed[s].intersection_len(&uncovered) as u64))
            .collect();
        options.sort_by(|&(a, ca), &(b, cb)| (self.weights[a] * cb).cmp(&(self.weights[b] * ca)).then(a.cmp(&b)));
        for (s, _) in options {
            let mut next_chosen = chosen.clone();
            next_chosen.insert(s);
            let mut next_allowed = allowed.clone();
            next_allowed.remove(s);
            self.branch(uncovered.difference(&self.closed[s]), next_allowed, next_chosen, cost + self.weights[s]);
            allowed.remove(s);
        }
    }

    /// Removes a set whose useful coverage is contained in a no-heavier set's.
    fn drop_dominated_sets(&self, uncovered: &BitSet, allowed: &mut BitSet) -> bool {
        let sets: Vec<usize> = allowed.iter().collect();
        let coverage: Vec<BitSet> = sets.iter().map(|&s| self.closed[s].intersection(uncovered)).collect();
        let mut changed = false;
        for (i, &s) in sets.iter().enumerate() {
            let dominated = sets.iter().enumerate().any(|(j, &t)| {
                t != s
                    && allowed.contains(t)
                    && self.weights[t] <= self.weights[s]
                    && coverage[i].is_subset(&coverage[j])
                    && (self.weights[t] < self.weights[s] || coverage[i] != coverage[j] || t < s)
            });
            if dominated {
                allowed.remove(s);
                changed = true;
            }
        }
        changed
    }

    /// An element whose candidate sets include all candidates of another
    /// element is covered for free once the other one is.
    fn drop_dominated_elements(&self, uncovered: &mut BitSet, allowed: &BitSet) -> bool {
        let elements: Vec<usize> = uncovered.iter().collect();
        let cands: Vec<BitSet> = elements.iter().map(|&e| self.candidates(e, allowed)).collect();
        let mut changed = false;
        for (i, &e) in elements.iter().enumerate() {
            let implied = elements.iter().enumerate().any(|(j, &f)| {
                f != e && uncovered.contains(f) && cands[j].is_subset(&cands[i]) && (cands[j] != cands[i] || f < e)
            });
            if implied {
                uncovered.remove(e);
                changed = true;
            }
        }
        changed
    }

    /// Elements with pairwise disjoint candidate sets each need their own
    /// cheapest candidate.
    fn packing_bound(&self, uncovered: &BitSet, allowed: &BitSet) -> u64 {
        let mut elements: Vec<(usize, BitSet)> = uncovered.iter().map(|e| (e, self.candidates(e, allowed))).collect();
        elements.sort_by_key(|(e, c)| (c.len(), *e));
        let mut used = BitSet::new(self.closed.len());
        let mut bound = 0;
        for (_, cands) in elements {
            if !cands.intersects(&used) {
                bound += cands.iter().map(|s| self.weights[s]).min().unwrap_or(0);
                used.union_with(&cands);
            }
        }
        bound
    }
}
