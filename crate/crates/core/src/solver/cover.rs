//! Exact minimum set cover by branch and bound.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;

/// Outcome of [`min_set_cover`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverResult {
    /// Optimal choice of set indices (ascending).
    Optimal(Vec<usize>),
    /// No cover of size at most the cap exists; `lower_bound` is proven.
    Infeasible { lower_bound: usize },
}

struct Search<'a> {
    sets: &'a [BitSet],
    /// For each element, indices of the sets covering it.
    covering: Vec<Vec<usize>>,
    /// For each element, the union of all sets covering it.
    neighbourhood: Vec<BitSet>,
    best: Option<Vec<usize>>,
    /// Only covers strictly smaller than this are accepted.
    bound: usize,
    nodes: u64,
}

impl Search<'_> {
    /// Number of uncovered elements that pairwise share no covering set;
    /// each needs its own set.
    fn packing_bound(&self, uncovered: &BitSet) -> usize {
        let mut order: Vec<usize> = uncovered.iter().collect();
        order.sort_by_key(|&e| (self.covering[e].len(), e));
        let mut blocked = BitSet::new(uncovered.capacity());
        let mut count = 0;
        for e in order {
            if blocked.contains(e) {
                continue;
            }
            count += 1;
            blocked.union_with(&self.neighbourhood[e]);
        }
        count
    }

    fn branch(&mut self, uncovered: &BitSet, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        if uncovered.is_empty() {
            if chosen.len() < self.bound {
                let mut sol = chosen.clone();
                sol.sort_unstable();
                self.bound = sol.len();
                self.best = Some(sol);
            }
            return;
        }
        if chosen.len() + 1 >= self.bound {
            return;
        }
        if chosen.len() + 2 == self.bound {
            // exactly one more set is allowed
            if let Some(s) = (0..self.sets.len()).find(|&s| uncovered.is_subset(&self.sets[s])) {
                chosen.push(s);
                self.branch(&BitSet::new(uncovered.capacity()), chosen);
                chosen.pop();
            }
            return;
        }
        if chosen.len() + self.packing_bound(uncovered) >= self.bound {
            return;
        }
        // most constrained element first, ties by index
        let pivot = uncovered
            .iter()
            .min_by_key(|&e| (self.covering[e].len(), e))
            .expect("non-empty");
        let mut options: Vec<(usize, usize)> = self.covering[pivot]
            .iter()
            .map(|&s| {
                let mut gain = self.sets[s].clone();
                gain.intersect_with(uncovered);
                (s, gain.count())
            })
            .collect();
        options.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (s, _) in options {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.sets[s]);
            chosen.push(s);
            self.branch(&rest, chosen);
            chosen.pop();
            if chosen.len() + 1 >= self.bound {
                break;
            }
        }
    }
}

fn greedy(sets: &[BitSet], target: &BitSet) -> Option<Vec<usize>> {
    let mut uncovered = target.clone();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize)> = None;
        for (s, set) in sets.iter().enumerate() {
            let mut g = set.clone();
            g.intersect_with(&uncovered);
            let c = g.count();
            if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
                best = Some((s, c));
            }
        }
        let (s, _) = best?;
        uncovered.difference_with(&sets[s]);
        chosen.push(s);
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// Smallest family of `sets` whose union contains `target`, of size at most
/// `cap`. Deterministic: among optimal covers the search returns the first
/// one met in its fixed branching order.
pub fn min_set_cover(sets: &[BitSet], target: &BitSet, cap: usize) -> CoverResult {
    let m = target.capacity();
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (s, set) in sets.iter().enumerate() {
        for e in set.iter() {
            if target.contains(e) {
                covering[e].push(s);
            }
        }
    }
    if target.iter().any(|e| covering[e].is_empty()) {
        return CoverResult::Infeasible { lower_bound: usize::MAX };
    }
    let mut neighbourhood = Vec::with_capacity(m);
    for cov in covering.iter() {
        let mut u = BitSet::new(m);
        for &s in cov {
            u.union_with(&sets[s]);
        }
        u.intersect_with(target);
        neighbourhood.push(u);
    }
    let mut search = Search { sets, covering, neighbourhood, best: None, bound: cap + 1, nodes: 0 };
    let root_lb = search.packing_bound(target);
    if root_lb > cap {
        return CoverResult::Infeasible { lower_bound: root_lb };
    }
    if let Some(g) = greedy(sets, target) {
        if g.len() <= cap {
            search.bound = g.len();
            search.best = Some(g);
        }
    }
    if search.best.as_ref().is_some_and(|b| b.len() == root_lb) {
        return CoverResult::Optimal(search.best.take().expect("checked"));
    }
    let mut chosen = Vec::new();
    search.branch(target, &mut chosen);
    match search.best {
        Some(b) => CoverResult::Optimal(b),
        None => CoverResult::Infeasible { lower_bound: (cap + 1).max(root_lb) },
    }
}

/// Indices of sets kept after dropping duplicates and sets strictly contained
/// in another (restricted to `target`). Earlier indices win ties.
pub fn undominated(sets: &[BitSet], target: &BitSet) -> Vec<usize> {
    let restricted: Vec<BitSet> = sets
        .iter()
        .map(|s| {
            let mut r = s.clone();
            r.intersect_with(target);
            r
        })
        .collect();
    let mut order: Vec<usize> = (0..sets.len()).collect();
    // larger sets first so dominators are kept before what they dominate
    order.sort_by(|&a, &b| restricted[b].count().cmp(&restricted[a].count()).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if restricted[i].is_empty() {
            continue;
        }
        if kept.iter().any(|&k| restricted[i].is_subset(&restricted[k])) {
            continue;
        }
        kept.push(i);
    }
    kept.sort_unstable();
    kept
}
