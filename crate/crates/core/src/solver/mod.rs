//! Exact point-vertex guarding: placement checks and minimum guard sets.

pub mod cover;
mod segments;

use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geometry::{Containment, Point, SimplePolygon};
use crate::visibility::arrangement_vertices_for;

pub use cover::{min_set_cover, undominated, CoverResult};
pub use segments::{
    disjoint_segment_bound, segment_breakpoints, solve_on_segments, visible_intervals, SegmentFeasibility, VisibilityProbe, SegmentInterval,
};

/// An unordered set of guards; duplicates collapse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardPlacement {
    guards: Vec<Point>,
}

impl GuardPlacement {
    pub fn new(mut guards: Vec<Point>) -> Self {
        guards.sort();
        guards.dedup();
        GuardPlacement { guards }
    }

    /// Guards in lexicographic order.
    pub fn guards(&self) -> &[Point] {
        &self.guards
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }
}

impl FromIterator<Point> for GuardPlacement {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        GuardPlacement::new(iter.into_iter().collect())
    }
}

/// Which polygon vertices a placement sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub seen_vertices: BitSet,
    pub unseen_vertices: Vec<usize>,
    /// One mask per guard, in the placement's order.
    pub per_guard_visibility: Vec<BitSet>,
    pub fully_covered: bool,
}

/// Exact vertex coverage of a placement.
pub fn check_placement(poly: &SimplePolygon, placement: &GuardPlacement) -> Result<CoverageReport> {
    let mut seen = BitSet::new(poly.len());
    let mut per_guard = Vec::with_capacity(placement.len());
    for (index, g) in placement.guards().iter().enumerate() {
        let cls = poly.contains(g);
        if cls == Containment::Exterior {
            return Err(Error::GuardOutside { index, point: g.clone() });
        }
        let mask = poly.visible_vertices_classified(g, cls);
        seen.union_with(&mask);
        per_guard.push(mask);
    }
    let unseen: Vec<usize> = (0..poly.len()).filter(|&i| !seen.contains(i)).collect();
    Ok(CoverageReport {
        fully_covered: unseen.is_empty(),
        seen_vertices: seen,
        unseen_vertices: unseen,
        per_guard_visibility: per_guard,
    })
}

/// Result of [`min_vertex_guard_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuardSolution {
    Optimal { k: usize, witness: GuardPlacement },
    /// Every vertex guard set needs more than `k_max` guards.
    InfeasibleWithinBound { lower_bound: usize },
}

impl GuardSolution {
    pub fn k(&self) -> Option<usize> {
        match self {
            GuardSolution::Optimal { k, .. } => Some(*k),
            GuardSolution::InfeasibleWithinBound { .. } => None,
        }
    }
}

/// Search statistics, useful for the CLI's progress output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Element-set refinement rounds.
    pub rounds: usize,
    /// Candidates of the final round after domination filtering.
    pub candidates: usize,
    /// Vertices constrained in the final round.
    pub elements: usize,
}

/// Exact minimum number of guards seeing every vertex, and a witness.
///
/// Guards are restricted to arrangement vertices, which loses nothing since
/// every point is dominated by a vertex of its cell. The arrangement is built
/// lazily: only vertices constrained so far contribute regions, and any
/// vertex the optimum misses is added before re-solving. A cover optimal for
/// a subset that happens to see everything is optimal overall.
pub fn min_vertex_guard_set(poly: &SimplePolygon, k_max: usize) -> Result<GuardSolution> {
    min_vertex_guard_set_with_stats(poly, k_max).map(|(s, _)| s)
}

pub fn min_vertex_guard_set_with_stats(poly: &SimplePolygon, k_max: usize) -> Result<(GuardSolution, SolveStats)> {
    let n = poly.len();
    let mut elements = BitSet::new(n);
    for i in 0..n {
        if !poly.is_reflex(i) {
            elements.insert(i);
        }
    }
    let mut stats = SolveStats::default();
    loop {
        stats.rounds += 1;
        let sources: Vec<usize> = elements.iter().collect();
        let points = arrangement_vertices_for(poly, &sources)?;
        // only the constrained vertices matter for the cover itself
        let sets: Vec<BitSet> = points
            .iter()
            .map(|p| poly.visible_vertices_among(p, &elements).unwrap_or_else(|_| BitSet::new(n)))
            .collect();
        let kept = undominated(&sets, &elements);
        let kept_sets: Vec<BitSet> = kept.iter().map(|&i| sets[i].clone()).collect();
        stats.candidates = kept.len();
        stats.elements = elements.count();
        match min_set_cover(&kept_sets, &elements, k_max) {
            CoverResult::Infeasible { lower_bound } => {
                return Ok((GuardSolution::InfeasibleWithinBound { lower_bound }, stats));
            }
            CoverResult::Optimal(choice) => {
                let mut seen = BitSet::new(n);
                for &c in &choice {
                    seen.union_with(&poly.visible_vertices(&points[kept[c]])?);
                }
                if seen.is_full() {
                    let witness = GuardPlacement::new(choice.iter().map(|&c| points[kept[c]].clone()).collect());
                    return Ok((GuardSolution::Optimal { k: choice.len(), witness }, stats));
                }
                for i in 0..n {
                    if !seen.contains(i) {
                        elements.insert(i);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn convex_needs_one() {
        let sq = SimplePolygon::new(vec![p(0, 0), p(3, 0), p(3, 3), p(0, 3)]).unwrap();
        let s = min_vertex_guard_set(&sq, 5).unwrap();
        assert_eq!(s.k(), Some(1));
        let rep = check_placement(&sq, &GuardPlacement::new(vec![Point::from_ratios(1, 2, 1, 2)])).unwrap();
        assert!(rep.fully_covered);
        assert!(rep.unseen_vertices.is_empty());
    }

    #[test]
    fn outside_guard_named() {
        let sq = SimplePolygon::new(vec![p(0, 0), p(3, 0), p(3, 3), p(0, 3)]).unwrap();
        let err = check_placement(&sq, &GuardPlacement::new(vec![p(1, 1), p(5, 5)])).unwrap_err();
        assert_eq!(err, Error::GuardOutside { index: 1, point: p(5, 5) });
    }

    #[test]
    fn comb_needs_one_per_tooth() {
        // three teeth with pairwise disjoint tip kernels
        let comb = SimplePolygon::new(vec![
            p(0, 0),
            p(10, 0),
            p(10, 4),
            p(9, 4),
            p(8, 1),
            p(6, 1),
            p(5, 4),
            p(4, 1),
            p(2, 1),
            p(1, 4),
            p(0, 4),
        ])
        .unwrap();
        let s = min_vertex_guard_set(&comb, 10).unwrap();
        // the tip wedges meet y = 0 in [0, 8/3], [11/3, 19/3] and [22/3, 10]
        assert_eq!(s.k(), Some(3));
        if let GuardSolution::Optimal { witness, .. } = &s {
            assert!(check_placement(&comb, witness).unwrap().fully_covered);
        }
        assert_eq!(
            min_vertex_guard_set(&comb, 2).unwrap(),
            GuardSolution::InfeasibleWithinBound { lower_bound: 3 }
        );
    }

    #[test]
    fn duplicates_collapse() {
        let g = GuardPlacement::new(vec![p(1, 1), p(0, 0), p(1, 1)]);
        assert_eq!(g.guards(), &[p(0, 0), p(1, 1)]);
    }
}
