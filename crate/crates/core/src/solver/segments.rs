//! Guarding with guards confined to the registered segments of a gallery.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::cover::{min_set_cover, undominated, CoverResult};
use super::GuardPlacement;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gadgets::GalleryInstance;
use crate::geometry::{dot_diff_sign, line_intersection, on_segment, orient_sign, param_on, segments_intersect, Point, Rational, Segment, SimplePolygon};

/// Where one guard may stand: a closed parameter range `[lo, hi]` on guard
/// site `site`. Sites are the guard segments followed by the guard points;
/// for a point site the range is ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentInterval {
    pub site: usize,
    pub lo: Rational,
    pub hi: Rational,
}

impl SegmentInterval {
    /// The whole of site `site`.
    pub fn whole(site: usize) -> Self {
        SegmentInterval { site, lo: Rational::zero(), hi: Rational::one() }
    }

    /// A single parameter.
    pub fn at(site: usize, t: Rational) -> Self {
        SegmentInterval { site, lo: t.clone(), hi: t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentFeasibility {
    Feasible { witness: GuardPlacement },
    /// No placement exists; `lower_bound` is the best bound known on the
    /// number of segment guards needed (0 when the assignment itself fails).
    Infeasible { lower_bound: usize },
}

impl SegmentFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SegmentFeasibility::Feasible { .. })
    }
}

/// Size of a largest family of pairwise disjoint segments. When every
/// segment must hold a guard, this many guards are needed.
pub fn disjoint_segment_bound(segments: &[Segment]) -> usize {
    let n = segments.len();
    let mut adj = alloc::vec![BitSet::new(n); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&segments[i], &segments[j]);
            if segments_intersect(&a.a, &a.b, &b.a, &b.b) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    fn mis(adj: &[BitSet], open: BitSet) -> usize {
        // pick a vertex of minimum open degree; it or one of its open
        // neighbours is in some maximum independent set
        let Some(v) = open.iter().min_by_key(|&v| {
            let mut d = adj[v].clone();
            d.intersect_with(&open);
            d.count()
        }) else {
            return 0;
        };
        let mut branch: Vec<usize> = adj[v].iter().filter(|&u| open.contains(u)).collect();
        branch.insert(0, v);
        let mut best = 0;
        for u in branch {
            let mut rest = open.clone();
            rest.remove(u);
            rest.difference_with(&adj[u]);
            best = best.max(1 + mis(adj, rest));
        }
        best
    }
    mis(&adj, BitSet::full(n))
}

/// Parameters in `[0, 1]` along `seg` where the set of polygon vertices
/// seen can change, sorted and deduplicated, endpoints included.
///
/// Seen from a vertex `v`, the part of `seg` inside the visibility region
/// is a union of closed intervals whose ends lie on the polygon boundary or
/// on a window: a line from `v` past a non-convex vertex it sees.
pub fn segment_breakpoints(poly: &SimplePolygon, seg: &Segment) -> Vec<Rational> {
    breakpoints_with(poly, &mutual_visibility(poly), seg)
}

/// Maximal closed parameter intervals of `seg` from which polygon vertex
/// `v` is seen. A single parameter shows up as `(t, t)`.
pub fn visible_intervals(poly: &SimplePolygon, seg: &Segment, v: usize) -> Result<Vec<(Rational, Rational)>> {
    let probe = VisibilityProbe::new(poly);
    probe.intervals(seg, &probe.breakpoints(seg), v)
}

/// Exact visibility along segments of one polygon, with the vertex-vertex
/// visibility table computed once.
pub struct VisibilityProbe<'a> {
    poly: &'a SimplePolygon,
    sees: Vec<BitSet>,
}

impl<'a> VisibilityProbe<'a> {
    pub fn new(poly: &'a SimplePolygon) -> Self {
        VisibilityProbe { poly, sees: mutual_visibility(poly) }
    }

    /// See [`segment_breakpoints`].
    pub fn breakpoints(&self, seg: &Segment) -> Vec<Rational> {
        breakpoints_with(self.poly, &self.sees, seg)
    }

    /// Like [`visible_intervals`], with the breakpoints of `seg` supplied.
    pub fn intervals(&self, seg: &Segment, ts: &[Rational], v: usize) -> Result<Vec<(Rational, Rational)>> {
        let target = self.poly.vertex(v);
        let two = Rational::from_integer(2.into());
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        let mut open = false;
        for (w, t) in ts.iter().enumerate() {
            let at = self.poly.sees(&seg.at(t), target)?;
            if at {
                match out.last_mut() {
                    Some(last) if open => last.1 = t.clone(),
                    _ => out.push((t.clone(), t.clone())),
                }
            }
            open = at;
            if let Some(next) = ts.get(w + 1) {
                // visibility is closed, so a seen open piece has seen ends
                open = open && self.poly.sees(&seg.at(&((t + next) / &two)), target)?;
            }
        }
        Ok(out)
    }
}

/// Row `i` holds the vertices vertex `i` sees.
fn mutual_visibility(poly: &SimplePolygon) -> Vec<BitSet> {
    (0..poly.len()).map(|i| poly.visible_vertices(poly.vertex(i)).unwrap_or_else(|_| BitSet::new(poly.len()))).collect()
}

fn breakpoints_with(poly: &SimplePolygon, sees: &[BitSet], seg: &Segment) -> Vec<Rational> {
    let n = poly.len();
    let mut ts: Vec<Rational> = alloc::vec![Rational::zero(), Rational::one()];
    let in_range = |t: &Rational| *t >= Rational::zero() && *t <= Rational::one();
    let verts = poly.vertices();
    for v in verts {
        if on_segment(&seg.a, &seg.b, v) {
            ts.push(param_on(&seg.a, &seg.b, v));
        }
    }
    for (p, q) in poly.edges() {
        if segments_intersect(&seg.a, &seg.b, p, q) {
            if let Some(x) = line_intersection(&seg.a, &seg.b, p, q) {
                ts.push(param_on(&seg.a, &seg.b, &x));
            }
        }
    }
    // sight of v_i through x can only start or stop being blocked where a
    // non-convex vertex v_j sits strictly between them
    let hinge: Vec<bool> = (0..n).map(|j| poly.corner_turn(j) <= 0).collect();
    for i in 0..n {
        for j in sees[i].iter().filter(|&j| j > i && (hinge[i] || hinge[j])) {
            let (u, w) = (&verts[i], &verts[j]);
            if orient_sign(u, w, &seg.a) * orient_sign(u, w, &seg.b) > 0 {
                continue;
            }
            let Some(x) = line_intersection(&seg.a, &seg.b, u, w) else { continue };
            let beyond_w = hinge[j] && dot_diff_sign(w, &x, u) < 0;
            let beyond_u = hinge[i] && dot_diff_sign(u, &x, w) < 0;
            if beyond_w || beyond_u {
                let t = param_on(&seg.a, &seg.b, &x);
                if in_range(&t) {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// Candidate points of one site, restricted to `[lo, hi]`.
struct Site {
    points: Vec<Point>,
    masks: Vec<BitSet>,
}

fn site_candidates(
    inst: &GalleryInstance,
    site: usize,
    lo: &Rational,
    hi: &Rational,
    sees: &[BitSet],
    breaks: &mut BTreeMap<usize, Vec<Rational>>,
    cache: &mut BTreeMap<Point, BitSet>,
) -> Result<Site> {
    let segs = &inst.guard_segments;
    let points: Vec<Point> = if site < segs.len() {
        let seg = &segs[site].segment;
        let ts = breaks.entry(site).or_insert_with(|| breakpoints_with(&inst.polygon, sees, seg));
        let mut pts: Vec<Point> = ts.iter().filter(|t| *t >= lo && *t <= hi).map(|t| seg.at(t)).collect();
        pts.push(seg.at(lo));
        pts.push(seg.at(hi));
        pts.sort();
        pts.dedup();
        pts
    } else if site - segs.len() < inst.guard_points.len() {
        alloc::vec![inst.guard_points[site - segs.len()].clone()]
    } else {
        return Err(Error::InvalidParameter(format!("no guard site {site}")));
    };
    let mut masks = Vec::with_capacity(points.len());
    for p in &points {
        if let Some(m) = cache.get(p) {
            masks.push(m.clone());
            continue;
        }
        let m = inst.polygon.visible_vertices(p)?;
        cache.insert(p.clone(), m.clone());
        masks.push(m);
    }
    Ok(Site { points, masks })
}

/// Decide whether `k` guards on the registered sites can see every vertex.
///
/// Without an assignment any guard may stand anywhere on any site. With
/// one, guard `i` is confined to `assignment[i]` and `k` must equal its
/// length. Exact: along a site the seen set only changes at breakpoints,
/// and each breakpoint sees everything its neighbouring open pieces see.
pub fn solve_on_segments(inst: &GalleryInstance, k: usize, assignment: Option<&[SegmentInterval]>) -> Result<SegmentFeasibility> {
    let n = inst.polygon.len();
    let segments = inst.segments();
    let disjoint = disjoint_segment_bound(&segments) + inst.guard_points.len();
    if k < disjoint {
        return Ok(SegmentFeasibility::Infeasible { lower_bound: disjoint });
    }
    let sees = mutual_visibility(&inst.polygon);
    let mut breaks = BTreeMap::new();
    let mut cache = BTreeMap::new();
    let all = BitSet::full(n);
    match assignment {
        None => {
            let sites = segments.len() + inst.guard_points.len();
            let mut points = Vec::new();
            let mut masks = Vec::new();
            for s in 0..sites {
                let site = site_candidates(inst, s, &Rational::zero(), &Rational::one(), &sees, &mut breaks, &mut cache)?;
                points.extend(site.points);
                masks.extend(site.masks);
            }
            let kept = undominated(&masks, &all);
            let sets: Vec<BitSet> = kept.iter().map(|&i| masks[i].clone()).collect();
            match min_set_cover(&sets, &all, k) {
                CoverResult::Optimal(choice) => Ok(SegmentFeasibility::Feasible {
                    witness: GuardPlacement::new(choice.iter().map(|&c| points[kept[c]].clone()).collect()),
                }),
                CoverResult::Infeasible { lower_bound } => {
                    Ok(SegmentFeasibility::Infeasible { lower_bound: lower_bound.max(disjoint) })
                }
            }
        }
        Some(asg) => {
            if asg.len() != k {
                return Err(Error::InvalidParameter(format!("assignment has {} intervals for k = {k}", asg.len())));
            }
            let mut sites = Vec::with_capacity(k);
            for iv in asg {
                if iv.lo > iv.hi || iv.lo < Rational::zero() || iv.hi > Rational::one() {
                    return Err(Error::InvalidParameter(format!("bad interval [{}, {}]", iv.lo, iv.hi)));
                }
                let mut site = site_candidates(inst, iv.site, &iv.lo, &iv.hi, &sees, &mut breaks, &mut cache)?;
                let kept = undominated(&site.masks, &all);
                site.points = kept.iter().map(|&i| site.points[i].clone()).collect();
                site.masks = kept.iter().map(|&i| site.masks[i].clone()).collect();
                sites.push(site);
            }
            let mut chosen = alloc::vec![usize::MAX; k];
            if assign(&sites, &mut chosen, &BitSet::new(n)) {
                let witness = GuardPlacement::new(chosen.iter().enumerate().map(|(g, &c)| sites[g].points[c].clone()).collect());
                Ok(SegmentFeasibility::Feasible { witness })
            } else {
                Ok(SegmentFeasibility::Infeasible { lower_bound: 0 })
            }
        }
    }
}

/// Backtracking over one candidate per confined guard. Branches on the
/// uncovered vertex the fewest free guards can still see.
fn assign(sites: &[Site], chosen: &mut [usize], covered: &BitSet) -> bool {
    let free: Vec<usize> = (0..sites.len()).filter(|&g| chosen[g] == usize::MAX).collect();
    if covered.is_full() {
        // remaining guards stand anywhere in their interval
        for &g in &free {
            chosen[g] = 0;
        }
        return true;
    }
    if free.is_empty() {
        return false;
    }
    let mut best: Option<(usize, usize)> = None;
    for v in (0..covered.capacity()).filter(|&v| !covered.contains(v)) {
        let options = free.iter().map(|&g| sites[g].masks.iter().filter(|m| m.contains(v)).count()).sum::<usize>();
        if options == 0 {
            return false;
        }
        if best.is_none_or(|(_, o)| options < o) {
            best = Some((v, options));
        }
    }
    let (v, _) = best.expect("some vertex is uncovered");
    for &g in &free {
        for (c, m) in sites[g].masks.iter().enumerate() {
            if !m.contains(v) {
                continue;
            }
            chosen[g] = c;
            let mut next = covered.clone();
            next.union_with(m);
            if assign(sites, chosen, &next) {
                return true;
            }
            chosen[g] = usize::MAX;
        }
    }
    false
}
