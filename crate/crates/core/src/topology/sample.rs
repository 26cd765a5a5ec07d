//! Dense sampling of optimal guard placements on the registered sites.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::hausdorff::hausdorff;
use super::rips::{rips_complex, SimplicialComplexZ2};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gadgets::{Family, GalleryInstance};
use crate::geometry::{line_intersection, param_on, segments_intersect, Point, Rational};
use crate::solver::{GuardPlacement, VisibilityProbe};

/// How densely to sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    /// Grid steps along the longest segment; shorter segments get steps of
    /// the same Euclidean length, rounded up to a whole number per segment.
    pub resolution: usize,
    /// Also try every visibility breakpoint. Needed where the feasible
    /// pieces are narrower than a grid step, as in compiled galleries.
    pub breakpoints: bool,
    /// Search nodes allowed before giving up.
    pub budget: usize,
    /// Guards per placement; the instance's `expected_k` when unset.
    pub guards: Option<usize>,
}

impl SampleOptions {
    pub fn new(resolution: usize) -> Self {
        SampleOptions { resolution, breakpoints: false, budget: 20_000_000, guards: None }
    }

    /// Per-family defaults: the smallest resolutions at which the known
    /// Betti numbers have stabilised.
    pub fn for_family(family: &Family) -> Self {
        let mut o = SampleOptions::new(match family {
            Family::Circle => 32,
            Family::Clover(_) => 16,
            Family::Torus => 16,
            Family::Compiled => 8,
            Family::DoubleTorus => 16,
            // one guard per long segment, free in all of them: the ball is
            // high-dimensional and a coarse grid already fills it
            Family::Grid { h, v } if *h.min(v) == 1 => 4,
            _ => 12,
        });
        o.breakpoints = matches!(family, Family::Compiled);
        o
    }
}

/// A guard position on a site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// Guard segment index, or segment count plus guard point index.
    pub site: usize,
    pub t: Rational,
    pub point: Point,
}

/// One feasible placement.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudPoint {
    /// `(site, parameter)` per guard, sorted.
    pub guards: Vec<(usize, Rational)>,
    pub placement: GuardPlacement,
    /// Float copy of the placement's guards, same order.
    pub coords: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCloud {
    pub resolution: usize,
    pub guards: usize,
    pub points: Vec<CloudPoint>,
    /// Euclidean length of one grid step.
    pub grid_step: f64,
}

impl SolutionCloud {
    /// The documented default scale, 1.5 grid steps.
    pub fn default_epsilon(&self) -> f64 {
        1.5 * self.grid_step
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        hausdorff(&self.points[i].coords, &self.points[j].coords).unwrap_or(f64::INFINITY)
    }

    pub fn rips(&self, eps: f64, max_dim: usize) -> Result<SimplicialComplexZ2> {
        rips_complex(self.points.len(), eps, max_dim, |i, j| self.distance(i, j))
    }

    /// Components of the `eps`-graph by union-find.
    pub fn components(&self, eps: f64) -> usize {
        let n = self.points.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = n;
        for i in 0..n {
            for j in i + 1..n {
                if self.distance(i, j) <= eps {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                        count -= 1;
                    }
                }
            }
        }
        count
    }
}

fn grid_step(inst: &GalleryInstance, r: usize) -> f64 {
    inst.guard_segments
        .iter()
        .map(|g| g.segment.a.distance_f64(&g.segment.b) / r as f64)
        .fold(0.0, f64::max)
}

/// Grid parameters, crossings with other segments and (optionally)
/// breakpoints on the chosen sites, deduplicated by position. A crossing
/// belongs to the lower site index.
pub fn candidates(inst: &GalleryInstance, sites: &[usize], opts: &SampleOptions) -> Result<Vec<Candidate>> {
    if opts.resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let segs = inst.segments();
    let step = grid_step(inst, opts.resolution);
    let probe = opts.breakpoints.then(|| VisibilityProbe::new(&inst.polygon));
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut out = Vec::new();
    let mut all: Vec<usize> = sites.to_vec();
    all.sort_unstable();
    for &site in &all {
        if site >= segs.len() {
            let p = inst
                .guard_points
                .get(site - segs.len())
                .ok_or_else(|| Error::InvalidParameter(format!("no guard site {site}")))?;
            if seen.insert(p.clone()) {
                out.push(Candidate { site, t: Rational::zero(), point: p.clone() });
            }
            continue;
        }
        let s = &segs[site];
        // equal Euclidean steps everywhere, `resolution` on the longest segment
        let steps = libm::ceil(s.a.distance_f64(&s.b) / step - 1e-9).max(1.0) as i64;
        let r = Rational::from_integer(steps.into());
        let mut ts: Vec<Rational> = (0..=steps).map(|i| Rational::from_integer(i.into()) / &r).collect();
        for (j, o) in segs.iter().enumerate() {
            if j != site && segments_intersect(&s.a, &s.b, &o.a, &o.b) {
                if let Some(x) = line_intersection(&s.a, &s.b, &o.a, &o.b) {
                    ts.push(param_on(&s.a, &s.b, &x));
                }
            }
        }
        if let Some(probe) = &probe {
            ts.extend(probe.breakpoints(s));
        }
        ts.retain(|t| *t >= Rational::zero() && *t <= Rational::one());
        ts.sort();
        ts.dedup();
        for t in ts {
            let p = s.at(&t);
            if seen.insert(p.clone()) {
                out.push(Candidate { site, t, point: p });
            }
        }
    }
    Ok(out)
}

struct Enumerator<'a> {
    masks: &'a [BitSet],
    /// Per element, the candidates seeing it.
    seeing: Vec<BitSet>,
    nodes: usize,
    budget: usize,
    found: BTreeSet<Vec<usize>>,
}

impl Enumerator<'_> {
    fn allowed_count(&self, e: usize, banned: &BitSet) -> usize {
        self.seeing[e].iter().filter(|&c| !banned.contains(c)).count()
    }

    /// Uncovered elements with pairwise disjoint allowed candidates.
    fn packing(&self, uncovered: &[usize], banned: &BitSet) -> usize {
        let mut order: Vec<(usize, usize)> = uncovered.iter().map(|&e| (self.allowed_count(e, banned), e)).collect();
        order.sort_unstable();
        let mut blocked = BitSet::new(self.masks.len());
        let mut count = 0;
        for (_, e) in order {
            let mut opts = self.seeing[e].clone();
            opts.difference_with(banned);
            if !opts.intersects(&blocked) {
                count += 1;
                blocked.union_with(&opts);
            }
        }
        count
    }

    fn fill(&mut self, chosen: &mut Vec<usize>, banned: &BitSet, from: usize, left: usize) {
        if left == 0 {
            let mut s = chosen.clone();
            s.sort_unstable();
            self.found.insert(s);
            return;
        }
        for c in from..self.masks.len() {
            if !banned.contains(c) && !chosen.contains(&c) {
                chosen.push(c);
                self.fill(chosen, banned, c + 1, left - 1);
                chosen.pop();
            }
        }
    }

    fn branch(&mut self, required: &BitSet, covered: &BitSet, chosen: &mut Vec<usize>, banned: &mut BitSet, left: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        let uncovered: Vec<usize> = required.iter().filter(|&e| !covered.contains(e)).collect();
        if uncovered.is_empty() {
            self.fill(chosen, banned, 0, left);
            return Ok(());
        }
        if left == 0 || self.packing(&uncovered, banned) > left {
            return Ok(());
        }
        let e = *uncovered.iter().min_by_key(|&&e| (self.allowed_count(e, banned), e)).expect("uncovered is non-empty");
        let options: Vec<usize> = self.seeing[e].iter().filter(|&c| !banned.contains(c)).collect();
        let before = banned.clone();
        for c in options {
            let mut next = covered.clone();
            next.union_with(&self.masks[c]);
            chosen.push(c);
            self.branch(required, &next, chosen, banned, left - 1)?;
            chosen.pop();
            // later branches skip c, so no cover is found twice
            banned.insert(c);
        }
        *banned = before;
        Ok(())
    }
}

/// Every set of exactly `k` candidates whose masks jointly contain
/// `required`, as sorted index lists.
pub fn enumerate_covers(masks: &[BitSet], required: &BitSet, k: usize, budget: usize) -> Result<Vec<Vec<usize>>> {
    let universe = required.capacity();
    let mut seeing = alloc::vec![BitSet::new(masks.len()); universe];
    for (c, m) in masks.iter().enumerate() {
        for e in m.iter() {
            seeing[e].insert(c);
        }
    }
    let mut en = Enumerator { masks, seeing, nodes: 0, budget, found: BTreeSet::new() };
    let mut banned = BitSet::new(masks.len());
    en.branch(required, &BitSet::new(universe), &mut Vec::new(), &mut banned, k)?;
    Ok(en.found.into_iter().collect())
}

fn cloud_point(cands: &[Candidate], choice: &[usize]) -> CloudPoint {
    let mut guards: Vec<(usize, Rational)> = choice.iter().map(|&c| (cands[c].site, cands[c].t.clone())).collect();
    guards.sort();
    let placement = GuardPlacement::new(choice.iter().map(|&c| cands[c].point.clone()).collect());
    let coords = placement.guards().iter().map(Point::to_f64).collect();
    CloudPoint { guards, placement, coords }
}

fn masks_of(inst: &GalleryInstance, cands: &[Candidate]) -> Result<Vec<BitSet>> {
    cands.iter().map(|c| inst.polygon.visible_vertices(&c.point)).collect()
}

/// All placements of `k` guards on grid candidates that see every vertex.
pub fn sample_solutions(inst: &GalleryInstance, opts: &SampleOptions) -> Result<SolutionCloud> {
    let k = opts.guards.unwrap_or(inst.expected_k);
    let sites: Vec<usize> = (0..inst.guard_segments.len() + inst.guard_points.len()).collect();
    let cands = candidates(inst, &sites, opts)?;
    let masks = masks_of(inst, &cands)?;
    let all = BitSet::full(inst.polygon.len());
    let covers = enumerate_covers(&masks, &all, k, opts.budget).map_err(|e| match e {
        Error::BudgetExceeded { limit } => Error::InvalidParameter(format!(
            "sampling budget of {limit} nodes exceeded; use a coarser resolution or the factored sampler"
        )),
        e => e,
    })?;
    let points = covers.iter().map(|c| cloud_point(&cands, c)).collect();
    Ok(SolutionCloud { resolution: opts.resolution, guards: k, points, grid_step: grid_step(inst, opts.resolution) })
}

/// Guards split over independent parts of the gallery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sites whose guards belong to this part.
    pub sites: Vec<usize>,
    /// Guards the part takes.
    pub guards: usize,
}

/// Sample each component against its own pinning pockets, then keep the
/// combinations that see every vertex. Every output is a genuine solution;
/// the cloud is complete when each part's pockets are seen only from its
/// own sites.
pub fn sample_factored(inst: &GalleryInstance, opts: &SampleOptions, parts: &[Component]) -> Result<SolutionCloud> {
    let n = inst.polygon.len();
    let segs = inst.guard_segments.len();
    // candidates, their masks, and the covers found per part
    type Part = (Vec<Candidate>, Vec<BitSet>, Vec<Vec<usize>>);
    let mut per_part: Vec<Part> = Vec::new();
    for part in parts {
        let cands = candidates(inst, &part.sites, opts)?;
        let masks = masks_of(inst, &cands)?;
        let mut required = BitSet::new(n);
        for &s in &part.sites {
            if s < segs {
                for t in inst.guard_segments[s].tips() {
                    required.insert(t);
                }
            }
        }
        let covers = enumerate_covers(&masks, &required, part.guards, opts.budget)?;
        per_part.push((cands, masks, covers));
    }
    let all = BitSet::full(n);
    let mut points = Vec::new();
    let mut idx = alloc::vec![0usize; parts.len()];
    if per_part.iter().any(|p| p.2.is_empty()) {
        return Ok(SolutionCloud { resolution: opts.resolution, guards: 0, points, grid_step: grid_step(inst, opts.resolution) });
    }
    let mut checked = 0usize;
    loop {
        checked += 1;
        if checked > opts.budget {
            return Err(Error::BudgetExceeded { limit: opts.budget });
        }
        let mut seen = BitSet::new(n);
        let mut pts: Vec<Candidate> = Vec::new();
        for (p, &i) in per_part.iter().zip(&idx) {
            for &c in &p.2[i] {
                seen.union_with(&p.1[c]);
                pts.push(p.0[c].clone());
            }
        }
        if seen == all {
            let choice: Vec<usize> = (0..pts.len()).collect();
            points.push(cloud_point(&pts, &choice));
        }
        // odometer
        let mut d = 0;
        loop {
            if d == idx.len() {
                let guards = parts.iter().map(|p| p.guards).sum();
                return Ok(SolutionCloud { resolution: opts.resolution, guards, points, grid_step: grid_step(inst, opts.resolution) });
            }
            idx[d] += 1;
            if idx[d] < per_part[d].2.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
