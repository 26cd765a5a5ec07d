//! Sausages: the union of the four pocket wedges of a guard segment.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{chord_of, GalleryInstance};
use crate::bitset::BitSet;
use crate::error::Result;
use crate::geometry::{line_intersection, rat, segments_intersect, Point, Rational, SimplePolygon};
use crate::visibility::visibility_polygon;

/// Pairs `(i, j)`, `i < j`, in three flavours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveData {
    /// Segments whose sausages (closed pocket wedges) meet.
    pub sausage: Vec<(usize, usize)>,
    /// Segments whose chords through the core meet: the limit of
    /// `sausage` as apertures shrink.
    pub chord: Vec<(usize, usize)>,
    /// Segments that meet.
    pub segment: Vec<(usize, usize)>,
}

/// A family of placements in which every sausage holds a guard but some
/// segment holds none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpuriousPattern {
    /// Segments left without a guard.
    pub unoccupied: Vec<usize>,
    /// One concrete placement of the family.
    pub witness: Vec<Point>,
    /// Placements enumerated for the family.
    pub placements: usize,
    /// No enumerated placement sees every polygon vertex.
    pub refuted: bool,
}

/// Output of [`validate_sausages`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SausageReport {
    /// Per segment, the largest offset of any pocket wedge from the
    /// segment's line within the core's extent, in units of the pocket
    /// normal. Exactly linear in the aperture.
    pub width_bounds: Vec<Rational>,
    pub nerve_edges: Vec<(usize, usize)>,
    pub segment_nerve: Vec<(usize, usize)>,
    pub chord_nerve: Vec<(usize, usize)>,
    pub spurious_candidates: Vec<SpuriousPattern>,
}

impl SausageReport {
    /// Sausages meet exactly where segments do.
    pub fn nerve_matches(&self) -> bool {
        self.nerve_edges == self.segment_nerve
    }

    /// Sausage edges not explained by intersecting segments.
    pub fn extra_edges(&self) -> Vec<(usize, usize)> {
        self.nerve_edges.iter().filter(|e| !self.segment_nerve.contains(e)).copied().collect()
    }
}

fn bbox(poly: &SimplePolygon) -> (f64, f64, f64, f64) {
    poly.bbox_f64()
}

/// Closed regions meet: an edge pair touches or one holds a vertex of the
/// other.
fn regions_meet(a: &SimplePolygon, b: &SimplePolygon) -> bool {
    let (ax0, ay0, ax1, ay1) = bbox(a);
    let (bx0, by0, bx1, by1) = bbox(b);
    let slack = 1e-9;
    if ax1 < bx0 - slack || bx1 < ax0 - slack || ay1 < by0 - slack || by1 < ay0 - slack {
        return false;
    }
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if segments_intersect(p, q, r, s) {
                return true;
            }
        }
    }
    b.contains_closed(a.vertex(0)) || a.contains_closed(b.vertex(0))
}

fn pairs(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if f(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Nerves of the sausages, chords and segments of an instance.
pub fn sausage_nerve(inst: &GalleryInstance) -> Result<NerveData> {
    let segs = inst.segments();
    let n = segs.len();
    let mut regions: Vec<Vec<SimplePolygon>> = Vec::with_capacity(n);
    for g in &inst.guard_segments {
        let mut rs = Vec::with_capacity(4);
        for p in &g.pockets {
            rs.push(visibility_polygon(&inst.polygon, &p.apex)?.region);
        }
        regions.push(rs);
    }
    let chords: Vec<(Point, Point)> = segs
        .iter()
        .map(|s| {
            let c = chord_of(&inst.core, s)?;
            Ok((c.at(&s.a, &c.lo), c.at(&s.a, &c.hi)))
        })
        .collect::<Result<_>>()?;
    let sausage = pairs(n, |i, j| regions[i].iter().any(|a| regions[j].iter().any(|b| regions_meet(a, b))));
    let chord = pairs(n, |i, j| segments_intersect(&chords[i].0, &chords[i].1, &chords[j].0, &chords[j].1));
    let segment = pairs(n, |i, j| segments_intersect(&segs[i].a, &segs[i].b, &segs[j].a, &segs[j].b));
    Ok(NerveData { sausage, chord, segment })
}

/// Offset coordinates `(tau, eta)` of `x` relative to `origin` in the frame
/// `(dir, perp(dir))`.
fn frame(origin: &Point, dir: &Point, x: &Point) -> (Rational, Rational) {
    let d = x.sub(origin);
    let n2 = dir.norm2();
    (d.dot(dir) / &n2, dir.cross(&d) / n2)
}

fn width_bound(inst: &GalleryInstance, i: usize) -> Result<Rational> {
    let g = &inst.guard_segments[i];
    let c = chord_of(&inst.core, &g.segment)?;
    let taus: Vec<Rational> = inst.core.iter().map(|v| frame(&g.segment.a, &c.dir, v).0).collect();
    let tmin = taus.iter().min().cloned().unwrap_or_else(Rational::zero);
    let tmax = taus.iter().max().cloned().unwrap_or_else(Rational::zero);
    let mut best = Rational::zero();
    for p in &g.pockets {
        let (ta, ea) = frame(&g.segment.a, &c.dir, &p.apex);
        for t in [&p.targets.0, &p.targets.1] {
            let (tt, et) = frame(&g.segment.a, &c.dir, t);
            let end = if tt > ta { &tmax } else { &tmin };
            let slope = (&et - &ea) / (&tt - &ta);
            let at_end = &ea + slope * (end - &ta);
            for e in [ea.abs(), at_end.abs()] {
                if e > best {
                    best = e;
                }
            }
        }
    }
    Ok(best)
}

/// Sample points used to look for pseudo-solutions: `resolution + 1` evenly
/// spaced points per segment, all segment crossings, and every point where
/// two chords cross away from the segments.
fn sample_points(inst: &GalleryInstance, resolution: usize, nerve: &NerveData) -> Result<Vec<Point>> {
    let segs = inst.segments();
    let mut pts: Vec<Point> = Vec::new();
    let r = resolution.max(1) as i64;
    for s in &segs {
        for j in 0..=r {
            pts.push(s.at(&rat(j, r)));
        }
    }
    for &(i, j) in &nerve.chord {
        if let Some(x) = line_intersection(&segs[i].a, &segs[i].b, &segs[j].a, &segs[j].b) {
            if inst.polygon.contains_closed(&x) {
                pts.push(x);
            }
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

const PATTERN_BUDGET: usize = 20_000;
const REALIZATION_CAP: usize = 64;

struct Enumerator<'a> {
    classes: &'a [(BitSet, BitSet, Vec<usize>)],
    masks: &'a [BitSet],
    all: BitSet,
    k: usize,
    families: BTreeMap<Vec<usize>, SpuriousPattern>,
    points: &'a [Point],
    patterns: usize,
}

impl Enumerator<'_> {
    fn dfs(&mut self, start: usize, chosen: &mut Vec<usize>, covered: &BitSet) {
        if self.patterns >= PATTERN_BUDGET {
            return;
        }
        if covered.is_full() {
            let mut occupied = BitSet::new(self.all.capacity());
            for &c in chosen.iter() {
                occupied.union_with(&self.classes[c].1);
            }
            if !occupied.is_full() {
                self.patterns += 1;
                self.record(chosen, &occupied);
            }
            return;
        }
        if chosen.len() == self.k {
            return;
        }
        // branch on the first uncovered sausage; classes are tried in
        // non-decreasing order so each multiset is met once
        let target = (0..self.all.capacity()).find(|&s| !covered.contains(s)).expect("not full");
        for c in start..self.classes.len() {
            if !self.classes[c].0.contains(target) {
                continue;
            }
            let mut next = covered.clone();
            next.union_with(&self.classes[c].0);
            chosen.push(c);
            self.dfs(c, chosen, &next);
            chosen.pop();
        }
    }

    fn record(&mut self, chosen: &[usize], occupied: &BitSet) {
        let unoccupied: Vec<usize> = (0..occupied.capacity()).filter(|&s| !occupied.contains(s)).collect();
        // walk realizations, one representative per chosen class
        let mut idx = alloc::vec![0usize; chosen.len()];
        let mut tried = 0;
        let mut covered_any = false;
        let mut witness: Option<Vec<Point>> = None;
        loop {
            let mut seen = BitSet::new(self.masks[0].capacity());
            let mut pts = Vec::with_capacity(chosen.len());
            for (slot, &c) in chosen.iter().enumerate() {
                let pi = self.classes[c].2[idx[slot]];
                seen.union_with(&self.masks[pi]);
                pts.push(self.points[pi].clone());
            }
            tried += 1;
            if seen.is_full() {
                covered_any = true;
                witness = Some(pts);
                break;
            }
            if witness.is_none() {
                witness = Some(pts);
            }
            if tried >= REALIZATION_CAP {
                break;
            }
            let mut slot = 0;
            loop {
                if slot == chosen.len() {
                    break;
                }
                idx[slot] += 1;
                if idx[slot] < self.classes[chosen[slot]].2.len() {
                    break;
                }
                idx[slot] = 0;
                slot += 1;
            }
            if slot == chosen.len() {
                break;
            }
        }
        let entry = self.families.entry(unoccupied.clone()).or_insert_with(|| SpuriousPattern {
            unoccupied,
            witness: witness.clone().unwrap_or_default(),
            placements: 0,
            refuted: true,
        });
        entry.placements += tried;
        if covered_any {
            entry.refuted = false;
            entry.witness = witness.unwrap_or_default();
        }
    }
}

/// Sausage widths, the three nerves, and the pseudo-solution families found
/// at `resolution` samples per segment with `expected_k` guards.
///
/// A pseudo-solution puts a guard in every sausage without putting one on
/// every segment. Each family (keyed by the unoccupied segments) is checked
/// exactly; it is refuted when none of its placements sees every vertex.
pub fn validate_sausages(inst: &GalleryInstance, resolution: usize) -> Result<SausageReport> {
    let nerve = sausage_nerve(inst)?;
    let segs = inst.segments();
    let n = segs.len();
    let width_bounds = (0..n).map(|i| width_bound(inst, i)).collect::<Result<Vec<_>>>()?;
    let points = sample_points(inst, resolution, &nerve)?;
    let masks: Vec<BitSet> = points.iter().map(|p| inst.polygon.visible_vertices(p)).collect::<Result<_>>()?;
    // classify samples by (sausages entered, segments stood on)
    let mut by_key: BTreeMap<(BitSet, BitSet), Vec<usize>> = BTreeMap::new();
    for (pi, m) in masks.iter().enumerate() {
        let mut inside = BitSet::new(n);
        let mut on = BitSet::new(n);
        for (s, g) in inst.guard_segments.iter().enumerate() {
            if g.tips().iter().any(|&t| m.contains(t)) {
                inside.insert(s);
            }
            if g.segment.contains(&points[pi]) {
                on.insert(s);
            }
        }
        if !inside.is_empty() {
            by_key.entry((inside, on)).or_default().push(pi);
        }
    }
    let classes: Vec<(BitSet, BitSet, Vec<usize>)> = by_key.into_iter().map(|((a, b), v)| (a, b, v)).collect();
    let mut en = Enumerator {
        classes: &classes,
        masks: &masks,
        all: BitSet::full(n),
        k: inst.expected_k,
        families: BTreeMap::new(),
        points: &points,
        patterns: 0,
    };
    if n > 0 && !masks.is_empty() {
        en.dfs(0, &mut Vec::new(), &BitSet::new(n));
    }
    let spurious_candidates = en.families.into_values().collect();
    Ok(SausageReport {
        width_bounds,
        nerve_edges: nerve.sausage,
        segment_nerve: nerve.segment,
        chord_nerve: nerve.chord,
        spurious_candidates,
    })
}
