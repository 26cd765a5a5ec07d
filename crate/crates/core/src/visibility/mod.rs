//! Visibility regions, their overlay arrangement and the candidate guard set.

mod arrangement;

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{
    angle_cmp, cross_sign, dot_sign, line_intersection, orient_sign, same_direction, sign,
    strictly_inside_segment, Containment, Point, Rational, SimplePolygon,
};

pub use arrangement::{
    arrangement_vertices_for, candidate_guard_points, visibility_arrangement, visibility_arrangement_for, Cell,
    VisibilityArrangement,
};

/// Where a visibility region is seen from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    PolygonVertex(usize),
    FreePoint,
}

/// The closed set of points seeing `source`, as a star-shaped polygon.
///
/// The boundary is weakly simple: when a sightline passes exactly between
/// two collinear reflex vertices the region carries a zero-width antenna.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityRegion {
    pub source: Point,
    pub region: SimplePolygon,
    pub source_kind: SourceKind,
}

impl VisibilityRegion {
    /// Whether some boundary vertex is a reversal (an antenna tip or base).
    pub fn has_antenna(&self) -> bool {
        let v = self.region.vertices();
        let n = v.len();
        (0..n).any(|i| {
            let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            orient_sign(a, b, c) == 0
        })
    }
}

/// Which directions may leave boundary point `p` into the polygon.
enum Cone {
    Full,
    Vertex(usize),
    /// Direction along the edge containing `p` in its interior.
    Edge(Point),
}

impl Cone {
    fn admits(&self, poly: &SimplePolygon, d: &Point) -> bool {
        match self {
            Cone::Full => true,
            Cone::Vertex(i) => poly.vertex_admits(*i, d),
            Cone::Edge(e) => cross_sign(e, d) >= 0,
        }
    }
}

/// First event along the ray `p + t d`, `t > 0`, beyond which the ray leaves
/// the closed polygon. Returns the stopping point.
fn ray_extent(poly: &SimplePolygon, p: &Point, d: &Point) -> Point {
    let far = p.add(d);
    let mut best: Option<(Rational, Point)> = None;
    let consider = |best: &mut Option<(Rational, Point)>, t: Rational, q: Point| {
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            *best = Some((t, q));
        }
    };
    let dd = d.norm2();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let oa = orient_sign(p, &far, a);
        let ob = orient_sign(p, &far, b);
        if oa * ob < 0 {
            // edge straddles the ray's line; keep crossings ahead of p
            if let Some(x) = line_intersection(p, &far, a, b) {
                let t = x.sub(p).dot(d) / &dd;
                if sign(&t) > 0 {
                    consider(&mut best, t, x);
                }
            }
        }
        if oa == 0 && a != p && dot_sign(&a.sub(p), d) > 0 && !poly.vertex_admits(i, d) {
            let t = a.sub(p).dot(d) / &dd;
            consider(&mut best, t, a.clone());
        }
    }
    match best {
        Some((_, q)) => q,
        // unreachable for a bounded polygon; stay at the source
        None => p.clone(),
    }
}

/// Nearest edge properly crossed by the ray `p + t g`, `t > 0`.
fn first_hit(poly: &SimplePolygon, p: &Point, g: &Point) -> Option<usize> {
    let far = p.add(g);
    let gg = g.norm2();
    let mut best: Option<(Rational, usize)> = None;
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        let oa = orient_sign(p, &far, a);
        let ob = orient_sign(p, &far, b);
        if oa * ob >= 0 {
            continue;
        }
        let x = line_intersection(p, &far, a, b)?;
        let t = x.sub(p).dot(g) / &gg;
        if sign(&t) <= 0 {
            continue;
        }
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            best = Some((t, i));
        }
    }
    best.map(|(_, i)| i)
}

/// Exact closed visibility region of `p` inside `poly`.
pub fn visibility_polygon(poly: &SimplePolygon, p: &Point) -> Result<VisibilityRegion> {
    let cls = poly.contains(p);
    if cls == Containment::Exterior {
        return Err(Error::ExteriorPoint(p.clone()));
    }
    let vertex_index = poly.vertex_index(p);
    let cone = match (cls, vertex_index) {
        (Containment::Interior, _) => Cone::Full,
        (_, Some(i)) => Cone::Vertex(i),
        _ => {
            let e = poly.edge_interior_index(p).expect("boundary point lies on an edge");
            let (a, b) = poly.edge(e);
            Cone::Edge(b.sub(a))
        }
    };
    // sector start: direction along the outgoing boundary edge at p
    let reference = match &cone {
        Cone::Full => Point::from_ints(1, 0),
        Cone::Vertex(i) => poly.vertex(*i + 1).sub(p),
        Cone::Edge(e) => e.clone(),
    };

    let mut dirs: Vec<Point> = Vec::new();
    for w in poly.vertices() {
        if w == p {
            continue;
        }
        let d = w.sub(p);
        if cone.admits(poly, &d) {
            dirs.push(d);
        }
    }
    dirs.sort_by(|a, b| angle_cmp(&reference, a, b));
    dirs.dedup_by(|a, b| same_direction(a, b));

    let m = dirs.len();
    let cyclic = matches!(cone, Cone::Full);
    let wedges = if cyclic { m } else { m.saturating_sub(1) };

    // S_i / E_i: where the edge seen inside wedge i meets its bounding rays
    let mut starts: Vec<Point> = Vec::with_capacity(wedges);
    let mut ends: Vec<Point> = Vec::with_capacity(wedges);
    for i in 0..wedges {
        let d0 = &dirs[i];
        let d1 = &dirs[(i + 1) % m];
        let g = if cross_sign(d0, d1) > 0 { d0.add(d1) } else { d0.perp() };
        let e = first_hit(poly, p, &g).expect("ray from inside hits the boundary");
        let (a, b) = poly.edge(e);
        let s = line_intersection(p, &p.add(d0), a, b).expect("edge spans its wedge");
        let t = line_intersection(p, &p.add(d1), a, b).expect("edge spans its wedge");
        starts.push(s);
        ends.push(t);
    }
    let extents: Vec<Point> = dirs.iter().map(|d| ray_extent(poly, p, d)).collect();

    let mut chain: Vec<Point> = Vec::new();
    let dist = |q: &Point| q.sub(p).norm2();
    for i in 0..m {
        let before = if i > 0 {
            Some(&ends[i - 1])
        } else if cyclic && wedges > 0 {
            Some(&ends[wedges - 1])
        } else {
            None
        };
        let after = if i < wedges { Some(&starts[i]) } else { None };
        let before_pt = before.cloned().unwrap_or_else(|| p.clone());
        let after_pt = after.cloned().unwrap_or_else(|| p.clone());
        if !cyclic && i == 0 {
            chain.push(p.clone());
        }
        chain.push(before_pt.clone());
        let r = &extents[i];
        let reach = dist(r);
        if reach > dist(&before_pt) && reach > dist(&after_pt) {
            chain.push(r.clone());
        }
        chain.push(after_pt);
    }
    let mut verts = simplify_chain(chain);
    if let Some(k) = canonical_start(&verts, p, vertex_index.is_some() || cls == Containment::Boundary) {
        verts.rotate_left(k);
    }
    let source_kind = match vertex_index {
        Some(i) => SourceKind::PolygonVertex(i),
        None => SourceKind::FreePoint,
    };
    Ok(VisibilityRegion { source: p.clone(), region: SimplePolygon::new_unchecked(verts), source_kind })
}

/// Drop repeated points and straight pass-through vertices of a closed chain;
/// reversals (antennas) are kept.
fn simplify_chain(chain: Vec<Point>) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(chain.len());
    for q in chain {
        if pts.last() != Some(&q) {
            pts.push(q);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut removed = false;
        let mut out: Vec<Point> = Vec::with_capacity(n);
        for i in 0..n {
            let a = if out.is_empty() { &pts[(i + n - 1) % n] } else { out.last().unwrap() };
            let b = &pts[i];
            let c = &pts[(i + 1) % n];
            if strictly_inside_segment(a, c, b) {
                removed = true;
                continue;
            }
            out.push(b.clone());
        }
        // duplicates can appear when a pass-through removal closes a gap
        let mut dedup: Vec<Point> = Vec::with_capacity(out.len());
        for q in out {
            if dedup.last() != Some(&q) {
                dedup.push(q);
            }
        }
        while dedup.len() > 1 && dedup.first() == dedup.last() {
            dedup.pop();
        }
        pts = dedup;
        if !removed {
            return pts;
        }
    }
}

/// Index the chain should start from: the source itself when it sits on the
/// boundary, otherwise the lexicographically smallest vertex.
fn canonical_start(verts: &[Point], p: &Point, boundary_source: bool) -> Option<usize> {
    if boundary_source {
        if let Some(k) = verts.iter().position(|v| v == p) {
            return Some(k);
        }
    }
    verts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(Ordering::Equal))
        .map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_simple;
    use alloc::vec;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn l_hexagon() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)]).unwrap()
    }

    fn same_cycle(a: &[Point], b: &[Point]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
    }

    #[test]
    fn convex_region_is_polygon() {
        let sq = SimplePolygon::new(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]).unwrap();
        for q in [p(1, 1), p(0, 0), p(2, 0), p(4, 4), Point::from_ratios(1, 3, 7, 2)] {
            let r = visibility_polygon(&sq, &q).unwrap();
            assert!(same_cycle(r.region.vertices(), sq.vertices()), "{q:?}: {:?}", r.region.vertices());
        }
    }

    #[test]
    fn l_hexagon_interior_source() {
        let l = l_hexagon();
        // (1/2, 1/2) lies in both convex arms and therefore sees all of P
        let r = visibility_polygon(&l, &Point::from_ratios(1, 2, 1, 2)).unwrap();
        assert!(same_cycle(r.region.vertices(), l.vertices()), "{:?}", r.region.vertices());
        assert_eq!(r.source_kind, SourceKind::FreePoint);
        // from (7/4, 1/2) the ray through (1, 1) cuts the left arm at (0, 5/3)
        let r = visibility_polygon(&l, &Point::from_ratios(7, 4, 1, 2)).unwrap();
        let expected = vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), Point::from_ratios(0, 1, 5, 3)];
        assert!(same_cycle(r.region.vertices(), &expected), "{:?}", r.region.vertices());
        assert!(validate_simple(r.region.vertices()).is_valid());
    }

    #[test]
    fn l_hexagon_reflex_source_sees_everything() {
        let l = l_hexagon();
        let r = visibility_polygon(&l, &p(1, 1)).unwrap();
        assert!(same_cycle(r.region.vertices(), l.vertices()), "{:?}", r.region.vertices());
        assert_eq!(r.source_kind, SourceKind::PolygonVertex(3));
    }

    #[test]
    fn exterior_source_rejected() {
        assert!(matches!(visibility_polygon(&l_hexagon(), &p(2, 2)), Err(Error::ExteriorPoint(_))));
    }
}
