use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::point::{sign, Point, Rational};
use super::predicates::{
    cross_sign, dot_diff_sign, dot_sign, on_segment, orient_sign, segments_cross_properly, segments_intersect,
    strictly_inside_segment,
};
use crate::error::{Error, Result};

/// A closed segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn contains(&self, p: &Point) -> bool {
        on_segment(&self.a, &self.b, p)
    }

    /// `a + t (b - a)`.
    pub fn at(&self, t: &Rational) -> Point {
        self.a.lerp(&self.b, t)
    }

    pub fn direction(&self) -> Point {
        self.b.sub(&self.a)
    }
}

/// Point classification against a closed polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// One broken polygon invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices(usize),
    /// Vertex `i` equals vertex `i + 1`.
    DuplicateVertex(usize),
    /// Vertex `i` is collinear with its two neighbours.
    CollinearVertex(usize),
    /// Non-adjacent edges `(i, j)`, `i < j`, meet.
    SelfIntersection(usize, usize),
    /// Edges `(i, j)` overlap along a segment.
    CollinearOverlap(usize, usize),
    /// Signed area is not positive.
    Clockwise,
}

/// Result of [`validate_simple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// The counter-clockwise re-ordering, offered when orientation is the only
    /// problem.
    pub auto_fix: Option<Vec<Point>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            match v {
                Violation::TooFewVertices(n) => write!(f, "only {n} vertices")?,
                Violation::DuplicateVertex(i) => write!(f, "vertex {i} repeats its successor")?,
                Violation::CollinearVertex(i) => write!(f, "vertex {i} is collinear with its neighbours")?,
                Violation::SelfIntersection(i, j) => write!(f, "edges {i} and {j} intersect")?,
                Violation::CollinearOverlap(i, j) => write!(f, "edges {i} and {j} overlap")?,
                Violation::Clockwise => write!(f, "clockwise orientation (reverse to fix)")?,
            }
        }
        Ok(())
    }
}

/// Twice the signed area of the closed chain.
pub fn signed_area2(vertices: &[Point]) -> Rational {
    let n = vertices.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        acc += vertices[i].cross(&vertices[(i + 1) % n]);
    }
    acc
}

/// Check every simple-polygon invariant of a raw vertex list.
pub fn validate_simple(vertices: &[Point]) -> ValidationReport {
    let n = vertices.len();
    let mut violations = Vec::new();
    if n < 3 {
        violations.push(Violation::TooFewVertices(n));
        return ValidationReport { violations, auto_fix: None };
    }
    for i in 0..n {
        if vertices[i] == vertices[(i + 1) % n] {
            violations.push(Violation::DuplicateVertex(i));
        }
    }
    for i in 0..n {
        let a = &vertices[(i + n - 1) % n];
        let b = &vertices[i];
        let c = &vertices[(i + 1) % n];
        if a != b && b != c && orient_sign(a, b, c) == 0 {
            violations.push(Violation::CollinearVertex(i));
        }
    }
    let structural = !violations.is_empty();
    if !structural {
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (c, d) = (&vertices[j], &vertices[(j + 1) % n]);
                if !segments_intersect(a, b, c, d) {
                    continue;
                }
                if orient_sign(a, b, c) == 0 && orient_sign(a, b, d) == 0 && overlap_len_positive(a, b, c, d) {
                    violations.push(Violation::CollinearOverlap(i, j));
                } else {
                    violations.push(Violation::SelfIntersection(i, j));
                }
            }
        }
    }
    let mut auto_fix = None;
    if sign(&signed_area2(vertices)) <= 0 {
        violations.push(Violation::Clockwise);
        if violations.len() == 1 {
            let mut rev: Vec<Point> = vertices.to_vec();
            rev.reverse();
            auto_fix = Some(rev);
        }
    }
    ValidationReport { violations, auto_fix }
}

fn overlap_len_positive(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    // collinear segments: they overlap in more than a point when some endpoint
    // lies strictly inside the other segment or both coincide
    strictly_inside_segment(a, b, c)
        || strictly_inside_segment(a, b, d)
        || strictly_inside_segment(c, d, a)
        || strictly_inside_segment(c, d, b)
        || (a == c && b == d)
        || (a == d && b == c)
}

/// Which directions at a vertex point into the closed polygon.
#[derive(Clone, Debug)]
struct Corner {
    /// Direction to the next vertex.
    u: Point,
    /// Direction to the previous vertex.
    v: Point,
    /// Sign of `u x v`: positive at a convex corner.
    turn: i8,
    at: Point,
    next: Point,
    prev: Point,
}

impl Corner {
    fn admits(&self, d: &Point) -> bool {
        match self.turn {
            1 => cross_sign(&self.u, d) >= 0 && cross_sign(d, &self.v) >= 0,
            -1 => !(cross_sign(&self.v, d) > 0 && cross_sign(d, &self.u) > 0),
            _ => {
                if dot_sign(&self.u, &self.v) < 0 {
                    cross_sign(&self.u, d) >= 0
                } else {
                    // zero-angle spike: only the spike direction itself
                    cross_sign(&self.u, d) == 0 && dot_sign(&self.u, d) > 0
                }
            }
        }
    }

    /// [`Corner::admits`] for the direction from the corner towards
    /// `target`, without forming the difference vector.
    fn admits_toward(&self, target: &Point) -> bool {
        let (a, n, p) = (&self.at, &self.next, &self.prev);
        match self.turn {
            1 => orient_sign(a, n, target) >= 0 && orient_sign(a, target, p) >= 0,
            -1 => !(orient_sign(a, p, target) > 0 && orient_sign(a, target, n) > 0),
            _ => {
                if dot_sign(&self.u, &self.v) < 0 {
                    orient_sign(a, n, target) >= 0
                } else {
                    orient_sign(a, n, target) == 0 && dot_diff_sign(a, n, target) > 0
                }
            }
        }
    }
}

/// Simple counter-clockwise polygon with exact vertices, treated as a closed
/// region.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
    corners: Vec<Corner>,
    bbox: (f64, f64, f64, f64),
}

impl PartialEq for Corner {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}

impl SimplePolygon {
    /// Validate and build. Fails with the full report on any violation.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let report = validate_simple(&vertices);
        if !report.is_valid() {
            return Err(Error::InvalidPolygon(report.into()));
        }
        Ok(Self::new_unchecked(vertices))
    }

    /// Like [`SimplePolygon::new`] but accepts clockwise input by reversing it.
    pub fn new_oriented(vertices: Vec<Point>) -> Result<Self> {
        let report = validate_simple(&vertices);
        if report.is_valid() {
            return Ok(Self::new_unchecked(vertices));
        }
        match report.auto_fix {
            Some(fixed) => Ok(Self::new_unchecked(fixed)),
            None => Err(Error::InvalidPolygon(report.into())),
        }
    }

    /// Build without validation. Callers guarantee the invariants; weakly
    /// simple chains (visibility regions with antennas) also go through here.
    pub fn new_unchecked(vertices: Vec<Point>) -> Self {
        let n = vertices.len();
        let mut corners = Vec::with_capacity(n);
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let w = &vertices[i];
            let u = vertices[(i + 1) % n].sub(w);
            let v = vertices[(i + n - 1) % n].sub(w);
            let turn = cross_sign(&u, &v);
            corners.push(Corner { u, v, turn, at: w.clone(), next: vertices[(i + 1) % n].clone(), prev: vertices[(i + n - 1) % n].clone() });
            x0 = x0.min(w.fx);
            y0 = y0.min(w.fy);
            x1 = x1.max(w.fx);
            y1 = y1.max(w.fy);
        }
        SimplePolygon { vertices, corners, bbox: (x0, y0, x1, y1) }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn edge_segments(&self) -> Vec<Segment> {
        self.edges().map(|(a, b)| Segment { a: a.clone(), b: b.clone() }).collect()
    }

    /// Float bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bbox_f64(&self) -> (f64, f64, f64, f64) {
        self.bbox
    }

    pub fn area2(&self) -> Rational {
        signed_area2(&self.vertices)
    }

    pub fn is_convex(&self) -> bool {
        self.corners.iter().all(|c| c.turn > 0)
    }

    /// Sign of the turn at vertex `i`: 1 convex, -1 reflex, 0 straight or
    /// a zero-angle spike.
    pub fn corner_turn(&self, i: usize) -> i8 {
        self.corners[i].turn
    }

    /// Reflex vertex test (interior angle above a half turn).
    pub fn is_reflex(&self, i: usize) -> bool {
        self.corners[i].turn < 0
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Index of an edge whose relative interior contains `p`.
    pub fn edge_interior_index(&self, p: &Point) -> Option<usize> {
        (0..self.len()).find(|&i| {
            let (a, b) = self.edge(i);
            strictly_inside_segment(a, b, p)
        })
    }

    fn outside_bbox(&self, p: &Point) -> bool {
        let (x0, y0, x1, y1) = self.bbox;
        let slack = 1e-9 * (1.0 + x1.abs().max(x0.abs()).max(y1.abs()).max(y0.abs()));
        p.fx < x0 - slack || p.fx > x1 + slack || p.fy < y0 - slack || p.fy > y1 + slack
    }

    /// Exact interior / boundary / exterior classification.
    pub fn contains(&self, p: &Point) -> Containment {
        if self.outside_bbox(p) {
            return Containment::Exterior;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            let a_up = a.y() > p.y();
            let b_up = b.y() > p.y();
            if a_up == b_up {
                // horizontal line through p misses the edge (or touches at
                // an endpoint on one side); only the boundary check matters
                if a.y() == p.y() && b.y() == p.y() && on_segment(a, b, p) {
                    return Containment::Boundary;
                }
                if (a == p) || (b == p) {
                    return Containment::Boundary;
                }
                continue;
            }
            let o = orient_sign(a, b, p);
            if o == 0 && on_segment(a, b, p) {
                return Containment::Boundary;
            }
            // edge straddles the line y = p.y; count it when the crossing is
            // to the right of p
            if (b_up && o > 0) || (!b_up && o < 0) {
                inside = !inside;
            }
        }
        if inside {
            Containment::Interior
        } else {
            Containment::Exterior
        }
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.contains(p) != Containment::Exterior
    }

    /// Whether direction `d` leaves boundary point `p` into the closed
    /// polygon. `p` must be a vertex or lie on an edge.
    /// Whether the segment from boundary point `p` towards `target` starts
    /// into the closed polygon.
    fn admits_at(&self, p: &Point, target: &Point) -> bool {
        if let Some(i) = self.vertex_index(p) {
            return self.corners[i].admits_toward(target);
        }
        if let Some(i) = self.edge_interior_index(p) {
            let (a, b) = self.edge(i);
            // p is on line ab, so (b - a) x (target - p) = orient(a, b, target)
            return orient_sign(a, b, target) >= 0;
        }
        true
    }

    /// Whether `d` leaves vertex `i` into the closed polygon.
    pub fn vertex_admits(&self, i: usize, d: &Point) -> bool {
        self.corners[i].admits(d)
    }

    /// Closed visibility: every point of `seg(p, q)` lies in the polygon.
    pub fn sees(&self, p: &Point, q: &Point) -> Result<bool> {
        let cp = self.contains(p);
        if cp == Containment::Exterior {
            return Err(Error::ExteriorPoint(p.clone()));
        }
        let cq = self.contains(q);
        if cq == Containment::Exterior {
            return Err(Error::ExteriorPoint(q.clone()));
        }
        Ok(self.sees_classified(p, cp, q, cq))
    }

    /// [`SimplePolygon::sees`] for points already known to be in the polygon.
    pub(crate) fn sees_classified(&self, p: &Point, cp: Containment, q: &Point, cq: Containment) -> bool {
        if p == q {
            return true;
        }
        if cp == Containment::Boundary && !self.admits_at(p, q) {
            return false;
        }
        if cq == Containment::Boundary && !self.admits_at(q, p) {
            return false;
        }
        let (sx0, sx1) = if p.fx < q.fx { (p.fx, q.fx) } else { (q.fx, p.fx) };
        let (sy0, sy1) = if p.fy < q.fy { (p.fy, q.fy) } else { (q.fy, p.fy) };
        let slack = 1e-9 * (1.0 + sx1.abs().max(sx0.abs()).max(sy1.abs()).max(sy0.abs()));
        for (i, (a, b)) in self.edges().enumerate() {
            // cheap float box reject; the slack keeps it conservative
            let (ex0, ex1) = if a.fx < b.fx { (a.fx, b.fx) } else { (b.fx, a.fx) };
            let (ey0, ey1) = if a.fy < b.fy { (a.fy, b.fy) } else { (b.fy, a.fy) };
            if ex1 < sx0 - slack || ex0 > sx1 + slack || ey1 < sy0 - slack || ey0 > sy1 + slack {
                continue;
            }
            if segments_cross_properly(p, q, a, b) {
                return false;
            }
            if a != p && a != q && on_segment(p, q, a) {
                let c = &self.corners[i];
                // a lies between p and q, so these are the two directions
                if !c.admits_toward(q) || !c.admits_toward(p) {
                    return false;
                }
            }
        }
        true
    }

    /// Bitmask of the vertices seen from `p`, which must lie in the polygon.
    pub fn visible_vertices(&self, p: &Point) -> Result<crate::bitset::BitSet> {
        let cp = self.contains(p);
        if cp == Containment::Exterior {
            return Err(Error::ExteriorPoint(p.clone()));
        }
        Ok(self.visible_vertices_classified(p, cp))
    }

    /// [`SimplePolygon::visible_vertices`] restricted to the vertices in
    /// `among`; the others are reported unseen.
    pub fn visible_vertices_among(&self, p: &Point, among: &crate::bitset::BitSet) -> Result<crate::bitset::BitSet> {
        let cp = self.contains(p);
        if cp == Containment::Exterior {
            return Err(Error::ExteriorPoint(p.clone()));
        }
        let mut bits = crate::bitset::BitSet::new(self.len());
        for i in among.iter() {
            if self.sees_classified(p, cp, &self.vertices[i], Containment::Boundary) {
                bits.insert(i);
            }
        }
        Ok(bits)
    }

    pub(crate) fn visible_vertices_classified(&self, p: &Point, cp: Containment) -> crate::bitset::BitSet {
        let mut bits = crate::bitset::BitSet::new(self.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if self.sees_classified(p, cp, v, Containment::Boundary) {
                bits.insert(i);
            }
        }
        bits
    }
}
