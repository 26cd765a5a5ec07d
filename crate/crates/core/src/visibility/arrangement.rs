use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::visibility_polygon;
use crate::bitset::BitSet;
use crate::error::Result;
use crate::geometry::{
    angle_cmp, cross_sign, int, line_intersection, on_segment, orient_sign, segments_intersect,
    sign, Point, Rational, SimplePolygon,
};

/// A bounded face of the arrangement.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    /// Boundary walk as indices into [`VisibilityArrangement::vertices`],
    /// counter-clockwise. A vertex may repeat when a dangling edge pokes in.
    pub boundary: Vec<usize>,
    /// Exact point strictly inside the cell.
    pub representative: Point,
    /// Host vertices visible from every point of the open cell.
    pub visible: BitSet,
    /// Lexicographically smallest boundary vertex, the cell's designated
    /// candidate.
    pub chosen_vertex: usize,
}

/// Overlay of the boundaries of a family of vertex visibility regions.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityArrangement {
    pub host: SimplePolygon,
    /// Host vertices whose regions were overlaid.
    pub sources: Vec<usize>,
    /// Arrangement vertices, sorted lexicographically.
    pub vertices: Vec<Point>,
    /// Arrangement edges as sorted index pairs.
    pub edges: Vec<(usize, usize)>,
    pub cells: Vec<Cell>,
}

/// Arrangement of the visibility regions of every host vertex.
pub fn visibility_arrangement(poly: &SimplePolygon) -> Result<VisibilityArrangement> {
    let all: Vec<usize> = (0..poly.len()).collect();
    visibility_arrangement_for(poly, &all)
}

/// Every arrangement vertex, each one a dominating guard position for the
/// cells around it.
pub fn candidate_guard_points(arr: &VisibilityArrangement) -> Vec<Point> {
    arr.vertices.clone()
}

/// Normalised line `a x + b y = c` keyed for grouping collinear chords.
fn line_key(p: &Point, q: &Point) -> (Rational, Rational, Rational) {
    let mut a = q.y() - p.y();
    let mut b = p.x() - q.x();
    let lead = if !a.is_zero() { a.clone() } else { b.clone() };
    a /= &lead;
    b /= &lead;
    let c = &a * p.x() + &b * p.y();
    (a, b, c)
}

/// Coordinate used to order points along a line with key `(a, b, _)`.
fn along(key_b: &Rational, p: &Point) -> Rational {
    // b = 0 means a vertical line; order by y there
    if key_b.is_zero() {
        p.y().clone()
    } else {
        p.x().clone()
    }
}

/// Merge collinear overlapping or touching chords into maximal segments.
fn merge_collinear(segs: Vec<(Point, Point)>) -> Vec<(Point, Point)> {
    let mut groups: BTreeMap<(Rational, Rational, Rational), Vec<(Point, Point)>> = BTreeMap::new();
    for (p, q) in segs {
        if p == q {
            continue;
        }
        let key = line_key(&p, &q);
        let (lo, hi) = if along(&key.1, &p) <= along(&key.1, &q) { (p, q) } else { (q, p) };
        groups.entry(key).or_default().push((lo, hi));
    }
    let mut out = Vec::new();
    for (key, mut list) in groups {
        list.sort_by_key(|x| along(&key.1, &x.0));
        let mut cur: Option<(Point, Point)> = None;
        for (lo, hi) in list {
            match cur.as_mut() {
                Some((_, chi)) if along(&key.1, &lo) <= along(&key.1, chi) => {
                    if along(&key.1, &hi) > along(&key.1, chi) {
                        *chi = hi;
                    }
                }
                _ => {
                    if let Some(c) = cur.take() {
                        out.push(c);
                    }
                    cur = Some((lo, hi));
                }
            }
        }
        if let Some(c) = cur {
            out.push(c);
        }
    }
    out
}

fn bbox(p: &Point, q: &Point) -> (f64, f64, f64, f64) {
    let (px, py) = p.to_f64();
    let (qx, qy) = q.to_f64();
    (px.min(qx), py.min(qy), px.max(qx), py.max(qy))
}

fn boxes_may_touch(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> bool {
    let scale = 1.0 + a.2.abs().max(a.3.abs()).max(b.2.abs()).max(b.3.abs()).max(a.0.abs()).max(a.1.abs());
    let slack = 1e-9 * scale;
    !(a.2 < b.0 - slack || b.2 < a.0 - slack || a.3 < b.1 - slack || b.3 < a.1 - slack)
}

/// Whether region edge `(x, y)` lies along the host boundary.
fn on_host_boundary(poly: &SimplePolygon, x: &Point, y: &Point) -> bool {
    poly.edges().any(|(a, b)| on_segment(a, b, x) && on_segment(a, b, y))
}

type Split = (Vec<(Point, Point)>, Vec<Vec<Point>>);

/// Maximal arrangement segments and, per segment, every point where it
/// meets another one (endpoints included, unsorted).
fn split_segments(poly: &SimplePolygon, sources: &[usize]) -> Result<Split> {
    let mut raw: Vec<(Point, Point)> = poly.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    for &s in sources {
        let reg = visibility_polygon(poly, poly.vertex(s))?;
        let v = reg.region.vertices();
        for i in 0..v.len() {
            let (x, y) = (&v[i], &v[(i + 1) % v.len()]);
            if x != y && !on_host_boundary(poly, x, y) {
                raw.push((x.clone(), y.clone()));
            }
        }
    }
    let segs = merge_collinear(raw);
    let boxes: Vec<_> = segs.iter().map(|(p, q)| bbox(p, q)).collect();

    // split points per segment
    let mut splits: Vec<Vec<Point>> = segs.iter().map(|(p, q)| vec![p.clone(), q.clone()]).collect();
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            if !boxes_may_touch(boxes[i], boxes[j]) {
                continue;
            }
            let (a, b) = (&segs[i].0, &segs[i].1);
            let (c, d) = (&segs[j].0, &segs[j].1);
            if !segments_intersect(a, b, c, d) {
                continue;
            }
            if let Some(x) = line_intersection(a, b, c, d) {
                splits[i].push(x.clone());
                splits[j].push(x);
            }
        }
    }
    Ok((segs, splits))
}

/// Just the vertices of [`visibility_arrangement_for`], sorted: the
/// candidate guard positions, without the cost of tracing cells.
pub fn arrangement_vertices_for(poly: &SimplePolygon, sources: &[usize]) -> Result<Vec<Point>> {
    let (_, splits) = split_segments(poly, sources)?;
    let mut pts: Vec<Point> = splits.into_iter().flatten().collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Arrangement of the visibility regions of the given host vertices, clipped
/// to the host (the host boundary is always part of it).
pub fn visibility_arrangement_for(poly: &SimplePolygon, sources: &[usize]) -> Result<VisibilityArrangement> {
    let (segs, mut splits) = split_segments(poly, sources)?;
    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    for pts in &splits {
        for p in pts {
            let next = index.len();
            index.entry(p.clone()).or_insert(next);
        }
    }
    // renumber in lexicographic order
    let vertices: Vec<Point> = index.keys().cloned().collect();
    for (k, v) in index.values_mut().enumerate() {
        *v = k;
    }

    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (s, pts) in segs.iter().zip(splits.iter_mut()) {
        let d = s.1.sub(&s.0);
        pts.sort_by_key(|x| x.sub(&s.0).dot(&d));
        pts.dedup();
        for w in pts.windows(2) {
            let (u, v) = (index[&w[0]], index[&w[1]]);
            edge_set.insert((u.min(v), u.max(v)));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();

    let cells = extract_cells(poly, &vertices, &edges);
    Ok(VisibilityArrangement {
        host: poly.clone(),
        sources: sources.to_vec(),
        vertices,
        edges,
        cells,
    })
}

fn extract_cells(poly: &SimplePolygon, vertices: &[Point], edges: &[(usize, usize)]) -> Vec<Cell> {
    let n = vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let reference = Point::from_ints(1, 0);
    for (u, list) in adj.iter_mut().enumerate() {
        let base = &vertices[u];
        list.sort_by(|a, b| angle_cmp(&reference, &vertices[*a].sub(base), &vertices[*b].sub(base)));
    }
    // half-edge u -> adj[u][k] is identified by (u, k)
    let mut visited: Vec<Vec<bool>> = adj.iter().map(|l| vec![false; l.len()]).collect();
    let mut cells = Vec::new();
    for start_u in 0..n {
        for start_k in 0..adj[start_u].len() {
            if visited[start_u][start_k] {
                continue;
            }
            let mut walk: Vec<usize> = Vec::new();
            let (mut u, mut k) = (start_u, start_k);
            while !visited[u][k] {
                visited[u][k] = true;
                walk.push(u);
                let v = adj[u][k];
                let pos = adj[v].iter().position(|&w| w == u).expect("symmetric adjacency");
                let deg = adj[v].len();
                let nk = (pos + deg - 1) % deg;
                u = v;
                k = nk;
            }
            let mut area = Rational::zero();
            for i in 0..walk.len() {
                area += vertices[walk[i]].cross(&vertices[walk[(i + 1) % walk.len()]]);
            }
            if sign(&area) <= 0 {
                continue;
            }
            let representative = interior_point(vertices, &walk, &adj);
            let visible = poly.visible_vertices(&representative).unwrap_or_else(|_| BitSet::new(poly.len()));
            let chosen_vertex = *walk.iter().min_by(|a, b| vertices[**a].cmp(&vertices[**b])).expect("non-empty walk");
            cells.push(Cell { boundary: walk, representative, visible, chosen_vertex });
        }
    }
    cells.sort_by(|a, b| a.representative.cmp(&b.representative));
    cells
}

fn strictly_in_triangle(t: &[Point; 3], q: &Point) -> bool {
    orient_sign(&t[0], &t[1], q) > 0 && orient_sign(&t[1], &t[2], q) > 0 && orient_sign(&t[2], &t[0], q) > 0
}

fn on_triangle_boundary(t: &[Point; 3], q: &Point) -> bool {
    on_segment(&t[0], &t[1], q) || on_segment(&t[1], &t[2], q) || on_segment(&t[2], &t[0], q)
}

/// Whether no face edge meets the open triangle.
fn triangle_is_clean(t: &[Point; 3], vertices: &[Point], walk: &[usize]) -> bool {
    for i in 0..walk.len() {
        let x = &vertices[walk[i]];
        let y = &vertices[walk[(i + 1) % walk.len()]];
        if strictly_in_triangle(t, x) || strictly_in_triangle(t, y) {
            return false;
        }
        for s in 0..3 {
            if crate::geometry::segments_cross_properly(x, y, &t[s], &t[(s + 1) % 3]) {
                return false;
            }
        }
        if on_triangle_boundary(t, x) && on_triangle_boundary(t, y) && strictly_in_triangle(t, &x.midpoint(y)) {
            return false;
        }
    }
    true
}

/// Exact point strictly inside the face bounded by `walk`: the centroid of an
/// empty ear, or of a shrunken corner triangle when no ear is empty.
fn interior_point(vertices: &[Point], walk: &[usize], _adj: &[Vec<usize>]) -> Point {
    let l = walk.len();
    let corner = |i: usize| {
        let a = &vertices[walk[(i + l - 1) % l]];
        let b = &vertices[walk[i]];
        let c = &vertices[walk[(i + 1) % l]];
        (a, b, c)
    };
    let third = Rational::one() / int(3);
    let mut first_convex = None;
    for i in 0..l {
        let (a, b, c) = corner(i);
        if orient_sign(a, b, c) <= 0 {
            continue;
        }
        first_convex.get_or_insert(i);
        let t = [a.clone(), b.clone(), c.clone()];
        if triangle_is_clean(&t, vertices, walk) {
            return a.add(b).add(c).scale(&third);
        }
    }
    let i = first_convex.expect("a bounded face has a convex corner");
    let (a, b, c) = corner(i);
    let mut eps = Rational::one() / int(2);
    loop {
        let a2 = b.lerp(a, &eps);
        let c2 = b.lerp(c, &eps);
        let t = [a2, b.clone(), c2];
        if triangle_is_clean(&t, vertices, walk) {
            return t[0].add(&t[1]).add(&t[2]).scale(&third);
        }
        eps /= int(2);
        debug_assert!(cross_sign(&a.sub(b), &c.sub(b)) != 0);
    }
}
