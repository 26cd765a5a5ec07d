//! Generators for the named gallery families.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{chord_of, sausage_nerve, Family, GalleryBuilder, GalleryInstance, PocketOptions, Side};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, line_intersection, rat, Point, Rational, Segment};

/// Knobs shared by all generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Initial pocket aperture.
    pub aperture: Rational,
    /// Distance from the outermost segment endpoints to the core boundary.
    pub margin: Rational,
    /// How many times the aperture may be halved while sausages intersect
    /// more than the chords do.
    pub shrink_rounds: usize,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { aperture: rat(1, 64), margin: rat(1, 2), shrink_rounds: 6 }
    }
}

/// Segments and extra pockets of a family, before any polygon exists.
pub(crate) struct Layout {
    pub segments: Vec<Segment>,
    /// `(name, apex, target, target)`.
    pub pockets: Vec<(&'static str, Point, Point, Point)>,
    pub expected_k: usize,
    /// Explicit core, otherwise the hull of all points grown by the margin.
    pub core: Option<Vec<Point>>,
}

fn p(x: i64, y: i64) -> Point {
    Point::from_ints(x, y)
}

fn seg(a: Point, b: Point) -> Segment {
    Segment::new(a, b).expect("family segments are non-degenerate")
}

fn triangle(a: &Point, b: &Point, c: &Point) -> Vec<Segment> {
    vec![seg(a.clone(), b.clone()), seg(b.clone(), c.clone()), seg(c.clone(), a.clone())]
}

/// Vertices of a nearly regular `k`-gon on the integer grid, one side at
/// the bottom. The radius grows until rounding keeps the polygon strictly
/// convex.
fn rational_polygon(k: usize) -> Vec<Point> {
    if k == 4 {
        return vec![p(0, 0), p(16, 0), p(16, 16), p(0, 16)];
    }
    let pi = core::f64::consts::PI;
    let mut r = 16.0;
    loop {
        let pts: Vec<Point> = (0..k)
            .map(|i| {
                let theta = -pi / 2.0 + pi / k as f64 + 2.0 * pi * i as f64 / k as f64;
                p(libm::round(r * libm::cos(theta)) as i64, libm::round(r * libm::sin(theta)) as i64)
            })
            .collect();
        if convex_hull(&pts).len() == k {
            return pts;
        }
        r *= 2.0;
    }
}

/// One triangle of the chain and torus layouts, leftmost side vertical.
fn chain_triangle(offset: i64) -> [Point; 3] {
    [p(offset, 0), p(offset, 6), p(offset + 3, 3)]
}

fn chain_layout(k: usize) -> Vec<Segment> {
    let mut out = Vec::new();
    for i in 0..k as i64 {
        let [a, b, c] = chain_triangle(12 * i);
        out.extend(triangle(&a, &b, &c));
        if i + 1 < k as i64 {
            let o = 12 * i;
            // link side, link, link side: touching this triangle's slanted
            // side and the next triangle's vertical side at interior points
            out.push(seg(p(o + 2, 2), p(o + 4, 0)));
            out.push(seg(p(o + 4, 0), p(o + 8, 4)));
            out.push(seg(p(o + 8, 4), p(o + 12, 2)));
        }
    }
    out
}

/// A diamond whose first side is extended to a pole touching `root`.
fn flag(root: Point, along: Point, across: Point) -> Vec<Segment> {
    let p1 = root.add(&along);
    let p2 = p1.add(&along);
    let p3 = p2.add(&across);
    let p4 = p1.add(&across);
    vec![seg(root, p2.clone()), seg(p2, p3.clone()), seg(p3, p4.clone()), seg(p4, p1)]
}

pub(crate) fn layout(family: &Family) -> Result<Layout> {
    let plain = |segments: Vec<Segment>, expected_k: usize| Layout { segments, pockets: Vec::new(), expected_k, core: None };
    match *family {
        Family::Circle => Ok(plain(triangle(&p(0, 0), &p(4, 0), &p(2, 3)), 2)),
        Family::Clover(2) => {
            let (a, b, c) = (p(0, 0), p(8, 0), p(4, 7));
            let mid = |u: &Point, v: &Point| u.midpoint(v);
            let (mab, mbc, mca) = (mid(&a, &b), mid(&b, &c), mid(&c, &a));
            // the side towards `a` stops short of it, breaking one loop
            let cut = c.lerp(&a, &rat(3, 4));
            Ok(plain(
                vec![
                    seg(a.clone(), b.clone()),
                    seg(b.clone(), c.clone()),
                    seg(c.clone(), cut),
                    seg(mab.clone(), mbc.clone()),
                    seg(mbc, mca.clone()),
                    seg(mca, mab),
                ],
                3,
            ))
        }
        Family::Clover(k) if k >= 3 => {
            let poly = rational_polygon(k);
            let mids: Vec<Point> = (0..k).map(|i| poly[i].midpoint(&poly[(i + 1) % k])).collect();
            let mut segments: Vec<Segment> = (0..k).map(|i| seg(poly[i].clone(), poly[(i + 1) % k].clone())).collect();
            for i in 0..k {
                for j in i + 1..k {
                    segments.push(seg(mids[i].clone(), mids[j].clone()));
                }
            }
            Ok(plain(segments, k))
        }
        Family::Chain(k) if k >= 1 => Ok(plain(chain_layout(k), 3 * k - 1)),
        Family::Necklace(n) if n >= 4 && n % 4 == 0 => {
            let k = n / 4;
            let mut segments = chain_layout(k);
            let last = 12 * (k as i64 - 1);
            segments.extend(flag(p(0, 1), p(-1, 1), p(-1, -1)));
            segments.extend(flag(p(last + 1, 5), p(1, 1), p(1, -1)));
            Ok(plain(segments, 3 * k - 1 + 4))
        }
        Family::Grid { h, v } if h >= 1 && v >= 1 => {
            let (hi, vi) = (h as i64, v as i64);
            let mut segments = Vec::new();
            for j in 1..=hi {
                segments.push(seg(p(0, j), p(vi + 1, j)));
            }
            for i in 1..=vi {
                segments.push(seg(p(i, 0), p(i, hi + 1)));
            }
            Ok(plain(segments, h.max(v)))
        }
        Family::Torus => {
            let [a, b, c] = chain_triangle(0);
            let [d, e, f] = chain_triangle(12);
            let mut segments = triangle(&a, &b, &c);
            segments.extend(triangle(&d, &e, &f));
            Ok(plain(segments, 4))
        }
        Family::DoubleTorus => super::double_torus::layout(),
        _ => Err(Error::InvalidParameter(format!("unsupported family parameters: {family}"))),
    }
}

/// Just the guard segments of a family.
pub fn family_segments(family: &Family) -> Result<Vec<Segment>> {
    layout(family).map(|l| l.segments)
}

/// Hull of `points` grown by an octagon of radius `margin`.
pub(crate) fn grown_hull(points: &[Point], margin: &Rational) -> Vec<Point> {
    let h = margin / rat(2, 1);
    let m = margin.clone();
    let offsets = [
        (m.clone(), h.clone()),
        (h.clone(), m.clone()),
        (-h.clone(), m.clone()),
        (-m.clone(), h.clone()),
        (-m.clone(), -h.clone()),
        (-h.clone(), -m.clone()),
        (h.clone(), -m.clone()),
        (m.clone(), -h.clone()),
    ];
    let mut pts = Vec::with_capacity(points.len() * 8);
    for q in points {
        for (dx, dy) in &offsets {
            pts.push(q.add(&Point::new(dx.clone(), dy.clone())));
        }
    }
    convex_hull(&pts)
}

/// Spike length for segment `i`: half its shorter chord overhang, at most 1,
/// and short enough that its spikes stay clear of every point where another
/// segment's line crosses its line outside the core.
fn spike_length(core: &[Point], segments: &[Segment], i: usize) -> Result<Rational> {
    let s = &segments[i];
    let ch = chord_of(core, s)?;
    let over_p = -ch.lo.clone();
    let over_q = &ch.hi - &ch.len;
    let mut best = if over_p < over_q { over_p } else { over_q } / rat(2, 1);
    if best > rat(1, 1) {
        best = rat(1, 1);
    }
    for (j, o) in segments.iter().enumerate() {
        if j == i {
            continue;
        }
        let Some(x) = line_intersection(&s.a, &s.b, &o.a, &o.b) else { continue };
        let t = x.sub(&s.a).dot(&ch.dir) / ch.dir.norm2();
        let gap = if t < ch.lo {
            &ch.lo - &t
        } else if t > ch.hi {
            &t - &ch.hi
        } else {
            continue;
        };
        let third = gap / rat(3, 1);
        if third < best {
            best = third;
        }
    }
    Ok(best)
}

fn build(family: &Family, lay: &Layout, opts: &FamilyOptions, aperture: &Rational) -> Result<GalleryInstance> {
    let core = match &lay.core {
        Some(c) => c.clone(),
        None => {
            let mut pts: Vec<Point> = Vec::new();
            for s in &lay.segments {
                pts.push(s.a.clone());
                pts.push(s.b.clone());
            }
            grown_hull(&pts, &opts.margin)
        }
    };
    let mut b = GalleryBuilder::new(core.clone())?;
    for (i, s) in lay.segments.iter().enumerate() {
        let spike = spike_length(&core, &lay.segments, i)?;
        let po = PocketOptions { aperture: aperture.clone(), pocket_side: Side::Left, spike: Some(spike) };
        b.attach_guard_segment(s.clone(), &po)?;
    }
    for (name, apex, x1, x2) in &lay.pockets {
        b.add_pocket(name, apex.clone(), x1.clone(), x2.clone())?;
    }
    b.build(family.clone(), lay.expected_k)
}

/// Generate a family with default options.
pub fn generate_family(family: &Family) -> Result<GalleryInstance> {
    generate_family_with(family, &FamilyOptions::default())
}

/// Generate a family, halving the aperture until the sausage nerve equals
/// the nerve of the segment chords (the thin-pocket limit) or the shrink
/// budget runs out.
pub fn generate_family_with(family: &Family, opts: &FamilyOptions) -> Result<GalleryInstance> {
    let lay = layout(family)?;
    let mut aperture = opts.aperture.clone();
    let mut last_err = None;
    for round in 0..=opts.shrink_rounds {
        match build(family, &lay, opts, &aperture) {
            Ok(inst) => {
                let nerve = sausage_nerve(&inst)?;
                if nerve.sausage == nerve.chord || round == opts.shrink_rounds {
                    return Ok(inst);
                }
            }
            Err(e @ Error::Blocked(_)) | Err(e @ Error::InvalidPolygon(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        aperture /= rat(2, 1);
    }
    Err(last_err.unwrap_or_else(|| Error::Certificate(format!("{family}: pockets could not be placed"))))
}
