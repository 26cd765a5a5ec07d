//! Three components whose solution space is a genus-two surface.
//!
//! Two triangles sit left of an open path whose loose ends `e_top` and
//! `e_bot` lie on the y-axis. Four circle pockets each see one corner of a
//! triangle and both loose ends: their wedges are cut by a line through a
//! loose end and a point on the hole line `x = -4`. A hole pocket sees the
//! strip just right of that line, which holds the inner corner of each
//! triangle. On a triangle the three wedges meet its boundary in three arcs
//! that share endpoints, so a guard there sees at most one circle pocket,
//! and sees a circle pocket and the hole only at the shared endpoints.

use alloc::vec::Vec;

use super::chord_of;
use super::families::{grown_hull, Layout};
use crate::error::Result;
use crate::geometry::{rat, Point, Rational, Segment};

fn p(x: i64, y: i64) -> Point {
    Point::from_ints(x, y)
}

fn seg(a: &Point, b: &Point) -> Segment {
    Segment::new(a.clone(), b.clone()).expect("layout segments are non-degenerate")
}

/// Point on the ray from `from` through `through`, half a unit of
/// max-norm direction past where it leaves `core`.
fn apex_beyond(core: &[Point], from: &Point, through: &Point) -> Result<Point> {
    let s = seg(from, through);
    let ch = chord_of(core, &s)?;
    Ok(ch.at(from, &(&ch.hi + rat(1, 2))))
}

pub(crate) fn layout() -> Result<Layout> {
    let e_top = p(0, 1);
    let e_bot = p(0, -1);
    // upper triangle: a1 pokes into circle 1, b1 into circle 2, c1 into
    // the hole strip
    let (a1, b1, c1) = (p(-5, 7), p(-5, 3), p(-3, 3));
    // lower triangle, not a mirror image: no endpoint may sit on another
    // segment's line
    let (a2, b2, c2) = (Point::from_ratios(-11, 2, -8, 1), p(-6, -3), p(-3, -3));
    let (t_r, b_r) = (p(2, 6), p(2, -6));
    let segments = alloc::vec![
        seg(&a1, &b1),
        seg(&b1, &c1),
        seg(&c1, &a1),
        seg(&a2, &b2),
        seg(&b2, &c2),
        seg(&c2, &a2),
        seg(&e_top, &t_r),
        seg(&t_r, &b_r),
        seg(&b_r, &e_bot),
    ];
    let mut pts: Vec<Point> = Vec::new();
    for s in &segments {
        pts.push(s.a.clone());
        pts.push(s.b.clone());
    }
    let core = grown_hull(&pts, &Rational::from_integer(8.into()));

    // where the hole line x = -4 crosses the sides running into c1 and c2
    let i1 = p(-4, 5);
    let i1p = p(-4, 3);
    let i2 = p(-4, -5);
    let i2p = p(-4, -3);
    let circle = |cut_end: &Point, hinge: &Point, other_end: &Point| -> Result<(Point, Point, Point)> {
        Ok((apex_beyond(&core, cut_end, hinge)?, cut_end.clone(), other_end.clone()))
    };
    let (k1, x1, y1) = circle(&e_bot, &i1, &e_top)?;
    let (k2, x2, y2) = circle(&e_top, &i1p, &e_bot)?;
    let (k3, x3, y3) = circle(&e_top, &i2, &e_bot)?;
    let (k4, x4, y4) = circle(&e_bot, &i2p, &e_top)?;
    // hole wedge: down the line x = -4, and a second ray tilted right that
    // passes (-5/2, -3), clear of the loose ends
    let hole = apex_beyond(&core, &i2, &i1)?;
    let pockets = alloc::vec![
        ("circle_1", k1, x1, y1),
        ("circle_2", k2, x2, y2),
        ("circle_3", k3, x3, y3),
        ("circle_4", k4, x4, y4),
        ("hole", hole, i2, Point::from_ratios(-5, 2, -3, 1)),
    ];
    Ok(Layout { segments, pockets, expected_k: 6, core: Some(core) })
}
