use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use super::point::{Point, Rational};

/// Turn direction of an ordered point triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }

    fn from_sign(s: i8) -> Orientation {
        match s {
            1 => Orientation::CounterClockwise,
            -1 => Orientation::Clockwise,
            _ => Orientation::Collinear,
        }
    }
}

const EPS: f64 = 2.220_446_049_250_313e-16;

/// Filtered sign of `ax * by - ay * bx` for vectors given by their float
/// approximations, with `m` bounding every input magnitude. `None` when the
/// float result cannot be trusted.
#[inline]
fn filtered_cross_sign(ax: f64, ay: f64, bx: f64, by: f64, m: f64) -> Option<i8> {
    if !m.is_finite() || !(1e-60..=1e60).contains(&m) {
        return None;
    }
    let det = ax * by - ay * bx;
    let bound = 64.0 * EPS * m * m;
    if det > bound {
        Some(1)
    } else if det < -bound {
        Some(-1)
    } else {
        None
    }
}

#[inline]
fn max_abs(vals: &[f64]) -> f64 {
    vals.iter().fold(0.0f64, |acc, v| acc.max(libm::fabs(*v)))
}

/// `p - q` as an unreduced fraction with positive denominator. Skipping
/// the gcd is what makes the exact fallback cheap.
fn diff(p: &Rational, q: &Rational) -> (BigInt, BigInt) {
    if p.denom() == q.denom() {
        return (p.numer() - q.numer(), p.denom().clone());
    }
    (p.numer() * q.denom() - q.numer() * p.denom(), p.denom() * q.denom())
}

fn frac(p: &Rational) -> (BigInt, BigInt) {
    (p.numer().clone(), p.denom().clone())
}

/// Sign of `ux * vy - uy * vx` for unreduced fractions.
fn exact_cross(ux: (BigInt, BigInt), uy: (BigInt, BigInt), vx: (BigInt, BigInt), vy: (BigInt, BigInt)) -> i8 {
    let l = ux.0 * vy.0 * (&uy.1 * &vx.1);
    let r = uy.0 * vx.0 * (ux.1 * vy.1);
    match l.cmp(&r) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// Sign of `(b - a) x (c - a)`.
pub fn orient_sign(a: &Point, b: &Point, c: &Point) -> i8 {
    let m = max_abs(&[a.fx, a.fy, b.fx, b.fy, c.fx, c.fy]);
    if let Some(s) = filtered_cross_sign(b.fx - a.fx, b.fy - a.fy, c.fx - a.fx, c.fy - a.fy, 2.0 * m) {
        return s;
    }
    exact_cross(diff(b.x(), a.x()), diff(b.y(), a.y()), diff(c.x(), a.x()), diff(c.y(), a.y()))
}

/// Orientation of the triple `(a, b, c)`.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    Orientation::from_sign(orient_sign(a, b, c))
}

/// Sign of the cross product of two vectors.
pub fn cross_sign(u: &Point, v: &Point) -> i8 {
    let m = max_abs(&[u.fx, u.fy, v.fx, v.fy]);
    if let Some(s) = filtered_cross_sign(u.fx, u.fy, v.fx, v.fy, m) {
        return s;
    }
    exact_cross(frac(u.x()), frac(u.y()), frac(v.x()), frac(v.y()))
}

/// Sign of the dot product of two vectors.
pub fn dot_sign(u: &Point, v: &Point) -> i8 {
    let m = max_abs(&[u.fx, u.fy, v.fx, v.fy]);
    if let Some(s) = filtered_cross_sign(u.fx, -u.fy, v.fy, v.fx, m) {
        return s;
    }
    // u . v = ux * vx - (-uy) * vy
    let (n, d) = frac(u.y());
    exact_cross(frac(u.x()), (-n, d), frac(v.y()), frac(v.x()))
}

/// Sign of `(a - o) . (b - o)`.
pub fn dot_diff_sign(o: &Point, a: &Point, b: &Point) -> i8 {
    let m = max_abs(&[o.fx, o.fy, a.fx, a.fy, b.fx, b.fy]);
    if let Some(s) = filtered_cross_sign(a.fx - o.fx, o.fy - a.fy, b.fy - o.fy, b.fx - o.fx, 2.0 * m) {
        return s;
    }
    let (n, d) = diff(a.y(), o.y());
    exact_cross(diff(a.x(), o.x()), (-n, d), diff(b.y(), o.y()), diff(b.x(), o.x()))
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if orient_sign(a, b, p) != 0 {
        return false;
    }
    within_box(a, b, p)
}

/// Whether collinear `p` lies between `a` and `b` (inclusive).
fn within_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (lox, hix) = if a.x() <= b.x() { (a.x(), b.x()) } else { (b.x(), a.x()) };
    let (loy, hiy) = if a.y() <= b.y() { (a.y(), b.y()) } else { (b.y(), a.y()) };
    p.x() >= lox && p.x() <= hix && p.y() >= loy && p.y() <= hiy
}

/// Whether `p` lies strictly between `a` and `b` on the segment.
pub fn strictly_inside_segment(a: &Point, b: &Point, p: &Point) -> bool {
    p != a && p != b && on_segment(a, b, p)
}

/// Two closed segments share a point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(a, b, c))
        || (o2 == 0 && within_box(a, b, d))
        || (o3 == 0 && within_box(c, d, a))
        || (o4 == 0 && within_box(c, d, b))
}

/// Interiors of the two segments cross at a single point that is interior
/// to both.
pub fn segments_cross_properly(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    if o1 * o2 >= 0 {
        return false;
    }
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    o3 * o4 < 0
}

/// Intersection point of the lines `ab` and `cd`; `None` when parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = b.sub(a);
    let s = d.sub(c);
    let den = r.cross(&s);
    if den.is_zero() {
        return None;
    }
    let t = c.sub(a).cross(&s) / den;
    Some(a.lerp(b, &t))
}

/// Parameter `t` with `p = a + t (b - a)` for `p` on the line `ab`.
pub fn param_on(a: &Point, b: &Point, p: &Point) -> super::point::Rational {
    let d = b.sub(a);
    p.sub(a).dot(&d) / d.norm2()
}

/// Half-plane class of a direction relative to `reference`: 0 for the
/// half-open half-turn starting at `reference`, 1 for the other.
fn half_class(reference: &Point, d: &Point) -> u8 {
    let c = cross_sign(reference, d);
    if c > 0 || (c == 0 && dot_sign(reference, d) > 0) {
        0
    } else {
        1
    }
}

/// Counter-clockwise angular order of non-zero directions starting at
/// `reference` (inclusive). Parallel directions compare equal.
pub fn angle_cmp(reference: &Point, u: &Point, v: &Point) -> Ordering {
    let hu = half_class(reference, u);
    let hv = half_class(reference, v);
    if hu != hv {
        return hu.cmp(&hv);
    }
    match cross_sign(u, v) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => {
            // same half and parallel: either equal direction or opposite; the
            // latter only happens for a direction on the reference line
            if dot_sign(u, v) >= 0 {
                Ordering::Equal
            } else {
                // u and v opposite within one class cannot happen except
                // at the class boundary, where the reference-aligned one
                // comes first
                if dot_sign(reference, u) > 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

/// Whether the non-zero directions `u` and `v` point the same way.
pub fn same_direction(u: &Point, v: &Point) -> bool {
    cross_sign(u, v) == 0 && dot_sign(u, v) > 0
}
