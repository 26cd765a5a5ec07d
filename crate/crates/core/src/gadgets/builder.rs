//! Carving pockets into a convex core.
//!
//! A pocket is a thin triangular spike glued onto the core boundary. Its tip
//! sees into the core exactly through the wedge spanned by two target points,
//! so the tip's visibility region is that wedge clipped to the polygon.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{Family, GalleryInstance, GuardSegmentSpec, Pocket, Side};
use crate::error::{Error, Result};
use crate::geometry::{orient_sign, rat, Containment, Point, Rational, Segment, SimplePolygon};

/// Per-segment pocket parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PocketOptions {
    /// Height of the pocket wedges at their far end, in units of the
    /// normalized segment normal. Sausage width scales linearly with it.
    pub aperture: Rational,
    /// Side of the segment carrying three of the four pockets.
    pub pocket_side: Side,
    /// Spike length beyond the core boundary; `None` picks half the shorter
    /// chord overhang, capped at 1.
    pub spike: Option<Rational>,
}

impl Default for PocketOptions {
    fn default() -> Self {
        PocketOptions { aperture: rat(1, 64), pocket_side: Side::Left, spike: None }
    }
}

struct Site {
    name: String,
    apex: Point,
    targets: (Point, Point),
    /// Aperture endpoints in counter-clockwise boundary order.
    start: Point,
    end: Point,
    start_key: Rational,
    end_key: Rational,
}

struct SegmentEntry {
    segment: Segment,
    side: Side,
    aperture: Rational,
    sites: [usize; 4],
}

/// Collects guard segments and extra pockets, then emits the polygon.
pub struct GalleryBuilder {
    core: Vec<Point>,
    core_poly: SimplePolygon,
    sites: Vec<Site>,
    segments: Vec<SegmentEntry>,
    points: Vec<(Point, [usize; 4])>,
    extras: Vec<usize>,
}

/// Chord geometry of a segment inside the core: `P + t * dir` with `dir` the
/// direction scaled to unit max-norm.
pub(crate) struct Chord {
    pub dir: Point,
    pub normal: Point,
    /// Parameters of the two boundary exits; `lo < 0` and `hi > len`.
    pub lo: Rational,
    pub hi: Rational,
    /// Parameter of `Q`.
    pub len: Rational,
}

impl Chord {
    pub fn at(&self, origin: &Point, t: &Rational) -> Point {
        origin.add(&self.dir.scale(t))
    }
}

fn max_norm(v: &Point) -> Rational {
    let ax = v.x().abs();
    let ay = v.y().abs();
    if ax > ay {
        ax
    } else {
        ay
    }
}

/// All hits `(t, edge, s)` of the line `origin + t * dir` with core edges,
/// where the hit is `core[e] + s * (core[e+1] - core[e])`, `0 <= s <= 1`.
fn boundary_hits(core: &[Point], origin: &Point, dir: &Point) -> Vec<(Rational, usize, Rational)> {
    let m = core.len();
    let mut out = Vec::new();
    for e in 0..m {
        let a = &core[e];
        let d = core[(e + 1) % m].sub(a);
        let den = dir.cross(&d);
        if den.is_zero() {
            continue;
        }
        let w = a.sub(origin);
        let t = w.cross(&d) / &den;
        let s = w.cross(dir) / &den;
        if !s.is_negative() && s <= Rational::one() {
            out.push((t, e, s));
        }
    }
    out
}

/// Counter-clockwise boundary position `e + s` in `[0, m)`.
fn boundary_key(m: usize, e: usize, s: &Rational) -> Rational {
    if s.is_one() {
        Rational::from_integer(((e + 1) % m).into())
    } else {
        Rational::from_integer(e.into()) + s
    }
}

pub(crate) fn chord_of(core: &[Point], seg: &Segment) -> Result<Chord> {
    let u = seg.direction();
    let len = max_norm(&u);
    chord_along(core, &seg.a, &u, len)
}

/// Chord of the line `origin + t * u` with `P = origin` and `Q` at
/// parameter `len` (zero for a single point).
fn chord_along(core: &[Point], origin: &Point, u: &Point, len: Rational) -> Result<Chord> {
    let dir = u.scale(&(Rational::one() / max_norm(u)));
    let hits = boundary_hits(core, origin, &dir);
    let hi = hits.iter().filter(|h| h.0.is_positive()).map(|h| h.0.clone()).min();
    let lo = hits.iter().filter(|h| h.0.is_negative()).map(|h| h.0.clone()).max();
    match (lo, hi) {
        (Some(lo), Some(hi)) if hi > len => Ok(Chord { normal: dir.perp(), dir, lo, hi, len }),
        _ => Err(Error::Blocked(format!("line through {origin} along {u} does not lie inside the core"))),
    }
}

impl GalleryBuilder {
    /// Start from a strictly convex counter-clockwise core.
    pub fn new(core: Vec<Point>) -> Result<Self> {
        let core_poly = SimplePolygon::new(core.clone())?;
        if !core_poly.is_convex() {
            return Err(Error::InvalidParameter("core polygon must be convex".into()));
        }
        Ok(GalleryBuilder { core, core_poly, sites: Vec::new(), segments: Vec::new(), points: Vec::new(), extras: Vec::new() })
    }

    pub fn core(&self) -> &[Point] {
        &self.core
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Register a pocket whose tip `apex` sees the core through the wedge
    /// towards `x1` and `x2`. The apex must lie outside the core.
    pub fn add_pocket(&mut self, name: &str, apex: Point, x1: Point, x2: Point) -> Result<usize> {
        let idx = self.site(name.into(), apex, x1, x2)?;
        self.extras.push(idx);
        Ok(idx)
    }

    fn site(&mut self, name: String, apex: Point, x1: Point, x2: Point) -> Result<usize> {
        if self.core_poly.contains(&apex) != Containment::Exterior {
            return Err(Error::Blocked(format!("pocket {name}: apex {apex} is not outside the core")));
        }
        let m = self.core.len();
        let entry = |target: &Point| -> Result<(Point, Rational)> {
            let dir = target.sub(&apex);
            let hit = boundary_hits(&self.core, &apex, &dir)
                .into_iter()
                .filter(|h| h.0.is_positive())
                .min_by(|a, b| a.0.cmp(&b.0))
                .ok_or_else(|| Error::Blocked(format!("pocket {name}: ray towards {target} misses the core")))?;
            let p = apex.add(&dir.scale(&hit.0));
            Ok((p, boundary_key(m, hit.1, &hit.2)))
        };
        let (a, ka) = entry(&x1)?;
        let (b, kb) = entry(&x2)?;
        let turn = orient_sign(&a, &apex, &b);
        if turn == 0 {
            return Err(Error::Blocked(format!("pocket {name}: degenerate aperture")));
        }
        let ((start, start_key), (end, end_key)) = if turn > 0 { ((a, ka), (b, kb)) } else { ((b, kb), (a, ka)) };
        self.sites.push(Site { name, apex, targets: (x1, x2), start, end, start_key, end_key });
        Ok(self.sites.len() - 1)
    }

    /// Force guards onto `seg` with four pockets: two strip pockets whose
    /// wedges hug the chord on either side, and two trims whose wedges cross
    /// the chord exactly at the segment endpoints. The four wedges meet the
    /// chord's line in the whole chord, the whole chord, `[P, beyond Q]` and
    /// `[beyond P, Q]`, so their common part is exactly `seg`.
    ///
    /// Returns the segment's index; pocket vertex indices are resolved by
    /// [`GalleryBuilder::build`].
    pub fn attach_guard_segment(&mut self, seg: Segment, opts: &PocketOptions) -> Result<usize> {
        let ch = chord_of(&self.core, &seg)?;
        let base = self.segments.len();
        let sites = self.enforce(&seg.a, &seg.b, &ch, opts, &format!("s{base}"))?;
        self.segments.push(SegmentEntry { segment: seg, side: opts.pocket_side, aperture: opts.aperture.clone(), sites });
        Ok(base)
    }

    /// Force a guard onto the single point `a` with the same four pockets,
    /// laid along the line through `a` with direction `dir`; both trims cut
    /// that line at `a`.
    ///
    /// Returns the point's index among the guard points.
    pub fn attach_guard_point(&mut self, a: Point, dir: &Point, opts: &PocketOptions) -> Result<usize> {
        if dir.is_zero() {
            return Err(Error::InvalidParameter("guard point direction must be non-zero".into()));
        }
        let ch = chord_along(&self.core, &a, dir, Rational::zero())?;
        let base = self.points.len();
        let sites = self.enforce(&a, &a, &ch, opts, &format!("a{base}"))?;
        self.points.push((a, sites));
        Ok(base)
    }

    fn enforce(&mut self, p: &Point, q: &Point, ch: &Chord, opts: &PocketOptions, prefix: &str) -> Result<[usize; 4]> {
        for x in [p, q] {
            if self.core_poly.contains(x) != Containment::Interior {
                return Err(Error::Blocked(format!("guard site {x} is not interior to the core")));
            }
        }
        if !opts.aperture.is_positive() {
            return Err(Error::InvalidParameter("aperture must be positive".into()));
        }
        let over_p = -ch.lo.clone();
        let over_q = &ch.hi - &ch.len;
        let s = match &opts.spike {
            Some(s) => s.clone(),
            None => {
                let half = if over_p < over_q { &over_p / rat(2, 1) } else { &over_q / rat(2, 1) };
                if half > Rational::one() {
                    Rational::one()
                } else {
                    half
                }
            }
        };
        let n = match opts.pocket_side {
            Side::Left => ch.normal.clone(),
            Side::Right => ch.normal.scale(&-Rational::one()),
        };
        let wn = n.scale(&opts.aperture);
        let lx = ch.at(p, &ch.lo);
        let rx = ch.at(p, &ch.hi);
        let name = |tag: &str| format!("{prefix}.{tag}");
        let half_s = &s / rat(2, 1);
        // strip wedge on the pocket side, apex beyond the left exit
        let upper = self.site(name("P_upper"), ch.at(p, &(&ch.lo - &s)), rx.clone(), rx.add(&wn))?;
        // trim cutting the chord at Q, apex beyond the right exit
        let middle =
            self.site(name("P_middle"), ch.at(p, &(&ch.hi + &s)).add(&wn), q.clone(), ch.at(p, &(&ch.lo - &half_s)))?;
        // strip wedge on the other side, apex beyond the right exit
        let lower = self.site(name("P_lower"), ch.at(p, &(&ch.hi + &s)), lx.clone(), lx.sub(&wn))?;
        // trim cutting the chord at P, apex beyond the left exit
        let left =
            self.site(name("P_left"), ch.at(p, &(&ch.lo - &s)).add(&wn), p.clone(), ch.at(p, &(&ch.hi + &half_s)))?;
        Ok([upper, middle, lower, left])
    }

    /// Emit the polygon. Fails when two apertures overlap or the result is
    /// not simple.
    pub fn build(self, family: Family, expected_k: usize) -> Result<GalleryInstance> {
        let m = self.core.len();
        let mr = Rational::from_integer(m.into());
        // rotate so that the boundary walk starts at a core vertex outside
        // every aperture arc
        let in_arc = |k: &Rational, site: &Site| -> bool {
            if site.start_key <= site.end_key {
                *k >= site.start_key && *k <= site.end_key
            } else {
                *k >= site.start_key || *k <= site.end_key
            }
        };
        let r = (0..m)
            .find(|&v| {
                let k = Rational::from_integer(v.into());
                self.sites.iter().all(|s| !in_arc(&k, s))
            })
            .ok_or_else(|| Error::Blocked("every core vertex lies inside a pocket aperture".into()))?;
        let rr = Rational::from_integer(r.into());
        let shift = |k: &Rational| -> Rational {
            let v = k - &rr;
            if v.is_negative() {
                v + &mr
            } else {
                v
            }
        };
        let mut order: Vec<(Rational, Rational, usize)> =
            self.sites.iter().enumerate().map(|(i, s)| (shift(&s.start_key), shift(&s.end_key), i)).collect();
        order.sort();
        for w in order.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(Error::Blocked(format!(
                    "pockets {} and {} overlap on the core boundary",
                    self.sites[w[0].2].name, self.sites[w[1].2].name
                )));
            }
        }
        let mut verts: Vec<Point> = Vec::new();
        let mut tips = alloc::vec![0usize; self.sites.len()];
        let mut next_arc = 0;
        for j in 0..=m {
            let jk = Rational::from_integer(j.into());
            while next_arc < order.len() && order[next_arc].0 < jk {
                let (_, _, si) = &order[next_arc];
                let site = &self.sites[*si];
                verts.push(site.start.clone());
                tips[*si] = verts.len();
                verts.push(site.apex.clone());
                verts.push(site.end.clone());
                next_arc += 1;
            }
            if j == m {
                break;
            }
            // skip core vertices covered by an aperture (inclusive of its end)
            let covered = order[..next_arc].last().is_some_and(|(_, e, _)| jk <= *e);
            if !covered {
                verts.push(self.core[(j + r) % m].clone());
            }
        }
        verts.dedup();
        if verts.len() > 1 && verts.first() == verts.last() {
            verts.pop();
        }
        // dedup may have shifted indices; resolve tips by value
        for (i, site) in self.sites.iter().enumerate() {
            tips[i] = verts.iter().position(|v| *v == site.apex).expect("apex emitted");
        }
        let polygon = SimplePolygon::new(verts)?;
        let pocket = |i: usize| -> Pocket {
            let s = &self.sites[i];
            Pocket {
                name: s.name.clone(),
                apex: s.apex.clone(),
                tip: tips[i],
                aperture: (s.start.clone(), s.end.clone()),
                targets: s.targets.clone(),
            }
        };
        let guard_segments = self
            .segments
            .iter()
            .map(|e| GuardSegmentSpec {
                segment: e.segment.clone(),
                pocket_side: e.side,
                aperture: e.aperture.clone(),
                pockets: [pocket(e.sites[0]), pocket(e.sites[1]), pocket(e.sites[2]), pocket(e.sites[3])],
            })
            .collect();
        // pockets of guard points ride along with the extra pockets
        let extra_pockets = self.points.iter().flat_map(|(_, s)| s.iter().copied()).chain(self.extras.iter().copied()).map(pocket).collect();
        let guard_points = self.points.iter().map(|(a, _)| a.clone()).collect();
        Ok(GalleryInstance { polygon, core: self.core, guard_segments, guard_points, extra_pockets, family, expected_k })
    }
}
