//! Emitting a gallery whose optimal solutions project onto a face union.
//!
//! Layout, all guard segments horizontal and on pairwise distinct heights so
//! no two of their lines meet:
//!
//! * a top row, rising one step per segment from left to right: the
//!   variable segments `X_1..X_n`, then the dummy segments `D_1..D_{m-1}`;
//! * one disjunction gadget per two-clause along the bottom: two corridor
//!   pockets whose wedges rise to the top row, and a helper segment low
//!   down that crosses each wedge once, in disjoint pieces;
//! * the auxiliary point `a`, away from every corridor wedge.
//!
//! A corridor wedge crosses the top row exactly in its satisfying interval
//! (rays through its two ends), and because the row rises monotonically and
//! the wedges are steep it misses every other top segment.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::formula::{face_contains, Face, RewrittenFormula, TwoClause, VarConstraint};
use crate::error::{Error, Result};
use crate::gadgets::{Family, GalleryBuilder, GalleryInstance, PocketOptions, Side};
use crate::geometry::{param_on, rat, Point, Rational, Segment};
use crate::solver::{check_placement, GuardPlacement, SegmentInterval, VisibilityProbe};

/// Geometry knobs, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutParams {
    /// Spike length of the pockets that pin guards to segments.
    pub pocket_depth: Rational,
    /// Width of each corridor window on the top row; the pinning pockets
    /// use half of it as their aperture.
    pub pinhole: Rational,
    /// How far below the core the corridor tips sit.
    pub corridor_depth: Rational,
    /// Gap between neighbouring top segments; segments are twice as long.
    pub spacing: Rational,
    /// How often the pinhole may be halved when a self-check fails.
    pub shrink_rounds: usize,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            pocket_depth: Rational::one(),
            pinhole: rat(1, 8),
            corridor_depth: Rational::one(),
            spacing: rat(2, 1),
            shrink_rounds: 6,
        }
    }
}

/// The pocket pair and helper of one two-clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctionGadget {
    pub clause: TwoClause,
    /// Index into the helper segments.
    pub helper: usize,
    /// Polygon vertices of the two corridor tips: variable side, satisfier side.
    pub corridor_tips: [usize; 2],
    /// The variable endpoint `[v, v]`.
    pub i1: SegmentInterval,
    /// Where a dummy guard makes the satisfier true: `r(D_{j-1})` and/or
    /// `l(D_j)`. Empty when there are no dummy segments.
    pub i2: Vec<SegmentInterval>,
    /// Helper parameters seeing each corridor, filled in by the self-check.
    pub helper_windows: [(Rational, Rational); 2],
}

/// A gallery compiled from a rewritten formula.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledGallery {
    pub instance: GalleryInstance,
    pub formula: RewrittenFormula,
    /// The conjunctions, i.e. the maximal faces of the encoded union.
    pub conjunctions: Vec<Face>,
    pub variable_segments: Vec<Segment>,
    pub dummy_segments: Vec<Segment>,
    pub helper_segments: Vec<Segment>,
    pub auxiliary_point: Point,
    pub gadgets: Vec<DisjunctionGadget>,
    /// Parameters after any shrinking.
    pub params: LayoutParams,
}

impl CompiledGallery {
    pub fn n(&self) -> usize {
        self.variable_segments.len()
    }

    pub fn m(&self) -> usize {
        self.formula.satisfier_count
    }

    pub fn g(&self) -> usize {
        self.formula.g()
    }

    /// Optimal guard count `n + m + g`.
    pub fn guard_count(&self) -> usize {
        self.n() + self.m() + self.g()
    }

    /// Instance index of dummy segment `i`.
    pub fn dummy_site(&self, i: usize) -> usize {
        self.n() + i
    }

    /// Instance index of helper segment `k`.
    pub fn helper_site(&self, k: usize) -> usize {
        self.n() + self.dummy_segments.len() + k
    }

    /// Site index of the auxiliary point.
    pub fn auxiliary_site(&self) -> usize {
        self.instance.guard_segments.len()
    }

    pub fn in_union(&self, p: &[Rational]) -> bool {
        p.len() == self.n()
            && p.iter().all(|x| *x >= Rational::zero() && *x <= Rational::one())
            && self.conjunctions.iter().any(|c| face_contains(c, p))
    }
}

fn pt(x: Rational, y: Rational) -> Point {
    Point::new(x, y)
}

/// Smallest integer at least `q`.
fn ceil(q: &Rational) -> Rational {
    Rational::from_integer(q.ceil().to_integer())
}

struct Plan {
    top: Vec<Segment>,
    helpers: Vec<Segment>,
    a: Point,
    core: Vec<Point>,
    /// Per clause: apex and window of the two corridors.
    corridors: Vec<[(Point, Point, Point); 2]>,
    /// Per clause: `(top index, parameter)` pairs of the satisfier side.
    i2: Vec<Vec<(usize, Rational)>>,
}

fn plan(phi: &RewrittenFormula, p: &LayoutParams) -> Result<Plan> {
    let n = phi.n;
    let m = phi.satisfier_count;
    let g = phi.g();
    let sp = &p.spacing;
    let len = sp * rat(2, 1);
    let step = sp * rat(3, 1);
    let h = sp / rat(4, 1);
    let delta = &p.pinhole;
    let n_top = n + m - 1;
    let slots = Rational::from_integer((n_top.max(g) as i64 + 2).into());
    let width = &step * &slots;
    let y0 = sp.clone();
    let helper_top = &y0 + &h * Rational::from_integer((g as i64).into()) + &p.corridor_depth;
    // wedge slopes stay below (width + sp) / top; keep the drift across the
    // helper band under sp/4 and across the top row under sp/2
    let drift_h = rat(4, 1) * (&width + sp) * &helper_top / sp;
    let drift_t = rat(2, 1) * (&width + sp) * &h * Rational::from_integer((n_top as i64).into()) / sp;
    let top_y = ceil(&(if drift_h > drift_t { drift_h } else { drift_t })) + sp;
    let idx = |i: usize| Rational::from_integer((i as i64).into());

    let top: Vec<Segment> = (0..n_top)
        .map(|t| {
            let x = &step * idx(t);
            let y = &top_y + &h * idx(t);
            Segment::new(pt(x.clone(), y.clone()), pt(&x + &len, y)).expect("positive length")
        })
        .collect();
    let helpers: Vec<Segment> = (0..g)
        .map(|k| {
            let x = &step * idx(k) - sp / rat(2, 1);
            let y = &y0 + &h * idx(k);
            Segment::new(pt(x.clone(), y.clone()), pt(&x + &len, y)).expect("positive length")
        })
        .collect();
    let row_top = &top_y + &h * idx(n_top);
    let core = alloc::vec![
        pt(-sp * rat(6, 1), Rational::zero()),
        pt(&width + sp * rat(3, 1), Rational::zero()),
        pt(&width + sp * rat(3, 1), &row_top + sp * rat(2, 1)),
        pt(-sp * rat(6, 1), &row_top + sp * rat(2, 1)),
    ];
    let a = pt(-sp * rat(3, 1), &top_y / rat(2, 1));

    let left = |t: usize| top[t].a.clone();
    let right = |t: usize| top[t].b.clone();
    let shift = |q: &Point, dx: &Rational| pt(q.x() + dx, q.y().clone());
    let mut corridors = Vec::with_capacity(g);
    let mut i2 = Vec::with_capacity(g);
    for (k, c) in phi.two_clauses.iter().enumerate() {
        let base = &step * idx(k);
        let apex1 = pt(base.clone(), -p.corridor_depth.clone());
        let apex2 = pt(&base + sp, -p.corridor_depth.clone());
        let v = c.constraint.var;
        let w1 = if c.constraint.value {
            (right(v), shift(&right(v), delta))
        } else {
            (shift(&left(v), &-delta.clone()), left(v))
        };
        let j = c.satisfier;
        // dummies D_{j-1} and D_j, as top-row indices
        let before = (j >= 1).then(|| n + j - 1);
        let after = (j + 1 < m).then(|| n + j);
        let (w2, ends) = match (before, after) {
            (Some(b), Some(f)) => ((right(b), left(f)), alloc::vec![(b, Rational::one()), (f, Rational::zero())]),
            (Some(b), None) => ((right(b), shift(&right(b), delta)), alloc::vec![(b, Rational::one())]),
            (None, Some(f)) => ((shift(&left(f), &-delta.clone()), left(f)), alloc::vec![(f, Rational::zero())]),
            // no dummies at all: aim at the empty slot past the row
            (None, None) => {
                let x = &step * idx(n_top);
                let q = pt(x, row_top.clone());
                ((q.clone(), shift(&q, delta)), Vec::new())
            }
        };
        corridors.push([(apex1, w1.0, w1.1), (apex2, w2.0, w2.1)]);
        i2.push(ends);
    }
    Ok(Plan { top, helpers, a, core, corridors, i2 })
}

fn build(phi: &RewrittenFormula, conjunctions: &[Face], p: &LayoutParams) -> Result<CompiledGallery> {
    let n = phi.n;
    let m = phi.satisfier_count;
    let plan = plan(phi, p)?;
    let mut b = GalleryBuilder::new(plan.core.clone())?;
    let opts = PocketOptions { aperture: &p.pinhole / rat(2, 1), pocket_side: Side::Left, spike: Some(p.pocket_depth.clone()) };
    for s in plan.top.iter().chain(plan.helpers.iter()) {
        b.attach_guard_segment(s.clone(), &opts)?;
    }
    b.attach_guard_point(plan.a.clone(), &Point::from_ints(1, 0), &opts)?;
    for pair in &plan.corridors {
        for (side, (apex, t1, t2)) in pair.iter().enumerate() {
            let name = if side == 0 { "corridor_x" } else { "corridor_s" };
            b.add_pocket(name, apex.clone(), t1.clone(), t2.clone())?;
        }
    }
    let g = phi.g();
    let instance = b.build(Family::Compiled, n + m + g)?;
    // extra pockets: the auxiliary point's four, then the corridors in order
    let corridor_tip = |k: usize, side: usize| instance.extra_pockets[4 + 2 * k + side].tip;
    let gadgets = phi
        .two_clauses
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let v = c.constraint.var;
            let t = if c.constraint.value { Rational::one() } else { Rational::zero() };
            DisjunctionGadget {
                clause: *c,
                helper: k,
                corridor_tips: [corridor_tip(k, 0), corridor_tip(k, 1)],
                i1: SegmentInterval { site: v, lo: t.clone(), hi: t },
                i2: plan.i2[k].iter().map(|(s, t)| SegmentInterval { site: *s, lo: t.clone(), hi: t.clone() }).collect(),
                helper_windows: [(Rational::zero(), Rational::zero()), (Rational::zero(), Rational::zero())],
            }
        })
        .collect();
    Ok(CompiledGallery {
        instance,
        formula: phi.clone(),
        conjunctions: conjunctions.to_vec(),
        variable_segments: plan.top[..n].to_vec(),
        dummy_segments: plan.top[n..].to_vec(),
        helper_segments: plan.helpers.clone(),
        auxiliary_point: plan.a.clone(),
        gadgets,
        params: p.clone(),
    })
}

fn conjunctions_of(phi: &RewrittenFormula) -> Vec<Face> {
    (0..phi.satisfier_count).map(|j| phi.group(j).map(|c| c.constraint).collect()).collect()
}

/// Compile `phi` and certify the layout; on a failed certificate the pinhole
/// is halved and the layout rebuilt, up to `shrink_rounds` times.
pub fn compile_gallery(phi: &RewrittenFormula, layout: &LayoutParams) -> Result<CompiledGallery> {
    if phi.satisfier_count == 0 || phi.n == 0 {
        return Err(Error::InvalidParameter("formula needs a variable and a conjunction".into()));
    }
    if phi.two_clauses.iter().any(|c| c.constraint.var >= phi.n || c.satisfier >= phi.satisfier_count) {
        return Err(Error::InvalidParameter("clause refers to a missing variable or satisfier".into()));
    }
    let conjunctions = conjunctions_of(phi);
    let mut p = layout.clone();
    let mut last = String::new();
    for _ in 0..=layout.shrink_rounds {
        match build(phi, &conjunctions, &p) {
            Ok(mut cg) => match certify_windows(&cg) {
                Ok(windows) => {
                    for (gd, w) in cg.gadgets.iter_mut().zip(windows) {
                        gd.helper_windows = w;
                    }
                    return Ok(cg);
                }
                Err(Error::Certificate(msg)) => last = msg,
                Err(e) => return Err(e),
            },
            Err(e @ (Error::Blocked(_) | Error::InvalidPolygon(_))) => last = format!("{e}"),
            Err(e) => return Err(e),
        }
        p.pinhole = &p.pinhole / rat(2, 1);
    }
    Err(Error::Certificate(last))
}

fn intersect(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for (l1, h1) in a {
        for (l2, h2) in b {
            let lo = if l1 > l2 { l1 } else { l2 };
            let hi = if h1 < h2 { h1 } else { h2 };
            if lo <= hi {
                out.push((lo.clone(), hi.clone()));
            }
        }
    }
    out
}

/// The four self-checks. Errors name the first violated one.
pub fn certify(cg: &CompiledGallery) -> Result<()> {
    certify_windows(cg).map(|_| ())
}

/// [`certify`], returning each helper's two corridor windows.
fn certify_windows(cg: &CompiledGallery) -> Result<Vec<[(Rational, Rational); 2]>> {
    let inst = &cg.instance;
    let poly = &inst.polygon;
    let probe = VisibilityProbe::new(poly);
    let fail = |what: String| Err(Error::Certificate(what));

    // (i) each site's four pinning pockets are seen together only from the
    // site itself, checked along the whole chord of its line
    let pinned: Vec<(Point, Point, [usize; 4], String)> = inst
        .guard_segments
        .iter()
        .enumerate()
        .map(|(i, g)| (g.segment.a.clone(), g.segment.b.clone(), g.tips(), format!("segment {i}")))
        .chain(core::iter::once((
            cg.auxiliary_point.clone(),
            cg.auxiliary_point.clone(),
            [0, 1, 2, 3].map(|i| inst.extra_pockets[i].tip),
            String::from("auxiliary point"),
        )))
        .collect();
    for (p, q, tips, name) in &pinned {
        let (lo, hi) = chord_ends(&inst.core, p, q);
        let chord = Segment::new(lo, hi)?;
        let ts = probe.breakpoints(&chord);
        let mut common = alloc::vec![(Rational::zero(), Rational::one())];
        for &t in tips {
            common = intersect(&common, &probe.intervals(&chord, &ts, t)?);
        }
        let want = (param_on(&chord.a, &chord.b, p), param_on(&chord.a, &chord.b, q));
        if common != alloc::vec![want] {
            return fail(format!("(i) pinning pockets of {name} are seen together off the site"));
        }
    }

    // (ii) each corridor is seen from exactly its satisfying interval, its
    // own helper, and nothing else
    let top_count = cg.variable_segments.len() + cg.dummy_segments.len();
    let mut windows = Vec::with_capacity(cg.gadgets.len());
    let breaks: Vec<Vec<Rational>> = inst.guard_segments.iter().map(|g| probe.breakpoints(&g.segment)).collect();
    for (k, gd) in cg.gadgets.iter().enumerate() {
        let mut pieces = [Vec::new(), Vec::new()];
        for (side, slot) in pieces.iter_mut().enumerate() {
            let tip = gd.corridor_tips[side];
            let expect: Vec<&SegmentInterval> = if side == 0 { alloc::vec![&gd.i1] } else { gd.i2.iter().collect() };
            for (s, (g, br)) in inst.guard_segments.iter().zip(&breaks).enumerate() {
                let seen = probe.intervals(&g.segment, br, tip)?;
                if s == cg.helper_site(k) {
                    if seen.len() != 1 {
                        return fail(format!("(ii) corridor {side} of clause {k} is not seen from one piece of its helper"));
                    }
                    *slot = seen;
                    continue;
                }
                let want: Vec<(Rational, Rational)> =
                    expect.iter().filter(|iv| iv.site == s).map(|iv| (iv.lo.clone(), iv.hi.clone())).collect();
                if seen != want {
                    let what = if s < top_count { "top" } else { "helper" };
                    return fail(format!("(ii) corridor {side} of clause {k} is seen from {what} segment {s} at {seen:?}"));
                }
            }
            if poly.sees(&cg.auxiliary_point, poly.vertex(tip))? {
                return fail(format!("(ii) corridor {side} of clause {k} is seen from the auxiliary point"));
            }
        }
        // (iii) the helper never sees both corridors at once
        if !intersect(&pieces[0], &pieces[1]).is_empty() {
            return fail(format!("(iii) helper of clause {k} sees both corridors at once"));
        }
        windows.push([pieces[0][0].clone(), pieces[1][0].clone()]);
    }

    // (iv) the auxiliary point sees every vertex that is no pocket tip
    let tips: Vec<usize> = inst.pockets().map(|p| p.tip).collect();
    let seen = poly.visible_vertices(&cg.auxiliary_point)?;
    if let Some(v) = (0..poly.len()).find(|v| !tips.contains(v) && !seen.contains(*v)) {
        return fail(format!("(iv) auxiliary point misses vertex {v}"));
    }
    Ok(windows)
}

/// Where the line through `p` and `q` (horizontal when they coincide) leaves
/// the core.
fn chord_ends(core: &[Point], p: &Point, q: &Point) -> (Point, Point) {
    let dir = if p == q { Point::from_ints(1, 0) } else { q.sub(p) };
    let mut ts: Vec<Rational> = Vec::new();
    let m = core.len();
    for e in 0..m {
        let a = &core[e];
        let d = core[(e + 1) % m].sub(a);
        let den = dir.cross(&d);
        if den.is_zero() {
            continue;
        }
        let w = a.sub(p);
        let s = w.cross(&dir) / &den;
        if s >= Rational::zero() && s <= Rational::one() {
            ts.push(w.cross(&d) / &den);
        }
    }
    let lo = ts.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = ts.iter().max().cloned().unwrap_or_else(Rational::one);
    (p.add(&dir.scale(&lo)), p.add(&dir.scale(&hi)))
}

/// Unit parameter of `x` on `seg`, if `x` lies on it.
fn param_if_on(seg: &Segment, x: &Point) -> Option<Rational> {
    seg.contains(x).then(|| param_on(&seg.a, &seg.b, x))
}

/// Parameters of a placement with exactly one guard per site, in site order
/// (the auxiliary point reports 0).
pub fn site_parameters(cg: &CompiledGallery, g: &GuardPlacement) -> Result<Vec<Rational>> {
    let segs = cg.instance.segments();
    let sites = segs.len() + 1;
    if g.len() != sites {
        return Err(Error::InvalidParameter(format!("placement has {} guards, expected {sites}", g.len())));
    }
    let mut params: Vec<Option<Rational>> = alloc::vec![None; sites];
    for x in g.guards() {
        let mut hits = segs.iter().enumerate().filter_map(|(i, s)| param_if_on(s, x).map(|t| (i, t)));
        let hit = if *x == cg.auxiliary_point { Some((sites - 1, Rational::zero())) } else { hits.next() };
        match hit {
            Some((i, t)) if params[i].is_none() => params[i] = Some(t),
            Some((i, _)) => return Err(Error::InvalidParameter(format!("two guards on site {i}"))),
            None => return Err(Error::InvalidParameter(format!("guard {x} is on no guard site"))),
        }
    }
    Ok(params.into_iter().map(|t| t.expect("every site holds one guard")).collect())
}

/// The point `x` with `x_i` the unit parameter of the guard on `X_i`.
pub fn placement_to_point(cg: &CompiledGallery, g: &GuardPlacement) -> Result<Vec<Rational>> {
    let params = site_parameters(cg, g)?;
    Ok(params[..cg.n()].to_vec())
}

/// Dummy and helper guards moved to the left end of their segments.
pub fn project_placement(cg: &CompiledGallery, g: &GuardPlacement) -> Result<GuardPlacement> {
    let params = site_parameters(cg, g)?;
    let mut guards: Vec<Point> = cg.variable_segments.iter().zip(&params).map(|(s, t)| s.at(t)).collect();
    guards.extend(cg.dummy_segments.iter().map(|s| s.a.clone()));
    guards.extend(cg.helper_segments.iter().map(|s| s.a.clone()));
    guards.push(cg.auxiliary_point.clone());
    Ok(GuardPlacement::new(guards))
}

/// An optimal placement over `p`: variable guards at `p`, dummies making
/// every satisfier but the first satisfied conjunction's true, each helper
/// at the leftmost point that still covers its gadget.
pub fn point_to_placement(cg: &CompiledGallery, p: &[Rational]) -> Result<GuardPlacement> {
    if p.len() != cg.n() {
        return Err(Error::InvalidParameter(format!("point has {} coordinates, expected {}", p.len(), cg.n())));
    }
    let Some(j) = cg.conjunctions.iter().position(|c| face_contains(c, p)) else {
        let (face, d) = nearest(cg, p);
        return Err(Error::NotInUnion(format!("nearest face {} at max-distance {d}", super::formula::face_to_string(&face))));
    };
    if p.iter().any(|x| *x < Rational::zero() || *x > Rational::one()) {
        return Err(Error::NotInUnion("coordinates must lie in [0, 1]".into()));
    }
    let mut guards: Vec<Point> = cg.variable_segments.iter().zip(p).map(|(s, t)| s.at(t)).collect();
    // D_i (0-based) serves S_i from its left end and S_{i+1} from its right
    let dummy_params: Vec<Rational> =
        (0..cg.dummy_segments.len()).map(|i| if i < j { Rational::zero() } else { Rational::one() }).collect();
    guards.extend(cg.dummy_segments.iter().zip(&dummy_params).map(|(s, t)| s.at(t)));
    guards.push(cg.auxiliary_point.clone());

    let poly = &cg.instance.polygon;
    let mut params = p.to_vec();
    params.extend(dummy_params);
    for gd in &cg.gadgets {
        let on = |iv: &SegmentInterval| params[iv.site] >= iv.lo && params[iv.site] <= iv.hi;
        let x_ok = on(&gd.i1);
        let s_ok = gd.i2.iter().any(on);
        let h = &cg.helper_segments[gd.helper];
        let t = if x_ok && s_ok {
            Rational::zero()
        } else {
            // the corridor nobody else watches
            gd.helper_windows[usize::from(x_ok)].0.clone()
        };
        guards.push(h.at(&t));
    }
    let placement = GuardPlacement::new(guards);
    if !check_placement(poly, &placement)?.fully_covered {
        return Err(Error::Certificate("extended placement leaves a vertex unseen".into()));
    }
    Ok(placement)
}

fn nearest(cg: &CompiledGallery, p: &[Rational]) -> (Face, Rational) {
    let union = super::formula::HypercubeFaceUnion { dimension: cg.n(), faces: cg.conjunctions.clone() };
    union.nearest_face(p)
}

/// Guard-position ranges of a canonical placement: one interval per site,
/// whole segments except where `fixed` pins a site to a parameter.
pub fn site_ranges(cg: &CompiledGallery, fixed: &[(usize, Rational)]) -> Vec<SegmentInterval> {
    let sites = cg.instance.guard_segments.len() + 1;
    (0..sites)
        .map(|s| match fixed.iter().find(|(i, _)| *i == s) {
            Some((_, t)) => SegmentInterval::at(s, t.clone()),
            None => SegmentInterval::whole(s),
        })
        .collect()
}

/// `X_var = value` as a constraint, for callers building clauses by hand.
pub fn constraint(var: usize, value: bool) -> VarConstraint {
    VarConstraint { var, value }
}
