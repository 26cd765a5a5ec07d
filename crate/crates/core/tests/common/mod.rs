#![allow(dead_code)]

use artgallery_core::geometry::{Containment, Point, SimplePolygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(x: i64, y: i64) -> Point {
    Point::from_ints(x, y)
}

pub fn l_hexagon() -> SimplePolygon {
    SimplePolygon::new(vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)]).unwrap()
}

/// Random polygon, star-shaped about the origin, with 3 to `max_n`
/// integer vertices. Retries until the rounding leaves it simple.
pub fn star_polygon(seed: u64, max_n: usize) -> SimplePolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=max_n);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| {
                let r = rng.gen_range(4.0..40.0);
                p((r * a.cos()).round() as i64, (r * a.sin()).round() as i64)
            })
            .collect();
        if let Ok(poly) = SimplePolygon::new(pts) {
            return poly;
        }
    }
}

/// Random rational points in the closed polygon, drawn from the fan
/// triangles around the origin.
pub fn interior_points(poly: &SimplePolygon, seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = poly.len();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 50 {
        tries += 1;
        let i = rng.gen_range(0..n);
        let (a, b) = (poly.vertex(i), poly.vertex(i + 1));
        let (mut s, mut t) = (rng.gen_range(0..=64i64), rng.gen_range(0..=64i64));
        if s + t > 64 {
            s = 64 - s;
            t = 64 - t;
        }
        let w = artgallery_core::geometry::rat(1, 64);
        let q = a.scale(&(artgallery_core::geometry::int(s) * &w)).add(&b.scale(&(artgallery_core::geometry::int(t) * &w)));
        if poly.contains(&q) != Containment::Exterior {
            out.push(q);
        }
    }
    out
}

/// Random simple polygon on `n` integer points: a random tour untangled by
/// 2-opt moves, so usually far from star-shaped.
pub fn random_simple_polygon(seed: u64, n: usize) -> SimplePolygon {
    use artgallery_core::geometry::segments_cross_properly;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> = (0..n).map(|_| p(rng.gen_range(0..24), rng.gen_range(0..24))).collect();
        let mut changed = true;
        let mut rounds = 0;
        while changed && rounds < 1000 {
            changed = false;
            rounds += 1;
            'scan: for i in 0..n {
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    let (a, b, c, d) = (&pts[i], &pts[i + 1], &pts[j], &pts[(j + 1) % n]);
                    if segments_cross_properly(a, b, c, d) {
                        pts[i + 1..=j].reverse();
                        changed = true;
                        break 'scan;
                    }
                }
            }
        }
        if let Ok(poly) = SimplePolygon::new_oriented(pts) {
            return poly;
        }
    }
}

/// Exhaustive check of every disjunction gadget at `res + 1` parameters per
/// segment: the x corridor is seen from the variable segment exactly at the
/// literal, the s corridor exactly from the dummy ends serving its
/// satisfier, the helper never sees both, and each helper window does see
/// its corridor. Returns the violations.
pub fn disjunction_violations(cg: &artgallery_core::compiler::CompiledGallery, res: i64) -> Vec<String> {
    use artgallery_core::geometry::rat;
    let poly = &cg.instance.polygon;
    let segs = cg.instance.segments();
    let sees = |q: &Point, tip: usize| poly.sees(q, poly.vertex(tip)).unwrap();
    let mut bad = Vec::new();
    for (k, gd) in cg.gadgets.iter().enumerate() {
        let c = gd.clause.constraint;
        let target = if c.value { rat(1, 1) } else { rat(0, 1) };
        let [tx, ts] = gd.corridor_tips;
        let j = gd.clause.satisfier;
        for t in (0..=res).map(|i| rat(i, res)) {
            if sees(&segs[c.var].at(&t), tx) != (t == target) {
                bad.push(format!("clause {k}: X{} at {t}", c.var + 1));
            }
            for other in (0..cg.n()).filter(|&v| v != c.var) {
                if sees(&segs[other].at(&t), tx) {
                    bad.push(format!("clause {k}: X{} at {t} sees the x corridor", other + 1));
                }
            }
            // S_j is served by the right end of D_{j-1} and the left end of D_j
            for i in 0..cg.dummy_segments.len() {
                let want = (i == j && t == rat(0, 1)) || (i + 1 == j && t == rat(1, 1));
                if sees(&segs[cg.dummy_site(i)].at(&t), ts) != want {
                    bad.push(format!("clause {k}: D{} at {t}", i + 1));
                }
            }
            let h = segs[cg.helper_site(k)].at(&t);
            if sees(&h, tx) && sees(&h, ts) {
                bad.push(format!("clause {k}: helper sees both corridors at {t}"));
            }
        }
        for (side, tip) in [tx, ts].into_iter().enumerate() {
            let (lo, hi) = &gd.helper_windows[side];
            let mid = (lo.clone() + hi.clone()) / rat(2, 1);
            if !sees(&segs[cg.helper_site(k)].at(&mid), tip) {
                bad.push(format!("clause {k}: helper window {side} misses its corridor"));
            }
        }
    }
    bad
}
