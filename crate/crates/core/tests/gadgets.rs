mod common;

use artgallery_core::gadgets::{
    generate_family, generate_family_with, sausage_nerve, validate_sausages, Family, FamilyOptions, GalleryBuilder,
    PocketOptions, Side,
};
use artgallery_core::geometry::{rat, Point, Rational, Segment};
use artgallery_core::solver::visible_intervals;
use artgallery_core::topology::enumerate_covers;
use artgallery_core::visibility::arrangement_vertices_for;
use artgallery_core::BitSet;
use common::p;

fn square_core() -> Vec<Point> {
    vec![p(-10, -10), p(10, -10), p(10, 10), p(-10, 10)]
}

fn sees_all(inst: &artgallery_core::gadgets::GalleryInstance, g: &Point, tips: &[usize]) -> bool {
    let m = inst.polygon.visible_vertices(g).unwrap();
    tips.iter().all(|&t| m.contains(t))
}

#[test]
fn lone_segment_pins_its_guard() {
    let mut b = GalleryBuilder::new(square_core()).unwrap();
    let opts = PocketOptions { aperture: rat(1, 64), pocket_side: Side::Left, spike: None };
    b.attach_guard_segment(Segment::new(p(-2, 0), p(2, 0)).unwrap(), &opts).unwrap();
    let inst = b.build(Family::Custom("lone".into()), 1).unwrap();
    let tips = inst.guard_segments[0].tips();
    for k in 0..=8 {
        let g = Point::new(rat(-2, 1) + rat(k, 2), rat(0, 1));
        assert!(sees_all(&inst, &g, &tips), "{g} on the segment misses a pocket");
    }
    // off the segment by one aperture, or past an end along the line
    for off in [p(0, 0).add(&Point::new(rat(0, 1), rat(1, 64))), p(0, 0).sub(&Point::new(rat(0, 1), rat(1, 64)))] {
        assert!(!sees_all(&inst, &off, &tips));
    }
    assert!(!sees_all(&inst, &Point::new(rat(2, 1) + rat(1, 64), rat(0, 1)), &tips));
    assert!(!sees_all(&inst, &Point::new(rat(-2, 1) - rat(1, 64), rat(0, 1)), &tips));
}

#[test]
fn crossing_guard_sees_all_eight() {
    let mut b = GalleryBuilder::new(square_core()).unwrap();
    let opts = PocketOptions::default();
    b.attach_guard_segment(Segment::new(p(-3, 0), p(3, 0)).unwrap(), &opts).unwrap();
    b.attach_guard_segment(Segment::new(p(0, -3), p(1, 3)).unwrap(), &opts).unwrap();
    let inst = b.build(Family::Custom("cross".into()), 1).unwrap();
    let mut tips: Vec<usize> = inst.guard_segments[0].tips().to_vec();
    tips.extend(inst.guard_segments[1].tips());
    let crossing = Point::from_ratios(1, 2, 0, 1);
    assert!(sees_all(&inst, &crossing, &tips));
    assert!(!sees_all(&inst, &p(1, 0), &tips));
}

#[test]
fn halving_the_aperture_halves_sausages() {
    let fam = Family::Circle;
    let wide = generate_family_with(&fam, &FamilyOptions { aperture: rat(1, 32), shrink_rounds: 0, ..Default::default() }).unwrap();
    let thin = generate_family_with(&fam, &FamilyOptions { aperture: rat(1, 64), shrink_rounds: 0, ..Default::default() }).unwrap();
    let w = validate_sausages(&wide, 4).unwrap().width_bounds;
    let t = validate_sausages(&thin, 4).unwrap().width_bounds;
    for (a, b) in w.iter().zip(&t) {
        assert!(b.clone() * rat(2, 1) <= *a, "width {b} is not at most half of {a}");
    }
}

#[test]
fn circle_sausages_match_segments() {
    let inst = generate_family(&Family::Circle).unwrap();
    let r = validate_sausages(&inst, 8).unwrap();
    assert!(r.nerve_matches());
    assert!(r.spurious_candidates.is_empty());
    for e in &r.segment_nerve {
        assert!(r.nerve_edges.contains(e));
    }
}

#[test]
fn chain_pseudo_solution_is_refuted() {
    let inst = generate_family(&Family::Chain(2)).unwrap();
    let r = validate_sausages(&inst, 8).unwrap();
    assert!(!r.nerve_matches(), "the link sausages should over-intersect");
    assert!(!r.spurious_candidates.is_empty());
    assert!(r.spurious_candidates.iter().all(|s| s.refuted), "{:?}", r.spurious_candidates);
}

#[test]
fn torus_sides_do_not_meet() {
    let inst = generate_family(&Family::Torus).unwrap();
    let nerve = sausage_nerve(&inst).unwrap();
    assert!(nerve.sausage.iter().all(|&(i, j)| (i < 3) == (j < 3)), "{:?}", nerve.sausage);
    assert_eq!(nerve.sausage, nerve.chord);
}

#[test]
fn expected_guard_counts() {
    let cases = [
        (Family::Circle, 2),
        (Family::Clover(2), 3),
        (Family::Clover(4), 4),
        (Family::Chain(2), 5),
        (Family::Necklace(4), 6),
        (Family::Grid { h: 2, v: 2 }, 2),
        (Family::Grid { h: 3, v: 2 }, 3),
        (Family::Torus, 4),
        (Family::DoubleTorus, 6),
    ];
    for (fam, k) in cases {
        let inst = generate_family(&fam).unwrap();
        assert_eq!(inst.expected_k, k, "{fam}");
        inst.check_pockets().unwrap();
    }
}

#[test]
fn invalid_family_parameters() {
    for fam in [Family::Clover(1), Family::Chain(0), Family::Necklace(6), Family::Grid { h: 0, v: 2 }] {
        assert!(generate_family(&fam).is_err(), "{fam}");
    }
    assert!("grid(2)".parse::<Family>().is_err());
    assert_eq!("grid:3x2".parse::<Family>().unwrap(), Family::Grid { h: 3, v: 2 });
}

/// Every placement of `expected_k` guards seeing all pocket tips, over the
/// vertices of the tips' visibility arrangement. These dominate any other
/// placement, so a property shared by all of them holds for every optimum.
fn optimal_candidate_sets(fam: &Family) -> (artgallery_core::gadgets::GalleryInstance, Vec<Vec<Point>>) {
    let inst = generate_family(fam).unwrap();
    let poly = &inst.polygon;
    let mut tips: Vec<usize> = inst.guard_segments.iter().flat_map(|s| s.tips()).collect();
    tips.extend(inst.extra_pockets.iter().map(|p| p.tip));
    tips.sort_unstable();
    tips.dedup();
    let cands = arrangement_vertices_for(poly, &tips).unwrap();
    let mut required = BitSet::new(poly.len());
    for &t in &tips {
        required.insert(t);
    }
    let masks: Vec<BitSet> = cands.iter().map(|c| poly.visible_vertices(c).unwrap()).collect();
    let covers = enumerate_covers(&masks, &required, inst.expected_k, 50_000_000).unwrap();
    let sets = covers.into_iter().map(|c| c.into_iter().map(|i| cands[i].clone()).collect()).collect();
    (inst, sets)
}

/// Offset of `x` from the line of `s`, in the sup-normalised frame the
/// sausage widths are measured in.
fn offset(s: &Segment, x: &Point) -> Rational {
    let u = s.b.sub(&s.a);
    let abs = |r: Rational| if r < rat(0, 1) { -r } else { r };
    let m = core::cmp::max(abs(u.x().clone()), abs(u.y().clone()));
    let dir = u.scale(&(rat(1, 1) / m));
    abs(dir.cross(&x.sub(&s.a)) / dir.norm2())
}

#[test]
fn optimal_candidates_occupy_every_sausage() {
    // exact occupancy fails near segment ends, where a guard just off the
    // line still sees all four tips, so the check is against the sausage
    for fam in [Family::Circle, Family::Clover(3), Family::Grid { h: 3, v: 2 }] {
        let (inst, sets) = optimal_candidate_sets(&fam);
        let widths = validate_sausages(&inst, 1).unwrap().width_bounds;
        assert!(!sets.is_empty(), "{fam}");
        for guards in &sets {
            for (s, w) in inst.segments().iter().zip(&widths) {
                assert!(guards.iter().any(|g| offset(s, g) <= *w), "{fam}: {s:?} empty in {guards:?}");
            }
        }
    }
}

#[test]
fn clover_optima_sit_on_crossings_or_own_segments() {
    // in clover(3) every optimal guard covers at least one segment nobody
    // else covers, and guards on two segments stand on their crossing
    let (inst, sets) = optimal_candidate_sets(&Family::Clover(3));
    let segs = inst.segments();
    for guards in &sets {
        for g in guards {
            let on: Vec<usize> = (0..segs.len()).filter(|&i| segs[i].contains(g)).collect();
            assert!(!on.is_empty());
            let own = on.iter().any(|&i| guards.iter().filter(|h| segs[i].contains(h)).count() == 1);
            assert!(own, "guard {g} shares all its segments in {guards:?}");
        }
    }
}

#[test]
fn grid_optima_avoid_vertical_only_positions() {
    let (inst, sets) = optimal_candidate_sets(&Family::Grid { h: 3, v: 2 });
    let segs = inst.segments();
    for guards in &sets {
        for g in guards {
            // horizontal segments come first
            assert!((0..3).any(|i| segs[i].contains(g)), "guard {g} only on a vertical segment");
        }
    }
}

#[test]
fn double_torus_arcs() {
    let inst = generate_family(&Family::DoubleTorus).unwrap();
    let segs = inst.segments();
    let seen = |pocket: &str| -> Vec<(usize, Vec<(Rational, Rational)>)> {
        let tip = inst.extra_pockets.iter().find(|p| p.name == pocket).unwrap().tip;
        (0..segs.len())
            .map(|i| (i, visible_intervals(&inst.polygon, &segs[i], tip).unwrap()))
            .filter(|(_, iv)| !iv.is_empty())
            .collect()
    };
    let iv = |a: (i64, i64), b: (i64, i64)| (rat(a.0, a.1), rat(b.0, b.1));
    // on the triangles each circle pocket sees one corner arc; off them only
    // the loose ends, plus interior points of the far side of the path
    let c1 = seen("circle_1");
    assert_eq!(c1[0], (0, vec![iv((0, 1), (1, 8))]));
    assert_eq!(c1[1], (2, vec![iv((1, 2), (1, 1))]));
    let c2 = seen("circle_2");
    assert_eq!(&c2[..2], &[(0, vec![iv((7, 8), (1, 1))]), (1, vec![iv((0, 1), (1, 2))])]);
    let c3 = seen("circle_3");
    assert_eq!(c3[0], (3, vec![iv((0, 1), (3, 23))]));
    assert_eq!(c3[1], (5, vec![iv((2, 5), (1, 1))]));
    let c4 = seen("circle_4");
    assert_eq!(&c4[..2], &[(3, vec![iv((17, 21), (1, 1))]), (4, vec![iv((0, 1), (2, 3))])]);
    let hole = seen("hole");
    assert_eq!(
        hole,
        vec![
            (1, vec![iv((1, 2), (1, 1))]),
            (2, vec![iv((0, 1), (1, 2))]),
            (4, vec![iv((2, 3), (1, 1))]),
            (5, vec![iv((0, 1), (2, 5))]),
        ]
    );
    // both loose ends of the path see every circle pocket
    let ends = [p(0, 1), p(0, -1)];
    for name in ["circle_1", "circle_2", "circle_3", "circle_4"] {
        let tip = inst.extra_pockets.iter().find(|q| q.name == name).unwrap().apex.clone();
        for e in &ends {
            assert!(inst.polygon.sees(e, &tip).unwrap(), "{e} misses {name}");
        }
    }
}
