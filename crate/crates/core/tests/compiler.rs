mod common;

use std::sync::OnceLock;

use artgallery_core::compiler::{
    certify, compile_gallery, formula_from_faces, parse_faces, placement_to_point, point_to_placement,
    project_placement, rewrite_with_satisfiers, CompiledGallery, HypercubeFaceUnion, LayoutParams,
};
use artgallery_core::gadgets::Family;
use artgallery_core::geometry::{rat, Point, Rational};
use artgallery_core::solver::{check_placement, solve_on_segments, GuardPlacement, SegmentFeasibility};
use artgallery_core::topology::{sample_solutions, SampleOptions};
use artgallery_core::Error;

const THREE_FACES: &str = "X1=0; X2=1 & X3=0; X1=1 & X2=1 & X3=1";

fn compile(text: &str, n: usize) -> CompiledGallery {
    let u = parse_faces(n, text).unwrap();
    let phi = rewrite_with_satisfiers(&formula_from_faces(&u).unwrap());
    compile_gallery(&phi, &LayoutParams::default()).unwrap()
}

fn three_faces() -> &'static CompiledGallery {
    static CG: OnceLock<CompiledGallery> = OnceLock::new();
    CG.get_or_init(|| compile(THREE_FACES, 3))
}

fn pt(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(a, b)| rat(a, b)).collect()
}

#[test]
fn formula_ordering_and_normalisation() {
    // the second line repeats an edge of the face X1=0 and is dropped
    let u = parse_faces(3, &format!("{THREE_FACES}; X1=0 & X2=1")).unwrap();
    let phi = formula_from_faces(&u).unwrap();
    assert_eq!(phi.to_string(), "(X1=0) | (X2=1 & X3=0) | (X1=1 & X2=1 & X3=1)");
    assert!(!phi.is_tautology());
    let r = rewrite_with_satisfiers(&phi);
    assert_eq!(r.g(), 6);
    assert_eq!(r.satisfier_count, 3);
    assert_eq!(r.group(2).count(), 3);
    assert!(r.eval(&pt(&[(0, 1), (1, 2), (1, 3)]), &[false, true, true]));
    assert!(!r.eval(&pt(&[(0, 1), (1, 2), (1, 3)]), &[true, true, true]));
    assert!(!r.eval(&pt(&[(1, 1), (1, 2), (1, 3)]), &[false, true, true]));
}

#[test]
fn whole_cube_is_a_tautology() {
    let u = parse_faces(2, "*; X1=0").unwrap();
    let phi = formula_from_faces(&u).unwrap();
    assert!(phi.is_tautology());
    assert_eq!(phi.conjunctions.len(), 1);
}

#[test]
fn malformed_unions_are_rejected() {
    assert!(matches!(parse_faces(2, ""), Err(Error::EmptyFaceUnion)));
    assert!(parse_faces(2, "X3=0").is_err());
    assert!(parse_faces(2, "X1=2").is_err());
    assert!(parse_faces(2, "X1=0 & X1=1").is_err());
    assert!(parse_faces(2, "X0=1").is_err());
    assert!(HypercubeFaceUnion::from_lists(0, &[&[(0, 1)]]).is_err());
}

#[test]
fn two_conjunctions_need_one_dummy() {
    let cg = compile("X1=0; X1=1", 1);
    assert_eq!(cg.m(), 2);
    assert_eq!(cg.dummy_segments.len(), 1);
    assert_eq!(cg.guard_count(), 1 + 1 + 2 + 1);
    certify(&cg).unwrap();
}

#[test]
fn three_face_counts_and_certificate() {
    let cg = three_faces();
    assert_eq!(cg.n(), 3);
    assert_eq!(cg.m(), 3);
    assert_eq!(cg.dummy_segments.len(), 2);
    assert_eq!(cg.helper_segments.len(), 6);
    assert_eq!(cg.gadgets.len(), 6);
    assert_eq!(cg.guard_count(), 12);
    assert_eq!(cg.instance.family, Family::Compiled);
    certify(cg).unwrap();
}

#[test]
fn three_face_round_trips() {
    let cg = three_faces();
    for p in [
        pt(&[(0, 1), (1, 1), (0, 1)]),
        pt(&[(0, 1), (1, 7), (5, 9)]),
        pt(&[(1, 2), (1, 1), (0, 1)]),
        pt(&[(1, 1), (1, 1), (1, 1)]),
        pt(&[(0, 1), (0, 1), (0, 1)]),
    ] {
        let g = point_to_placement(cg, &p).unwrap();
        assert_eq!(g.len(), 12);
        assert!(check_placement(&cg.instance.polygon, &g).unwrap().fully_covered);
        assert_eq!(placement_to_point(cg, &g).unwrap(), p);
        let once = project_placement(cg, &g).unwrap();
        assert_eq!(project_placement(cg, &once).unwrap(), once);
        assert_eq!(placement_to_point(cg, &once).unwrap(), p);
    }
}

#[test]
fn points_off_the_union_are_rejected() {
    let cg = three_faces();
    match point_to_placement(cg, &pt(&[(1, 1), (0, 1), (0, 1)])) {
        Err(Error::NotInUnion(msg)) => assert!(msg.contains("X1=0"), "{msg}"),
        other => panic!("expected NotInUnion, got {other:?}"),
    }
    assert!(point_to_placement(cg, &pt(&[(0, 1), (1, 1)])).is_err());
}

fn grid(res: i64) -> Vec<Rational> {
    (0..=res).map(|i| rat(i, res)).collect()
}

#[test]
fn disjunction_corridors_see_only_their_literals() {
    let bad = common::disjunction_violations(three_faces(), 32);
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn dummy_interiors_serve_nothing() {
    let cg = three_faces();
    let poly = &cg.instance.polygon;
    let segs = cg.instance.segments();
    let corridors: Vec<usize> = cg.gadgets.iter().flat_map(|g| g.corridor_tips).collect();
    for i in 0..cg.dummy_segments.len() {
        for t in grid(64).iter().filter(|t| **t > rat(0, 1) && **t < rat(1, 1)) {
            let q = segs[cg.dummy_site(i)].at(t);
            assert!(corridors.iter().all(|&c| !poly.sees(&q, poly.vertex(c)).unwrap()), "D{i} at {t}");
        }
    }
}

#[test]
fn single_face_gallery() {
    // X1 = 0 alone: three guards, none of them free
    let cg = compile("X1=0", 1);
    assert_eq!(cg.guard_count(), 3);
    assert!(cg.dummy_segments.is_empty());
    certify(&cg).unwrap();
    let k = cg.guard_count();
    assert!(solve_on_segments(&cg.instance, k, None).unwrap().is_feasible());
    let pinned = artgallery_core::compiler::site_ranges(&cg, &[(0, rat(1, 2))]);
    assert!(matches!(solve_on_segments(&cg.instance, k, Some(&pinned)).unwrap(), SegmentFeasibility::Infeasible { .. }));
    let mut opts = SampleOptions::for_family(&Family::Compiled);
    opts.resolution = 8;
    let cloud = sample_solutions(&cg.instance, &opts).unwrap();
    assert!(!cloud.points.is_empty());
    for cp in &cloud.points {
        assert_eq!(placement_to_point(&cg, &cp.placement).unwrap(), vec![rat(0, 1)]);
    }
}

#[test]
fn wrong_guard_counts_are_reported() {
    let cg = three_faces();
    let g = GuardPlacement::new(vec![Point::from_ints(0, 0)]);
    assert!(placement_to_point(cg, &g).is_err());
}
