mod common;

use artgallery_core::geometry::{validate_simple, Containment, Point};
use artgallery_core::visibility::{candidate_guard_points, visibility_arrangement, visibility_polygon};
use common::{interior_points, l_hexagon, star_polygon};
use proptest::prelude::*;

#[test]
fn l_hexagon_cells_match_brute_force() {
    let poly = l_hexagon();
    let arr = visibility_arrangement(&poly).unwrap();
    for cell in &arr.cells {
        assert_eq!(poly.contains(&cell.representative), Containment::Interior);
        assert_eq!(cell.visible, poly.visible_vertices(&cell.representative).unwrap());
    }
    // frozen from the first run; by hand: the corner square, and each arm
    // cut in two by x + y = 2 through the reflex vertex
    assert_eq!(arr.cells.len(), 5);
}

#[test]
fn l_hexagon_candidates_dominate() {
    let poly = l_hexagon();
    let cands = candidate_guard_points(&visibility_arrangement(&poly).unwrap());
    let masks: Vec<_> = cands.iter().map(|c| poly.visible_vertices(c).unwrap()).collect();
    let mut tried = 0;
    for a in 0..=40i64 {
        for b in 0..=40i64 {
            let q = Point::from_ratios(a, 20, b, 20);
            if poly.contains(&q) == Containment::Exterior {
                continue;
            }
            tried += 1;
            let seen = poly.visible_vertices(&q).unwrap();
            assert!(masks.iter().any(|m| seen.is_subset(m)), "no candidate dominates {q}");
        }
    }
    assert!(tried >= 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn regions_are_star_shaped_and_exact(seed in any::<u64>()) {
        let poly = star_polygon(seed, 16);
        let pts = interior_points(&poly, seed ^ 7, 4);
        for p in &pts {
            let reg = visibility_polygon(&poly, p).unwrap();
            if !reg.has_antenna() {
                prop_assert!(validate_simple(reg.region.vertices()).is_valid());
            }
            for v in reg.region.vertices() {
                prop_assert!(poly.sees(v, p).unwrap());
            }
            // membership agrees with sees, both ways round
            for q in &pts {
                prop_assert_eq!(reg.region.contains(q) != Containment::Exterior, poly.sees(p, q).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn candidates_dominate_random_guards(seed in any::<u64>()) {
        let poly = star_polygon(seed, 12);
        let cands = candidate_guard_points(&visibility_arrangement(&poly).unwrap());
        let masks: Vec<_> = cands.iter().map(|c| poly.visible_vertices(c).unwrap()).collect();
        for g in interior_points(&poly, seed ^ 3, 5) {
            let seen = poly.visible_vertices(&g).unwrap();
            prop_assert!(masks.iter().any(|m| seen.is_subset(m)));
        }
    }
}
