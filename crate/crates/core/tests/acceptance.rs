//! One PASS/FAIL line per primary criterion. Run with `--nocapture` to see
//! the table; the test itself fails on any failure outside `KNOWN_FAILURES`.
#![allow(clippy::result_large_err)]

mod common;

use std::time::{Duration, Instant};

use artgallery_core::compiler::{
    compile_gallery, formula_from_faces, parse_faces, placement_to_point, point_to_placement, rewrite_with_satisfiers,
    site_ranges, CompiledGallery, LayoutParams,
};
use artgallery_core::gadgets::{generate_family, validate_sausages, Family};
use artgallery_core::geometry::{rat, Containment, Rational};
use artgallery_core::solver::{check_placement, min_vertex_guard_set, solve_on_segments, SegmentFeasibility};
use artgallery_core::topology::{cloud_betti, hausdorff, sample_family, SampleOptions};
use artgallery_core::visibility::{candidate_guard_points, visibility_arrangement, visibility_polygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;
const METRIC_TOL: f64 = 1e-12;
const MIN_GUARD_BUDGET: Duration = Duration::from_secs(60);
const DOUBLE_TORUS_BUDGET: Duration = Duration::from_secs(600);
const THREE_FACE_BUDGET: Duration = Duration::from_secs(900);
const SINGLE_FACE_BUDGET: Duration = Duration::from_secs(10);
const BETTI_BUDGET: Duration = Duration::from_secs(300);
const ROUND_TRIPS: usize = 50;

/// Criteria expected to fail, each with its ledger reason. Four circles in
/// a closed ring carry five independent loops, not four.
const KNOWN_FAILURES: &[&str] = &["betti necklace(4)"];

#[derive(Default)]
struct Report {
    lines: Vec<(String, bool, bool, String)>,
}

impl Report {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        self.lines.push((name.into(), ok, false, detail));
    }

    fn stretch(&mut self, name: &str, ok: bool, detail: String) {
        self.lines.push((name.into(), ok, true, detail));
    }

    fn timed<T>(&mut self, name: &str, budget: Duration, f: impl FnOnce() -> (bool, T, String)) -> T {
        let t = Instant::now();
        let (ok, out, detail) = f();
        let el = t.elapsed();
        self.record(name, ok && el <= budget, format!("{detail} in {el:.2?} (budget {budget:?})"));
        out
    }
}

fn three_faces() -> CompiledGallery {
    let u = parse_faces(3, "X1=0; X2=1 & X3=0; X1=1 & X2=1 & X3=1").unwrap();
    compile_gallery(&rewrite_with_satisfiers(&formula_from_faces(&u).unwrap()), &LayoutParams::default()).unwrap()
}

fn min_guards(rep: &mut Report) {
    let table = [
        (Family::Circle, 2, MIN_GUARD_BUDGET),
        (Family::Clover(3), 3, MIN_GUARD_BUDGET),
        (Family::Clover(4), 4, MIN_GUARD_BUDGET),
        (Family::Grid { h: 2, v: 2 }, 2, MIN_GUARD_BUDGET),
        (Family::Grid { h: 3, v: 2 }, 3, MIN_GUARD_BUDGET),
        (Family::Grid { h: 4, v: 1 }, 4, MIN_GUARD_BUDGET),
        (Family::Grid { h: 4, v: 2 }, 4, MIN_GUARD_BUDGET),
        (Family::Chain(2), 5, MIN_GUARD_BUDGET),
        (Family::Torus, 4, MIN_GUARD_BUDGET),
        (Family::DoubleTorus, 6, DOUBLE_TORUS_BUDGET),
    ];
    for (fam, want, budget) in table {
        rep.timed(&format!("min guards {fam}"), budget, || {
            let inst = generate_family(&fam).unwrap();
            let got = min_vertex_guard_set(&inst.polygon, want + 2).unwrap().k();
            (got == Some(want), (), format!("expected {want}, got {got:?}"))
        });
    }
}

fn compiler_counts(rep: &mut Report) -> CompiledGallery {
    let cg = rep.timed("compiler three-face optimum n+m+g", THREE_FACE_BUDGET, || {
        let cg = three_faces();
        // m - 1 dummies plus the auxiliary point make up the m
        let want = cg.n() + cg.m() + cg.g();
        let got = min_vertex_guard_set(&cg.instance.polygon, want + 1).unwrap().k();
        (got == Some(12) && want == 12, cg, format!("expected {want}, got {got:?}"))
    });
    rep.timed("compiler X1=0 optimum", SINGLE_FACE_BUDGET, || {
        let u = parse_faces(1, "X1=0").unwrap();
        let cg = compile_gallery(&rewrite_with_satisfiers(&formula_from_faces(&u).unwrap()), &LayoutParams::default()).unwrap();
        let got = min_vertex_guard_set(&cg.instance.polygon, 5).unwrap().k();
        (got == Some(3), (), format!("expected 3, got {got:?}"))
    });
    cg
}

/// A random point of the union: a random face, its free coordinates drawn
/// from denominators up to 97.
fn random_point(cg: &CompiledGallery, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let face = &cg.conjunctions[rng.gen_range(0..cg.conjunctions.len())];
    (0..cg.n())
        .map(|v| match face.iter().find(|c| c.var == v) {
            Some(c) => rat(i64::from(c.value), 1),
            None => {
                let d = rng.gen_range(1..=97);
                rat(rng.gen_range(0..=d), d)
            }
        })
        .collect()
}

fn round_trips(rep: &mut Report, cg: &CompiledGallery) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for _ in 0..ROUND_TRIPS {
        let p = random_point(cg, &mut rng);
        match point_to_placement(cg, &p).and_then(|g| placement_to_point(cg, &g)) {
            Ok(back) if back == p => {}
            other => failures.push(format!("{p:?} -> {other:?}")),
        }
    }
    rep.record("round-trip point -> placement -> point", failures.is_empty(), format!("{ROUND_TRIPS} points, failures {failures:?}"));

    // optima drawn by pinning a random subset of variable guards to random
    // grid parameters and asking the segment solver for any completion
    let mut failures = Vec::new();
    let (mut found, mut trials) = (0, 0);
    while found < ROUND_TRIPS && trials < 20 * ROUND_TRIPS {
        trials += 1;
        let mut fixed: Vec<(usize, Rational)> = Vec::new();
        for v in 0..cg.n() {
            if rng.gen_bool(0.5) {
                fixed.push((v, rat(rng.gen_range(0..=8), 8)));
            }
        }
        let ranges = site_ranges(cg, &fixed);
        if let SegmentFeasibility::Feasible { witness } = solve_on_segments(&cg.instance, ranges.len(), Some(&ranges)).unwrap() {
            found += 1;
            let covered = check_placement(&cg.instance.polygon, &witness).unwrap().fully_covered;
            match placement_to_point(cg, &witness) {
                Ok(p) if covered && cg.in_union(&p) => {}
                other => failures.push(format!("{fixed:?} -> {other:?}, covered {covered}")),
            }
        }
    }
    rep.record(
        "round-trip sampled optima project into U",
        failures.is_empty() && found == ROUND_TRIPS,
        format!("{found} optima from {trials} pinnings, failures {failures:?}"),
    );
}

fn betti_suite(rep: &mut Report) {
    let suite: [(Family, &[usize]); 9] = [
        (Family::Circle, &[1, 1]),
        (Family::Clover(2), &[1, 2]),
        (Family::Clover(3), &[1, 3]),
        (Family::Grid { h: 2, v: 2 }, &[2]),
        (Family::Grid { h: 3, v: 2 }, &[1, 1]),
        (Family::Grid { h: 4, v: 1 }, &[1, 0]),
        (Family::Necklace(4), &[1, 4]),
        (Family::Torus, &[1, 2]),
        (Family::Chain(2), &[1, 2]),
    ];
    for (fam, want) in suite {
        rep.timed(&format!("betti {fam}"), BETTI_BUDGET, || {
            let inst = generate_family(&fam).unwrap();
            let opts = SampleOptions::for_family(&fam);
            let cloud = sample_family(&inst, &opts).unwrap();
            let got = cloud_betti(&cloud, cloud.default_epsilon(), want.len() - 1).unwrap();
            (got == want, (), format!("expected {want:?}, got {got:?} (r={}, {} points)", opts.resolution, cloud.points.len()))
        });
    }
    let t = Instant::now();
    let fam = Family::Grid { h: 4, v: 2 };
    let cloud = sample_family(&generate_family(&fam).unwrap(), &SampleOptions::new(8)).unwrap();
    let got = cloud_betti(&cloud, cloud.default_epsilon(), 2).unwrap();
    rep.stretch("betti grid(4,2) beta2", got[2] == 1, format!("expected beta2 = 1, got {got:?} (r=8) in {:.2?}", t.elapsed()));
    let t = Instant::now();
    let fam = Family::DoubleTorus;
    let cloud = sample_family(&generate_family(&fam).unwrap(), &SampleOptions::for_family(&fam)).unwrap();
    let got = cloud_betti(&cloud, cloud.default_epsilon(), 1).unwrap();
    rep.stretch("betti double torus beta1", got[1] == 4, format!("expected beta1 = 4, got {got:?} in {:.2?}", t.elapsed()));
}

fn property_suites(rep: &mut Report, cg: &CompiledGallery) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let mut set = || -> Vec<(f64, f64)> {
            (0..rng.gen_range(1..6)).map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0))).collect()
        };
        let (a, b, c) = (set(), set(), set());
        let d = |x: &[(f64, f64)], y: &[(f64, f64)]| hausdorff(x, y).unwrap();
        worst = worst.max(d(&a, &a)).max((d(&a, &b) - d(&b, &a)).abs()).max(d(&a, &c) - d(&a, &b) - d(&b, &c));
    }
    rep.record("hausdorff metric axioms", worst <= METRIC_TOL, format!("200 triples, worst violation {worst:e}"));

    let mut bad = Vec::new();
    let mut undominated = Vec::new();
    let mut dominated = 0;
    for seed in 0..100u64 {
        let n = 4 + (seed as usize % 17);
        let poly = common::random_simple_polygon(seed, n);
        let pts = common::interior_points(&poly, seed ^ 7, 6);
        for p in &pts {
            let reg = visibility_polygon(&poly, p).unwrap();
            if reg.region.vertices().iter().any(|v| !poly.sees(v, p).unwrap()) {
                bad.push(format!("seed {seed}: region of {p} not star-shaped"));
            }
            for q in &pts {
                if poly.sees(p, q).unwrap() != poly.sees(q, p).unwrap() {
                    bad.push(format!("seed {seed}: sees({p}, {q}) asymmetric"));
                }
                if (reg.region.contains(q) != Containment::Exterior) != poly.sees(p, q).unwrap() {
                    bad.push(format!("seed {seed}: region of {p} disagrees with sees at {q}"));
                }
            }
        }
        let cands = candidate_guard_points(&visibility_arrangement(&poly).unwrap());
        let masks: Vec<_> = cands.iter().map(|c| poly.visible_vertices(c).unwrap()).collect();
        if let Some(g) = pts.first() {
            let seen = poly.visible_vertices(g).unwrap();
            if masks.iter().any(|m| seen.is_subset(m)) {
                dominated += 1;
            } else {
                undominated.push(format!("seed {seed}: {g}"));
            }
        }
    }
    rep.record("sees symmetry and star-shaped regions", bad.is_empty(), format!("100 polygons, violations {bad:?}"));
    rep.record("candidate domination", dominated == 100, format!("{dominated} of 100 placements dominated, misses {undominated:?}"));

    let r = validate_sausages(&generate_family(&Family::Chain(2)).unwrap(), 8).unwrap();
    let found = !r.spurious_candidates.is_empty();
    let refuted = r.spurious_candidates.iter().all(|s| s.refuted);
    rep.record("sausage pseudo-solution found and refuted", found && refuted, format!("{} candidates, all refuted {refuted}", r.spurious_candidates.len()));

    let bad = common::disjunction_violations(cg, 32);
    rep.record("disjunction iff-property at resolution 32", bad.is_empty(), format!("{} gadgets, violations {bad:?}", cg.gadgets.len()));
}

#[test]
fn acceptance() {
    let mut rep = Report::default();
    min_guards(&mut rep);
    let cg = compiler_counts(&mut rep);
    round_trips(&mut rep, &cg);
    betti_suite(&mut rep);
    property_suites(&mut rep, &cg);

    let mut unexpected = Vec::new();
    for (name, ok, stretch, detail) in &rep.lines {
        let tag = match (ok, stretch) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "PASS (stretch)",
            (false, true) => "FAIL (stretch)",
        };
        println!("{tag:<15} {name}: {detail}");
        if !ok && !stretch && !KNOWN_FAILURES.contains(&name.as_str()) {
            unexpected.push(name.clone());
        }
        if *ok && KNOWN_FAILURES.contains(&name.as_str()) {
            unexpected.push(format!("{name} now passes; update KNOWN_FAILURES"));
        }
    }
    assert!(unexpected.is_empty(), "unexpected results: {unexpected:?}");
}
