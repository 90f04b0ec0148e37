mod common;

use clustertest_core::geometry::{annulus_cover, pair_fits, Facet};
use clustertest_core::oracle::{count_witnesses, farness, max_coverage_1};
use clustertest_core::{
    contains, covering_t, fits_in_k_translates, fits_in_translate, gen_clusterable, gen_far, io, meb,
    test_1_cluster, test_k_cluster, ConvexBody, CountingSource, Point, PointSet, TesterParams, Verdict,
};
use proptest::prelude::*;

fn pt2() -> impl Strategy<Value = Point> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| Point::from([x, y]))
}

fn pts(d: usize, lo: usize, hi: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, d), lo..=hi)
        .prop_map(|v| v.into_iter().map(|c| Point::new(c).unwrap()).collect())
}

fn body2() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        (0.3f64..2.0).prop_map(|r| ConvexBody::ball(r).unwrap()),
        (0.3f64..2.0, 0.3f64..2.0).prop_map(|(a, b)| ConvexBody::axis_box(vec![a, b]).unwrap()),
        (0.2f64..2.0, 0.2f64..2.0, -0.15f64..0.15)
            .prop_map(|(a, b, c)| ConvexBody::ellipsoid(vec![vec![a, c], vec![c, b]]).unwrap()),
        (0.3f64..2.0).prop_map(|s| ConvexBody::sym_polytope(vec![
            Facet { normal: vec![1.0, 1.0], offset: s },
            Facet { normal: vec![-1.0, -1.0], offset: s },
            Facet { normal: vec![1.0, -2.0], offset: s },
            Facet { normal: vec![-1.0, 2.0], offset: s },
        ]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn containment_is_symmetric(body in body2(), c in pt2(), p in pt2()) {
        prop_assert_eq!(contains(&body, &c, &p).unwrap(), contains(&body, &p, &c).unwrap());
        prop_assert!(contains(&body, &p, &p).unwrap());
    }

    #[test]
    fn pair_rule_is_midpoint_test(body in body2(), p in pt2(), q in pt2()) {
        let fits = fits_in_translate(&body, &[p.clone(), q.clone()]).unwrap();
        prop_assert_eq!(pair_fits(&body, &p, &q), fits.is_some());
        // no other centre can succeed where the midpoint fails
        let mid = p.midpoint(&q);
        prop_assert_eq!(pair_fits(&body, &p, &q), contains(&body, &mid, &p).unwrap());
    }

    #[test]
    fn returned_centres_contain_everything(body in body2(), s in pts(2, 1, 8), k in 1usize..4) {
        if let Some(c) = fits_in_translate(&body, &s).unwrap() {
            prop_assert!(s.iter().all(|p| contains(&body, &c, p).unwrap()));
        }
        if let Some(cs) = fits_in_k_translates(&body, &s, k).unwrap() {
            prop_assert!(cs.len() == k);
            prop_assert!(s.iter().all(|p| cs.iter().any(|c| contains(&body, c, p).unwrap())));
        }
    }

    #[test]
    fn fit_never_misses_a_grid_centre(s in pts(2, 3, 6), r in 0.5f64..3.0, w in 0.5f64..2.5, h in 0.5f64..2.5) {
        let ball = ConvexBody::ball(r).unwrap();
        if common::grid_fit(&s, 0.05, |x| (x[0] * x[0] + x[1] * x[1]).sqrt() <= r) {
            prop_assert!(fits_in_translate(&ball, &s).unwrap().is_some());
        }
        let bx = ConvexBody::axis_box(vec![w, h]).unwrap();
        if common::grid_fit(&s, 0.05, |x| x[0].abs() <= w && x[1].abs() <= h) {
            prop_assert!(fits_in_translate(&bx, &s).unwrap().is_some());
        }
    }

    #[test]
    fn helly_triples_decide_the_plane(body in body2(), s in pts(2, 3, 7)) {
        let set = PointSet::new(2, s.clone()).unwrap();
        let (bad, _) = count_witnesses(&body, &set, 1).unwrap();
        prop_assert_eq!(bad == 0, fits_in_translate(&body, &s).unwrap().is_some());
    }

    #[test]
    fn meb_matches_support_brute_force(s in pts(2, 1, 9)) {
        let b = meb(&s).unwrap();
        prop_assert!((b.radius - common::brute_meb(&s)).abs() <= 1e-9 * (1.0 + b.radius));
    }

    #[test]
    fn meb_is_monotone(s in pts(3, 1, 9), extra in prop::collection::vec(-3.0f64..3.0, 3)) {
        let r0 = meb(&s).unwrap().radius;
        let mut more = s.clone();
        more.push(Point::new(extra).unwrap());
        prop_assert!(meb(&more).unwrap().radius >= r0 - 1e-12);
        prop_assert!((r0 - common::brute_meb(&s)).abs() <= 1e-9 * (1.0 + r0));
    }

    #[test]
    fn annulus_samples_are_covered(slack in 0.01f64..0.99, body in body2(), samples in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 200)) {
        let est = covering_t(&body, 2, slack).unwrap();
        let cover = annulus_cover(&body, 2, &est).unwrap();
        let ext = body.bounding_half_extents(2);
        let scale = 2.0 + slack;
        for (u, v) in samples {
            // proposal in the scaled bounding box, kept if in the scaled body but not the body
            let x = Point::from([(2.0 * u - 1.0) * ext[0] * scale, (2.0 * v - 1.0) * ext[1] * scale]);
            let shrunk = Point::from([x[0] / scale, x[1] / scale]);
            if !body.contains_offset(shrunk.coords()) || body.contains_offset(x.coords()) {
                continue;
            }
            prop_assert!(cover.iter().any(|c| contains(&body, c, &x).unwrap()), "{:?} uncovered", x);
        }
    }

    #[test]
    fn max_coverage_agrees_with_naive(s in pts(2, 1, 25), r in 0.3f64..2.0) {
        let set = PointSet::new(2, s.clone()).unwrap();
        let ball = ConvexBody::ball(r).unwrap();
        let cov = max_coverage_1(&ball, &set).unwrap();
        prop_assert_eq!(cov.count, common::naive_disc_coverage(&s, r));
        prop_assert_eq!(farness(&ball, &set, 1).unwrap().removals, s.len() - cov.count);
    }

    #[test]
    fn testers_are_deterministic_and_count_reads(seed in any::<u64>(), eps in 0.05f64..1.0) {
        let ball = ConvexBody::ball(1.0).unwrap();
        let inst = gen_far(&ball, 1, 200, 2, 0.3, 3).unwrap();
        let params = TesterParams::new(eps, 0.2, seed).unwrap();
        let src = CountingSource::new(&inst.points);
        let a = test_1_cluster(&src, &ball, &params).unwrap();
        prop_assert_eq!(&a, &test_1_cluster(&inst.points, &ball, &params).unwrap());
        let used = match &a.verdict {
            Verdict::Reject { iterations_used, .. } => *iterations_used,
            Verdict::Accept => a.iterations,
        };
        prop_assert_eq!(src.reads(), used * a.subset_size as u64);
    }

    #[test]
    fn clusterable_inputs_are_never_rejected(seed in any::<u64>(), k in 1usize..4, d in 1usize..4) {
        let bx = ConvexBody::axis_box(vec![1.5; d]).unwrap();
        let inst = gen_clusterable(&bx, k, 60, d, seed).unwrap();
        let params = TesterParams::new(0.2, 0.2, seed ^ 0x5555).unwrap();
        if k == 1 {
            prop_assert!(!test_1_cluster(&inst.points, &bx, &params).unwrap().verdict.is_reject());
        }
        prop_assert!(!test_k_cluster(&inst.points, &bx, k, &params, 2).unwrap().verdict.is_reject());
    }

    #[test]
    fn point_files_round_trip(s in pts(3, 0, 20)) {
        let set = PointSet::new(3, s).unwrap();
        let mut buf = Vec::new();
        io::write_csv(&mut buf, &set).unwrap();
        prop_assert_eq!(&io::read_csv(buf.as_slice()).unwrap(), &set);
        prop_assert_eq!(io::parse_points(&io::to_json(&set, None)).unwrap().points, set);
    }
}

#[test]
fn far_generator_is_certified() {
    let ball = ConvexBody::ball(1.0).unwrap();
    let bx = ConvexBody::axis_box(vec![1.0, 0.5]).unwrap();
    for seed in 0..20 {
        for (body, k, n, eps) in [(&ball, 1, 40, 0.2), (&bx, 1, 60, 0.1), (&ball, 2, 20, 0.25), (&bx, 3, 24, 0.3)] {
            let inst = gen_far(body, k, n, 2, eps, seed).unwrap();
            let clustertest_core::Truth::Far { spike_count, .. } = inst.truth else { unreachable!() };
            let f = farness(body, &inst.points, k).unwrap();
            assert!(f.exact);
            assert_eq!(f.removals, spike_count, "seed {seed} k {k}");
        }
    }
}

#[test]
fn k_center_exact_matches_partitions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=3);
        let s: Vec<Point> = (0..n).map(|_| Point::from([rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])).collect();
        let got = clustertest_core::kcenter::k_center_exact(&s, k).unwrap();
        let (r, labels) = common::partition_k_center(&s, k);
        assert!((got.max_radius() - r).abs() <= 1e-9 * (1.0 + r));
        assert_eq!(got.assignment, labels);
    }
}
