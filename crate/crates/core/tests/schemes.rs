use madcc_core::array::{phi_candidates, verify_dpda, Cell, SchemeLabel};
use madcc_core::design::{proper_oa, reed_solomon_oa, trivial_gdd, Design};
use madcc_core::math::{binom, ratio};
use madcc_core::scheme::{
    complete_family_scheme, oa_user_scheme, retrieval_stars, tdesign_metrics, tdesign_placement, tdesign_scheme,
    tgdd_metrics, tgdd_scheme, trivial_gdd_scheme, Family, SCount, SchemeBundle, TdesignVariant,
};
use madcc_core::{fixtures, Error, Ratio};

fn int(n: i128) -> Ratio {
    Ratio::from_integer(n)
}

fn check_bundle(b: &SchemeBundle) {
    assert!(verify_dpda(&b.delivery, &b.phi).is_valid());
    for s in 1..=b.phi.len() as u32 {
        assert!(phi_candidates(&b.delivery, s).contains(&b.phi.sender(s).unwrap()), "s{s}");
    }
    if let Some(layout) = &b.layout {
        let stars = retrieval_stars(&layout.topology, &layout.placement).unwrap();
        for (r, line) in stars.iter().enumerate() {
            for (k, &s) in line.iter().enumerate() {
                assert_eq!(s, b.delivery.get(r, k).is_star(), "row {r} user {k}");
            }
        }
    }
}

#[test]
fn fano_placement() {
    let p = tdesign_placement(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
    assert_eq!((p.rows(), p.caches(), p.z_prime()), (21, 7, Some(3)));
    // rows come in groups of C(3,1) per point; cache x holds exactly the group of {x}
    for x in 0..7 {
        let held: Vec<usize> = (0..21).filter(|&r| p.is_star(r, x)).collect();
        assert_eq!(held, vec![3 * x, 3 * x + 1, 3 * x + 2]);
    }
}

#[test]
fn wide_placement() {
    let p = tdesign_placement(&fixtures::design_2_6_3_2(), 2, 2, TdesignVariant::Wide).unwrap();
    assert_eq!((p.rows(), p.caches(), p.z_prime()), (45, 6, Some(15)));
    let b = tdesign_scheme(&fixtures::design_2_6_3_2(), 2, 2, TdesignVariant::Wide).unwrap();
    assert_eq!(b.metrics.memory_ratio, Ratio::new(1, 3));
    check_bundle(&b);
}

#[test]
fn placement_ratio_is_i_over_v() {
    for (d, t) in [(fixtures::steiner_3_8_4(), 3), (fixtures::steiner_3_10_4(), 3), (fixtures::fano(), 2)] {
        let p = tdesign_placement(&d, t, t - 1, TdesignVariant::Standard).unwrap();
        assert_eq!(ratio(p.z_prime().unwrap() as u128, p.rows() as u128), ratio(t as u128 - 1, d.v() as u128));
    }
}

#[test]
fn fano_scheme_labels() {
    let b = tdesign_scheme(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
    check_bundle(&b);
    assert_eq!(b.phi.send_counts(7), vec![6; 7]);
    let mut alphas = Vec::new();
    for r in 0..3 {
        for c in b.delivery.row(r) {
            if let Cell::Label(s) = c {
                let Some(SchemeLabel::Subset { points, occurrence }) = b.delivery.registry().get(*s) else { panic!() };
                assert!(points.contains(&1));
                alphas.push(*occurrence);
            }
        }
    }
    alphas.sort();
    alphas.dedup();
    assert_eq!(alphas, vec![1, 2]);
}

#[test]
fn eight_point_variants() {
    let m = tdesign_metrics(8, 4, 1, 3, 2, TdesignVariant::Standard).unwrap();
    assert_eq!((m.f, m.load), (112, int(1)));
    let w = tdesign_metrics(8, 4, 1, 3, 2, TdesignVariant::Wide).unwrap();
    assert_eq!((w.f, w.load), (168, Ratio::new(1, 2)));
    for (variant, want) in [(TdesignVariant::Standard, &m), (TdesignVariant::Wide, &w)] {
        let b = tdesign_scheme(&fixtures::steiner_3_8_4(), 3, 2, variant).unwrap();
        check_bundle(&b);
        assert_eq!((b.metrics.f, b.metrics.s, b.metrics.z), (want.f, want.s, want.z));
    }
}

#[test]
fn label_multiplicity_is_binomial() {
    // every label of the standard split occurs C(t, i) times
    let cases: Vec<(Design, usize)> =
        vec![(fixtures::fano(), 2), (fixtures::steiner_3_8_4(), 3), (fixtures::steiner_3_10_4(), 3)];
    for (d, t) in cases {
        for i in 1..t {
            let b = tdesign_scheme(&d, t, i, TdesignVariant::Standard).unwrap();
            let want = binom(t as u64, i as u64) as usize;
            assert!(b.delivery.label_cells().iter().all(|c| c.len() == want), "t={t} i={i}");
        }
    }
}

#[test]
fn out_of_range_splits() {
    let f = fixtures::fano();
    assert!(matches!(tdesign_scheme(&f, 2, 2, TdesignVariant::Standard), Err(Error::InvalidParameters(_))));
    assert!(matches!(tdesign_scheme(&f, 2, 3, TdesignVariant::Wide), Err(Error::InvalidParameters(_))));
    assert!(matches!(tdesign_scheme(&f, 3, 1, TdesignVariant::Standard), Err(Error::PreconditionFailed(_))));
    assert!(tdesign_metrics(7, 3, 1, 2, 0, TdesignVariant::Standard).is_err());
}

fn tgdd_example() -> SchemeBundle {
    tgdd_scheme(&trivial_gdd(3, 3, 2).unwrap(), &proper_oa(3, 3).unwrap(), 1).unwrap()
}

#[test]
fn tgdd_example_scheme() {
    let b = tgdd_example();
    check_bundle(&b);
    let m = &b.metrics;
    assert_eq!((m.k, m.gamma, m.l, m.f, m.z, m.s), (27, 9, 2, 18, 10, 72));
    assert_eq!((m.memory_ratio, m.load), (Ratio::new(1, 3), int(4)));
    let (closed, kind) = tgdd_metrics(3, 3, 2, 2, 2, 1).unwrap();
    assert_eq!(kind, SCount::Exact);
    assert_eq!(&closed, m);
}

#[test]
fn tgdd_sender_candidates() {
    let b = tgdd_example();
    let label = SchemeLabel::Vector { entries: vec![1, 1, 3], occurrence: 1 };
    let id = b.delivery.registry().id_of(&label).unwrap();
    let gdd = trivial_gdd(3, 3, 2).unwrap();
    let users: Vec<Vec<(u32, u32)>> =
        phi_candidates(&b.delivery, id).into_iter().map(|c| gdd.blocks()[c].clone()).collect();
    assert_eq!(users, vec![vec![(1, 1), (2, 1)], vec![(1, 1), (3, 3)], vec![(2, 1), (3, 3)]]);
}

#[test]
fn tgdd_labels_avoid_oa_rows() {
    let oa = proper_oa(3, 3).unwrap();
    let b = tgdd_example();
    let reg = b.delivery.registry();
    for id in 1..=reg.len() as u32 {
        let Some(SchemeLabel::Vector { entries, .. }) = reg.get(id) else { panic!() };
        assert!(!oa.rows().contains(entries));
    }
}

#[test]
fn tgdd_bound_holds() {
    // (m, q, t, s, l) outside both exact cases, on MDS codes
    for (m, q, t, s, l) in [(4, 3, 2, 2, 1), (5, 4, 3, 3, 1), (5, 4, 3, 3, 2), (4, 4, 2, 2, 1), (5, 5, 2, 3, 1)] {
        let (bound, kind) = tgdd_metrics(m, q, t, t, s, l).unwrap();
        assert_eq!(kind, SCount::UpperBound);
        let oa = reed_solomon_oa(q as u32, m, s).unwrap();
        let b = tgdd_scheme(&trivial_gdd(m, q, t).unwrap(), &oa, l).unwrap();
        check_bundle(&b);
        assert!(b.metrics.s <= bound.s, "({m},{q},{t},{s},{l}): {} > {}", b.metrics.s, bound.s);
        assert_eq!((b.metrics.k, b.metrics.f, b.metrics.z), (bound.k, bound.f, bound.z));
    }
}

#[test]
fn tgdd_ranges() {
    assert!(matches!(tgdd_metrics(3, 3, 2, 2, 3, 1), Err(Error::InvalidParameters(_))));
    assert!(matches!(tgdd_metrics(3, 3, 2, 2, 2, 2), Err(Error::InvalidParameters(_))));
    let oa = proper_oa(3, 3).unwrap();
    assert!(tgdd_scheme(&trivial_gdd(3, 3, 2).unwrap(), &oa, 2).is_err());
}

#[test]
fn oa_user_example() {
    let b = oa_user_scheme(3, 2, 2).unwrap();
    check_bundle(&b);
    let m = &b.metrics;
    assert_eq!((m.k, m.f, m.z, m.s), (4, 12, 9, 4));
    assert_eq!((m.memory_ratio, m.load), (Ratio::new(3, 4), Ratio::new(1, 3)));
    assert!(oa_user_scheme(3, 2, 3).is_err());
}

#[test]
fn trivial_gdd_schemes() {
    let b = trivial_gdd_scheme(3, 3, 2).unwrap();
    assert!(b.layout.is_none());
    let m = &b.metrics;
    assert_eq!((m.k, m.f), (27, 18));
    assert_eq!((m.memory_ratio, m.load), (Ratio::new(5, 9), int(4)));
    assert_eq!(trivial_gdd_scheme(3, 2, 2).unwrap().metrics.memory_ratio, Ratio::new(3, 4));
    let m = trivial_gdd_scheme(4, 2, 2).unwrap().metrics;
    assert_eq!((m.f, m.load), (16, Ratio::new(3, 2)));
}

#[test]
fn complete_families() {
    let expect = [
        (Family::I, 1, Ratio::new(3, 8), 24, Ratio::new(35, 2)),
        (Family::J, 1, Ratio::new(5, 8), 80, Ratio::new(21, 4)),
        (Family::J, 2, Ratio::new(25, 28), 280, int(1)),
        (Family::J, 3, Ratio::new(55, 56), 280, Ratio::new(1, 4)),
    ];
    for (family, idx, mr, f, r) in expect {
        let b = complete_family_scheme(8, 3, family, idx, false).unwrap();
        assert_eq!((b.metrics.memory_ratio, b.metrics.f, b.metrics.load), (mr, f, r), "{family:?} {idx}");
    }
    // strength k-1 gives the alternative j-family closed forms
    let b = complete_family_scheme(8, 3, Family::J, 1, true).unwrap();
    assert_eq!(b.metrics.f as u128, binom(8, 1) * binom(5, 1));
    assert_eq!(b.metrics.load, ratio(binom(7, 2), binom(2, 1)));
    assert!(complete_family_scheme(8, 3, Family::I, 2, false).is_err());
    assert!(complete_family_scheme(8, 5, Family::I, 1, false).is_err());
}

#[test]
fn tampered_bundle_fails_consistency() {
    let mut b = tdesign_scheme(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
    let (r, c) = (0..21).flat_map(|r| (0..7).map(move |c| (r, c))).find(|&(r, c)| b.delivery.get(r, c).is_star()).unwrap();
    b.delivery.set(r, c, Cell::Label(1));
    assert_eq!(b.check_consistency(), Err(Error::ConsistencyViolation { row: r + 1, user: c + 1 }));
}
