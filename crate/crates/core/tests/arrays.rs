use madcc_core::array::{
    find_phi, man_pda, phi_candidates, scheme_metrics_from_dpda, verify_dpda, verify_pda, Cell, CodedArray, Condition,
    PdaParams, Regularity, SenderMap, Witness,
};
use madcc_core::design::proper_oa;
use madcc_core::design::trivial_gdd;
use madcc_core::math::binom;
use madcc_core::scheme::{tdesign_scheme, tgdd_scheme, TdesignVariant};
use madcc_core::{fixtures, Error, Ratio};
use proptest::prelude::*;

#[test]
fn four_user_metrics() {
    let (arr, phi) = fixtures::four_user_dpda();
    let rep = verify_dpda(&arr, &phi);
    assert!(rep.is_valid());
    assert_eq!(rep.regularity, Regularity::Regular(2));
    let m = scheme_metrics_from_dpda(&arr, &phi).unwrap();
    assert_eq!((m.memory_ratio, m.load), (Ratio::new(1, 2), Ratio::from_integer(1)));
}

#[test]
fn fano_delivery_metrics() {
    let b = tdesign_scheme(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
    let m = scheme_metrics_from_dpda(&b.delivery, &b.phi).unwrap();
    assert_eq!(m.memory_ratio, Ratio::new(9, 21));
    assert_eq!(m.load, Ratio::from_integer(2));
}

#[test]
fn uneven_columns_are_reported() {
    // the middle column holds no star
    let s = Cell::Star;
    let l = Cell::Label;
    let arr = CodedArray::new(2, 3, vec![s, l(1), s, s, l(2), s]).unwrap();
    let rep = verify_pda(&arr);
    assert!(rep.violations.iter().any(|v| v.condition == Condition::C1 && v.witness == Witness::Columns(vec![1])));
    assert!(matches!(scheme_metrics_from_dpda(&arr, &SenderMap::new(vec![0, 0])), Err(Error::PreconditionFailed(_))));
}

#[test]
fn missing_integer() {
    let arr = CodedArray::new(2, 2, vec![Cell::Star, Cell::Label(2), Cell::Label(2), Cell::Star]).unwrap();
    let rep = verify_pda(&arr);
    assert!(rep.violations.iter().any(|v| v.condition == Condition::C2 && v.witness == Witness::Missing(1)));
}

#[test]
fn man_parameters() {
    let rep = verify_pda(&man_pda(4, 2).unwrap());
    assert_eq!(rep.params, PdaParams { k: 4, f: 6, z: 3, s: 4 });
    assert_eq!(rep.regularity, Regularity::Regular(3));
    let rep = verify_pda(&man_pda(6, 1).unwrap());
    assert_eq!(rep.params, PdaParams { k: 6, f: 6, z: 1, s: 15 });
    assert!(matches!(man_pda(4, 4), Err(Error::InvalidParameters(_))));
    assert!(man_pda(3, 5).is_err());
}

#[test]
fn man_has_no_sender_map() {
    // Label T ∪ {k} occurs in rows (T ∪ {k}) \ {j}; no column lies in all of them.
    for (k0, t0) in [(4, 2), (5, 2), (5, 3), (6, 1)] {
        assert_eq!(find_phi(&man_pda(k0, t0).unwrap()), None, "({k0},{t0})");
    }
}

#[test]
fn find_phi_is_deterministic() {
    let b = tdesign_scheme(&fixtures::steiner_3_8_4(), 3, 1, TdesignVariant::Standard).unwrap();
    let a = find_phi(&b.delivery).unwrap();
    assert_eq!(Some(a.clone()), find_phi(&b.delivery));
    for s in 1..=a.len() as u32 {
        assert_eq!(phi_candidates(&b.delivery, s).first().copied(), a.sender(s));
    }
    assert!(verify_dpda(&b.delivery, &a).is_valid());
}

proptest! {
    #[test]
    fn man_counts(k0 in 2usize..8, t in 1usize..7) {
        prop_assume!(t < k0);
        let arr = man_pda(k0, t).unwrap();
        let rep = verify_pda(&arr);
        prop_assert!(rep.is_valid());
        let (k, t) = (k0 as u64, t as u64);
        prop_assert_eq!(rep.params.z as u128, binom(k - 1, t - 1));
        prop_assert_eq!(rep.params.s as u128, binom(k, t + 1));
        prop_assert_eq!(rep.regularity, Regularity::Regular(t as usize + 1));
        let non_stars = arr.cells().iter().filter(|c| !c.is_star()).count() as u128;
        prop_assert_eq!(non_stars, u128::from(k) * binom(k - 1, t));
        prop_assert_eq!(non_stars, u128::from(t + 1) * binom(k, t + 1));
    }
}

fn mutation_subjects() -> Vec<(CodedArray, SenderMap)> {
    let fano = tdesign_scheme(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
    let gdd = tgdd_scheme(&trivial_gdd(3, 3, 2).unwrap(), &proper_oa(3, 3).unwrap(), 1).unwrap();
    vec![fixtures::four_user_dpda(), (fano.delivery, fano.phi), (gdd.delivery, gdd.phi)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn single_cell_mutation_is_localized(which in 0usize..3, cell in 0usize..10_000, value in 0u32..100) {
        let subjects = mutation_subjects();
        let (mut arr, phi) = subjects[which].clone();
        let (r, c) = ((cell / arr.cols()) % arr.rows(), cell % arr.cols());
        let s = arr.max_label();
        let new = if value % 4 == 0 { Cell::Star } else { Cell::Label(value % s + 1) };
        prop_assume!(new != arr.get(r, c));
        arr.set(r, c, new);
        let rep = verify_pda(&arr);
        prop_assert!(rep.is_valid() || rep.violations.iter().any(|v| v.involves(r, c)), "{:?}", rep.violations);
        // sender violations name the row of the moved label
        let rep = verify_dpda(&arr, &phi);
        let localized = rep.violations.iter().any(|v| {
            v.involves(r, c)
                || (v.condition == Condition::C4
                    && matches!(&v.witness, Witness::Cells(cells) if cells.iter().all(|&(row, _)| row == r)))
        });
        prop_assert!(rep.is_valid() || localized, "{:?}", rep.violations);
    }
}
