//! Integration tests for the elements fibration: total category, Cartesian
//! morphisms, section categories, and the comparison with pseudocones.

use proptest::prelude::*;
use pseudocone::fixtures::*;
use pseudocone::grothendieck::*;

#[test]
fn elements_total_category_is_valid() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let e = build_elements(&p).unwrap();
    assert!(pseudocone::fincat::check_category(&e.total).is_ok());
    assert!(e.projection.check().is_ok());
    // Objects are base-fibre pairs: 2 base objects × 2 fibre objects.
    assert_eq!(e.total.objects.len(), 4);
}

#[test]
fn projection_strictly_covers_the_base() {
    let p = random_pseudofunctor(7).unwrap();
    let e = build_elements(&p).unwrap();
    for (oid, (x, _)) in &e.obj_pairs {
        assert_eq!(e.projection.ap_obj(oid).unwrap(), x);
    }
    for (mid, (f0, _)) in &e.mor_pairs {
        assert_eq!(e.projection.ap_mor(mid).unwrap(), f0);
    }
}

#[test]
fn cartesian_morphisms_are_the_iso_component_ones() {
    let p = cnst(&arrow_cat(), &pow2_cat()).unwrap();
    let e = build_elements(&p).unwrap();
    for (mid, (_, f1)) in &e.mor_pairs {
        let fibre_iso = pow2_cat().is_iso(f1);
        if fibre_iso {
            assert!(is_cartesian(&e, mid).unwrap(), "{mid} should be Cartesian");
        }
    }
    // Over the identity base morphism, a strict inclusion is not Cartesian.
    let witness = e
        .mor_pairs
        .iter()
        .find(|(mid, (f0, f1))| {
            e.p.base.is_identity(f0)
                && !pow2_cat().is_iso(f1)
                && !is_cartesian(&e, mid).unwrap()
        });
    assert!(witness.is_some());
}

#[test]
fn section_categories_compare_with_cones() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let rep = compare_pc_csect(&p).unwrap();
    assert!(rep.is_ok(), "{:?}", rep);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prop_sections_agree_with_cones(seed in 0u64..100_000) {
        let p = random_pseudofunctor(seed).unwrap();
        let rep = compare_pc_csect(&p).unwrap();
        prop_assert!(rep.is_ok(), "seed {}: {:?}", seed, rep);
    }
}

#[test]
fn cartesian_sections_are_a_subcategory_of_all_sections() {
    let p = random_pseudofunctor(99).unwrap();
    let e = build_elements(&p).unwrap();
    let cart = sections(&e, SectionKind::Cartesian).unwrap();
    let all = sections(&e, SectionKind::All).unwrap();
    for o in &cart.objects {
        assert!(all.objects.contains(o));
    }
    for m in &cart.morphisms {
        assert!(all.morphisms.iter().any(|n| n.id == m.id));
    }
}
