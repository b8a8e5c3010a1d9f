//! Integration tests for pseudofunctors, pseudonatural transformations,
//! modifications, pasting, and compositor twisting.

use proptest::prelude::*;
use pseudocone::fincat::{FunctorData, NatTransData};
use pseudocone::fixtures::*;
use pseudocone::twocat::*;
use std::collections::BTreeMap;

fn swap_functor() -> FunctorData {
    let c = chaos2();
    FunctorData {
        src: c.clone(),
        tgt: c,
        obj_map: [("A".to_string(), "B".to_string()), ("B".to_string(), "A".to_string())]
            .into_iter()
            .collect(),
        mor_map: [
            ("A->A".to_string(), "B->B".to_string()),
            ("B->B".to_string(), "A->A".to_string()),
            ("A->B".to_string(), "B->A".to_string()),
            ("B->A".to_string(), "A->B".to_string()),
        ]
        .into_iter()
        .collect(),
    }
}

/// The componentwise-swap pseudonatural endotransformation of the constant
/// pseudofunctor on the walking isomorphism fibre.
fn swap_pseudonat(p: &PseudofunctorData) -> PseudoNatData {
    let sw = swap_functor();
    let obj_component: BTreeMap<String, FunctorData> =
        p.base.objects.iter().map(|x| (x.clone(), sw.clone())).collect();
    let mor_component: BTreeMap<String, NatTransData> = p
        .base
        .morphisms
        .iter()
        .map(|m| (m.id.clone(), NatTransData::identity(&sw)))
        .collect();
    PseudoNatData { src: p.clone(), tgt: p.clone(), obj_component, mor_component }
}

#[test]
fn constant_pseudofunctors_are_valid() {
    for base in [one_cat(), arrow_cat(), chain3_cat(), bz2(), pow2_cat()] {
        for fibre in [disc2(), chaos2(), bzn(3)] {
            let p = cnst(&base, &fibre).unwrap();
            assert!(check_pseudofunctor(&p).is_ok());
        }
    }
}

#[test]
fn swap_pseudofunctor_is_valid() {
    let p = swap_pseudofunctor(&chaos2()).unwrap();
    assert!(check_pseudofunctor(&p).is_ok());
    let q = swap_pseudofunctor(&disc2()).unwrap();
    assert!(check_pseudofunctor(&q).is_ok());
}

#[test]
fn broken_compositor_is_detected() {
    let mut p = swap_pseudofunctor(&chaos2()).unwrap();
    // Corrupt one compositor component: replace an identity by the
    // nonidentity iso.
    let key = p
        .compositor
        .keys()
        .find(|(g, f)| g == "r1" && f == "r1")
        .cloned()
        .expect("compositor entry");
    let nat = p.compositor.get_mut(&key).unwrap();
    let (obj, _) = nat.components.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
    let flipped = if nat.components[&obj].starts_with('A') { "A->B" } else { "B->A" };
    nat.components.insert(obj, flipped.to_string());
    assert!(!check_pseudofunctor(&p).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prop_random_pseudofunctors_are_valid(seed in 0u64..100_000) {
        let p = random_pseudofunctor(seed).unwrap();
        prop_assert!(check_pseudofunctor(&p).is_ok());
    }

    #[test]
    fn prop_twisting_preserves_validity(seed in 0u64..100_000) {
        let p = random_strict_pseudofunctor(&bz2(), &bzn(3), seed).unwrap();
        let t = random_twist(&p, seed ^ 0xbeef).unwrap();
        prop_assert!(check_pseudofunctor(&t).is_ok());
    }
}

#[test]
fn twist_requires_total_omega() {
    let p = cnst(&bz2(), &bzn(3)).unwrap();
    let omega = BTreeMap::new();
    assert!(twist_compositors(&p, &omega).is_err());
}

#[test]
fn swap_pseudonat_checks_and_squares_to_identity() {
    let p = cnst(&bz2(), &chaos2()).unwrap();
    let alpha = swap_pseudonat(&p);
    assert!(check_pseudonat(&alpha).is_ok());
    let sq = compose_pseudonats(&alpha, &alpha).unwrap();
    assert!(check_pseudonat(&sq).is_ok());
    for x in &p.base.objects {
        assert!(sq.oc(x).unwrap().same_tables(&FunctorData::identity(&chaos2())));
    }
}

#[test]
fn identity_modification_checks() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let alpha = swap_pseudonat(&p);
    let eta = ModificationData::identity(&alpha);
    assert!(check_modification(&eta).is_ok());
    let comp = compose_modifications(&eta, &eta).unwrap();
    assert!(check_modification(&comp).is_ok());
}

#[test]
fn pasting_dispatches_by_kind() {
    let p = cnst(&bz2(), &chaos2()).unwrap();
    let alpha = swap_pseudonat(&p);
    let eta = ModificationData::identity(&alpha);
    match paste(PasteKind::Vertical, &Cell::Nat(alpha.clone()), &Cell::Nat(alpha.clone())).unwrap()
    {
        Cell::Nat(n) => assert!(check_pseudonat(&n).is_ok()),
        Cell::Mod(_) => panic!("expected a pseudonatural"),
    }
    match paste(PasteKind::Vertical, &Cell::Mod(eta.clone()), &Cell::Mod(eta.clone())).unwrap() {
        Cell::Mod(m) => assert!(check_modification(&m).is_ok()),
        Cell::Nat(_) => panic!("expected a modification"),
    }
    match paste(PasteKind::Horizontal, &Cell::Mod(eta.clone()), &Cell::Mod(eta.clone())).unwrap() {
        Cell::Mod(m) => assert!(check_modification(&m).is_ok()),
        Cell::Nat(_) => panic!("expected a modification"),
    }
    assert!(paste(PasteKind::Whisker, &Cell::Nat(alpha.clone()), &Cell::Nat(alpha)).is_err());
}

#[test]
fn precomposition_along_a_base_functor() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    // Pick the source endpoint of the arrow.
    let u = FunctorData {
        src: one_cat(),
        tgt: arrow_cat(),
        obj_map: [("*".to_string(), "0".to_string())].into_iter().collect(),
        mor_map: [("*->*".to_string(), "0->0".to_string())].into_iter().collect(),
    };
    let q = precompose_base(&p, &u).unwrap();
    assert!(check_pseudofunctor(&q).is_ok());
    assert_eq!(q.base.objects, vec!["*".to_string()]);
}

#[test]
fn monoidal_subset_lattice_fixture_validates() {
    let p = pow2_swap_pseudofunctor().unwrap();
    assert!(check_pseudofunctor(&p).is_ok());
    let m = pow2_monoidal(&p);
    assert!(pseudocone::pseudocone::validate_monoidal(&p, &m).is_ok());
}
