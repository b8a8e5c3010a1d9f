//! Integration tests for finite categories, functors, natural
//! transformations, exhaustive (co)limits, and adjoint equivalences.

use proptest::prelude::*;
use pseudocone::fincat::*;
use pseudocone::fixtures::*;
use std::collections::BTreeMap;

#[test]
fn fixture_categories_satisfy_the_axioms() {
    for c in [one_cat(), arrow_cat(), chain3_cat(), disc2(), chaos2(), pow2_cat(), bz2(), bzn(3)] {
        assert!(check_category(&c).is_ok(), "axioms fail for {:?}", c.objects);
    }
}

#[test]
fn opposite_is_an_involution() {
    for c in [arrow_cat(), chain3_cat(), chaos2(), bzn(4)] {
        let opop = c.opposite().opposite();
        assert_eq!(c.objects, opop.objects);
        assert_eq!(c.morphisms, opop.morphisms);
        assert_eq!(c.compose, opop.compose);
    }
}

#[test]
fn hom_and_iso_detection() {
    let c = chaos2();
    assert_eq!(c.hom("A", "B").len(), 1);
    assert!(c.is_iso("A->B"));
    assert_eq!(c.inverse_of("A->B").unwrap(), "B->A");
    let d = arrow_cat();
    assert!(!d.is_iso("0->1"));
    assert!(d.inverse_of("0->1").is_none());
}

#[test]
fn chain_composes_in_diagrammatic_order() {
    let c = chain3_cat();
    assert_eq!(c.chain(&["0->1", "1->2"]).unwrap(), "0->2");
    assert!(c.chain(&["1->2", "0->1"]).is_err());
}

#[test]
fn terminal_objects_of_posets() {
    assert_eq!(pow2_cat().terminal_objects(), vec!["11".to_string()]);
    assert_eq!(arrow_cat().terminal_objects(), vec!["1".to_string()]);
    assert!(disc2().terminal_objects().is_empty());
}

#[test]
fn meets_are_limits_in_the_subset_lattice() {
    let p = pow2_cat();
    let shape = disc2();
    let d = FunctorData {
        src: shape.clone(),
        tgt: p.clone(),
        obj_map: [("A".to_string(), "01".to_string()), ("B".to_string(), "10".to_string())]
            .into_iter()
            .collect(),
        mor_map: [
            ("A->A".to_string(), "01->01".to_string()),
            ("B->B".to_string(), "10->10".to_string()),
        ]
        .into_iter()
        .collect(),
    };
    let lim = compute_limit(&p, &d, Orientation::Limit).unwrap();
    assert_eq!(lim.apex, "00");
    let colim = compute_limit(&p, &d, Orientation::Colimit).unwrap();
    assert_eq!(colim.apex, "11");
}

#[test]
fn functor_laws_and_composition() {
    let f = FunctorData::identity(&chaos2());
    assert!(f.check().is_ok());
    let g = compose_functors(&f, &f).unwrap();
    assert!(g.same_tables(&f));
    for e in all_endofunctors(&bz2()) {
        assert!(e.check().is_ok());
    }
    assert_eq!(all_endofunctors(&bz2()).len(), 2);
}

#[test]
fn natural_transformation_vertical_composition() {
    let c = bz2();
    let f = FunctorData::identity(&c);
    // The nontrivial automorphism of the identity functor.
    let s = NatTransData {
        src: f.clone(),
        tgt: f.clone(),
        components: [("*".to_string(), "r1".to_string())].into_iter().collect(),
    };
    assert!(s.check().is_ok());
    assert!(s.is_invertible());
    let ss = vcomp(&s, &s).unwrap();
    assert!(ss.check().is_ok());
    assert_eq!(ss.at("*").unwrap(), "r0");
    assert_eq!(s.invert().unwrap().at("*").unwrap(), "r1");
}

#[test]
fn whiskering_respects_functor_application() {
    let c = bz2();
    let f = FunctorData::identity(&c);
    let s = NatTransData {
        src: f.clone(),
        tgt: f.clone(),
        components: [("*".to_string(), "r1".to_string())].into_iter().collect(),
    };
    let lw = whisker_left(&f, &s).unwrap();
    let rw = whisker_right(&s, &f).unwrap();
    assert_eq!(lw.at("*").unwrap(), "r1");
    assert_eq!(rw.at("*").unwrap(), "r1");
}

#[test]
fn adjoint_equivalence_from_the_swap_autoequivalence() {
    let c = chaos2();
    let swap = FunctorData {
        src: c.clone(),
        tgt: c.clone(),
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
    };
    let adj = adjoint_equivalence_from_functor(&swap).unwrap();
    assert!(check_adjunction(&adj).is_ok());
}

#[test]
fn non_equivalences_are_rejected() {
    // The unique functor arrow → one is not faithful.
    let c = arrow_cat();
    let o = one_cat();
    let f = FunctorData {
        src: c.clone(),
        tgt: o.clone(),
        obj_map: c.objects.iter().map(|x| (x.clone(), "*".to_string())).collect(),
        mor_map: c.morphisms.iter().map(|m| (m.id.clone(), "*->*".to_string())).collect(),
    };
    assert!(f.check().is_ok());
    assert!(adjoint_equivalence_from_functor(&f).is_err());
    // A non essentially surjective embedding.
    let i = FunctorData {
        src: o.clone(),
        tgt: disc2(),
        obj_map: [("*".to_string(), "A".to_string())].into_iter().collect(),
        mor_map: [("*->*".to_string(), "A->A".to_string())].into_iter().collect(),
    };
    assert!(adjoint_equivalence_from_functor(&i).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_composition_associative_in_fixtures(idx in 0usize..4) {
        let cats = [chain3_cat(), chaos2(), pow2_cat(), bzn(4)];
        let c = &cats[idx];
        for f in &c.morphisms {
            for g in &c.morphisms {
                for h in &c.morphisms {
                    if f.tgt == g.src && g.tgt == h.src {
                        let lhs = c.comp(h.id.as_str(), &c.comp(&g.id, &f.id).unwrap()).unwrap();
                        let rhs = c.comp(&c.comp(&h.id, &g.id).unwrap(), f.id.as_str()).unwrap();
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn prop_identity_endofunctor_is_neutral(idx in 0usize..3) {
        let cats = [chaos2(), bz2(), pow2_cat()];
        let c = &cats[idx];
        let id = FunctorData::identity(c);
        for e in all_endofunctors(c) {
            prop_assert!(compose_functors(&id, &e).unwrap().same_tables(&e));
            prop_assert!(compose_functors(&e, &id).unwrap().same_tables(&e));
        }
    }
}

#[test]
fn find_isos_lists_all_isomorphisms() {
    let c = chaos2();
    let isos = c.find_isos();
    assert_eq!(
        isos.get(&("A".to_string(), "B".to_string())),
        Some(&vec!["A->B".to_string()])
    );
    let arrow_isos = arrow_cat().find_isos();
    assert!(arrow_isos[&("0".to_string(), "1".to_string())].is_empty());
}

#[test]
fn malformed_tables_are_rejected() {
    let mut c = bz2();
    c.compose.insert(("r1".to_string(), "r1".to_string()), "missing".to_string());
    assert!(!check_category(&c).is_ok());
    let mut d = arrow_cat();
    d.identity.insert("0".to_string(), "0->1".to_string());
    assert!(!check_category(&d).is_ok());
    let _ = BTreeMap::<String, String>::new();
}
