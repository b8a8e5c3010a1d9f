//! Integration tests for the 2-functor `PC(−)`: change of fibre, lifted
//! modifications and adjunctions, the strict functoriality laws, and
//! translation along base comparisons.

use pseudocone::fincat::{
    check_adjunction, compose_functors, FunctorData, NatTransData,
};
use pseudocone::fixtures::*;
use pseudocone::functors::*;
use pseudocone::pseudocone::{enumerate_pc, ConeKind, PCCategory};
use pseudocone::twocat::{
    check_pseudonat, ModificationData, PseudoNatData, PseudofunctorData,
};
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

fn swap_pseudonat(p: &PseudofunctorData) -> PseudoNatData {
    let sw = swap_functor();
    PseudoNatData {
        src: p.clone(),
        tgt: p.clone(),
        obj_component: p.base.objects.iter().map(|x| (x.clone(), sw.clone())).collect(),
        mor_component: p
            .base
            .morphisms
            .iter()
            .map(|m| (m.id.clone(), NatTransData::identity(&sw)))
            .collect(),
    }
}

fn setup() -> (PseudofunctorData, PCCategory) {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    (p, pc)
}

#[test]
fn change_of_fibre_is_a_functor_between_cone_categories() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    assert!(check_pseudonat(&alpha).is_ok());
    let f = change_of_fibre(&alpha, &pc, &pc).unwrap();
    assert!(f.check().is_ok());
    // The swap is an involution on pseudocones.
    let ff = compose_functors(&f, &f).unwrap();
    assert!(ff.same_tables(&FunctorData::identity(&pc.cat)));
}

#[test]
fn applying_a_pseudonat_to_families_tracks_components() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    for o in pc.objects.values() {
        let oo = apply_pseudonat_obj(&alpha, o).unwrap();
        for x in &p.base.objects {
            assert_eq!(oo.family[x], if o.family[x] == "A" { "B" } else { "A" });
        }
        assert!(pseudocone::pseudocone::validate_family(&p, &oo, ConeKind::Pseudo)
            .unwrap()
            .is_ok());
    }
}

#[test]
fn identity_modification_lifts_to_the_identity_natural_transformation() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    let eta = ModificationData::identity(&alpha);
    let nat = modification_to_nat(&eta, &pc, &pc).unwrap();
    assert!(nat.check().is_ok());
    for oid in pc.objects.keys() {
        assert!(pc.cat.is_identity(nat.at(oid).unwrap()));
    }
}

#[test]
fn swap_adjunction_lifts_to_the_cone_categories() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    let beta = swap_pseudonat(&p);
    let idf = FunctorData::identity(&chaos2());
    let idnat = NatTransData::identity(&idf);
    let units: BTreeMap<String, NatTransData> =
        p.base.objects.iter().map(|x| (x.clone(), idnat.clone())).collect();
    let counits = units.clone();
    let adj = lift_adjunction(&alpha, &beta, &units, &counits, &pc, &pc).unwrap();
    assert!(check_adjunction(&adj).is_ok());
}

#[test]
fn non_adjoint_components_are_rejected() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    let beta = swap_pseudonat(&p);
    // A wrong unit: the nonidentity component at one object.
    let idf = FunctorData::identity(&chaos2());
    let bad = NatTransData {
        src: idf.clone(),
        tgt: idf.clone(),
        components: [("A".to_string(), "A->B".to_string()), ("B".to_string(), "B->B".to_string())]
            .into_iter()
            .collect(),
    };
    let mut units: BTreeMap<String, NatTransData> = p
        .base
        .objects
        .iter()
        .map(|x| (x.clone(), NatTransData::identity(&idf)))
        .collect();
    units.insert("0".to_string(), bad);
    let counits: BTreeMap<String, NatTransData> = p
        .base
        .objects
        .iter()
        .map(|x| (x.clone(), NatTransData::identity(&idf)))
        .collect();
    assert!(lift_adjunction(&alpha, &beta, &units, &counits, &pc, &pc).is_err());
}

#[test]
fn two_functor_laws_hold_strictly() {
    let (p, pc) = setup();
    let alpha = swap_pseudonat(&p);
    let beta = swap_pseudonat(&p);
    let eta = ModificationData::identity(&alpha);
    let rep = pc_two_functor_laws(&alpha, &beta, Some((&eta, &eta)), &pc, &pc, &pc).unwrap();
    assert!(rep.is_ok(), "{:?}", rep);
}

#[test]
fn translation_along_a_base_comparison() {
    // γ = ψ = id on the arrow, φ = id, α = identity: the translation functor
    // is the identity on pseudocones.
    let f = cnst(&arrow_cat(), &chaos2()).unwrap();
    let idc = FunctorData::identity(&arrow_cat());
    let t = TranslationData {
        gamma: idc.clone(),
        phi: idc.clone(),
        psi: idc.clone(),
        alpha: NatTransData::identity(&idc),
        f: f.clone(),
    };
    let pc = enumerate_pc(&f, ConeKind::Pseudo).unwrap();
    let (h, g) = translate_along(&t, &pc, &pc).unwrap();
    assert!(check_pseudonat(&h).is_ok());
    assert!(g.check().is_ok());
    assert!(g.same_tables(&FunctorData::identity(&pc.cat)));
}

#[test]
fn translation_with_a_nonidentity_comparison() {
    // C = one, E = the walking arrow; φ picks the source, ψ∘γ the target,
    // α the arrow between them.
    let f = cnst(&arrow_cat(), &chaos2()).unwrap();
    let pick = |o: &str| FunctorData {
        src: one_cat(),
        tgt: arrow_cat(),
        obj_map: [("*".to_string(), o.to_string())].into_iter().collect(),
        mor_map: [("*->*".to_string(), format!("{o}->{o}"))].into_iter().collect(),
    };
    let t = TranslationData {
        gamma: FunctorData::identity(&one_cat()),
        phi: pick("0"),
        psi: pick("1"),
        alpha: NatTransData {
            src: pick("0"),
            tgt: pick("1"),
            components: [("*".to_string(), "0->1".to_string())].into_iter().collect(),
        },
        f: f.clone(),
    };
    let src_pf = pseudocone::twocat::precompose_base(&f, &pick("1")).unwrap();
    let tgt_pf = pseudocone::twocat::precompose_base(&f, &pick("0")).unwrap();
    let pc_src = enumerate_pc(&src_pf, ConeKind::Pseudo).unwrap();
    let pc_tgt = enumerate_pc(&tgt_pf, ConeKind::Pseudo).unwrap();
    let (h, g) = translate_along(&t, &pc_src, &pc_tgt).unwrap();
    assert!(check_pseudonat(&h).is_ok());
    assert!(g.check().is_ok());
}
