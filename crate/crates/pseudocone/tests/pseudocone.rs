//! Integration tests for pseudocone enumeration, validation, pseudolimit
//! factorization, terminal collapse, fibrewise (co)limits, and monoidal
//! structure.

use proptest::prelude::*;
use pseudocone::fincat::{FunctorData, NatTransData, Orientation};
use pseudocone::fixtures::*;
use pseudocone::pseudocone::*;
use std::collections::BTreeMap;

fn obj_id_with(pc: &PCCategory, x: &str, val: &str) -> String {
    pc.objects
        .iter()
        .find(|(_, o)| o.family[x] == val)
        .map(|(id, _)| id.clone())
        .expect("object with requested family value")
}

#[test]
fn enumeration_respects_cone_kind() {
    let p = cnst(&arrow_cat(), &pow2_cat()).unwrap();
    let pseudo = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let lax = enumerate_pc(&p, ConeKind::Lax).unwrap();
    // Invertible transitions force the two family values equal; lax cones
    // allow any inclusion.
    assert_eq!(pseudo.objects.len(), 4);
    assert_eq!(lax.objects.len(), 9);
    assert!(pseudocone::fincat::check_category(&pseudo.cat).is_ok());
    assert!(pseudocone::fincat::check_category(&lax.cat).is_ok());
}

#[test]
fn every_enumerated_family_validates() {
    let p = random_pseudofunctor(42).unwrap();
    for kind in [ConeKind::Pseudo, ConeKind::Lax] {
        let pc = enumerate_pc(&p, kind).unwrap();
        for o in pc.objects.values() {
            assert!(validate_family(&p, o, kind).unwrap().is_ok());
        }
        for m in pc.morphisms.values() {
            assert!(validate_morphism(
                &p,
                pc.object(&m.src).unwrap(),
                pc.object(&m.tgt).unwrap(),
                &m.components
            )
            .unwrap()
            .is_ok());
        }
    }
}

#[test]
fn identity_transition_perturbations_break_validation() {
    let p = cnst(&arrow_cat(), &bz2()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let idm = p.base.id_of("0").unwrap().to_string();
    for o in pc.objects.values() {
        assert_eq!(o.transitions[&idm], "r0");
        let mut bad = o.clone();
        bad.transitions.insert(idm.clone(), "r1".to_string());
        assert!(!validate_family(&p, &bad, ConeKind::Pseudo).unwrap().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prop_identity_transitions_are_identities(seed in 0u64..100_000) {
        let p = random_pseudofunctor(seed).unwrap();
        let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
        for o in pc.objects.values() {
            for x in &p.base.objects {
                let idm = p.base.id_of(x).unwrap();
                let fib = p.fib(x).unwrap();
                prop_assert!(fib.is_identity(&o.transitions[idm]));
            }
        }
    }
}

#[test]
fn pseudolimit_universal_property_from_the_walking_arrow() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let shape = one_cat();
    let pick = |o: &str| FunctorData {
        src: shape.clone(),
        tgt: chaos2(),
        obj_map: [("*".to_string(), o.to_string())].into_iter().collect(),
        mor_map: [("*->*".to_string(), format!("{o}->{o}"))].into_iter().collect(),
    };
    let legs: BTreeMap<String, FunctorData> =
        [("0".to_string(), pick("A")), ("1".to_string(), pick("B"))].into_iter().collect();
    let mut witnesses = BTreeMap::new();
    for m in &p.base.morphisms {
        let src_leg = compose_legs(&p, &legs, &m.id);
        let comp = if p.base.is_identity(&m.id) {
            format!("{}->{}", legs[&m.src].obj_map["*"], legs[&m.src].obj_map["*"])
        } else {
            // β_f: F(f)(G_1(*)) = B → G_0(*) = A.
            "B->A".to_string()
        };
        witnesses.insert(
            m.id.clone(),
            NatTransData {
                src: src_leg,
                tgt: legs[&m.src].clone(),
                components: [("*".to_string(), comp)].into_iter().collect(),
            },
        );
    }
    let cone = TestCone { shape, legs, witnesses };
    let fact = verify_pseudolimit(&pc, &cone).unwrap();
    assert!(fact.report.is_ok(), "{:?}", fact.report);
    assert!(fact.unique);
}

fn compose_legs(
    p: &pseudocone::twocat::PseudofunctorData,
    legs: &BTreeMap<String, FunctorData>,
    f: &str,
) -> FunctorData {
    let m = p.base.mor(f).unwrap();
    pseudocone::fincat::compose_functors(&legs[&m.tgt], p.ff(f).unwrap()).unwrap()
}

#[test]
fn terminal_collapse_is_an_equivalence() {
    let p = cnst(&arrow_cat(), &chaos2()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let eq = collapse_terminal(&pc).unwrap();
    assert!(eq.report.is_ok(), "{:?}", eq.report);
    assert_eq!(eq.terminal, "1");
    // R∘L = Id exactly.
    let rl = pseudocone::fincat::compose_functors(&eq.l, &eq.r).unwrap();
    assert!(rl.same_tables(&FunctorData::identity(&eq.l.src)));
    assert!(eq.z.check().is_ok());
    assert!(eq.z.is_invertible());
}

#[test]
fn collapse_requires_a_terminal_object() {
    let p = cnst(&bz2(), &chaos2()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    assert!(collapse_terminal(&pc).is_err());
}

#[test]
fn fibrewise_limits_and_colimits_in_the_lattice() {
    let p = cnst(&arrow_cat(), &pow2_cat()).unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let shape = disc2();
    let d = FunctorData {
        src: shape.clone(),
        tgt: pc.cat.clone(),
        obj_map: [
            ("A".to_string(), obj_id_with(&pc, "0", "01")),
            ("B".to_string(), obj_id_with(&pc, "0", "10")),
        ]
        .into_iter()
        .collect(),
        mor_map: [
            ("A->A".to_string(), pc.cat.id_of(&obj_id_with(&pc, "0", "01")).unwrap().to_string()),
            ("B->B".to_string(), pc.cat.id_of(&obj_id_with(&pc, "0", "10")).unwrap().to_string()),
        ]
        .into_iter()
        .collect(),
    };
    let lim = pc_limit(&pc, &d, Orientation::Limit).unwrap();
    assert!(lim.report.is_ok(), "{:?}", lim.report);
    assert_eq!(lim.object.family["0"], "00");
    let colim = pc_limit(&pc, &d, Orientation::Colimit).unwrap();
    assert!(colim.report.is_ok(), "{:?}", colim.report);
    assert_eq!(colim.object.family["0"], "11");
}

#[test]
fn monoidal_unit_tensor_and_braiding() {
    let p = pow2_swap_pseudofunctor().unwrap();
    let pc = enumerate_pc(&p, ConeKind::Pseudo).unwrap();
    let m = pow2_monoidal(&p);
    assert!(validate_monoidal(&p, &m).is_ok());
    let unit = pc_unit(&pc, &m).unwrap();
    assert_eq!(unit.family["*"], "11");
    let uu = pc_tensor(&pc, &m, &unit, &unit).unwrap();
    assert_eq!(uu, unit);
    // Tensor with the bottom family is absorbing.
    let bottom_id = obj_id_with(&pc, "*", "00");
    let bottom = pc.object(&bottom_id).unwrap().clone();
    let ub = pc_tensor(&pc, &m, &unit, &bottom).unwrap();
    assert_eq!(ub.family["*"], "00");
    let br = pc_braiding(&pc, &m, &unit, &bottom).unwrap();
    assert!(validate_morphism(
        &p,
        &ub,
        &pc_tensor(&pc, &m, &bottom, &unit).unwrap(),
        &br.components
    )
    .unwrap()
    .is_ok());
}

#[test]
fn enumeration_caps_are_enforced() {
    let p = cnst(&pow2_cat(), &pow2_cat()).unwrap();
    let caps = Caps { base_objects: 2, base_morphisms: 16, fibre_objects: 4, fibre_morphisms: 16 };
    assert!(enumerate_pc_with_caps(&p, ConeKind::Pseudo, &caps).is_err());
}
