//! Functors between pseudocone categories: change-of-fibre from
//! pseudonatural transformations, modifications as natural transformations
//! of the lifted functors, adjunction lifting, the strict-2-functor laws of
//! `PC(−)`, and pseudocone translations along 2-cells of base functors.

use crate::fincat::{
    check_adjunction, compose_functors, vcomp, AdjunctionData, FunctorData, NatTransData,
};
use crate::pseudocone::{
    enc_pcmor, enc_pcobj, validate_family, validate_morphism, PCCategory, PCMorphism, PCObject,
};
use crate::report::{EngineError, Report, Result};
use crate::twocat::{
    check_modification, check_pseudonat, compose_modifications, compose_pseudonats,
    precompose_base, ModificationData, PseudoNatData, PseudofunctorData,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Applies a pseudonatural `α: F ⇒ E` to one pseudocone:
/// `α̲(A) = {α_X(A_X)}` with `τ_f^{α̲A} = α_X(τ_f^A) ∘ (α_f)^{-1}[A_Y]`.
pub fn apply_pseudonat_obj(alpha: &PseudoNatData, a: &PCObject) -> Result<PCObject> {
    let mut family = BTreeMap::new();
    for (x, ax) in &a.family {
        family.insert(x.clone(), alpha.oc(x)?.ap_obj(ax)?.to_string());
    }
    let mut transitions = BTreeMap::new();
    for f in &alpha.src.base.morphisms {
        let fib = alpha.tgt.fib(&f.src)?;
        let ay = &a.family[&f.tgt];
        let inv = alpha.mc(&f.id)?.invert()?;
        let t = fib.comp(
            alpha.oc(&f.src)?.ap_mor(&a.transitions[&f.id])?,
            inv.at(ay)?,
        )?;
        transitions.insert(f.id.clone(), t);
    }
    Ok(PCObject { family, transitions })
}

/// Componentwise application of `α` to a pseudocone morphism.
pub fn apply_pseudonat_mor(
    alpha: &PseudoNatData,
    m: &PCMorphism,
    src: &PCObject,
    tgt: &PCObject,
) -> Result<PCMorphism> {
    let s = apply_pseudonat_obj(alpha, src)?;
    let t = apply_pseudonat_obj(alpha, tgt)?;
    let mut components = BTreeMap::new();
    for (x, rho) in &m.components {
        components.insert(x.clone(), alpha.oc(x)?.ap_mor(rho)?.to_string());
    }
    Ok(PCMorphism {
        src: enc_pcobj(&s.family, &s.transitions),
        tgt: enc_pcobj(&t.family, &t.transitions),
        components,
    })
}

/// The lifted functor `α̲ = PC(α): PC(F) → PC(E)` of a valid pseudonatural.
pub fn change_of_fibre(
    alpha: &PseudoNatData,
    pc_src: &PCCategory,
    pc_tgt: &PCCategory,
) -> Result<FunctorData> {
    let rep = check_pseudonat(alpha);
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!(
            "pseudonatural invalid: {:?}",
            rep.violations[0]
        )));
    }
    let mut obj_map = BTreeMap::new();
    for (aid, a) in &pc_src.objects {
        let out = apply_pseudonat_obj(alpha, a)?;
        let v = validate_family(&alpha.tgt, &out, pc_tgt.kind)?;
        if !v.is_ok() {
            return Err(EngineError::Invalid(format!(
                "image of {aid} fails validation: {:?}",
                v.violations[0]
            )));
        }
        let oid = enc_pcobj(&out.family, &out.transitions);
        if !pc_tgt.objects.contains_key(&oid) {
            return Err(EngineError::UnknownObject(format!(
                "image of {aid} missing from the target enumeration"
            )));
        }
        obj_map.insert(aid.clone(), oid);
    }
    let mut mor_map = BTreeMap::new();
    for (mid, m) in &pc_src.morphisms {
        let src = pc_src.object(&m.src)?;
        let tgt = pc_src.object(&m.tgt)?;
        let out = apply_pseudonat_mor(alpha, m, src, tgt)?;
        let v = validate_morphism(
            &alpha.tgt,
            &apply_pseudonat_obj(alpha, src)?,
            &apply_pseudonat_obj(alpha, tgt)?,
            &out.components,
        )?;
        if !v.is_ok() {
            return Err(EngineError::Invalid(format!(
                "image of {mid} fails validation: {:?}",
                v.violations[0]
            )));
        }
        let oid = enc_pcmor(&out.src, &out.tgt, &out.components);
        if !pc_tgt.morphisms.contains_key(&oid) {
            return Err(EngineError::UnknownObject(format!(
                "image of {mid} missing from the target enumeration"
            )));
        }
        mor_map.insert(mid.clone(), oid);
    }
    let f = FunctorData {
        src: pc_src.cat.clone(),
        tgt: pc_tgt.cat.clone(),
        obj_map,
        mor_map,
    };
    let frep = f.check();
    if !frep.is_ok() {
        return Err(EngineError::Invalid(format!(
            "lifted assignment is not a functor: {:?}",
            frep.violations[0]
        )));
    }
    Ok(f)
}

/// The natural transformation `η̲: α̲ ⇒ β̲` of lifted functors induced by a
/// modification `η: α ⇛ β`, with components `(η̲_A)_X = (η_X)_{A_X}`.
pub fn modification_to_nat(
    eta: &ModificationData,
    pc_src: &PCCategory,
    pc_tgt: &PCCategory,
) -> Result<NatTransData> {
    let rep = check_modification(eta);
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!(
            "modification invalid: {:?}",
            rep.violations[0]
        )));
    }
    let f_alpha = change_of_fibre(&eta.src, pc_src, pc_tgt)?;
    let f_beta = change_of_fibre(&eta.tgt, pc_src, pc_tgt)?;
    let mut components = BTreeMap::new();
    for (aid, a) in &pc_src.objects {
        let mut comps = BTreeMap::new();
        for (x, ax) in &a.family {
            comps.insert(x.clone(), eta.comp(x)?.at(ax)?.to_string());
        }
        let s = apply_pseudonat_obj(&eta.src, a)?;
        let t = apply_pseudonat_obj(&eta.tgt, a)?;
        let v = validate_morphism(&eta.src.tgt, &s, &t, &comps)?;
        if !v.is_ok() {
            return Err(EngineError::Invalid(format!(
                "component at {aid} is not a pseudocone morphism: {:?}",
                v.violations[0]
            )));
        }
        let id = enc_pcmor(
            &enc_pcobj(&s.family, &s.transitions),
            &enc_pcobj(&t.family, &t.transitions),
            &comps,
        );
        if !pc_tgt.morphisms.contains_key(&id) {
            return Err(EngineError::UnknownObject(format!(
                "component at {aid} missing from the target enumeration"
            )));
        }
        components.insert(aid.clone(), id);
    }
    let nat = NatTransData { src: f_alpha, tgt: f_beta, components };
    let nrep = nat.check();
    if !nrep.is_ok() {
        return Err(EngineError::Invalid(format!(
            "lifted family is not natural: {:?}",
            nrep.violations[0]
        )));
    }
    Ok(nat)
}

/// Lifts componentwise adjunctions `α_X ⊣ β_X` to an adjunction
/// `α̲ ⊣ β̲` between the pseudocone categories.  The unit and counit families
/// are first verified to be modifications, then transported by `PC(−)`.
pub fn lift_adjunction(
    alpha: &PseudoNatData,
    beta: &PseudoNatData,
    units: &BTreeMap<String, NatTransData>,
    counits: &BTreeMap<String, NatTransData>,
    pc_f: &PCCategory,
    pc_e: &PCCategory,
) -> Result<AdjunctionData> {
    // Componentwise adjunction check.
    for x in &alpha.src.base.objects {
        let unit = units.get(x).ok_or_else(|| {
            EngineError::NotComponentwiseAdjoint(format!("missing unit at {x}"))
        })?;
        let counit = counits.get(x).ok_or_else(|| {
            EngineError::NotComponentwiseAdjoint(format!("missing counit at {x}"))
        })?;
        let adj = AdjunctionData {
            left: alpha.oc(x)?.clone(),
            right: beta.oc(x)?.clone(),
            unit: unit.clone(),
            counit: counit.clone(),
        };
        let rep = check_adjunction(&adj);
        if !rep.is_ok() {
            return Err(EngineError::NotComponentwiseAdjoint(format!(
                "at {x}: {:?}",
                rep.violations[0]
            )));
        }
    }
    // Package the unit and counit as modifications.
    let ba = compose_pseudonats(alpha, beta)?;
    let ab = compose_pseudonats(beta, alpha)?;
    let unit_mod = ModificationData {
        src: PseudoNatData::identity(&alpha.src),
        tgt: ba,
        components: units.clone(),
    };
    let counit_mod = ModificationData {
        src: ab,
        tgt: PseudoNatData::identity(&beta.src),
        components: counits.clone(),
    };
    for (m, name) in [(&unit_mod, "unit"), (&counit_mod, "counit")] {
        let rep = check_modification(m);
        if !rep.is_ok() {
            return Err(EngineError::NotComponentwiseAdjoint(format!(
                "{name} family is not a modification: {:?}",
                rep.violations[0]
            )));
        }
    }
    // Lift everything with PC(−).
    let l = change_of_fibre(alpha, pc_f, pc_e)?;
    let r = change_of_fibre(beta, pc_e, pc_f)?;
    let mut unit = modification_to_nat(&unit_mod, pc_f, pc_f)?;
    unit.src = FunctorData::identity(&pc_f.cat);
    unit.tgt = compose_functors(&l, &r)?;
    let mut counit = modification_to_nat(&counit_mod, pc_e, pc_e)?;
    counit.src = compose_functors(&r, &l)?;
    counit.tgt = FunctorData::identity(&pc_e.cat);
    let adj = AdjunctionData { left: l, right: r, unit, counit };
    let rep = check_adjunction(&adj);
    if !rep.is_ok() {
        return Err(EngineError::NotComponentwiseAdjoint(format!(
            "lifted adjunction fails: {:?}",
            rep.violations[0]
        )));
    }
    Ok(adj)
}

/// Verifies the strict-2-functor laws of `PC(−)` as literal table equalities:
/// `PC(id) = Id`, `PC(β∘α) = PC(β)∘PC(α)` and, when modifications are given,
/// `PC(ε∘η) = PC(ε)∘PC(η)` componentwise.
pub fn pc_two_functor_laws(
    alpha: &PseudoNatData,
    beta: &PseudoNatData,
    mods: Option<(&ModificationData, &ModificationData)>,
    pc_f: &PCCategory,
    pc_e: &PCCategory,
    pc_h: &PCCategory,
) -> Result<Report> {
    let mut rep = Report::ok();
    // Identity law.
    let idn = change_of_fibre(&PseudoNatData::identity(&alpha.src), pc_f, pc_f)?;
    if !idn.same_tables(&FunctorData::identity(&pc_f.cat)) {
        rep.push("identity", "PC(id) ≠ Id".to_string());
    }
    // Composition law.
    let lhs = change_of_fibre(&compose_pseudonats(alpha, beta)?, pc_f, pc_h)?;
    let fa = change_of_fibre(alpha, pc_f, pc_e)?;
    let fb = change_of_fibre(beta, pc_e, pc_h)?;
    let rhs = compose_functors(&fa, &fb)?;
    if !lhs.same_tables(&rhs) {
        let diff = lhs
            .obj_map
            .iter()
            .find(|(k, v)| rhs.obj_map.get(*k) != Some(v))
            .map(|(k, _)| k.clone())
            .or_else(|| {
                lhs.mor_map
                    .iter()
                    .find(|(k, v)| rhs.mor_map.get(*k) != Some(v))
                    .map(|(k, _)| k.clone())
            })
            .unwrap_or_default();
        rep.push("composition", format!("PC(β∘α) ≠ PC(β)∘PC(α) at {diff}"));
    }
    // Vertical composition of modifications.
    if let Some((eta, eps)) = mods {
        let n_eta = modification_to_nat(eta, pc_f, pc_e)?;
        let n_eps = modification_to_nat(eps, pc_f, pc_e)?;
        let n_comp = modification_to_nat(&compose_modifications(eta, eps)?, pc_f, pc_e)?;
        let composite = vcomp(&n_eta, &n_eps)?;
        if n_comp.components != composite.components {
            let diff = n_comp
                .components
                .iter()
                .find(|(k, v)| composite.components.get(*k) != Some(v))
                .map(|(k, _)| k.clone())
                .unwrap_or_default();
            rep.push("modifications", format!("PC(ε∘η) ≠ PC(ε)∘PC(η) at {diff}"));
        }
    }
    Ok(rep)
}

/// A base-functor 2-cell `α: φ ⇒ ψ∘γ` together with the pseudofunctor on the
/// common codomain, inducing a pseudocone translation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationData {
    /// `γ: C → D`
    pub gamma: FunctorData,
    /// `φ: C → E`
    pub phi: FunctorData,
    /// `ψ: D → E`
    pub psi: FunctorData,
    /// `α: φ ⇒ ψ∘γ`, componentwise `α_X: φX → ψγX` in `E`
    pub alpha: NatTransData,
    /// the pseudofunctor on `E^op`
    pub f: PseudofunctorData,
}

/// Builds the translating pseudonatural `h: F∘(ψ∘γ)^op ⇒ F∘φ^op` with
/// `h_X = F(α_X)` and `h_f = φ^{-1}_{φf, α_Y} ∘ φ_{α_X, (ψγ)f}`, plus the
/// induced functor between the pseudocone categories.
pub fn translate_along(
    t: &TranslationData,
    pc_src: &PCCategory,
    pc_tgt: &PCCategory,
) -> Result<(PseudoNatData, FunctorData)> {
    let psi_gamma = compose_functors(&t.gamma, &t.psi)?;
    let arep = t.alpha.check();
    if !arep.is_ok()
        || !t.alpha.src.same_tables(&t.phi)
        || !t.alpha.tgt.same_tables(&psi_gamma)
    {
        return Err(EngineError::Invalid("α is not a natural transformation φ ⇒ ψ∘γ".into()));
    }
    let src_pf = precompose_base(&t.f, &psi_gamma)?;
    let tgt_pf = precompose_base(&t.f, &t.phi)?;
    let base = t.gamma.src.clone();
    let mut obj_component = BTreeMap::new();
    for x in &base.objects {
        let ax = t.alpha.at(x)?;
        let mut h = t.f.ff(ax)?.clone();
        h.src = src_pf.fib(x)?.clone();
        h.tgt = tgt_pf.fib(x)?.clone();
        obj_component.insert(x.clone(), h);
    }
    let mut mor_component = BTreeMap::new();
    for f in &base.morphisms {
        let ax = t.alpha.at(&f.src)?.to_string();
        let ay = t.alpha.at(&f.tgt)?.to_string();
        let pgf = psi_gamma.ap_mor(&f.id)?.to_string();
        let pf = t.phi.ap_mor(&f.id)?.to_string();
        let fib = tgt_pf.fib(&f.src)?;
        let mut components = BTreeMap::new();
        for c in &src_pf.fib(&f.tgt)?.objects {
            // F(α_X)(F((ψγ)f)(c)) → F((ψγ)f ∘ α_X)(c) = F(α_Y ∘ φf)(c)
            //   → F(φf)(F(α_Y)(c))
            let step1 = t.f.phi_at(&ax, &pgf, c)?;
            let step2 = t.f.phi_inv_at(&pf, &ay, c)?;
            components.insert(c.clone(), fib.comp(&step2, &step1)?);
        }
        let src_fun = compose_functors(src_pf.ff(&f.id)?, &obj_component[&f.src])?;
        let tgt_fun = compose_functors(&obj_component[&f.tgt], tgt_pf.ff(&f.id)?)?;
        mor_component.insert(
            f.id.clone(),
            NatTransData { src: src_fun, tgt: tgt_fun, components },
        );
    }
    let h = PseudoNatData { src: src_pf, tgt: tgt_pf, obj_component, mor_component };
    let hrep = check_pseudonat(&h);
    if !hrep.is_ok() {
        return Err(EngineError::Invalid(format!(
            "translation pseudonatural fails coherence: {:?}",
            hrep.violations[0]
        )));
    }
    let induced = change_of_fibre(&h, pc_src, pc_tgt)?;
    Ok((h, induced))
}
