//! The pseudocone category `PC(F)` and lax cone category `LC(F)` by
//! exhaustive enumeration, with the pseudolimit universal property,
//! terminal-object collapse, lifted (co)limits, and monoidal structure.
//!
//! A pseudocone `(A, T_A)` picks one fibre object `A_X` per base object plus
//! transition morphisms `τ_f: F(f)(A_Y) → A_X` (isomorphisms for `PC`,
//! arbitrary for `LC`) satisfying the cocycle condition
//! `τ_{g∘f} ∘ φ_{f,g} = τ_f ∘ F(f)(τ_g)`; under normalization this forces
//! `τ_id = id`.  Morphisms are families `ρ_X: A_X → B_X` with
//! `τ_f^B ∘ F(f)(ρ_Y) = ρ_X ∘ τ_f^A`.

use crate::fincat::{
    compute_limit, check_category, ConeResult, FinCat, FunctorData, Mor, NatTransData,
    Orientation,
};
use crate::report::{EngineError, Report, Result};
use crate::twocat::PseudofunctorData;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One object of `PC(F)`/`LC(F)`: fibre objects plus transitions, by id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PCObject {
    /// base object `X` → fibre object `A_X`
    pub family: BTreeMap<String, String>,
    /// base morphism `f: X → Y` → fibre morphism `τ_f: F(f)(A_Y) → A_X`
    pub transitions: BTreeMap<String, String>,
}

/// One morphism of `PC(F)`: a componentwise family with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PCMorphism {
    pub src: String,
    pub tgt: String,
    /// base object `X` → fibre morphism `ρ_X: A_X → B_X`
    pub components: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeKind {
    Pseudo,
    Lax,
}

/// Canonical encoding of a pseudocone object; shared with the sections side
/// of the Grothendieck comparison so equality there is literal.
pub fn enc_pcobj(family: &BTreeMap<String, String>, transitions: &BTreeMap<String, String>) -> String {
    let fam: Vec<String> = family.iter().map(|(x, a)| format!("{x}:{a}")).collect();
    let tr: Vec<String> = transitions.iter().map(|(f, t)| format!("{f}:{t}")).collect();
    format!("{{{}|{}}}", fam.join(","), tr.join(","))
}

/// Canonical encoding of a pseudocone morphism.
pub fn enc_pcmor(src: &str, tgt: &str, components: &BTreeMap<String, String>) -> String {
    let cs: Vec<String> = components.iter().map(|(x, r)| format!("{x}:{r}")).collect();
    format!("[{src}=>{tgt}|{}]", cs.join(","))
}

/// Enumeration caps keeping worst-case candidate counts tractable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub base_objects: usize,
    pub base_morphisms: usize,
    pub fibre_objects: usize,
    pub fibre_morphisms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { base_objects: 5, base_morphisms: 16, fibre_objects: 4, fibre_morphisms: 16 }
    }
}

/// The enumerated pseudocone category with back-references.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PCCategory {
    pub cat: FinCat,
    pub objects: BTreeMap<String, PCObject>,
    pub morphisms: BTreeMap<String, PCMorphism>,
    pub kind: ConeKind,
    pub p: PseudofunctorData,
}

impl PCCategory {
    pub fn object(&self, id: &str) -> Result<&PCObject> {
        self.objects.get(id).ok_or_else(|| EngineError::UnknownObject(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<&PCMorphism> {
        self.morphisms.get(id).ok_or_else(|| EngineError::UnknownObject(id.to_string()))
    }

    /// Projection functor `p_X: PC(F) → F(X)`.
    pub fn projection(&self, x: &str) -> Result<FunctorData> {
        let fib = self.p.fib(x)?.clone();
        let obj_map = self
            .objects
            .iter()
            .map(|(id, o)| (id.clone(), o.family[x].clone()))
            .collect();
        let mor_map = self
            .morphisms
            .iter()
            .map(|(id, m)| (id.clone(), m.components[x].clone()))
            .collect();
        Ok(FunctorData { src: self.cat.clone(), tgt: fib, obj_map, mor_map })
    }
}

/// Validates a candidate pseudocone family against the cocycle condition.
pub fn validate_family(p: &PseudofunctorData, obj: &PCObject, kind: ConeKind) -> Result<Report> {
    let mut rep = Report::ok();
    for x in &p.base.objects {
        let a = obj
            .family
            .get(x)
            .ok_or_else(|| EngineError::UnknownObject(format!("no family component at {x}")))?;
        if !p.fib(x)?.has_object(a) {
            return Err(EngineError::UnknownObject(format!("family component {a} at {x}")));
        }
    }
    for f in &p.base.morphisms {
        let t = obj
            .transitions
            .get(&f.id)
            .ok_or_else(|| EngineError::UnknownObject(format!("no transition at {}", f.id)))?;
        let fib = p.fib(&f.src)?;
        let tm = fib
            .mor(t)
            .map_err(|_| EngineError::UnknownObject(format!("transition {t} at {}", f.id)))?;
        let expected_src = p.ff(&f.id)?.ap_obj(&obj.family[&f.tgt])?;
        if tm.src != expected_src || tm.tgt != obj.family[&f.src] {
            rep.push("transition-endpoints", format!("τ_{} has wrong endpoints", f.id));
            continue;
        }
        if matches!(kind, ConeKind::Pseudo) && !fib.is_iso(t) {
            rep.push("transition-iso", format!("τ_{} is not an isomorphism", f.id));
        }
        if p.base.is_identity(&f.id) && t != fib.id_of(&obj.family[&f.src])? {
            rep.push("tau-id", format!("τ_id at {} is not the identity", f.src));
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for f in &p.base.morphisms {
        for g in &p.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let gf = p.base.comp(&g.id, &f.id)?;
            let fib = p.fib(&f.src)?;
            let az = &obj.family[&g.tgt];
            let lhs = fib.comp(&obj.transitions[&gf], &p.phi_at(&f.id, &g.id, az)?)?;
            let rhs = fib.comp(
                &obj.transitions[&f.id],
                p.ff(&f.id)?.ap_mor(&obj.transitions[&g.id])?,
            )?;
            if lhs != rhs {
                rep.push("cocycle", format!("pair (f={}, g={})", f.id, g.id));
            }
        }
    }
    Ok(rep)
}

/// Validates a componentwise family as a pseudocone morphism.
pub fn validate_morphism(
    p: &PseudofunctorData,
    src: &PCObject,
    tgt: &PCObject,
    components: &BTreeMap<String, String>,
) -> Result<Report> {
    let mut rep = Report::ok();
    for x in &p.base.objects {
        let r = components
            .get(x)
            .ok_or_else(|| EngineError::UnknownObject(format!("no component at {x}")))?;
        let fib = p.fib(x)?;
        let rm = fib
            .mor(r)
            .map_err(|_| EngineError::UnknownObject(format!("component {r} at {x}")))?;
        if rm.src != src.family[x] || rm.tgt != tgt.family[x] {
            rep.push("component-endpoints", format!("ρ_{x} has wrong endpoints"));
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for f in &p.base.morphisms {
        let fib = p.fib(&f.src)?;
        let lhs = fib.comp(
            &tgt.transitions[&f.id],
            p.ff(&f.id)?.ap_mor(&components[&f.tgt])?,
        )?;
        let rhs = fib.comp(&components[&f.src], &src.transitions[&f.id])?;
        if lhs != rhs {
            rep.push("commutation", format!("at f={}", f.id));
        }
    }
    Ok(rep)
}

fn check_caps(p: &PseudofunctorData, caps: &Caps) -> Result<()> {
    if p.base.objects.len() > caps.base_objects || p.base.morphisms.len() > caps.base_morphisms {
        return Err(EngineError::EnumerationCap(format!(
            "base has {} objects / {} morphisms (caps {}/{})",
            p.base.objects.len(),
            p.base.morphisms.len(),
            caps.base_objects,
            caps.base_morphisms
        )));
    }
    for (x, f) in &p.fibre {
        if f.objects.len() > caps.fibre_objects || f.morphisms.len() > caps.fibre_morphisms {
            return Err(EngineError::EnumerationCap(format!(
                "fibre over {x} has {} objects / {} morphisms (caps {}/{})",
                f.objects.len(),
                f.morphisms.len(),
                caps.fibre_objects,
                caps.fibre_morphisms
            )));
        }
    }
    Ok(())
}

fn enumerate_transitions(
    p: &PseudofunctorData,
    family: &BTreeMap<String, String>,
    kind: ConeKind,
) -> Result<Vec<BTreeMap<String, String>>> {
    // Identity transitions are forced; search the rest with cocycle
    // propagation: whenever τ_f and τ_g are known, τ_{g∘f} is determined.
    let mut assigned: BTreeMap<String, String> = BTreeMap::new();
    for (x, i) in &p.base.identity {
        assigned.insert(i.clone(), p.fib(x)?.id_of(&family[x])?.to_string());
    }
    let free: Vec<&Mor> =
        p.base.morphisms.iter().filter(|m| !p.base.is_identity(&m.id)).collect();
    let mut out = Vec::new();
    search_transitions(p, family, kind, &free, assigned, &mut out)?;
    out.sort();
    Ok(out)
}

fn propagate(
    p: &PseudofunctorData,
    family: &BTreeMap<String, String>,
    assigned: &mut BTreeMap<String, String>,
) -> Result<bool> {
    loop {
        let mut changed = false;
        for f in &p.base.morphisms {
            for g in &p.base.morphisms {
                if f.tgt != g.src {
                    continue;
                }
                let (tf, tg) = match (assigned.get(&f.id), assigned.get(&g.id)) {
                    (Some(tf), Some(tg)) => (tf.clone(), tg.clone()),
                    _ => continue,
                };
                let gf = p.base.comp(&g.id, &f.id)?;
                let fib = p.fib(&f.src)?;
                let az = &family[&g.tgt];
                let needed = fib.comp(
                    &fib.comp(&tf, p.ff(&f.id)?.ap_mor(&tg)?)?,
                    &p.phi_inv_at(&f.id, &g.id, az)?,
                )?;
                match assigned.get(&gf) {
                    Some(existing) if *existing != needed => return Ok(false),
                    Some(_) => {}
                    None => {
                        assigned.insert(gf, needed);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(true);
        }
    }
}

fn search_transitions(
    p: &PseudofunctorData,
    family: &BTreeMap<String, String>,
    kind: ConeKind,
    free: &[&Mor],
    assigned: BTreeMap<String, String>,
    out: &mut Vec<BTreeMap<String, String>>,
) -> Result<()> {
    let next = free.iter().find(|m| !assigned.contains_key(&m.id));
    let f = match next {
        Some(f) => *f,
        None => {
            // Fully assigned; keep if globally valid.
            let cand = PCObject { family: family.clone(), transitions: assigned.clone() };
            if validate_family(p, &cand, kind)?.is_ok() {
                out.push(assigned);
            }
            return Ok(());
        }
    };
    let fib = p.fib(&f.src)?;
    let from = p.ff(&f.id)?.ap_obj(&family[&f.tgt])?.to_string();
    for cand in fib.hom(&from, &family[&f.src]) {
        if matches!(kind, ConeKind::Pseudo) && !fib.is_iso(&cand) {
            continue;
        }
        let mut next_assigned = assigned.clone();
        next_assigned.insert(f.id.clone(), cand);
        if propagate(p, family, &mut next_assigned)? {
            search_transitions(p, family, kind, free, next_assigned, out)?;
        }
    }
    Ok(())
}

/// Exhaustively enumerates `PC(F)` (kind `Pseudo`) or `LC(F)` (kind `Lax`).
pub fn enumerate_pc(p: &PseudofunctorData, kind: ConeKind) -> Result<PCCategory> {
    enumerate_pc_with_caps(p, kind, &Caps::default())
}

/// Enumeration with explicit caps (internal callers may raise them).
pub fn enumerate_pc_with_caps(
    p: &PseudofunctorData,
    kind: ConeKind,
    caps: &Caps,
) -> Result<PCCategory> {
    check_caps(p, caps)?;
    // Families: product of fibre objects over base objects.
    let mut families: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for x in &p.base.objects {
        let mut next = Vec::new();
        for fam in &families {
            for a in &p.fib(x)?.objects {
                let mut f = fam.clone();
                f.insert(x.clone(), a.clone());
                next.push(f);
            }
        }
        families = next;
    }
    let mut objects: BTreeMap<String, PCObject> = BTreeMap::new();
    for fam in families {
        for tr in enumerate_transitions(p, &fam, kind)? {
            let obj = PCObject { family: fam.clone(), transitions: tr };
            objects.insert(enc_pcobj(&obj.family, &obj.transitions), obj);
        }
    }
    // Morphisms: componentwise families, filtered by the commutation squares.
    let mut morphisms: BTreeMap<String, PCMorphism> = BTreeMap::new();
    for (aid, a) in &objects {
        for (bid, b) in &objects {
            let mut comps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
            for x in &p.base.objects {
                let homs = p.fib(x)?.hom(&a.family[x], &b.family[x]);
                let mut next = Vec::new();
                for c in &comps {
                    for h in &homs {
                        let mut cc = c.clone();
                        cc.insert(x.clone(), h.clone());
                        next.push(cc);
                    }
                }
                comps = next;
            }
            for c in comps {
                if validate_morphism(p, a, b, &c)?.is_ok() {
                    let id = enc_pcmor(aid, bid, &c);
                    morphisms.insert(
                        id,
                        PCMorphism { src: aid.clone(), tgt: bid.clone(), components: c },
                    );
                }
            }
        }
    }
    // Assemble the finite category.
    let mors: Vec<Mor> = morphisms
        .iter()
        .map(|(id, m)| Mor { id: id.clone(), src: m.src.clone(), tgt: m.tgt.clone() })
        .collect();
    let identity: BTreeMap<String, String> = objects
        .iter()
        .map(|(id, o)| {
            let comps: BTreeMap<String, String> = o
                .family
                .iter()
                .map(|(x, a)| (x.clone(), p.fib(x).unwrap().id_of(a).unwrap().to_string()))
                .collect();
            (id.clone(), enc_pcmor(id, id, &comps))
        })
        .collect();
    let mut compose = BTreeMap::new();
    for (fid, fm) in &morphisms {
        for (gid, gm) in &morphisms {
            if fm.tgt != gm.src {
                continue;
            }
            let mut comps = BTreeMap::new();
            for x in &p.base.objects {
                comps.insert(
                    x.clone(),
                    p.fib(x)?.comp(&gm.components[x], &fm.components[x])?,
                );
            }
            let rid = enc_pcmor(&fm.src, &gm.tgt, &comps);
            if !morphisms.contains_key(&rid) {
                return Err(EngineError::Invalid(format!(
                    "composite of pseudocone morphisms left the enumeration: {rid}"
                )));
            }
            compose.insert((gid.clone(), fid.clone()), rid);
        }
    }
    let cat = FinCat::new(objects.keys().cloned().collect(), mors, identity, compose);
    let rep = check_category(&cat);
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!("enumerated category invalid: {:?}", rep)));
    }
    Ok(PCCategory { cat, objects, morphisms, kind, p: p.clone() })
}

/// A test pseudocone with a small apex category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCone {
    pub shape: FinCat,
    /// base object `X` → functor `G_X: D → F(X)`
    pub legs: BTreeMap<String, FunctorData>,
    /// base morphism `f: X → Y` → invertible `β_f: F(f)∘G_Y ⇒ G_X`
    pub witnesses: BTreeMap<String, NatTransData>,
}

/// Result of factoring a test pseudocone through `PC(F)`.
#[derive(Clone, Debug)]
pub struct FactorizationReport {
    pub functor: FunctorData,
    pub unique: bool,
    pub report: Report,
}

/// Verifies the pseudolimit universal property for one test cone: builds the
/// comparison functor `G` with `GZ = {G_X(Z)}`, `τ_f^{GZ} = β_f^Z`, checks
/// `p_X ∘ G = G_X` on the nose, and confirms uniqueness by exhaustive search.
pub fn verify_pseudolimit(pc: &PCCategory, cone: &TestCone) -> Result<FactorizationReport> {
    let p = &pc.p;
    // Cone validity: functor legs, invertible witnesses, cocycle.
    for x in &p.base.objects {
        let g = cone
            .legs
            .get(x)
            .ok_or_else(|| EngineError::NotACone(format!("missing leg G_{x}")))?;
        if !g.check().is_ok() {
            return Err(EngineError::NotACone(format!("leg G_{x} is not a functor")));
        }
    }
    for f in &p.base.morphisms {
        let b = cone
            .witnesses
            .get(&f.id)
            .ok_or_else(|| EngineError::NotACone(format!("missing witness β_{}", f.id)))?;
        if !b.check().is_ok() || !b.is_invertible() {
            return Err(EngineError::NotACone(format!("witness β_{} invalid", f.id)));
        }
    }
    for z in &cone.shape.objects {
        let family: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), cone.legs[x].ap_obj(z).unwrap().to_string()))
            .collect();
        let transitions: BTreeMap<String, String> = p
            .base
            .morphisms
            .iter()
            .map(|f| (f.id.clone(), cone.witnesses[&f.id].at(z).unwrap().to_string()))
            .collect();
        let obj = PCObject { family, transitions };
        if !validate_family(p, &obj, ConeKind::Pseudo)?.is_ok() {
            return Err(EngineError::NotACone(format!("witnesses violate the cocycle at {z}")));
        }
    }
    // The comparison functor.
    let mut obj_map = BTreeMap::new();
    for z in &cone.shape.objects {
        let family: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), cone.legs[x].ap_obj(z).unwrap().to_string()))
            .collect();
        let transitions: BTreeMap<String, String> = p
            .base
            .morphisms
            .iter()
            .map(|f| (f.id.clone(), cone.witnesses[&f.id].at(z).unwrap().to_string()))
            .collect();
        let id = enc_pcobj(&family, &transitions);
        if !pc.objects.contains_key(&id) {
            return Err(EngineError::Invalid(format!("cone object at {z} not in enumeration")));
        }
        obj_map.insert(z.clone(), id);
    }
    let mut mor_map = BTreeMap::new();
    for u in &cone.shape.morphisms {
        let comps: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), cone.legs[x].ap_mor(&u.id).unwrap().to_string()))
            .collect();
        let id = enc_pcmor(&obj_map[&u.src], &obj_map[&u.tgt], &comps);
        if !pc.morphisms.contains_key(&id) {
            return Err(EngineError::Invalid(format!("cone morphism at {} not in enumeration", u.id)));
        }
        mor_map.insert(u.id.clone(), id);
    }
    let functor =
        FunctorData { src: cone.shape.clone(), tgt: pc.cat.clone(), obj_map, mor_map };
    let mut report = functor.check().scoped("comparison-functor");
    // p_X ∘ G = G_X on the nose.
    for x in &p.base.objects {
        for z in &cone.shape.objects {
            let gz = pc.object(&functor.obj_map[z])?;
            if gz.family[x] != cone.legs[x].ap_obj(z)? {
                report.push("projection", format!("p_{x}(G {z}) ≠ G_{x}({z})"));
            }
        }
        for u in &cone.shape.morphisms {
            let gu = pc.morphism(&functor.mor_map[&u.id])?;
            if gu.components[x] != cone.legs[x].ap_mor(&u.id)? {
                report.push("projection", format!("p_{x}(G {}) ≠ G_{x}({})", u.id, u.id));
            }
        }
    }
    // Exhaustive uniqueness: any functor D → PC(F) whose objects project to
    // the legs and carry the witness transitions, and whose morphisms project
    // to the legs, must equal G.
    let mut count = 0usize;
    let mut candidates: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for z in &cone.shape.objects {
        let mut next = Vec::new();
        for cand in &candidates {
            for (oid, o) in &pc.objects {
                let fam_ok = p.base.objects.iter().all(|x| o.family[x] == cone.legs[x].ap_obj(z).unwrap());
                let tr_ok = p
                    .base
                    .morphisms
                    .iter()
                    .all(|f| o.transitions[&f.id] == cone.witnesses[&f.id].at(z).unwrap());
                if fam_ok && tr_ok {
                    let mut c = cand.clone();
                    c.insert(z.clone(), oid.clone());
                    next.push(c);
                }
            }
        }
        candidates = next;
    }
    for omap in candidates {
        let mut mmaps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for u in &cone.shape.morphisms {
            let mut next = Vec::new();
            for cand in &mmaps {
                for (mid, m) in &pc.morphisms {
                    if m.src != omap[&u.src] || m.tgt != omap[&u.tgt] {
                        continue;
                    }
                    let ok = p
                        .base
                        .objects
                        .iter()
                        .all(|x| m.components[x] == cone.legs[x].ap_mor(&u.id).unwrap());
                    if ok {
                        let mut c = cand.clone();
                        c.insert(u.id.clone(), mid.clone());
                        next.push(c);
                    }
                }
            }
            mmaps = next;
        }
        for mmap in mmaps {
            let h = FunctorData {
                src: cone.shape.clone(),
                tgt: pc.cat.clone(),
                obj_map: omap.clone(),
                mor_map: mmap,
            };
            if h.check().is_ok() {
                count += 1;
                if !h.same_tables(&functor) {
                    report.push("uniqueness", "distinct factoring functor found".to_string());
                }
            }
        }
    }
    if count != 1 {
        report.push("uniqueness", format!("{count} factoring functors found"));
    }
    Ok(FactorizationReport { unique: count == 1 && report.is_ok(), functor, report })
}

/// The equivalence `F(⊤) ≃ PC(F)` induced by a terminal base object.
#[derive(Clone, Debug)]
pub struct EquivalencePair {
    pub terminal: String,
    pub l: FunctorData,
    pub r: FunctorData,
    /// natural isomorphism `Z: L∘R ⇒ Id` with components `τ_{!_X}`
    pub z: NatTransData,
    pub report: Report,
}

/// Builds `L: F(⊤) → PC(F)`, `R: PC(F) → F(⊤)` with `R∘L = Id` exactly and
/// the natural isomorphism `Z: L∘R ≅ Id`.
pub fn collapse_terminal(pc: &PCCategory) -> Result<EquivalencePair> {
    let p = &pc.p;
    let terms = p.base.terminal_objects();
    let top = terms.first().ok_or(EngineError::NoTerminalObject)?.clone();
    let bang: BTreeMap<String, String> =
        p.base.objects.iter().map(|x| (x.clone(), p.base.hom(x, &top)[0].clone())).collect();
    let fib_top = p.fib(&top)?.clone();
    // L(A) = {F(!_X)(A)} with τ_f = φ_{f, !_Y} at A.
    let mut l_obj = BTreeMap::new();
    let mut report = Report::ok();
    for a in &fib_top.objects {
        let family: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), p.ff(&bang[x]).unwrap().ap_obj(a).unwrap().to_string()))
            .collect();
        let mut transitions = BTreeMap::new();
        for f in &p.base.morphisms {
            transitions.insert(f.id.clone(), p.phi_at(&f.id, &bang[&f.tgt], a)?);
        }
        let id = enc_pcobj(&family, &transitions);
        if !pc.objects.contains_key(&id) {
            return Err(EngineError::Invalid(format!("L({a}) missing from the enumeration")));
        }
        l_obj.insert(a.clone(), id);
    }
    let mut l_mor = BTreeMap::new();
    for m in &fib_top.morphisms {
        let comps: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), p.ff(&bang[x]).unwrap().ap_mor(&m.id).unwrap().to_string()))
            .collect();
        let id = enc_pcmor(&l_obj[&m.src], &l_obj[&m.tgt], &comps);
        if !pc.morphisms.contains_key(&id) {
            return Err(EngineError::Invalid(format!("L({}) missing from the enumeration", m.id)));
        }
        l_mor.insert(m.id.clone(), id);
    }
    let l = FunctorData { src: fib_top.clone(), tgt: pc.cat.clone(), obj_map: l_obj, mor_map: l_mor };
    report.merge(l.check().scoped("L"));
    // R = evaluation at the terminal object.
    let r = pc.projection(&top)?;
    report.merge(r.check().scoped("R"));
    // R ∘ L = Id exactly.
    let rl = crate::fincat::compose_functors(&l, &r)?;
    if !rl.same_tables(&FunctorData::identity(&fib_top)) {
        report.push("retraction", "R ∘ L ≠ Id".to_string());
    }
    // Z: L∘R ⇒ Id with components ζ_A = {τ^A_{!_X}}.
    let lr = crate::fincat::compose_functors(&r, &l)?;
    let mut z_comps = BTreeMap::new();
    for (aid, a) in &pc.objects {
        let comps: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), a.transitions[&bang[x]].clone()))
            .collect();
        let lra = lr.ap_obj(aid)?;
        let id = enc_pcmor(lra, aid, &comps);
        if !pc.morphisms.contains_key(&id) {
            report.push("counit", format!("ζ at {aid} is not a pseudocone morphism"));
            continue;
        }
        z_comps.insert(aid.clone(), id);
    }
    let z = NatTransData {
        src: lr,
        tgt: FunctorData::identity(&pc.cat),
        components: z_comps,
    };
    report.merge(z.check().scoped("Z"));
    if !z.is_invertible() {
        report.push("Z-invertible", "a component of Z is not an isomorphism".to_string());
    }
    Ok(EquivalencePair { terminal: top, l, r, z, report })
}

/// A (co)limit computed componentwise in the fibres, with its cone in `PC(F)`.
#[derive(Clone, Debug)]
pub struct PcLimitResult {
    pub object: PCObject,
    pub object_id: String,
    /// shape object → componentwise legs of the (co)cone in `PC(F)`
    pub legs: BTreeMap<String, BTreeMap<String, String>>,
    /// per-fibre cone results
    pub fibre_cones: BTreeMap<String, ConeResult>,
    pub report: Report,
}

/// Computes the (co)limit of a diagram `d: shape → PC(F)` by taking fibrewise
/// (co)limits and the computed mediating isomorphisms as transitions, then
/// verifies the result against the brute-force universal cone inside the
/// enumerated `PC(F)` itself.
pub fn pc_limit(
    pc: &PCCategory,
    d: &FunctorData,
    orientation: Orientation,
) -> Result<PcLimitResult> {
    let p = &pc.p;
    let shape = &d.src;
    // Fibrewise diagrams and (co)limits.
    let mut fibre_cones: BTreeMap<String, ConeResult> = BTreeMap::new();
    for x in &p.base.objects {
        let fib = p.fib(x)?;
        let obj_map: BTreeMap<String, String> = shape
            .objects
            .iter()
            .map(|i| (i.clone(), pc.object(d.ap_obj(i).unwrap()).unwrap().family[x].clone()))
            .collect();
        let mor_map: BTreeMap<String, String> = shape
            .morphisms
            .iter()
            .map(|u| {
                (u.id.clone(), pc.morphism(d.ap_mor(&u.id).unwrap()).unwrap().components[x].clone())
            })
            .collect();
        let dx = FunctorData { src: shape.clone(), tgt: fib.clone(), obj_map, mor_map };
        let cone = compute_limit(fib, &dx, orientation)
            .map_err(|e| EngineError::FibreLimitMissing(format!("fibre {x}: {e}")))?;
        fibre_cones.insert(x.clone(), cone);
    }
    // Transitions via the mediating isomorphism.
    let family: BTreeMap<String, String> =
        fibre_cones.iter().map(|(x, c)| (x.clone(), c.apex.clone())).collect();
    let mut transitions = BTreeMap::new();
    for f in &p.base.morphisms {
        let fib = p.fib(&f.src)?;
        let ff = p.ff(&f.id)?;
        let cone_y = &fibre_cones[&f.tgt];
        let cone_x = &fibre_cones[&f.src];
        let apex = ff.ap_obj(&cone_y.apex)?.to_string();
        let mut legs = BTreeMap::new();
        for i in &shape.objects {
            let tau_di = pc.object(d.ap_obj(i)?)?.transitions[&f.id].clone();
            match orientation {
                Orientation::Limit => {
                    // τ_f^{d(i)} ∘ F(f)(λ_Y^i): a cone over d_X with apex F(f)(L_Y)
                    legs.insert(i.clone(), fib.comp(&tau_di, ff.ap_mor(&cone_y.legs[i])?)?);
                }
                Orientation::Colimit => {
                    // F(f)(ι_Y^i) ∘ (τ_f^{d(i)})^{-1}: a cocone under d_X with apex F(f)(C_Y)
                    let tau_inv = fib.inverse_of(&tau_di).ok_or_else(|| {
                        EngineError::NotPreserved(format!("τ_{} not invertible", f.id))
                    })?;
                    legs.insert(i.clone(), fib.comp(ff.ap_mor(&cone_y.legs[i])?, &tau_inv)?);
                }
            }
        }
        let key = {
            let parts: Vec<String> = legs.iter().map(|(i, l)| format!("{i}:{l}")).collect();
            format!("{apex};{}", parts.join(","))
        };
        let mediator = cone_x.mediators.get(&key).ok_or_else(|| {
            EngineError::NotPreserved(format!("transported cone at {} not mediated", f.id))
        })?;
        let t = match orientation {
            Orientation::Limit => {
                // mediator: F(f)(L_Y) → L_X
                if !fib.is_iso(mediator) {
                    return Err(EngineError::NotPreserved(format!("θ_{} not invertible", f.id)));
                }
                mediator.clone()
            }
            Orientation::Colimit => {
                // mediator: C_X → F(f)(C_Y); invert for the transition
                fib.inverse_of(mediator).ok_or_else(|| {
                    EngineError::NotPreserved(format!("θ_{} not invertible", f.id))
                })?
            }
        };
        transitions.insert(f.id.clone(), t);
    }
    let object = PCObject { family, transitions };
    let mut report = Report::ok();
    let vf = validate_family(p, &object, pc.kind)?;
    report.merge(vf.scoped("family"));
    let object_id = enc_pcobj(&object.family, &object.transitions);
    if !pc.objects.contains_key(&object_id) {
        report.push("membership", "computed (co)limit object not in the enumeration".to_string());
    }
    // Legs as pseudocone morphisms.
    let mut legs = BTreeMap::new();
    for i in &shape.objects {
        let comps: BTreeMap<String, String> = p
            .base
            .objects
            .iter()
            .map(|x| (x.clone(), fibre_cones[x].legs[i].clone()))
            .collect();
        let (s, t) = match orientation {
            Orientation::Limit => (object_id.clone(), d.ap_obj(i)?.to_string()),
            Orientation::Colimit => (d.ap_obj(i)?.to_string(), object_id.clone()),
        };
        let id = enc_pcmor(&s, &t, &comps);
        if !pc.morphisms.contains_key(&id) {
            report.push("legs", format!("leg at {i} is not a pseudocone morphism"));
        }
        legs.insert(i.clone(), comps);
    }
    // Oracle: the brute-force universal cone inside the enumerated PC(F)
    // coincides up to the computed unique isomorphism.
    if report.is_ok() {
        match compute_limit(&pc.cat, d, orientation) {
            Ok(oracle) => {
                let leg_ids: BTreeMap<String, String> = shape
                    .objects
                    .iter()
                    .map(|i| {
                        let (s, t) = match orientation {
                            Orientation::Limit => (object_id.clone(), d.ap_obj(i).unwrap().to_string()),
                            Orientation::Colimit => (d.ap_obj(i).unwrap().to_string(), object_id.clone()),
                        };
                        (i.clone(), enc_pcmor(&s, &t, &legs[i]))
                    })
                    .collect();
                let key = {
                    let parts: Vec<String> =
                        leg_ids.iter().map(|(i, l)| format!("{i}:{l}")).collect();
                    format!("{object_id};{}", parts.join(","))
                };
                match oracle.mediators.get(&key) {
                    Some(m) if pc.cat.is_iso(m) => {}
                    Some(_) => report.push("oracle", "mediator to brute-force cone not iso".to_string()),
                    None => report.push("oracle", "computed cone not mediated by brute-force cone".to_string()),
                }
            }
            Err(e) => report.push("oracle", format!("brute-force search failed: {e}")),
        }
    }
    Ok(PcLimitResult { object, object_id, legs, fibre_cones, report })
}

/// Strict monoidal data on the fibres of a pseudofunctor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidalData {
    /// `X` → object tensor table `(a, b) → a⊗b`
    pub tensor_obj: BTreeMap<String, BTreeMap<(String, String), String>>,
    /// `X` → morphism tensor table `(m, n) → m⊗n`
    pub tensor_mor: BTreeMap<String, BTreeMap<(String, String), String>>,
    /// `X` → unit object `I_X`
    pub unit: BTreeMap<String, String>,
    /// `(f, a, b)` → invertible `θ_f^{a,b}: F(f)(a⊗b) → F(f)a ⊗ F(f)b`
    pub theta: BTreeMap<(String, String, String), String>,
    /// `f` → invertible `σ_f: F(f)(I_Y) → I_X`
    pub sigma: BTreeMap<String, String>,
    /// optional braiding tables `X → (a, b) → b_{a,b}: a⊗b → b⊗a`
    pub braiding: Option<BTreeMap<String, BTreeMap<(String, String), String>>>,
}

impl MonoidalData {
    fn tob(&self, x: &str, a: &str, b: &str) -> Result<String> {
        self.tensor_obj
            .get(x)
            .and_then(|t| t.get(&(a.to_string(), b.to_string())))
            .cloned()
            .ok_or_else(|| EngineError::IncoherentMonoidalData(format!("no {a}⊗{b} in fibre {x}")))
    }

    fn tmor(&self, x: &str, m: &str, n: &str) -> Result<String> {
        self.tensor_mor
            .get(x)
            .and_then(|t| t.get(&(m.to_string(), n.to_string())))
            .cloned()
            .ok_or_else(|| EngineError::IncoherentMonoidalData(format!("no {m}⊗{n} in fibre {x}")))
    }

    fn th(&self, f: &str, a: &str, b: &str) -> Result<String> {
        self.theta
            .get(&(f.to_string(), a.to_string(), b.to_string()))
            .cloned()
            .ok_or_else(|| EngineError::IncoherentMonoidalData(format!("no θ_{f}^({a},{b})")))
    }
}

/// Validates the monoidal data: strict fibre tensors, θ/σ invertibility,
/// naturality of θ, and the pseudofunctoriality equations tying θ and σ to
/// the compositors.
pub fn validate_monoidal(p: &PseudofunctorData, m: &MonoidalData) -> Report {
    let mut rep = Report::ok();
    for x in &p.base.objects {
        let fib = match p.fib(x) {
            Ok(f) => f,
            Err(_) => continue,
        };
        // Tensor is a strict monoidal product: total, functorial, associative,
        // unital.
        for a in &fib.objects {
            for b in &fib.objects {
                match m.tob(x, a, b) {
                    Ok(ab) if fib.has_object(&ab) => {}
                    _ => rep.push("tensor-total", format!("{a}⊗{b} in fibre {x}")),
                }
            }
        }
        if !rep.is_ok() {
            return rep;
        }
        for mm in &fib.morphisms {
            for nn in &fib.morphisms {
                match m.tmor(x, &mm.id, &nn.id).and_then(|t| fib.mor(&t).cloned()) {
                    Ok(t) => {
                        if t.src != m.tob(x, &mm.src, &nn.src).unwrap()
                            || t.tgt != m.tob(x, &mm.tgt, &nn.tgt).unwrap()
                        {
                            rep.push("tensor-endpoints", format!("{}⊗{} in fibre {x}", mm.id, nn.id));
                        }
                    }
                    Err(_) => rep.push("tensor-total", format!("{}⊗{} in fibre {x}", mm.id, nn.id)),
                }
            }
        }
        for a in &fib.objects {
            for b in &fib.objects {
                let ida = fib.id_of(a).unwrap();
                let idb = fib.id_of(b).unwrap();
                let ab = m.tob(x, a, b).unwrap();
                if m.tmor(x, ida, idb).unwrap() != fib.id_of(&ab).unwrap() {
                    rep.push("tensor-identity", format!("id_{a}⊗id_{b} in fibre {x}"));
                }
                for c in &fib.objects {
                    let bc = m.tob(x, b, c).unwrap();
                    if m.tob(x, &ab, c).unwrap() != m.tob(x, a, &bc).unwrap() {
                        rep.push("tensor-associative", format!("({a}⊗{b})⊗{c} in fibre {x}"));
                    }
                }
            }
        }
        for (f1, f2) in fib.morphisms.iter().flat_map(|f1| fib.morphisms.iter().map(move |f2| (f1, f2))) {
            for (g1, g2) in fib.morphisms.iter().flat_map(|g1| fib.morphisms.iter().map(move |g2| (g1, g2))) {
                if f1.tgt != g1.src || f2.tgt != g2.src {
                    continue;
                }
                let lhs = m
                    .tmor(x, &fib.comp(&g1.id, &f1.id).unwrap(), &fib.comp(&g2.id, &f2.id).unwrap())
                    .unwrap();
                let rhs = fib
                    .comp(&m.tmor(x, &g1.id, &g2.id).unwrap(), &m.tmor(x, &f1.id, &f2.id).unwrap())
                    .unwrap();
                if lhs != rhs {
                    rep.push("tensor-interchange", format!("fibre {x}"));
                }
            }
        }
        let unit = match m.unit.get(x) {
            Some(u) => u.clone(),
            None => {
                rep.push("unit", format!("no unit in fibre {x}"));
                continue;
            }
        };
        for a in &fib.objects {
            if m.tob(x, &unit, a).unwrap() != *a || m.tob(x, a, &unit).unwrap() != *a {
                rep.push("unit-strict", format!("fibre {x} object {a}"));
            }
        }
        if let Some(br) = &m.braiding {
            for a in &fib.objects {
                for b in &fib.objects {
                    match br.get(x).and_then(|t| t.get(&(a.clone(), b.clone()))) {
                        Some(bm) => {
                            let ok = fib
                                .mor(bm)
                                .map(|mm| {
                                    mm.src == m.tob(x, a, b).unwrap()
                                        && mm.tgt == m.tob(x, b, a).unwrap()
                                        && fib.is_iso(bm)
                                })
                                .unwrap_or(false);
                            if !ok {
                                rep.push("braiding", format!("b_({a},{b}) in fibre {x}"));
                            }
                        }
                        None => rep.push("braiding", format!("missing b_({a},{b}) in fibre {x}")),
                    }
                }
            }
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    // θ: endpoints, invertibility, naturality, compositor coherence; σ likewise.
    for f in &p.base.morphisms {
        let fib = p.fib(&f.src).unwrap();
        let fibt = p.fib(&f.tgt).unwrap();
        let ff = p.ff(&f.id).unwrap();
        for a in &fibt.objects {
            for b in &fibt.objects {
                let th = match m.th(&f.id, a, b) {
                    Ok(t) => t,
                    Err(_) => {
                        rep.push("theta", format!("missing θ_{}^({a},{b})", f.id));
                        continue;
                    }
                };
                let src = ff.ap_obj(&m.tob(&f.tgt, a, b).unwrap()).unwrap();
                let tgt = m.tob(&f.src, ff.ap_obj(a).unwrap(), ff.ap_obj(b).unwrap()).unwrap();
                let ok = fib
                    .mor(&th)
                    .map(|t| t.src == src && t.tgt == tgt && fib.is_iso(&th))
                    .unwrap_or(false);
                if !ok {
                    rep.push("theta", format!("θ_{}^({a},{b}) malformed", f.id));
                }
            }
        }
        if !rep.is_ok() {
            return rep;
        }
        for m1 in &fibt.morphisms {
            for m2 in &fibt.morphisms {
                // (F(f)m1 ⊗ F(f)m2) ∘ θ_f^{a,b} = θ_f^{a',b'} ∘ F(f)(m1⊗m2)
                let lhs = fib
                    .comp(
                        &m.tmor(&f.src, ff.ap_mor(&m1.id).unwrap(), ff.ap_mor(&m2.id).unwrap())
                            .unwrap(),
                        &m.th(&f.id, &m1.src, &m2.src).unwrap(),
                    )
                    .unwrap();
                let rhs = fib
                    .comp(
                        &m.th(&f.id, &m1.tgt, &m2.tgt).unwrap(),
                        ff.ap_mor(&m.tmor(&f.tgt, &m1.id, &m2.id).unwrap()).unwrap(),
                    )
                    .unwrap();
                if lhs != rhs {
                    rep.push("theta-natural", format!("θ_{} at ({}, {})", f.id, m1.id, m2.id));
                }
            }
        }
        match m.sigma.get(&f.id) {
            Some(s) => {
                let src = ff.ap_obj(&m.unit[&f.tgt]).unwrap();
                let ok = fib
                    .mor(s)
                    .map(|t| t.src == src && t.tgt == m.unit[&f.src] && fib.is_iso(s))
                    .unwrap_or(false);
                if !ok {
                    rep.push("sigma", format!("σ_{} malformed", f.id));
                }
            }
            None => rep.push("sigma", format!("missing σ_{}", f.id)),
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for f in &p.base.morphisms {
        for g in &p.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let gf = p.base.comp(&g.id, &f.id).unwrap();
            let fib = p.fib(&f.src).unwrap();
            let ff = p.ff(&f.id).unwrap();
            let fg = p.ff(&g.id).unwrap();
            // σ_f ∘ F(f)(σ_g) = σ_{g∘f} ∘ φ_{f,g}[I_Z]
            let iz = &m.unit[&g.tgt];
            let lhs = fib
                .comp(&m.sigma[&f.id], ff.ap_mor(&m.sigma[&g.id]).unwrap())
                .unwrap();
            let rhs = fib
                .comp(&m.sigma[&gf], &p.phi_at(&f.id, &g.id, iz).unwrap())
                .unwrap();
            if lhs != rhs {
                rep.push("sigma-coherence", format!("pair ({}, {})", f.id, g.id));
            }
            // (φ_{f,g}[a] ⊗ φ_{f,g}[b]) ∘ θ_f^{F(g)a, F(g)b} ∘ F(f)(θ_g^{a,b})
            //   = θ_{g∘f}^{a,b} ∘ φ_{f,g}[a⊗b]
            for a in &p.fib(&g.tgt).unwrap().objects {
                for b in &p.fib(&g.tgt).unwrap().objects {
                    let lhs = fib
                        .chain(&[
                            ff.ap_mor(&m.th(&g.id, a, b).unwrap()).unwrap(),
                            &m.th(&f.id, fg.ap_obj(a).unwrap(), fg.ap_obj(b).unwrap()).unwrap(),
                            &m.tmor(
                                &f.src,
                                &p.phi_at(&f.id, &g.id, a).unwrap(),
                                &p.phi_at(&f.id, &g.id, b).unwrap(),
                            )
                            .unwrap(),
                        ])
                        .unwrap();
                    let ab = m.tob(&g.tgt, a, b).unwrap();
                    let rhs = fib
                        .comp(&m.th(&gf, a, b).unwrap(), &p.phi_at(&f.id, &g.id, &ab).unwrap())
                        .unwrap();
                    if lhs != rhs {
                        rep.push("theta-coherence", format!("pair ({}, {}) at ({a},{b})", f.id, g.id));
                    }
                }
            }
        }
    }
    rep
}

/// Componentwise tensor of two pseudocones:
/// `(A⊗B)_X = A_X ⊗ B_X`, `τ_f^{A⊗B} = (τ_f^A ⊗ τ_f^B) ∘ θ_f^{A_Y,B_Y}`.
pub fn pc_tensor(
    pc: &PCCategory,
    m: &MonoidalData,
    a: &PCObject,
    b: &PCObject,
) -> Result<PCObject> {
    let p = &pc.p;
    let rep = validate_monoidal(p, m);
    if !rep.is_ok() {
        return Err(EngineError::IncoherentMonoidalData(format!("{:?}", rep.violations[0])));
    }
    let mut family = BTreeMap::new();
    for x in &p.base.objects {
        family.insert(x.clone(), m.tob(x, &a.family[x], &b.family[x])?);
    }
    let mut transitions = BTreeMap::new();
    for f in &p.base.morphisms {
        let fib = p.fib(&f.src)?;
        let t = fib.comp(
            &m.tmor(&f.src, &a.transitions[&f.id], &b.transitions[&f.id])?,
            &m.th(&f.id, &a.family[&f.tgt], &b.family[&f.tgt])?,
        )?;
        transitions.insert(f.id.clone(), t);
    }
    let obj = PCObject { family, transitions };
    let v = validate_family(p, &obj, pc.kind)?;
    if !v.is_ok() {
        return Err(EngineError::IncoherentMonoidalData(format!(
            "tensor object fails the cocycle: {:?}",
            v.violations[0]
        )));
    }
    Ok(obj)
}

/// The monoidal unit pseudocone `(I, {σ_f})`.
pub fn pc_unit(pc: &PCCategory, m: &MonoidalData) -> Result<PCObject> {
    let p = &pc.p;
    let rep = validate_monoidal(p, m);
    if !rep.is_ok() {
        return Err(EngineError::IncoherentMonoidalData(format!("{:?}", rep.violations[0])));
    }
    let family: BTreeMap<String, String> = m.unit.clone();
    let transitions: BTreeMap<String, String> =
        p.base.morphisms.iter().map(|f| (f.id.clone(), m.sigma[&f.id].clone())).collect();
    let obj = PCObject { family, transitions };
    let v = validate_family(p, &obj, pc.kind)?;
    if !v.is_ok() {
        return Err(EngineError::IncoherentMonoidalData(format!(
            "unit object fails the cocycle: {:?}",
            v.violations[0]
        )));
    }
    Ok(obj)
}

/// The componentwise braiding as a pseudocone morphism `A⊗B → B⊗A`.
pub fn pc_braiding(
    pc: &PCCategory,
    m: &MonoidalData,
    a: &PCObject,
    b: &PCObject,
) -> Result<PCMorphism> {
    let p = &pc.p;
    let br = m
        .braiding
        .as_ref()
        .ok_or_else(|| EngineError::IncoherentMonoidalData("no braiding supplied".into()))?;
    let ab = pc_tensor(pc, m, a, b)?;
    let ba = pc_tensor(pc, m, b, a)?;
    let mut components = BTreeMap::new();
    for x in &p.base.objects {
        let c = br
            .get(x)
            .and_then(|t| t.get(&(a.family[x].clone(), b.family[x].clone())))
            .cloned()
            .ok_or_else(|| {
                EngineError::IncoherentMonoidalData(format!("missing braiding component at {x}"))
            })?;
        components.insert(x.clone(), c);
    }
    let v = validate_morphism(p, &ab, &ba, &components)?;
    if !v.is_ok() {
        return Err(EngineError::IncoherentMonoidalData(format!(
            "braiding is not a pseudocone morphism: {:?}",
            v.violations[0]
        )));
    }
    Ok(PCMorphism {
        src: enc_pcobj(&ab.family, &ab.transitions),
        tgt: enc_pcobj(&ba.family, &ba.transitions),
        components,
    })
}
