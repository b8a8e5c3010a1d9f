//! The elements fibration `El(F) → C` with Cartesian arrows, (Cartesian)
//! sections with based transformations, and the comparison with `PC(F)`.
//!
//! Objects of `El(F)` are pairs `(X, A)` with `A` in `F(X)`; a morphism
//! `(X, A) → (Y, B)` is a pair `(f0: X → Y, f1: F(f0)(B) → A)` with the
//! twisted composition
//! `(g0, g1) ∘ (f0, f1) = (g0∘f0, f1 ∘ F(f0)(g1) ∘ φ^{-1}_{f0,g0})`.
//! Sections of the projection correspond to lax cones, Cartesian sections to
//! pseudocones, and based transformations to pseudocone morphisms — as a
//! literal equality of tables under canonical renaming.

use crate::fincat::{check_category, FinCat, FunctorData, Mor};
use crate::pseudocone::{enc_pcmor, enc_pcobj, enumerate_pc, ConeKind};
use crate::report::{EngineError, Report, Result};
use crate::twocat::PseudofunctorData;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The total category of the elements fibration, with its projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElCategory {
    pub total: FinCat,
    pub projection: FunctorData,
    pub p: PseudofunctorData,
    /// object id → (base object, fibre object)
    pub obj_pairs: BTreeMap<String, (String, String)>,
    /// morphism id → (f0, f1)
    pub mor_pairs: BTreeMap<String, (String, String)>,
}

fn enc_elobj(x: &str, a: &str) -> String {
    format!("({x},{a})")
}

fn enc_elmor(x: &str, a: &str, f0: &str, f1: &str, y: &str, b: &str) -> String {
    format!("({x},{a}|{f0},{f1}|{y},{b})")
}

/// Builds `El(F)` by exhausting pairs and applying the twisted composition.
pub fn build_elements(p: &PseudofunctorData) -> Result<ElCategory> {
    let mut obj_pairs: BTreeMap<String, (String, String)> = BTreeMap::new();
    for x in &p.base.objects {
        for a in &p.fib(x)?.objects {
            obj_pairs.insert(enc_elobj(x, a), (x.clone(), a.clone()));
        }
    }
    let mut mor_pairs: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut mors: Vec<Mor> = Vec::new();
    for (src_id, (x, a)) in &obj_pairs {
        for (tgt_id, (y, b)) in &obj_pairs {
            for f0 in p.base.hom(x, y) {
                let from = p.ff(&f0)?.ap_obj(b)?.to_string();
                for f1 in p.fib(x)?.hom(&from, a) {
                    let id = enc_elmor(x, a, &f0, &f1, y, b);
                    mor_pairs.insert(id.clone(), (f0.clone(), f1.clone()));
                    mors.push(Mor { id, src: src_id.clone(), tgt: tgt_id.clone() });
                }
            }
        }
    }
    let identity: BTreeMap<String, String> = obj_pairs
        .iter()
        .map(|(id, (x, a))| {
            let f0 = p.base.id_of(x).unwrap();
            let f1 = p.fib(x).unwrap().id_of(a).unwrap();
            (id.clone(), enc_elmor(x, a, f0, f1, x, a))
        })
        .collect();
    let mut compose = BTreeMap::new();
    let by_id: BTreeMap<String, &Mor> = mors.iter().map(|m| (m.id.clone(), m)).collect();
    for fm in &mors {
        for gm in &mors {
            if fm.tgt != gm.src {
                continue;
            }
            let (x, a) = &obj_pairs[&fm.src];
            let (z, c) = &obj_pairs[&gm.tgt];
            let (f0, f1) = &mor_pairs[&fm.id];
            let (g0, g1) = &mor_pairs[&gm.id];
            let h0 = p.base.comp(g0, f0)?;
            let fib = p.fib(x)?;
            // f1 ∘ F(f0)(g1) ∘ φ^{-1}_{f0,g0}[C]
            let h1 = fib.comp(
                &fib.comp(f1, p.ff(f0)?.ap_mor(g1)?)?,
                &p.phi_inv_at(f0, g0, c)?,
            )?;
            let rid = enc_elmor(x, a, &h0, &h1, z, c);
            if !by_id.contains_key(&rid) {
                return Err(EngineError::Invalid(format!(
                    "twisted composite left the morphism set: {rid}"
                )));
            }
            compose.insert((gm.id.clone(), fm.id.clone()), rid);
        }
    }
    let total = FinCat::new(obj_pairs.keys().cloned().collect(), mors, identity, compose);
    let rep = check_category(&total);
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!("El(F) fails category laws: {:?}", rep)));
    }
    let projection = FunctorData {
        src: total.clone(),
        tgt: p.base.clone(),
        obj_map: obj_pairs.iter().map(|(id, (x, _))| (id.clone(), x.clone())).collect(),
        mor_map: mor_pairs
            .iter()
            .map(|(id, (f0, _))| (id.clone(), f0.clone()))
            .collect(),
    };
    let prep = projection.check();
    if !prep.is_ok() {
        return Err(EngineError::Invalid(format!("projection is not a functor: {:?}", prep)));
    }
    Ok(ElCategory { total, projection, p: p.clone(), obj_pairs, mor_pairs })
}

/// Tests the fibrational universal property directly: `m: E' → E` is
/// Cartesian over `p(m)` iff every `m': E'' → E` over `p(m) ∘ h` lifts
/// uniquely through `m` over `h`.
pub fn is_cartesian(e: &ElCategory, mor_id: &str) -> Result<bool> {
    let m = e.total.mor(mor_id)?.clone();
    let f = e.projection.ap_mor(mor_id)?.to_string();
    for epp in &e.total.objects {
        let xpp = e.projection.ap_obj(epp)?;
        let xp = e.projection.ap_obj(&m.src)?;
        for h in e.p.base.hom(xpp, xp) {
            let fh = e.p.base.comp(&f, &h)?;
            for mp in e.total.hom(epp, &m.tgt) {
                if e.projection.ap_mor(&mp)? != fh {
                    continue;
                }
                let lifts: Vec<String> = e
                    .total
                    .hom(epp, &m.src)
                    .into_iter()
                    .filter(|l| {
                        e.projection.ap_mor(l).map(|p0| p0 == h).unwrap_or(false)
                            && e.total.comp(mor_id, l).map(|c| c == mp).unwrap_or(false)
                    })
                    .collect();
                if lifts.len() != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKind {
    All,
    Cartesian,
}

/// One section `s` of the projection, recorded by its object and morphism
/// choices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionData {
    pub functor: FunctorData,
    /// base object `X` → fibre object `A_X` with `s(X) = (X, A_X)`
    pub family: BTreeMap<String, String>,
    /// base morphism `f` → `τ_f` with `s(f) = (f, τ_f)`
    pub transitions: BTreeMap<String, String>,
}

/// Enumerates sections of the projection (functors `s` with `proj ∘ s = Id`),
/// optionally keeping only those with every `s(f)` Cartesian.  Cartesianness
/// is decided by the universal property, independently of the pseudocone
/// enumeration.  Object and morphism ids of the returned category use the
/// canonical renaming `s ↦ (A, T_A)`, so `sections(·, cartesian)^op` is
/// literally comparable with `PC(F)`.
pub fn sections(e: &ElCategory, kind: SectionKind) -> Result<FinCat> {
    let p = &e.p;
    // Candidate object choices.
    let mut fams: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for x in &p.base.objects {
        let mut next = Vec::new();
        for fam in &fams {
            for a in &p.fib(x)?.objects {
                let mut f = fam.clone();
                f.insert(x.clone(), a.clone());
                next.push(f);
            }
        }
        fams = next;
    }
    let mut secs: Vec<SectionData> = Vec::new();
    for fam in fams {
        // Candidate morphism choices over each base morphism.
        let mut trs: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for f in &p.base.morphisms {
            let from = p.ff(&f.id)?.ap_obj(&fam[&f.tgt])?.to_string();
            let cands = p.fib(&f.src)?.hom(&from, &fam[&f.src]);
            let mut next = Vec::new();
            for tr in &trs {
                for t in &cands {
                    let mut tt = tr.clone();
                    tt.insert(f.id.clone(), t.clone());
                    next.push(tt);
                }
            }
            trs = next;
        }
        'cand: for tr in trs {
            let obj_map: BTreeMap<String, String> = fam
                .iter()
                .map(|(x, a)| (x.clone(), enc_elobj(x, a)))
                .collect();
            let mut mor_map = BTreeMap::new();
            for f in &p.base.morphisms {
                let id = enc_elmor(
                    &f.src,
                    &fam[&f.src],
                    &f.id,
                    &tr[&f.id],
                    &f.tgt,
                    &fam[&f.tgt],
                );
                if e.total.mor(&id).is_err() {
                    continue 'cand;
                }
                mor_map.insert(f.id.clone(), id);
            }
            let s = FunctorData {
                src: p.base.clone(),
                tgt: e.total.clone(),
                obj_map,
                mor_map,
            };
            if !s.check().is_ok() {
                continue;
            }
            if matches!(kind, SectionKind::Cartesian) {
                for f in &p.base.morphisms {
                    if !is_cartesian(e, s.ap_mor(&f.id)?)? {
                        continue 'cand;
                    }
                }
            }
            secs.push(SectionData { functor: s, family: fam.clone(), transitions: tr });
        }
    }
    // Based transformations s ⇒ t: components (id_X, ρ_X) with naturality in
    // El(F); ids use the pseudocone renaming with endpoints swapped so the
    // opposite category compares literally.
    let sec_enc: Vec<(String, &SectionData)> = secs
        .iter()
        .map(|s| (enc_pcobj(&s.family, &s.transitions), s))
        .collect();
    let mut mors: Vec<Mor> = Vec::new();
    let mut identity = BTreeMap::new();
    let mut mor_comps: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (sid, s) in &sec_enc {
        for (tid, t) in &sec_enc {
            // Components ρ_X: t_X → s_X packaged as El morphisms over id.
            let mut cands: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
            for x in &p.base.objects {
                let homs = p.fib(x)?.hom(&t.family[x], &s.family[x]);
                let mut next = Vec::new();
                for c in &cands {
                    for r in &homs {
                        let mut cc = c.clone();
                        cc.insert(x.clone(), r.clone());
                        next.push(cc);
                    }
                }
                cands = next;
            }
            for rho in cands {
                // Naturality elementwise in El: t(f)∘η_X = η_Y∘s(f).
                let mut ok = true;
                for f in &p.base.morphisms {
                    let eta_x = enc_elmor(
                        &f.src,
                        &s.family[&f.src],
                        p.base.id_of(&f.src)?,
                        &rho[&f.src],
                        &f.src,
                        &t.family[&f.src],
                    );
                    let eta_y = enc_elmor(
                        &f.tgt,
                        &s.family[&f.tgt],
                        p.base.id_of(&f.tgt)?,
                        &rho[&f.tgt],
                        &f.tgt,
                        &t.family[&f.tgt],
                    );
                    if e.total.mor(&eta_x).is_err() || e.total.mor(&eta_y).is_err() {
                        ok = false;
                        break;
                    }
                    let lhs = e.total.comp(t.functor.ap_mor(&f.id)?, &eta_x)?;
                    let rhs = e.total.comp(&eta_y, s.functor.ap_mor(&f.id)?)?;
                    if lhs != rhs {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                // s ⇒ t becomes the pseudocone morphism t → s; record with
                // swapped ids and keep the section endpoints for this side.
                let id = enc_pcmor(tid, sid, &rho);
                mors.push(Mor { id: id.clone(), src: sid.clone(), tgt: tid.clone() });
                if sid == tid && rho.iter().all(|(x, r)| {
                    p.fib(x).map(|fb| fb.is_identity(r)).unwrap_or(false)
                }) {
                    identity.insert(sid.clone(), id.clone());
                }
                mor_comps.insert(id, rho);
            }
        }
    }
    let mut compose = BTreeMap::new();
    let by_id: BTreeMap<String, &Mor> = mors.iter().map(|m| (m.id.clone(), m)).collect();
    for fm in &mors {
        for gm in &mors {
            if fm.tgt != gm.src {
                continue;
            }
            // Vertical composite of based transformations: componentwise
            // ρ^{g∘f}_X = ρ^f_X ∘ ρ^g_X (the twist reverses the order).
            let rf = &mor_comps[&fm.id];
            let rg = &mor_comps[&gm.id];
            let mut comps = BTreeMap::new();
            for x in &p.base.objects {
                comps.insert(x.clone(), p.fib(x)?.comp(&rf[x], &rg[x])?);
            }
            // The composite s → u gets id [u => s]: pseudocone endpoints are
            // the section encodings with the order reversed.
            let rid = enc_pcmor(&gm.tgt, &fm.src, &comps);
            if !by_id.contains_key(&rid) {
                return Err(EngineError::Invalid(format!(
                    "composite of based transformations left the set: {rid}"
                )));
            }
            compose.insert((gm.id.clone(), fm.id.clone()), rid);
        }
    }
    let cat = FinCat::new(
        sec_enc.iter().map(|(id, _)| id.clone()).collect(),
        mors,
        identity,
        compose,
    );
    let rep = check_category(&cat);
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!("section category invalid: {:?}", rep)));
    }
    Ok(cat)
}

/// Asserts on-the-nose equality of `PC(F)` with `CSect^op` and of `LC(F)`
/// with `Sect^op` under the canonical renaming.
pub fn compare_pc_csect(p: &PseudofunctorData) -> Result<Report> {
    let mut rep = Report::ok();
    let e = build_elements(p)?;
    for (kind, ckind, label) in [
        (SectionKind::Cartesian, ConeKind::Pseudo, "cartesian"),
        (SectionKind::All, ConeKind::Lax, "all"),
    ] {
        let sec_op = sections(&e, kind)?.opposite();
        let pc = enumerate_pc(p, ckind)?.cat;
        if sec_op.objects != pc.objects {
            rep.push(
                format!("{label}-objects"),
                format!("sections^op: {:?} vs cones: {:?}", sec_op.objects, pc.objects),
            );
            continue;
        }
        if sec_op.morphisms != pc.morphisms {
            let a: Vec<&String> = sec_op.morphisms.iter().map(|m| &m.id).collect();
            let b: Vec<&String> = pc.morphisms.iter().map(|m| &m.id).collect();
            rep.push(format!("{label}-morphisms"), format!("sections^op: {a:?} vs cones: {b:?}"));
            continue;
        }
        if sec_op.identity != pc.identity {
            rep.push(format!("{label}-identities"), "identity tables differ".to_string());
        }
        if sec_op.compose != pc.compose {
            rep.push(format!("{label}-composition"), "composition tables differ".to_string());
        }
    }
    Ok(rep)
}
