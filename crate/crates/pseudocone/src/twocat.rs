//! Normalized pseudofunctors `F: C^op → Cat` with compositors, pseudonatural
//! transformations, and modifications.
//!
//! Contravariance is handled by typing: the base is stored as given and a
//! base morphism `f: X → Y` is assigned a fibre functor `F(f): F(Y) → F(X)`.
//! Compositors are invertible 2-cells `φ_{f,g}: F(f)∘F(g) ⇒ F(g∘f)`
//! satisfying, for every composable triple,
//! `φ_{f,h∘g} ∘ (F(f) ∗ φ_{g,h}) = φ_{g∘f,h} ∘ (φ_{f,g} ∗ F(h))`.
//! All pseudofunctors are normalized: `F(id) = Id` and any compositor
//! involving an identity is the identity transformation.

use crate::fincat::{
    check_category, compose_functors, vcomp, whisker_left, whisker_right, FinCat, FunctorData,
    NatTransData,
};
use crate::report::{EngineError, Report, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A normalized pseudofunctor on the opposite of a finite base category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudofunctorData {
    pub base: FinCat,
    /// base object `X` → fibre category `F(X)`
    pub fibre: BTreeMap<String, FinCat>,
    /// base morphism `f: X → Y` → fibre functor `F(f): F(Y) → F(X)`
    pub fibre_functor: BTreeMap<String, FunctorData>,
    /// composable pair `(f, g)` (with `tgt f = src g`) → `φ_{f,g}: F(f)∘F(g) ⇒ F(g∘f)`
    pub compositor: BTreeMap<(String, String), NatTransData>,
}

impl PseudofunctorData {
    pub fn fib(&self, x: &str) -> Result<&FinCat> {
        self.fibre
            .get(x)
            .ok_or_else(|| EngineError::MalformedTable(format!("no fibre over {x}")))
    }

    pub fn ff(&self, f: &str) -> Result<&FunctorData> {
        self.fibre_functor
            .get(f)
            .ok_or_else(|| EngineError::MalformedTable(format!("no fibre functor for {f}")))
    }

    pub fn phi(&self, f: &str, g: &str) -> Result<&NatTransData> {
        self.compositor
            .get(&(f.to_string(), g.to_string()))
            .ok_or_else(|| EngineError::MalformedTable(format!("no compositor φ_({f},{g})")))
    }

    /// Component of `φ_{f,g}` at a fibre object `c` of `F(tgt g)`.
    pub fn phi_at(&self, f: &str, g: &str, c: &str) -> Result<String> {
        Ok(self.phi(f, g)?.at(c)?.to_string())
    }

    /// Component of `φ_{f,g}^{-1}` at a fibre object of `F(tgt g)`.
    pub fn phi_inv_at(&self, f: &str, g: &str, c: &str) -> Result<String> {
        let x = self.base.mor(f)?.src.clone();
        let comp = self.phi_at(f, g, c)?;
        self.fib(&x)?
            .inverse_of(&comp)
            .ok_or_else(|| EngineError::Invalid(format!("φ_({f},{g}) not invertible at {c}")))
    }

    /// Builds a strict pseudofunctor (all compositors identities).
    pub fn strict(
        base: FinCat,
        fibre: BTreeMap<String, FinCat>,
        fibre_functor: BTreeMap<String, FunctorData>,
    ) -> Result<PseudofunctorData> {
        let mut compositor = BTreeMap::new();
        for f in &base.morphisms {
            for g in &base.morphisms {
                if f.tgt != g.src {
                    continue;
                }
                let gf = base.comp(&g.id, &f.id)?;
                let comp = compose_functors(
                    fibre_functor
                        .get(&g.id)
                        .ok_or_else(|| EngineError::MalformedTable(format!("no F({})", g.id)))?,
                    fibre_functor
                        .get(&f.id)
                        .ok_or_else(|| EngineError::MalformedTable(format!("no F({})", f.id)))?,
                )?;
                let target = fibre_functor
                    .get(&gf)
                    .ok_or_else(|| EngineError::MalformedTable(format!("no F({gf})")))?;
                if !comp.same_tables(target) {
                    return Err(EngineError::Invalid(format!(
                        "strict composition fails: F({}) ∘ F({}) ≠ F({gf})",
                        f.id, g.id
                    )));
                }
                let mut phi = NatTransData::identity(&comp);
                phi.tgt = target.clone();
                compositor.insert((f.id.clone(), g.id.clone()), phi);
            }
        }
        Ok(PseudofunctorData { base, fibre, fibre_functor, compositor })
    }
}

/// Validates normalization, compositor naturality, invertibility, and the
/// triple coherence law.
pub fn check_pseudofunctor(p: &PseudofunctorData) -> Report {
    let mut rep = Report::ok();
    rep.merge(check_category(&p.base).scoped("base"));
    for (x, f) in &p.fibre {
        rep.merge(check_category(f).scoped(&format!("fibre({x})")));
    }
    for f in &p.base.morphisms {
        let ff = match p.ff(&f.id) {
            Ok(ff) => ff,
            Err(_) => {
                rep.push("fibre-functor", format!("missing F({})", f.id));
                continue;
            }
        };
        // F(f): F(Y) → F(X) for f: X → Y
        if Some(&ff.src) != p.fibre.get(&f.tgt) || Some(&ff.tgt) != p.fibre.get(&f.src) {
            rep.push("fibre-functor", format!("F({}) has wrong endpoint categories", f.id));
        }
        rep.merge(ff.check().scoped(&format!("F({})", f.id)));
    }
    if !rep.is_ok() {
        return rep;
    }
    // Normalization: F(id) = Id.
    for (x, i) in &p.base.identity {
        if !p.ff(i).unwrap().same_tables(&FunctorData::identity(p.fib(x).unwrap())) {
            rep.push("normalization", format!("F(id_{x}) is not the identity functor"));
        }
    }
    // Compositors: presence, endpoints, naturality, invertibility, normalization.
    for f in &p.base.morphisms {
        for g in &p.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let phi = match p.phi(&f.id, &g.id) {
                Ok(phi) => phi,
                Err(_) => {
                    rep.push("compositor", format!("missing φ_({},{})", f.id, g.id));
                    continue;
                }
            };
            let gf = p.base.comp(&g.id, &f.id).unwrap();
            let comp = compose_functors(p.ff(&g.id).unwrap(), p.ff(&f.id).unwrap()).unwrap();
            if !phi.src.same_tables(&comp) || !phi.tgt.same_tables(p.ff(&gf).unwrap()) {
                rep.push("compositor", format!("φ_({},{}) has wrong endpoints", f.id, g.id));
                continue;
            }
            rep.merge(phi.check().scoped(&format!("φ_({},{})", f.id, g.id)));
            if !phi.is_invertible() {
                rep.push("compositor-invertible", format!("φ_({},{})", f.id, g.id));
            }
            if p.base.is_identity(&f.id) || p.base.is_identity(&g.id) {
                let fibre_x = p.fib(&f.src).unwrap();
                let is_id = p
                    .base
                    .mor(&gf)
                    .ok()
                    .map(|_| {
                        phi.components.iter().all(|(c, m)| {
                            comp.ap_obj(c).map(|o| m == fibre_x.id_of(o).unwrap()).unwrap_or(false)
                        })
                    })
                    .unwrap_or(false);
                if !is_id {
                    rep.push("normalization", format!("φ_({},{}) is not the identity", f.id, g.id));
                }
            }
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    // Triple coherence: for f: X→?, g, h composable,
    // φ_{f,h∘g} ∘ (F(f) ∗ φ_{g,h}) = φ_{g∘f,h} ∘ (φ_{f,g} ∗ F(h)) at every
    // object c of the last fibre.
    for f in &p.base.morphisms {
        for g in &p.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            for h in &p.base.morphisms {
                if g.tgt != h.src {
                    continue;
                }
                let gf = p.base.comp(&g.id, &f.id).unwrap();
                let hg = p.base.comp(&h.id, &g.id).unwrap();
                let fib_x = p.fib(&f.src).unwrap();
                let fh = p.ff(&h.id).unwrap();
                let ffun = p.ff(&f.id).unwrap();
                for c in &p.fib(&h.tgt).unwrap().objects {
                    let lhs = fib_x
                        .comp(
                            &p.phi_at(&f.id, &hg, c).unwrap(),
                            ffun.ap_mor(&p.phi_at(&g.id, &h.id, c).unwrap()).unwrap(),
                        )
                        .unwrap();
                    let rhs = fib_x
                        .comp(
                            &p.phi_at(&gf, &h.id, c).unwrap(),
                            &p.phi_at(&f.id, &g.id, fh.ap_obj(c).unwrap()).unwrap(),
                        )
                        .unwrap();
                    if lhs != rhs {
                        rep.push(
                            "coherence",
                            format!("triple (f={}, g={}, h={}) at fibre object {c}", f.id, g.id, h.id),
                        );
                    }
                }
            }
        }
    }
    rep
}

/// A pseudonatural transformation `α: F ⇒ E` over a common base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoNatData {
    pub src: PseudofunctorData,
    pub tgt: PseudofunctorData,
    /// `X` → `α_X: F(X) → E(X)`
    pub obj_component: BTreeMap<String, FunctorData>,
    /// `f: X → Y` → invertible `α_f: α_X ∘ F(f) ⇒ E(f) ∘ α_Y`
    pub mor_component: BTreeMap<String, NatTransData>,
}

impl PseudoNatData {
    pub fn oc(&self, x: &str) -> Result<&FunctorData> {
        self.obj_component
            .get(x)
            .ok_or_else(|| EngineError::MalformedTable(format!("missing α_{x}")))
    }

    pub fn mc(&self, f: &str) -> Result<&NatTransData> {
        self.mor_component
            .get(f)
            .ok_or_else(|| EngineError::MalformedTable(format!("missing α_{f}")))
    }

    pub fn identity(p: &PseudofunctorData) -> PseudoNatData {
        let obj_component: BTreeMap<String, FunctorData> = p
            .fibre
            .iter()
            .map(|(x, c)| (x.clone(), FunctorData::identity(c)))
            .collect();
        let mor_component = p
            .base
            .morphisms
            .iter()
            .map(|f| {
                let ff = p.ff(&f.id).unwrap();
                (f.id.clone(), NatTransData::identity(ff))
            })
            .collect();
        PseudoNatData { src: p.clone(), tgt: p.clone(), obj_component, mor_component }
    }
}

/// Validates the pseudonaturality pasting coherence.
pub fn check_pseudonat(a: &PseudoNatData) -> Report {
    let mut rep = Report::ok();
    if a.src.base != a.tgt.base {
        rep.push("base", "source and target pseudofunctors have different bases".to_string());
        return rep;
    }
    for x in &a.src.base.objects {
        match a.oc(x) {
            Ok(ax) => {
                if Some(&ax.src) != a.src.fibre.get(x) || Some(&ax.tgt) != a.tgt.fibre.get(x) {
                    rep.push("obj-component", format!("α_{x} has wrong endpoints"));
                }
                rep.merge(ax.check().scoped(&format!("α_{x}")));
            }
            Err(_) => rep.push("obj-component", format!("missing α_{x}")),
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for f in &a.src.base.morphisms {
        let af = match a.mc(&f.id) {
            Ok(af) => af,
            Err(_) => {
                rep.push("mor-component", format!("missing α_{}", f.id));
                continue;
            }
        };
        let lhs = compose_functors(a.src.ff(&f.id).unwrap(), a.oc(&f.src).unwrap()).unwrap();
        let rhs = compose_functors(a.oc(&f.tgt).unwrap(), a.tgt.ff(&f.id).unwrap()).unwrap();
        if !af.src.same_tables(&lhs) || !af.tgt.same_tables(&rhs) {
            rep.push("mor-component", format!("α_{} has wrong endpoints", f.id));
            continue;
        }
        rep.merge(af.check().scoped(&format!("α_{}", f.id)));
        if !af.is_invertible() {
            rep.push("mor-component-invertible", format!("α_{}", f.id));
        }
        if a.src.base.is_identity(&f.id) {
            let fib = &a.tgt.fibre[&f.src];
            let is_id = af.components.iter().all(|(c, m)| {
                af.src.ap_obj(c).map(|o| m == fib.id_of(o).unwrap()).unwrap_or(false)
            });
            if !is_id {
                rep.push("normalization", format!("α_id at {} is not the identity", f.src));
            }
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    // Pasting coherence: for composable f: X→Y, g: Y→Z and C in F(Z):
    // (α_{g∘f})_C ∘ α_X(φ^F_{f,g}[C])
    //   = φ^E_{f,g}[α_Z C] ∘ E(f)((α_g)_C) ∘ (α_f)_{F(g) C}
    for f in &a.src.base.morphisms {
        for g in &a.src.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let gf = a.src.base.comp(&g.id, &f.id).unwrap();
            let fib_ex = a.tgt.fib(&f.src).unwrap();
            for c in &a.src.fib(&g.tgt).unwrap().objects {
                let lhs = fib_ex
                    .comp(
                        a.mc(&gf).unwrap().at(c).unwrap(),
                        a.oc(&f.src)
                            .unwrap()
                            .ap_mor(&a.src.phi_at(&f.id, &g.id, c).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
                let az_c = a.oc(&g.tgt).unwrap().ap_obj(c).unwrap().to_string();
                let fg_c = a.src.ff(&g.id).unwrap().ap_obj(c).unwrap().to_string();
                let rhs = fib_ex
                    .chain(&[
                        a.mc(&f.id).unwrap().at(&fg_c).unwrap(),
                        a.tgt.ff(&f.id).unwrap().ap_mor(a.mc(&g.id).unwrap().at(c).unwrap()).unwrap(),
                        &a.tgt.phi_at(&f.id, &g.id, &az_c).unwrap(),
                    ])
                    .unwrap();
                if lhs != rhs {
                    rep.push("pasting", format!("(f={}, g={}) at fibre object {c}", f.id, g.id));
                }
            }
        }
    }
    rep
}

/// A modification `η: α ⇛ β` between pseudonaturals with common endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModificationData {
    pub src: PseudoNatData,
    pub tgt: PseudoNatData,
    /// `X` → `η_X: α_X ⇒ β_X`
    pub components: BTreeMap<String, NatTransData>,
}

impl ModificationData {
    pub fn comp(&self, x: &str) -> Result<&NatTransData> {
        self.components
            .get(x)
            .ok_or_else(|| EngineError::MalformedTable(format!("missing η_{x}")))
    }

    pub fn identity(a: &PseudoNatData) -> ModificationData {
        let components = a
            .obj_component
            .iter()
            .map(|(x, ax)| (x.clone(), NatTransData::identity(ax)))
            .collect();
        ModificationData { src: a.clone(), tgt: a.clone(), components }
    }
}

/// Validates the modification square `(E(g) ∗ η_Y) ∘ α_g = β_g ∘ (η_X ∗ F(g))`.
pub fn check_modification(m: &ModificationData) -> Report {
    let mut rep = Report::ok();
    let base = &m.src.src.base;
    for x in &base.objects {
        match m.comp(x) {
            Ok(eta) => {
                if !eta.src.same_tables(m.src.oc(x).unwrap())
                    || !eta.tgt.same_tables(m.tgt.oc(x).unwrap())
                {
                    rep.push("component", format!("η_{x} has wrong endpoints"));
                }
                rep.merge(eta.check().scoped(&format!("η_{x}")));
            }
            Err(_) => rep.push("component", format!("missing η_{x}")),
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    // For g: X → Y and B in F(Y): E(g)((η_Y)_B) ∘ (α_g)_B = (β_g)_B ∘ (η_X)_{F(g) B}
    for g in &base.morphisms {
        let fib_ex = m.src.tgt.fib(&g.src).unwrap();
        for b in &m.src.src.fib(&g.tgt).unwrap().objects {
            let lhs = fib_ex
                .comp(
                    m.src
                        .tgt
                        .ff(&g.id)
                        .unwrap()
                        .ap_mor(m.comp(&g.tgt).unwrap().at(b).unwrap())
                        .unwrap(),
                    m.src.mc(&g.id).unwrap().at(b).unwrap(),
                )
                .unwrap();
            let fg_b = m.src.src.ff(&g.id).unwrap().ap_obj(b).unwrap().to_string();
            let rhs = fib_ex
                .comp(
                    m.tgt.mc(&g.id).unwrap().at(b).unwrap(),
                    m.comp(&g.src).unwrap().at(&fg_b).unwrap(),
                )
                .unwrap();
            if lhs != rhs {
                rep.push("square", format!("at g={} fibre object {b}", g.id));
            }
        }
    }
    rep
}

/// Composite pseudonatural `β ∘ α` for `α: F ⇒ G`, `β: G ⇒ H`, with witnesses
/// `(β∘α)_f = (β_f ∗ α_Y) ∘ (β_X ∗ α_f)`.
pub fn compose_pseudonats(alpha: &PseudoNatData, beta: &PseudoNatData) -> Result<PseudoNatData> {
    let base = alpha.src.base.clone();
    let mut obj_component = BTreeMap::new();
    for x in &base.objects {
        obj_component.insert(x.clone(), compose_functors(alpha.oc(x)?, beta.oc(x)?)?);
    }
    let mut mor_component = BTreeMap::new();
    for f in &base.morphisms {
        let left = whisker_left(beta.oc(&f.src)?, alpha.mc(&f.id)?)?;
        let right = whisker_right(beta.mc(&f.id)?, alpha.oc(&f.tgt)?)?;
        let mut w = vcomp(&left, &right)?;
        // retype endpoints against the composite object functors
        w.src = compose_functors(alpha.src.ff(&f.id)?, &obj_component[&f.src])?;
        w.tgt = compose_functors(&obj_component[&f.tgt], beta.tgt.ff(&f.id)?)?;
        mor_component.insert(f.id.clone(), w);
    }
    Ok(PseudoNatData {
        src: alpha.src.clone(),
        tgt: beta.tgt.clone(),
        obj_component,
        mor_component,
    })
}

/// Vertical composite of modifications `ε ∘ η` for `η: α ⇛ β`, `ε: β ⇛ γ`.
pub fn compose_modifications(
    eta: &ModificationData,
    eps: &ModificationData,
) -> Result<ModificationData> {
    let mut components = BTreeMap::new();
    for x in &eta.src.src.base.objects {
        components.insert(x.clone(), vcomp(eta.comp(x)?, eps.comp(x)?)?);
    }
    Ok(ModificationData { src: eta.src.clone(), tgt: eps.tgt.clone(), components })
}

/// Horizontal composite of modifications `θ ∗ η: β∘α ⇛ β'∘α'` for
/// `η: α ⇛ α': F ⇒ G` and `θ: β ⇛ β': G ⇒ H`.
pub fn hcomp_modifications(
    eta: &ModificationData,
    theta: &ModificationData,
) -> Result<ModificationData> {
    let mut components = BTreeMap::new();
    for x in &eta.src.src.base.objects {
        // horizontal composite of natural transformations:
        // (θ_X ∗ η_X) = (θ_X ∗ α'_X) ∘ (β_X ∗ η_X)
        let left = whisker_left(theta.src.oc(x)?, eta.comp(x)?)?;
        let right = whisker_right(theta.comp(x)?, eta.tgt.oc(x)?)?;
        components.insert(x.clone(), vcomp(&left, &right)?);
    }
    Ok(ModificationData {
        src: compose_pseudonats(&eta.src, &theta.src)?,
        tgt: compose_pseudonats(&eta.tgt, &theta.tgt)?,
        components,
    })
}

/// Whiskering `γ ∗ η: γ∘α ⇛ γ∘β` of a modification by a pseudonatural.
pub fn whisker_modification_left(
    gamma: &PseudoNatData,
    eta: &ModificationData,
) -> Result<ModificationData> {
    hcomp_modifications(eta, &ModificationData::identity(gamma))
}

/// Whiskering `η ∗ γ: α∘γ ⇛ β∘γ` of a modification by a pseudonatural.
pub fn whisker_modification_right(
    eta: &ModificationData,
    gamma: &PseudoNatData,
) -> Result<ModificationData> {
    hcomp_modifications(&ModificationData::identity(gamma), eta)
}

/// Pasting kinds exposed as a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PasteKind {
    Vertical,
    Horizontal,
    Whisker,
}

/// Either kind of 2-dimensional cell handled by [`paste`].
#[derive(Clone, Debug)]
pub enum Cell {
    Nat(PseudoNatData),
    Mod(ModificationData),
}

/// Pastes two cells.
///
/// * `Vertical`/`Horizontal` on two pseudonaturals: the 1-cell composite
///   `rhs ∘ lhs` (these coincide in `Bicat(C^op, Cat)`).
/// * `Vertical` on two modifications: the vertical composite `rhs ∘ lhs`.
/// * `Horizontal` on two modifications: the horizontal composite `rhs ∗ lhs`.
/// * `Whisker`: a modification whiskered by a pseudonatural on either side.
pub fn paste(kind: PasteKind, lhs: &Cell, rhs: &Cell) -> Result<Cell> {
    match (kind, lhs, rhs) {
        (PasteKind::Vertical | PasteKind::Horizontal, Cell::Nat(a), Cell::Nat(b)) => {
            Ok(Cell::Nat(compose_pseudonats(a, b)?))
        }
        (PasteKind::Vertical, Cell::Mod(e), Cell::Mod(f)) => {
            Ok(Cell::Mod(compose_modifications(e, f)?))
        }
        (PasteKind::Horizontal, Cell::Mod(e), Cell::Mod(f)) => {
            Ok(Cell::Mod(hcomp_modifications(e, f)?))
        }
        (PasteKind::Whisker, Cell::Mod(e), Cell::Nat(g)) => {
            Ok(Cell::Mod(whisker_modification_left(g, e)?))
        }
        (PasteKind::Whisker, Cell::Nat(g), Cell::Mod(e)) => {
            Ok(Cell::Mod(whisker_modification_right(e, g)?))
        }
        _ => Err(EngineError::ShapeMismatch("unsupported paste operand kinds".into())),
    }
}

/// Precomposition `F ∘ u^op` of a pseudofunctor on `D^op` with `u: C → D`.
pub fn precompose_base(p: &PseudofunctorData, u: &FunctorData) -> Result<PseudofunctorData> {
    let base = u.src.clone();
    let mut fibre = BTreeMap::new();
    for x in &base.objects {
        fibre.insert(x.clone(), p.fib(u.ap_obj(x)?)?.clone());
    }
    let mut fibre_functor = BTreeMap::new();
    for f in &base.morphisms {
        let mut ff = p.ff(u.ap_mor(&f.id)?)?.clone();
        ff.src = fibre[&f.tgt].clone();
        ff.tgt = fibre[&f.src].clone();
        fibre_functor.insert(f.id.clone(), ff);
    }
    let mut compositor = BTreeMap::new();
    for f in &base.morphisms {
        for g in &base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let phi = p.phi(u.ap_mor(&f.id)?, u.ap_mor(&g.id)?)?.clone();
            compositor.insert((f.id.clone(), g.id.clone()), phi);
        }
    }
    Ok(PseudofunctorData { base, fibre, fibre_functor, compositor })
}

/// Twists a pseudofunctor's compositors by a family of natural automorphisms
/// `ω_f: F(f) ⇒ F(f)` (with `ω_id = id`), producing a coherent non-strict
/// instance with the same fibre functors:
/// `φ'_{f,g} := ω_{g∘f} ∘ φ_{f,g} ∘ (ω_f ⋆ ω_g)^{-1}`.
pub fn twist_compositors(
    p: &PseudofunctorData,
    omega: &BTreeMap<String, NatTransData>,
) -> Result<PseudofunctorData> {
    let mut out = p.clone();
    for f in &p.base.morphisms {
        for g in &p.base.morphisms {
            if f.tgt != g.src {
                continue;
            }
            let gf = p.base.comp(&g.id, &f.id)?;
            let om_f = omega
                .get(&f.id)
                .ok_or_else(|| EngineError::MalformedTable(format!("missing ω_{}", f.id)))?;
            let om_g = omega
                .get(&g.id)
                .ok_or_else(|| EngineError::MalformedTable(format!("missing ω_{}", g.id)))?;
            let om_gf = omega
                .get(&gf)
                .ok_or_else(|| EngineError::MalformedTable(format!("missing ω_{gf}")))?;
            // ω_f ⋆ ω_g: F(f)F(g) ⇒ F(f)F(g)
            let star = vcomp(
                &whisker_left(p.ff(&f.id)?, om_g)?,
                &whisker_right(om_f, p.ff(&g.id)?)?,
            )?;
            let phi = p.phi(&f.id, &g.id)?;
            let mut tw = vcomp(&vcomp(&star.invert()?, phi)?, om_gf)?;
            tw.src = phi.src.clone();
            tw.tgt = phi.tgt.clone();
            out.compositor.insert((f.id.clone(), g.id.clone()), tw);
        }
    }
    Ok(out)
}
