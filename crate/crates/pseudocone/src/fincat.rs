//! Finite 1-categories with explicit composition tables.
//!
//! A `FinCat` is a category `C` given by finite lists of objects and
//! morphisms together with a total composition table: `compose[(g, f)] = g∘f`
//! is defined exactly when `tgt(f) = src(g)`.  Functors, natural
//! transformations, adjunctions, and brute-force (co)limits are all decided
//! pointwise over the tables.  Identifiers are opaque strings and every
//! enumeration is lexicographic, so all operations are deterministic.

use crate::report::{EngineError, Report, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A morphism record `id: src → tgt`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mor {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A finite category: explicit object/morphism lists and a total composition
/// table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCat {
    pub objects: Vec<String>,
    pub morphisms: Vec<Mor>,
    /// object id → identity morphism id
    pub identity: BTreeMap<String, String>,
    /// (g id, f id) → (g∘f) id, for tgt(f) = src(g)
    pub compose: BTreeMap<(String, String), String>,
}

impl FinCat {
    pub fn new(
        mut objects: Vec<String>,
        mut morphisms: Vec<Mor>,
        identity: BTreeMap<String, String>,
        compose: BTreeMap<(String, String), String>,
    ) -> Self {
        objects.sort();
        objects.dedup();
        morphisms.sort();
        morphisms.dedup();
        FinCat { objects, morphisms, identity, compose }
    }

    pub fn mor(&self, id: &str) -> Result<&Mor> {
        self.morphisms
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| EngineError::MalformedTable(format!("unknown morphism id {id}")))
    }

    pub fn has_object(&self, id: &str) -> bool {
        self.objects.iter().any(|o| o == id)
    }

    pub fn id_of(&self, obj: &str) -> Result<&str> {
        self.identity
            .get(obj)
            .map(|s| s.as_str())
            .ok_or_else(|| EngineError::MalformedTable(format!("no identity for object {obj}")))
    }

    pub fn is_identity(&self, mor_id: &str) -> bool {
        self.identity.values().any(|m| m == mor_id)
    }

    /// `g∘f` for composable `f` then `g`.
    pub fn comp(&self, g: &str, f: &str) -> Result<String> {
        self.compose
            .get(&(g.to_string(), f.to_string()))
            .cloned()
            .ok_or_else(|| EngineError::MalformedTable(format!("missing composite ({g}) ∘ ({f})")))
    }

    /// Compose a sequence applied left-to-right: `chain([f, g, h]) = h∘g∘f`.
    pub fn chain(&self, ms: &[&str]) -> Result<String> {
        let mut it = ms.iter();
        let first = it
            .next()
            .ok_or_else(|| EngineError::MalformedTable("empty composition chain".into()))?;
        let mut acc = first.to_string();
        for m in it {
            acc = self.comp(m, &acc)?;
        }
        Ok(acc)
    }

    /// All morphism ids `a → b`, in lexicographic order.
    pub fn hom(&self, a: &str, b: &str) -> Vec<String> {
        self.morphisms
            .iter()
            .filter(|m| m.src == a && m.tgt == b)
            .map(|m| m.id.clone())
            .collect()
    }

    /// The two-sided inverse of a morphism, if any.
    pub fn inverse_of(&self, m: &str) -> Option<String> {
        let mor = self.mor(m).ok()?;
        for n in self.hom(&mor.tgt, &mor.src) {
            let ok = self.comp(&n, m).ok()? == *self.id_of(&mor.src).ok()?
                && self.comp(m, &n).ok()? == *self.id_of(&mor.tgt).ok()?;
            if ok {
                return Some(n);
            }
        }
        None
    }

    pub fn is_iso(&self, m: &str) -> bool {
        self.inverse_of(m).is_some()
    }

    /// Exhaustive isomorphism table: (a, b) → sorted list of isos a → b.
    pub fn find_isos(&self) -> BTreeMap<(String, String), Vec<String>> {
        let mut out = BTreeMap::new();
        for a in &self.objects {
            for b in &self.objects {
                let isos: Vec<String> =
                    self.hom(a, b).into_iter().filter(|m| self.is_iso(m)).collect();
                out.insert((a.clone(), b.clone()), isos);
            }
        }
        out
    }

    /// Table transpose: same ids, sources and targets swapped.
    pub fn opposite(&self) -> FinCat {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Mor { id: m.id.clone(), src: m.tgt.clone(), tgt: m.src.clone() })
            .collect();
        let compose = self
            .compose
            .iter()
            .map(|((g, f), r)| ((f.clone(), g.clone()), r.clone()))
            .collect();
        FinCat::new(self.objects.clone(), morphisms, self.identity.clone(), compose)
    }

    /// Terminal objects: objects `t` with `|hom(x, t)| = 1` for every `x`.
    pub fn terminal_objects(&self) -> Vec<String> {
        self.objects
            .iter()
            .filter(|t| self.objects.iter().all(|x| self.hom(x, t).len() == 1))
            .cloned()
            .collect()
    }
}

/// Validates the category axioms, listing every violated instance.
pub fn check_category(c: &FinCat) -> Report {
    let mut rep = Report::ok();
    // Table well-formedness.
    for m in &c.morphisms {
        if !c.has_object(&m.src) || !c.has_object(&m.tgt) {
            rep.push("endpoints", format!("morphism {} has unknown endpoint", m.id));
        }
    }
    for (x, i) in &c.identity {
        match c.mor(i) {
            Ok(m) if m.src == *x && m.tgt == *x => {}
            Ok(_) => rep.push("identity-endpoints", format!("id_{x} = {i} is not an endomorphism of {x}")),
            Err(_) => rep.push("identity-endpoints", format!("id_{x} = {i} is not a morphism")),
        }
    }
    for x in &c.objects {
        if !c.identity.contains_key(x) {
            rep.push("identity-missing", format!("object {x} has no identity"));
        }
    }
    // Totality and endpoint discipline of composition.
    for f in &c.morphisms {
        for g in &c.morphisms {
            let defined = c.compose.contains_key(&(g.id.clone(), f.id.clone()));
            if (f.tgt == g.src) != defined {
                rep.push(
                    "composition-domain",
                    format!("compose({}, {}) defined = {defined}, composable = {}", g.id, f.id, f.tgt == g.src),
                );
                continue;
            }
            if defined {
                match c.comp(&g.id, &f.id).and_then(|r| c.mor(&r).cloned()) {
                    Ok(r) => {
                        if r.src != f.src || r.tgt != g.tgt {
                            rep.push(
                                "composition-endpoints",
                                format!("{} ∘ {} = {} has wrong endpoints", g.id, f.id, r.id),
                            );
                        }
                    }
                    Err(_) => rep.push(
                        "composition-endpoints",
                        format!("{} ∘ {} references an unknown morphism", g.id, f.id),
                    ),
                }
            }
        }
    }
    if !rep.is_ok() {
        return rep; // identity/associativity checks below assume a well-formed table
    }
    // Identity laws.
    for f in &c.morphisms {
        let idt = c.id_of(&f.tgt).unwrap().to_string();
        let ids = c.id_of(&f.src).unwrap().to_string();
        if c.comp(&idt, &f.id).unwrap() != f.id {
            rep.push("identity-law", format!("id_{} ∘ {} ≠ {}", f.tgt, f.id, f.id));
        }
        if c.comp(&f.id, &ids).unwrap() != f.id {
            rep.push("identity-law", format!("{} ∘ id_{} ≠ {}", f.id, f.src, f.id));
        }
    }
    // Associativity.
    for f in &c.morphisms {
        for g in &c.morphisms {
            if f.tgt != g.src {
                continue;
            }
            for h in &c.morphisms {
                if g.tgt != h.src {
                    continue;
                }
                let gf = c.comp(&g.id, &f.id).unwrap();
                let hg = c.comp(&h.id, &g.id).unwrap();
                if c.comp(&h.id, &gf).unwrap() != c.comp(&hg, &f.id).unwrap() {
                    rep.push("associativity", format!("h={} g={} f={}", h.id, g.id, f.id));
                }
            }
        }
    }
    rep
}

/// A functor between finite categories, given by its object/morphism tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub src: FinCat,
    pub tgt: FinCat,
    pub obj_map: BTreeMap<String, String>,
    pub mor_map: BTreeMap<String, String>,
}

impl FunctorData {
    pub fn identity(c: &FinCat) -> FunctorData {
        FunctorData {
            src: c.clone(),
            tgt: c.clone(),
            obj_map: c.objects.iter().map(|o| (o.clone(), o.clone())).collect(),
            mor_map: c.morphisms.iter().map(|m| (m.id.clone(), m.id.clone())).collect(),
        }
    }

    pub fn ap_obj(&self, o: &str) -> Result<&str> {
        self.obj_map
            .get(o)
            .map(|s| s.as_str())
            .ok_or_else(|| EngineError::MalformedTable(format!("functor undefined on object {o}")))
    }

    pub fn ap_mor(&self, m: &str) -> Result<&str> {
        self.mor_map
            .get(m)
            .map(|s| s.as_str())
            .ok_or_else(|| EngineError::MalformedTable(format!("functor undefined on morphism {m}")))
    }

    /// Pointwise functoriality check.
    pub fn check(&self) -> Report {
        let mut rep = Report::ok();
        for o in &self.src.objects {
            match self.ap_obj(o) {
                Ok(t) if self.tgt.has_object(t) => {}
                _ => rep.push("object-map", format!("image of {o} missing or unknown")),
            }
        }
        for m in &self.src.morphisms {
            let im = match self.ap_mor(&m.id).and_then(|i| self.tgt.mor(i).cloned()) {
                Ok(im) => im,
                Err(_) => {
                    rep.push("morphism-map", format!("image of {} missing or unknown", m.id));
                    continue;
                }
            };
            let (s, t) = match (self.ap_obj(&m.src), self.ap_obj(&m.tgt)) {
                (Ok(s), Ok(t)) => (s, t),
                _ => continue,
            };
            if im.src != s || im.tgt != t {
                rep.push("endpoints", format!("image of {} has wrong endpoints", m.id));
            }
        }
        if !rep.is_ok() {
            return rep;
        }
        for (x, i) in &self.src.identity {
            let fx = self.ap_obj(x).unwrap();
            if self.ap_mor(i).unwrap() != self.tgt.id_of(fx).unwrap() {
                rep.push("identities", format!("F(id_{x}) ≠ id_F({x})"));
            }
        }
        for f in &self.src.morphisms {
            for g in &self.src.morphisms {
                if f.tgt != g.src {
                    continue;
                }
                let gf = self.src.comp(&g.id, &f.id).unwrap();
                let lhs = self.ap_mor(&gf).unwrap().to_string();
                let rhs = self
                    .tgt
                    .comp(self.ap_mor(&g.id).unwrap(), self.ap_mor(&f.id).unwrap())
                    .unwrap();
                if lhs != rhs {
                    rep.push("composition", format!("F({} ∘ {}) ≠ F({}) ∘ F({})", g.id, f.id, g.id, f.id));
                }
            }
        }
        rep
    }

    /// Tables-only equality (same assignments; endpoint categories assumed shared).
    pub fn same_tables(&self, other: &FunctorData) -> bool {
        self.obj_map == other.obj_map && self.mor_map == other.mor_map
    }
}

/// `g ∘ f` for functors `f: A → B`, `g: B → C`.
pub fn compose_functors(f: &FunctorData, g: &FunctorData) -> Result<FunctorData> {
    let mut obj_map = BTreeMap::new();
    let mut mor_map = BTreeMap::new();
    for o in &f.src.objects {
        obj_map.insert(o.clone(), g.ap_obj(f.ap_obj(o)?)?.to_string());
    }
    for m in &f.src.morphisms {
        mor_map.insert(m.id.clone(), g.ap_mor(f.ap_mor(&m.id)?)?.to_string());
    }
    Ok(FunctorData { src: f.src.clone(), tgt: g.tgt.clone(), obj_map, mor_map })
}

/// A natural transformation between functors with common endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatTransData {
    pub src: FunctorData,
    pub tgt: FunctorData,
    /// object id (in the source category) → morphism id in the target category
    pub components: BTreeMap<String, String>,
}

impl NatTransData {
    pub fn identity(f: &FunctorData) -> NatTransData {
        let components = f
            .src
            .objects
            .iter()
            .map(|o| (o.clone(), f.tgt.id_of(f.ap_obj(o).unwrap()).unwrap().to_string()))
            .collect();
        NatTransData { src: f.clone(), tgt: f.clone(), components }
    }

    pub fn at(&self, o: &str) -> Result<&str> {
        self.components
            .get(o)
            .map(|s| s.as_str())
            .ok_or_else(|| EngineError::MalformedTable(format!("missing component at {o}")))
    }

    pub fn check(&self) -> Report {
        let mut rep = Report::ok();
        let cat = &self.src.tgt;
        for x in &self.src.src.objects {
            let c = match self.at(x).and_then(|c| cat.mor(c).cloned()) {
                Ok(c) => c,
                Err(_) => {
                    rep.push("components", format!("component at {x} missing or unknown"));
                    continue;
                }
            };
            let (fs, gs) = match (self.src.ap_obj(x), self.tgt.ap_obj(x)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            if c.src != fs || c.tgt != gs {
                rep.push("components", format!("component at {x} has wrong endpoints"));
            }
        }
        if !rep.is_ok() {
            return rep;
        }
        for f in &self.src.src.morphisms {
            // α_Y ∘ F(f) = G(f) ∘ α_X  for f: X → Y
            let lhs = cat.comp(self.at(&f.tgt).unwrap(), self.src.ap_mor(&f.id).unwrap());
            let rhs = cat.comp(self.tgt.ap_mor(&f.id).unwrap(), self.at(&f.src).unwrap());
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                (l, r) => rep.push("naturality", format!("at {}: {:?} ≠ {:?}", f.id, l, r)),
            }
        }
        rep
    }

    pub fn is_invertible(&self) -> bool {
        self.src
            .src
            .objects
            .iter()
            .all(|x| self.at(x).map(|c| self.src.tgt.is_iso(c)).unwrap_or(false))
    }

    /// Componentwise inverse (each component must be an isomorphism).
    pub fn invert(&self) -> Result<NatTransData> {
        let cat = &self.src.tgt;
        let mut components = BTreeMap::new();
        for x in &self.src.src.objects {
            let c = self.at(x)?;
            let inv = cat
                .inverse_of(c)
                .ok_or_else(|| EngineError::Invalid(format!("component {c} at {x} is not invertible")))?;
            components.insert(x.clone(), inv);
        }
        Ok(NatTransData { src: self.tgt.clone(), tgt: self.src.clone(), components })
    }
}

/// Vertical composite `β ∘ α` for `α: F ⇒ G`, `β: G ⇒ H`.
pub fn vcomp(alpha: &NatTransData, beta: &NatTransData) -> Result<NatTransData> {
    let cat = &alpha.src.tgt;
    let mut components = BTreeMap::new();
    for x in &alpha.src.src.objects {
        components.insert(x.clone(), cat.comp(beta.at(x)?, alpha.at(x)?)?);
    }
    Ok(NatTransData { src: alpha.src.clone(), tgt: beta.tgt.clone(), components })
}

/// Left whiskering `K ∗ α` for `α: F ⇒ G: A → B`, `K: B → C`.
pub fn whisker_left(k: &FunctorData, alpha: &NatTransData) -> Result<NatTransData> {
    let mut components = BTreeMap::new();
    for x in &alpha.src.src.objects {
        components.insert(x.clone(), k.ap_mor(alpha.at(x)?)?.to_string());
    }
    Ok(NatTransData {
        src: compose_functors(&alpha.src, k)?,
        tgt: compose_functors(&alpha.tgt, k)?,
        components,
    })
}

/// Right whiskering `α ∗ H` for `α: F ⇒ G: A → B`, `H: Z → A`.
pub fn whisker_right(alpha: &NatTransData, h: &FunctorData) -> Result<NatTransData> {
    let mut components = BTreeMap::new();
    for z in &h.src.objects {
        components.insert(z.clone(), alpha.at(h.ap_obj(z)?)?.to_string());
    }
    Ok(NatTransData {
        src: compose_functors(h, &alpha.src)?,
        tgt: compose_functors(h, &alpha.tgt)?,
        components,
    })
}

/// An adjunction `left ⊣ right` presented by unit and counit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionData {
    /// `L: C → D`
    pub left: FunctorData,
    /// `R: D → C`
    pub right: FunctorData,
    /// `η: Id_C ⇒ R∘L`
    pub unit: NatTransData,
    /// `ε: L∘R ⇒ Id_D`
    pub counit: NatTransData,
}

/// Verifies both triangle identities componentwise.
pub fn check_adjunction(a: &AdjunctionData) -> Report {
    let mut rep = Report::ok();
    rep.merge(a.left.check().scoped("left"));
    rep.merge(a.right.check().scoped("right"));
    rep.merge(a.unit.check().scoped("unit"));
    rep.merge(a.counit.check().scoped("counit"));
    if !rep.is_ok() {
        return rep;
    }
    let c = &a.left.src;
    let d = &a.left.tgt;
    // ε_{LX} ∘ L(η_X) = id_{LX}
    for x in &c.objects {
        let lx = a.left.ap_obj(x).unwrap();
        let lhs = a
            .left
            .ap_mor(a.unit.at(x).unwrap())
            .and_then(|l_eta| d.comp(a.counit.at(lx).unwrap(), l_eta));
        match lhs {
            Ok(l) if l == d.id_of(lx).unwrap() => {}
            other => rep.push("triangle-left", format!("at {x}: {:?}", other)),
        }
    }
    // R(ε_Y) ∘ η_{RY} = id_{RY}
    for y in &d.objects {
        let ry = a.right.ap_obj(y).unwrap();
        let lhs = a
            .right
            .ap_mor(a.counit.at(y).unwrap())
            .and_then(|r_eps| c.comp(r_eps, a.unit.at(ry).unwrap()));
        match lhs {
            Ok(l) if l == c.id_of(ry).unwrap() => {}
            other => rep.push("triangle-right", format!("at {y}: {:?}", other)),
        }
    }
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Limit,
    Colimit,
}

/// A universal cone found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeResult {
    pub apex: String,
    /// shape object → leg morphism id (apex → d(i) for limits, d(i) → apex for colimits)
    pub legs: BTreeMap<String, String>,
    /// competing cone encoding → unique mediating morphism id
    pub mediators: BTreeMap<String, String>,
}

fn cone_key(apex: &str, legs: &BTreeMap<String, String>) -> String {
    let parts: Vec<String> = legs.iter().map(|(i, l)| format!("{i}:{l}")).collect();
    format!("{apex};{}", parts.join(","))
}

fn all_cones(c: &FinCat, d: &FunctorData) -> Result<Vec<(String, BTreeMap<String, String>)>> {
    let shape = &d.src;
    let mut cones = Vec::new();
    for apex in &c.objects {
        // candidate legs per shape object
        let mut slots: Vec<(String, Vec<String>)> = Vec::new();
        for i in &shape.objects {
            slots.push((i.clone(), c.hom(apex, d.ap_obj(i)?)));
        }
        let mut stack: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for (i, cands) in &slots {
            let mut next = Vec::new();
            for partial in &stack {
                for cand in cands {
                    let mut p = partial.clone();
                    p.insert(i.clone(), cand.clone());
                    next.push(p);
                }
            }
            stack = next;
        }
        for legs in stack {
            let mut ok = true;
            for u in &shape.morphisms {
                // d(u) ∘ leg_src = leg_tgt
                let lhs = c.comp(d.ap_mor(&u.id)?, &legs[&u.src])?;
                if lhs != legs[&u.tgt] {
                    ok = false;
                    break;
                }
            }
            if ok {
                cones.push((apex.clone(), legs));
            }
        }
    }
    Ok(cones)
}

/// Brute-force (co)limit of a diagram `d: shape → c`.
///
/// Returns the first universal cone in lexicographic enumeration order, with
/// a uniqueness witness (the unique mediator) for every competing cone.
pub fn compute_limit(c: &FinCat, d: &FunctorData, orientation: Orientation) -> Result<ConeResult> {
    match orientation {
        Orientation::Limit => compute_limit_only(c, d),
        Orientation::Colimit => {
            let cop = c.opposite();
            let dop = FunctorData {
                src: d.src.opposite(),
                tgt: cop.clone(),
                obj_map: d.obj_map.clone(),
                mor_map: d.mor_map.clone(),
            };
            compute_limit_only(&cop, &dop)
        }
    }
}

fn compute_limit_only(c: &FinCat, d: &FunctorData) -> Result<ConeResult> {
    let cones = all_cones(c, d)?;
    'cand: for (apex, legs) in &cones {
        let mut mediators = BTreeMap::new();
        for (capex, clegs) in &cones {
            let mut found: Vec<String> = Vec::new();
            for m in c.hom(capex, apex) {
                if legs.iter().all(|(i, l)| {
                    c.comp(l, &m).map(|r| r == clegs[i]).unwrap_or(false)
                }) {
                    found.push(m);
                }
            }
            if found.len() != 1 {
                continue 'cand;
            }
            mediators.insert(cone_key(capex, clegs), found.remove(0));
        }
        return Ok(ConeResult { apex: apex.clone(), legs: legs.clone(), mediators });
    }
    Err(EngineError::NoLimit(format!("no universal cone among {} cones", cones.len())))
}

/// Upgrades a fully faithful, essentially surjective functor to an adjoint
/// equivalence: the quasi-inverse picks, for each target object, the
/// lexicographically least preimage-with-witness-isomorphism; unit and
/// counit come from the witnesses.
pub fn adjoint_equivalence_from_functor(f: &FunctorData) -> Result<AdjunctionData> {
    let rep = f.check();
    if !rep.is_ok() {
        return Err(EngineError::Invalid(format!("not a functor: {:?}", rep.violations)));
    }
    let c = &f.src;
    let d = &f.tgt;
    // Fully faithful: hom(a, b) → hom(Fa, Fb) bijective for all a, b.
    for a in &c.objects {
        for b in &c.objects {
            let fa = f.ap_obj(a)?;
            let fb = f.ap_obj(b)?;
            let mut images: Vec<String> =
                c.hom(a, b).iter().map(|m| f.ap_mor(m).unwrap().to_string()).collect();
            images.sort();
            images.dedup();
            let target = d.hom(fa, fb);
            if images.len() != c.hom(a, b).len() || images != target {
                return Err(EngineError::Invalid(format!("not fully faithful at ({a}, {b})")));
            }
        }
    }
    // Essential surjectivity with chosen witnesses e_y: F(g(y)) → y.
    let mut quasi_obj: BTreeMap<String, String> = BTreeMap::new();
    let mut witness: BTreeMap<String, String> = BTreeMap::new();
    for y in &d.objects {
        let mut found = None;
        'search: for a in &c.objects {
            for e in d.hom(f.ap_obj(a)?, y) {
                if d.is_iso(&e) {
                    found = Some((a.clone(), e));
                    break 'search;
                }
            }
        }
        let (a, e) =
            found.ok_or_else(|| EngineError::Invalid(format!("not essentially surjective at {y}")))?;
        quasi_obj.insert(y.clone(), a);
        witness.insert(y.clone(), e);
    }
    // Quasi-inverse on morphisms: g(m) = F⁻¹(e_{y'}⁻¹ ∘ m ∘ e_y).
    let preimage = |a: &str, b: &str, img: &str| -> Result<String> {
        c.hom(a, b)
            .into_iter()
            .find(|m| f.ap_mor(m).map(|i| i == img).unwrap_or(false))
            .ok_or_else(|| EngineError::Invalid(format!("no preimage of {img}")))
    };
    let mut quasi_mor: BTreeMap<String, String> = BTreeMap::new();
    for m in &d.morphisms {
        let ey = &witness[&m.src];
        let eyp_inv = d
            .inverse_of(&witness[&m.tgt])
            .ok_or_else(|| EngineError::Invalid("witness not invertible".into()))?;
        let conj = d.chain(&[ey, &m.id, &eyp_inv])?;
        quasi_mor.insert(
            m.id.clone(),
            preimage(&quasi_obj[&m.src], &quasi_obj[&m.tgt], &conj)?,
        );
    }
    let g = FunctorData { src: d.clone(), tgt: c.clone(), obj_map: quasi_obj, mor_map: quasi_mor };
    let grep = g.check();
    if !grep.is_ok() {
        return Err(EngineError::Invalid(format!("quasi-inverse not functorial: {:?}", grep.violations)));
    }
    // Unit η_a = F⁻¹(e_{Fa}⁻¹): a → g(F(a)); counit ε_y = e_y: F(g(y)) → y.
    let gf = compose_functors(f, &g)?;
    let fg = compose_functors(&g, f)?;
    let mut unit_components = BTreeMap::new();
    for a in &c.objects {
        let fa = f.ap_obj(a)?;
        let e_inv = d
            .inverse_of(&witness[fa])
            .ok_or_else(|| EngineError::Invalid("witness not invertible".into()))?;
        unit_components.insert(a.clone(), preimage(a, g.ap_obj(fa)?, &e_inv)?);
    }
    let unit = NatTransData {
        src: FunctorData::identity(c),
        tgt: gf,
        components: unit_components,
    };
    let counit = NatTransData {
        src: fg,
        tgt: FunctorData::identity(d),
        components: d.objects.iter().map(|y| (y.clone(), witness[y].clone())).collect(),
    };
    Ok(AdjunctionData { left: f.clone(), right: g, unit, counit })
}
