//! Finite-group descent: G-sets and free resolutions, pre-equivariant
//! pseudofunctors presented procedurally over orbit quotients, the
//! forgetful/equivariantification pair, the equivariance isomorphism Θ with
//! its GIT cocycle, change of groups along homomorphisms with compositor
//! coherence, and the induction/quotient equivalences.
//!
//! Conventions.  A resolution category over a G-space `X` has objects `Γ×X`
//! for `Γ` drawn from an explicit finite generating list of free G-sets and
//! morphisms `f×id_X` for supplied equivariant maps `f: Γ → Γ'`, closed under
//! composition.  The quotient functor sends `Γ×X ↦ G\(Γ×X)` with
//! lexicographically least orbit representatives.  Fibres are powers of a
//! single core category (an explicit table or exact-rational matrices)
//! indexed by orbit classes; reindexing is strict precomposition and
//! compositors are scalar, driven by a twist `c` with `φ_{f,g} =
//! (c(g∘f)/(c(f)c(g)))·id`.  The auxiliary bases `G×X` and `G×G×X` carry the
//! conjugation–translation action `h·(g,x) = (hgh⁻¹, hx)`, under which the
//! action map, projections, and all three face maps are equivariant.

use crate::fincat::{check_category, FinCat, Mor};
use crate::matq::{Mat, Q};
use crate::report::{EngineError, Report, Result};
use num::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinGroup {
    pub elements: Vec<String>,
    pub mul: BTreeMap<(String, String), String>,
    pub identity: String,
}

impl FinGroup {
    pub fn new(
        mut elements: Vec<String>,
        mul: BTreeMap<(String, String), String>,
        identity: String,
    ) -> Result<FinGroup> {
        elements.sort();
        elements.dedup();
        let g = FinGroup { elements, mul, identity };
        let rep = g.check();
        if !rep.is_ok() {
            return Err(EngineError::Invalid(format!("group axioms fail: {:?}", rep.violations)));
        }
        Ok(g)
    }

    pub fn check(&self) -> Report {
        let mut rep = Report::ok();
        if !self.elements.contains(&self.identity) {
            rep.push("identity", "identity not an element");
            return rep;
        }
        for a in &self.elements {
            for b in &self.elements {
                match self.mul.get(&(a.clone(), b.clone())) {
                    Some(c) if self.elements.contains(c) => {}
                    _ => {
                        rep.push("closure", format!("{a}·{b} missing or unknown"));
                        return rep;
                    }
                }
            }
        }
        for a in &self.elements {
            if self.op(&self.identity, a) != *a || self.op(a, &self.identity) != *a {
                rep.push("unit", a.clone());
            }
            if !self.elements.iter().any(|b| self.op(a, b) == self.identity) {
                rep.push("inverses", a.clone());
            }
        }
        for a in &self.elements {
            for b in &self.elements {
                for c in &self.elements {
                    if self.op(&self.op(a, b), c) != self.op(a, &self.op(b, c)) {
                        rep.push("associativity", format!("{a},{b},{c}"));
                    }
                }
            }
        }
        rep
    }

    pub fn op(&self, a: &str, b: &str) -> String {
        self.mul[&(a.to_string(), b.to_string())].clone()
    }

    pub fn inv(&self, a: &str) -> String {
        self.elements
            .iter()
            .find(|b| self.op(a, b) == self.identity)
            .expect("group has inverses")
            .clone()
    }

    /// The cyclic group Z/n with elements "0", …, "n-1".
    pub fn z_mod(n: usize) -> FinGroup {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut mul = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                mul.insert((i.to_string(), j.to_string()), ((i + j) % n).to_string());
            }
        }
        FinGroup { elements, mul, identity: "0".into() }
    }

    pub fn trivial() -> FinGroup {
        FinGroup::z_mod(1)
    }
}

/// A group homomorphism given by its value table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub src: FinGroup,
    pub tgt: FinGroup,
    pub map: BTreeMap<String, String>,
}

impl GroupHom {
    pub fn new(src: FinGroup, tgt: FinGroup, map: BTreeMap<String, String>) -> Result<GroupHom> {
        let h = GroupHom { src, tgt, map };
        for a in &h.src.elements {
            let fa = h
                .map
                .get(a)
                .ok_or_else(|| EngineError::MalformedTable(format!("hom undefined at {a}")))?;
            if !h.tgt.elements.contains(fa) {
                return Err(EngineError::MalformedTable(format!("hom value {fa} unknown")));
            }
        }
        for a in &h.src.elements {
            for b in &h.src.elements {
                if h.ap(&h.src.op(a, b)) != h.tgt.op(&h.ap(a), &h.ap(b)) {
                    return Err(EngineError::Invalid(format!(
                        "not a homomorphism at ({a},{b})"
                    )));
                }
            }
        }
        Ok(h)
    }

    pub fn ap(&self, a: &str) -> String {
        self.map[a].clone()
    }

    pub fn identity(g: &FinGroup) -> GroupHom {
        GroupHom {
            src: g.clone(),
            tgt: g.clone(),
            map: g.elements.iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    /// The unique homomorphism from the trivial group.
    pub fn from_trivial(g: &FinGroup) -> GroupHom {
        GroupHom {
            src: FinGroup::trivial(),
            tgt: g.clone(),
            map: [("0".to_string(), g.identity.clone())].into_iter().collect(),
        }
    }
}

/// `ψ ∘ φ` for composable homomorphisms.
pub fn compose_homs(psi: &GroupHom, phi: &GroupHom) -> Result<GroupHom> {
    if phi.tgt != psi.src {
        return Err(EngineError::ShapeMismatch("homomorphism composition".into()));
    }
    Ok(GroupHom {
        src: phi.src.clone(),
        tgt: psi.tgt.clone(),
        map: phi.src.elements.iter().map(|a| (a.clone(), psi.ap(&phi.ap(a)))).collect(),
    })
}

/// The quotient `G/H` by a normal subgroup, with the projection; cosets are
/// named by their lexicographically least member.
pub fn quotient_group(g: &FinGroup, h_elems: &[String]) -> Result<(FinGroup, GroupHom)> {
    let h: BTreeSet<String> = h_elems.iter().cloned().collect();
    if !h.contains(&g.identity)
        || h.iter().any(|a| !g.elements.contains(a))
        || h.iter().any(|a| h.iter().any(|b| !h.contains(&g.op(a, b))))
    {
        return Err(EngineError::Invalid("not a subgroup".into()));
    }
    for x in &g.elements {
        for a in h.iter() {
            if !h.contains(&g.op(&g.op(x, a), &g.inv(x))) {
                return Err(EngineError::NotNormal);
            }
        }
    }
    let coset = |x: &str| -> String {
        h.iter().map(|a| g.op(x, a)).min().expect("nonempty subgroup")
    };
    let mut elements: Vec<String> = g.elements.iter().map(|x| coset(x)).collect();
    elements.sort();
    elements.dedup();
    let mut mul = BTreeMap::new();
    for a in &elements {
        for b in &elements {
            mul.insert((a.clone(), b.clone()), coset(&g.op(a, b)));
        }
    }
    let q = FinGroup { elements, mul, identity: coset(&g.identity) };
    let pi = GroupHom {
        src: g.clone(),
        tgt: q.clone(),
        map: g.elements.iter().map(|x| (x.clone(), coset(x))).collect(),
    };
    Ok((q, pi))
}

// ---------------------------------------------------------------------------
// G-sets
// ---------------------------------------------------------------------------

/// Canonical pair encoding used for elements of product sets.
pub fn pair_id(a: &str, b: &str) -> String {
    serde_json::to_string(&[a, b]).expect("serializable")
}

pub fn unpair(s: &str) -> Result<(String, String)> {
    let v: Vec<String> = serde_json::from_str(s)
        .map_err(|_| EngineError::SchemaError(format!("not a pair: {s}")))?;
    if v.len() != 2 {
        return Err(EngineError::SchemaError(format!("not a pair: {s}")));
    }
    Ok((v[0].clone(), v[1].clone()))
}

/// A finite G-set: carrier plus action table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSet {
    pub name: String,
    pub elems: Vec<String>,
    /// (g, x) → g·x
    pub action: BTreeMap<(String, String), String>,
}

impl GSet {
    pub fn act(&self, g: &str, x: &str) -> String {
        self.action[&(g.to_string(), x.to_string())].clone()
    }

    pub fn check(&self, group: &FinGroup) -> Report {
        let mut rep = Report::ok();
        for g in &group.elements {
            for x in &self.elems {
                match self.action.get(&(g.clone(), x.clone())) {
                    Some(y) if self.elems.contains(y) => {}
                    _ => {
                        rep.push("action-total", format!("{g}·{x} missing or unknown"));
                        return rep;
                    }
                }
            }
        }
        for x in &self.elems {
            if self.act(&group.identity, x) != *x {
                rep.push("action-unit", x.clone());
            }
        }
        for g in &group.elements {
            for h in &group.elements {
                for x in &self.elems {
                    if self.act(g, &self.act(h, x)) != self.act(&group.op(g, h), x) {
                        rep.push("action-assoc", format!("{g},{h},{x}"));
                    }
                }
            }
        }
        rep
    }

    /// Free: `g·x = x` implies `g = e`.
    pub fn is_free(&self, group: &FinGroup) -> bool {
        group
            .elements
            .iter()
            .filter(|g| **g != group.identity)
            .all(|g| self.elems.iter().all(|x| self.act(g, x) != *x))
    }
}

/// Carrier-and-action equality, ignoring names.
pub fn same_gset(a: &GSet, b: &GSet) -> bool {
    a.elems == b.elems && a.action == b.action
}

/// G acting on itself by left translation.
pub fn regular_gset(group: &FinGroup) -> GSet {
    let mut action = BTreeMap::new();
    for g in &group.elements {
        for x in &group.elements {
            action.insert((g.clone(), x.clone()), group.op(g, x));
        }
    }
    GSet { name: "reg".into(), elems: group.elements.clone(), action }
}

/// An n-point set with trivial action.
pub fn trivial_gset(group: &FinGroup, n: usize) -> GSet {
    let elems: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut action = BTreeMap::new();
    for g in &group.elements {
        for x in &elems {
            action.insert((g.clone(), x.clone()), x.clone());
        }
    }
    GSet { name: format!("triv{n}"), elems, action }
}

/// Product with the diagonal action.
pub fn product_gset(name: &str, group: &FinGroup, a: &GSet, b: &GSet) -> GSet {
    let mut elems = Vec::new();
    for x in &a.elems {
        for y in &b.elems {
            elems.push(pair_id(x, y));
        }
    }
    elems.sort();
    let mut action = BTreeMap::new();
    for g in &group.elements {
        for x in &a.elems {
            for y in &b.elems {
                action.insert(
                    (g.clone(), pair_id(x, y)),
                    pair_id(&a.act(g, x), &b.act(g, y)),
                );
            }
        }
    }
    GSet { name: name.into(), elems, action }
}

/// `G×X` with the conjugation–translation action `h·(g,x) = (hgh⁻¹, hx)`.
pub fn conj_translation_gset(name: &str, group: &FinGroup, x: &GSet) -> GSet {
    let mut elems = Vec::new();
    for g in &group.elements {
        for p in &x.elems {
            elems.push(pair_id(g, p));
        }
    }
    elems.sort();
    let mut action = BTreeMap::new();
    for h in &group.elements {
        for g in &group.elements {
            for p in &x.elems {
                let cg = group.op(&group.op(h, g), &group.inv(h));
                action.insert((h.clone(), pair_id(g, p)), pair_id(&cg, &x.act(h, p)));
            }
        }
    }
    GSet { name: name.into(), elems, action }
}

/// Restriction of an H-set to a G-set along `φ: G → H`.
pub fn restrict_gset(phi: &GroupHom, x: &GSet) -> GSet {
    let mut action = BTreeMap::new();
    for g in &phi.src.elements {
        for p in &x.elems {
            action.insert((g.clone(), p.clone()), x.act(&phi.ap(g), p));
        }
    }
    GSet { name: x.name.clone(), elems: x.elems.clone(), action }
}

// ---------------------------------------------------------------------------
// Plain set maps and orbit quotients
// ---------------------------------------------------------------------------

/// A total map of finite sets (carriers only).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetMap {
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl SetMap {
    pub fn new(src: Vec<String>, tgt: Vec<String>, map: BTreeMap<String, String>) -> Result<SetMap> {
        for x in &src {
            match map.get(x) {
                Some(y) if tgt.contains(y) => {}
                _ => {
                    return Err(EngineError::MalformedTable(format!(
                        "set map undefined or out of range at {x}"
                    )))
                }
            }
        }
        if map.len() != src.len() {
            return Err(EngineError::MalformedTable("set map has extra entries".into()));
        }
        Ok(SetMap { src, tgt, map })
    }

    pub fn identity(set: &[String]) -> SetMap {
        SetMap {
            src: set.to_vec(),
            tgt: set.to_vec(),
            map: set.iter().map(|x| (x.clone(), x.clone())).collect(),
        }
    }

    pub fn ap(&self, x: &str) -> String {
        self.map[x].clone()
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.map.iter().all(|(k, v)| k == v)
    }

    pub fn is_bijection(&self) -> bool {
        let image: BTreeSet<&String> = self.map.values().collect();
        self.src.len() == self.tgt.len() && image.len() == self.tgt.len()
    }

    pub fn inverse(&self) -> Result<SetMap> {
        if !self.is_bijection() {
            return Err(EngineError::NotInjective(format!("{} → {}", self.src.len(), self.tgt.len())));
        }
        SetMap::new(
            self.tgt.clone(),
            self.src.clone(),
            self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        )
    }

    /// Stable encoding of the value table, used as a twist key.
    pub fn enc(&self) -> String {
        serde_json::to_string(&self.map).expect("serializable")
    }
}

/// `g ∘ f`.
pub fn setmap_compose(g: &SetMap, f: &SetMap) -> Result<SetMap> {
    if f.tgt != g.src {
        return Err(EngineError::ShapeMismatch("set map composition".into()));
    }
    SetMap::new(
        f.src.clone(),
        g.tgt.clone(),
        f.src.iter().map(|x| (x.clone(), g.ap(&f.ap(x)))).collect(),
    )
}

/// Equivariance of a carrier map between G-sets under a common group.
pub fn check_equivariant(group: &FinGroup, src: &GSet, tgt: &GSet, m: &SetMap) -> Report {
    let mut rep = Report::ok();
    if m.src != src.elems || m.tgt != tgt.elems {
        rep.push("carriers", "set map carriers do not match the G-sets");
        return rep;
    }
    for g in &group.elements {
        for x in &src.elems {
            if m.ap(&src.act(g, x)) != tgt.act(g, &m.ap(x)) {
                rep.push("equivariance", format!("g={g}, x={x}"));
            }
        }
    }
    rep
}

/// The orbit quotient `G\S` with lexicographically least representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub classes: Vec<String>,
    pub class_of: BTreeMap<String, String>,
}

pub fn quotient(group: &FinGroup, s: &GSet) -> Quotient {
    let mut class_of = BTreeMap::new();
    for x in &s.elems {
        let rep = group
            .elements
            .iter()
            .map(|g| s.act(g, x))
            .min()
            .expect("nonempty group");
        class_of.insert(x.clone(), rep);
    }
    let mut classes: Vec<String> = class_of.values().cloned().collect();
    classes.sort();
    classes.dedup();
    Quotient { classes, class_of }
}

impl Quotient {
    pub fn class(&self, x: &str) -> Result<String> {
        self.class_of
            .get(x)
            .cloned()
            .ok_or_else(|| EngineError::UnknownPoint(x.to_string()))
    }
}

/// The map on quotients induced by an element map, verified well defined.
pub fn induced_on_quotients(
    qs: &Quotient,
    qt: &Quotient,
    elem_map: impl Fn(&str) -> Result<String>,
) -> Result<SetMap> {
    let mut map = BTreeMap::new();
    for (x, c) in &qs.class_of {
        let y = qt.class(&elem_map(x)?)?;
        match map.get(c) {
            None => {
                map.insert(c.clone(), y);
            }
            Some(prev) if *prev == y => {}
            Some(prev) => {
                return Err(EngineError::Invalid(format!(
                    "induced quotient map ill defined at class {c}: {prev} ≠ {y}"
                )))
            }
        }
    }
    SetMap::new(qs.classes.clone(), qt.classes.clone(), map)
}

// ---------------------------------------------------------------------------
// Core fibres: a single category powered over orbit classes
// ---------------------------------------------------------------------------

/// The core category whose powers form the fibres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreCat {
    /// An explicit finite category; requires a strict twist.
    Table(FinCat),
    /// Exact-rational matrices on dimensions `0..=cap`.
    MatQ { cap: usize },
}

/// A core object: a labelled table object or a matrix dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CObj {
    Lab(String),
    Dim(usize),
}

/// A core morphism: a labelled table morphism or an exact matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CMor {
    Lab(String),
    Mat(Mat),
}

/// Scalar twist driving the compositors `φ_{f,g} = (c(g∘f)/(c(f)c(g)))·id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Twist {
    Strict,
    /// Deterministic nontrivial values from a seed; identities map to 1.
    Seeded(u64),
    /// Explicit values keyed by `SetMap::enc`; missing keys default to 1.
    Explicit(BTreeMap<String, String>),
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// The base pseudofunctor on finite sets: strict power-reindexing of a core
/// category, twisted by scalar compositors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointBase {
    pub core: CoreCat,
    pub twist: Twist,
}

impl PointBase {
    pub fn new(core: CoreCat, twist: Twist) -> Result<PointBase> {
        if matches!(core, CoreCat::Table(_)) && !matches!(twist, Twist::Strict) {
            return Err(EngineError::Invalid(
                "table cores admit no scalar action; twist must be strict".into(),
            ));
        }
        if let CoreCat::Table(c) = &core {
            let rep = check_category(c);
            if !rep.is_ok() {
                return Err(EngineError::MalformedTable(format!(
                    "core category invalid: {:?}",
                    rep.violations
                )));
            }
        }
        Ok(PointBase { core, twist })
    }

    /// The twist value `c(f)`, with `c(id) = 1` always.
    pub fn cval(&self, f: &SetMap) -> Q {
        if f.is_identity() {
            return Q::one();
        }
        match &self.twist {
            Twist::Strict => Q::one(),
            Twist::Explicit(m) => m
                .get(&f.enc())
                .map(|s| crate::matq::parse_q(s).expect("valid explicit twist"))
                .unwrap_or_else(Q::one),
            Twist::Seeded(seed) => {
                let mut bytes = seed.to_le_bytes().to_vec();
                bytes.extend_from_slice(f.enc().as_bytes());
                const VALS: [&str; 6] = ["1", "-1", "1/2", "2", "3", "1/3"];
                crate::matq::parse_q(VALS[(fnv1a(&bytes) % 6) as usize]).expect("valid")
            }
        }
    }

    /// The compositor scalar `λ(f,g) = c(g∘f)/(c(f)c(g))` for `f` then `g`.
    pub fn lambda(&self, f: &SetMap, g: &SetMap) -> Result<Q> {
        let gf = setmap_compose(g, f)?;
        Ok(self.cval(&gf) / (self.cval(f) * self.cval(g)))
    }

    pub fn cm_src(&self, m: &CMor) -> Result<CObj> {
        match (&self.core, m) {
            (CoreCat::Table(c), CMor::Lab(l)) => Ok(CObj::Lab(c.mor(l)?.src.clone())),
            (CoreCat::MatQ { .. }, CMor::Mat(mat)) => Ok(CObj::Dim(mat.cols)),
            _ => Err(EngineError::ShapeMismatch("core morphism kind".into())),
        }
    }

    pub fn cm_tgt(&self, m: &CMor) -> Result<CObj> {
        match (&self.core, m) {
            (CoreCat::Table(c), CMor::Lab(l)) => Ok(CObj::Lab(c.mor(l)?.tgt.clone())),
            (CoreCat::MatQ { .. }, CMor::Mat(mat)) => Ok(CObj::Dim(mat.rows)),
            _ => Err(EngineError::ShapeMismatch("core morphism kind".into())),
        }
    }

    pub fn cm_id(&self, a: &CObj) -> Result<CMor> {
        match (&self.core, a) {
            (CoreCat::Table(c), CObj::Lab(l)) => Ok(CMor::Lab(c.id_of(l)?.to_string())),
            (CoreCat::MatQ { .. }, CObj::Dim(n)) => Ok(CMor::Mat(Mat::identity(*n))),
            _ => Err(EngineError::ShapeMismatch("core object kind".into())),
        }
    }

    /// `g ∘ f` in the core.
    pub fn cm_comp(&self, g: &CMor, f: &CMor) -> Result<CMor> {
        match (&self.core, g, f) {
            (CoreCat::Table(c), CMor::Lab(gl), CMor::Lab(fl)) => Ok(CMor::Lab(c.comp(gl, fl)?)),
            (CoreCat::MatQ { .. }, CMor::Mat(gm), CMor::Mat(fm)) => Ok(CMor::Mat(gm.mul(fm)?)),
            _ => Err(EngineError::ShapeMismatch("core morphism kind".into())),
        }
    }

    pub fn cm_is_iso(&self, m: &CMor) -> bool {
        match (&self.core, m) {
            (CoreCat::Table(c), CMor::Lab(l)) => c.is_iso(l),
            (CoreCat::MatQ { .. }, CMor::Mat(mat)) => mat.rows == mat.cols && mat.is_invertible(),
            _ => false,
        }
    }

    pub fn cm_inv(&self, m: &CMor) -> Result<CMor> {
        match (&self.core, m) {
            (CoreCat::Table(c), CMor::Lab(l)) => c
                .inverse_of(l)
                .map(CMor::Lab)
                .ok_or_else(|| EngineError::Invalid(format!("{l} not invertible"))),
            (CoreCat::MatQ { .. }, CMor::Mat(mat)) => mat
                .inverse()
                .map(CMor::Mat)
                .ok_or_else(|| EngineError::Invalid("singular matrix".into())),
            _ => Err(EngineError::ShapeMismatch("core morphism kind".into())),
        }
    }

    /// Scalar action; on table cores only the scalar 1 acts.
    pub fn cm_scale(&self, q: &Q, m: &CMor) -> Result<CMor> {
        if q.is_one() {
            return Ok(m.clone());
        }
        match m {
            CMor::Mat(mat) => Ok(CMor::Mat(mat.scale(q))),
            CMor::Lab(_) => Err(EngineError::Invalid(
                "nontrivial scalar on a table core".into(),
            )),
        }
    }
}

/// A fibre object: one core object per orbit class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamObj {
    pub vals: BTreeMap<String, CObj>,
}

/// A fibre morphism: one core morphism per orbit class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamMor {
    pub vals: BTreeMap<String, CMor>,
}

impl PointBase {
    pub fn fam_id(&self, a: &FamObj) -> Result<FamMor> {
        let mut vals = BTreeMap::new();
        for (k, o) in &a.vals {
            vals.insert(k.clone(), self.cm_id(o)?);
        }
        Ok(FamMor { vals })
    }

    /// Componentwise `g ∘ f` over a shared index set.
    pub fn fam_comp(&self, g: &FamMor, f: &FamMor) -> Result<FamMor> {
        if g.vals.len() != f.vals.len() || g.vals.keys().ne(f.vals.keys()) {
            return Err(EngineError::ShapeMismatch("family index sets differ".into()));
        }
        let mut vals = BTreeMap::new();
        for (k, gm) in &g.vals {
            vals.insert(k.clone(), self.cm_comp(gm, &f.vals[k])?);
        }
        Ok(FamMor { vals })
    }

    pub fn fam_is_iso(&self, f: &FamMor) -> bool {
        f.vals.values().all(|m| self.cm_is_iso(m))
    }

    pub fn fam_inv(&self, f: &FamMor) -> Result<FamMor> {
        let mut vals = BTreeMap::new();
        for (k, m) in &f.vals {
            vals.insert(k.clone(), self.cm_inv(m)?);
        }
        Ok(FamMor { vals })
    }

    pub fn fam_scale(&self, q: &Q, f: &FamMor) -> Result<FamMor> {
        let mut vals = BTreeMap::new();
        for (k, m) in &f.vals {
            vals.insert(k.clone(), self.cm_scale(q, m)?);
        }
        Ok(FamMor { vals })
    }

    /// Strict reindexing of objects along `f: S → T`: `(f*A)(s) = A(f s)`.
    pub fn pull_obj(&self, f: &SetMap, a: &FamObj) -> Result<FamObj> {
        let mut vals = BTreeMap::new();
        for s in &f.src {
            let t = f.ap(s);
            let v = a
                .vals
                .get(&t)
                .ok_or_else(|| EngineError::UnknownObject(format!("family missing index {t}")))?;
            vals.insert(s.clone(), v.clone());
        }
        Ok(FamObj { vals })
    }

    /// Strict reindexing of morphisms along `f: S → T`.
    pub fn pull_mor(&self, f: &SetMap, m: &FamMor) -> Result<FamMor> {
        let mut vals = BTreeMap::new();
        for s in &f.src {
            let t = f.ap(s);
            let v = m
                .vals
                .get(&t)
                .ok_or_else(|| EngineError::UnknownObject(format!("family missing index {t}")))?;
            vals.insert(s.clone(), v.clone());
        }
        Ok(FamMor { vals })
    }
}

// ---------------------------------------------------------------------------
// Resolution categories
// ---------------------------------------------------------------------------

/// Deterministic morphism identifier from endpoints and value table.
pub fn mor_id(src: &str, tgt: &str, map: &SetMap) -> String {
    serde_json::to_string(&(src, tgt, &map.map)).expect("serializable")
}

/// The category of free resolutions `Γ×X` over a G-space `X`, with its
/// orbit-quotient functor data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCategory {
    pub cat: FinCat,
    /// Γ name → generating free G-set
    pub gsets: BTreeMap<String, GSet>,
    /// morphism id → underlying map on Γ carriers
    pub maps: BTreeMap<String, SetMap>,
    /// Γ name → the product G-set Γ×X (diagonal action)
    pub prods: BTreeMap<String, GSet>,
    /// Γ name → the orbit quotient G\(Γ×X)
    pub quotients: BTreeMap<String, Quotient>,
    /// morphism id → the induced map on quotients (of f×id_X)
    pub qmaps: BTreeMap<String, SetMap>,
}

impl ResolutionCategory {
    pub fn gset(&self, gamma: &str) -> Result<&GSet> {
        self.gsets
            .get(gamma)
            .ok_or_else(|| EngineError::UnknownObject(gamma.to_string()))
    }

    pub fn quot(&self, gamma: &str) -> Result<&Quotient> {
        self.quotients
            .get(gamma)
            .ok_or_else(|| EngineError::UnknownObject(gamma.to_string()))
    }

    pub fn qmap(&self, mor: &str) -> Result<&SetMap> {
        self.qmaps
            .get(mor)
            .ok_or_else(|| EngineError::MalformedTable(format!("no quotient map for {mor}")))
    }

    /// Finds the morphism `src → tgt` with the given underlying map.
    pub fn find_mor(&self, src: &str, tgt: &str, map: &SetMap) -> Option<String> {
        let id = mor_id(src, tgt, map);
        self.maps.contains_key(&id).then_some(id)
    }
}

const DEFAULT_MAP_CAP: usize = 4096;

/// All equivariant maps `src → tgt`, by choosing images of one basepoint per
/// orbit of the free source.
fn equivariant_maps(
    group: &FinGroup,
    src: &GSet,
    tgt: &GSet,
    cap: usize,
) -> Result<Vec<SetMap>> {
    // Orbit basepoints of the free source.
    let q = quotient(group, src);
    let count = tgt.elems.len().checked_pow(q.classes.len() as u32);
    match count {
        Some(n) if n <= cap => {}
        _ => {
            return Err(EngineError::EnumerationCap(format!(
                "equivariant maps {} → {}",
                src.name, tgt.name
            )))
        }
    }
    let mut out = Vec::new();
    let k = q.classes.len();
    let n = tgt.elems.len();
    let mut choice = vec![0usize; k];
    loop {
        let mut map = BTreeMap::new();
        for (ci, c) in q.classes.iter().enumerate() {
            let img = &tgt.elems[choice[ci]];
            for g in &group.elements {
                map.insert(src.act(g, c), tgt.act(g, img));
            }
        }
        out.push(SetMap::new(src.elems.clone(), tgt.elems.clone(), map)?);
        // Next choice vector.
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Builds the resolution category over `x` from generators and supplied
/// morphisms, closing under composition.  With `supplied = None` every
/// equivariant map between generators is enumerated (capped).
pub fn build_resolutions_with_morphisms(
    group: &FinGroup,
    x: &GSet,
    generators: &[GSet],
    supplied: Option<&[(String, String, SetMap)]>,
) -> Result<ResolutionCategory> {
    for gamma in generators {
        let rep = gamma.check(group);
        if !rep.is_ok() {
            return Err(EngineError::MalformedTable(format!(
                "generator {}: {:?}",
                gamma.name, rep.violations
            )));
        }
        if !gamma.is_free(group) {
            return Err(EngineError::NotFree(gamma.name.clone()));
        }
    }
    let repx = x.check(group);
    if !repx.is_ok() {
        return Err(EngineError::MalformedTable(format!("space: {:?}", repx.violations)));
    }
    let mut gsets = BTreeMap::new();
    for gamma in generators {
        if gsets.insert(gamma.name.clone(), gamma.clone()).is_some() {
            return Err(EngineError::MalformedTable(format!(
                "duplicate generator name {}",
                gamma.name
            )));
        }
    }
    // Seed morphisms: identities plus supplied/enumerated maps.
    let mut maps: BTreeMap<String, (String, String, SetMap)> = BTreeMap::new();
    let add = |maps: &mut BTreeMap<String, (String, String, SetMap)>,
                   src: &str,
                   tgt: &str,
                   m: SetMap|
     -> Result<()> {
        let id = mor_id(src, tgt, &m);
        maps.insert(id, (src.to_string(), tgt.to_string(), m));
        Ok(())
    };
    for (name, gamma) in &gsets {
        add(&mut maps, name, name, SetMap::identity(&gamma.elems))?;
    }
    match supplied {
        Some(list) => {
            for (s, t, m) in list {
                let gs = gsets
                    .get(s)
                    .ok_or_else(|| EngineError::UnknownObject(s.clone()))?;
                let gt = gsets
                    .get(t)
                    .ok_or_else(|| EngineError::UnknownObject(t.clone()))?;
                let rep = check_equivariant(group, gs, gt, m);
                if !rep.is_ok() {
                    return Err(EngineError::Invalid(format!(
                        "supplied map {s} → {t} not equivariant: {:?}",
                        rep.violations
                    )));
                }
                add(&mut maps, s, t, m.clone())?;
            }
        }
        None => {
            for (sn, sg) in &gsets {
                for (tn, tg) in &gsets {
                    for m in equivariant_maps(group, sg, tg, DEFAULT_MAP_CAP)? {
                        add(&mut maps, sn, tn, m)?;
                    }
                }
            }
        }
    }
    // Close under composition.
    loop {
        let mut fresh = Vec::new();
        for (fs, ft, fm) in maps.values() {
            for (gs, gt, gm) in maps.values() {
                if ft != gs {
                    continue;
                }
                let comp = setmap_compose(gm, fm)?;
                let id = mor_id(fs, gt, &comp);
                if !maps.contains_key(&id) {
                    fresh.push((fs.clone(), gt.clone(), comp));
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        if maps.len() + fresh.len() > DEFAULT_MAP_CAP {
            return Err(EngineError::EnumerationCap("composition closure".into()));
        }
        for (s, t, m) in fresh {
            add(&mut maps, &s, &t, m)?;
        }
    }
    // Assemble the finite category.
    let objects: Vec<String> = gsets.keys().cloned().collect();
    let mut morphisms = Vec::new();
    for (id, (s, t, _)) in &maps {
        morphisms.push(Mor { id: id.clone(), src: s.clone(), tgt: t.clone() });
    }
    let mut identity = BTreeMap::new();
    for (name, gamma) in &gsets {
        identity.insert(name.clone(), mor_id(name, name, &SetMap::identity(&gamma.elems)));
    }
    let mut compose = BTreeMap::new();
    for (fid, (_, ft, fm)) in &maps {
        for (gid, (gs, gt2, gm)) in &maps {
            if ft != gs {
                continue;
            }
            let comp = setmap_compose(gm, fm)?;
            let src_of_f = &maps[fid].0;
            compose.insert((gid.clone(), fid.clone()), mor_id(src_of_f, gt2, &comp));
        }
    }
    let cat = FinCat::new(objects, morphisms, identity, compose);
    let rep = check_category(&cat);
    if !rep.is_ok() {
        return Err(EngineError::MalformedTable(format!(
            "resolution category invalid: {:?}",
            rep.violations
        )));
    }
    // Products, quotients, and induced quotient maps.
    let mut prods = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    for (name, gamma) in &gsets {
        let p = product_gset(&format!("{name}×{}", x.name), group, gamma, x);
        quotients.insert(name.clone(), quotient(group, &p));
        prods.insert(name.clone(), p);
    }
    let mut qmaps = BTreeMap::new();
    let mut flat: BTreeMap<String, SetMap> = BTreeMap::new();
    for (id, (s, t, m)) in &maps {
        let qs = &quotients[s];
        let qt = &quotients[t];
        let qm = induced_on_quotients(qs, qt, |e| {
            let (gamma, pt) = unpair(e)?;
            Ok(pair_id(&m.ap(&gamma), &pt))
        })?;
        qmaps.insert(id.clone(), qm);
        flat.insert(id.clone(), m.clone());
    }
    // Quotient functoriality: induced maps respect the composition table.
    for ((gid, fid), rid) in &cat.compose {
        let lhs = setmap_compose(&qmaps[gid], &qmaps[fid])?;
        if lhs != qmaps[rid] {
            return Err(EngineError::Invalid(format!(
                "quotient functor breaks composition at ({gid}) ∘ ({fid})"
            )));
        }
    }
    Ok(ResolutionCategory { cat, gsets, maps: flat, prods, quotients, qmaps })
}

/// Resolution category with every equivariant map between generators.
pub fn build_resolutions(
    group: &FinGroup,
    x: &GSet,
    generators: &[GSet],
) -> Result<ResolutionCategory> {
    build_resolutions_with_morphisms(group, x, generators, None)
}

// ---------------------------------------------------------------------------
// Pre-equivariant contexts and equivariant families
// ---------------------------------------------------------------------------

/// A pre-equivariant pseudofunctor instance: group, space, resolutions, and
/// the point base whose powers over orbit quotients form the fibres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqContext {
    pub group: FinGroup,
    pub x: GSet,
    pub resl: ResolutionCategory,
    pub base: PointBase,
}

impl EqContext {
    pub fn new(
        group: FinGroup,
        x: GSet,
        generators: &[GSet],
        supplied: Option<&[(String, String, SetMap)]>,
        base: PointBase,
    ) -> Result<EqContext> {
        let grep = group.check();
        if !grep.is_ok() {
            return Err(EngineError::Invalid(format!("group: {:?}", grep.violations)));
        }
        let resl = build_resolutions_with_morphisms(&group, &x, generators, supplied)?;
        Ok(EqContext { group, x, resl, base })
    }
}

/// A descent family: a fibre object per resolution object, with transition
/// isomorphisms `τ_f: f̄*A_{Γ'} → A_Γ` per resolution morphism `f: Γ → Γ'`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqObject {
    pub components: BTreeMap<String, FamObj>,
    pub transitions: BTreeMap<String, FamMor>,
}

/// A family morphism: `ρ_Γ: A_Γ → B_Γ` commuting with transitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqMorphism {
    pub components: BTreeMap<String, FamMor>,
}

impl EqObject {
    pub fn comp_at(&self, gamma: &str) -> Result<&FamObj> {
        self.components
            .get(gamma)
            .ok_or_else(|| EngineError::UnknownObject(format!("no component at {gamma}")))
    }

    pub fn trans_at(&self, mor: &str) -> Result<&FamMor> {
        self.transitions
            .get(mor)
            .ok_or_else(|| EngineError::UnknownObject(format!("no transition at {mor}")))
    }
}

impl EqMorphism {
    pub fn comp_at(&self, gamma: &str) -> Result<&FamMor> {
        self.components
            .get(gamma)
            .ok_or_else(|| EngineError::UnknownObject(format!("no component at {gamma}")))
    }
}

fn fam_endpoints_ok(
    base: &PointBase,
    m: &FamMor,
    src: &FamObj,
    tgt: &FamObj,
) -> Result<bool> {
    if m.vals.keys().ne(src.vals.keys()) || m.vals.keys().ne(tgt.vals.keys()) {
        return Ok(false);
    }
    for (k, cm) in &m.vals {
        if base.cm_src(cm)? != src.vals[k] || base.cm_tgt(cm)? != tgt.vals[k] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validates a descent family against the context: indexing, endpoints,
/// invertibility, normalized identities, and the twisted cocycle
/// `λ(f̄,ḡ)·τ_{g∘f} = τ_f ∘ f̄*(τ_g)`.
pub fn validate_eq_family(ctx: &EqContext, a: &EqObject) -> Result<Report> {
    let mut rep = Report::ok();
    let base = &ctx.base;
    for gamma in &ctx.resl.cat.objects {
        let comp = match a.components.get(gamma) {
            Some(c) => c,
            None => {
                rep.push("components", format!("missing component at {gamma}"));
                continue;
            }
        };
        let q = ctx.resl.quot(gamma)?;
        if comp.vals.keys().cloned().collect::<Vec<_>>() != q.classes {
            rep.push("indexing", format!("component at {gamma} not indexed by orbit classes"));
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for m in &ctx.resl.cat.morphisms {
        let tau = match a.transitions.get(&m.id) {
            Some(t) => t,
            None => {
                rep.push("transitions", format!("missing transition at {}", m.id));
                continue;
            }
        };
        let fbar = ctx.resl.qmap(&m.id)?;
        let pulled = base.pull_obj(fbar, a.comp_at(&m.tgt)?)?;
        if !fam_endpoints_ok(base, tau, &pulled, a.comp_at(&m.src)?)? {
            rep.push("transition-endpoints", m.id.clone());
            continue;
        }
        if !base.fam_is_iso(tau) {
            rep.push("transition-iso", m.id.clone());
        }
        if ctx.resl.cat.is_identity(&m.id) && *tau != base.fam_id(a.comp_at(&m.src)?)? {
            rep.push("transition-identity", m.id.clone());
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for ((gid, fid), rid) in &ctx.resl.cat.compose {
        let fbar = ctx.resl.qmap(fid)?;
        let gbar = ctx.resl.qmap(gid)?;
        let lam = base.lambda(fbar, gbar)?;
        let lhs = base.fam_scale(&lam, a.trans_at(rid)?)?;
        let rhs = base.fam_comp(a.trans_at(fid)?, &base.pull_mor(fbar, a.trans_at(gid)?)?)?;
        if lhs != rhs {
            rep.push("cocycle", format!("({gid}) ∘ ({fid})"));
        }
    }
    Ok(rep)
}

/// Validates a family morphism: endpoints and the squares
/// `τ^B_f ∘ f̄*(ρ_{Γ'}) = ρ_Γ ∘ τ^A_f`.
pub fn validate_eq_morphism(
    ctx: &EqContext,
    a: &EqObject,
    b: &EqObject,
    rho: &EqMorphism,
) -> Result<Report> {
    let mut rep = Report::ok();
    let base = &ctx.base;
    for gamma in &ctx.resl.cat.objects {
        let comp = match rho.components.get(gamma) {
            Some(c) => c,
            None => {
                rep.push("components", format!("missing component at {gamma}"));
                continue;
            }
        };
        if !fam_endpoints_ok(base, comp, a.comp_at(gamma)?, b.comp_at(gamma)?)? {
            rep.push("component-endpoints", gamma.clone());
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for m in &ctx.resl.cat.morphisms {
        let fbar = ctx.resl.qmap(&m.id)?;
        let lhs = base.fam_comp(b.trans_at(&m.id)?, &base.pull_mor(fbar, rho.comp_at(&m.tgt)?)?)?;
        let rhs = base.fam_comp(rho.comp_at(&m.src)?, a.trans_at(&m.id)?)?;
        if lhs != rhs {
            rep.push("square", m.id.clone());
        }
    }
    Ok(rep)
}

/// Componentwise composite `ω ∘ ρ` of family morphisms.
pub fn comp_eq_morphism(ctx: &EqContext, omega: &EqMorphism, rho: &EqMorphism) -> Result<EqMorphism> {
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        components.insert(
            gamma.clone(),
            ctx.base.fam_comp(omega.comp_at(gamma)?, rho.comp_at(gamma)?)?,
        );
    }
    Ok(EqMorphism { components })
}

/// Identity family morphism.
pub fn id_eq_morphism(ctx: &EqContext, a: &EqObject) -> Result<EqMorphism> {
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        components.insert(gamma.clone(), ctx.base.fam_id(a.comp_at(gamma)?)?);
    }
    Ok(EqMorphism { components })
}

// ---------------------------------------------------------------------------
// Pullback along an equivariant map of spaces
// ---------------------------------------------------------------------------

/// The quotient-level map `h̄_Γ: G\(Γ×W) → G\(Γ×X)` induced by `id_Γ × h`.
pub fn space_map_on_quotients(
    ctx_src: &EqContext,
    ctx_tgt: &EqContext,
    h: &SetMap,
    gamma: &str,
) -> Result<SetMap> {
    let qs = ctx_src.resl.quot(gamma)?;
    let qt = ctx_tgt.resl.quot(gamma)?;
    induced_on_quotients(qs, qt, |e| {
        let (g, w) = unpair(e)?;
        Ok(pair_id(&g, &h.ap(&w)))
    })
}

/// Pullback of a descent family along an equivariant map `h: W → X` of
/// spaces sharing resolution generators: `(h*A)_Γ = h̄_Γ*(A_Γ)` with
/// transitions `τ'_f = (λ(f̄_W, h̄_{Γ'})/λ(h̄_Γ, f̄_X)) · h̄_Γ*(τ^A_f)`.
pub fn pullback_obj(
    ctx_src: &EqContext,
    ctx_tgt: &EqContext,
    h: &SetMap,
    a: &EqObject,
) -> Result<EqObject> {
    let base = &ctx_src.base;
    let mut components = BTreeMap::new();
    for gamma in &ctx_src.resl.cat.objects {
        let hbar = space_map_on_quotients(ctx_src, ctx_tgt, h, gamma)?;
        components.insert(gamma.clone(), base.pull_obj(&hbar, a.comp_at(gamma)?)?);
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx_src.resl.cat.morphisms {
        let tgt_mor = ctx_tgt
            .resl
            .find_mor(&m.src, &m.tgt, &ctx_src.resl.maps[&m.id])
            .ok_or_else(|| {
                EngineError::UnknownObject(format!("morphism {} absent over the target space", m.id))
            })?;
        let hbar_s = space_map_on_quotients(ctx_src, ctx_tgt, h, &m.src)?;
        let hbar_t = space_map_on_quotients(ctx_src, ctx_tgt, h, &m.tgt)?;
        let fbar_w = ctx_src.resl.qmap(&m.id)?;
        let fbar_x = ctx_tgt.resl.qmap(&tgt_mor)?;
        let scalar = base.lambda(fbar_w, &hbar_t)? / base.lambda(&hbar_s, fbar_x)?;
        let pulled = base.pull_mor(&hbar_s, a.trans_at(&tgt_mor)?)?;
        transitions.insert(m.id.clone(), base.fam_scale(&scalar, &pulled)?);
    }
    Ok(EqObject { components, transitions })
}

/// Pullback of a family morphism: componentwise reindexing, no scalar.
pub fn pullback_mor(
    ctx_src: &EqContext,
    ctx_tgt: &EqContext,
    h: &SetMap,
    rho: &EqMorphism,
) -> Result<EqMorphism> {
    let mut components = BTreeMap::new();
    for gamma in &ctx_src.resl.cat.objects {
        let hbar = space_map_on_quotients(ctx_src, ctx_tgt, h, gamma)?;
        components.insert(gamma.clone(), ctx_src.base.pull_mor(&hbar, rho.comp_at(gamma)?)?);
    }
    Ok(EqMorphism { components })
}

// ---------------------------------------------------------------------------
// Naivification and the equivariance isomorphism Θ
// ---------------------------------------------------------------------------

/// `Γ_c = Γ×G` with `h·(γ,g) = (hγ, hgh⁻¹)`, together with the two
/// equivariant comparison maps `a(γ,g) = g⁻¹γ` and `p(γ,g) = γ`.
pub fn naivification(group: &FinGroup, gamma: &GSet) -> Result<(GSet, SetMap, SetMap)> {
    if !gamma.is_free(group) {
        return Err(EngineError::NotFree(gamma.name.clone()));
    }
    let mut elems = Vec::new();
    for c in &gamma.elems {
        for g in &group.elements {
            elems.push(pair_id(c, g));
        }
    }
    elems.sort();
    let mut action = BTreeMap::new();
    for h in &group.elements {
        for c in &gamma.elems {
            for g in &group.elements {
                let cg = group.op(&group.op(h, g), &group.inv(h));
                action.insert((h.clone(), pair_id(c, g)), pair_id(&gamma.act(h, c), &cg));
            }
        }
    }
    let gc = GSet { name: format!("{}_c", gamma.name), elems: elems.clone(), action };
    let mut a_map = BTreeMap::new();
    let mut p_map = BTreeMap::new();
    for c in &gamma.elems {
        for g in &group.elements {
            a_map.insert(pair_id(c, g), gamma.act(&group.inv(g), c));
            p_map.insert(pair_id(c, g), c.clone());
        }
    }
    let a = SetMap::new(elems.clone(), gamma.elems.clone(), a_map)?;
    let p = SetMap::new(elems, gamma.elems.clone(), p_map)?;
    Ok((gc, a, p))
}

/// The resolution context over `G×X` (conjugation–translation action), on
/// the generators whose naivification is itself a listed generator.
pub fn theta_context(ctx: &EqContext) -> Result<(EqContext, BTreeMap<String, String>)> {
    let gx = conj_translation_gset(&format!("G×{}", ctx.x.name), &ctx.group, &ctx.x);
    let mut closure = BTreeMap::new();
    for (name, gamma) in &ctx.resl.gsets {
        let (gc, _, _) = naivification(&ctx.group, gamma)?;
        if let Some((cn, _)) = ctx.resl.gsets.iter().find(|(_, g)| same_gset(&gc, g)) {
            closure.insert(name.clone(), cn.clone());
        }
    }
    if closure.is_empty() {
        return Err(EngineError::ResolutionNotClosed(
            "no generator has its naivification in the generator list".into(),
        ));
    }
    let generators: Vec<GSet> = closure.keys().map(|n| ctx.resl.gsets[n].clone()).collect();
    let supplied: Vec<(String, String, SetMap)> = ctx
        .resl
        .maps
        .iter()
        .filter_map(|(id, m)| {
            let mor = ctx.resl.cat.mor(id).ok()?;
            (closure.contains_key(&mor.src) && closure.contains_key(&mor.tgt))
                .then(|| (mor.src.clone(), mor.tgt.clone(), m.clone()))
        })
        .collect();
    let ctx_gx = EqContext::new(ctx.group.clone(), gx, &generators, Some(&supplied), ctx.base.clone())?;
    Ok((ctx_gx, closure))
}

/// The action and second-projection maps `G×X → X`.
pub fn action_proj_maps(group: &FinGroup, x: &GSet, gx: &GSet) -> Result<(SetMap, SetMap)> {
    let _ = group;
    let mut amap = BTreeMap::new();
    let mut pmap = BTreeMap::new();
    for e in &gx.elems {
        let (g, p) = unpair(e)?;
        amap.insert(e.clone(), x.act(&g, &p));
        pmap.insert(e.clone(), p);
    }
    Ok((
        SetMap::new(gx.elems.clone(), x.elems.clone(), amap)?,
        SetMap::new(gx.elems.clone(), x.elems.clone(), pmap)?,
    ))
}

/// The constructed equivariance isomorphism and its ambient data.
#[derive(Clone, Debug)]
pub struct ThetaResult {
    pub ctx_gx: EqContext,
    /// Γ over G×X → the generator name of Γ_c over X
    pub closure: BTreeMap<String, String>,
    pub alpha: SetMap,
    pub pi2: SetMap,
    pub alpha_pull: EqObject,
    pub pi2_pull: EqObject,
    pub theta: EqMorphism,
}

/// Θ components inside a fixed `G×X` context.
fn theta_in(
    ctx: &EqContext,
    ctx_gx: &EqContext,
    closure: &BTreeMap<String, String>,
    alpha: &SetMap,
    pi2: &SetMap,
    a: &EqObject,
) -> Result<(EqObject, EqObject, EqMorphism)> {
    let base = &ctx.base;
    let alpha_pull = pullback_obj(ctx_gx, ctx, alpha, a)?;
    let pi2_pull = pullback_obj(ctx_gx, ctx, pi2, a)?;
    let mut components = BTreeMap::new();
    for gamma in &ctx_gx.resl.cat.objects {
        let gc_name = closure
            .get(gamma)
            .ok_or_else(|| EngineError::ResolutionNotClosed(gamma.clone()))?;
        let (_, a_map, p_map) = naivification(&ctx.group, ctx.resl.gset(gamma)?)?;
        let a_mor = ctx
            .resl
            .find_mor(gc_name, gamma, &a_map)
            .ok_or_else(|| EngineError::ResolutionNotClosed(format!("missing map a: {gc_name} → {gamma}")))?;
        let p_mor = ctx
            .resl
            .find_mor(gc_name, gamma, &p_map)
            .ok_or_else(|| EngineError::ResolutionNotClosed(format!("missing map p: {gc_name} → {gamma}")))?;
        // μ_Γ: G\(Γ×(G×X)) → G\(Γ_c×X), [γ,(g,x)] ↦ [(γ,g),x].
        let mu = induced_on_quotients(ctx_gx.resl.quot(gamma)?, ctx.resl.quot(gc_name)?, |e| {
            let (c, gp) = unpair(e)?;
            let (g, x) = unpair(&gp)?;
            Ok(pair_id(&pair_id(&c, &g), &x))
        })?;
        let tau_a = a.trans_at(&a_mor)?;
        let tau_p = a.trans_at(&p_mor)?;
        let inner = base.fam_comp(&base.fam_inv(tau_p)?, tau_a)?;
        let scalar = base.lambda(&mu, ctx.resl.qmap(&p_mor)?)?
            / base.lambda(&mu, ctx.resl.qmap(&a_mor)?)?;
        components.insert(gamma.clone(), base.fam_scale(&scalar, &base.pull_mor(&mu, &inner)?)?);
    }
    Ok((alpha_pull, pi2_pull, EqMorphism { components }))
}

/// Builds `Θ_A: α_X*A → π₂*A` over the `G×X` resolution context.
pub fn equivariance_theta(ctx: &EqContext, a: &EqObject) -> Result<ThetaResult> {
    let (ctx_gx, closure) = theta_context(ctx)?;
    let (alpha, pi2) = action_proj_maps(&ctx.group, &ctx.x, &ctx_gx.x)?;
    let (alpha_pull, pi2_pull, theta) = theta_in(ctx, &ctx_gx, &closure, &alpha, &pi2, a)?;
    Ok(ThetaResult { ctx_gx, closure, alpha, pi2, alpha_pull, pi2_pull, theta })
}

/// Naturality of Θ: `π₂*(ρ) ∘ Θ_A = Θ_B ∘ α_X*(ρ)` componentwise.
pub fn check_theta_natural(
    ctx: &EqContext,
    a: &EqObject,
    b: &EqObject,
    rho: &EqMorphism,
) -> Result<Report> {
    let (ctx_gx, closure) = theta_context(ctx)?;
    let (alpha, pi2) = action_proj_maps(&ctx.group, &ctx.x, &ctx_gx.x)?;
    let (_, _, theta_a) = theta_in(ctx, &ctx_gx, &closure, &alpha, &pi2, a)?;
    let (_, _, theta_b) = theta_in(ctx, &ctx_gx, &closure, &alpha, &pi2, b)?;
    let alpha_rho = pullback_mor(&ctx_gx, ctx, &alpha, rho)?;
    let pi2_rho = pullback_mor(&ctx_gx, ctx, &pi2, rho)?;
    let lhs = comp_eq_morphism(&ctx_gx, &pi2_rho, &theta_a)?;
    let rhs = comp_eq_morphism(&ctx_gx, &theta_b, &alpha_rho)?;
    let mut rep = Report::ok();
    for gamma in &ctx_gx.resl.cat.objects {
        if lhs.comp_at(gamma)? != rhs.comp_at(gamma)? {
            rep.push("theta-naturality", gamma.clone());
        }
    }
    Ok(rep)
}

/// The three face maps `G×G×X → G×X`: `d₀ = π₂₃`, `d₁ = μ_G×id`,
/// `d₂ = id×α`.
pub fn face_maps(group: &FinGroup, x: &GSet, gx: &GSet, ggx: &GSet) -> Result<[SetMap; 3]> {
    let mut d0 = BTreeMap::new();
    let mut d1 = BTreeMap::new();
    let mut d2 = BTreeMap::new();
    for e in &ggx.elems {
        let (g1, rest) = unpair(e)?;
        let (g2, p) = unpair(&rest)?;
        d0.insert(e.clone(), rest.clone());
        d1.insert(e.clone(), pair_id(&group.op(&g1, &g2), &p));
        d2.insert(e.clone(), pair_id(&g1, &x.act(&g2, &p)));
    }
    Ok([
        SetMap::new(ggx.elems.clone(), gx.elems.clone(), d0)?,
        SetMap::new(ggx.elems.clone(), gx.elems.clone(), d1)?,
        SetMap::new(ggx.elems.clone(), gx.elems.clone(), d2)?,
    ])
}

/// The GIT cocycle: over `G×G×X`, `d₁*Θ = d₀*Θ ∘ d₂*Θ` with the scalar
/// compositor corrections identifying both sides' endpoints.
pub fn check_git_cocycle(ctx: &EqContext, a: &EqObject, th: &ThetaResult) -> Result<Report> {
    let _ = a;
    let base = &ctx.base;
    let ctx_gx = &th.ctx_gx;
    let ggx = conj_translation_gset(
        &format!("G×{}", ctx_gx.x.name),
        &ctx.group,
        &ctx_gx.x,
    );
    let generators: Vec<GSet> = ctx_gx.resl.gsets.values().cloned().collect();
    let supplied: Vec<(String, String, SetMap)> = ctx_gx
        .resl
        .maps
        .iter()
        .map(|(id, m)| {
            let mor = ctx_gx.resl.cat.mor(id)?;
            Ok((mor.src.clone(), mor.tgt.clone(), m.clone()))
        })
        .collect::<Result<_>>()?;
    let ctx_ggx = EqContext::new(
        ctx.group.clone(),
        ggx,
        &generators,
        Some(&supplied),
        base.clone(),
    )?;
    let faces = face_maps(&ctx.group, &ctx.x, &ctx_gx.x, &ctx_ggx.x)?;
    let mut rep = Report::ok();
    for gamma in &ctx_ggx.resl.cat.objects {
        let alpha_bar = space_map_on_quotients(ctx_gx, ctx, &th.alpha, gamma)?;
        let pi2_bar = space_map_on_quotients(ctx_gx, ctx, &th.pi2, gamma)?;
        let theta_g = th.theta.comp_at(gamma)?;
        let mut sides = Vec::new();
        for d in &faces {
            let dbar = space_map_on_quotients(&ctx_ggx, ctx_gx, d, gamma)?;
            let scalar = base.lambda(&dbar, &pi2_bar)? / base.lambda(&dbar, &alpha_bar)?;
            sides.push(base.fam_scale(&scalar, &base.pull_mor(&dbar, theta_g)?)?);
        }
        let lhs = &sides[1];
        let rhs = base.fam_comp(&sides[0], &sides[2])?;
        if *lhs != rhs {
            rep.push("git-cocycle", gamma.clone());
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Forgetful functor and equivariantification
// ---------------------------------------------------------------------------

/// Data of the forgetful comparison: a regular generator `Γ₀`, a basepoint
/// `γ₀` with `g ↦ gγ₀` bijective, and the bijection `ψ: X ≅ G\(Γ₀×X)`,
/// `x ↦ [(γ₀, x)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForgetfulData {
    pub gamma0: String,
    pub basepoint: String,
    pub psi: SetMap,
    pub psi_inv: SetMap,
    /// the compositor scalar `λ(ψ, ψ⁻¹)`
    pub nu: String,
}

pub fn forgetful_pair(ctx: &EqContext) -> Result<ForgetfulData> {
    let mut found = None;
    'outer: for (name, gamma) in &ctx.resl.gsets {
        for c in &gamma.elems {
            let orbit: BTreeSet<String> =
                ctx.group.elements.iter().map(|g| gamma.act(g, c)).collect();
            if orbit.len() == ctx.group.elements.len() && orbit.len() == gamma.elems.len() {
                found = Some((name.clone(), c.clone()));
                break 'outer;
            }
        }
    }
    let (gamma0, basepoint) = found.ok_or(EngineError::MissingRegularResolution)?;
    let q = ctx.resl.quot(&gamma0)?;
    let mut map = BTreeMap::new();
    for x in &ctx.x.elems {
        map.insert(x.clone(), q.class(&pair_id(&basepoint, x))?);
    }
    let psi = SetMap::new(ctx.x.elems.clone(), q.classes.clone(), map)?;
    if !psi.is_bijection() {
        return Err(EngineError::Invalid("ψ is not a bijection".into()));
    }
    let psi_inv = psi.inverse()?;
    let nu = crate::matq::show_q(&ctx.base.lambda(&psi, &psi_inv)?);
    Ok(ForgetfulData { gamma0, basepoint, psi, psi_inv, nu })
}

/// `Forget(A)`: the `Γ₀`-component read along `ψ`, a fibre object over `X`.
pub fn forget_obj(ctx: &EqContext, fd: &ForgetfulData, a: &EqObject) -> Result<FamObj> {
    ctx.base.pull_obj(&fd.psi, a.comp_at(&fd.gamma0)?)
}

pub fn forget_mor(ctx: &EqContext, fd: &ForgetfulData, rho: &EqMorphism) -> Result<FamMor> {
    ctx.base.pull_mor(&fd.psi, rho.comp_at(&fd.gamma0)?)
}

/// Equivariantification for trivially-acted spaces: constant families
/// `Eq(A₀)_Γ = w_Γ*(A₀)` along `w_Γ: [γ,x] ↦ x`, with scalar transitions.
pub fn eq_obj(ctx: &EqContext, a0: &FamObj) -> Result<EqObject> {
    for g in &ctx.group.elements {
        for x in &ctx.x.elems {
            if ctx.x.act(g, x) != *x {
                return Err(EngineError::InvarianceFailure(format!(
                    "action moves {x}; equivariantification needs a trivial action"
                )));
            }
        }
    }
    if a0.vals.keys().cloned().collect::<Vec<_>>() != ctx.x.elems {
        return Err(EngineError::ShapeMismatch("fibre object not indexed by X".into()));
    }
    let base = &ctx.base;
    let mut w = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        let q = ctx.resl.quot(gamma)?;
        let mut map = BTreeMap::new();
        for c in &q.classes {
            let (_, x) = unpair(c)?;
            map.insert(c.clone(), x);
        }
        w.insert(gamma.clone(), SetMap::new(q.classes.clone(), ctx.x.elems.clone(), map)?);
    }
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        components.insert(gamma.clone(), base.pull_obj(&w[gamma], a0)?);
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx.resl.cat.morphisms {
        let fbar = ctx.resl.qmap(&m.id)?;
        let scalar = base.lambda(fbar, &w[&m.tgt])?;
        let idm = base.fam_id(&components[&m.src])?;
        transitions.insert(m.id.clone(), base.fam_scale(&scalar, &idm)?);
    }
    Ok(EqObject { components, transitions })
}

// ---------------------------------------------------------------------------
// Change of groups
// ---------------------------------------------------------------------------

/// The induction space `H×^G Z` for `φ: G → H` and a G-set `Z`: orbit
/// classes of pairs `(h, z)` under `g·(h,z) = (hφ(g)⁻¹, gz)`, with H acting
/// by left translation; representatives are lexicographically least.
pub fn induced_gset_with_classes(
    phi: &GroupHom,
    z: &GSet,
) -> Result<(GSet, BTreeMap<String, String>)> {
    let g = &phi.src;
    let h = &phi.tgt;
    let mut class_of = BTreeMap::new();
    for hh in &h.elements {
        for zz in &z.elems {
            let rep = g
                .elements
                .iter()
                .map(|gg| pair_id(&h.op(hh, &h.inv(&phi.ap(gg))), &z.act(gg, zz)))
                .min()
                .expect("nonempty group");
            class_of.insert(pair_id(hh, zz), rep);
        }
    }
    let mut elems: Vec<String> = class_of.values().cloned().collect();
    elems.sort();
    elems.dedup();
    let mut action = BTreeMap::new();
    for hp in &h.elements {
        for r in &elems {
            let (hh, zz) = unpair(r)?;
            action.insert((hp.clone(), r.clone()), class_of[&pair_id(&h.op(hp, &hh), &zz)].clone());
        }
    }
    let gs = GSet { name: format!("ind_{}", z.name), elems, action };
    Ok((gs, class_of))
}

pub fn induced_gset(phi: &GroupHom, z: &GSet) -> Result<GSet> {
    induced_gset_with_classes(phi, z).map(|(g, _)| g)
}

/// The class `[h, z]` in the induction space.
pub fn induced_point(phi: &GroupHom, z: &GSet, h: &str, elem: &str) -> Result<String> {
    let (_, cls) = induced_gset_with_classes(phi, z)?;
    cls.get(&pair_id(h, elem))
        .cloned()
        .ok_or_else(|| EngineError::UnknownPoint(format!("[{h}, {elem}]")))
}

/// The induced map `H×^G Z → H×^G Z'` of an equivariant `f: Z → Z'`.
pub fn induced_map(phi: &GroupHom, z: &GSet, zp: &GSet, f: &SetMap) -> Result<SetMap> {
    let (iz, _) = induced_gset_with_classes(phi, z)?;
    let (izp, clsp) = induced_gset_with_classes(phi, zp)?;
    let mut map = BTreeMap::new();
    for r in &iz.elems {
        let (h, zz) = unpair(r)?;
        map.insert(r.clone(), clsp[&pair_id(&h, &f.ap(&zz))].clone());
    }
    SetMap::new(iz.elems, izp.elems, map)
}

/// The quotient-level comparison `h_Γ: G\(Γ×X) → H\((H×^G Γ)×X)`,
/// `[γ,x]_G ↦ [[1,γ],x]_H`, plus the name of the matched H-generator.
pub fn chofg_h_map(
    phi: &GroupHom,
    ctx_g: &EqContext,
    ctx_h: &EqContext,
    gamma: &str,
) -> Result<(SetMap, String)> {
    let gset = ctx_g.resl.gset(gamma)?;
    let (ind, cls) = induced_gset_with_classes(phi, gset)?;
    if !ind.is_free(&phi.tgt) {
        return Err(EngineError::NotFree(ind.name));
    }
    let ind_name = ctx_h
        .resl
        .gsets
        .iter()
        .find(|(_, g)| same_gset(&ind, g))
        .map(|(n, _)| n.clone())
        .ok_or_else(|| EngineError::NotClosedUnderInduction(gamma.to_string()))?;
    let e_h = phi.tgt.identity.clone();
    let h_map = induced_on_quotients(ctx_g.resl.quot(gamma)?, ctx_h.resl.quot(&ind_name)?, |e| {
        let (c, x) = unpair(e)?;
        Ok(pair_id(&cls[&pair_id(&e_h, &c)], &x))
    })?;
    Ok((h_map, ind_name))
}

/// `φ♯A`: restriction of an H-equivariant family to a G-equivariant one
/// through induction spaces, with compositor-corrected transitions.
pub fn change_of_groups(
    phi: &GroupHom,
    ctx_g: &EqContext,
    ctx_h: &EqContext,
    a: &EqObject,
) -> Result<EqObject> {
    if !same_gset(&ctx_g.x, &restrict_gset(phi, &ctx_h.x)) {
        return Err(EngineError::ShapeMismatch(
            "source space is not the restriction of the target space".into(),
        ));
    }
    let base = &ctx_g.base;
    let mut components = BTreeMap::new();
    let mut hmaps = BTreeMap::new();
    let mut inds = BTreeMap::new();
    for gamma in &ctx_g.resl.cat.objects {
        let (h_map, ind_name) = chofg_h_map(phi, ctx_g, ctx_h, gamma)?;
        components.insert(gamma.clone(), base.pull_obj(&h_map, a.comp_at(&ind_name)?)?);
        hmaps.insert(gamma.clone(), h_map);
        inds.insert(gamma.clone(), ind_name);
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx_g.resl.cat.morphisms {
        let ind_f = induced_map(
            phi,
            ctx_g.resl.gset(&m.src)?,
            ctx_g.resl.gset(&m.tgt)?,
            &ctx_g.resl.maps[&m.id],
        )?;
        let ind_mor = ctx_h
            .resl
            .find_mor(&inds[&m.src], &inds[&m.tgt], &ind_f)
            .ok_or_else(|| EngineError::NotClosedUnderInduction(format!("induced map of {}", m.id)))?;
        let fbar_g = ctx_g.resl.qmap(&m.id)?;
        let fbar_h = ctx_h.resl.qmap(&ind_mor)?;
        let scalar =
            base.lambda(fbar_g, &hmaps[&m.tgt])? / base.lambda(&hmaps[&m.src], fbar_h)?;
        let pulled = base.pull_mor(&hmaps[&m.src], a.trans_at(&ind_mor)?)?;
        transitions.insert(m.id.clone(), base.fam_scale(&scalar, &pulled)?);
    }
    Ok(EqObject { components, transitions })
}

pub fn change_of_groups_mor(
    phi: &GroupHom,
    ctx_g: &EqContext,
    ctx_h: &EqContext,
    rho: &EqMorphism,
) -> Result<EqMorphism> {
    let mut components = BTreeMap::new();
    for gamma in &ctx_g.resl.cat.objects {
        let (h_map, ind_name) = chofg_h_map(phi, ctx_g, ctx_h, gamma)?;
        components.insert(gamma.clone(), ctx_g.base.pull_mor(&h_map, rho.comp_at(&ind_name)?)?);
    }
    Ok(EqMorphism { components })
}

/// The compositor `α: (ψ∘φ)♯A → φ♯(ψ♯A)` for `φ: G₀→G₁`, `ψ: G₁→G₂`,
/// built from the transition along `ρ: [g₂,[g₁,γ]] ↦ [g₂ψ(g₁), γ]`.
pub fn chofg_compositor(
    phi: &GroupHom,
    psi: &GroupHom,
    ctx0: &EqContext,
    ctx1: &EqContext,
    ctx2: &EqContext,
    a: &EqObject,
) -> Result<EqMorphism> {
    let base = &ctx0.base;
    let psiphi = compose_homs(psi, phi)?;
    let mut components = BTreeMap::new();
    for gamma in &ctx0.resl.cat.objects {
        let (h01, ind1) = chofg_h_map(phi, ctx0, ctx1, gamma)?;
        let (h12, ind2) = chofg_h_map(psi, ctx1, ctx2, &ind1)?;
        let (h02, ind02) = chofg_h_map(&psiphi, ctx0, ctx2, gamma)?;
        let (_, cls02) = induced_gset_with_classes(&psiphi, ctx0.resl.gset(gamma)?)?;
        let src2 = ctx2.resl.gset(&ind2)?;
        let mut rho_map = BTreeMap::new();
        for r in &src2.elems {
            let (g2, w) = unpair(r)?;
            let (g1, c) = unpair(&w)?;
            rho_map.insert(r.clone(), cls02[&pair_id(&psi.tgt.op(&g2, &psi.ap(&g1)), &c)].clone());
        }
        let rho = SetMap::new(src2.elems.clone(), ctx2.resl.gset(&ind02)?.elems.clone(), rho_map)?;
        let rho_mor = ctx2
            .resl
            .find_mor(&ind2, &ind02, &rho)
            .ok_or_else(|| EngineError::NotClosedUnderInduction(format!("ρ at {gamma}")))?;
        let h = setmap_compose(&h12, &h01)?;
        let rho_bar = ctx2.resl.qmap(&rho_mor)?;
        if setmap_compose(rho_bar, &h)? != h02 {
            return Err(EngineError::Invalid(format!("ρ̄ ∘ h₁₂ ∘ h₀₁ ≠ h₀₂ at {gamma}")));
        }
        let scalar = Q::one() / (base.lambda(&h01, &h12)? * base.lambda(&h, rho_bar)?);
        let pulled = base.pull_mor(&h, a.trans_at(&rho_mor)?)?;
        components.insert(gamma.clone(), base.fam_scale(&scalar, &pulled)?);
    }
    Ok(EqMorphism { components })
}

/// Associativity of change-of-groups compositors along
/// `G₀ →φ G₁ →ψ G₂ →χ G₃`: the two pastings
/// `φ♯(α_{ψ,χ}) ∘ α_{φ,χψ}` and `α_{φ,ψ}[χ♯A] ∘ α_{ψφ,χ}` agree.
pub fn pasting_associativity(
    phi: &GroupHom,
    psi: &GroupHom,
    chi: &GroupHom,
    ctx0: &EqContext,
    ctx1: &EqContext,
    ctx2: &EqContext,
    ctx3: &EqContext,
    a: &EqObject,
) -> Result<Report> {
    let chipsi = compose_homs(chi, psi)?;
    let psiphi = compose_homs(psi, phi)?;
    let alpha1 = chofg_compositor(phi, &chipsi, ctx0, ctx1, ctx3, a)?;
    let alpha2 = chofg_compositor(psi, chi, ctx1, ctx2, ctx3, a)?;
    let path1 = comp_eq_morphism(ctx0, &change_of_groups_mor(phi, ctx0, ctx1, &alpha2)?, &alpha1)?;
    let b = change_of_groups(chi, ctx2, ctx3, a)?;
    let alpha3 = chofg_compositor(&psiphi, chi, ctx0, ctx2, ctx3, a)?;
    let alpha4 = chofg_compositor(phi, psi, ctx0, ctx1, ctx2, &b)?;
    let path2 = comp_eq_morphism(ctx0, &alpha4, &alpha3)?;
    let mut rep = Report::ok();
    for gamma in &ctx0.resl.cat.objects {
        if path1.comp_at(gamma)? != path2.comp_at(gamma)? {
            rep.push("pasting-associativity", gamma.clone());
        }
    }
    Ok(rep)
}

/// `Forget ≅ collapse ∘ 1_G♯`: constructs the comparison isomorphism
/// `α_A = ψ*(τ^A_u)` and verifies invertibility and naturality against a
/// supplied morphism `ρ: A → B`.
pub fn de_equivariantification_check(
    ctx: &EqContext,
    ctx0: &EqContext,
    a: &EqObject,
    b: &EqObject,
    rho: &EqMorphism,
) -> Result<Report> {
    let one = GroupHom::from_trivial(&ctx.group);
    let fd = forgetful_pair(ctx)?;
    let base = &ctx.base;
    // The 1-point generator of the trivial-group context and φ: x ↦ [pt, x].
    let (pt_name, pt) = ctx0
        .resl
        .gsets
        .iter()
        .find(|(_, g)| g.elems.len() == 1)
        .map(|(n, g)| (n.clone(), g.elems[0].clone()))
        .ok_or_else(|| EngineError::UnknownObject("no 1-point generator".into()))?;
    let q0 = ctx0.resl.quot(&pt_name)?;
    let mut vmap = BTreeMap::new();
    for x in &ctx0.x.elems {
        vmap.insert(x.clone(), q0.class(&pair_id(&pt, x))?);
    }
    let varphi = SetMap::new(ctx0.x.elems.clone(), q0.classes.clone(), vmap)?;
    let (h_pt, ind_name) = chofg_h_map(&one, ctx0, ctx, &pt_name)?;
    // Collapse of the restricted families: read the pt component along φ.
    let collapse_obj = |y: &EqObject| -> Result<FamObj> {
        base.pull_obj(&varphi, y.comp_at(&pt_name)?)
    };
    let collapse_mor = |y: &EqMorphism| -> Result<FamMor> {
        base.pull_mor(&varphi, y.comp_at(&pt_name)?)
    };
    // u: Γ₀ → ind(pt) with ū ∘ ψ = h_pt ∘ φ.
    let target = setmap_compose(&h_pt, &varphi)?;
    let u = ctx
        .resl
        .cat
        .hom(&fd.gamma0, &ind_name)
        .into_iter()
        .find(|m| {
            ctx.resl
                .qmap(m)
                .ok()
                .and_then(|q| setmap_compose(q, &fd.psi).ok())
                .map(|c| c == target)
                .unwrap_or(false)
        })
        .ok_or_else(|| EngineError::Invalid("no comparison map u with ū∘ψ = h∘φ".into()))?;
    let mut rep = Report::ok();
    let alpha_at = |y: &EqObject| -> Result<FamMor> { base.pull_mor(&fd.psi, y.trans_at(&u)?) };
    let alpha_a = alpha_at(a)?;
    let alpha_b = alpha_at(b)?;
    let ra = change_of_groups(&one, ctx0, ctx, a)?;
    if !fam_endpoints_ok(base, &alpha_a, &collapse_obj(&ra)?, &forget_obj(ctx, &fd, a)?)? {
        rep.push("deq-endpoints", "α_A endpoints");
    }
    if !base.fam_is_iso(&alpha_a) {
        rep.push("deq-iso", "α_A not invertible");
    }
    let r1 = change_of_groups_mor(&one, ctx0, ctx, rho)?;
    let lhs = base.fam_comp(&forget_mor(ctx, &fd, rho)?, &alpha_a)?;
    let rhs = base.fam_comp(&alpha_b, &collapse_mor(&r1)?)?;
    if lhs != rhs {
        rep.push("deq-naturality", "Forget(ρ)∘α_A ≠ α_B∘collapse(1♯ρ)");
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Table materialization: power categories and PC encodings
// ---------------------------------------------------------------------------

/// Stable identifier for an index-to-label table.
pub fn enc_index_map(m: &BTreeMap<String, String>) -> String {
    serde_json::to_string(m).expect("serializable")
}

pub fn dec_index_map(s: &str) -> Result<BTreeMap<String, String>> {
    serde_json::from_str(s).map_err(|_| EngineError::SchemaError(format!("not an index map: {s}")))
}

const POWER_OBJ_CAP: usize = 64;
const POWER_MOR_CAP: usize = 4096;

/// The power category `D^S`: objects and morphisms are index maps into `D`,
/// everything computed componentwise.
pub fn power_cat(d: &FinCat, index: &[String]) -> Result<FinCat> {
    let nob = d.objects.len().checked_pow(index.len() as u32);
    let nmor = d.morphisms.len().checked_pow(index.len() as u32);
    match (nob, nmor) {
        (Some(a), Some(b)) if a <= POWER_OBJ_CAP && b <= POWER_MOR_CAP => {}
        _ => return Err(EngineError::EnumerationCap("power category".into())),
    }
    let mut obj_tables: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for i in index {
        let mut next = Vec::new();
        for t in &obj_tables {
            for o in &d.objects {
                let mut t = t.clone();
                t.insert(i.clone(), o.clone());
                next.push(t);
            }
        }
        obj_tables = next;
    }
    let mut mor_tables: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for i in index {
        let mut next = Vec::new();
        for t in &mor_tables {
            for m in &d.morphisms {
                let mut t = t.clone();
                t.insert(i.clone(), m.id.clone());
                next.push(t);
            }
        }
        mor_tables = next;
    }
    let objects: Vec<String> = obj_tables.iter().map(enc_index_map).collect();
    let mut morphisms = Vec::new();
    for t in &mor_tables {
        let mut src = BTreeMap::new();
        let mut tgt = BTreeMap::new();
        for (i, mid) in t {
            let m = d.mor(mid)?;
            src.insert(i.clone(), m.src.clone());
            tgt.insert(i.clone(), m.tgt.clone());
        }
        morphisms.push(Mor {
            id: enc_index_map(t),
            src: enc_index_map(&src),
            tgt: enc_index_map(&tgt),
        });
    }
    let mut identity = BTreeMap::new();
    for t in &obj_tables {
        let mut idt = BTreeMap::new();
        for (i, o) in t {
            idt.insert(i.clone(), d.id_of(o)?.to_string());
        }
        identity.insert(enc_index_map(t), enc_index_map(&idt));
    }
    let mut compose = BTreeMap::new();
    for ft in &mor_tables {
        for gt in &mor_tables {
            let composable = ft
                .iter()
                .all(|(i, fid)| {
                    let f = d.mor(fid).expect("listed");
                    let g = d.mor(&gt[i]).expect("listed");
                    f.tgt == g.src
                });
            if !composable {
                continue;
            }
            let mut ct = BTreeMap::new();
            for (i, fid) in ft {
                ct.insert(i.clone(), d.comp(&gt[i], fid)?);
            }
            compose.insert((enc_index_map(gt), enc_index_map(ft)), enc_index_map(&ct));
        }
    }
    Ok(FinCat::new(objects, morphisms, identity, compose))
}

/// Materializes a strict table context as an explicit pseudofunctor on the
/// resolution category, with power-category fibres and reindexing functors.
pub fn materialize_table(ctx: &EqContext) -> Result<crate::twocat::PseudofunctorData> {
    let d = match (&ctx.base.core, &ctx.base.twist) {
        (CoreCat::Table(d), Twist::Strict) => d,
        _ => {
            return Err(EngineError::Invalid(
                "materialization needs a strict table core".into(),
            ))
        }
    };
    let mut fibre = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        fibre.insert(gamma.clone(), power_cat(d, &ctx.resl.quot(gamma)?.classes)?);
    }
    let mut fibre_functor = BTreeMap::new();
    for m in &ctx.resl.cat.morphisms {
        let fbar = ctx.resl.qmap(&m.id)?;
        let src_fib = &fibre[&m.tgt];
        let tgt_fib = &fibre[&m.src];
        let reindex = |t: &BTreeMap<String, String>| -> BTreeMap<String, String> {
            fbar.src.iter().map(|s| (s.clone(), t[&fbar.ap(s)].clone())).collect()
        };
        let mut obj_map = BTreeMap::new();
        for o in &src_fib.objects {
            obj_map.insert(o.clone(), enc_index_map(&reindex(&dec_index_map(o)?)));
        }
        let mut mor_map = BTreeMap::new();
        for mm in &src_fib.morphisms {
            mor_map.insert(mm.id.clone(), enc_index_map(&reindex(&dec_index_map(&mm.id)?)));
        }
        fibre_functor.insert(
            m.id.clone(),
            crate::fincat::FunctorData {
                src: src_fib.clone(),
                tgt: tgt_fib.clone(),
                obj_map,
                mor_map,
            },
        );
    }
    crate::twocat::PseudofunctorData::strict(ctx.resl.cat.clone(), fibre, fibre_functor)
}

fn fam_obj_table(a: &FamObj) -> Result<BTreeMap<String, String>> {
    a.vals
        .iter()
        .map(|(k, v)| match v {
            CObj::Lab(l) => Ok((k.clone(), l.clone())),
            CObj::Dim(_) => Err(EngineError::Invalid("matrix fibre in table land".into())),
        })
        .collect()
}

fn fam_mor_table(m: &FamMor) -> Result<BTreeMap<String, String>> {
    m.vals
        .iter()
        .map(|(k, v)| match v {
            CMor::Lab(l) => Ok((k.clone(), l.clone())),
            CMor::Mat(_) => Err(EngineError::Invalid("matrix fibre in table land".into())),
        })
        .collect()
}

/// Encodes a table-core descent family as a pseudocone object of the
/// materialized pseudofunctor.
pub fn eq_to_pcobj(a: &EqObject) -> Result<crate::pseudocone::PCObject> {
    let mut family = BTreeMap::new();
    for (gamma, c) in &a.components {
        family.insert(gamma.clone(), enc_index_map(&fam_obj_table(c)?));
    }
    let mut transitions = BTreeMap::new();
    for (mid, t) in &a.transitions {
        transitions.insert(mid.clone(), enc_index_map(&fam_mor_table(t)?));
    }
    Ok(crate::pseudocone::PCObject { family, transitions })
}

/// Decodes a pseudocone object of a materialized context back to a family.
pub fn pcobj_to_eq(obj: &crate::pseudocone::PCObject) -> Result<EqObject> {
    let mut components = BTreeMap::new();
    for (gamma, enc) in &obj.family {
        let vals = dec_index_map(enc)?
            .into_iter()
            .map(|(k, v)| (k, CObj::Lab(v)))
            .collect();
        components.insert(gamma.clone(), FamObj { vals });
    }
    let mut transitions = BTreeMap::new();
    for (mid, enc) in &obj.transitions {
        let vals = dec_index_map(enc)?
            .into_iter()
            .map(|(k, v)| (k, CMor::Lab(v)))
            .collect();
        transitions.insert(mid.clone(), FamMor { vals });
    }
    Ok(EqObject { components, transitions })
}

pub fn eqmor_components_table(rho: &EqMorphism) -> Result<BTreeMap<String, String>> {
    rho.components
        .iter()
        .map(|(gamma, m)| Ok((gamma.clone(), enc_index_map(&fam_mor_table(m)?))))
        .collect()
}

pub fn pcmor_to_eq(m: &crate::pseudocone::PCMorphism) -> Result<EqMorphism> {
    let mut components = BTreeMap::new();
    for (gamma, enc) in &m.components {
        let vals = dec_index_map(enc)?
            .into_iter()
            .map(|(k, v)| (k, CMor::Lab(v)))
            .collect();
        components.insert(gamma.clone(), FamMor { vals });
    }
    Ok(EqMorphism { components })
}

// ---------------------------------------------------------------------------
// Induction and quotient equivalences
// ---------------------------------------------------------------------------

const EQUIV_CAPS: crate::pseudocone::Caps = crate::pseudocone::Caps {
    base_objects: 8,
    base_morphisms: 64,
    fibre_objects: POWER_OBJ_CAP,
    fibre_morphisms: POWER_MOR_CAP,
};

fn resl_supplied(ctx: &EqContext) -> Result<Vec<(String, String, SetMap)>> {
    ctx.resl
        .maps
        .iter()
        .map(|(id, m)| {
            let mor = ctx.resl.cat.mor(id)?;
            Ok((mor.src.clone(), mor.tgt.clone(), m.clone()))
        })
        .collect()
}

/// Verifies an equivalence between two materialized pseudocone categories
/// given an object-and-morphism translation of descent families.
fn verify_pc_equivalence(
    ctx_src: &EqContext,
    ctx_tgt: &EqContext,
    translate_obj: &dyn Fn(&EqObject) -> Result<EqObject>,
    translate_mor: &dyn Fn(&EqMorphism) -> Result<EqMorphism>,
) -> Result<Report> {
    use crate::pseudocone::{enc_pcmor, enumerate_pc_with_caps, ConeKind};
    let p_src = materialize_table(ctx_src)?;
    let p_tgt = materialize_table(ctx_tgt)?;
    let pc_src = enumerate_pc_with_caps(&p_src, ConeKind::Pseudo, &EQUIV_CAPS)?;
    let pc_tgt = enumerate_pc_with_caps(&p_tgt, ConeKind::Pseudo, &EQUIV_CAPS)?;
    let mut obj_map = BTreeMap::new();
    for (id, obj) in &pc_src.objects {
        let image = translate_obj(&pcobj_to_eq(obj)?)?;
        let image_pc = eq_to_pcobj(&image)?;
        let image_id =
            crate::pseudocone::enc_pcobj(&image_pc.family, &image_pc.transitions);
        if !pc_tgt.objects.contains_key(&image_id) {
            return Err(EngineError::Invalid(format!(
                "translated object {image_id} not a pseudocone over the target"
            )));
        }
        obj_map.insert(id.clone(), image_id);
    }
    let mut mor_map = BTreeMap::new();
    for (id, m) in &pc_src.morphisms {
        let image = translate_mor(&pcmor_to_eq(m)?)?;
        let comps = eqmor_components_table(&image)?;
        let image_id = enc_pcmor(&obj_map[&m.src], &obj_map[&m.tgt], &comps);
        if !pc_tgt.morphisms.contains_key(&image_id) {
            return Err(EngineError::Invalid(format!(
                "translated morphism {image_id} not a pseudocone morphism"
            )));
        }
        mor_map.insert(id.clone(), image_id);
    }
    let functor = crate::fincat::FunctorData {
        src: pc_src.cat.clone(),
        tgt: pc_tgt.cat.clone(),
        obj_map,
        mor_map,
    };
    let mut rep = functor.check().scoped("translation-functor");
    if !rep.is_ok() {
        return Ok(rep);
    }
    match crate::fincat::adjoint_equivalence_from_functor(&functor) {
        Ok(adj) => rep.merge(crate::fincat::check_adjunction(&adj).scoped("adjoint-equivalence")),
        Err(e) => rep.push("equivalence", format!("{e}")),
    }
    Ok(rep)
}

/// `F_H(X) ≃ F_G(G×^H X)` for a subgroup inclusion `ι: H ↪ G`: the
/// comparison `j* ∘ ι♯` is an adjoint equivalence of pseudocone categories.
pub fn induction_equivalence(
    iota: &GroupHom,
    ctx_h: &EqContext,
    ctx_g: &EqContext,
) -> Result<Report> {
    let distinct: BTreeSet<String> = iota.map.values().cloned().collect();
    if distinct.len() != iota.src.elements.len() {
        return Err(EngineError::NotInjective("subgroup inclusion".into()));
    }
    let (ind_x, cls) = induced_gset_with_classes(iota, &ctx_h.x)?;
    if !same_gset(&ind_x, &ctx_g.x) {
        return Err(EngineError::ShapeMismatch(
            "target space is not the induction of the source space".into(),
        ));
    }
    // The restricted middle context over (H, X' restricted along ι).
    let generators: Vec<GSet> = ctx_h.resl.gsets.values().cloned().collect();
    let supplied = resl_supplied(ctx_h)?;
    let ctx_m = EqContext::new(
        iota.src.clone(),
        restrict_gset(iota, &ctx_g.x),
        &generators,
        Some(&supplied),
        ctx_h.base.clone(),
    )?;
    // j: X → X', x ↦ [1, x].
    let mut jmap = BTreeMap::new();
    for x in &ctx_h.x.elems {
        jmap.insert(x.clone(), cls[&pair_id(&iota.tgt.identity, x)].clone());
    }
    let j = SetMap::new(ctx_h.x.elems.clone(), ctx_g.x.elems.clone(), jmap)?;
    verify_pc_equivalence(
        ctx_g,
        ctx_h,
        &|a| pullback_obj(ctx_h, &ctx_m, &j, &change_of_groups(iota, &ctx_m, ctx_g, a)?),
        &|r| pullback_mor(ctx_h, &ctx_m, &j, &change_of_groups_mor(iota, &ctx_m, ctx_g, r)?),
    )
}

/// `F_G(X) ≃ F_{G/H}(H\X)` for a normal subgroup `H` and free `X`: the
/// comparison `π* ∘ q♯` is an adjoint equivalence of pseudocone categories.
pub fn quotient_equivalence(
    ctx_g: &EqContext,
    h_elems: &[String],
    ctx_q: &EqContext,
) -> Result<Report> {
    if !ctx_g.x.is_free(&ctx_g.group) {
        return Err(EngineError::NotFree(ctx_g.x.name.clone()));
    }
    let (qgrp, pi_hom) = quotient_group(&ctx_g.group, h_elems)?;
    if qgrp != ctx_q.group {
        return Err(EngineError::Invalid("quotient-group mismatch".into()));
    }
    // Y = H\X with representatives lexicographically least in each H-orbit.
    let hset: Vec<String> = h_elems.to_vec();
    let rep_of = |x: &str| -> String {
        hset.iter().map(|h| ctx_g.x.act(h, x)).min().expect("nonempty subgroup")
    };
    let mut y_elems: Vec<String> = ctx_g.x.elems.iter().map(|x| rep_of(x)).collect();
    y_elems.sort();
    y_elems.dedup();
    let mut y_action = BTreeMap::new();
    for k in &qgrp.elements {
        for y in &y_elems {
            y_action.insert((k.clone(), y.clone()), rep_of(&ctx_g.x.act(k, y)));
        }
    }
    let y = GSet { name: format!("{}/H", ctx_g.x.name), elems: y_elems, action: y_action };
    if !same_gset(&y, &ctx_q.x) {
        return Err(EngineError::ShapeMismatch(
            "target space is not the orbit quotient of the source space".into(),
        ));
    }
    // The middle context over (G, Y restricted along π).
    let generators: Vec<GSet> = ctx_g.resl.gsets.values().cloned().collect();
    let supplied = resl_supplied(ctx_g)?;
    let ctx_y = EqContext::new(
        ctx_g.group.clone(),
        restrict_gset(&pi_hom, &ctx_q.x),
        &generators,
        Some(&supplied),
        ctx_g.base.clone(),
    )?;
    let mut pmap = BTreeMap::new();
    for x in &ctx_g.x.elems {
        pmap.insert(x.clone(), rep_of(x));
    }
    let pi = SetMap::new(ctx_g.x.elems.clone(), ctx_q.x.elems.clone(), pmap)?;
    verify_pc_equivalence(
        ctx_q,
        ctx_g,
        &|a| pullback_obj(ctx_g, &ctx_y, &pi, &change_of_groups(&pi_hom, &ctx_y, ctx_q, a)?),
        &|r| pullback_mor(ctx_g, &ctx_y, &pi, &change_of_groups_mor(&pi_hom, &ctx_y, ctx_q, r)?),
    )
}

/// Which equivalence of pseudocone categories to verify.
pub enum EquivalenceSpec<'a> {
    Induction { iota: &'a GroupHom, ctx_h: &'a EqContext, ctx_g: &'a EqContext },
    Quotient { ctx_g: &'a EqContext, h_elems: &'a [String], ctx_q: &'a EqContext },
}

pub fn check_equivalences(spec: EquivalenceSpec<'_>) -> Result<Report> {
    match spec {
        EquivalenceSpec::Induction { iota, ctx_h, ctx_g } => {
            induction_equivalence(iota, ctx_h, ctx_g)
        }
        EquivalenceSpec::Quotient { ctx_g, h_elems, ctx_q } => {
            quotient_equivalence(ctx_g, h_elems, ctx_q)
        }
    }
}
