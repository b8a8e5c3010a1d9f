//! Named small instances and seeded generators used by the property suites
//! and the command-line self-test.

use crate::equivariant::{
    compose_homs, induced_gset, induced_gset_with_classes, induced_map, naivification, pair_id,
    regular_gset, restrict_gset, trivial_gset, unpair, CMor, CObj, CoreCat, EqContext, EqMorphism,
    EqObject, FamMor, FamObj, FinGroup, GSet, GroupHom, PointBase, SetMap, Twist,
};
use crate::fincat::{FinCat, FunctorData, Mor, NatTransData};
use crate::matq::{Mat, Q};
use crate::report::{EngineError, Result};
use crate::twocat::{twist_compositors, PseudofunctorData};
use num::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Small categories
// ---------------------------------------------------------------------------

/// A thin category from a reflexive-transitive relation: at most one
/// morphism `a → b`, with id `a->a`.
pub fn thin_cat(objects: &[&str], rel: impl Fn(&str, &str) -> bool) -> FinCat {
    let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
    let mut morphisms = Vec::new();
    let mut identity = BTreeMap::new();
    for a in &objs {
        identity.insert(a.clone(), format!("{a}->{a}"));
        for b in &objs {
            if a == b || rel(a, b) {
                morphisms.push(Mor { id: format!("{a}->{b}"), src: a.clone(), tgt: b.clone() });
            }
        }
    }
    let mut compose = BTreeMap::new();
    for f in &morphisms {
        for g in &morphisms {
            if f.tgt == g.src {
                compose.insert((g.id.clone(), f.id.clone()), format!("{}->{}", f.src, g.tgt));
            }
        }
    }
    FinCat::new(objs, morphisms, identity, compose)
}

/// The terminal category.
pub fn one_cat() -> FinCat {
    thin_cat(&["*"], |_, _| false)
}

/// The walking arrow `0 → 1`.
pub fn arrow_cat() -> FinCat {
    thin_cat(&["0", "1"], |a, b| a == "0" && b == "1")
}

/// The composable chain `0 → 1 → 2`.
pub fn chain3_cat() -> FinCat {
    thin_cat(&["0", "1", "2"], |a, b| a < b)
}

/// Two objects, identities only.
pub fn disc2() -> FinCat {
    thin_cat(&["A", "B"], |_, _| false)
}

/// Two objects with exactly one morphism in each direction (the walking
/// isomorphism).
pub fn chaos2() -> FinCat {
    thin_cat(&["A", "B"], |_, _| true)
}

/// The subset lattice of a 2-element set, objects as bitmasks; meets and
/// joins exist, top = "11".
pub fn pow2_cat() -> FinCat {
    let leq = |a: &str, b: &str| {
        a.bytes().zip(b.bytes()).all(|(x, y)| x <= y)
    };
    thin_cat(&["00", "01", "10", "11"], leq)
}

/// The cyclic group Z/n as a one-object category; morphisms "r0" … "r{n-1}".
pub fn bzn(n: usize) -> FinCat {
    let objs = vec!["*".to_string()];
    let mut morphisms = Vec::new();
    for i in 0..n {
        morphisms.push(Mor { id: format!("r{i}"), src: "*".into(), tgt: "*".into() });
    }
    let identity = [("*".to_string(), "r0".to_string())].into_iter().collect();
    let mut compose = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            compose.insert((format!("r{i}"), format!("r{j}")), format!("r{}", (i + j) % n));
        }
    }
    FinCat::new(objs, morphisms, identity, compose)
}

pub fn bz2() -> FinCat {
    bzn(2)
}

// ---------------------------------------------------------------------------
// Pseudofunctors
// ---------------------------------------------------------------------------

/// The constant strict pseudofunctor at a fibre.
pub fn cnst(base: &FinCat, fibre: &FinCat) -> Result<PseudofunctorData> {
    let mut fib = BTreeMap::new();
    let mut ff = BTreeMap::new();
    for x in &base.objects {
        fib.insert(x.clone(), fibre.clone());
    }
    for m in &base.morphisms {
        ff.insert(m.id.clone(), FunctorData::identity(fibre));
    }
    PseudofunctorData::strict(base.clone(), fib, ff)
}

/// The strict involution pseudofunctor over the one-object Z/2 base whose
/// nontrivial morphism swaps the two fibre objects.
pub fn swap_pseudofunctor(fibre: &FinCat) -> Result<PseudofunctorData> {
    let base = bz2();
    let swap_obj = |o: &str| if o == "A" { "B" } else { "A" };
    let mut obj_map = BTreeMap::new();
    for o in &fibre.objects {
        obj_map.insert(o.clone(), swap_obj(o).to_string());
    }
    let mut mor_map = BTreeMap::new();
    for m in &fibre.morphisms {
        mor_map.insert(
            m.id.clone(),
            format!("{}->{}", swap_obj(&m.src), swap_obj(&m.tgt)),
        );
    }
    let swap = FunctorData { src: fibre.clone(), tgt: fibre.clone(), obj_map, mor_map };
    let mut fib = BTreeMap::new();
    fib.insert("*".to_string(), fibre.clone());
    let mut ff = BTreeMap::new();
    ff.insert("r0".to_string(), FunctorData::identity(fibre));
    ff.insert("r1".to_string(), swap);
    PseudofunctorData::strict(base, fib, ff)
}

/// All endofunctors of a small category, lexicographically ordered.
pub fn all_endofunctors(d: &FinCat) -> Vec<FunctorData> {
    let mut obj_maps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for o in &d.objects {
        let mut next = Vec::new();
        for m in &obj_maps {
            for t in &d.objects {
                let mut m = m.clone();
                m.insert(o.clone(), t.clone());
                next.push(m);
            }
        }
        obj_maps = next;
    }
    let mut out = Vec::new();
    for om in obj_maps {
        let mut mor_maps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for m in &d.morphisms {
            let candidates: Vec<String> = d.hom(&om[&m.src], &om[&m.tgt]);
            let mut next = Vec::new();
            for mm in &mor_maps {
                for c in &candidates {
                    let mut mm = mm.clone();
                    mm.insert(m.id.clone(), c.clone());
                    next.push(mm);
                }
            }
            mor_maps = next;
        }
        for mm in mor_maps {
            let f = FunctorData { src: d.clone(), tgt: d.clone(), obj_map: om.clone(), mor_map: mm };
            if f.check().is_ok() {
                out.push(f);
            }
        }
    }
    out
}

fn assign_functors(
    base: &FinCat,
    endos: &[FunctorData],
    order: &[String],
    idx: usize,
    acc: &mut BTreeMap<String, FunctorData>,
    rng_order: &[usize],
) -> bool {
    if idx == order.len() {
        return true;
    }
    let mid = &order[idx];
    for &k in rng_order {
        let cand = &endos[k];
        acc.insert(mid.clone(), cand.clone());
        // Check all composition constraints among assigned morphisms.
        let consistent = base.compose.iter().all(|((g, f), r)| {
            match (acc.get(f), acc.get(g), acc.get(r)) {
                (Some(ff), Some(fg), Some(fr)) => {
                    crate::fincat::compose_functors(fg, ff)
                        .map(|c| c.same_tables(fr))
                        .unwrap_or(false)
                }
                _ => true,
            }
        });
        if consistent && assign_functors(base, endos, order, idx + 1, acc, rng_order) {
            return true;
        }
        acc.remove(mid);
    }
    false
}

/// A seeded strict pseudofunctor: fibre `d` everywhere, fibre functors found
/// by backtracking over endofunctor assignments respecting composition.
pub fn random_strict_pseudofunctor(
    base: &FinCat,
    d: &FinCat,
    seed: u64,
) -> Result<PseudofunctorData> {
    let endos = all_endofunctors(d);
    let id_idx = endos
        .iter()
        .position(|f| f.same_tables(&FunctorData::identity(d)))
        .expect("identity endofunctor exists");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: BTreeMap<String, FunctorData> = BTreeMap::new();
    let mut order = Vec::new();
    for m in &base.morphisms {
        if base.is_identity(&m.id) {
            acc.insert(m.id.clone(), endos[id_idx].clone());
        } else {
            order.push(m.id.clone());
        }
    }
    let mut rng_order: Vec<usize> = (0..endos.len()).collect();
    rng_order.shuffle(&mut rng);
    if !assign_functors(base, &endos, &order, 0, &mut acc, &rng_order) {
        return Err(EngineError::Invalid("no coherent endofunctor assignment".into()));
    }
    let mut fib = BTreeMap::new();
    for x in &base.objects {
        fib.insert(x.clone(), d.clone());
    }
    PseudofunctorData::strict(base.clone(), fib, acc)
}

/// All natural automorphisms of an endofunctor of a small category.
pub fn natural_automorphisms(f: &FunctorData) -> Vec<NatTransData> {
    let mut tables: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for o in &f.src.objects {
        let fo = f.ap_obj(o).expect("total");
        let isos: Vec<String> = f
            .tgt
            .hom(fo, fo)
            .into_iter()
            .filter(|m| f.tgt.is_iso(m))
            .collect();
        let mut next = Vec::new();
        for t in &tables {
            for i in &isos {
                let mut t = t.clone();
                t.insert(o.clone(), i.clone());
                next.push(t);
            }
        }
        tables = next;
    }
    tables
        .into_iter()
        .map(|components| NatTransData { src: f.clone(), tgt: f.clone(), components })
        .filter(|n| n.check().is_ok())
        .collect()
}

/// A seeded twist of a strict pseudofunctor by natural automorphisms
/// `ω_f` with `ω_id = id`.
pub fn random_twist(p: &PseudofunctorData, seed: u64) -> Result<PseudofunctorData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = BTreeMap::new();
    for m in &p.base.morphisms {
        let ff = p.ff(&m.id)?;
        let choice = if p.base.is_identity(&m.id) {
            NatTransData::identity(ff)
        } else {
            let autos = natural_automorphisms(ff);
            autos[rng.gen_range(0..autos.len())].clone()
        };
        omega.insert(m.id.clone(), choice);
    }
    twist_compositors(p, &omega)
}

/// The seeded pseudofunctor pool: small bases × small fibres, strict
/// backbone plus a seeded compositor twist when the fibre allows one.
pub fn random_pseudofunctor(seed: u64) -> Result<PseudofunctorData> {
    let bases = [one_cat(), arrow_cat(), chain3_cat(), bz2(), chaos2()];
    let fibres = [disc2(), chaos2(), bz2(), bzn(3)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    let base = &bases[rng.gen_range(0..bases.len())];
    let fibre = &fibres[rng.gen_range(0..fibres.len())];
    let strict = random_strict_pseudofunctor(base, fibre, rng.gen())?;
    if rng.gen_bool(0.5) {
        random_twist(&strict, rng.gen())
    } else {
        Ok(strict)
    }
}

// ---------------------------------------------------------------------------
// Monoidal data on the subset lattice
// ---------------------------------------------------------------------------

fn pow2_meet(a: &str, b: &str) -> String {
    a.bytes()
        .zip(b.bytes())
        .map(|(x, y)| if x == b'1' && y == b'1' { '1' } else { '0' })
        .collect()
}

/// Strict symmetric monoidal data on a pseudofunctor with subset-lattice
/// fibres: tensor = meet, unit = top, all structure morphisms identities.
pub fn pow2_monoidal(p: &PseudofunctorData) -> crate::pseudocone::MonoidalData {
    let mut tensor_obj = BTreeMap::new();
    let mut tensor_mor = BTreeMap::new();
    let mut unit = BTreeMap::new();
    let mut theta = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    let mut braiding = BTreeMap::new();
    for x in &p.base.objects {
        let fib = p.fib(x).expect("fibre");
        let mut to = BTreeMap::new();
        let mut tm = BTreeMap::new();
        let mut br = BTreeMap::new();
        for a in &fib.objects {
            for b in &fib.objects {
                let m = pow2_meet(a, b);
                to.insert((a.clone(), b.clone()), m.clone());
                br.insert((a.clone(), b.clone()), format!("{m}->{m}"));
            }
        }
        for f in &fib.morphisms {
            for g in &fib.morphisms {
                tm.insert(
                    (f.id.clone(), g.id.clone()),
                    format!("{}->{}", pow2_meet(&f.src, &g.src), pow2_meet(&f.tgt, &g.tgt)),
                );
            }
        }
        tensor_obj.insert(x.clone(), to);
        tensor_mor.insert(x.clone(), tm);
        braiding.insert(x.clone(), br);
        unit.insert(x.clone(), "11".to_string());
    }
    for m in &p.base.morphisms {
        let ff = p.ff(&m.id).expect("fibre functor");
        let fib = p.fib(&m.src).expect("fibre");
        for a in &ff.src.objects {
            for b in &ff.src.objects {
                let lhs = pow2_meet(ff.ap_obj(a).unwrap(), ff.ap_obj(b).unwrap());
                theta.insert(
                    (m.id.clone(), a.clone(), b.clone()),
                    fib.id_of(&lhs).unwrap().to_string(),
                );
            }
        }
        sigma.insert(m.id.clone(), fib.id_of("11").unwrap().to_string());
    }
    crate::pseudocone::MonoidalData {
        tensor_obj,
        tensor_mor,
        unit,
        theta,
        sigma,
        braiding: Some(braiding),
    }
}

/// A meet-preserving strict pseudofunctor over the one-object Z/2 base with
/// subset-lattice fibre: the involution swaps the two singletons.
pub fn pow2_swap_pseudofunctor() -> Result<PseudofunctorData> {
    let base = bz2();
    let fibre = pow2_cat();
    let swap_obj = |o: &str| -> String { o.chars().rev().collect() };
    let mut obj_map = BTreeMap::new();
    let mut mor_map = BTreeMap::new();
    for o in &fibre.objects {
        obj_map.insert(o.clone(), swap_obj(o));
    }
    for m in &fibre.morphisms {
        mor_map.insert(m.id.clone(), format!("{}->{}", swap_obj(&m.src), swap_obj(&m.tgt)));
    }
    let swap = FunctorData { src: fibre.clone(), tgt: fibre.clone(), obj_map, mor_map };
    let mut fib = BTreeMap::new();
    fib.insert("*".to_string(), fibre.clone());
    let mut ff = BTreeMap::new();
    ff.insert("r0".to_string(), FunctorData::identity(&fibre));
    ff.insert("r1".to_string(), swap);
    PseudofunctorData::strict(base, fib, ff)
}

// ---------------------------------------------------------------------------
// Equivariant contexts
// ---------------------------------------------------------------------------

/// Generators `{G, G_c}` with translations and the naivification comparison
/// maps, sufficient for constructing Θ.
pub fn theta_generators(g: &FinGroup) -> Result<(Vec<GSet>, Vec<(String, String, SetMap)>)> {
    let mut greg = regular_gset(g);
    greg.name = "G".into();
    let (mut gc, a, p) = naivification(g, &greg)?;
    gc.name = "G_c".into();
    let mut supplied = Vec::new();
    for h in &g.elements {
        // Right translation γ ↦ γh, equivariant for the left action.
        let map = greg
            .elems
            .iter()
            .map(|x| (x.clone(), g.op(x, h)))
            .collect();
        supplied.push((
            "G".to_string(),
            "G".to_string(),
            SetMap::new(greg.elems.clone(), greg.elems.clone(), map)?,
        ));
    }
    supplied.push(("G_c".to_string(), "G".to_string(), a));
    supplied.push(("G_c".to_string(), "G".to_string(), p));
    Ok((vec![greg, gc], supplied))
}

/// A context whose generator list is closed under naivification for `G`.
pub fn eq_context_theta(g: &FinGroup, x: &GSet, base: PointBase) -> Result<EqContext> {
    let (gens, supplied) = theta_generators(g)?;
    EqContext::new(g.clone(), x.clone(), &gens, Some(&supplied), base)
}

/// Contexts for the de-equivariantification comparison: `G` on `x` with the
/// regular generator presented as an induction space, and the trivial group
/// on the same carrier.
pub fn deq_contexts(g: &FinGroup, x: &GSet, base: &PointBase) -> Result<(EqContext, EqContext)> {
    let one = GroupHom::from_trivial(g);
    let mut pt = trivial_gset(&FinGroup::trivial(), 1);
    pt.name = "pt".into();
    let mut ind = induced_gset(&one, &pt)?;
    ind.name = "ind_pt".into();
    let ctx = EqContext::new(g.clone(), x.clone(), &[ind], None, base.clone())?;
    let ctx0 = EqContext::new(
        FinGroup::trivial(),
        restrict_gset(&one, x),
        &[pt],
        None,
        base.clone(),
    )?;
    Ok((ctx, ctx0))
}

/// The underlying comparison map `ρ: ind_ψ(ind_φ Z) → ind_{ψφ} Z`,
/// `[g₂,[g₁,γ]] ↦ [g₂ψ(g₁), γ]`, with its endpoint induction spaces.
pub fn chofg_rho(
    phi: &GroupHom,
    psi: &GroupHom,
    z: &GSet,
) -> Result<(GSet, GSet, SetMap)> {
    let inner = induced_gset(phi, z)?;
    let src = induced_gset(psi, &inner)?;
    let psiphi = compose_homs(psi, phi)?;
    let (tgt, cls) = induced_gset_with_classes(&psiphi, z)?;
    let mut map = BTreeMap::new();
    for r in &src.elems {
        let (g2, w) = unpair(r)?;
        let (g1, c) = unpair(&w)?;
        map.insert(r.clone(), cls[&pair_id(&psi.tgt.op(&g2, &psi.ap(&g1)), &c)].clone());
    }
    let rho = SetMap::new(src.elems.clone(), tgt.elems.clone(), map)?;
    Ok((src, tgt, rho))
}

/// The change-of-groups chain trivial → Z/2 → Z/4 → Z/4 (last map the
/// identity) over a one-point space, with every needed induction space and
/// comparison morphism in the generator lists.
#[allow(clippy::type_complexity)]
pub fn chofg_chain_fixture(
    base: &PointBase,
) -> Result<(GroupHom, GroupHom, GroupHom, EqContext, EqContext, EqContext, EqContext)> {
    let g1 = FinGroup::z_mod(2);
    let g2 = FinGroup::z_mod(4);
    let phi = GroupHom::from_trivial(&g1);
    let psi = GroupHom::new(
        g1.clone(),
        g2.clone(),
        [("0".to_string(), "0".to_string()), ("1".to_string(), "2".to_string())]
            .into_iter()
            .collect(),
    )?;
    let chi = GroupHom::identity(&g2);
    let psiphi = compose_homs(&psi, &phi)?;
    let chipsi = compose_homs(&chi, &psi)?;
    let x3 = trivial_gset(&g2, 1);
    let x2 = restrict_gset(&chi, &x3);
    let x1 = restrict_gset(&psi, &x2);
    let x0 = restrict_gset(&phi, &x1);
    let mut pt = trivial_gset(&FinGroup::trivial(), 1);
    pt.name = "pt".into();
    let mut p1 = induced_gset(&phi, &pt)?;
    p1.name = "P1".into();
    // Middle Z/4 context: Q2 = ind_ψ(P1), D2 = ind_{ψφ}(pt), ρ_d: Q2 → D2.
    let (q2_raw, d2_raw, rho_d) = chofg_rho(&phi, &psi, &pt)?;
    let mut q2 = q2_raw;
    q2.name = "Q2".into();
    let mut d2 = d2_raw;
    d2.name = "D2".into();
    // Final Z/4 context: images of everything under χ plus ρ comparisons.
    let (r3_raw, e3_raw, rho_b) = chofg_rho(&psi, &chi, &p1)?;
    let mut r3 = r3_raw;
    r3.name = "R3".into();
    let mut e3 = e3_raw;
    e3.name = "E3".into();
    let (s3_raw, d3_raw, rho_c) = chofg_rho(&psiphi, &chi, &pt)?;
    let mut s3 = s3_raw;
    s3.name = "S3".into();
    let mut d3 = d3_raw;
    d3.name = "D3".into();
    let (_, d3b, rho_a) = chofg_rho(&phi, &chipsi, &pt)?;
    debug_assert_eq!(d3b.elems, d3.elems);
    let rho_chid = induced_map(&chi, &q2, &d2, &rho_d)?;
    let ctx0 = EqContext::new(FinGroup::trivial(), x0, &[pt], Some(&[]), base.clone())?;
    let ctx1 = EqContext::new(g1, x1, &[p1], Some(&[]), base.clone())?;
    let ctx2 = EqContext::new(
        g2.clone(),
        x2,
        &[d2, q2],
        Some(&[("Q2".into(), "D2".into(), rho_d)]),
        base.clone(),
    )?;
    let ctx3 = EqContext::new(
        g2,
        x3,
        &[d3, e3, r3, s3],
        Some(&[
            ("E3".into(), "D3".into(), rho_a),
            ("R3".into(), "E3".into(), rho_b),
            ("S3".into(), "D3".into(), rho_c),
            ("R3".into(), "S3".into(), rho_chid),
        ]),
        base.clone(),
    )?;
    Ok((phi, psi, chi, ctx0, ctx1, ctx2, ctx3))
}

/// Contexts for the induction equivalence `F_H(X) ≃ F_G(G×^H X)` with
/// `H = Z/2 ≤ G = Z/4` and `X` the regular H-set.
pub fn induction_fixture(core: &FinCat) -> Result<(GroupHom, EqContext, EqContext)> {
    let h = FinGroup::z_mod(2);
    let g = FinGroup::z_mod(4);
    let iota = GroupHom::new(
        h.clone(),
        g.clone(),
        [("0".to_string(), "0".to_string()), ("1".to_string(), "2".to_string())]
            .into_iter()
            .collect(),
    )?;
    let mut hreg = regular_gset(&h);
    hreg.name = "H".into();
    let xg = induced_gset(&iota, &hreg)?;
    let mut ind_h = induced_gset(&iota, &hreg)?;
    ind_h.name = "indH".into();
    let base = PointBase::new(CoreCat::Table(core.clone()), Twist::Strict)?;
    let ctx_h = EqContext::new(h, hreg.clone(), &[hreg], None, base.clone())?;
    let ctx_g = EqContext::new(g, xg, &[ind_h], None, base)?;
    Ok((iota, ctx_h, ctx_g))
}

/// Contexts for the quotient equivalence `F_G(X) ≃ F_{G/H}(H\X)` with
/// `G = Z/4`, `H = {0, 2}`, and `X` the regular G-set.
pub fn quotient_fixture(core: &FinCat) -> Result<(EqContext, Vec<String>, EqContext)> {
    let g = FinGroup::z_mod(4);
    let h_elems = vec!["0".to_string(), "2".to_string()];
    let mut greg = regular_gset(&g);
    greg.name = "G".into();
    let base = PointBase::new(CoreCat::Table(core.clone()), Twist::Strict)?;
    let ctx_g = EqContext::new(g.clone(), greg.clone(), &[greg.clone()], None, base.clone())?;
    let (qgrp, pi) = crate::equivariant::quotient_group(&g, &h_elems)?;
    // Y = H\X with lexicographically least representatives.
    let rep_of = |x: &str| -> String {
        h_elems.iter().map(|hh| greg.act(hh, x)).min().expect("nonempty")
    };
    let mut y_elems: Vec<String> = greg.elems.iter().map(|x| rep_of(x)).collect();
    y_elems.sort();
    y_elems.dedup();
    let mut y_action = BTreeMap::new();
    for k in &qgrp.elements {
        for y in &y_elems {
            y_action.insert((k.clone(), y.clone()), rep_of(&greg.act(k, y)));
        }
    }
    let y = GSet { name: format!("{}/H", greg.name), elems: y_elems, action: y_action };
    let mut q_gen = induced_gset(&pi, &greg)?;
    q_gen.name = "Q".into();
    let ctx_q = EqContext::new(qgrp, y, &[q_gen], None, base)?;
    Ok((ctx_g, h_elems, ctx_q))
}

// ---------------------------------------------------------------------------
// Matrix-fibre families
// ---------------------------------------------------------------------------

/// The rank-`dim` twisted unit family: constant dimension with scalar
/// transitions `τ_f = (1/c(f̄))·I`.
pub fn twisted_unit(ctx: &EqContext, dim: usize) -> Result<EqObject> {
    let base = &ctx.base;
    if !matches!(base.core, CoreCat::MatQ { .. }) {
        return Err(EngineError::Invalid("matrix fibres required".into()));
    }
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        let vals = ctx
            .resl
            .quot(gamma)?
            .classes
            .iter()
            .map(|c| (c.clone(), CObj::Dim(dim)))
            .collect();
        components.insert(gamma.clone(), FamObj { vals });
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx.resl.cat.morphisms {
        let scalar = Q::one() / base.cval(ctx.resl.qmap(&m.id)?);
        let vals = ctx
            .resl
            .quot(&m.src)?
            .classes
            .iter()
            .map(|c| (c.clone(), CMor::Mat(Mat::scalar(dim, &scalar))))
            .collect();
        transitions.insert(m.id.clone(), FamMor { vals });
    }
    Ok(EqObject { components, transitions })
}

/// A seeded invertible matrix with small rational entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    loop {
        let data: Vec<Q> = (0..n * n)
            .map(|_| Q::from_integer(rng.gen_range(-2i64..=2).into()))
            .collect();
        let m = Mat { rows: n, cols: n, data };
        if m.is_invertible() {
            return m;
        }
    }
}

/// A componentwise isomorphism with seeded invertible components, matching
/// the dimensions of `a`.
pub fn random_conjugator(ctx: &EqContext, a: &EqObject, seed: u64) -> Result<EqMorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        let mut vals = BTreeMap::new();
        for (c, o) in &a.comp_at(gamma)?.vals {
            let n = match o {
                CObj::Dim(n) => *n,
                CObj::Lab(_) => return Err(EngineError::Invalid("matrix fibres required".into())),
            };
            vals.insert(c.clone(), CMor::Mat(random_invertible(&mut rng, n)));
        }
        components.insert(gamma.clone(), FamMor { vals });
    }
    Ok(EqMorphism { components })
}

/// Conjugates a family by a componentwise isomorphism `u`:
/// `τ^B_f = u_Γ ∘ τ^A_f ∘ f̄*(u_{Γ'})⁻¹`, so `u: A → B` is a morphism.
pub fn conjugate_eq_object(ctx: &EqContext, a: &EqObject, u: &EqMorphism) -> Result<EqObject> {
    let base = &ctx.base;
    let mut transitions = BTreeMap::new();
    for m in &ctx.resl.cat.morphisms {
        let fbar = ctx.resl.qmap(&m.id)?;
        let pulled_inv = base.fam_inv(&base.pull_mor(fbar, u.comp_at(&m.tgt)?)?)?;
        let t = base.fam_comp(
            u.comp_at(&m.src)?,
            &base.fam_comp(a.trans_at(&m.id)?, &pulled_inv)?,
        )?;
        transitions.insert(m.id.clone(), t);
    }
    Ok(EqObject { components: a.components.clone(), transitions })
}

/// A seeded valid matrix family: the twisted unit conjugated by a random
/// componentwise isomorphism; also returns the connecting morphism.
pub fn random_eq_object(
    ctx: &EqContext,
    seed: u64,
    dim: usize,
) -> Result<(EqObject, EqObject, EqMorphism)> {
    let unit = twisted_unit(ctx, dim)?;
    let u = random_conjugator(ctx, &unit, seed)?;
    let conj = conjugate_eq_object(ctx, &unit, &u)?;
    Ok((unit, conj, u))
}

/// The constant table family at a chosen core object, valid for strict
/// table contexts.
pub fn constant_table_object(ctx: &EqContext, label: &str) -> Result<EqObject> {
    let d = match &ctx.base.core {
        CoreCat::Table(d) => d,
        _ => return Err(EngineError::Invalid("table fibres required".into())),
    };
    if !d.has_object(label) {
        return Err(EngineError::UnknownObject(label.to_string()));
    }
    let idm = d.id_of(label)?.to_string();
    let mut components = BTreeMap::new();
    let mut transitions = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        let vals = ctx
            .resl
            .quot(gamma)?
            .classes
            .iter()
            .map(|c| (c.clone(), CObj::Lab(label.to_string())))
            .collect();
        components.insert(gamma.clone(), FamObj { vals });
    }
    for m in &ctx.resl.cat.morphisms {
        let vals = ctx
            .resl
            .quot(&m.src)?
            .classes
            .iter()
            .map(|c| (c.clone(), CMor::Lab(idm.clone())))
            .collect();
        transitions.insert(m.id.clone(), FamMor { vals });
    }
    Ok(EqObject { components, transitions })
}
