//! The verification suite shared by the acceptance test target and the
//! command-line `selftest`: each criterion exercises one guarantee of the
//! engine end to end and reports pass/fail with a short detail string.

use crate::equivariant::{
    change_of_groups, check_git_cocycle, check_theta_natural, de_equivariantification_check,
    equivariance_theta, pasting_associativity, regular_gset, trivial_gset, validate_eq_family,
    validate_eq_morphism, CoreCat, FinGroup, PointBase, SetMap, Twist,
};
use crate::fincat::{
    adjoint_equivalence_from_functor, check_adjunction, compose_functors, FunctorData,
    NatTransData, Orientation,
};
use crate::fixtures::*;
use crate::matq::Q;
use crate::pseudocone::{
    collapse_terminal, enumerate_pc, pc_limit, validate_family, verify_pseudolimit, ConeKind,
    TestCone,
};
use crate::trace::{
    direct_sum, equivariant_trace, equivariant_trace_with, pushforward_along_injection,
    PointData,
};
use crate::twocat::{ModificationData, PseudoNatData, PseudofunctorData};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: std::time::Duration,
}

fn result(
    index: usize,
    name: &'static str,
    f: impl FnOnce() -> Result<String, String>,
) -> CriterionResult {
    let start = std::time::Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    match r {
        Ok(detail) => CriterionResult { index, name, pass: true, detail, elapsed },
        Err(detail) => CriterionResult { index, name, pass: false, detail, elapsed },
    }
}

fn matq_base(tw: Twist) -> PointBase {
    PointBase::new(CoreCat::MatQ { cap: 16 }, tw).expect("matrix point base")
}

// --- 1: pseudocones agree with Cartesian sections -------------------------

fn c1() -> Result<String, String> {
    let mut n = 0;
    for seed in 0..50u64 {
        let p = random_pseudofunctor(seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = crate::grothendieck::compare_pc_csect(&p)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if !rep.is_ok() {
            return Err(format!("seed {seed}: {:?}", rep.violations[0]));
        }
        n += 1;
    }
    Ok(format!("{n} pseudofunctors compared against section categories"))
}

// --- 2: pseudolimit universal property ------------------------------------

fn leg(shape: &crate::fincat::FinCat, tgt: &crate::fincat::FinCat, choice: &BTreeMap<String, String>) -> FunctorData {
    let obj_map = choice.clone();
    let mor_map = shape
        .morphisms
        .iter()
        .map(|m| {
            let s = &choice[&m.src];
            let t = &choice[&m.tgt];
            (m.id.clone(), format!("{s}->{t}"))
        })
        .collect();
    FunctorData { src: shape.clone(), tgt: tgt.clone(), obj_map, mor_map }
}

fn c2() -> Result<String, String> {
    let fibre = chaos2();
    let mut cones = 0;
    for base in [one_cat(), arrow_cat()] {
        let p = cnst(&base, &fibre).map_err(|e| e.to_string())?;
        let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
        for shape in [one_cat(), disc2()] {
            // All object choices for all legs at once.
            let mut choices: Vec<BTreeMap<String, BTreeMap<String, String>>> =
                vec![BTreeMap::new()];
            for x in &base.objects {
                let mut next = Vec::new();
                for c in &choices {
                    let mut pick: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
                    for z in &shape.objects {
                        let mut np = Vec::new();
                        for fo in &fibre.objects {
                            for pk in &pick {
                                let mut pk = pk.clone();
                                pk.insert(z.clone(), fo.clone());
                                np.push(pk);
                            }
                        }
                        pick = np;
                    }
                    for pk in pick {
                        let mut c = c.clone();
                        c.insert(x.clone(), pk);
                        next.push(c);
                    }
                }
                choices = next;
            }
            for choice in choices {
                let legs: BTreeMap<String, FunctorData> = choice
                    .iter()
                    .map(|(x, pick)| (x.clone(), leg(&shape, &fibre, pick)))
                    .collect();
                let mut witnesses = BTreeMap::new();
                for m in &base.morphisms {
                    let src_nat = compose_functors(&legs[&m.tgt], p.ff(&m.id).unwrap()).unwrap();
                    let components = shape
                        .objects
                        .iter()
                        .map(|z| {
                            let from = src_nat.ap_obj(z).unwrap();
                            let to = legs[&m.src].ap_obj(z).unwrap();
                            (z.clone(), format!("{from}->{to}"))
                        })
                        .collect();
                    witnesses.insert(
                        m.id.clone(),
                        NatTransData { src: src_nat, tgt: legs[&m.src].clone(), components },
                    );
                }
                let cone = TestCone { shape: shape.clone(), legs, witnesses };
                let fact = verify_pseudolimit(&pc, &cone).map_err(|e| e.to_string())?;
                if !fact.report.is_ok() {
                    return Err(format!("factorization fails: {:?}", fact.report.violations[0]));
                }
                if !fact.unique {
                    return Err("mediating functor not unique".into());
                }
                cones += 1;
            }
        }
    }
    Ok(format!("{cones} test cones factored uniquely"))
}

// --- 3: identity transitions ----------------------------------------------

fn c3() -> Result<String, String> {
    let mut objects = 0;
    for seed in 0..10u64 {
        let p = random_pseudofunctor(seed).map_err(|e| e.to_string())?;
        let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
        for o in pc.objects.values() {
            for x in &p.base.objects {
                let idm = p.base.id_of(x).map_err(|e| e.to_string())?;
                if !p.fib(x).unwrap().is_identity(&o.transitions[idm]) {
                    return Err(format!("seed {seed}: nonidentity τ_id at {x}"));
                }
            }
            objects += 1;
        }
    }
    let mut broken = 0;
    for seed in 0..20u64 {
        let p = random_strict_pseudofunctor(&arrow_cat(), &bzn(3), seed)
            .map_err(|e| e.to_string())?;
        let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
        let o = pc.objects.values().next().ok_or("no pseudocones enumerated")?;
        let idm = p.base.id_of("0").map_err(|e| e.to_string())?;
        let mut bad = o.clone();
        bad.transitions.insert(idm.to_string(), format!("r{}", 1 + (seed as usize % 2)));
        if validate_family(&p, &bad, ConeKind::Pseudo).map_err(|e| e.to_string())?.is_ok() {
            return Err(format!("seed {seed}: perturbed identity transition not rejected"));
        }
        broken += 1;
    }
    Ok(format!("{objects} families with identity transitions; {broken}/20 perturbations rejected"))
}

// --- 4: fibrewise (co)limits against the brute-force oracle ----------------

fn c4() -> Result<String, String> {
    let fibre = pow2_cat();
    let mut instances = 0;
    for base in [one_cat(), arrow_cat(), chain3_cat()] {
        let p = cnst(&base, &fibre).map_err(|e| e.to_string())?;
        let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
        let find = |v: &str| -> String {
            pc.objects
                .iter()
                .find(|(_, o)| o.family[&base.objects[0]] == v)
                .map(|(id, _)| id.clone())
                .expect("diagonal family")
        };
        let shape = disc2();
        for (va, vb) in [("01", "10"), ("00", "11"), ("01", "11"), ("01", "01")] {
            let d = FunctorData {
                src: shape.clone(),
                tgt: pc.cat.clone(),
                obj_map: [("A".to_string(), find(va)), ("B".to_string(), find(vb))]
                    .into_iter()
                    .collect(),
                mor_map: [
                    ("A->A".to_string(), pc.cat.id_of(&find(va)).unwrap().to_string()),
                    ("B->B".to_string(), pc.cat.id_of(&find(vb)).unwrap().to_string()),
                ]
                .into_iter()
                .collect(),
            };
            for orientation in [Orientation::Limit, Orientation::Colimit] {
                let r = pc_limit(&pc, &d, orientation).map_err(|e| e.to_string())?;
                if !r.report.is_ok() {
                    return Err(format!(
                        "{:?} of ({va},{vb}) over {} objects: {:?}",
                        orientation,
                        base.objects.len(),
                        r.report.violations[0]
                    ));
                }
                instances += 1;
            }
        }
    }
    if instances < 20 {
        return Err(format!("only {instances} oracle instances"));
    }
    Ok(format!("{instances} fibrewise (co)limits match the universal cone"))
}

// --- 5: terminal collapse --------------------------------------------------

fn c5() -> Result<String, String> {
    let mut cases = 0;
    for base in [one_cat(), arrow_cat(), chain3_cat(), pow2_cat()] {
        // The subset-lattice base with the 3-element monoid fibre produces
        // thousands of cone morphisms; keep that point tractable with bz2.
        let big = base.objects.len() == 4;
        for fibre in [chaos2(), if big { bz2() } else { bzn(3) }] {
            let p = cnst(&base, &fibre).map_err(|e| e.to_string())?;
            let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
            let eq = collapse_terminal(&pc).map_err(|e| e.to_string())?;
            if !eq.report.is_ok() {
                return Err(format!("collapse fails: {:?}", eq.report.violations[0]));
            }
            let rl = compose_functors(&eq.l, &eq.r).map_err(|e| e.to_string())?;
            if !rl.same_tables(&FunctorData::identity(&eq.l.src)) {
                return Err("R∘L is not the identity on the nose".into());
            }
            cases += 1;
        }
    }
    let p = cnst(&bz2(), &chaos2()).map_err(|e| e.to_string())?;
    let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
    if collapse_terminal(&pc).is_ok() {
        return Err("collapse accepted a base without a terminal object".into());
    }
    Ok(format!("{cases} terminal collapses verified; missing terminal rejected"))
}

// --- 6: 2-functoriality, lifted adjunctions, equivalences ------------------

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

fn c6() -> Result<String, String> {
    let p = cnst(&arrow_cat(), &chaos2()).map_err(|e| e.to_string())?;
    let pc = enumerate_pc(&p, ConeKind::Pseudo).map_err(|e| e.to_string())?;
    let alpha = swap_pseudonat(&p);
    let beta = swap_pseudonat(&p);
    let eta = ModificationData::identity(&alpha);
    let laws = crate::functors::pc_two_functor_laws(&alpha, &beta, Some((&eta, &eta)), &pc, &pc, &pc)
        .map_err(|e| e.to_string())?;
    if !laws.is_ok() {
        return Err(format!("2-functor laws: {:?}", laws.violations[0]));
    }
    let idf = FunctorData::identity(&chaos2());
    let units: BTreeMap<String, NatTransData> = p
        .base
        .objects
        .iter()
        .map(|x| (x.clone(), NatTransData::identity(&idf)))
        .collect();
    let adj = crate::functors::lift_adjunction(&alpha, &beta, &units, &units.clone(), &pc, &pc)
        .map_err(|e| e.to_string())?;
    let arep = check_adjunction(&adj);
    if !arep.is_ok() {
        return Err(format!("lifted adjunction: {:?}", arep.violations[0]));
    }
    // Componentwise equivalences lift to an equivalence of cone categories.
    let lifted = crate::functors::change_of_fibre(&alpha, &pc, &pc).map_err(|e| e.to_string())?;
    let eqv = adjoint_equivalence_from_functor(&lifted).map_err(|e| e.to_string())?;
    let erep = check_adjunction(&eqv);
    if !erep.is_ok() {
        return Err(format!("lifted equivalence: {:?}", erep.violations[0]));
    }
    Ok("2-functor laws, lifted adjunction, and lifted equivalence verified".into())
}

// --- 7: Θ and the descent cocycle ------------------------------------------

fn c7() -> Result<String, String> {
    let mut instances = 0;
    for order in [2usize, 3, 4] {
        let g = FinGroup::z_mod(order);
        for (space_name, x) in [("regular", regular_gset(&g)), ("trivial2", trivial_gset(&g, 2))] {
            for (twist_name, tw) in [("strict", Twist::Strict), ("twisted", Twist::Seeded(order as u64))]
            {
                let label = format!("Z/{order} on {space_name} ({twist_name})");
                let ctx = eq_context_theta(&g, &x, matq_base(tw))
                    .map_err(|e| format!("{label}: {e}"))?;
                let (a, b, u) =
                    random_eq_object(&ctx, 31 * order as u64, 2).map_err(|e| format!("{label}: {e}"))?;
                let vrep = validate_eq_family(&ctx, &a).map_err(|e| format!("{label}: {e}"))?;
                if !vrep.is_ok() {
                    return Err(format!("{label}: family invalid: {:?}", vrep.violations[0]));
                }
                let th = equivariance_theta(&ctx, &a).map_err(|e| format!("{label}: {e}"))?;
                let mrep = validate_eq_morphism(&th.ctx_gx, &th.alpha_pull, &th.pi2_pull, &th.theta)
                    .map_err(|e| format!("{label}: {e}"))?;
                if !mrep.is_ok() {
                    return Err(format!("{label}: Θ not a morphism: {:?}", mrep.violations[0]));
                }
                let nrep =
                    check_theta_natural(&ctx, &a, &b, &u).map_err(|e| format!("{label}: {e}"))?;
                if !nrep.is_ok() {
                    return Err(format!("{label}: Θ not natural: {:?}", nrep.violations[0]));
                }
                let grep = check_git_cocycle(&ctx, &a, &th).map_err(|e| format!("{label}: {e}"))?;
                if !grep.is_ok() {
                    return Err(format!("{label}: cocycle fails: {:?}", grep.violations[0]));
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} Θ/cocycle instances verified"))
}

// --- 8: change of groups ---------------------------------------------------

fn c8() -> Result<String, String> {
    for (twist_name, tw) in [("strict", Twist::Strict), ("twisted", Twist::Seeded(23))] {
        let base = matq_base(tw);
        let (phi, psi, chi, ctx0, ctx1, ctx2, ctx3) =
            chofg_chain_fixture(&base).map_err(|e| format!("{twist_name}: {e}"))?;
        let (a, _, _) =
            random_eq_object(&ctx3, 77, 2).map_err(|e| format!("{twist_name}: {e}"))?;
        let rep = pasting_associativity(&phi, &psi, &chi, &ctx0, &ctx1, &ctx2, &ctx3, &a)
            .map_err(|e| format!("{twist_name}: {e}"))?;
        if !rep.is_ok() {
            return Err(format!("{twist_name}: pasting fails: {:?}", rep.violations[0]));
        }
        let g = FinGroup::z_mod(4);
        let (ctx, ctx0d) =
            deq_contexts(&g, &regular_gset(&g), &base).map_err(|e| format!("{twist_name}: {e}"))?;
        let (da, db, du) =
            random_eq_object(&ctx, 13, 2).map_err(|e| format!("{twist_name}: {e}"))?;
        let drep = de_equivariantification_check(&ctx, &ctx0d, &da, &db, &du)
            .map_err(|e| format!("{twist_name}: {e}"))?;
        if !drep.is_ok() {
            return Err(format!("{twist_name}: comparison fails: {:?}", drep.violations[0]));
        }
        // Restriction along the chain stays valid.
        let chipsi = crate::equivariant::compose_homs(&chi, &psi)
            .map_err(|e| format!("{twist_name}: {e}"))?;
        let ra = change_of_groups(&chipsi, &ctx1, &ctx3, &a)
            .map_err(|e| format!("{twist_name}: {e}"))?;
        let rrep = validate_eq_family(&ctx1, &ra).map_err(|e| format!("{twist_name}: {e}"))?;
        if !rrep.is_ok() {
            return Err(format!("{twist_name}: restricted family invalid: {:?}", rrep.violations[0]));
        }
    }
    Ok("pasting associativity and the forgetful comparison hold, strict and twisted".into())
}

// --- 9: equivariant traces -------------------------------------------------

fn c9() -> Result<String, String> {
    // Additivity over 100 random pairs.
    let g = FinGroup::z_mod(2);
    let ctx =
        eq_context_theta(&g, &trivial_gset(&g, 2), matq_base(Twist::Strict)).map_err(|e| e.to_string())?;
    let fd = crate::equivariant::forgetful_pair(&ctx).map_err(|e| e.to_string())?;
    let mut additive = 0;
    for seed in 0..100u64 {
        let (_, a, _) = random_eq_object(&ctx, seed, 2).map_err(|e| e.to_string())?;
        let (_, b, _) = random_eq_object(&ctx, seed ^ 0x5a5a, 1).map_err(|e| e.to_string())?;
        let s = direct_sum(&ctx, &a, &b).map_err(|e| e.to_string())?;
        let tha = equivariance_theta(&ctx, &a).map_err(|e| e.to_string())?;
        let thb = equivariance_theta(&ctx, &b).map_err(|e| e.to_string())?;
        let ths = equivariance_theta(&ctx, &s).map_err(|e| e.to_string())?;
        for gel in &ctx.group.elements {
            for x in &ctx.x.elems {
                let pt = PointData { g: gel.clone(), x: x.clone() };
                let ta = equivariant_trace_with(&ctx, &fd, &tha, &pt).map_err(|e| e.to_string())?;
                let tb = equivariant_trace_with(&ctx, &fd, &thb, &pt).map_err(|e| e.to_string())?;
                let ts = equivariant_trace_with(&ctx, &fd, &ths, &pt).map_err(|e| e.to_string())?;
                if ts != ta.clone() + tb {
                    return Err(format!("seed {seed}: additivity fails at ({gel}, {x})"));
                }
            }
        }
        additive += 1;
    }
    // Trace at the identity counts the dimension.
    let g4 = FinGroup::z_mod(4);
    let ctx4 = eq_context_theta(&g4, &regular_gset(&g4), matq_base(Twist::Strict))
        .map_err(|e| e.to_string())?;
    let (_, a4, _) = random_eq_object(&ctx4, 3, 3).map_err(|e| e.to_string())?;
    for x in &ctx4.x.elems {
        let t = equivariant_trace(&ctx4, &a4, &PointData { g: "0".into(), x: x.clone() })
            .map_err(|e| e.to_string())?;
        if t != Q::from_integer(3.into()) {
            return Err(format!("trace at the identity is {t}, expected 3"));
        }
    }
    // Pushforward and pullback stability (strict twists).
    let ctx1 = eq_context_theta(&g, &trivial_gset(&g, 1), matq_base(Twist::Strict))
        .map_err(|e| e.to_string())?;
    let ctx2 = eq_context_theta(&g, &trivial_gset(&g, 2), matq_base(Twist::Strict))
        .map_err(|e| e.to_string())?;
    let i = SetMap::new(
        ctx1.x.elems.clone(),
        ctx2.x.elems.clone(),
        [("t0".to_string(), "t1".to_string())].into_iter().collect(),
    )
    .map_err(|e| e.to_string())?;
    let (_, pa, _) = random_eq_object(&ctx1, 19, 2).map_err(|e| e.to_string())?;
    let pushed = pushforward_along_injection(&ctx1, &ctx2, &i, &pa).map_err(|e| e.to_string())?;
    for gel in &g.elements {
        let src = equivariant_trace(&ctx1, &pa, &PointData { g: gel.clone(), x: "t0".into() })
            .map_err(|e| e.to_string())?;
        let img = equivariant_trace(&ctx2, &pushed, &PointData { g: gel.clone(), x: "t1".into() })
            .map_err(|e| e.to_string())?;
        if src != img {
            return Err(format!("pushforward changes the trace at g = {gel}"));
        }
        let off = equivariant_trace(&ctx2, &pushed, &PointData { g: gel.clone(), x: "t0".into() })
            .map_err(|e| e.to_string())?;
        if !off.is_zero() {
            return Err(format!("pushforward is nonzero off the image at g = {gel}"));
        }
    }
    let h = SetMap::new(
        ctx2.x.elems.clone(),
        ctx1.x.elems.clone(),
        ctx2.x.elems.iter().map(|e| (e.clone(), "t0".to_string())).collect(),
    )
    .map_err(|e| e.to_string())?;
    let pulled =
        crate::equivariant::pullback_obj(&ctx2, &ctx1, &h, &pa).map_err(|e| e.to_string())?;
    for gel in &g.elements {
        for w in &ctx2.x.elems {
            let lhs = equivariant_trace(&ctx2, &pulled, &PointData { g: gel.clone(), x: w.clone() })
                .map_err(|e| e.to_string())?;
            let rhs = equivariant_trace(&ctx1, &pa, &PointData { g: gel.clone(), x: h.ap(w) })
                .map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("pullback changes the trace at ({gel}, {w})"));
            }
        }
    }
    Ok(format!("{additive} additivity instances; dimension count and transport stability exact"))
}

const CRITERIA: [(usize, &str, fn() -> Result<String, String>); 9] = [
    (1, "pseudocones-vs-sections", c1),
    (2, "pseudolimit-universal-property", c2),
    (3, "identity-transitions", c3),
    (4, "fibrewise-(co)limits", c4),
    (5, "terminal-collapse", c5),
    (6, "two-functoriality-and-adjunctions", c6),
    (7, "equivariance-and-descent-cocycle", c7),
    (8, "change-of-groups", c8),
    (9, "equivariant-traces", c9),
];

/// Runs criteria 1–9 sequentially (criterion 10, binary-level report
/// determinism, is exercised by the callers that own a binary).
pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(i, name, f)| result(i, name, f)).collect()
}

/// Runs criteria 1–9 on the global thread pool; results are returned in
/// criterion order regardless of completion order.
pub fn run_all_parallel() -> Vec<CriterionResult> {
    use rayon::prelude::*;
    let mut out: Vec<CriterionResult> =
        CRITERIA.par_iter().map(|&(i, name, f)| result(i, name, f)).collect();
    out.sort_by_key(|r| r.index);
    out
}
