//! Equivariant stalks and traces over exact-rational matrix fibres.
//!
//! The stalk of a descent family at a point `x` is its regular-resolution
//! component read along `ψ: X ≅ G\(Γ₀×X)`.  For a point `x` fixed by `g`,
//! the equivariant trace is the trace of the Θ component at the orbit class
//! of `(γ₀, (g, x))`: at fixed points the two pullback endpoints of Θ carry
//! equal stalks, so the component is square and its trace well defined.

use crate::equivariant::{
    equivariance_theta, forget_obj, forgetful_pair, pair_id, space_map_on_quotients, CMor, CObj,
    CoreCat, EqContext, EqMorphism, EqObject, FamMor, FamObj, ForgetfulData, SetMap, ThetaResult,
};
use crate::matq::{Mat, Q};
use crate::report::{EngineError, Report, Result};
use std::collections::BTreeMap;

/// A group element and a carrier point it fixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub g: String,
    pub x: String,
}

/// The stalk `A_x`: the value of the regular component at the class
/// `[(γ₀, x)]`, i.e. `Forget(A)` evaluated at `x`.
pub fn stalk(ctx: &EqContext, a: &EqObject, x: &str) -> Result<CObj> {
    if !ctx.x.elems.iter().any(|e| e == x) {
        return Err(EngineError::UnknownPoint(x.to_string()));
    }
    let fd = forgetful_pair(ctx)?;
    let f = forget_obj(ctx, &fd, a)?;
    f.vals
        .get(x)
        .cloned()
        .ok_or_else(|| EngineError::UnknownPoint(x.to_string()))
}

/// The Θ component at the fixed point `(g, x)`, as a square matrix.
pub fn theta_component_at(
    ctx: &EqContext,
    fd: &ForgetfulData,
    th: &ThetaResult,
    pt: &PointData,
) -> Result<Mat> {
    if !ctx.x.elems.iter().any(|e| e == &pt.x) {
        return Err(EngineError::UnknownPoint(pt.x.clone()));
    }
    if ctx.x.act(&pt.g, &pt.x) != pt.x {
        return Err(EngineError::NotFixed(format!("{}·{} ≠ {}", pt.g, pt.x, pt.x)));
    }
    let gamma0 = &fd.gamma0;
    let q = th.ctx_gx.resl.quot(gamma0)?;
    let class = q.class(&pair_id(&fd.basepoint, &pair_id(&pt.g, &pt.x)))?;
    match th.theta.comp_at(gamma0)?.vals.get(&class) {
        Some(CMor::Mat(m)) if m.rows == m.cols => Ok(m.clone()),
        Some(CMor::Mat(_)) => Err(EngineError::ShapeMismatch(
            "Θ component not square at the fixed point".into(),
        )),
        Some(CMor::Lab(_)) => Err(EngineError::Invalid(
            "equivariant trace needs matrix fibres".into(),
        )),
        None => Err(EngineError::UnknownPoint(class)),
    }
}

/// `trace_g(A, x)`: the trace of the Θ component at the fixed point.
pub fn equivariant_trace(ctx: &EqContext, a: &EqObject, pt: &PointData) -> Result<Q> {
    let fd = forgetful_pair(ctx)?;
    let th = equivariance_theta(ctx, a)?;
    theta_component_at(ctx, &fd, &th, pt)?.trace()
}

/// Trace with precomputed forgetful data and Θ, for bulk evaluation.
pub fn equivariant_trace_with(
    ctx: &EqContext,
    fd: &ForgetfulData,
    th: &ThetaResult,
    pt: &PointData,
) -> Result<Q> {
    theta_component_at(ctx, fd, th, pt)?.trace()
}

fn dim_of(o: &CObj) -> Result<usize> {
    match o {
        CObj::Dim(n) => Ok(*n),
        CObj::Lab(_) => Err(EngineError::Invalid("matrix fibres required".into())),
    }
}

fn mat_of(m: &CMor) -> Result<&Mat> {
    match m {
        CMor::Mat(mat) => Ok(mat),
        CMor::Lab(_) => Err(EngineError::Invalid("matrix fibres required".into())),
    }
}

/// Componentwise direct sum `A ⊕ B` with block-diagonal transitions.
pub fn direct_sum(ctx: &EqContext, a: &EqObject, b: &EqObject) -> Result<EqObject> {
    if !matches!(ctx.base.core, CoreCat::MatQ { .. }) {
        return Err(EngineError::Invalid("direct sums need matrix fibres".into()));
    }
    let mut components = BTreeMap::new();
    for gamma in &ctx.resl.cat.objects {
        let av = a.comp_at(gamma)?;
        let bv = b.comp_at(gamma)?;
        let mut vals = BTreeMap::new();
        for (k, ao) in &av.vals {
            let bo = bv
                .vals
                .get(k)
                .ok_or_else(|| EngineError::ShapeMismatch(format!("missing index {k}")))?;
            vals.insert(k.clone(), CObj::Dim(dim_of(ao)? + dim_of(bo)?));
        }
        components.insert(gamma.clone(), FamObj { vals });
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx.resl.cat.morphisms {
        let at = a.trans_at(&m.id)?;
        let bt = b.trans_at(&m.id)?;
        let mut vals = BTreeMap::new();
        for (k, am) in &at.vals {
            let bm = bt
                .vals
                .get(k)
                .ok_or_else(|| EngineError::ShapeMismatch(format!("missing index {k}")))?;
            vals.insert(k.clone(), CMor::Mat(mat_of(am)?.blockdiag(mat_of(bm)?)));
        }
        transitions.insert(m.id.clone(), FamMor { vals });
    }
    Ok(EqObject { components, transitions })
}

/// Extension by zero along an equivariant injection `i: X → Y` of spaces
/// sharing resolution generators: the image classes carry `A` with scalar-
/// corrected transitions, all other classes carry the zero object.
pub fn pushforward_along_injection(
    ctx_src: &EqContext,
    ctx_tgt: &EqContext,
    i: &SetMap,
    a: &EqObject,
) -> Result<EqObject> {
    if !matches!(ctx_src.base.core, CoreCat::MatQ { .. }) {
        return Err(EngineError::Invalid("pushforward needs a zero object".into()));
    }
    let image: std::collections::BTreeSet<String> = i.map.values().cloned().collect();
    if image.len() != i.src.len() {
        return Err(EngineError::NotInjective(format!("{} → {}", i.src.len(), image.len())));
    }
    for g in &ctx_src.group.elements {
        for x in &ctx_src.x.elems {
            if i.ap(&ctx_src.x.act(g, x)) != ctx_tgt.x.act(g, &i.ap(x)) {
                return Err(EngineError::Invalid(format!("i not equivariant at ({g}, {x})")));
            }
        }
    }
    let base = &ctx_src.base;
    // Image of each source class under the induced quotient map, per Γ.
    let mut ibars = BTreeMap::new();
    for gamma in &ctx_src.resl.cat.objects {
        ibars.insert(gamma.clone(), space_map_on_quotients(ctx_src, ctx_tgt, i, gamma)?);
    }
    let mut components = BTreeMap::new();
    for gamma in &ctx_tgt.resl.cat.objects {
        let ibar = &ibars[gamma];
        let av = a.comp_at(gamma)?;
        let mut vals = BTreeMap::new();
        for q in &ctx_tgt.resl.quot(gamma)?.classes {
            vals.insert(q.clone(), CObj::Dim(0));
        }
        for (c, v) in &av.vals {
            vals.insert(ibar.ap(c), v.clone());
        }
        components.insert(gamma.clone(), FamObj { vals });
    }
    let mut transitions = BTreeMap::new();
    for m in &ctx_tgt.resl.cat.morphisms {
        let src_mor = ctx_src
            .resl
            .find_mor(&m.src, &m.tgt, &ctx_tgt.resl.maps[&m.id])
            .ok_or_else(|| {
                EngineError::UnknownObject(format!("morphism {} absent over the source space", m.id))
            })?;
        let scalar = base.cval(ctx_src.resl.qmap(&src_mor)?) / base.cval(ctx_tgt.resl.qmap(&m.id)?);
        let at = a.trans_at(&src_mor)?;
        let ibar_s = &ibars[&m.src];
        let tgt_comp = &components[&m.src];
        let fbar_y = ctx_tgt.resl.qmap(&m.id)?;
        let tgt_comp_t = &components[&m.tgt];
        let mut vals = BTreeMap::new();
        for q in &ctx_tgt.resl.quot(&m.src)?.classes {
            let srcdim = dim_of(&tgt_comp_t.vals[&fbar_y.ap(q)])?;
            let tgtdim = dim_of(&tgt_comp.vals[q])?;
            vals.insert(q.clone(), CMor::Mat(Mat::zeros(tgtdim, srcdim)));
        }
        for (c, v) in &at.vals {
            vals.insert(ibar_s.ap(c), CMor::Mat(mat_of(v)?.scale(&scalar)));
        }
        transitions.insert(m.id.clone(), FamMor { vals });
    }
    Ok(EqObject { components, transitions })
}

/// Trace invariance under conjugation by a componentwise isomorphism:
/// compares `trace_g(A, x)` and `trace_g(B, x)` for conjugate families
/// related by `u: A → B` over every supplied fixed point.
pub fn check_similarity_invariance(
    ctx: &EqContext,
    a: &EqObject,
    b: &EqObject,
    u: &EqMorphism,
    points: &[PointData],
) -> Result<Report> {
    let mut rep = Report::ok();
    for gamma in &ctx.resl.cat.objects {
        if !ctx.base.fam_is_iso(u.comp_at(gamma)?) {
            rep.push("conjugator-iso", gamma.clone());
        }
    }
    if !rep.is_ok() {
        return Ok(rep);
    }
    for pt in points {
        let ta = equivariant_trace(ctx, a, pt)?;
        let tb = equivariant_trace(ctx, b, pt)?;
        if ta != tb {
            rep.push(
                "similarity-invariance",
                format!("({}, {}): {} ≠ {}", pt.g, pt.x, crate::matq::show_q(&ta), crate::matq::show_q(&tb)),
            );
        }
    }
    Ok(rep)
}
