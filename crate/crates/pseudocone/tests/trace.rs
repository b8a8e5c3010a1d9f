//! Integration tests for stalks, equivariant traces, direct sums, and
//! extension by zero along equivariant injections.

use num::{One, Zero};
use proptest::prelude::*;
use pseudocone::equivariant::*;
use pseudocone::fixtures::*;
use pseudocone::matq::Q;
use pseudocone::trace::*;
use pseudocone::EngineError;

fn matq_base(tw: Twist) -> PointBase {
    PointBase::new(CoreCat::MatQ { cap: 16 }, tw).unwrap()
}

#[test]
fn stalk_reads_the_regular_component() {
    let g = FinGroup::z_mod(3);
    let ctx = eq_context_theta(&g, &regular_gset(&g), matq_base(Twist::Seeded(1))).unwrap();
    let (a, _, _) = random_eq_object(&ctx, 4, 2).unwrap();
    for x in &ctx.x.elems {
        assert_eq!(stalk(&ctx, &a, x).unwrap(), CObj::Dim(2));
    }
    assert!(matches!(
        stalk(&ctx, &a, "nowhere"),
        Err(EngineError::UnknownPoint(_))
    ));
}

#[test]
fn trace_at_the_identity_is_the_dimension() {
    // Strict twist: with a seeded compositor twist the Θ component at the
    // identity picks up a twist scalar and the count no longer applies.
    let g = FinGroup::z_mod(4);
    let ctx = eq_context_theta(&g, &regular_gset(&g), matq_base(Twist::Strict)).unwrap();
    let (a, _, _) = random_eq_object(&ctx, 7, 3).unwrap();
    for x in &ctx.x.elems {
        let t = equivariant_trace(&ctx, &a, &PointData { g: "0".into(), x: x.clone() }).unwrap();
        assert_eq!(t, Q::from_integer(3.into()));
    }
}

#[test]
fn unfixed_points_are_rejected() {
    let g = FinGroup::z_mod(2);
    let ctx = eq_context_theta(&g, &regular_gset(&g), matq_base(Twist::Strict)).unwrap();
    let (a, _, _) = random_eq_object(&ctx, 3, 1).unwrap();
    let x = ctx.x.elems[0].clone();
    assert!(matches!(
        equivariant_trace(&ctx, &a, &PointData { g: "1".into(), x }),
        Err(EngineError::NotFixed(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn prop_trace_additive_under_direct_sum(seed in 0u64..10_000) {
        let g = FinGroup::z_mod(2);
        let ctx = eq_context_theta(&g, &trivial_gset(&g, 2), matq_base(Twist::Seeded(seed))).unwrap();
        let (a, a2, _) = random_eq_object(&ctx, seed, 2).unwrap();
        let (_, b, _) = random_eq_object(&ctx, seed ^ 0xdead, 1).unwrap();
        let s = direct_sum(&ctx, &a2, &b).unwrap();
        prop_assert!(validate_eq_family(&ctx, &s).unwrap().is_ok());
        let _ = a;
        let fd = forgetful_pair(&ctx).unwrap();
        let tha = equivariance_theta(&ctx, &a2).unwrap();
        let thb = equivariance_theta(&ctx, &b).unwrap();
        let ths = equivariance_theta(&ctx, &s).unwrap();
        for gel in &ctx.group.elements {
            for x in &ctx.x.elems {
                let pt = PointData { g: gel.clone(), x: x.clone() };
                let ta = equivariant_trace_with(&ctx, &fd, &tha, &pt).unwrap();
                let tb = equivariant_trace_with(&ctx, &fd, &thb, &pt).unwrap();
                let ts = equivariant_trace_with(&ctx, &fd, &ths, &pt).unwrap();
                prop_assert_eq!(ts, ta + tb);
            }
        }
    }

    #[test]
    fn prop_trace_invariant_under_similarity(seed in 0u64..10_000) {
        let g = FinGroup::z_mod(3);
        let ctx = eq_context_theta(&g, &trivial_gset(&g, 2), matq_base(Twist::Seeded(seed))).unwrap();
        let (a, b, u) = random_eq_object(&ctx, seed, 2).unwrap();
        let points: Vec<PointData> = ctx
            .group
            .elements
            .iter()
            .flat_map(|gg| {
                ctx.x.elems.iter().map(move |x| PointData { g: gg.clone(), x: x.clone() })
            })
            .collect();
        let rep = check_similarity_invariance(&ctx, &a, &b, &u, &points).unwrap();
        prop_assert!(rep.is_ok(), "{:?}", rep);
    }
}

#[test]
fn pushforward_preserves_traces_and_vanishes_off_the_image() {
    let g = FinGroup::z_mod(2);
    let base = matq_base(Twist::Strict);
    let ctx_src = eq_context_theta(&g, &trivial_gset(&g, 1), base.clone()).unwrap();
    let ctx_tgt = eq_context_theta(&g, &trivial_gset(&g, 2), base).unwrap();
    let i = SetMap::new(
        ctx_src.x.elems.clone(),
        ctx_tgt.x.elems.clone(),
        [("t0".to_string(), "t1".to_string())].into_iter().collect(),
    )
    .unwrap();
    let (a, _, _) = random_eq_object(&ctx_src, 6, 2).unwrap();
    let pushed = pushforward_along_injection(&ctx_src, &ctx_tgt, &i, &a).unwrap();
    assert!(validate_eq_family(&ctx_tgt, &pushed).unwrap().is_ok());
    for gel in &g.elements {
        let t_src =
            equivariant_trace(&ctx_src, &a, &PointData { g: gel.clone(), x: "t0".into() }).unwrap();
        let t_img =
            equivariant_trace(&ctx_tgt, &pushed, &PointData { g: gel.clone(), x: "t1".into() })
                .unwrap();
        assert_eq!(t_src, t_img);
        let t_off =
            equivariant_trace(&ctx_tgt, &pushed, &PointData { g: gel.clone(), x: "t0".into() })
                .unwrap();
        assert!(t_off.is_zero());
    }
}

#[test]
fn pushforward_rejects_non_injections() {
    let g = FinGroup::z_mod(2);
    let base = matq_base(Twist::Strict);
    let ctx_src = eq_context_theta(&g, &trivial_gset(&g, 2), base.clone()).unwrap();
    let ctx_tgt = eq_context_theta(&g, &trivial_gset(&g, 1), base).unwrap();
    let collapse = SetMap::new(
        ctx_src.x.elems.clone(),
        ctx_tgt.x.elems.clone(),
        ctx_src.x.elems.iter().map(|e| (e.clone(), "t0".to_string())).collect(),
    )
    .unwrap();
    let (a, _, _) = random_eq_object(&ctx_src, 2, 1).unwrap();
    assert!(matches!(
        pushforward_along_injection(&ctx_src, &ctx_tgt, &collapse, &a),
        Err(EngineError::NotInjective(_))
    ));
}

#[test]
fn pullback_preserves_traces_for_strict_twists() {
    let g = FinGroup::z_mod(2);
    let base = matq_base(Twist::Strict);
    let ctx_w = eq_context_theta(&g, &trivial_gset(&g, 2), base.clone()).unwrap();
    let ctx_x = eq_context_theta(&g, &trivial_gset(&g, 1), base).unwrap();
    let h = SetMap::new(
        ctx_w.x.elems.clone(),
        ctx_x.x.elems.clone(),
        ctx_w.x.elems.iter().map(|e| (e.clone(), "t0".to_string())).collect(),
    )
    .unwrap();
    let (a, _, _) = random_eq_object(&ctx_x, 8, 2).unwrap();
    let pulled = pullback_obj(&ctx_w, &ctx_x, &h, &a).unwrap();
    assert!(validate_eq_family(&ctx_w, &pulled).unwrap().is_ok());
    for gel in &g.elements {
        for w in &ctx_w.x.elems {
            let lhs =
                equivariant_trace(&ctx_w, &pulled, &PointData { g: gel.clone(), x: w.clone() })
                    .unwrap();
            let rhs = equivariant_trace(
                &ctx_x,
                &a,
                &PointData { g: gel.clone(), x: h.ap(w) },
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn trace_of_the_unit_counts_one_per_dimension() {
    let g = FinGroup::z_mod(3);
    let ctx = eq_context_theta(&g, &trivial_gset(&g, 1), matq_base(Twist::Strict)).unwrap();
    let a = twisted_unit(&ctx, 1).unwrap();
    for gel in &g.elements {
        let t = equivariant_trace(&ctx, &a, &PointData { g: gel.clone(), x: "t0".into() }).unwrap();
        assert_eq!(t, Q::one());
    }
}
