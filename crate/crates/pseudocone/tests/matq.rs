//! Integration tests for exact-rational matrices: arithmetic laws, traces,
//! inverses, and dualizability witnesses.

use num::{One, Zero};
use proptest::prelude::*;
use pseudocone::matq::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    let data = (0..r * c).map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into())).collect();
    Mat { rows: r, cols: c, data }
}

#[test]
fn rational_parsing_round_trips() {
    for s in ["0", "1", "-1", "2/3", "-7/5", "10"] {
        let q = parse_q(s).unwrap();
        assert_eq!(parse_q(&show_q(&q)).unwrap(), q);
    }
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("x").is_err());
}

#[test]
fn identity_and_scalar_matrices() {
    assert!(Mat::identity(3).is_identity());
    let half = parse_q("1/2").unwrap();
    let s = Mat::scalar(2, &half);
    assert_eq!(s.trace().unwrap(), parse_q("1").unwrap());
    assert!(!s.is_identity());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prop_trace_is_additive(seed in 0u64..10_000, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_mat(&mut rng, n, n);
        let b = rand_mat(&mut rng, n, n);
        let lhs = a.add(&b).unwrap().trace().unwrap();
        let rhs = a.trace().unwrap() + b.trace().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_trace_is_similarity_invariant(seed in 0u64..10_000, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_mat(&mut rng, n, n);
        let u = loop {
            let c = rand_mat(&mut rng, n, n);
            if c.is_invertible() {
                break c;
            }
        };
        let conj = u.mul(&a).unwrap().mul(&u.inverse().unwrap()).unwrap();
        prop_assert_eq!(conj.trace().unwrap(), a.trace().unwrap());
    }

    #[test]
    fn prop_blockdiag_trace_adds_and_kronecker_multiplies(seed in 0u64..10_000, n in 1usize..3, m in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_mat(&mut rng, n, n);
        let b = rand_mat(&mut rng, m, m);
        let bd = a.blockdiag(&b);
        prop_assert_eq!(bd.trace().unwrap(), a.trace().unwrap() + b.trace().unwrap());
        let kr = a.kronecker(&b);
        prop_assert_eq!(kr.trace().unwrap(), a.trace().unwrap() * b.trace().unwrap());
    }

    #[test]
    fn prop_inverse_is_two_sided(seed in 0u64..10_000, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_mat(&mut rng, n, n);
        if let Some(inv) = a.inverse() {
            prop_assert!(a.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&a).unwrap().is_identity());
        } else {
            prop_assert!(!a.is_invertible());
        }
    }

    #[test]
    fn prop_transpose_preserves_trace(seed in 0u64..10_000, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = rand_mat(&mut rng, n, n);
        prop_assert_eq!(a.transpose().trace().unwrap(), a.trace().unwrap());
    }
}

#[test]
fn string_round_trip() {
    let m = Mat::from_strings(2, 2, &["1".into(), "1/2".into(), "-3".into(), "0".into()]).unwrap();
    let s = m.to_strings();
    assert_eq!(Mat::from_strings(2, 2, &s).unwrap(), m);
}

#[test]
fn trace_requires_square() {
    assert!(Mat::zeros(2, 3).trace().is_err());
}

#[test]
fn singular_matrices_have_no_inverse() {
    let z = Mat::zeros(2, 2);
    assert!(z.inverse().is_none());
    assert!(z.trace().unwrap().is_zero());
    assert!(Mat::identity(1).trace().unwrap().is_one());
}

#[test]
fn dualizability_of_finite_dimensions() {
    assert!(check_dualizable(5).is_ok());
    // Snake identities explicitly for n = 2.
    let n = 2;
    let ev = evaluation(n);
    let coev = coevaluation(n);
    assert_eq!(ev.rows, 1);
    assert_eq!(coev.cols, 1);
    let idn = Mat::identity(n);
    let left = idn.kronecker(&ev).mul(&coev.kronecker(&idn)).unwrap();
    assert!(left.is_identity());
}
