mod common;

use std::str::FromStr;

use common::{affine_product, random_tuple};
use hurwitz_core::{GroupContext, HurwitzError, HurwitzVector, NuVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(lit: &str) -> HurwitzVector {
    HurwitzVector::from_str(lit).unwrap()
}

#[test]
fn braid_move_on_reflection_pair() {
    let mut w = v("[s0,s1]@n=5");
    w.braid_move(1, 1).unwrap();
    assert_eq!(w.to_string(), "[s4,s0]@n=5");
}

#[test]
fn full_twist_conjugates_against_rotation() {
    // (s_j, x^m) σ² = (s_{j-2m}, x^{-m})
    let mut w = v("[s3,r5]@n=7");
    w.braid_move(1, 1).unwrap();
    w.braid_move(1, 1).unwrap();
    assert_eq!(w.to_string(), "[s0,r2]@n=7");
}

#[test]
fn adjacent_block_word_shifts_reflections() {
    // (s_0, s_1, x^2)(σ2 σ1 σ1 σ2) = (s_4, s_5, x^2)
    let mut w = v("[s0,s1,r2]@n=7");
    for (i, s) in [(2usize, 1i8), (1, 1), (1, 1), (2, 1)] {
        w.braid_move(i, s).unwrap();
    }
    assert_eq!(w.to_string(), "[s4,s5,r2]@n=7");
}

#[test]
fn braid_inverse_cancels() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(2..12u32);
        let d = rng.gen_range(2..6usize);
        let ctx = GroupContext::new(n);
        let orig = random_tuple(&ctx, d, &mut rng);
        let i = rng.gen_range(1..d);
        let mut w = orig.clone();
        w.braid_move(i, 1).unwrap();
        w.braid_move(i, -1).unwrap();
        assert_eq!(w, orig);
    }
}

#[test]
fn braid_index_bounds_are_enforced() {
    let mut w = v("[s0,s0,s1,s1]@n=5");
    assert!(matches!(
        w.braid_move(0, 1),
        Err(HurwitzError::BraidIndexOutOfRange { .. })
    ));
    assert!(matches!(
        w.braid_move(4, 1),
        Err(HurwitzError::BraidIndexOutOfRange { .. })
    ));
}

#[test]
fn validate_reports_each_condition() {
    assert!(v("[s0,s0,s1,s1]@n=5").validate().is_ok());
    assert!(matches!(
        v("[s0,e]@n=5").validate(),
        Err(HurwitzError::IdentityEntry { index: 2 })
    ));
    assert!(matches!(
        v("[s0,s1]@n=5").validate(),
        Err(HurwitzError::ProductNotIdentity { .. })
    ));
    // Two equal reflections generate only Z/2.
    assert!(matches!(
        v("[s0,s0]@n=5").validate(),
        Err(HurwitzError::NotGenerating { .. })
    ));
    // Even reflections and x^2 in D_4 land in a proper dihedral subgroup.
    assert!(matches!(
        v("[s0,s2,s0,s2]@n=4").validate(),
        Err(HurwitzError::NotGenerating { size: 4 })
    ));
}

#[test]
fn product_uses_affine_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let n = rng.gen_range(2..12u32);
        let d = rng.gen_range(1..7usize);
        let ctx = GroupContext::new(n);
        let w = random_tuple(&ctx, d, &mut rng);
        let prod = affine_product(&ctx, w.entries());
        match w.validate() {
            Err(HurwitzError::ProductNotIdentity { actual }) => assert_eq!(actual, prod),
            _ => assert_eq!(prod, ctx.identity()),
        }
    }
}

#[test]
fn nu_vector_frozen_example() {
    let w = v("[s0,s0,r2,r4]@n=6");
    match w.nu() {
        NuVector::Even { n, k_even, k_odd, rot } => {
            assert_eq!(n, 6);
            assert_eq!((k_even, k_odd), (2, 0));
            assert_eq!(rot, vec![0, 2, 0]);
        }
        other => panic!("expected even-n invariant, got {other:?}"),
    }
}

#[test]
fn nu_vector_json_schemas() {
    let odd = v("[s0,s0,s1,s1]@n=5").nu();
    assert_eq!(
        serde_json::to_string(&odd).unwrap(),
        r#"{"n":5,"k":4,"rot":[0,0]}"#
    );
    let even = v("[s0,s0,s1,s1]@n=4").nu();
    assert_eq!(
        serde_json::to_string(&even).unwrap(),
        r#"{"n":4,"k_even":2,"k_odd":2,"rot":[0,0]}"#
    );
}

#[test]
fn nu_is_braid_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(2..12u32);
        let d = rng.gen_range(2..7usize);
        let ctx = GroupContext::new(n);
        let w0 = random_tuple(&ctx, d, &mut rng);
        let mut w = w0.clone();
        for _ in 0..10 {
            let i = rng.gen_range(1..d);
            let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            w.braid_move(i, s).unwrap();
        }
        assert_eq!(w.nu(), w0.nu());
    }
}

#[test]
fn numerical_type_is_canonical_and_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rng.gen_range(2..12u32);
        let d = rng.gen_range(2..6usize);
        let ctx = GroupContext::new(n);
        let w = random_tuple(&ctx, d, &mut rng);
        let t = w.numerical_type();
        // Lexicographic minimum over the automorphism orbit of ν.
        for phi in ctx.enumerate_automorphisms() {
            assert!(*t.nu() <= w.nu().transform(&ctx, phi));
        }
        // The canonicalizing automorphism actually realizes the minimum.
        let phi = w.canonicalizing_automorphism();
        assert_eq!(&w.nu().transform(&ctx, phi), t.nu());
        // For even n the reflection-class pair is ordered.
        if let NuVector::Even { k_even, k_odd, .. } = t.nu() {
            assert!(k_even <= k_odd);
        }
    }
}

#[test]
fn covering_genus_frozen_values() {
    assert_eq!(v("[s0,s0,s1,s1]@n=5").covering_genus().unwrap(), 1);
    assert_eq!(v("[s0,s1,r2]@n=3").covering_genus().unwrap(), 0);
    assert_eq!(v("[s0,s0,s1,s1]@n=4").covering_genus().unwrap(), 1);
}

#[test]
fn vector_literal_round_trip_and_errors() {
    for lit in ["[s0,s0,s1,s1]@n=5", "[r1,r2,s0,s3]@n=4", "[s3,r5]@n=7"] {
        assert_eq!(v(lit).to_string(), lit);
    }
    assert!(HurwitzVector::from_str("[s0,s1]").is_err());
    assert!(HurwitzVector::from_str("[s5]@n=5").is_err());
    assert!(HurwitzVector::from_str("s0,s1@n=5").is_err());
}
