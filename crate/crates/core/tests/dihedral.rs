mod common;

use common::{affine_product, random_element, Affine};
use hurwitz_core::{Automorphism, ConjugacyClassId, GroupContext};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reflection_product_is_rotation_by_index_difference() {
    let ctx = GroupContext::new(4);
    let p = ctx.multiply(ctx.reflection(1), ctx.reflection(3));
    assert_eq!(p, ctx.rotation(2));
}

#[test]
fn reflection_conjugation_moves_index() {
    // s_a s_b s_a = s_{2a-b}
    let ctx = GroupContext::new(5);
    let c = ctx.conjugate(ctx.reflection(3), ctx.reflection(1));
    assert_eq!(c, ctx.reflection(0));

    let ctx = GroupContext::new(7);
    // x^r s_j x^{-r} = s_{j+2r}
    let c = ctx.conjugate(ctx.rotation(2), ctx.reflection(3));
    assert_eq!(c, ctx.reflection(0));
}

#[test]
fn subgroup_closure_of_two_even_reflections() {
    let ctx = GroupContext::new(4);
    let cl = ctx.subgroup_closure(&[ctx.reflection(0), ctx.reflection(2)]);
    assert_eq!(cl.len(), 4);
    assert!(cl.contains(&ctx.identity()));
    assert!(cl.contains(&ctx.rotation(2)));
}

#[test]
fn automorphism_composition_matches_pointwise() {
    let ctx = GroupContext::new(5);
    let phi1 = ctx.automorphism(0, 2).unwrap();
    let phi2 = ctx.automorphism(1, 1).unwrap();
    let comp = ctx.compose(phi1, phi2);
    assert_eq!(comp, ctx.automorphism(2, 2).unwrap());
    // Pointwise agreement on the generators.
    for g in [ctx.rotation(1), ctx.reflection(0)] {
        assert_eq!(
            ctx.apply_automorphism(comp, g),
            ctx.apply_automorphism(phi1, ctx.apply_automorphism(phi2, g)),
        );
    }
}

#[test]
fn automorphism_count_is_n_times_phi_n() {
    let phi = |n: u32| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
    for n in 2..=12u32 {
        let ctx = GroupContext::new(n);
        assert_eq!(ctx.enumerate_automorphisms().len(), n as usize * phi(n));
    }
}

#[test]
fn conjugacy_classes_split_by_parity_only_for_even_n() {
    let ctx = GroupContext::new(5);
    assert_eq!(ctx.conjugacy_class(ctx.reflection(0)), ctx.conjugacy_class(ctx.reflection(3)));
    assert_eq!(ctx.conjugacy_class(ctx.rotation(2)), ctx.conjugacy_class(ctx.rotation(3)));

    let ctx = GroupContext::new(6);
    assert_ne!(ctx.conjugacy_class(ctx.reflection(0)), ctx.conjugacy_class(ctx.reflection(1)));
    assert_eq!(ctx.conjugacy_class(ctx.reflection(0)), ctx.conjugacy_class(ctx.reflection(4)));
    assert!(matches!(
        ctx.conjugacy_class(ctx.rotation(4)),
        ConjugacyClassId::Rotation(2)
    ));
}

#[test]
fn element_display_and_parse_round_trip() {
    let ctx = GroupContext::new(7);
    for e in ["e", "r3", "s0", "s6"] {
        let g = ctx.parse_element(e).unwrap();
        assert_eq!(g.to_string(), e);
    }
    assert!(ctx.parse_element("s7").is_err());
    assert!(ctx.parse_element("r9").is_err());
    assert!(ctx.parse_element("x2").is_err());
}

#[test]
fn multiplication_agrees_with_affine_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=12u32 {
        let ctx = GroupContext::new(n);
        for _ in 0..200 {
            let g = random_element(&ctx, &mut rng);
            let h = random_element(&ctx, &mut rng);
            assert_eq!(ctx.multiply(g, h), affine_product(&ctx, &[g, h]));
        }
    }
}

#[test]
fn inverse_and_order_agree_with_affine_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=12u32 {
        let ctx = GroupContext::new(n);
        for _ in 0..100 {
            let g = random_element(&ctx, &mut rng);
            assert_eq!(ctx.multiply(g, ctx.inverse(g)), ctx.identity());
            // Multiply g by itself order-many times.
            let ord = ctx.order(g);
            let copies = vec![g; ord as usize];
            assert_eq!(affine_product(&ctx, &copies), ctx.identity());
            // No smaller power is trivial.
            for k in 1..ord {
                assert_ne!(affine_product(&ctx, &vec![g; k as usize]), ctx.identity());
            }
        }
    }
}

proptest! {
    #[test]
    fn multiplication_is_associative(n in 2u32..14, seed in 0u64..1000) {
        let ctx = GroupContext::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            random_element(&ctx, &mut rng),
            random_element(&ctx, &mut rng),
            random_element(&ctx, &mut rng),
        );
        prop_assert_eq!(
            ctx.multiply(ctx.multiply(a, b), c),
            ctx.multiply(a, ctx.multiply(b, c))
        );
    }

    #[test]
    fn automorphisms_are_homomorphic_bijections(n in 2u32..12, seed in 0u64..1000) {
        let ctx = GroupContext::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let autos = ctx.enumerate_automorphisms();
        let phi = autos[seed as usize % autos.len()];
        let (g, h) = (random_element(&ctx, &mut rng), random_element(&ctx, &mut rng));
        prop_assert_eq!(
            ctx.apply_automorphism(phi, ctx.multiply(g, h)),
            ctx.multiply(ctx.apply_automorphism(phi, g), ctx.apply_automorphism(phi, h))
        );
        let inv = ctx.invert_automorphism(phi);
        prop_assert_eq!(ctx.apply_automorphism(inv, ctx.apply_automorphism(phi, g)), g);
    }

    #[test]
    fn affine_model_round_trips_elements(n in 2u32..14, refl: bool, j in 0i64..14) {
        let ctx = GroupContext::new(n);
        let j = j % n as i64;
        prop_assume!(refl || j != 0);
        let e = if refl { ctx.reflection(j) } else { ctx.rotation(j) };
        prop_assert_eq!(Affine::of(e).to_element(&ctx), e);
    }
}

#[test]
fn automorphism_serde_field_names() {
    let phi = Automorphism { shift: 3, unit: 1 };
    let json = serde_json::to_string(&phi).unwrap();
    assert_eq!(json, r#"{"shift":3,"unit":1}"#);
}
