//! Shared independent oracles for integration tests.
//!
//! Nothing here calls back into the library's arithmetic: group elements
//! are modelled as affine maps `m ↦ ±m + j` on `Z/n`, so products,
//! inverses, and conjugates can be cross-checked against an unrelated
//! implementation.

use hurwitz_core::{DihedralElement, GroupContext, HurwitzVector};
use rand::Rng;

/// An affine map `m ↦ sign·m + off` on `Z/n`; reflections have
/// `sign = -1`, rotations `sign = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub neg: bool,
    pub off: i64,
}

impl Affine {
    pub fn of(e: DihedralElement) -> Affine {
        Affine { neg: e.is_reflection, off: e.shift as i64 }
    }

    pub fn apply(&self, n: i64, m: i64) -> i64 {
        let s = if self.neg { -m } else { m };
        (s + self.off).rem_euclid(n)
    }

    /// Composition `self ∘ rhs` (apply `rhs` first).
    pub fn compose(&self, n: i64, rhs: Affine) -> Affine {
        let off = if self.neg { -rhs.off } else { rhs.off } + self.off;
        Affine { neg: self.neg ^ rhs.neg, off: off.rem_euclid(n) }
    }

    pub fn to_element(&self, ctx: &GroupContext) -> DihedralElement {
        if self.neg {
            ctx.reflection(self.off)
        } else {
            ctx.rotation(self.off)
        }
    }
}

/// Independent product: compose the affine maps of all entries, left to
/// right in the group convention (leftmost applied last).
pub fn affine_product(ctx: &GroupContext, entries: &[DihedralElement]) -> DihedralElement {
    let n = ctx.n() as i64;
    let mut acc = Affine { neg: false, off: 0 };
    for &e in entries {
        acc = acc.compose(n, Affine::of(e));
    }
    acc.to_element(ctx)
}

/// A uniformly random non-identity element.
pub fn random_element<R: Rng>(ctx: &GroupContext, rng: &mut R) -> DihedralElement {
    let n = ctx.n() as i64;
    loop {
        let refl = rng.gen_bool(0.5);
        let shift = rng.gen_range(0..n);
        if !refl && shift == 0 {
            continue;
        }
        return if refl { ctx.reflection(shift) } else { ctx.rotation(shift) };
    }
}

/// A random tuple of non-identity elements (not necessarily a valid
/// Hurwitz vector); braid-action identities must hold regardless.
pub fn random_tuple<R: Rng>(ctx: &GroupContext, d: usize, rng: &mut R) -> HurwitzVector {
    let entries = (0..d).map(|_| random_element(ctx, rng)).collect();
    HurwitzVector::new(*ctx, entries)
}
