//! Normal forms for Hurwitz vectors and the deterministic reducer.
//!
//! Every numerical type that is realizable by a valid Hurwitz vector has a
//! unique canonical form, described by a [`NormalFormShape`]:
//!
//! * odd `n`:  `(s_0^{k-2}, s_1, s_λ, rotations)` with `λ = 1 + |r|`;
//! * even `n`, `h > 0`:  `(s_0^h, s_1^{k-1}, s_λ, rotations)` with
//!   `λ = |r| + ε` and `ε ∈ {0, 1}` chosen so `ε + k` is odd;
//! * even `n`, `h = 0`:  `(s_1^{k-2}, s_3, s_λ, rotations)` with
//!   `λ = |r| + 3`;
//!
//! where `h ≤ k` are the reflection-class counts of the (canonical) type,
//! the rotations are `x^{r_1}, …, x^{r_R}` with `0 < r_1 ≤ … ≤ r_R ≤ n'`,
//! and `|r| = Σ r_i mod n`.  [`canonical_form`] builds this vector and
//! validates it; [`reduce`] rewrites an arbitrary valid vector to the
//! canonical form of its numerical type, recording a [`MoveTrace`] whose
//! replay reproduces the output exactly.

mod lemmas;
mod machine;
mod reduce;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dihedral::{Automorphism, DihedralElement, GroupContext};
use crate::hurwitz::{HurwitzError, HurwitzVector, NumericalType, NuVector};

pub use lemmas::{
    lemma_abm_shift, lemma_double_exchange, lemma_full_twist, lemma_no_rotations,
    lemma_pair_orbit, lemma_pairs, lemma_triple_normalize, PairVariant, TripleGoal,
};
pub use reduce::reduce;

/// Errors from normal-form construction and reduction.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    /// The numerical type admits no valid Hurwitz vector.
    #[error("numerical type is not realizable by a valid Hurwitz vector")]
    NotRealizable,
    /// Caller input violated a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The reducer could not complete its pipeline; this indicates a bug,
    /// never a property of the input.
    #[error("internal reduction failure: {0}")]
    InternalReductionFailure(String),
}

/// One recorded rewriting step: a braid move `{"b": [index, sign]}` or a
/// diagonal automorphism `{"a": {"shift": …, "unit": …}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveStep {
    #[serde(rename = "b")]
    Braid(usize, i8),
    #[serde(rename = "a")]
    Auto(Automorphism),
}

/// A replayable sequence of rewriting steps.
///
/// The defining invariant: replaying a trace against the vector it was
/// recorded from reproduces the recorded output element-for-element.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn new() -> Self {
        MoveTrace { steps: Vec::new() }
    }

    /// Apply every step to `v` in order.
    pub fn replay(&self, v: &HurwitzVector) -> Result<HurwitzVector, HurwitzError> {
        let mut cur = v.clone();
        for step in &self.steps {
            cur = match *step {
                MoveStep::Braid(i, sign) => cur.braid_move(i, sign)?,
                MoveStep::Auto(phi) => cur.apply_automorphism_diag(phi),
            };
        }
        Ok(cur)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Which of the three normal-form families a shape belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeCase {
    OddN,
    EvenNHPositive,
    EvenNHZero,
}

/// The parameters of a canonical normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormShape {
    pub case: ShapeCase,
    /// Even-index reflection count (0 for odd `n`).
    pub h: u32,
    /// Remaining reflection count (all reflections for odd `n`).
    pub k: u32,
    /// Sorted folded rotation amounts `r_1 ≤ … ≤ r_R`.
    pub r: Vec<u32>,
    /// Index of the distinguished final reflection.
    pub lambda: u32,
    /// The parity adjustment `ε`; only meaningful for `EvenNHPositive`.
    pub epsilon: Option<u32>,
}

impl NormalFormShape {
    /// `|r| = Σ r_i mod n`.
    pub fn r_total(&self, ctx: &GroupContext) -> u32 {
        ctx.modn(self.r.iter().map(|&x| x as i64).sum())
    }

    /// The literal entry list of the canonical vector.
    pub fn entries(&self, ctx: &GroupContext) -> Vec<DihedralElement> {
        let mut out = Vec::new();
        match self.case {
            ShapeCase::OddN => {
                for _ in 0..self.k.saturating_sub(2) {
                    out.push(ctx.reflection(0));
                }
                out.push(ctx.reflection(1));
                out.push(ctx.reflection(self.lambda as i64));
            }
            ShapeCase::EvenNHPositive => {
                for _ in 0..self.h {
                    out.push(ctx.reflection(0));
                }
                for _ in 0..self.k.saturating_sub(1) {
                    out.push(ctx.reflection(1));
                }
                out.push(ctx.reflection(self.lambda as i64));
            }
            ShapeCase::EvenNHZero => {
                for _ in 0..self.k.saturating_sub(2) {
                    out.push(ctx.reflection(1));
                }
                out.push(ctx.reflection(3));
                out.push(ctx.reflection(self.lambda as i64));
            }
        }
        for &r in &self.r {
            out.push(ctx.rotation(r as i64));
        }
        out
    }
}

/// Derive the shape parameters of a canonical type, without validating
/// realizability beyond structural constraints.
pub fn shape(ctx: &GroupContext, t: &NumericalType) -> Result<NormalFormShape, NormalFormError> {
    let nu = t.nu();
    if nu.n() != ctx.n() {
        return Err(NormalFormError::InvalidInput(format!(
            "type is over D_{} but context is D_{}",
            nu.n(),
            ctx.n()
        )));
    }
    if NumericalType::canonicalize(ctx, nu) != *t {
        return Err(NormalFormError::InvalidInput(
            "numerical type is not in canonical (lex-least) form".to_string(),
        ));
    }
    let r = nu.rotation_multiset();
    let r_total = ctx.modn(r.iter().map(|&x| x as i64).sum());
    match nu {
        NuVector::Odd { k, .. } => {
            if *k < 2 {
                return Err(NormalFormError::NotRealizable);
            }
            Ok(NormalFormShape {
                case: ShapeCase::OddN,
                h: 0,
                k: *k,
                r,
                lambda: ctx.modn(1 + r_total as i64),
                epsilon: None,
            })
        }
        NuVector::Even { k_even, k_odd, .. } => {
            let (h, k) = (*k_even, *k_odd);
            if h > 0 {
                if k == 0 {
                    return Err(NormalFormError::NotRealizable);
                }
                let epsilon = 1 - k % 2;
                Ok(NormalFormShape {
                    case: ShapeCase::EvenNHPositive,
                    h,
                    k,
                    r,
                    lambda: ctx.modn(r_total as i64 + epsilon as i64),
                    epsilon: Some(epsilon),
                })
            } else {
                if k < 2 {
                    return Err(NormalFormError::NotRealizable);
                }
                Ok(NormalFormShape {
                    case: ShapeCase::EvenNHZero,
                    h: 0,
                    k,
                    r,
                    lambda: ctx.modn(r_total as i64 + 3),
                    epsilon: None,
                })
            }
        }
    }
}

/// The canonical Hurwitz vector of a (canonical) numerical type, or
/// `NotRealizable` if no valid vector carries the type.
///
/// Realizability is decided constructively: the shape's literal entries
/// are built and required to validate and to carry exactly the invariant
/// `ν` of the input type.
pub fn canonical_form(
    ctx: &GroupContext,
    t: &NumericalType,
) -> Result<HurwitzVector, NormalFormError> {
    let shape = shape(ctx, t)?;
    let v = HurwitzVector::new(*ctx, shape.entries(ctx));
    if v.validate().is_err() || v.nu() != *t.nu() {
        return Err(NormalFormError::NotRealizable);
    }
    Ok(v)
}

/// The orbit of a pair-couple `(s_{i0}, s_{i0}, s_{j0}, s_{j0})` under the
/// couple-shift rewriting: both pairs translate by multiples of
/// `δ = j0 − i0`, so the reachable couples are exactly
/// `{(i, i + δ) : i ≡ i0 (mod gcd(n, δ))}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOrbit {
    pub n: u32,
    /// The invariant difference `j0 − i0 mod n`.
    pub delta: u32,
    /// `gcd(n, delta)`; the first coordinate is constrained mod this.
    pub modulus: u32,
    /// `i0 mod modulus`.
    pub residue: u32,
}

impl PairOrbit {
    /// Membership test for a couple `(i, j)`.
    pub fn contains(&self, i: i64, j: i64) -> bool {
        let ctx = GroupContext::new(self.n);
        ctx.modn(j - i) == self.delta && ctx.modn(i) % self.modulus == self.residue
    }
}
