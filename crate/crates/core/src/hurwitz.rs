//! Hurwitz vectors over `D_n` and the braid group action on them.
//!
//! A Hurwitz vector of length `d` is a tuple `(c_1, …, c_d)` of
//! non-identity elements of `D_n` whose product is the identity and which
//! generate the whole group.  The braid group `B_d` acts on such tuples by
//! the Hurwitz moves; automorphisms of `D_n` act diagonally.  Both actions
//! preserve validity, and the numerical invariant `ν` (class counts) is a
//! braid invariant while automorphisms permute its entries — minimising
//! over that permutation action yields the [`NumericalType`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dihedral::{
    Automorphism, ConjugacyClassId, DihedralElement, DihedralError, GroupContext,
};
use crate::normal_form;

/// Errors from Hurwitz-vector validation, moves, and parsing.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    /// Entry `index` (1-based) is the identity.
    #[error("entry {index} is the identity")]
    IdentityEntry { index: usize },
    /// The entries generate a proper subgroup of the given size.
    #[error("entries generate a proper subgroup of order {size}")]
    NotGenerating { size: usize },
    /// The product of all entries is `actual`, not the identity.
    #[error("product of entries is {actual}, not the identity")]
    ProductNotIdentity { actual: DihedralElement },
    /// Braid generators are `σ_i` for `1 ≤ i ≤ d − 1` only.
    #[error("braid index {index} out of range for length {d} (need 1 <= i <= d-1)")]
    BraidIndexOutOfRange { index: usize, d: usize },
    /// The Hurwitz genus formula did not produce an integer.
    #[error("branching data yields a non-integral genus")]
    NonIntegralGenus,
    /// A vector literal did not match `[c1,c2,...]@n=<n>`.
    #[error("cannot parse {0:?} as a Hurwitz vector")]
    MalformedVector(String),
    #[error(transparent)]
    Element(#[from] DihedralError),
}

/// A tuple of dihedral elements together with its ambient group.
///
/// Construction does not validate; call [`HurwitzVector::validate`] to
/// check the Hurwitz conditions.  This keeps intermediate states of
/// braid-word rewriting representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HurwitzVector {
    ctx: GroupContext,
    entries: Vec<DihedralElement>,
}

/// The class-count invariant `ν` of a vector.
///
/// For odd `n` it records the number `k` of reflections and, for each
/// folded rotation amount `1 ≤ u ≤ n'`, the number of entries in that
/// rotation class (`rot[u-1]`).  For even `n` the reflection count splits
/// into the two reflection classes (`k_even` counts reflections `s_j` with
/// `j` even).  `ν` is invariant under braid moves; automorphisms permute
/// rotation classes by `u ↦ fold(unit · u)` and, for even `n`, swap the
/// two reflection classes exactly when `shift` is odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NuVector {
    Odd { n: u32, k: u32, rot: Vec<u32> },
    Even { n: u32, k_even: u32, k_odd: u32, rot: Vec<u32> },
}

/// The numerical type of a vector: the lexicographically least `ν` in its
/// orbit under `Aut(D_n)`.  Two vectors related by braid moves and/or a
/// diagonal automorphism have equal numerical types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NumericalType(pub NuVector);

impl NuVector {
    pub fn n(&self) -> u32 {
        match self {
            NuVector::Odd { n, .. } | NuVector::Even { n, .. } => *n,
        }
    }

    /// Total number of reflections.
    pub fn reflection_count(&self) -> u32 {
        match self {
            NuVector::Odd { k, .. } => *k,
            NuVector::Even { k_even, k_odd, .. } => k_even + k_odd,
        }
    }

    pub fn rot(&self) -> &[u32] {
        match self {
            NuVector::Odd { rot, .. } | NuVector::Even { rot, .. } => rot,
        }
    }

    /// Length of any vector carrying this invariant.
    pub fn d(&self) -> u32 {
        self.reflection_count() + self.rot().iter().sum::<u32>()
    }

    /// The sorted multiset of rotation entries (each folded amount with
    /// its multiplicity).
    pub fn rotation_multiset(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &cnt) in self.rot().iter().enumerate() {
            for _ in 0..cnt {
                out.push(i as u32 + 1);
            }
        }
        out
    }

    /// Lexicographic comparison key: `(k, rot…)` for odd `n`,
    /// `(k_even, k_odd, rot…)` for even `n`.
    fn key(&self) -> Vec<u32> {
        match self {
            NuVector::Odd { k, rot, .. } => {
                let mut v = vec![*k];
                v.extend_from_slice(rot);
                v
            }
            NuVector::Even { k_even, k_odd, rot, .. } => {
                let mut v = vec![*k_even, *k_odd];
                v.extend_from_slice(rot);
                v
            }
        }
    }

    /// The image of this invariant under a diagonal automorphism.
    pub fn transform(&self, ctx: &GroupContext, phi: Automorphism) -> NuVector {
        let map_rot = |rot: &[u32]| {
            let mut out = vec![0u32; rot.len()];
            for (i, &cnt) in rot.iter().enumerate() {
                let u = i as u32 + 1;
                let image = ctx.fold(phi.unit as i64 * u as i64);
                debug_assert!(image >= 1, "units map nontrivial rotations to nontrivial ones");
                out[image as usize - 1] += cnt;
            }
            out
        };
        match self {
            NuVector::Odd { n, k, rot } => NuVector::Odd { n: *n, k: *k, rot: map_rot(rot) },
            NuVector::Even { n, k_even, k_odd, rot } => {
                let (ke, ko) = if phi.shift % 2 == 1 {
                    (*k_odd, *k_even)
                } else {
                    (*k_even, *k_odd)
                };
                NuVector::Even { n: *n, k_even: ke, k_odd: ko, rot: map_rot(rot) }
            }
        }
    }
}

impl PartialOrd for NuVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NuVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for NuVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuVector::Odd { k, rot, .. } => write!(
                f,
                "(k={k}; rot={rot:?})",
            ),
            NuVector::Even { k_even, k_odd, rot, .. } => {
                write!(f, "(k_even={k_even}, k_odd={k_odd}; rot={rot:?})")
            }
        }
    }
}

impl HurwitzVector {
    pub fn new(ctx: GroupContext, entries: Vec<DihedralElement>) -> Self {
        HurwitzVector { ctx, entries }
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn entries(&self) -> &[DihedralElement] {
        &self.entries
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    /// Check the three Hurwitz conditions, in order: no identity entries,
    /// the entries generate `D_n`, and the left-to-right product is the
    /// identity.
    pub fn validate(&self) -> Result<(), HurwitzError> {
        for (i, c) in self.entries.iter().enumerate() {
            if *c == self.ctx.identity() {
                return Err(HurwitzError::IdentityEntry { index: i + 1 });
            }
        }
        let closure = self.ctx.subgroup_closure(&self.entries);
        if closure.len() != 2 * self.ctx.n() as usize {
            return Err(HurwitzError::NotGenerating { size: closure.len() });
        }
        let product = self
            .entries
            .iter()
            .fold(self.ctx.identity(), |acc, &c| self.ctx.multiply(acc, c));
        if product != self.ctx.identity() {
            return Err(HurwitzError::ProductNotIdentity { actual: product });
        }
        Ok(())
    }

    /// One braid move.  `σ_i` (sign `+1`) replaces `(c_i, c_{i+1})` with
    /// `(c_i c_{i+1} c_i^{-1}, c_i)`; `σ_i^{-1}` (sign `-1`) replaces it
    /// with `(c_{i+1}, c_{i+1}^{-1} c_i c_{i+1})`.  `i` is 1-based.
    pub fn braid_move(&self, i: usize, sign: i8) -> Result<HurwitzVector, HurwitzError> {
        if i == 0 || i >= self.entries.len() {
            return Err(HurwitzError::BraidIndexOutOfRange { index: i, d: self.entries.len() });
        }
        let mut entries = self.entries.clone();
        let a = entries[i - 1];
        let b = entries[i];
        if sign >= 0 {
            entries[i - 1] = self.ctx.conjugate(b, a);
            entries[i] = a;
        } else {
            entries[i - 1] = b;
            entries[i] = self.ctx.conjugate(a, self.ctx.inverse(b));
        }
        Ok(HurwitzVector { ctx: self.ctx, entries })
    }

    /// Apply a braid word left to right.
    pub fn apply_braid_word(&self, word: &[(usize, i8)]) -> Result<HurwitzVector, HurwitzError> {
        let mut v = self.clone();
        for &(i, sign) in word {
            v = v.braid_move(i, sign)?;
        }
        Ok(v)
    }

    /// Apply an automorphism to every entry.
    pub fn apply_automorphism_diag(&self, phi: Automorphism) -> HurwitzVector {
        let entries = self
            .entries
            .iter()
            .map(|&c| self.ctx.apply_automorphism(phi, c))
            .collect();
        HurwitzVector { ctx: self.ctx, entries }
    }

    /// The class-count invariant `ν`.
    pub fn nu(&self) -> NuVector {
        let ctx = &self.ctx;
        let n = ctx.n();
        let mut rot = vec![0u32; ctx.n_prime() as usize];
        let mut k_even = 0u32;
        let mut k_odd = 0u32;
        for &c in &self.entries {
            match ctx.conjugacy_class(c) {
                ConjugacyClassId::Identity => {}
                ConjugacyClassId::Rotation(u) => rot[u as usize - 1] += 1,
                ConjugacyClassId::Reflection | ConjugacyClassId::ReflectionEven => k_even += 1,
                ConjugacyClassId::ReflectionOdd => k_odd += 1,
            }
        }
        if n % 2 == 1 {
            NuVector::Odd { n, k: k_even, rot }
        } else {
            NuVector::Even { n, k_even, k_odd, rot }
        }
    }

    /// The numerical type: the lex-least transform of `ν` over all
    /// automorphisms.
    pub fn numerical_type(&self) -> NumericalType {
        NumericalType::canonicalize(&self.ctx, &self.nu())
    }

    /// An automorphism whose diagonal action sends `ν` to its canonical
    /// (lex-least) transform.  Ties are broken by the least
    /// `(shift, unit)` pair, so the choice is deterministic.
    pub fn canonicalizing_automorphism(&self) -> Automorphism {
        let nu = self.nu();
        let mut best: Option<(NuVector, Automorphism)> = None;
        for phi in self.ctx.enumerate_automorphisms() {
            let image = nu.transform(&self.ctx, phi);
            match &best {
                Some((b, _)) if *b <= image => {}
                _ => best = Some((image, phi)),
            }
        }
        best.expect("Aut(D_n) is nonempty").1
    }

    /// Genus of the degree-`2n` cover of the sphere branched with local
    /// monodromies `c_1, …, c_d`, via the Riemann–Hurwitz formula
    /// `2(g − 1) = 2n (−2 + Σ (1 − 1/m_i))` with `m_i = ord(c_i)`.
    pub fn covering_genus(&self) -> Result<i64, HurwitzError> {
        let two_n = 2 * self.ctx.n() as i64;
        let d = self.entries.len() as i64;
        // Each order divides 2n, so the sum below is integral; the only
        // parity question is the final division by 2.
        let mut twice_g = 2 + two_n * (d - 2);
        for &c in &self.entries {
            let m = self.ctx.order(c) as i64;
            twice_g -= two_n / m;
        }
        if twice_g % 2 != 0 {
            return Err(HurwitzError::NonIntegralGenus);
        }
        Ok(twice_g / 2)
    }
}

impl NumericalType {
    /// The lex-least automorphism transform of an invariant.
    pub fn canonicalize(ctx: &GroupContext, nu: &NuVector) -> NumericalType {
        let best = ctx
            .enumerate_automorphisms()
            .into_iter()
            .map(|phi| nu.transform(ctx, phi))
            .min()
            .expect("Aut(D_n) is nonempty");
        NumericalType(best)
    }

    pub fn nu(&self) -> &NuVector {
        &self.0
    }

    /// Genus attached to the type via the Riemann–Hurwitz formula; this
    /// depends only on the class data (reflections have order 2, a
    /// rotation class `u` has order `n / gcd(n, u)`).
    pub fn genus(&self) -> Result<i64, HurwitzError> {
        let n = self.0.n() as i64;
        let two_n = 2 * n;
        let d = self.0.d() as i64;
        let mut twice_g = 2 + two_n * (d - 2);
        twice_g -= self.0.reflection_count() as i64 * n;
        for u in self.0.rotation_multiset() {
            let m = n / n.gcd(&(u as i64));
            twice_g -= two_n / m;
        }
        if twice_g % 2 != 0 {
            return Err(HurwitzError::NonIntegralGenus);
        }
        Ok(twice_g / 2)
    }
}

impl fmt::Display for HurwitzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]@n={}", self.ctx.n())
    }
}

impl FromStr for HurwitzVector {
    type Err = HurwitzError;

    /// Parse `[c1,c2,...]@n=<n>` where each `ci` is an element literal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || HurwitzError::MalformedVector(s.to_string());
        let (body, tail) = s.split_once("]@n=").ok_or_else(malformed)?;
        let body = body.strip_prefix('[').ok_or_else(malformed)?;
        let n: u32 = tail.trim().parse().map_err(|_| malformed())?;
        if n < 2 {
            return Err(malformed());
        }
        let ctx = GroupContext::new(n);
        let mut entries = Vec::new();
        if !body.trim().is_empty() {
            for piece in body.split(',') {
                entries.push(ctx.parse_element(piece)?);
            }
        }
        Ok(HurwitzVector { ctx, entries })
    }
}

/// One row of a type enumeration: a canonical numerical type together with
/// its canonical normal form, when the type is realizable by a valid
/// genus-zero Hurwitz vector.
#[derive(Debug, Clone)]
pub struct TypeRow {
    pub ty: NumericalType,
    pub canonical: Option<HurwitzVector>,
}

/// Enumerate all canonical numerical types of length `d` over `D_n`,
/// marking each as realizable (with its canonical form) or not.
///
/// Candidates are all class multisets of size `d`; each is canonicalized,
/// deduplicated, and tested for realizability by building its normal form
/// and validating it.  Rows are sorted by type.
pub fn enumerate_types(ctx: &GroupContext, d: usize) -> Vec<TypeRow> {
    let n = ctx.n();
    let n_prime = ctx.n_prime() as usize;
    let even = n % 2 == 0;
    // Per-class slot counts: [reflection classes..., rotation classes...].
    let class_count = if even { 2 + n_prime } else { 1 + n_prime };
    let mut seen = std::collections::BTreeSet::new();
    let mut counts = vec![0u32; class_count];
    // Enumerate compositions of d into class_count nonnegative parts.
    fn rec(
        ctx: &GroupContext,
        even: bool,
        counts: &mut Vec<u32>,
        slot: usize,
        remaining: u32,
        seen: &mut std::collections::BTreeSet<NumericalType>,
    ) {
        if slot + 1 == counts.len() {
            counts[slot] = remaining;
            let nu = if even {
                NuVector::Even {
                    n: ctx.n(),
                    k_even: counts[0],
                    k_odd: counts[1],
                    rot: counts[2..].to_vec(),
                }
            } else {
                NuVector::Odd { n: ctx.n(), k: counts[0], rot: counts[1..].to_vec() }
            };
            seen.insert(NumericalType::canonicalize(ctx, &nu));
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c;
            rec(ctx, even, counts, slot + 1, remaining - c, seen);
        }
    }
    rec(ctx, even, &mut counts, 0, d as u32, &mut seen);
    seen.into_iter()
        .map(|ty| {
            let canonical = normal_form::canonical_form(ctx, &ty).ok();
            TypeRow { ty, canonical }
        })
        .collect()
}
