//! Arithmetic in the dihedral group `D_n` and its automorphism group.
//!
//! `D_n` is presented as `⟨x, y | x^n = y^2 = (xy)^2 = 1⟩`, so every element
//! is uniquely `x^j` (a rotation) or `x^j y` (a reflection) with
//! `0 ≤ j < n`.  Elements carry only their reflection bit and shift; the
//! modulus lives in a [`GroupContext`] that every operation takes
//! explicitly.  This makes a modulus mismatch structurally impossible: two
//! elements can only interact through a context, and a context has exactly
//! one `n`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from dihedral-level parsing and construction.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DihedralError {
    /// An element literal did not match `e`, `r<j>`, or `s<j>`.
    #[error("cannot parse {0:?} as a dihedral element")]
    MalformedElement(String),
    /// The shift of a parsed element was out of range for the group.
    #[error("shift {shift} out of range for D_{n} (must be < {n})")]
    ShiftOutOfRange { shift: u32, n: u32 },
    /// An automorphism unit must be invertible mod `n`.
    #[error("unit {unit} is not invertible mod {n}")]
    NotAUnit { unit: u32, n: u32 },
}

/// The ambient dihedral group `D_n`.
///
/// `n_prime = floor(n / 2)` is the largest "folded" rotation amount; it is
/// precomputed because it bounds rotation conjugacy classes and the
/// rotation part of numerical invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupContext {
    n: u32,
    n_prime: u32,
}

/// An element of `D_n`: `x^shift` if `is_reflection` is false, `x^shift y`
/// otherwise.
///
/// The derived order sorts the identity first, then rotations by shift,
/// then reflections by shift; this is the order used everywhere a
/// deterministic ("lex-least") choice is required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElement {
    pub is_reflection: bool,
    pub shift: u32,
}

/// A conjugacy class of `D_n`.
///
/// Rotations `x^u` and `x^{-u}` are conjugate, so rotation classes are
/// labelled by the folded amount `1 ≤ u ≤ n'`.  For odd `n` all
/// reflections are conjugate; for even `n` they split by the parity of the
/// reflection index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConjugacyClassId {
    Identity,
    Rotation(u32),
    Reflection,
    ReflectionEven,
    ReflectionOdd,
}

/// An automorphism of `D_n`, acting by `x^j y^ε ↦ x^{unit·j + shift·ε} y^ε`.
///
/// `unit` must be invertible mod `n`; `Aut(D_n) ≅ Z/n ⋊ (Z/n)^*` has order
/// `n · φ(n)`.  Serialized with the wire names `shift`/`unit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Automorphism {
    pub shift: u32,
    pub unit: u32,
}

impl GroupContext {
    /// Context for `D_n`.  Requires `n ≥ 2` so that reflections and
    /// rotations are distinct notions.
    pub fn new(n: u32) -> Self {
        assert!(n >= 2, "D_n requires n >= 2, got {n}");
        GroupContext { n, n_prime: n / 2 }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `floor(n / 2)`, the largest folded rotation amount.
    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    /// Reduce an integer into `[0, n)`.
    pub fn modn(&self, v: i64) -> u32 {
        v.rem_euclid(self.n as i64) as u32
    }

    /// Fold a rotation amount into `[0, n']`: `min(u mod n, n - u mod n)`.
    pub fn fold(&self, u: i64) -> u32 {
        let m = self.modn(u);
        m.min(self.n - m)
    }

    pub fn identity(&self) -> DihedralElement {
        DihedralElement { is_reflection: false, shift: 0 }
    }

    /// The rotation `x^j` (any integer `j`, reduced mod `n`).
    pub fn rotation(&self, j: i64) -> DihedralElement {
        DihedralElement { is_reflection: false, shift: self.modn(j) }
    }

    /// The reflection `s_j = x^j y` (any integer `j`, reduced mod `n`).
    pub fn reflection(&self, j: i64) -> DihedralElement {
        DihedralElement { is_reflection: true, shift: self.modn(j) }
    }

    /// Group multiplication:
    /// `(ε₁, j₁)·(ε₂, j₂) = (ε₁ ⊕ ε₂, j₁ + (−1)^{ε₁} j₂)`.
    pub fn multiply(&self, g: DihedralElement, h: DihedralElement) -> DihedralElement {
        let sign = if g.is_reflection { -1i64 } else { 1 };
        DihedralElement {
            is_reflection: g.is_reflection ^ h.is_reflection,
            shift: self.modn(g.shift as i64 + sign * h.shift as i64),
        }
    }

    pub fn inverse(&self, g: DihedralElement) -> DihedralElement {
        if g.is_reflection {
            g
        } else {
            self.rotation(-(g.shift as i64))
        }
    }

    /// Conjugation `h g h^{-1}`.
    pub fn conjugate(&self, g: DihedralElement, h: DihedralElement) -> DihedralElement {
        self.multiply(self.multiply(h, g), self.inverse(h))
    }

    /// Multiplicative order of an element.
    pub fn order(&self, g: DihedralElement) -> u32 {
        if g.is_reflection {
            2
        } else if g.shift == 0 {
            1
        } else {
            self.n / self.n.gcd(&g.shift)
        }
    }

    /// The conjugacy class of an element.
    pub fn conjugacy_class(&self, g: DihedralElement) -> ConjugacyClassId {
        if !g.is_reflection {
            if g.shift == 0 {
                ConjugacyClassId::Identity
            } else {
                ConjugacyClassId::Rotation(self.fold(g.shift as i64))
            }
        } else if self.n % 2 == 1 {
            ConjugacyClassId::Reflection
        } else if g.shift % 2 == 0 {
            ConjugacyClassId::ReflectionEven
        } else {
            ConjugacyClassId::ReflectionOdd
        }
    }

    /// Build an automorphism, checking that `unit` is invertible mod `n`.
    pub fn automorphism(&self, shift: i64, unit: i64) -> Result<Automorphism, DihedralError> {
        let b = self.modn(unit);
        if self.n.gcd(&b) != 1 {
            return Err(DihedralError::NotAUnit { unit: b, n: self.n });
        }
        Ok(Automorphism { shift: self.modn(shift), unit: b })
    }

    /// The identity automorphism.
    pub fn identity_automorphism(&self) -> Automorphism {
        Automorphism { shift: 0, unit: 1 }
    }

    /// Apply an automorphism: `x^j y^ε ↦ x^{unit·j + shift·ε} y^ε`.
    pub fn apply_automorphism(&self, phi: Automorphism, g: DihedralElement) -> DihedralElement {
        let eps = if g.is_reflection { 1i64 } else { 0 };
        DihedralElement {
            is_reflection: g.is_reflection,
            shift: self.modn(phi.unit as i64 * g.shift as i64 + phi.shift as i64 * eps),
        }
    }

    /// Compose automorphisms, `phi2` applied first:
    /// `compose(φ₁, φ₂)(g) = φ₁(φ₂(g))`.
    pub fn compose(&self, phi1: Automorphism, phi2: Automorphism) -> Automorphism {
        Automorphism {
            shift: self.modn(phi1.shift as i64 + phi1.unit as i64 * phi2.shift as i64),
            unit: self.modn(phi1.unit as i64 * phi2.unit as i64),
        }
    }

    /// Inverse automorphism.
    pub fn invert_automorphism(&self, phi: Automorphism) -> Automorphism {
        // unit is invertible mod n by construction.
        let unit_inv = invert_mod(phi.unit, self.n).expect("unit invertible by construction");
        Automorphism {
            shift: self.modn(-(unit_inv as i64) * phi.shift as i64),
            unit: unit_inv,
        }
    }

    /// All `n · φ(n)` automorphisms, in ascending `(shift, unit)` order,
    /// without duplicates.
    pub fn enumerate_automorphisms(&self) -> Vec<Automorphism> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 1..self.n {
                if self.n.gcd(&b) == 1 {
                    out.push(Automorphism { shift: a, unit: b });
                }
            }
        }
        out
    }

    /// The subgroup generated by `gens`, as a sorted, duplicate-free list.
    /// Always contains the identity.
    pub fn subgroup_closure(&self, gens: &[DihedralElement]) -> Vec<DihedralElement> {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(self.identity());
        let mut work: Vec<DihedralElement> = vec![self.identity()];
        while let Some(g) = work.pop() {
            for &h in gens {
                let p = self.multiply(g, h);
                if seen.insert(p) {
                    work.push(p);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Parse an element literal: `e`, `r<j>`, or `s<j>` with `j < n`.
    pub fn parse_element(&self, s: &str) -> Result<DihedralElement, DihedralError> {
        let s = s.trim();
        if s == "e" {
            return Ok(self.identity());
        }
        let (is_reflection, rest) = match s.split_at_checked(1) {
            Some(("r", rest)) => (false, rest),
            Some(("s", rest)) => (true, rest),
            _ => return Err(DihedralError::MalformedElement(s.to_string())),
        };
        let shift: u32 = rest
            .parse()
            .map_err(|_| DihedralError::MalformedElement(s.to_string()))?;
        if shift >= self.n {
            return Err(DihedralError::ShiftOutOfRange { shift, n: self.n });
        }
        Ok(DihedralElement { is_reflection, shift })
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.is_reflection, self.shift) {
            (false, 0) => write!(f, "e"),
            (false, j) => write!(f, "r{j}"),
            (true, j) => write!(f, "s{j}"),
        }
    }
}

impl fmt::Display for ConjugacyClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjugacyClassId::Identity => write!(f, "identity"),
            ConjugacyClassId::Rotation(u) => write!(f, "rotation({u})"),
            ConjugacyClassId::Reflection => write!(f, "reflection"),
            ConjugacyClassId::ReflectionEven => write!(f, "reflection-even"),
            ConjugacyClassId::ReflectionOdd => write!(f, "reflection-odd"),
        }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(shift={}, unit={})", self.shift, self.unit)
    }
}

impl FromStr for Automorphism {
    type Err = String;

    /// Parse `a,b` (shift, unit).  Unit validity is checked against a
    /// concrete group only when the automorphism is applied.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected 'shift,unit', got {s:?}"))?;
        let shift = a.trim().parse().map_err(|e| format!("bad shift: {e}"))?;
        let unit = b.trim().parse().map_err(|e| format!("bad unit: {e}"))?;
        Ok(Automorphism { shift, unit })
    }
}

/// Inverse of `u` mod `m`, if `gcd(u, m) = 1`.
pub(crate) fn invert_mod(u: u32, m: u32) -> Option<u32> {
    let e = (u as i64).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        None
    } else {
        Some(e.x.rem_euclid(m as i64) as u32)
    }
}
