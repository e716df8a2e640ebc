//! Pinned braid-word rewriting lemmas.
//!
//! Each lemma applies a fixed braid word (parametrised only by position
//! and an iteration count) whose effect on entries of the stated shape is
//! a closed formula.  Preconditions are checked and reported as
//! `InvalidInput`; postconditions are asserted against the closed formula
//! after the word is applied.

use num_integer::Integer;

use crate::dihedral::GroupContext;
use crate::hurwitz::HurwitzVector;

use super::machine::Machine;
use super::{MoveTrace, NormalFormError, PairOrbit};

/// Desired outcome of [`lemma_triple_normalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleGoal {
    /// End with the first two entries of the triple equal.
    FirstTwoEqual,
    /// End with the last two entries of the triple equal.
    LastTwoEqual,
}

/// The four pair-couple rewriting families.
///
/// All operate on two adjacent equal reflection pairs
/// `(s_i, s_i, s_j, s_j)` at positions `p…p+3`, except `Reflect`, which
/// operates on three pairs `(s_a, s_a, s_i, s_i, s_j, s_j)` at `p…p+5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVariant {
    /// `(i,i,j,j) → (i,i,2i−j,2i−j)`: reflect the second pair in the
    /// first.  Word: `σ_{p+1} σ_{p+2} σ_{p+2} σ_{p+1}`.
    Negate,
    /// `(i,i,j,j) → (j,j,i,i)`.  Word: `σ_{p+1} σ_p σ_{p+2} σ_{p+1}`.
    Swap,
    /// `(i,i,j,j) → (i+lδ, i+lδ, j+lδ, j+lδ)` with `δ = j−i`.
    /// Word: `(σ_{p+1}^{-1} σ_p^{-1} σ_{p+2} σ_{p+1})^l` (inverted for
    /// negative `l`).
    Shift(i64),
    /// `(a,a,i,i,j,j) → (a,a,i,i,2i−j,2i−j)`: reflect the third pair in
    /// the second.  Word: `σ_{p+3} σ_{p+4} σ_{p+4} σ_{p+3}`.
    Reflect,
}

fn require(cond: bool, msg: &str) -> Result<(), NormalFormError> {
    if cond {
        Ok(())
    } else {
        Err(NormalFormError::InvalidInput(msg.to_string()))
    }
}

fn require_reflections(v: &HurwitzVector, p: usize, count: usize) -> Result<(), NormalFormError> {
    require(
        p >= 1 && p + count - 1 <= v.d(),
        &format!("positions {p}..{} out of range for length {}", p + count - 1, v.d()),
    )?;
    for q in p..p + count {
        require(
            v.entries()[q - 1].is_reflection,
            &format!("entry {q} must be a reflection"),
        )?;
    }
    Ok(())
}

/// Apply the Negate word at `p`, rewriting adjacent equal pairs
/// `(u,u,w,w)` into `(u,u,2u−w,2u−w)`.
pub(crate) fn negate_couple(m: &mut Machine, p: usize) {
    debug_assert!(m.at(p) == m.at(p + 1) && m.at(p + 2) == m.at(p + 3));
    m.braid(p + 1, 1);
    m.braid(p + 2, 1);
    m.braid(p + 2, 1);
    m.braid(p + 1, 1);
}

/// Apply the Swap word at `p`: `(u,u,w,w) → (w,w,u,u)`.
pub(crate) fn swap_couple(m: &mut Machine, p: usize) {
    debug_assert!(m.at(p) == m.at(p + 1) && m.at(p + 2) == m.at(p + 3));
    m.braid(p + 1, 1);
    m.braid(p, 1);
    m.braid(p + 2, 1);
    m.braid(p + 1, 1);
}

/// Apply the Shift word at `p`, translating both pairs by `l·(w−u)`.
pub(crate) fn shift_couple(m: &mut Machine, p: usize, l: i64) {
    debug_assert!(m.at(p) == m.at(p + 1) && m.at(p + 2) == m.at(p + 3));
    for _ in 0..l.abs() {
        if l > 0 {
            m.braid(p + 1, -1);
            m.braid(p, -1);
            m.braid(p + 2, 1);
            m.braid(p + 1, 1);
        } else {
            m.braid(p + 1, -1);
            m.braid(p + 2, -1);
            m.braid(p, 1);
            m.braid(p + 1, 1);
        }
    }
}

/// Normalize the reflection triple at `(p, p+1, p+2)` by a Euclidean
/// descent on its index differences, ending in the requested goal shape.
///
/// The descent strictly decreases `max(|d1|, |d2|)` (signed
/// representatives in `(−n/2, n/2]`) except for at most two conversion
/// moves at the end.
pub fn lemma_triple_normalize(
    v: &HurwitzVector,
    p: usize,
    goal: TripleGoal,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    require_reflections(v, p, 3)?;
    let mut m = Machine::new(v);
    let n = m.n();
    let d1 = (m.val(p + 1) - m.val(p)).rem_euclid(n);
    let d2 = (m.val(p + 2) - m.val(p + 1)).rem_euclid(n);
    let gamma = n.gcd(&d1).gcd(&n.gcd(&d2));
    let target = match goal {
        TripleGoal::FirstTwoEqual => (0, gamma % n),
        TripleGoal::LastTwoEqual => (gamma % n, 0),
    };
    m.triple_steer(p, target.0, target.1)
        .map_err(NormalFormError::InternalReductionFailure)?;
    match goal {
        TripleGoal::FirstTwoEqual => assert!(m.at(p) == m.at(p + 1)),
        TripleGoal::LastTwoEqual => assert!(m.at(p + 1) == m.at(p + 2)),
    }
    Ok((m.to_vector(), m.trace()))
}

/// The adjacent-block shift: with reflections at `(p, p+1)` and a
/// rotation `x^m` at `p+2`, both reflection indices change by `2·l·m`
/// and the rotation is unchanged.
pub fn lemma_abm_shift(
    v: &HurwitzVector,
    p: usize,
    l: i64,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    require_reflections(v, p, 2)?;
    require(p + 2 <= v.d(), "position p+2 out of range")?;
    require(
        !v.entries()[p + 1].is_reflection,
        &format!("entry {} must be a rotation", p + 2),
    )?;
    let mut m = Machine::new(v);
    let n = m.n();
    let (i0, j0, rot) = (m.val(p), m.val(p + 1), m.val(p + 2));
    m.abm(p, l);
    assert!(m.val(p) == (i0 + 2 * l * rot).rem_euclid(n));
    assert!(m.val(p + 1) == (j0 + 2 * l * rot).rem_euclid(n));
    assert!(m.val(p + 2) == rot && !m.is_refl(p + 2));
    Ok((m.to_vector(), m.trace()))
}

/// The pair-couple lemmas; see [`PairVariant`] for shapes and words.
pub fn lemma_pairs(
    v: &HurwitzVector,
    p: usize,
    variant: PairVariant,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    let span = if matches!(variant, PairVariant::Reflect) { 6 } else { 4 };
    require_reflections(v, p, span)?;
    let e = v.entries();
    require(e[p - 1] == e[p], "entries p, p+1 must be an equal pair")?;
    require(e[p + 1] == e[p + 2], "entries p+2, p+3 must be an equal pair")?;
    if span == 6 {
        require(e[p + 3] == e[p + 4], "entries p+4, p+5 must be an equal pair")?;
    }
    let mut m = Machine::new(v);
    let n = m.n();
    match variant {
        PairVariant::Negate => {
            let (u, w) = (m.val(p), m.val(p + 2));
            negate_couple(&mut m, p);
            let expect = (2 * u - w).rem_euclid(n);
            assert!(m.val(p) == u && m.val(p + 1) == u);
            assert!(m.val(p + 2) == expect && m.val(p + 3) == expect);
        }
        PairVariant::Swap => {
            let (u, w) = (m.val(p), m.val(p + 2));
            swap_couple(&mut m, p);
            assert!(m.val(p) == w && m.val(p + 1) == w);
            assert!(m.val(p + 2) == u && m.val(p + 3) == u);
        }
        PairVariant::Shift(l) => {
            let (u, w) = (m.val(p), m.val(p + 2));
            let delta = w - u;
            shift_couple(&mut m, p, l);
            let (eu, ew) = ((u + l * delta).rem_euclid(n), (w + l * delta).rem_euclid(n));
            assert!(m.val(p) == eu && m.val(p + 1) == eu);
            assert!(m.val(p + 2) == ew && m.val(p + 3) == ew);
        }
        PairVariant::Reflect => {
            let (a, i, j) = (m.val(p), m.val(p + 2), m.val(p + 4));
            negate_couple(&mut m, p + 2);
            let expect = (2 * i - j).rem_euclid(n);
            assert!(m.val(p) == a && m.val(p + 1) == a);
            assert!(m.val(p + 2) == i && m.val(p + 3) == i);
            assert!(m.val(p + 4) == expect && m.val(p + 5) == expect);
        }
    }
    Ok((m.to_vector(), m.trace()))
}

/// Move an entry past an adjacent equal reflection pair:
/// `(c, g, g) → (g, g, c)` with `c` at `p` arbitrary.
/// Word: `σ_p^{-1} σ_{p+1}^{-1}`.
pub fn lemma_double_exchange(
    v: &HurwitzVector,
    p: usize,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    require(p >= 1 && p + 2 <= v.d(), "positions out of range")?;
    let e = v.entries();
    require(
        e[p].is_reflection && e[p] == e[p + 1],
        "entries p+1, p+2 must be an equal reflection pair",
    )?;
    let c = e[p - 1];
    let g = e[p];
    let mut m = Machine::new(v);
    m.braid(p, -1);
    m.braid(p + 1, -1);
    assert!(m.at(p) == g && m.at(p + 1) == g && m.at(p + 2) == c);
    Ok((m.to_vector(), m.trace()))
}

/// The full twist `σ_p^2`: conjugates both entries by their product,
/// preserving it.
pub fn lemma_full_twist(
    v: &HurwitzVector,
    p: usize,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    require(p >= 1 && p + 1 <= v.d(), "position out of range")?;
    let ctx = *v.ctx();
    let (a, b) = (v.entries()[p - 1], v.entries()[p]);
    let z = ctx.multiply(a, b);
    let mut m = Machine::new(v);
    m.full_twist(p);
    assert!(m.at(p) == ctx.conjugate(a, z));
    assert!(m.at(p + 1) == ctx.conjugate(b, z));
    Ok((m.to_vector(), m.trace()))
}

/// The couple-shift orbit of a pair-couple `(i0, j0)`: both pairs move by
/// multiples of `δ = j0 − i0`, so the first coordinate ranges over the
/// residue class of `i0` mod `gcd(n, δ)` and the difference is fixed.
pub fn lemma_pair_orbit(ctx: &GroupContext, i0: i64, j0: i64) -> PairOrbit {
    let n = ctx.n() as i64;
    let delta = (j0 - i0).rem_euclid(n);
    let modulus = n.gcd(&delta);
    PairOrbit {
        n: ctx.n(),
        delta: delta as u32,
        modulus: modulus as u32,
        residue: i0.rem_euclid(modulus) as u32,
    }
}

/// Canonicalize an all-reflection vector with trivial product.
///
/// The vector need not generate `D_n`; it is rewritten inside the
/// subgroup it generates, using braid moves and shift automorphisms
/// (`unit = 1`) only.  The output is fully paired, pairs sorted by index,
/// first index `0`, and is a fixpoint of a strictly decreasing descent
/// on the (shift-normalized) multiset of pair indices: no single
/// reflect-in-a-pair or couple-shift rewriting improves it further.
pub fn lemma_no_rotations(
    v: &HurwitzVector,
) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    let d = v.d();
    require(d >= 2 && d % 2 == 0, "length must be even and at least 2")?;
    for (i, e) in v.entries().iter().enumerate() {
        require(e.is_reflection, &format!("entry {} must be a reflection", i + 1))?;
    }
    let ctx = *v.ctx();
    let product = v
        .entries()
        .iter()
        .fold(ctx.identity(), |acc, &c| ctx.multiply(acc, c));
    require(product == ctx.identity(), "product of entries must be the identity")?;

    let n = ctx.n() as i64;
    let pairs = d / 2;
    let mut m = Machine::new(v);

    // Pair up via triple steering; the final pair closes automatically
    // because the product is trivial.
    for f in 1..pairs {
        let p = 2 * f - 1;
        let d1 = (m.val(p + 1) - m.val(p)).rem_euclid(n);
        let d2 = (m.val(p + 2) - m.val(p + 1)).rem_euclid(n);
        let gamma = n.gcd(&d1).gcd(&n.gcd(&d2));
        m.triple_steer(p, 0, gamma % n)
            .map_err(NormalFormError::InternalReductionFailure)?;
    }
    assert!(m.at(2 * pairs - 1) == m.at(2 * pairs), "last pair must close");

    let pair_vals = |m: &Machine| -> Vec<i64> { (1..=pairs).map(|f| m.val(2 * f - 1)).collect() };
    // Shift-normalized comparison key: the lex-least sorted multiset over
    // all global shifts that move one of the indices to zero.
    let key_of = |vals: &[i64]| -> Vec<i64> {
        let mut best: Option<Vec<i64>> = None;
        for &c in vals {
            let mut shifted: Vec<i64> = vals.iter().map(|&x| (x - c).rem_euclid(n)).collect();
            shifted.sort_unstable();
            if best.as_ref().map_or(true, |b| shifted < *b) {
                best = Some(shifted);
            }
        }
        best.unwrap()
    };

    let sort_pairs = |m: &mut Machine| {
        // Selection sort on pair blocks via transports.
        for f in 1..pairs {
            let mut best = f;
            for g in f + 1..=pairs {
                if m.val(2 * g - 1) < m.val(2 * best - 1) {
                    best = g;
                }
            }
            if best != f {
                m.move_pair(2 * best - 1, 2 * f - 1);
            }
        }
    };

    // Descent: apply any strictly key-decreasing reflect or couple-shift.
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > 10_000 {
            return Err(NormalFormError::InternalReductionFailure(
                "no-rotations descent failed to terminate".to_string(),
            ));
        }
        let vals = pair_vals(&m);
        let cur_key = key_of(&vals);
        let mut applied = false;
        // Reflect pair t in pair s: value_t -> 2 u_s - u_t.
        'outer: for s in 1..=pairs {
            for t in 1..=pairs {
                if s == t {
                    continue;
                }
                let mut sim = vals.clone();
                sim[t - 1] = (2 * vals[s - 1] - vals[t - 1]).rem_euclid(n);
                if key_of(&sim) < cur_key {
                    // Bring pair t right after pair s and apply the word.
                    let (ps, pt) = (2 * s - 1, 2 * t - 1);
                    if pt > ps {
                        m.move_pair(pt, ps + 2);
                        negate_couple(&mut m, ps);
                    } else {
                        // Move pair s in front of pair t instead; pair t
                        // ends up right after it, values intact.
                        m.move_pair(ps, pt);
                        negate_couple(&mut m, pt);
                    }
                    applied = true;
                    break 'outer;
                }
            }
        }
        if !applied {
            // Couple shifts: pairs s and t both move by l·(u_t − u_s).
            'outer2: for s in 1..=pairs {
                for t in s + 1..=pairs {
                    let delta = vals[t - 1] - vals[s - 1];
                    if delta.rem_euclid(n) == 0 {
                        continue;
                    }
                    for l in 1..n {
                        let mut sim = vals.clone();
                        sim[s - 1] = (vals[s - 1] + l * delta).rem_euclid(n);
                        sim[t - 1] = (vals[t - 1] + l * delta).rem_euclid(n);
                        if key_of(&sim) < cur_key {
                            let (ps, pt) = (2 * s - 1, 2 * t - 1);
                            m.move_pair(pt, ps + 2);
                            shift_couple(&mut m, ps, l);
                            applied = true;
                            break 'outer2;
                        }
                    }
                }
            }
        }
        if !applied {
            break;
        }
        sort_pairs(&mut m);
    }
    sort_pairs(&mut m);
    // Final global shift: realize the key's minimizing translation.
    let vals = pair_vals(&m);
    let key = key_of(&vals);
    let shift = vals
        .iter()
        .map(|&c| {
            let mut shifted: Vec<i64> = vals.iter().map(|&x| (x - c).rem_euclid(n)).collect();
            shifted.sort_unstable();
            (shifted, c)
        })
        .min()
        .map(|(_, c)| c)
        .unwrap_or(0);
    if shift.rem_euclid(n) != 0 {
        let phi = ctx.automorphism(-shift, 1).expect("unit 1 is always valid");
        m.auto(phi);
    }
    sort_pairs(&mut m);
    assert!(pair_vals(&m) == key, "final values must realize the minimal key");
    assert!(m.val(1) == 0, "first pair index must be zero");
    Ok((m.to_vector(), m.trace()))
}
