//! Internal rewriting machine: a vector being rewritten together with the
//! trace of every move applied so far.
//!
//! All compound operations (pair transport, triple steering, quadruple
//! retargeting, the adjacent-block shift) are built from single recorded
//! braid moves, so the trace invariant — replaying the trace reproduces
//! the current entries — holds by construction.
//!
//! Position arguments are 1-based throughout, matching braid indices.

use num_integer::Integer;

use crate::dihedral::{Automorphism, DihedralElement, GroupContext};
use crate::hurwitz::HurwitzVector;

use super::{MoveStep, MoveTrace};

/// Signed representative of `v mod n` in `(-n/2, n/2]`.
pub(crate) fn fold_signed(n: i64, v: i64) -> i64 {
    let m = v.rem_euclid(n);
    if 2 * m > n {
        m - n
    } else {
        m
    }
}

/// `gcd(n, v)` with `v` taken mod `n`; `gcd(n, 0) = n`.
pub(crate) fn gcd_mod(n: i64, v: i64) -> i64 {
    n.gcd(&v.rem_euclid(n))
}

/// Rounded division, ties toward larger magnitude quotients are harmless.
fn round_div(a: i64, b: i64) -> i64 {
    debug_assert!(b != 0);
    let neg = (a < 0) ^ (b < 0);
    let (a, b) = (a.abs(), b.abs());
    let q = (a + b / 2) / b;
    if neg {
        -q
    } else {
        q
    }
}

/// Solve `k * a ≡ b (mod n)` for `k`, if a solution exists.
pub(crate) fn solve_scaled(n: i64, a: i64, b: i64) -> Option<i64> {
    let a = a.rem_euclid(n);
    let b = b.rem_euclid(n);
    let g = n.gcd(&a);
    if b % g != 0 {
        return None;
    }
    if a == 0 {
        return Some(0); // b ≡ 0 mod n here
    }
    let e = (a / g).extended_gcd(&(n / g));
    let inv = e.x.rem_euclid(n / g);
    Some((b / g * inv).rem_euclid(n / g))
}

/// Solve `Σ l_i * c_i ≡ b (mod n)` for the `l_i`, if a solution exists.
pub(crate) fn solve_combo(n: i64, coeffs: &[i64], b: i64) -> Option<Vec<i64>> {
    // Maintain g = gcd(n, c_1, …, c_i) with a witness combination.
    let mut g = n;
    let mut witness = vec![0i64; coeffs.len()];
    for (i, &c) in coeffs.iter().enumerate() {
        let c = c.rem_euclid(n);
        let e = g.extended_gcd(&c);
        // e.gcd = e.x * g + e.y * c
        for w in witness.iter_mut() {
            *w = (*w * e.x).rem_euclid(n);
        }
        witness[i] = e.y.rem_euclid(n);
        g = e.gcd;
    }
    let b = b.rem_euclid(n);
    if b % g != 0 {
        return None;
    }
    let scale = b / g;
    for w in witness.iter_mut() {
        *w = (*w * scale).rem_euclid(n);
    }
    Some(witness)
}

/// A vector under rewriting, with its recorded trace.
#[derive(Debug, Clone)]
pub(crate) struct Machine {
    ctx: GroupContext,
    entries: Vec<DihedralElement>,
    steps: Vec<MoveStep>,
}

impl Machine {
    pub fn new(v: &HurwitzVector) -> Self {
        Machine { ctx: *v.ctx(), entries: v.entries().to_vec(), steps: Vec::new() }
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn n(&self) -> i64 {
        self.ctx.n() as i64
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[DihedralElement] {
        &self.entries
    }

    pub fn to_vector(&self) -> HurwitzVector {
        HurwitzVector::new(self.ctx, self.entries.clone())
    }

    pub fn into_trace(self) -> MoveTrace {
        MoveTrace { steps: self.steps }
    }

    pub fn trace(&self) -> MoveTrace {
        MoveTrace { steps: self.steps.clone() }
    }

    /// 1-based entry accessor.
    pub fn at(&self, p: usize) -> DihedralElement {
        self.entries[p - 1]
    }

    pub fn is_refl(&self, p: usize) -> bool {
        self.at(p).is_reflection
    }

    /// Shift of the entry at `p` (reflection index or rotation amount).
    pub fn val(&self, p: usize) -> i64 {
        self.at(p).shift as i64
    }

    /// One recorded braid move, same convention as
    /// [`HurwitzVector::braid_move`].
    pub fn braid(&mut self, i: usize, sign: i8) {
        debug_assert!(i >= 1 && i < self.entries.len(), "braid index {i} out of range");
        let a = self.entries[i - 1];
        let b = self.entries[i];
        if sign >= 0 {
            self.entries[i - 1] = self.ctx.conjugate(b, a);
            self.entries[i] = a;
        } else {
            self.entries[i - 1] = b;
            self.entries[i] = self.ctx.conjugate(a, self.ctx.inverse(b));
        }
        self.steps.push(MoveStep::Braid(i, if sign >= 0 { 1 } else { -1 }));
    }

    /// `σ_i^k` for signed `k`.
    pub fn braid_pow(&mut self, i: usize, k: i64) {
        let sign = if k >= 0 { 1 } else { -1 };
        for _ in 0..k.abs() {
            self.braid(i, sign);
        }
    }

    /// Recorded diagonal automorphism.
    pub fn auto(&mut self, phi: Automorphism) {
        for e in self.entries.iter_mut() {
            *e = self.ctx.apply_automorphism(phi, *e);
        }
        self.steps.push(MoveStep::Auto(phi));
    }

    /// Move the equal reflection pair at `(p, p+1)` one slot right, past
    /// the entry at `p+2` (any element), leaving that entry unchanged.
    pub fn transport_pair_right(&mut self, p: usize) {
        debug_assert!(self.is_refl(p) && self.at(p) == self.at(p + 1));
        self.braid(p + 1, 1);
        self.braid(p, 1);
    }

    /// Move the equal reflection pair at `(p, p+1)` one slot left, past
    /// the entry at `p-1` (any element), leaving that entry unchanged.
    pub fn transport_pair_left(&mut self, p: usize) {
        debug_assert!(self.is_refl(p) && self.at(p) == self.at(p + 1));
        self.braid(p - 1, -1);
        self.braid(p, -1);
    }

    /// Transport the pair at `(from, from+1)` so it occupies
    /// `(to, to+1)`; entries passed over keep their values.
    pub fn move_pair(&mut self, from: usize, to: usize) {
        let mut p = from;
        while p < to {
            self.transport_pair_right(p);
            p += 1;
        }
        while p > to {
            self.transport_pair_left(p);
            p -= 1;
        }
    }

    /// Adjacent-block shift: with reflections at `(p, p+1)` and a rotation
    /// `x^m` at `p+2`, apply `(σ_{p+1} σ_p σ_p σ_{p+1})^l` (inverted for
    /// negative `l`), adding `2 l m` to both reflection indices and
    /// leaving the rotation unchanged.
    pub fn abm(&mut self, p: usize, l: i64) {
        debug_assert!(self.is_refl(p) && self.is_refl(p + 1) && !self.is_refl(p + 2));
        for _ in 0..l.abs() {
            if l > 0 {
                self.braid(p + 1, 1);
                self.braid(p, 1);
                self.braid(p, 1);
                self.braid(p + 1, 1);
            } else {
                self.braid(p + 1, -1);
                self.braid(p, -1);
                self.braid(p, -1);
                self.braid(p + 1, -1);
            }
        }
    }

    /// `σ_p^2`: conjugates both entries by their product.
    pub fn full_twist(&mut self, p: usize) {
        self.braid(p, 1);
        self.braid(p, 1);
    }

    /// Walk the entry at position `from` leftwards to position 1;
    /// every entry it passes is conjugated by it.
    pub fn walk_left(&mut self, from: usize) {
        for i in (1..from).rev() {
            self.braid(i, -1);
        }
    }

    /// Signed differences of the reflection triple at `(p, p+1, p+2)`.
    fn triple_diffs(&self, p: usize) -> (i64, i64) {
        let n = self.n();
        (
            fold_signed(n, self.val(p + 1) - self.val(p)),
            fold_signed(n, self.val(p + 2) - self.val(p + 1)),
        )
    }

    /// Euclidean descent on the difference pair of a reflection triple,
    /// using the index-difference dynamics
    /// `σ_p^{±1}: d2 ±= d1`, `σ_{p+1}^{±1}: d1 ∓= d2`,
    /// until `d2 = 0`.  Returns the terminal `d1` (some residue whose gcd
    /// with `n` equals `gcd(n, d1, d2)`).
    fn triple_euclid(&mut self, p: usize) -> i64 {
        let mut guard = 0;
        loop {
            guard += 1;
            assert!(guard < 1000, "triple descent failed to terminate");
            let (d1, d2) = self.triple_diffs(p);
            if d2 == 0 {
                return self.val(p + 1) - self.val(p);
            }
            if d1 == 0 {
                // d1 += d2
                self.braid(p + 1, -1);
                continue;
            }
            let before = d1.abs().max(d2.abs());
            // Reduce d2 modulo d1: d2 -= k * d1.
            let k = round_div(d2, d1);
            self.braid_pow(p, -k);
            let (d1, d2) = self.triple_diffs(p);
            if d2 != 0 && d1 != 0 {
                // Reduce d1 modulo d2: d1 -= m * d2.
                let m = round_div(d1, d2);
                self.braid_pow(p + 1, m);
            }
            let (d1, d2) = self.triple_diffs(p);
            let after = d1.abs().max(d2.abs());
            assert!(after <= before, "triple descent must not grow");
        }
    }

    /// Steer the reflection triple at `(p, p+1, p+2)` to the exact signed
    /// difference pair `(t1, t2)` (mod `n`).  Requires
    /// `gcd(n, t1, t2) = gcd(n, d1, d2)`.  The triple's alternating
    /// product is invariant; the first entry's value is not controlled.
    pub fn triple_steer(&mut self, p: usize, t1: i64, t2: i64) -> Result<(), String> {
        let n = self.n();
        let (d1, d2) = self.triple_diffs(p);
        let gamma = n.gcd(&gcd_mod(n, d1).gcd(&gcd_mod(n, d2)));
        let gamma_t = n.gcd(&gcd_mod(n, t1).gcd(&gcd_mod(n, t2)));
        if gamma != gamma_t {
            return Err(format!(
                "triple_steer: gcd mismatch (have {gamma}, target {gamma_t})"
            ));
        }
        let g = self.triple_euclid(p).rem_euclid(n);
        let (t1, t2) = (t1.rem_euclid(n), t2.rem_euclid(n));
        if g == 0 {
            // All three entries equal; only the zero target is reachable,
            // which the gcd check already guaranteed (gamma = n).
            debug_assert!(t1 == 0 && t2 == 0);
            return Ok(());
        }
        // Path A: (g,0) -σ_p-> (g,g) -σ_{p+1}^k-> (t1,g) -σ_p^j-> (t1,t2).
        let plan_a = (|| {
            let k = solve_scaled(n, g, g - t1)?;
            let j = solve_scaled(n, t1, t2 - g)?;
            Some((k, j))
        })();
        if let Some((k, j)) = plan_a {
            self.braid(p, 1);
            self.braid_pow(p + 1, k);
            self.braid_pow(p, j);
        } else {
            // Path B: (g,0) -σ_p^m-> (g,t2) -σ_{p+1}^k-> (t1,t2).
            let m = solve_scaled(n, g, t2)
                .ok_or_else(|| "triple_steer: no m with m*g = t2".to_string())?;
            let k = solve_scaled(n, t2, g - t1)
                .ok_or_else(|| "triple_steer: no k with k*t2 = g - t1".to_string())?;
            self.braid_pow(p, m);
            self.braid_pow(p + 1, k);
        }
        let (d1, d2) = self.triple_diffs(p);
        if (d1 - t1).rem_euclid(n) != 0 || (d2 - t2).rem_euclid(n) != 0 {
            return Err("triple_steer: postcondition failed".to_string());
        }
        Ok(())
    }

    /// Quadruple differences `(d1, d2)` for reflections at `(p…p+3)`;
    /// `d3 = -d1` is forced by the trivial alternating product.
    fn quad_diffs(&self, p: usize) -> (i64, i64) {
        let n = self.n();
        (
            fold_signed(n, self.val(p + 1) - self.val(p)),
            fold_signed(n, self.val(p + 2) - self.val(p + 1)),
        )
    }

    /// Rewrite two adjacent equal pairs `(u,u,w,w)` at `(p…p+3)` into
    /// `(a', a', a'+δ', a'+δ')`.  Requires `gcd(n, δ') = gcd(n, w-u) = γ`
    /// and `a' ≡ u (mod γ)`.
    ///
    /// Dynamics on `(first, d1, d2)`:
    /// `σ_p^{±1}: a ∓= d1, d2 ±= d1`; `σ_{p+1}^{±1}: d1 ∓= d2`;
    /// `σ_{p+2}^{±1}: d2 ±= d1`.
    pub fn quad_retarget(&mut self, p: usize, a_t: i64, delta_t: i64) -> Result<(), String> {
        let n = self.n();
        debug_assert!(
            self.at(p) == self.at(p + 1) && self.at(p + 2) == self.at(p + 3),
            "quad_retarget requires two equal pairs"
        );
        let a0 = self.val(p);
        let delta0 = self.val(p + 2) - a0;
        let gamma = gcd_mod(n, delta0);
        if gcd_mod(n, delta_t) != gamma {
            return Err(format!(
                "quad_retarget: gcd mismatch (have {gamma}, target {})",
                gcd_mod(n, delta_t)
            ));
        }
        if (a_t - a0).rem_euclid(n) % gamma != 0 {
            return Err("quad_retarget: first value unreachable mod gcd".to_string());
        }
        if gamma == n {
            // Both pairs equal; only translations by 0 are possible, and
            // the residue check above already forced a_t ≡ a0.
            if (a_t - a0).rem_euclid(n) != 0 || delta_t.rem_euclid(n) != 0 {
                return Err("quad_retarget: degenerate couple cannot move".to_string());
            }
            return Ok(());
        }
        // Step 1: Euclid on (d1, d2) to (g, 0) using σ_{p+1} and σ_{p+2}.
        let mut guard = 0;
        loop {
            guard += 1;
            assert!(guard < 1000, "quad descent failed to terminate");
            let (d1, d2) = self.quad_diffs(p);
            if d2 == 0 {
                break;
            }
            if d1 == 0 {
                self.braid(p + 1, -1); // d1 += d2
                continue;
            }
            let before = d1.abs().max(d2.abs());
            let k = round_div(d2, d1);
            self.braid_pow(p + 2, -k); // d2 -= k*d1
            let (d1, d2) = self.quad_diffs(p);
            if d2 != 0 && d1 != 0 {
                let m = round_div(d1, d2);
                self.braid_pow(p + 1, m); // d1 -= m*d2
            }
            let (d1, d2) = self.quad_diffs(p);
            assert!(d1.abs().max(d2.abs()) <= before, "quad descent must not grow");
        }
        let g = (self.val(p + 1) - self.val(p)).rem_euclid(n);
        debug_assert!(n.gcd(&g) == gamma && g != 0);
        // Step 2: fix the first value with σ_p^t (a -= t*g), then undo the
        // side effect on d2 with σ_{p+2}^{-t}.
        let t = solve_scaled(n, g, self.val(p) - a_t)
            .ok_or_else(|| "quad_retarget: no t for first-value fix".to_string())?;
        self.braid_pow(p, t);
        self.braid_pow(p + 2, -t);
        // Step 3: set d2 = δ' with σ_{p+2}^m (d2 += m*g).
        let m = solve_scaled(n, g, delta_t)
            .ok_or_else(|| "quad_retarget: no m for delta set".to_string())?;
        self.braid_pow(p + 2, m);
        // Step 4: clear d1 with σ_{p+1}^k (d1 -= k*δ').
        let k = solve_scaled(n, delta_t, g)
            .ok_or_else(|| "quad_retarget: no k for d1 clear".to_string())?;
        self.braid_pow(p + 1, k);
        // Postcondition.
        let ok = self.at(p) == self.at(p + 1)
            && self.at(p + 2) == self.at(p + 3)
            && (self.val(p) - a_t).rem_euclid(n) == 0
            && (self.val(p + 2) - a_t - delta_t).rem_euclid(n) == 0;
        if !ok {
            return Err("quad_retarget: postcondition failed".to_string());
        }
        Ok(())
    }
}
