//! The deterministic reducer: rewrite a valid Hurwitz vector to the
//! canonical form of its numerical type, recording every move.
//!
//! Pipeline:
//!
//! 1. apply the automorphism that canonicalizes `ν`;
//! 2. move rotations to the tail, fold them into `[1, n']` with full
//!    twists against the last reflection, and sort them;
//! 3. (even `n`) sort reflection-class labels, even class first, so that
//!    pairing produces the class layout of the target;
//! 4. pair the reflection block by triple steering, leaving a trailing
//!    "duo" `(s_j, s_{j+|r|})` whose offset is forced by the product;
//! 5. solve for a move plan taking the pair multiset and duo index to the
//!    target: a ν-stabilizing automorphism, at most a few pair/duo value
//!    rewritings (couple retargets and pair↔duo exchanges), then exact
//!    index shifts through the rotation block and duo twists;
//! 6. sort pairs into target order and, for one target family, walk the
//!    trailing `s_0` to the front.
//!
//! Every compound step has its postcondition checked; the final state is
//! required to equal the canonical form element-for-element, and the
//! recorded trace is replayed against the input as a last defence.

use num_integer::Integer;

use crate::dihedral::Automorphism;
use crate::hurwitz::HurwitzVector;

use super::machine::{gcd_mod, solve_combo, Machine};
use super::{canonical_form, shape, MoveTrace, NormalFormError, ShapeCase};

macro_rules! ensure_internal {
    ($cond:expr, $($arg:tt)*) => {
        if !($cond) {
            return Err(NormalFormError::InternalReductionFailure(format!($($arg)*)));
        }
    };
}

/// Target data for the solver, in the paired layout that precedes the
/// final ordering (and possible walk).
struct Layout {
    n: i64,
    /// Half the reflection count; pairs are `1..=big_n-1`, duo is last.
    big_n: usize,
    /// Canonical folded rotation values, ascending.
    r: Vec<i64>,
    r_total: i64,
    /// Lattice modulus for independent single-pair shifts.
    g2: i64,
    /// Lattice modulus for duo shifts.
    g1: i64,
    /// Target pair values (sorted).
    tp: Vec<i64>,
    /// Target duo leading index.
    j_star: i64,
    /// Whether the trailing `s_0` walks to the front at the end.
    walk: bool,
}

/// One value-rewriting operation of a solver plan.
#[derive(Debug, Clone, Copy)]
enum PlanOp {
    /// Exchange pair `pair`'s value with the duo index, writing `w` as
    /// the new pair value (indices refer to the sorted pair list).
    SwapMerge { pair: usize, w: i64 },
    /// Retarget the couple of pairs `(f1, f2)` to `(a, a + delta)`.
    Retarget { f1: usize, f2: usize, a: i64, delta: i64 },
    /// Retarget pair `pair` together with the duo (only when `|r| = 0`,
    /// so the duo is itself an equal pair) to `(a, a + delta)`.
    RetargetDuo { pair: usize, a: i64, delta: i64 },
}

/// Abstract solver state: sorted pair values plus the duo leading index.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Sim {
    p: Vec<i64>,
    j: i64,
}

impl Sim {
    fn apply(&self, n: i64, r_total: i64, op: PlanOp) -> Option<Sim> {
        match op {
            PlanOp::SwapMerge { pair, w } => {
                let u = *self.p.get(pair)?;
                let gamma = gcd_mod(n, self.j - u).gcd(&gcd_mod(n, r_total));
                if gcd_mod(n, w - u - r_total) != gamma {
                    return None;
                }
                let mut p = self.p.clone();
                p[pair] = w.rem_euclid(n);
                p.sort_unstable();
                Some(Sim { p, j: u })
            }
            PlanOp::Retarget { f1, f2, a, delta } => {
                let u = *self.p.get(f1)?;
                let w = *self.p.get(f2)?;
                if f1 == f2 {
                    return None;
                }
                let gamma = gcd_mod(n, w - u);
                if gcd_mod(n, delta) != gamma || (a - u).rem_euclid(n) % gamma != 0 {
                    return None;
                }
                let mut p = self.p.clone();
                p[f1] = a.rem_euclid(n);
                p[f2] = (a + delta).rem_euclid(n);
                p.sort_unstable();
                Some(Sim { p, j: self.j })
            }
            PlanOp::RetargetDuo { pair, a, delta } => {
                if r_total.rem_euclid(n) != 0 {
                    return None;
                }
                let u = *self.p.get(pair)?;
                let gamma = gcd_mod(n, self.j - u);
                if gcd_mod(n, delta) != gamma || (a - u).rem_euclid(n) % gamma != 0 {
                    return None;
                }
                let mut p = self.p.clone();
                p[pair] = a.rem_euclid(n);
                p.sort_unstable();
                Some(Sim { p, j: (a + delta).rem_euclid(n) })
            }
        }
    }
}

/// Check whether `sim` can be finished by lattice shifts alone, and if
/// so return the per-pair deltas (indexed like `sim.p`) and the duo
/// delta.
fn matchable(lay: &Layout, sim: &Sim) -> Option<(Vec<i64>, i64)> {
    let n = lay.n;
    let duo_delta = (lay.j_star - sim.j).rem_euclid(n);
    if duo_delta % lay.g1 != 0 {
        return None;
    }
    // Group pair values and targets by residue class mod g2 and match
    // within classes in sorted order.
    let mut deltas = vec![0i64; sim.p.len()];
    let mut by_class: std::collections::BTreeMap<i64, (Vec<usize>, Vec<i64>)> =
        std::collections::BTreeMap::new();
    for (i, &v) in sim.p.iter().enumerate() {
        by_class.entry(v % lay.g2).or_default().0.push(i);
    }
    for &t in &lay.tp {
        by_class.entry(t % lay.g2).or_default().1.push(t);
    }
    for (_, (idxs, targets)) in by_class {
        if idxs.len() != targets.len() {
            return None;
        }
        // sim.p is sorted, so idxs are in increasing value order; targets
        // come from the sorted tp list.
        for (&i, &t) in idxs.iter().zip(targets.iter()) {
            deltas[i] = (t - sim.p[i]).rem_euclid(n);
            debug_assert!(deltas[i] % lay.g2 == 0);
        }
    }
    Some((deltas, duo_delta))
}

pub fn reduce(v: &HurwitzVector) -> Result<(HurwitzVector, MoveTrace), NormalFormError> {
    v.validate()
        .map_err(|e| NormalFormError::InvalidInput(e.to_string()))?;
    let ctx = *v.ctx();
    let n = ctx.n() as i64;
    let t = v.numerical_type();
    let target = canonical_form(&ctx, &t).map_err(|_| {
        NormalFormError::InternalReductionFailure(
            "type of a valid vector must be realizable".to_string(),
        )
    })?;
    let sh = shape(&ctx, &t)?;

    let mut m = Machine::new(v);

    // Step 1: canonicalize ν.
    let phi_star = v.canonicalizing_automorphism();
    if phi_star != ctx.identity_automorphism() {
        m.auto(phi_star);
    }

    // Step 2: rotations to the tail, folded and sorted.
    let d = m.len();
    let refl_count = m.entries().iter().filter(|e| e.is_reflection).count();
    ensure_internal!(refl_count >= 2 && refl_count % 2 == 0, "valid vectors have 2N >= 2 reflections");
    push_rotations_right(&mut m, d);
    fold_and_sort_rotations(&mut m, refl_count, d)?;
    let r: Vec<i64> = ((refl_count + 1)..=d).map(|q| m.val(q)).collect();
    ensure_internal!(
        r == sh.r.iter().map(|&x| x as i64).collect::<Vec<i64>>(),
        "rotation multiset must match the canonical type"
    );
    let r_total = r.iter().sum::<i64>().rem_euclid(n);

    // Step 3: class-label layout (even n): even class first.
    if n % 2 == 0 {
        sort_labels_even_first(&mut m, refl_count);
    }

    // Step 4: pair up the reflection block.
    let big_n = refl_count / 2;
    for f in 1..big_n {
        let p = 2 * f - 1;
        let d1 = m.val(p + 1) - m.val(p);
        let d2 = m.val(p + 2) - m.val(p + 1);
        let gamma = gcd_mod(n, d1).gcd(&gcd_mod(n, d2)).gcd(&n);
        m.triple_steer(p, 0, gamma % n)
            .map_err(NormalFormError::InternalReductionFailure)?;
    }
    ensure_internal!(
        (m.val(2 * big_n) - m.val(2 * big_n - 1)).rem_euclid(n) == r_total,
        "duo offset must equal |r|"
    );
    for f in 1..big_n {
        ensure_internal!(m.at(2 * f - 1) == m.at(2 * f), "pair {f} must be equal");
    }

    // Step 5: solve.
    let g2 = r.iter().fold(n, |g, &ri| g.gcd(&(2 * ri).rem_euclid(n)));
    let g1 = g2.gcd(&gcd_mod(n, r_total));
    let (tp, j_star, walk) = solver_target(&sh, n)?;
    ensure_internal!(tp.len() == big_n - 1, "target pair count must match");
    let lay = Layout { n, big_n, r: r.clone(), r_total, g2, g1, tp, j_star, walk };

    sort_pairs(&mut m, big_n);
    let sim0 = read_sim(&m, big_n);

    let plan = find_plan(&ctx, &t, &lay, &sim0).ok_or_else(|| {
        NormalFormError::InternalReductionFailure("no rewriting plan found".to_string())
    })?;
    execute_plan(&mut m, &lay, &plan)?;

    // Step 6: order pairs and walk if required.
    sort_pairs(&mut m, big_n);
    if lay.walk {
        ensure_internal!(
            m.is_refl(2 * big_n) && m.val(2 * big_n) == 0,
            "walk requires a trailing s_0"
        );
        m.walk_left(2 * big_n);
    }

    let out = m.to_vector();
    if out.entries() != target.entries() {
        return Err(NormalFormError::InternalReductionFailure(format!(
            "reduction landed on {out} instead of {target}"
        )));
    }
    let trace = m.into_trace();
    // Defence in depth: the trace must replay exactly.
    let replayed = trace
        .replay(v)
        .map_err(|e| NormalFormError::InternalReductionFailure(e.to_string()))?;
    ensure_internal!(replayed == out, "trace replay must reproduce the output");
    Ok((out, trace))
}

/// Bubble every rotation to the right of every reflection; a rotation
/// passing a reflection conjugates it, which is exactly `σ_i`.
fn push_rotations_right(m: &mut Machine, d: usize) {
    loop {
        let mut changed = false;
        for i in 1..d {
            if !m.is_refl(i) && m.is_refl(i + 1) {
                m.braid(i, 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Fold every tail rotation into `[1, n']` (full twist against the last
/// reflection) and sort the tail ascending.
fn fold_and_sort_rotations(
    m: &mut Machine,
    refl_count: usize,
    d: usize,
) -> Result<(), NormalFormError> {
    let n = m.n();
    loop {
        let mut acted = false;
        for q in (refl_count + 1)..=d {
            if 2 * m.val(q) > n {
                // Bring to the block front and fold.
                let mut pos = q;
                while pos > refl_count + 1 {
                    m.braid(pos - 1, 1);
                    pos -= 1;
                }
                m.full_twist(refl_count);
                acted = true;
                break;
            }
        }
        if !acted {
            break;
        }
    }
    // Bubble sort the rotation tail.
    loop {
        let mut changed = false;
        for q in (refl_count + 1)..d {
            if m.val(q) > m.val(q + 1) {
                m.braid(q, 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for q in (refl_count + 1)..=d {
        ensure_internal!(
            !m.is_refl(q) && m.val(q) >= 1 && 2 * m.val(q) <= n,
            "rotation fold failed at {q}"
        );
    }
    Ok(())
}

/// Bubble reflection-class labels so all even-index reflections precede
/// all odd-index ones (even `n` only); `σ_i` swaps adjacent labels.
fn sort_labels_even_first(m: &mut Machine, refl_count: usize) {
    loop {
        let mut changed = false;
        for i in 1..refl_count {
            if m.val(i) % 2 == 1 && m.val(i + 1) % 2 == 0 {
                m.braid(i, 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Selection-sort the pair blocks `1..=big_n-1` ascending by value.
fn sort_pairs(m: &mut Machine, big_n: usize) {
    let pairs = big_n - 1;
    for f in 1..=pairs {
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
}

fn read_sim(m: &Machine, big_n: usize) -> Sim {
    let mut p: Vec<i64> = (1..big_n).map(|f| m.val(2 * f - 1)).collect();
    p.sort_unstable();
    Sim { p, j: m.val(2 * big_n - 1) }
}

/// The paired-layout target of a shape: sorted pair values, duo leading
/// index, and whether the final walk applies.
fn solver_target(
    sh: &super::NormalFormShape,
    n: i64,
) -> Result<(Vec<i64>, i64, bool), NormalFormError> {
    let r_total = sh.r.iter().map(|&x| x as i64).sum::<i64>().rem_euclid(n);
    let (mut tp, j_star, walk): (Vec<i64>, i64, bool) = match sh.case {
        ShapeCase::OddN => (vec![0; (sh.k as usize - 2) / 2], 1, false),
        ShapeCase::EvenNHPositive => {
            if sh.k % 2 == 0 {
                let mut tp = vec![0; sh.h as usize / 2];
                tp.extend(vec![1; (sh.k as usize - 2) / 2]);
                (tp, 1, false)
            } else {
                let mut tp = vec![0; (sh.h as usize - 1) / 2];
                tp.extend(vec![n - 1; (sh.k as usize - 1) / 2]);
                (tp, (-r_total).rem_euclid(n), true)
            }
        }
        ShapeCase::EvenNHZero => (vec![1; (sh.k as usize - 2) / 2], 3, false),
    };
    tp.sort_unstable();
    Ok((tp, j_star, walk))
}

/// A complete solver plan.
struct Plan {
    phi: Automorphism,
    ops: Vec<PlanOp>,
    deltas: Vec<i64>,
    duo_delta: i64,
}

/// Search plans in deterministic order of increasing complexity: for each
/// level, every ν-stabilizing automorphism is tried (identity first),
/// then bounded scans over the value-rewriting operations.
fn find_plan(
    ctx: &crate::dihedral::GroupContext,
    t: &crate::hurwitz::NumericalType,
    lay: &Layout,
    sim0: &Sim,
) -> Option<Plan> {
    let n = lay.n;
    let autos: Vec<Automorphism> = ctx
        .enumerate_automorphisms()
        .into_iter()
        .filter(|phi| t.nu().transform(ctx, *phi) == *t.nu())
        .collect();
    let transform = |phi: Automorphism, s: &Sim| -> Sim {
        let mut p: Vec<i64> = s
            .p
            .iter()
            .map(|&v| (phi.unit as i64 * v + phi.shift as i64).rem_euclid(n))
            .collect();
        p.sort_unstable();
        Sim { p, j: (phi.unit as i64 * s.j + phi.shift as i64).rem_euclid(n) }
    };

    let pairs = lay.big_n - 1;
    // All candidate ops from a given state: pair↔duo exchanges, then
    // pair-pair couple retargets, then pair-duo couple retargets.
    let ops_for = |s: &Sim| -> Vec<PlanOp> {
        let mut out = Vec::new();
        for f in 0..pairs {
            for w in 0..n {
                out.push(PlanOp::SwapMerge { pair: f, w });
            }
        }
        for f1 in 0..pairs {
            for f2 in 0..pairs {
                if f1 == f2 {
                    continue;
                }
                let gamma = gcd_mod(n, s.p[f2] - s.p[f1]);
                for a in 0..n {
                    if (a - s.p[f1]).rem_euclid(n) % gamma != 0 {
                        continue;
                    }
                    for delta in 0..n {
                        if gcd_mod(n, delta) == gamma {
                            out.push(PlanOp::Retarget { f1, f2, a, delta });
                        }
                    }
                }
            }
        }
        if lay.r_total.rem_euclid(n) == 0 {
            for f in 0..pairs {
                let gamma = gcd_mod(n, s.j - s.p[f]);
                for a in 0..n {
                    if (a - s.p[f]).rem_euclid(n) % gamma != 0 {
                        continue;
                    }
                    for delta in 0..n {
                        if gcd_mod(n, delta) == gamma {
                            out.push(PlanOp::RetargetDuo { pair: f, a, delta });
                        }
                    }
                }
            }
        }
        out
    };

    for level in 0..3 {
        for &phi in &autos {
            let s1 = transform(phi, sim0);
            match level {
                0 => {
                    if let Some((deltas, duo_delta)) = matchable(lay, &s1) {
                        return Some(Plan { phi, ops: vec![], deltas, duo_delta });
                    }
                }
                1 => {
                    for op in ops_for(&s1) {
                        if let Some(s2) = s1.apply(n, lay.r_total, op) {
                            if let Some((deltas, duo_delta)) = matchable(lay, &s2) {
                                return Some(Plan { phi, ops: vec![op], deltas, duo_delta });
                            }
                        }
                    }
                }
                _ => {
                    for op1 in ops_for(&s1) {
                        if let Some(s2) = s1.apply(n, lay.r_total, op1) {
                            for op2 in ops_for(&s2) {
                                if let Some(s3) = s2.apply(n, lay.r_total, op2) {
                                    if let Some((deltas, duo_delta)) = matchable(lay, &s3) {
                                        return Some(Plan {
                                            phi,
                                            ops: vec![op1, op2],
                                            deltas,
                                            duo_delta,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn execute_plan(m: &mut Machine, lay: &Layout, plan: &Plan) -> Result<(), NormalFormError> {
    let n = lay.n;
    let big_n = lay.big_n;
    let d = m.len();
    let refl_count = 2 * big_n;

    // Automorphism, then restore the rotation tail (units permute
    // rotation values within their folded classes).
    if plan.phi != m.ctx().identity_automorphism() {
        m.auto(plan.phi);
        fold_and_sort_rotations(m, refl_count, d)?;
        let r_now: Vec<i64> = ((refl_count + 1)..=d).map(|q| m.val(q)).collect();
        ensure_internal!(r_now == lay.r, "rotations must refold to the canonical multiset");
        sort_pairs(m, big_n);
    }

    let mut sim = read_sim(m, big_n);
    for &op in &plan.ops {
        let expected = sim
            .apply(n, lay.r_total, op)
            .ok_or_else(|| NormalFormError::InternalReductionFailure("plan op invalid".into()))?;
        match op {
            PlanOp::SwapMerge { pair, w } => {
                // Locate the pair with the sorted index's value.
                let f = find_pair_with_value(m, big_n, sim.p[pair], 1)?;
                // Bring it adjacent to the duo, then steer the boundary
                // triple so its last two entries become the new pair.
                m.move_pair(2 * f - 1, 2 * big_n - 3);
                let u = m.val(2 * big_n - 3);
                m.triple_steer(2 * big_n - 2, w - u - lay.r_total, 0)
                    .map_err(NormalFormError::InternalReductionFailure)?;
                // Layout is now (u, u+|r|, w, w); restore pair-then-duo.
                m.move_pair(2 * big_n - 1, 2 * big_n - 3);
            }
            PlanOp::Retarget { f1, f2, a, delta } => {
                let p1 = find_pair_with_value(m, big_n, sim.p[f1], 1)?;
                m.move_pair(2 * p1 - 1, 1);
                let p2 = find_pair_with_value(m, big_n, sim.p[f2], 2)?;
                m.move_pair(2 * p2 - 1, 3);
                m.quad_retarget(1, a, delta)
                    .map_err(NormalFormError::InternalReductionFailure)?;
            }
            PlanOp::RetargetDuo { pair, a, delta } => {
                ensure_internal!(
                    lay.r_total.rem_euclid(n) == 0,
                    "pair-duo retarget requires |r| = 0"
                );
                let f = find_pair_with_value(m, big_n, sim.p[pair], 1)?;
                m.move_pair(2 * f - 1, 2 * big_n - 3);
                m.quad_retarget(2 * big_n - 3, a, delta)
                    .map_err(NormalFormError::InternalReductionFailure)?;
            }
        }
        sort_pairs(m, big_n);
        sim = read_sim(m, big_n);
        ensure_internal!(sim == expected, "plan op simulation mismatch");
    }

    // Duo delta: a power of σ_{2N-1} (step |r|) plus shifts through the
    // rotation block.
    if plan.duo_delta != 0 {
        let mut coeffs = vec![lay.r_total];
        coeffs.extend(lay.r.iter().map(|&ri| (2 * ri).rem_euclid(n)));
        let ls = solve_combo(n, &coeffs, plan.duo_delta).ok_or_else(|| {
            NormalFormError::InternalReductionFailure("duo delta not in lattice".into())
        })?;
        // σ_{2N-1}^{-1} adds |r| to the duo leading index.
        m.braid_pow(2 * big_n - 1, -ls[0]);
        apply_block_shifts(m, lay, 2 * big_n - 1, &ls[1..])?;
    }

    // Pair deltas via the rotation block; each pair commutes past the duo.
    for idx in 0..sim.p.len() {
        let delta = plan.deltas[idx];
        if delta == 0 {
            continue;
        }
        let coeffs: Vec<i64> = lay.r.iter().map(|&ri| (2 * ri).rem_euclid(n)).collect();
        let ls = solve_combo(n, &coeffs, delta).ok_or_else(|| {
            NormalFormError::InternalReductionFailure("pair delta not in lattice".into())
        })?;
        let f = find_pair_with_value(m, big_n, sim.p[idx], 1)?;
        m.move_pair(2 * f - 1, 2 * big_n - 1);
        apply_block_shifts(m, lay, 2 * big_n - 1, &ls)?;
        m.move_pair(2 * big_n - 1, 2 * f - 1);
        sort_pairs(m, big_n);
        // Keep sim.p aligned: recompute by marking this delta applied.
        sim.p[idx] = (sim.p[idx] + delta).rem_euclid(n);
    }

    // Verify the solved state.
    let final_sim = read_sim(m, big_n);
    let mut want: Vec<i64> = lay.tp.clone();
    want.sort_unstable();
    ensure_internal!(final_sim.p == want, "pair values must reach the target multiset");
    ensure_internal!(
        final_sim.j == lay.j_star,
        "duo index must reach the target (got {}, want {})",
        final_sim.j,
        lay.j_star
    );
    Ok(())
}

/// Apply `Σ 2·l_i·r_i` to the reflection pair at `(p, p+1)` (which must
/// sit just left of the rotation block): for each nonzero `l_i`, bring
/// the rotation with value `r_i` to the block front, shift, and restore
/// the sorted tail.
fn apply_block_shifts(
    m: &mut Machine,
    lay: &Layout,
    p: usize,
    ls: &[i64],
) -> Result<(), NormalFormError> {
    let d = m.len();
    let front = p + 2;
    for (i, &l) in ls.iter().enumerate() {
        if l == 0 {
            continue;
        }
        // Find the rotation entry with value r[i] in the sorted tail.
        let mut q = None;
        for pos in front..=d {
            if m.val(pos) == lay.r[i] {
                q = Some(pos);
                break;
            }
        }
        let mut q = q.ok_or_else(|| {
            NormalFormError::InternalReductionFailure("rotation value missing from tail".into())
        })?;
        while q > front {
            m.braid(q - 1, 1);
            q -= 1;
        }
        m.abm(p, l);
        // Restore sorted order in the tail.
        loop {
            let mut changed = false;
            for pos in front..d {
                if m.val(pos) > m.val(pos + 1) {
                    m.braid(pos, 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(())
}

/// Index (1-based pair number, searching from `start`) of a pair block
/// holding `value`.
fn find_pair_with_value(
    m: &Machine,
    big_n: usize,
    value: i64,
    start: usize,
) -> Result<usize, NormalFormError> {
    for f in start..big_n {
        if m.val(2 * f - 1) == value {
            return Ok(f);
        }
    }
    Err(NormalFormError::InternalReductionFailure(format!(
        "no pair with value {value}"
    )))
}
