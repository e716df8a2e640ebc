//! Exhaustive ground truth for the braid action at desk scale: enumerate
//! every valid Hurwitz vector for a small `(n, d)`, partition them into
//! orbits under the braid group alone or together with `Aut(D_n)`, and
//! verify that orbits are exactly the fibres of the numerical type.
//!
//! Vectors are bit-packed (one base-`2n` digit per entry) so orbit
//! structures are plain integer maps; strata are the fibres of `ν`,
//! which braid moves preserve, and are processed independently before
//! automorphism images merge them.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dihedral::{DihedralElement, GroupContext};
use crate::hurwitz::{HurwitzVector, NuVector, NumericalType};
use crate::normal_form::{canonical_form, reduce};

/// Budget and determinism knobs for the oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Maximum number of packed states an operation may touch.
    pub max_states: u64,
    /// Worker threads; 0 means use the global default.
    pub threads: usize,
    /// Seed for sampled checks.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_states: 50_000_000, threads: 0, seed: 0 }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("state budget exceeded: required {required}, configured {configured}")]
    BudgetExceeded { required: u128, configured: u64 },
    #[error("vectors live in different contexts (n or length differ)")]
    ContextMismatch,
}

/// Which group acts: the braid group alone, or braids plus `Aut(D_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitFlavor {
    Braid,
    BraidAuto,
}

impl std::fmt::Display for OrbitFlavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitFlavor::Braid => write!(f, "b"),
            OrbitFlavor::BraidAuto => write!(f, "ba"),
        }
    }
}

impl std::str::FromStr for OrbitFlavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "b" | "braid" => Ok(OrbitFlavor::Braid),
            "ba" | "braid-auto" => Ok(OrbitFlavor::BraidAuto),
            other => Err(format!("unknown flavor `{other}` (expected `b` or `ba`)")),
        }
    }
}

impl Serialize for OrbitFlavor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One orbit: lexicographically least member, size, and the shared type.
#[derive(Debug, Clone)]
pub struct OrbitSummary {
    pub rep: HurwitzVector,
    pub size: u64,
    pub ty: NumericalType,
}

impl Serialize for OrbitSummary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrbitSummary", 3)?;
        st.serialize_field("rep", &self.rep.to_string())?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("type", &self.ty)?;
        st.end()
    }
}

/// The full orbit partition of the valid vectors for one `(n, d)`.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitPartition {
    pub n: u32,
    pub d: usize,
    pub flavor: OrbitFlavor,
    pub orbits: Vec<OrbitSummary>,
}

/// Verdict of [`verify_theorem`].
#[derive(Debug, Clone)]
pub enum TheoremVerdict {
    Pass,
    Fail { counterexample: String },
}

impl Serialize for TheoremVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TheoremVerdict::Pass => s.serialize_str("PASS"),
            TheoremVerdict::Fail { counterexample } => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("counterexample", counterexample)?;
                m.end()
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub n: u32,
    pub d: usize,
    pub valid_count: u64,
    pub orbits: Vec<OrbitSummary>,
    pub theorem: TheoremVerdict,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        matches!(self.theorem, TheoremVerdict::Pass)
    }
}

/// Pack an element as a base-`2n` digit: rotations `x^j ↦ j`, reflections
/// `s_j ↦ n + j` (the identity would be 0 and never appears).
fn code(n: u64, e: DihedralElement) -> u64 {
    e.shift as u64 + if e.is_reflection { n } else { 0 }
}

fn decode(ctx: &GroupContext, c: u64) -> DihedralElement {
    let n = ctx.n() as u64;
    if c >= n {
        ctx.reflection((c - n) as i64)
    } else {
        ctx.rotation(c as i64)
    }
}

/// Pack a vector as base-`2n` digits, little-endian in entry order;
/// numeric order of keys equals lexicographic order of vectors.
fn pack(ctx: &GroupContext, entries: &[DihedralElement]) -> u64 {
    let n = ctx.n() as u64;
    let mut key = 0u64;
    for &e in entries {
        key = key * (2 * n) + code(n, e);
    }
    key
}

fn unpack(ctx: &GroupContext, d: usize, mut key: u64) -> HurwitzVector {
    let n = ctx.n() as u64;
    let mut entries = Vec::with_capacity(d);
    for _ in 0..d {
        entries.push(decode(ctx, key % (2 * n)));
        key /= 2 * n;
    }
    entries.reverse();
    HurwitzVector::new(*ctx, entries)
}

fn check_budget(ctx: &GroupContext, d: usize, cfg: &OracleConfig) -> Result<(), OracleError> {
    let required = (2u128 * ctx.n() as u128).pow(d as u32);
    if required > cfg.max_states as u128 {
        return Err(OracleError::BudgetExceeded { required, configured: cfg.max_states });
    }
    Ok(())
}

/// All valid Hurwitz vectors of length `d`, in lexicographic order.
///
/// The search runs over `(D_n ∖ {1})^d` with incremental partial products
/// and an incrementally maintained generated-subgroup bitmask.
pub fn enumerate_valid(
    ctx: &GroupContext,
    d: usize,
    cfg: &OracleConfig,
) -> Result<Vec<HurwitzVector>, OracleError> {
    check_budget(ctx, d, cfg)?;
    let n = ctx.n() as usize;
    let m = 2 * n;
    // Multiplication table over codes.
    let mut mul = vec![0u8; m * m];
    for a in 0..m {
        for b in 0..m {
            let p = ctx.multiply(decode(ctx, a as u64), decode(ctx, b as u64));
            mul[a * m + b] = code(n as u64, p) as u8;
        }
    }
    let full_mask: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    // Closure of a submask that is already a subgroup, extended by one code.
    let mut closure_cache: HashMap<(u64, u8), u64> = HashMap::new();
    let mut extend = |mask: u64, c: u8, mul: &[u8]| -> u64 {
        if mask & (1u64 << c) != 0 {
            return mask;
        }
        if let Some(&r) = closure_cache.get(&(mask, c)) {
            return r;
        }
        let mut cur = mask | (1u64 << c);
        loop {
            let mut next = cur;
            for a in 0..m {
                if cur & (1u64 << a) == 0 {
                    continue;
                }
                for b in 0..m {
                    if cur & (1u64 << b) != 0 {
                        next |= 1u64 << mul[a * m + b];
                    }
                }
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        closure_cache.insert((mask, c), cur);
        cur
    };

    let mut out = Vec::new();
    // Iterative DFS: stack of (code choice per level).
    let mut entries: Vec<u8> = Vec::with_capacity(d);
    let mut products: Vec<u8> = vec![0]; // running product codes, identity first
    let mut masks: Vec<u64> = vec![1]; // generated-subgroup masks, {e} first
    let mut choice: Vec<u8> = vec![1];
    loop {
        let depth = entries.len();
        let c = *choice.last().unwrap();
        if c as usize >= m {
            // Exhausted this level; backtrack.
            if depth == 0 {
                break;
            }
            entries.pop();
            products.pop();
            masks.pop();
            choice.pop();
            if let Some(last) = choice.last_mut() {
                *last += 1;
            }
            continue;
        }
        let prod = mul[*products.last().unwrap() as usize * m + c as usize];
        let mask = extend(*masks.last().unwrap(), c, &mul);
        if depth + 1 == d {
            if prod == 0 && mask == full_mask {
                let mut es = Vec::with_capacity(d);
                for &cc in &entries {
                    es.push(decode(ctx, cc as u64));
                }
                es.push(decode(ctx, c as u64));
                out.push(HurwitzVector::new(*ctx, es));
            }
            *choice.last_mut().unwrap() += 1;
        } else {
            entries.push(c);
            products.push(prod);
            masks.push(mask);
            choice.push(1);
        }
    }
    debug_assert!(out.windows(2).all(|w| pack(ctx, w[0].entries()) < pack(ctx, w[1].entries())));
    Ok(out)
}

/// Apply `σ_i` (1-based) to a packed vector.
fn braid_key(ctx: &GroupContext, d: usize, key: u64, i: usize) -> u64 {
    let n = ctx.n() as u64;
    let m = 2 * n;
    let mut digits = Vec::with_capacity(d);
    let mut k = key;
    for _ in 0..d {
        digits.push(k % m);
        k /= m;
    }
    digits.reverse();
    let a = decode(ctx, digits[i - 1]);
    let b = decode(ctx, digits[i]);
    digits[i - 1] = code(n, ctx.conjugate(b, a));
    digits[i] = code(n, a);
    let mut out = 0u64;
    for &dg in &digits {
        out = out * m + dg;
    }
    out
}

/// Partition the valid vectors into orbits of the chosen flavor.
///
/// Strata (fibres of `ν`) are explored in parallel; representatives are
/// lexicographic minima, so the output is independent of scheduling.
pub fn compute_orbits(
    ctx: &GroupContext,
    d: usize,
    flavor: OrbitFlavor,
    cfg: &OracleConfig,
) -> Result<OrbitPartition, OracleError> {
    let (partition, _) = compute_orbits_with_members(ctx, d, flavor, cfg)?;
    Ok(partition)
}

/// As [`compute_orbits`], also returning every orbit's member keys
/// (sorted); used by [`verify_theorem`].
pub(crate) fn compute_orbits_with_members(
    ctx: &GroupContext,
    d: usize,
    flavor: OrbitFlavor,
    cfg: &OracleConfig,
) -> Result<(OrbitPartition, Vec<Vec<u64>>), OracleError> {
    let valid = enumerate_valid(ctx, d, cfg)?;
    let mut strata: BTreeMap<NuVector, Vec<u64>> = BTreeMap::new();
    for v in &valid {
        strata.entry(v.nu()).or_default().push(pack(ctx, v.entries()));
    }
    let strata: Vec<(NuVector, Vec<u64>)> = strata.into_iter().collect();

    // Connected components within each stratum under σ_i edges.
    let run = |keys: &Vec<u64>| -> Vec<Vec<u64>> {
        let index: HashMap<u64, usize> =
            keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut uf = UnionFind::new(keys.len());
        for (idx, &k) in keys.iter().enumerate() {
            for i in 1..d {
                let img = braid_key(ctx, d, k, i);
                let j = *index
                    .get(&img)
                    .expect("braid image of a valid vector must be valid and in-stratum");
                uf.union(idx, j);
            }
        }
        let mut comps: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (idx, &k) in keys.iter().enumerate() {
            comps.entry(uf.find(idx)).or_default().push(k);
        }
        comps.into_values().collect()
    };
    let stratum_comps: Vec<Vec<Vec<u64>>> =
        strata.par_iter().map(|(_, keys)| run(keys)).collect();

    // Flatten to global component list.
    let mut comps: Vec<Vec<u64>> = stratum_comps.into_iter().flatten().collect();
    for c in comps.iter_mut() {
        c.sort_unstable();
    }
    comps.sort_unstable_by_key(|c| c[0]);

    if flavor == OrbitFlavor::BraidAuto {
        // Merge components connected by automorphism images; since the
        // automorphism action commutes with braids, one member's image
        // determines the target component.
        let key_to_comp: HashMap<u64, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&k| (k, i)))
            .collect();
        let mut uf = UnionFind::new(comps.len());
        for (i, c) in comps.iter().enumerate() {
            let rep = unpack(ctx, d, c[0]);
            for phi in ctx.enumerate_automorphisms() {
                let img = rep.apply_automorphism_diag(phi);
                let j = *key_to_comp
                    .get(&pack(ctx, img.entries()))
                    .expect("automorphism image of a valid vector must be valid");
                uf.union(i, j);
            }
        }
        let mut merged: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            merged.entry(uf.find(i)).or_default().extend(c.iter().copied());
        }
        comps = merged.into_values().collect();
        for c in comps.iter_mut() {
            c.sort_unstable();
        }
        comps.sort_unstable_by_key(|c| c[0]);
    }

    let total: u64 = comps.iter().map(|c| c.len() as u64).sum();
    debug_assert_eq!(total, valid.len() as u64);
    let orbits = comps
        .iter()
        .map(|c| {
            let rep = unpack(ctx, d, c[0]);
            let ty = rep.numerical_type();
            OrbitSummary { rep, size: c.len() as u64, ty }
        })
        .collect();
    Ok((OrbitPartition { n: ctx.n(), d, flavor, orbits }, comps))
}

/// Decide whether `v` and `w` lie in one orbit of the chosen flavor.
///
/// Invariants short-circuit a definite `false`; otherwise a BFS from `v`
/// runs until it meets a target, exhausts the orbit (definite `false`),
/// or touches more than `max_states` states (`BudgetExceeded`).
pub fn same_orbit(
    v: &HurwitzVector,
    w: &HurwitzVector,
    flavor: OrbitFlavor,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    if v.ctx().n() != w.ctx().n() || v.d() != w.d() {
        return Err(OracleError::ContextMismatch);
    }
    let ctx = v.ctx();
    let d = v.d();
    match flavor {
        OrbitFlavor::Braid => {
            if v.nu() != w.nu() {
                return Ok(false);
            }
        }
        OrbitFlavor::BraidAuto => {
            if v.numerical_type() != w.numerical_type() {
                return Ok(false);
            }
        }
    }
    let targets: std::collections::HashSet<u64> = match flavor {
        OrbitFlavor::Braid => [pack(ctx, w.entries())].into_iter().collect(),
        OrbitFlavor::BraidAuto => ctx
            .enumerate_automorphisms()
            .into_iter()
            .map(|phi| pack(ctx, w.apply_automorphism_diag(phi).entries()))
            .collect(),
    };
    let start = pack(ctx, v.entries());
    if targets.contains(&start) {
        return Ok(true);
    }
    let mut seen: std::collections::HashSet<u64> = [start].into_iter().collect();
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &k in &frontier {
            for i in 1..d {
                // σ_i and σ_i^{-1} reach the same component; one direction
                // of edges suffices because the graph is undirected.
                for img in [braid_key(ctx, d, k, i), braid_inv_key(ctx, d, k, i)] {
                    if seen.insert(img) {
                        if targets.contains(&img) {
                            return Ok(true);
                        }
                        if seen.len() as u64 > cfg.max_states {
                            return Err(OracleError::BudgetExceeded {
                                required: seen.len() as u128,
                                configured: cfg.max_states,
                            });
                        }
                        next.push(img);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(false)
}

/// Apply `σ_i^{-1}` (1-based) to a packed vector.
fn braid_inv_key(ctx: &GroupContext, d: usize, key: u64, i: usize) -> u64 {
    let n = ctx.n() as u64;
    let m = 2 * n;
    let mut digits = Vec::with_capacity(d);
    let mut k = key;
    for _ in 0..d {
        digits.push(k % m);
        k /= m;
    }
    digits.reverse();
    let a = decode(ctx, digits[i - 1]);
    let b = decode(ctx, digits[i]);
    digits[i - 1] = code(n, b);
    digits[i] = code(n, ctx.conjugate(a, ctx.inverse(b)));
    let mut out = 0u64;
    for &dg in &digits {
        out = out * m + dg;
    }
    out
}

/// Exhaustively verify that orbits of the combined action are exactly
/// the fibres of the numerical type, that each type's canonical form
/// lies in its orbit, and that the reducer lands there for sampled
/// members.
pub fn verify_theorem(
    ctx: &GroupContext,
    d: usize,
    cfg: &OracleConfig,
) -> Result<TheoremReport, OracleError> {
    let (partition, members) =
        compute_orbits_with_members(ctx, d, OrbitFlavor::BraidAuto, cfg)?;
    let valid_count: u64 = partition.orbits.iter().map(|o| o.size).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut fail: Option<String> = None;
    let mut seen_types: BTreeMap<NuVector, usize> = BTreeMap::new();
    'orbits: for (i, (orbit, keys)) in partition.orbits.iter().zip(members.iter()).enumerate() {
        let ty = &orbit.ty;
        // (a) one type per orbit.
        for &k in keys {
            let v = unpack(ctx, d, k);
            if v.numerical_type() != *ty {
                fail = Some(format!(
                    "orbit of {} contains {} with a different numerical type",
                    orbit.rep, v
                ));
                break 'orbits;
            }
        }
        // (b) distinct orbits have distinct types.
        if let Some(&other) = seen_types.get(&ty.0) {
            fail = Some(format!(
                "orbits of {} and {} share one numerical type",
                partition.orbits[other].rep, orbit.rep
            ));
            break;
        }
        seen_types.insert(ty.0.clone(), i);
        // (c) the canonical form is a member.
        let canon = match canonical_form(ctx, ty) {
            Ok(c) => c,
            Err(e) => {
                fail = Some(format!(
                    "type of {} has no canonical form ({e}) despite being realized",
                    orbit.rep
                ));
                break;
            }
        };
        if !keys.binary_search(&pack(ctx, canon.entries())).is_ok() {
            fail = Some(format!(
                "canonical form {canon} is not in the orbit of {}",
                orbit.rep
            ));
            break;
        }
        // (d) the reducer lands on the canonical form for sampled members.
        let sample: Vec<u64> = if keys.len() <= 8 {
            keys.clone()
        } else {
            let mut s = keys.clone();
            s.shuffle(&mut rng);
            s.truncate(8);
            s
        };
        for k in sample {
            let v = unpack(ctx, d, k);
            match reduce(&v) {
                Ok((out, trace)) => {
                    let replay_ok = trace
                        .replay(&v)
                        .map(|r| r == out)
                        .unwrap_or(false);
                    if out.entries() != canon.entries() || !replay_ok {
                        fail = Some(format!("reduce({v}) landed on {out}, expected {canon}"));
                        break 'orbits;
                    }
                }
                Err(e) => {
                    fail = Some(format!("reduce({v}) failed: {e}"));
                    break 'orbits;
                }
            }
        }
    }

    Ok(TheoremReport {
        n: ctx.n(),
        d,
        valid_count,
        orbits: partition.orbits,
        theorem: match fail {
            None => TheoremVerdict::Pass,
            Some(counterexample) => TheoremVerdict::Fail { counterexample },
        },
    })
}

/// Minimal union-find with path halving.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind { parent: (0..len).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
