//! Dihedral Hurwitz vectors: braid moves, numerical invariants, normal forms,
//! and exhaustive orbit verification.
//!
//! The crate is organised in four layers:
//!
//! * [`dihedral`] — arithmetic in the dihedral group `D_n`, its automorphism
//!   group, conjugacy classes, and subgroup closures.
//! * [`hurwitz`] — Hurwitz vectors (tuples of non-identity elements with
//!   trivial product that generate `D_n`), the braid group action on them,
//!   and the numerical invariants attached to a vector.
//! * [`normal_form`] — the classification machinery: pinned braid-word
//!   lemmas, canonical normal forms per numerical type, and a deterministic
//!   reducer that rewrites any vector to its canonical form while recording
//!   a replayable move trace.
//! * [`orbit_oracle`] — an independent exhaustive-enumeration oracle that
//!   computes orbit partitions by brute force and checks them against the
//!   classification.

pub mod dihedral;
pub mod hurwitz;
pub mod normal_form;
pub mod orbit_oracle;

pub use dihedral::{
    Automorphism, ConjugacyClassId, DihedralElement, DihedralError, GroupContext,
};
pub use hurwitz::{
    enumerate_types, HurwitzError, HurwitzVector, NuVector, NumericalType, TypeRow,
};
pub use normal_form::{
    canonical_form, reduce, shape, MoveStep, MoveTrace, NormalFormError, NormalFormShape,
    PairOrbit, ShapeCase,
};
pub use orbit_oracle::{
    compute_orbits, enumerate_valid, same_orbit, verify_theorem, OracleConfig, OracleError,
    OrbitFlavor, OrbitPartition, OrbitSummary, TheoremReport, TheoremVerdict,
};
