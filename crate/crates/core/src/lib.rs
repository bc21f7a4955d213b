//! Exact computations on the configuration space `Ω_k` of `k + 1` marked
//! points on the Riemann sphere, normalized so the first three are
//! `(∞, 0, 1)`:
//!
//! ```text
//! Ω_k = { (z_1, …, z_{k−2}) : z_j ∉ {0, 1}, z_i ≠ z_j for i ≠ j }
//! ```
//!
//! The crate provides
//!
//! - exact projective arithmetic and cross-ratios over `ℚ ∪ {∞}` ([`projective`]),
//! - a canonical factored form for the rational maps that occur as
//!   coordinates of automorphisms of `Ω_k` ([`factored`]),
//! - permutations of `{1, …, k + 1}` ([`perm`]),
//! - the isomorphism `Θ_k` from the symmetric group `S_{k+1}` onto
//!   `Aut(Ω_k)`, generator checks, subgroup closure and coordinate catalogs
//!   ([`group`], [`catalog`]),
//! - cross-ratio maps `L_C : Ω_k → Ω_3`, their collision criterion, and the
//!   enumeration of all non-constant holomorphic maps `Ω_m → Ω_n`
//!   ([`classify`]).
//!
//! All arithmetic is exact. Identities between rational maps are decided by
//! comparing canonical forms; randomized evaluation at rational points is
//! available as an independent check.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod factored;
pub mod group;
pub mod perm;
pub mod projective;
pub mod quadratic;

pub use catalog::{coordinate_catalog, Catalog, FormList, ListDiff};
pub use classify::{
    collision_free, collision_witness, enumerate_maps, extend_to_group_element, lc_map,
    lift_permutation, validate_tuple, CollisionCase, CrossRatioSpec, ForgetfulSpec,
    HoloMapDescriptor, Lift, LiftRoute, Verdict, Witness,
};
pub use error::{Error, Result};
pub use factored::{
    cross_ratio_symbolic, symbolic_diff, Difference, FactoredMap, LinearFactor, SymbolicPoint,
};
pub use group::{
    closure, find_permutation, kernel_theta3, standard_generators, theta, GroupElement,
};
pub use perm::{enumerate_group, Permutation};
pub use projective::{cross_ratio, sample_omega_point, OmegaPoint, ProjPoint, Rational};

/// Largest `k` for which exhaustive enumeration over `S_{k+1}` is allowed by default.
pub const DEFAULT_MAX_K: usize = perm::DEFAULT_MAX_DEGREE - 1;
