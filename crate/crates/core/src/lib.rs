//! Finite left braces and the involutive non-degenerate set-theoretic
//! solutions of the Yang-Baxter equation they generate.
//!
//! A left brace is a set with an abelian group structure `(B, +)` and a group
//! structure `(B, ·)` sharing their identity and satisfying
//! `x·(y+z) + x = x·y + x·z`. Every such brace acts on itself through the
//! maps `λ_x(y) = x·y − x`, and choices of λ-orbits together with families of
//! stabilizer subgroups produce solutions of the Yang-Baxter equation on the
//! disjoint union of the corresponding coset spaces. This crate implements:
//!
//! * finite groups as explicit Cayley tables, with subgroup lattices, cores,
//!   automorphism groups, holomorphs and regular-subgroup searches
//!   ([`group`], [`subgroup`], [`maps`]);
//! * left braces with validation, socle, λ-orbits, automorphisms, the Rump
//!   cyclic braces, socle extensions and a small-order census ([`brace`],
//!   [`census`]);
//! * the coset construction of solutions, full verification (involutivity,
//!   non-degeneracy, braid relation), the permutation-group compatibility
//!   check, isomorphism decision procedures, basic-solution classification
//!   and brute-force completeness oracles ([`solution`], [`iso`], [`basic`],
//!   [`enumerate`]);
//! * deterministic JSON file formats for groups, braces, configurations and
//!   solutions ([`io`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so everything here is safe to share across
//! threads.

pub mod basic;
pub mod brace;
pub mod census;
pub mod enumerate;
mod error;
pub mod group;
pub mod io;
pub mod iso;
pub mod maps;
pub mod perm;
pub mod solution;
pub mod subgroup;

pub use brace::{
    brace_automorphisms, brace_canonical_form, brace_isomorphic, extension_brace, lambda_map,
    orbit_decomposition, rump_brace, socle, trivial_brace, validate_brace, Brace, BraceViolation,
    OrbitDecomposition,
};
pub use census::{abelian_group_factorizations, enumerate_braces};
pub use enumerate::{
    brute_force_all_solutions, completeness_check, enumerate_configs, enumerate_solutions,
    CompletenessReport,
};
pub use error::BoundExceeded;
pub use group::{validate_group, FiniteGroup, GroupViolation};
pub use iso::{solutions_isomorphic, solutions_isomorphic_bruteforce, IsoError, IsoWitness};
pub use maps::{abelian_automorphisms, automorphism_group, holomorph, regular_subgroups, GroupMap, Holomorph};
pub use perm::Perm;
pub use solution::{
    check_perm_brace_iso, construct_solution, gamma_map, permutation_group, validate_config,
    verify_solution, ConfigViolation, PermBraceIsoReport, PointLabel, Solution, SolutionConfig,
    VerifyReport,
};
pub use subgroup::{additive_generates, subgroup_core, subgroups, Subgroup};

pub use basic::{is_basic, is_basic_oracle};
