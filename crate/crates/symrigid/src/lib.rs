//! Rigidity analysis of symmetric frameworks.
//!
//! The crate decides infinitesimal, isostatic and forced-symmetric rigidity
//! of bar-joint frameworks in `R^d`, frameworks on the sphere `S^d`, and
//! point-hyperplane frameworks, by rank computations on the corresponding
//! constraint matrices. On top of that it implements the geometric transfer
//! operators between these spaces (central projection, partial inversion on
//! the sphere, sign-twisted group pairings, double covers) and cross-checks
//! the numeric verdicts against gain-sparsity counts on quotient gain graphs.
//!
//! Module map:
//! - [`groups`]: finite orthogonal symmetry groups (Schoenflies catalog,
//!   augmentation, index-2 subgroups, paired representations, involutions).
//! - [`symgraph`]: graphs with group actions, quotient gain graphs, lifts,
//!   balance and `(k,l,m)`-gain-sparsity.
//! - [`numerics`]: tolerance-governed rank / kernel / subspace routines plus
//!   an exact rational rank path.
//! - [`frameworks`]: the three framework spaces, rigidity matrices, trivial
//!   motions, symmetry validation and seeded symmetric samplers.
//! - [`forced`]: symmetric velocity subspaces, orbit matrices and
//!   combinatorial predictions.
//! - [`transfer`]: inversion, projection, pairing, double cover and rotation
//!   operators.
//! - [`cli`]: JSON document formats, subcommands and the verification
//!   harness.

pub mod cli;
pub mod forced;
pub mod frameworks;
pub mod groups;
pub mod numerics;
pub mod symgraph;
pub mod transfer;
