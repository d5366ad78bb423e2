//! Exact dynamics of orientation-preserving piecewise-linear circle
//! homeomorphisms.
//!
//! * [`circle`]: rational points and arcs of `R/Z`.
//! * [`homeo`]: canonical PL maps, composition, inversion, iteration and
//!   the exotic-circle elements.
//! * [`cocycle`]: derivative jumps, the affine isometric action on finitely
//!   supported vectors, breakpoint growth.
//! * [`rotation`]: fixed points, rotation numbers, numeric semi-conjugacy.
//! * [`smoothing`]: orbit graphs, coboundary solving and conjugator
//!   synthesis.
//! * [`cantor`]: symbolic countable compact sets and Cantor-Bendixson ranks.
//! * [`format`]: the JSON file formats.

pub mod cantor;
pub mod circle;
pub mod cocycle;
pub mod error;
pub mod format;
pub mod homeo;
pub mod rational;
pub mod rotation;
pub mod smoothing;

pub use cantor::{cb_derivative, cb_rank, CbRank, SymbolicSet};
pub use circle::{arc_contains, cyclic_between, reduce_mod1, Arc, CirclePoint};
pub use cocycle::{
    affine_apply, breakpoint_growth, growth_params, jump_cocycle, l2_norm_sq, orbit_norm_seq,
    FiniteVector, GrowthExperiment, GrowthParams, JumpVector,
};
pub use error::Error;
pub use homeo::{ExoticParams, InvariantViolation, PlHomeo};
pub use rational::Q;
pub use rotation::{
    fixed_points, rotation_number, semiconjugacy_table, FixedComponent, RotNumResult,
};
pub use smoothing::{
    build_orbit_graph, commensuration_defect, detect_finite_orbit, smooth_group, solve_coboundary,
    synthesize_conjugator, GroupPresentation, JumpAssignment, OrbitGraph, SmoothingOutcome,
};
