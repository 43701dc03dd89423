//! Points splitting on metric trees.
//!
//! A point moves along the edges of a finite tree. Leaves reflect it; when
//! `k` points reach an inner vertex of valence `v` together, `v` points leave
//! it. This crate counts those points two ways:
//!
//! * [`simulator`] runs the dynamics event by event, deciding simultaneity
//!   by exact equality of integer multiplicity vectors ([`chrono`]).
//! * [`formula`] writes the births at a root as a signed sum of lattice-point
//!   counts in expanding simplices ([`lattice`]), with coefficients built
//!   from signed rooted-subtree counts.
//!
//! [`asymptotics`] fits polynomials to count series on the H-junction and
//! compares them with closed-form growth coefficients.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod chrono;
pub mod error;
pub mod formula;
pub mod graph;
pub mod lattice;
pub mod simulator;

pub use asymptotics::{
    fit_polynomial, permutation_diff_series, predicted_diff_coeff, predicted_leading, predicted_symdiff_coeff,
    run_experiment, symmetric_diff_series, AsymptoticFit, Engine, ExperimentKind, ExperimentOutcome, ExperimentSeries,
    LeadingKind,
};
pub use chrono::{Basis, TimeVector, DEFAULT_EPSILON};
pub use error::{Error, Result};
pub use formula::{
    birth_terms, births_formula, c_coefficient, f_return_count, game_outcome, h_births_a, h_births_b, h_total, z0,
    z0_labels, z_direct, GameOutcome, HStart, HTimes, Term, TermList, ZTable,
};
pub use graph::{
    branch_decomposition, build_tree, make_h_junction, parse_edge_list, permute_edge_times, rooted_subtrees, Branch,
    EdgeSubset, MetricTree, TimeSpec, Vertex,
};
pub use lattice::{count_strict, count_weak, strict_via_inclusion_exclusion, volume_leading_coeff};
pub use simulator::{simulate, simulate_with_basis, SimulationReport};
