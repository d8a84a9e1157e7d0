//! Exact solvers and the brute-force oracle.

pub mod brute;
pub mod delta2;
pub mod laminar;
pub mod red_blue;

pub use brute::{brute_force_opt, DEFAULT_ORACLE_CAP};
pub use delta2::{max_vertex_set, solve_delta2_unweighted, solve_delta2_weighted, CandidateValueSet};
pub use laminar::{build_laminar_tree, detect_laminar, laminar_dp, solve_laminar, LaminarFamily, LaminarTree};
pub use red_blue::{red_blue, RedBlueInstance};
