//! Fair k-set selection: choose `k` candidates from a bipartite graph so
//! that the heaviest load any agent sees from its selected neighbours is as
//! small as possible.
//!
//! [`exact`] holds the polynomial solvers for degree-two and laminar inputs
//! and the exhaustive oracle, [`lp`] the fractional relaxation, [`rounding`]
//! the randomized roundings, [`gen`] instance generators and [`mod@solve`] the
//! end-to-end pipeline used by the `fair-kset` binary.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod exact;
pub mod gen;
pub mod instance;
pub mod io;
pub mod lp;
pub mod rounding;
pub mod solve;

pub use error::{Error, Result};
pub use instance::{Instance, Selection};
pub use solve::{solve, Method, SolveOptions, Solved};
