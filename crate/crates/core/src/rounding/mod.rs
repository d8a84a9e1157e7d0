//! Randomized rounding of fractional LP points.

pub mod independent;
pub mod lll;
pub mod pipage;
pub mod rng;
pub mod trials;

pub use independent::independent_rounding;
pub use lll::{build_bad_events, lll_rounding, moser_tardos, BadEventSystem, EventParams, LllOptions, LllOutcome};
pub use pipage::{pipage_rounding, pipage_rounding_observed};
pub use rng::{seeded, Rng};
pub use trials::{run_trials, Algorithm, TrialStats};
