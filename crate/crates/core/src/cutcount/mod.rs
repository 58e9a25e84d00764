//! Cut&Count machinery: isolation weights, sparse GF(2) polynomials, the
//! generic evaluator over a treedepth decomposition, and the trial driver.

mod cuts;
mod driver;
mod engine;
mod poly;
mod weights;

pub use cuts::{count_consistent_cuts, is_consistent_cut};
pub use driver::{run_trials, DriverConfig, DriverOutcome};
pub use engine::{
    evaluate, prepare_families, CutCountProblem, EngineMode, Families, State, UNASSIGNED,
};
pub use poly::{Gf2Polynomial, MonomialLayout};
pub use weights::{isolates, sample_weights, sample_weights_in};
