//! Monte Carlo realization of the two-phase protocol: a phase-I block code
//! over BSC(p), passive feedback of the received word over BSC(p1), then
//! either an immediate decision or a phase-II pair of opposite words.

pub mod codebook;
pub mod protocol;
pub mod trend;

pub use codebook::{build_code, hamming, Codebook, MAX_BLOCKLENGTH, MAX_MESSAGES};
pub use protocol::{
    code_for, estimate, estimate_sequential, estimate_with_code, run_trial, trial_rng, Decision,
    SimConfig, SimStats, TrialOutcome,
};
pub use trend::{
    exponent_trend, ls_slope, messages_for_rate, wilson_interval, TrendRow, TrendTable, Z95,
};
