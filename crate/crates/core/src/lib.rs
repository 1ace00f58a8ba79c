//! Error exponents for the binary symmetric channel with noisy feedback,
//! and a simulator for the two-phase transmission protocol they describe.

// Range checks are written `!(x >= lo)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exponents;
pub mod feedback;
pub mod math;
pub mod simulator;

pub use error::{Error, Result};
pub use exponents::{BoundKind, ExponentQuery, ListSize, RhoParam};
pub use feedback::{BoundBreakdown, ChannelPair, SchemeParams};
pub use math::{Bracket, Nats, Prob};
pub use simulator::{Codebook, SimConfig, SimStats};
