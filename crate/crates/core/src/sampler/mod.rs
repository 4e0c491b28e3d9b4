//! Monte Carlo checks of the bounds: exact free-measure draws, Metropolis chains over the
//! interacting measure, and a quadrature oracle for two bodies.

mod free;
mod metropolis;
mod oracle;
mod stats;

pub use free::{free_stream, sample_free, sample_free_truncated, TruncatedSampler, MIN_REJECTION_EFFICIENCY};
pub use metropolis::{
    empirical_epsilon, metropolis_accept, metropolis_run, metropolis_run_from, metropolis_run_model, ChainSettings,
    EpsilonEstimate, SampleStats, TARGET_ACCEPTANCE,
};
pub use oracle::{oracle_two_body, OracleSettings, TwoBodyMoments};
pub use stats::BATCHES;
