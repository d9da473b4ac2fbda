//! Discrete-event simulation of the exact two-node system.
//!
//! One run generates Poisson traffic, routes priority packets through the
//! M/M/1 first node into the priority line of the second node, and serves
//! the second node with head-of-line priority and no preemption of a
//! service in progress. The engine records per-packet lifecycle timestamps
//! and turns them into per-class delay, peak-age and time-average-age
//! statistics with batch-means confidence intervals.
//!
//! Runs are bit-deterministic in `(params, n_packets, seed)`: every random
//! draw is tied to the generating packet, one seeded stream per purpose, so
//! event interleaving cannot reorder stream consumption.

mod age;
mod engine;
mod report;
mod stats;

pub use age::{aoi_time_average, empirical_lst, peak_age_samples, MetricError};
pub use engine::{
    run_simulation, run_simulation_packets, run_simulation_with, FaultInjection, PacketSample,
    SimOptions, TraceRecord,
};
pub use report::{ClassStats, InvariantChecks, SimReport};
pub use stats::{batch_means_halfwidth, halfwidth_of_means, ks_statistic_exponential};

/// Errors from the simulation entry points.
#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    /// Parameters describe an unstable system (checked again defensively;
    /// `SystemParams` construction already enforces it).
    Unstable(String),
    /// Fewer than the minimum supported number of packets.
    TooFewPackets { requested: usize, minimum: usize },
    /// Warmup fraction outside `[0, 0.5)`.
    BadWarmup(f64),
    /// Event calendar exceeded its bound (engine invariant broken).
    Resource(String),
}

impl std::fmt::Display for SimError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimError::Unstable(msg) => write!(f, "unstable parameters: {msg}"),
            SimError::TooFewPackets { requested, minimum } => {
                write!(f, "n_packets = {requested} below minimum {minimum}")
            }
            SimError::BadWarmup(w) => write!(f, "warmup fraction {w} outside [0, 0.5)"),
            SimError::Resource(msg) => write!(f, "resource limit: {msg}"),
        }
    }
}

impl std::error::Error for SimError {}
