//! Parameter sweeps comparing analytics against simulation.
//!
//! A sweep walks a `(p, rho)` grid, back-solving the generation rate from
//! the target second-node utilization (`lambda = rho / (p b1 + (1-p) b2)`),
//! runs the analytic formulas and a set of seeded simulation replications at
//! each point, and emits comparison rows plus CSV panels (one per figure
//! panel: delay, peak age, age, for each class). Identical specs and seeds
//! produce byte-identical files; grid points run concurrently and rows are
//! sorted before writing.

mod minimum;
mod sweep;

pub use minimum::{find_aoi_minimum, AoiMinimum};
pub use sweep::{
    render_summary, run_sweep, ComparisonRow, Metric, SkippedPoint, SweepError, SweepOutput,
    SweepSpec, ValueLabel,
};
