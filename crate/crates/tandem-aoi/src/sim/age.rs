//! Pure age/peak-age computations over delivery sequences.
//!
//! A delivery is a `(t_gen, t_depart)` pair; per class the simulator hands
//! these over in departure order, which FCFS within class makes generation
//! order too.

/// Errors from the metric helpers.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricError {
    /// No deliveries, or fewer than the metric needs.
    Undefined(String),
    Domain(String),
}

impl std::fmt::Display for MetricError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricError::Undefined(msg) => write!(f, "undefined metric: {msg}"),
            MetricError::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for MetricError {}

/// Exact time average of the age sawtooth over `horizon`.
///
/// The age at time `t` is `t - t_gen` of the most recent delivery with
/// `t_depart <= t`; at least one such delivery must exist at the horizon
/// start. Between deliveries the age grows linearly, so the integral is a
/// sum of trapezoids evaluated in closed form.
pub fn aoi_time_average(
    deliveries: &[(f64, f64)],
    horizon: (f64, f64),
) -> Result<f64, MetricError> {
    let (start, end) = horizon;
    if deliveries.is_empty() {
        return Err(MetricError::Undefined("empty delivery sequence".into()));
    }
    if !end.is_finite() || !start.is_finite() || end <= start {
        return Err(MetricError::Domain(format!(
            "degenerate horizon [{start}, {end}]"
        )));
    }
    // index of the last delivery departing at or before the horizon start
    let first_after = deliveries.partition_point(|d| d.1 <= start);
    if first_after == 0 {
        return Err(MetricError::Undefined(
            "no delivery at or before the horizon start; age is undefined there".into(),
        ));
    }
    let mut current_gen = deliveries[first_after - 1].0;
    let mut t = start;
    let mut integral = 0.0;
    for &(gen, dep) in &deliveries[first_after..] {
        if dep >= end {
            break;
        }
        // segment [t, dep) with age anchored at current_gen
        integral += segment(t, dep, current_gen);
        current_gen = gen;
        t = dep;
    }
    integral += segment(t, end, current_gen);
    Ok(integral / (end - start))
}

/// Integral of `x - gen` over `[a, b]`.
fn segment(a: f64, b: f64, gen: f64) -> f64 {
    let lo = a - gen;
    let hi = b - gen;
    0.5 * (hi * hi - lo * lo)
}

/// Peak-age samples `t_depart(i) - t_gen(i-1)` for `i >= 2`.
pub fn peak_age_samples(deliveries: &[(f64, f64)]) -> Result<Vec<f64>, MetricError> {
    if deliveries.len() < 2 {
        return Err(MetricError::Undefined(format!(
            "peak age needs >= 2 deliveries, have {}",
            deliveries.len()
        )));
    }
    Ok(deliveries
        .windows(2)
        .map(|w| w[1].1 - w[0].0)
        .collect())
}

/// Sample mean of `exp(-s x)`.
pub fn empirical_lst(samples: &[f64], s: f64) -> Result<f64, MetricError> {
    if samples.is_empty() {
        return Err(MetricError::Undefined("no samples".into()));
    }
    if s < 0.0 {
        return Err(MetricError::Domain(format!("empirical_lst needs s >= 0, got {s}")));
    }
    Ok(samples.iter().map(|&x| (-s * x).exp()).sum::<f64>() / samples.len() as f64)
}
