//! Locating the utilization that minimizes the simulated class-1 age.

use serde::Serialize;

use super::SweepError;

/// Grid minimum of an age curve over utilization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AoiMinimum {
    pub rho: f64,
    pub value: f64,
    /// False when the minimum sits on the first or last grid point (the
    /// curve is monotone over the sampled range).
    pub interior: bool,
}

/// Argmin of `(rho, aoi)` samples for one fixed `p`. Needs at least five
/// points; a boundary minimum is reported as such, not an error.
pub fn find_aoi_minimum(points: &[(f64, f64)]) -> Result<AoiMinimum, SweepError> {
    if points.len() < 5 {
        return Err(SweepError::BadSpec(format!(
            "need at least 5 rho points for a minimum search, have {}",
            points.len()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (mut best_idx, mut best) = (0usize, pts[0]);
    for (i, &(rho, v)) in pts.iter().enumerate() {
        if v < best.1 {
            best = (rho, v);
            best_idx = i;
        }
    }
    Ok(AoiMinimum {
        rho: best.0,
        value: best.1,
        interior: best_idx > 0 && best_idx + 1 < pts.len(),
    })
}
