//! Busy-period transform via its fixed-point equation.
//!
//! The busy period `G` started by one class-1 packet at an empty server
//! satisfies `gamma(s) = beta1(s + lambda1 - lambda1 * gamma(s))`. The
//! iteration is run on the deficit `g = 1 - gamma`, i.e.
//! `g = deficit1(s + lambda1 * g)`, which keeps full relative precision for
//! small `s` where `gamma` is within rounding of 1.

use num_complex::Complex;

use super::{ServiceDistribution, Transform, TransformError};
use crate::{num, Real};

/// Tunables for the fixed-point iteration.
///
/// Convergence is judged relative to `|g|` so that tiny arguments (where
/// `g ~ s E[G]`) keep full relative precision; a stagnation guard accepts
/// the iterate once steps stop shrinking at the rounding floor.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions<T: Real> {
    /// Absolute floor on the step tolerance.
    pub tol_abs: T,
    /// Relative component of the step tolerance.
    pub tol_rel: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        FixedPointOptions {
            tol_abs: T::min_positive_value() * num(1e4),
            tol_rel: eps * num(4.0),
            max_iterations: 10_000,
        }
    }
}

/// Solves `g = deficit1(z + lambda1 * g)` for the busy-period deficit
/// `g(z) = 1 - gamma(z)`, starting from `g = 1` (that is, `gamma = 0`).
///
/// The map is a contraction with rate `rho1 = lambda1 * b1` for
/// `Re(z) >= 0`, so the iteration converges whenever the class-1 queue is
/// stable.
pub fn busy_period_deficit<T: Real>(
    svc1: &ServiceDistribution<T>,
    lambda1: T,
    z: Complex<T>,
    opts: &FixedPointOptions<T>,
) -> Result<Complex<T>, TransformError> {
    let rho1 = lambda1 * svc1.mean();
    if rho1 >= T::one() {
        return Err(TransformError::Unstable {
            rho: rho1.to_f64().unwrap_or(f64::NAN),
        });
    }
    if lambda1.is_zero() {
        return Ok(svc1.lst_deficit_complex(z));
    }
    let mut g = Complex::from(T::one());
    let mut prev_step = T::infinity();
    for _ in 0..opts.max_iterations {
        let next = svc1.lst_deficit_complex(z + g * lambda1);
        let step = (next - g).norm();
        g = next;
        let converged = step <= opts.tol_abs + opts.tol_rel * g.norm();
        // rounding floor reached: steps no longer shrink but are tiny
        let stagnated = step >= prev_step && step <= num::<T>(1e-12) * T::one().max(g.norm());
        prev_step = step;
        if converged || stagnated {
            if !g.re.is_finite() || !g.im.is_finite() {
                return Err(TransformError::NonFinite("busy-period fixed point".into()));
            }
            return Ok(g);
        }
    }
    let residual = (g - svc1.lst_deficit_complex(z + g * lambda1)).norm();
    Err(TransformError::NoConvergence {
        residual: residual.to_f64().unwrap_or(f64::NAN),
        iterations: opts.max_iterations,
    })
}

/// `gamma(s)` at a real non-negative argument.
pub fn busy_period_lst<T: Real>(
    svc1: &ServiceDistribution<T>,
    lambda1: T,
    s: T,
) -> Result<T, TransformError> {
    if s < T::zero() {
        return Err(TransformError::Domain(format!(
            "busy_period_lst needs s >= 0, got {s}"
        )));
    }
    let g = busy_period_deficit(svc1, lambda1, Complex::from(s), &FixedPointOptions::default())?;
    Ok(T::one() - g.re)
}

/// Busy-period transform as an evaluable object.
///
/// Returns an error only for an unstable queue; evaluation itself panics on
/// non-convergence, which cannot happen on the closed right half-plane for a
/// stable queue.
pub fn busy_period_transform<T: Real>(
    svc1: ServiceDistribution<T>,
    lambda1: T,
) -> Result<Transform<T>, TransformError> {
    let rho1 = lambda1 * svc1.mean();
    if rho1 >= T::one() {
        return Err(TransformError::Unstable {
            rho: rho1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mean = svc1.mean() / (T::one() - rho1);
    let opts = FixedPointOptions::default();
    Ok(Transform::new(T::one(), true, mean, move |z| {
        Complex::from(T::one())
            - busy_period_deficit(&svc1, lambda1, z, &opts)
                .expect("busy-period iteration converges for stable queue")
    }))
}
