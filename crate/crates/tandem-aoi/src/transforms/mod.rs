//! Service-time distribution catalog and Laplace-Stieltjes transform (LST)
//! numerics.
//!
//! Everything here works on the LST `f(s) = E[exp(-s X)]` of a non-negative
//! random variable `X`. For a proper distribution `f(0) = 1`, `f` is
//! completely monotone on `s >= 0`, and the mean is recovered as `-f'(0)`.
//! Evaluation extends to complex arguments with `Re(s) > 0`, which is what
//! the numerical inversion needs.

mod busy;
mod deriv;
mod dist;
mod invert;
mod lst;

pub use busy::{busy_period_deficit, busy_period_lst, busy_period_transform, FixedPointOptions};
pub use deriv::numeric_mean_from_lst;
pub use dist::{DistributionError, ServiceDistribution};
pub use invert::{invert_lst_cdf, invert_lst_cdf_raw, EulerInversion};
pub use lst::{lst_eval, residual_lst, residual_transform, Transform};

use num_complex::Complex;

use crate::{num, Real};

/// Errors raised by the transform numerics.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformError {
    /// Argument outside the operation's domain (e.g. negative `s`).
    Domain(String),
    /// The queue the transform describes is not ergodic.
    Unstable { rho: f64 },
    /// An iterative scheme hit its iteration cap.
    NoConvergence { residual: f64, iterations: usize },
    /// Inversion finished but its error estimate exceeds the tolerance.
    InversionResidual { estimate: f64, residual: f64 },
    /// A non-finite value appeared during evaluation.
    NonFinite(String),
}

impl std::fmt::Display for TransformError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransformError::Domain(msg) => write!(f, "domain error: {msg}"),
            TransformError::Unstable { rho } => {
                write!(f, "unstable queue: utilization rho = {rho} >= 1")
            }
            TransformError::NoConvergence {
                residual,
                iterations,
            } => write!(
                f,
                "fixed point did not converge after {iterations} iterations (residual {residual:e})"
            ),
            TransformError::InversionResidual { estimate, residual } => write!(
                f,
                "inversion residual {residual:e} above tolerance (estimate {estimate})"
            ),
            TransformError::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
        }
    }
}

impl std::error::Error for TransformError {}

/// `ln(1 + z)` accurate for small `|z|`.
pub(crate) fn ln1p_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::new(T::one(), T::zero());
    if z.norm() < num(1e-4) {
        // z - z^2/2 + z^3/3 - z^4/4, truncation below 1e-20 at |z| = 1e-4
        let half = Complex::from(num::<T>(0.5));
        let third = Complex::from(T::one() / num::<T>(3.0));
        let quarter = Complex::from(num::<T>(0.25));
        z * (one - z * (half - z * (third - z * quarter)))
    } else {
        (one + z).ln()
    }
}

/// `1 - exp(-z)` accurate for small `|z|`.
pub(crate) fn one_minus_exp<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::new(T::one(), T::zero());
    if z.norm() < num(1e-4) {
        // z - z^2/2 + z^3/6 - z^4/24
        let half = Complex::from(num::<T>(0.5));
        let third = Complex::from(T::one() / num::<T>(3.0));
        let quarter = Complex::from(num::<T>(0.25));
        z * (one - z * half * (one - z * third * (one - z * quarter)))
    } else {
        one - (-z).exp()
    }
}
