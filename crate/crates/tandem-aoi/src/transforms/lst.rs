//! Evaluable transform objects.

use std::sync::Arc;

use num_complex::Complex;

use super::{ServiceDistribution, TransformError};
use crate::Real;

type EvalFn<T> = dyn Fn(Complex<T>) -> Complex<T> + Send + Sync;

/// An evaluable Laplace-Stieltjes transform.
///
/// Wraps an evaluation rule `s -> E[exp(-s X)]` valid on `s >= 0` and
/// extendable to complex `s` with `Re(s) > 0` (used by the numerical
/// inversion). Formulas with a removable singularity at `s = 0` store their
/// limit value, which `eval` returns for `s == 0` exactly.
#[derive(Clone)]
pub struct Transform<T: Real> {
    eval: Arc<EvalFn<T>>,
    at_zero: T,
    proper: bool,
    scale: T,
    margin: T,
}

impl<T: Real> Transform<T> {
    /// `at_zero` is the value (or limit) at `s = 0`; `proper` marks a
    /// genuine probability distribution (`at_zero == 1`); `scale` is a
    /// characteristic magnitude of the underlying variable, used to size
    /// finite-difference steps.
    pub fn new<F>(at_zero: T, proper: bool, scale: T, eval: F) -> Self
    where
        F: Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static,
    {
        Transform {
            eval: Arc::new(eval),
            at_zero,
            proper,
            scale,
            margin: T::infinity(),
        }
    }

    /// Declares the distance from the origin to the nearest singularity on
    /// the negative real axis. Peak-age transforms contain an interarrival
    /// factor with a pole at `-lambda`, so differentiation steps must stay
    /// well inside that margin.
    pub fn with_margin(mut self, margin: T) -> Self {
        self.margin = margin;
        self
    }

    /// Transform of a catalog service law.
    pub fn from_distribution(dist: &ServiceDistribution<T>) -> Self {
        let d = dist.clone();
        Transform::new(T::one(), true, dist.mean(), move |z| d.lst_complex(z))
    }

    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        if z.re.is_zero() && z.im.is_zero() {
            Complex::from(self.at_zero)
        } else {
            (self.eval)(z)
        }
    }

    /// Evaluation at a real argument. The stored limit is returned at
    /// exactly `s = 0`; slightly negative arguments are allowed (they are
    /// needed for central differences at the origin).
    pub fn eval(&self, s: T) -> T {
        if s.is_zero() {
            self.at_zero
        } else {
            (self.eval)(Complex::new(s, T::zero())).re
        }
    }

    pub fn at_zero(&self) -> T {
        self.at_zero
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn margin(&self) -> T {
        self.margin
    }
}

impl<T: Real> std::fmt::Debug for Transform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform")
            .field("at_zero", &self.at_zero)
            .field("proper", &self.proper)
            .field("scale", &self.scale)
            .finish()
    }
}

/// `E[exp(-s S)]` for a catalog law; `s < 0` is a domain error.
pub fn lst_eval<T: Real>(dist: &ServiceDistribution<T>, s: T) -> Result<T, TransformError> {
    if s < T::zero() {
        return Err(TransformError::Domain(format!("lst_eval needs s >= 0, got {s}")));
    }
    Ok(dist.lst(s))
}

/// Residual-law transform `(1 - beta(s)) / (s b)`, with value 1 at `s = 0`.
///
/// The mean of the residual law is `b^(2) / 2b`.
pub fn residual_lst<T: Real>(dist: &ServiceDistribution<T>, s: T) -> Result<T, TransformError> {
    if s < T::zero() {
        return Err(TransformError::Domain(format!(
            "residual_lst needs s >= 0, got {s}"
        )));
    }
    if s.is_zero() {
        return Ok(T::one());
    }
    Ok(dist.lst_deficit(s) / (s * dist.mean()))
}

/// Residual law as an evaluable [`Transform`].
pub fn residual_transform<T: Real>(dist: &ServiceDistribution<T>) -> Transform<T> {
    let d = dist.clone();
    let b = dist.mean();
    Transform::new(T::one(), true, dist.residual_mean(), move |z| {
        d.lst_deficit_complex(z) / (z * b)
    })
}
