//! Catalog of service-time laws with closed-form moments, LSTs and sampling.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ln1p_complex, one_minus_exp};
use crate::{num, Real};

/// Invalid distribution parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionError(pub String);

impl std::fmt::Display for DistributionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid distribution parameters: {}", self.0)
    }
}

impl std::error::Error for DistributionError {}

/// A service-time law with closed-form first three moments and LST.
///
/// All laws are supported on `[0, inf)` and have finite third moments. The
/// LST `E[exp(-s S)]` is evaluated exactly from the closed form, and
/// [`ServiceDistribution::lst_deficit`] provides `1 - E[exp(-s S)]` without
/// cancellation for small `s`, which the queueing transforms rely on near
/// their removable singularities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ServiceDistribution<T: Real> {
    Exponential { rate: T },
    Deterministic { value: T },
    Erlang { shape: u32, rate: T },
    /// Mixture of exponentials: `(probability, rate)` per branch.
    Hyperexponential { branches: Vec<(T, T)> },
    Gamma { shape: T, rate: T },
}

use ServiceDistribution::*;

impl<T: Real> ServiceDistribution<T> {
    pub fn exponential(rate: T) -> Result<Self, DistributionError> {
        if !rate.is_finite() || rate <= T::zero() {
            return Err(DistributionError(format!("exponential rate {rate} <= 0")));
        }
        Ok(Exponential { rate })
    }

    pub fn exponential_with_mean(mean: T) -> Result<Self, DistributionError> {
        if !mean.is_finite() || mean <= T::zero() {
            return Err(DistributionError(format!("exponential mean {mean} <= 0")));
        }
        Self::exponential(T::one() / mean)
    }

    pub fn deterministic(value: T) -> Result<Self, DistributionError> {
        if !value.is_finite() || value <= T::zero() {
            return Err(DistributionError(format!("deterministic value {value} <= 0")));
        }
        Ok(Deterministic { value })
    }

    pub fn erlang(shape: u32, rate: T) -> Result<Self, DistributionError> {
        if shape == 0 {
            return Err(DistributionError("erlang shape must be >= 1".into()));
        }
        if !rate.is_finite() || rate <= T::zero() {
            return Err(DistributionError(format!("erlang rate {rate} <= 0")));
        }
        Ok(Erlang { shape, rate })
    }

    pub fn erlang_with_mean(shape: u32, mean: T) -> Result<Self, DistributionError> {
        if !mean.is_finite() || mean <= T::zero() {
            return Err(DistributionError(format!("erlang mean {mean} <= 0")));
        }
        Self::erlang(shape, T::from_u32(shape).unwrap() / mean)
    }

    pub fn hyperexponential(branches: Vec<(T, T)>) -> Result<Self, DistributionError> {
        if branches.is_empty() {
            return Err(DistributionError("hyperexponential needs >= 1 branch".into()));
        }
        let mut total = T::zero();
        for &(p, r) in &branches {
            if !p.is_finite() || !r.is_finite() || p <= T::zero() || r <= T::zero() {
                return Err(DistributionError(format!(
                    "hyperexponential branch (p={p}, rate={r}) must be positive"
                )));
            }
            total += p;
        }
        if (total - T::one()).abs() > num(1e-9) {
            return Err(DistributionError(format!(
                "hyperexponential branch probabilities sum to {total}, not 1"
            )));
        }
        // renormalize so the probabilities fold to 1 without a trailing
        // rounding ulp (the transform at 0 must be exactly 1): scale every
        // branch, then pin the last one against the folded sum of the rest
        let mut branches: Vec<(T, T)> = branches
            .into_iter()
            .map(|(p, r)| (p / total, r))
            .collect();
        let rest = branches[..branches.len() - 1]
            .iter()
            .fold(T::zero(), |acc, &(p, _)| acc + p);
        let last = branches.len() - 1;
        branches[last].0 = T::one() - rest;
        if branches[last].0 <= T::zero() {
            return Err(DistributionError(
                "hyperexponential branch probabilities too unbalanced to normalize".into(),
            ));
        }
        Ok(Hyperexponential { branches })
    }

    /// Two-branch hyperexponential with the given mean and squared
    /// coefficient of variation `cv2 > 1`, using balanced means
    /// (`p1/r1 = p2/r2`).
    pub fn hyperexponential_balanced(mean: T, cv2: T) -> Result<Self, DistributionError> {
        if !mean.is_finite() || !cv2.is_finite() || mean <= T::zero() || cv2 <= T::one() {
            return Err(DistributionError(format!(
                "balanced hyperexponential needs mean > 0 and cv2 > 1 (got {mean}, {cv2})"
            )));
        }
        let one = T::one();
        let two = num::<T>(2.0);
        let root = ((cv2 - one) / (cv2 + one)).sqrt();
        let p1 = (one + root) / two;
        let p2 = one - p1;
        let r1 = two * p1 / mean;
        let r2 = two * p2 / mean;
        Self::hyperexponential(vec![(p1, r1), (p2, r2)])
    }

    pub fn gamma(shape: T, rate: T) -> Result<Self, DistributionError> {
        if !shape.is_finite() || !rate.is_finite() || shape <= T::zero() || rate <= T::zero() {
            return Err(DistributionError(format!(
                "gamma shape {shape} and rate {rate} must be positive"
            )));
        }
        Ok(Gamma { shape, rate })
    }

    pub fn gamma_with_mean(shape: T, mean: T) -> Result<Self, DistributionError> {
        if !mean.is_finite() || mean <= T::zero() {
            return Err(DistributionError(format!("gamma mean {mean} <= 0")));
        }
        Self::gamma(shape, shape / mean)
    }

    /// Mean service time `b`.
    pub fn mean(&self) -> T {
        match self {
            Exponential { rate } => T::one() / *rate,
            Deterministic { value } => *value,
            Erlang { shape, rate } => T::from_u32(*shape).unwrap() / *rate,
            Hyperexponential { branches } => branches
                .iter()
                .fold(T::zero(), |acc, &(p, r)| acc + p / r),
            Gamma { shape, rate } => *shape / *rate,
        }
    }

    /// Second raw moment `b^(2) = E[S^2]`.
    pub fn moment2(&self) -> T {
        let two = num::<T>(2.0);
        match self {
            Exponential { rate } => two / (*rate * *rate),
            Deterministic { value } => *value * *value,
            Erlang { shape, rate } => {
                let k = T::from_u32(*shape).unwrap();
                k * (k + T::one()) / (*rate * *rate)
            }
            Hyperexponential { branches } => branches
                .iter()
                .fold(T::zero(), |acc, &(p, r)| acc + two * p / (r * r)),
            Gamma { shape, rate } => *shape * (*shape + T::one()) / (*rate * *rate),
        }
    }

    /// Third raw moment `b^(3) = E[S^3]`.
    pub fn moment3(&self) -> T {
        let six = num::<T>(6.0);
        match self {
            Exponential { rate } => six / (*rate * *rate * *rate),
            Deterministic { value } => *value * *value * *value,
            Erlang { shape, rate } => {
                let k = T::from_u32(*shape).unwrap();
                k * (k + T::one()) * (k + num(2.0)) / (*rate * *rate * *rate)
            }
            Hyperexponential { branches } => branches
                .iter()
                .fold(T::zero(), |acc, &(p, r)| acc + six * p / (r * r * r)),
            Gamma { shape, rate } => {
                *shape * (*shape + T::one()) * (*shape + num(2.0)) / (*rate * *rate * *rate)
            }
        }
    }

    /// Mean of the residual (equilibrium) law, `b^(2) / 2b`.
    pub fn residual_mean(&self) -> T {
        self.moment2() / (num::<T>(2.0) * self.mean())
    }

    /// LST at a real argument. Exact closed form; `s` may be slightly
    /// negative (inside the abscissa of convergence), which numeric
    /// differentiation at the origin uses.
    pub fn lst(&self, s: T) -> T {
        match self {
            Exponential { rate } => *rate / (*rate + s),
            Deterministic { value } => (-s * *value).exp(),
            Erlang { shape, rate } => (*rate / (*rate + s)).powi(*shape as i32),
            Hyperexponential { branches } => branches
                .iter()
                .fold(T::zero(), |acc, &(p, r)| acc + p * (r / (r + s))),
            Gamma { shape, rate } => (-(*shape) * (s / *rate).ln_1p()).exp(),
        }
    }

    /// `1 - lst(s)` without cancellation near `s = 0`.
    pub fn lst_deficit(&self, s: T) -> T {
        match self {
            Exponential { rate } => s / (*rate + s),
            Deterministic { value } => -(-s * *value).exp_m1(),
            Erlang { shape, rate } => {
                let k = T::from_u32(*shape).unwrap();
                -(-k * (s / *rate).ln_1p()).exp_m1()
            }
            Hyperexponential { branches } => {
                s * branches
                    .iter()
                    .fold(T::zero(), |acc, &(p, r)| acc + p / (r + s))
            }
            Gamma { shape, rate } => -(-(*shape) * (s / *rate).ln_1p()).exp_m1(),
        }
    }

    /// LST at a complex argument (`Re(s) > -r` for the rational laws).
    pub fn lst_complex(&self, s: Complex<T>) -> Complex<T> {
        match self {
            Exponential { rate } => {
                let r = Complex::from(*rate);
                r / (r + s)
            }
            Deterministic { value } => (-s * *value).exp(),
            Erlang { shape, rate } => {
                let r = Complex::from(*rate);
                (r / (r + s)).powi(*shape as i32)
            }
            Hyperexponential { branches } => {
                branches.iter().fold(Complex::zero(), |acc, &(p, r)| {
                    let rc = Complex::from(r);
                    acc + (rc / (rc + s)) * p
                })
            }
            Gamma { shape, rate } => (-ln1p_complex(s / *rate) * *shape).exp(),
        }
    }

    /// `1 - lst_complex(s)` without cancellation for small `|s|`.
    pub fn lst_deficit_complex(&self, s: Complex<T>) -> Complex<T> {
        match self {
            Exponential { rate } => {
                let r = Complex::from(*rate);
                s / (r + s)
            }
            Deterministic { value } => one_minus_exp(s * *value),
            Erlang { shape, rate } => {
                let k = T::from_u32(*shape).unwrap();
                one_minus_exp(ln1p_complex(s / *rate) * k)
            }
            Hyperexponential { branches } => {
                s * branches.iter().fold(Complex::zero(), |acc, &(p, r)| {
                    acc + Complex::from(p) / (Complex::from(r) + s)
                })
            }
            Gamma { shape, rate } => one_minus_exp(ln1p_complex(s / *rate) * *shape),
        }
    }

    /// Draws one service time in `f64`.
    ///
    /// Exponential-family laws use inverse-transform sampling so the number
    /// of generator draws per sample is fixed, keeping common-random-number
    /// streams aligned across parameter points. Gamma uses rejection
    /// sampling (variable draw count).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Exponential { rate } => sample_exp(rng, rate.to_f64().unwrap()),
            Deterministic { value } => {
                // one draw consumed to keep stream alignment uniform
                let _ = rng.random::<f64>();
                value.to_f64().unwrap()
            }
            Erlang { shape, rate } => {
                let r = rate.to_f64().unwrap();
                (0..*shape).map(|_| sample_exp(rng, r)).sum()
            }
            Hyperexponential { branches } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(p, r) in branches {
                    acc += p.to_f64().unwrap();
                    if u <= acc {
                        return sample_exp(rng, r.to_f64().unwrap());
                    }
                }
                let (_, r) = branches[branches.len() - 1];
                sample_exp(rng, r.to_f64().unwrap())
            }
            Gamma { shape, rate } => {
                let g = rand_distr::Gamma::new(
                    shape.to_f64().unwrap(),
                    1.0 / rate.to_f64().unwrap(),
                )
                .expect("validated parameters");
                rand_distr::Distribution::sample(&g, rng)
            }
        }
    }
}

fn sample_exp<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.random();
    // random() is in [0, 1); flip to (0, 1] so ln never sees zero
    -(1.0 - u).ln() / rate
}

use num_traits::Zero;
