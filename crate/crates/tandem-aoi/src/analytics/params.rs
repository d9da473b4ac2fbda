//! System parameterization and stability validation.

use serde::{Deserialize, Serialize};

use crate::transforms::ServiceDistribution;
use crate::Real;

/// Rejected parameterization.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    /// Total second-node utilization at or above 1.
    NotErgodic { rho: f64 },
    /// First-node utilization at or above 1.
    Node1Overloaded { rho11: f64 },
    InvalidRate(String),
    InvalidProbability(String),
}

impl std::fmt::Display for ParamError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamError::NotErgodic { rho } => {
                write!(f, "system not ergodic: rho = {rho} >= 1")
            }
            ParamError::Node1Overloaded { rho11 } => {
                write!(f, "first node overloaded: rho11 = {rho11} >= 1")
            }
            ParamError::InvalidRate(msg) => write!(f, "invalid rate: {msg}"),
            ParamError::InvalidProbability(msg) => write!(f, "invalid probability: {msg}"),
        }
    }
}

impl std::error::Error for ParamError {}

/// Full parameterization of the tandem: generation rate `lambda`, priority
/// routing probability `p`, node-1 service rate `mu`, and the two node-2
/// service laws. Derived loads are computed once at construction:
/// `lambda1 = p*lambda`, `lambda2 = (1-p)*lambda`, `rho_j = lambda_j * b_j`,
/// `rho = rho1 + rho2`, `rho11 = lambda1/mu`, `theta = mu - lambda1`.
///
/// Construction enforces ergodicity (`rho < 1`, `rho11 < 1`), so holders of
/// a `SystemParams` never need to re-check stability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T: Real> {
    lambda: T,
    p: T,
    mu: T,
    svc1: ServiceDistribution<T>,
    svc2: ServiceDistribution<T>,
    lambda1: T,
    lambda2: T,
    rho1: T,
    rho2: T,
    rho: T,
    rho11: T,
    theta: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(
        lambda: T,
        p: T,
        mu: T,
        svc1: ServiceDistribution<T>,
        svc2: ServiceDistribution<T>,
    ) -> Result<Self, ParamError> {
        if !lambda.is_finite() || lambda <= T::zero() {
            return Err(ParamError::InvalidRate(format!(
                "generation rate lambda = {lambda} must be positive"
            )));
        }
        if !mu.is_finite() || mu <= T::zero() {
            return Err(ParamError::InvalidRate(format!(
                "node-1 service rate mu = {mu} must be positive"
            )));
        }
        if !p.is_finite() || p < T::zero() || p > T::one() {
            return Err(ParamError::InvalidProbability(format!(
                "priority probability p = {p} must lie in [0, 1]"
            )));
        }
        let lambda1 = p * lambda;
        let lambda2 = (T::one() - p) * lambda;
        let rho1 = lambda1 * svc1.mean();
        let rho2 = lambda2 * svc2.mean();
        let rho = rho1 + rho2;
        let rho11 = lambda1 / mu;
        let theta = mu - lambda1;
        if rho >= T::one() {
            return Err(ParamError::NotErgodic {
                rho: rho.to_f64().unwrap_or(f64::NAN),
            });
        }
        if rho11 >= T::one() {
            return Err(ParamError::Node1Overloaded {
                rho11: rho11.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(SystemParams {
            lambda,
            p,
            mu,
            svc1,
            svc2,
            lambda1,
            lambda2,
            rho1,
            rho2,
            rho,
            rho11,
            theta,
        })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
    pub fn p(&self) -> T {
        self.p
    }
    pub fn mu(&self) -> T {
        self.mu
    }
    pub fn svc1(&self) -> &ServiceDistribution<T> {
        &self.svc1
    }
    pub fn svc2(&self) -> &ServiceDistribution<T> {
        &self.svc2
    }
    pub fn lambda1(&self) -> T {
        self.lambda1
    }
    pub fn lambda2(&self) -> T {
        self.lambda2
    }
    pub fn rho1(&self) -> T {
        self.rho1
    }
    pub fn rho2(&self) -> T {
        self.rho2
    }
    pub fn rho(&self) -> T {
        self.rho
    }
    pub fn rho11(&self) -> T {
        self.rho11
    }
    pub fn theta(&self) -> T {
        self.theta
    }

    /// Class-1 traffic exists (`lambda1 > 0`).
    pub fn class1_present(&self) -> bool {
        self.lambda1 > T::zero()
    }

    /// Class-2 traffic exists (`lambda2 > 0`).
    pub fn class2_present(&self) -> bool {
        self.lambda2 > T::zero()
    }

    /// Mean node-1 service time `b = 1/mu`.
    pub fn b_node1(&self) -> T {
        T::one() / self.mu
    }
}
