//! Age-of-information toolkit for a two-hop tandem queue with head-of-line
//! priority at the second node.
//!
//! Packets are generated by a Poisson process with rate `lambda`. With
//! probability `p` a packet takes the relayed path: an M/M/1 first node
//! (service rate `mu`) followed by the second node, where it has priority.
//! With probability `1 - p` it goes straight to the second node as
//! non-priority traffic. The second node serves one packet at a time,
//! priority packets overtake waiting non-priority packets, and a service in
//! progress is never interrupted.
//!
//! The crate provides three independent views of the same system and the
//! machinery to cross-validate them:
//!
//! * [`transforms`] -- a service-time distribution catalog plus
//!   Laplace-Stieltjes transform numerics: evaluation, residual operator,
//!   busy-period fixed point, numerical inversion and differentiation.
//! * [`analytics`] -- the transform-domain analysis of the tandem: per-node
//!   delay transforms, peak-age and age transforms per class, and closed-form
//!   means and bounds.
//! * [`sim`] -- a discrete-event simulator of the exact system producing
//!   per-class delay, peak-age and time-average-age statistics.
//! * [`experiments`] -- parameter sweeps comparing analytics against
//!   simulation, with CSV output.
//!
//! The numeric core is generic over the scalar type through the [`Real`]
//! trait; `f64` aliases are exported at the crate root and are what the
//! simulator and experiment layers use.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

pub mod analytics;
pub mod experiments;
pub mod sim;
pub mod transforms;

/// Scalar type for the analytic core: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for embedding an `f64` constant into the working scalar type.
pub(crate) fn num<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

pub use analytics::{Analytics, SystemParams};
pub use transforms::{ServiceDistribution, Transform};

/// `f64` service-time distribution, the type the simulator consumes.
pub type Dist = ServiceDistribution<f64>;
/// `f64` system parameterization.
pub type Params = SystemParams<f64>;
/// `f64` evaluable transform.
pub type Lst = Transform<f64>;
