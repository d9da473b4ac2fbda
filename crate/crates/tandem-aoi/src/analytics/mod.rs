//! Transform-domain analysis of the two-hop priority tandem.
//!
//! [`SystemParams`] carries the full parameterization and derived loads.
//! [`Analytics`] evaluates every delay/peak-age/age transform and the
//! closed-form means. Class-1 (relayed, priority) results rest on an
//! independence assumption and are approximate: the analysis assumes the
//! arriving priority packet finds the second node free of non-priority work
//! with probability `1 - rho2`, and treats the two per-node delays of the
//! previous packet as independent. Class-2 results are exact apart from the
//! stationary-state weighting of the peak-age case split, which is accurate
//! at moderate priority load. The simulator (`crate::sim`) is the arbiter
//! for all of it.

mod class1;
mod class2;
mod means;
mod params;
mod report;

pub use means::{MeanComparison, Means};
pub use params::{ParamError, SystemParams};
pub use report::{AnalyticReport, ClassAnalytics, Discrepancy, ValueKind};

use num_complex::Complex;

use crate::transforms::{busy_period_deficit, FixedPointOptions, Transform};
use crate::{num, Real};

pub use class1::CaseContributions;

/// Evaluator for every transform and closed-form mean of the tandem.
///
/// All methods are pure functions of the parameters; the struct only
/// bundles them with the fixed-point options so it can be shared freely.
#[derive(Debug, Clone)]
pub struct Analytics<T: Real> {
    params: SystemParams<T>,
    fp: FixedPointOptions<T>,
}

impl<T: Real> Analytics<T> {
    pub fn new(params: SystemParams<T>) -> Self {
        Analytics {
            params,
            fp: FixedPointOptions::default(),
        }
    }

    pub fn params(&self) -> &SystemParams<T> {
        &self.params
    }

    /// Node-1 service LST `mu / (mu + s)`.
    pub(crate) fn beta_node1(&self, z: Complex<T>) -> Complex<T> {
        let mu = Complex::from(self.params.mu());
        mu / (mu + z)
    }

    /// Node-1 delay LST `theta / (theta + s)` with `theta = mu - lambda1`.
    pub fn tau11_c(&self, z: Complex<T>) -> Complex<T> {
        let theta = Complex::from(self.params.theta());
        theta / (theta + z)
    }

    pub fn tau11(&self, s: T) -> T {
        self.tau11_c(Complex::from(s)).re
    }

    /// Busy-period deficit `1 - gamma(z)` for class-1 work at node 2.
    pub(crate) fn busy_deficit(&self, z: Complex<T>) -> Complex<T> {
        busy_period_deficit(self.params.svc1(), self.params.lambda1(), z, &self.fp)
            .expect("stable by construction of SystemParams")
    }

    /// Class-1 node-2 delay LST (head-of-line priority, general service).
    pub fn tau12_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let p = &self.params;
        let num = z * (T::one() - p.rho()) + p.svc2().lst_deficit_complex(z) * p.lambda2();
        let den = z - p.svc1().lst_deficit_complex(z) * p.lambda1();
        p.svc1().lst_complex(z) * num / den
    }

    pub fn tau12(&self, s: T) -> T {
        self.tau12_c(Complex::from(s)).re
    }

    /// Class-2 node-2 delay LST.
    pub fn tau2_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        self.omega2_c(z) * self.params.svc2().lst_complex(z)
    }

    pub fn tau2(&self, s: T) -> T {
        self.tau2_c(Complex::from(s)).re
    }

    /// Class-2 waiting-time LST (the delay transform without the service
    /// factor).
    pub(crate) fn omega2_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let p = &self.params;
        let barg = z + self.busy_deficit(z) * p.lambda1();
        let den = z - p.svc2().lst_deficit_complex(barg) * p.lambda2();
        barg * (T::one() - p.rho()) / den
    }

    /// LST of the waiting time plus completion interval of a class-2
    /// packet (`psi2 = omega2 * beta2-completion`).
    pub fn psi2_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let p = &self.params;
        let barg = z + self.busy_deficit(z) * p.lambda1();
        self.omega2_c(z) * p.svc2().lst_complex(barg)
    }

    pub fn psi2(&self, s: T) -> T {
        self.psi2_c(Complex::from(s)).re
    }

    /// Residual class-2 service transform `(1 - beta2(z)) / (z b2)`.
    pub(crate) fn beta2_residual(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        self.params.svc2().lst_deficit_complex(z) / (z * self.params.svc2().mean())
    }

    /// Residual class-1 busy-period transform `(1 - gamma(z)) / (z E[G1])`.
    pub(crate) fn busy_residual(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let mean_g1 = self.params.svc1().mean() / (T::one() - self.params.rho1());
        self.busy_deficit(z) / (z * mean_g1)
    }

    /// Occupancy weighting `nu(z) = 1 - rho2 + rho2 * beta2_residual(z)`.
    pub(crate) fn nu(&self, z: Complex<T>) -> Complex<T> {
        let rho2 = self.params.rho2();
        Complex::from(T::one() - rho2) + self.beta2_residual(z) * rho2
    }

    /// Difference quotient `(tau12(z) - tau12(a)) / (a - z)` with the
    /// removable singularity at `z = a` handled by a local derivative.
    pub(crate) fn tau12_diff_quotient(&self, z: Complex<T>, a: T) -> Complex<T> {
        let ac = Complex::from(a);
        let gap = ac - z;
        if gap.norm() > num::<T>(1e-6) * T::one().max(a) {
            (self.tau12_c(z) - self.tau12_c(ac)) / gap
        } else {
            let mid = (z + ac) / num::<T>(2.0);
            let h = num::<T>(1e-5);
            let hi = self.tau12_c(mid + Complex::from(h));
            let lo = self.tau12_c(mid - Complex::from(h));
            -(hi - lo) / (h + h)
        }
    }

    // -- transform objects -------------------------------------------------

    pub fn tau11_transform(&self) -> Transform<T> {
        let theta = self.params.theta();
        Transform::new(T::one(), true, T::one() / theta, move |z| {
            Complex::from(theta) / (Complex::from(theta) + z)
        })
    }

    pub fn tau12_transform(&self) -> Transform<T> {
        let an = self.clone();
        let scale = self.means_scale_t12();
        Transform::new(T::one(), true, scale, move |z| an.tau12_c(z))
    }

    pub fn tau2_transform(&self) -> Transform<T> {
        let an = self.clone();
        let scale = self.means_scale_t2();
        Transform::new(T::one(), true, scale, move |z| an.tau2_c(z))
    }

    pub fn psi2_transform(&self) -> Transform<T> {
        let an = self.clone();
        let scale = self.means_scale_t2();
        Transform::new(T::one(), true, scale, move |z| an.psi2_c(z))
    }

    // crude mean magnitudes used only to size finite-difference steps
    pub(crate) fn means_scale_t12(&self) -> T {
        let p = &self.params;
        let w0 = (p.lambda1() * p.svc1().moment2() + p.lambda2() * p.svc2().moment2())
            / num::<T>(2.0);
        p.svc1().mean() + w0 / (T::one() - p.rho1())
    }

    pub(crate) fn means_scale_t2(&self) -> T {
        let p = &self.params;
        let w0 = (p.lambda1() * p.svc1().moment2() + p.lambda2() * p.svc2().moment2())
            / num::<T>(2.0);
        p.svc2().mean() + w0 / ((T::one() - p.rho1()) * (T::one() - p.rho()))
    }
}

pub(crate) fn is_zero<T: Real>(z: Complex<T>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

use num_traits::One;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::numeric_mean_from_lst;
    use crate::ServiceDistribution;

    /// Baseline parameters used throughout: lambda 0.5, p 0.5, mu 1,
    /// exponential unit-mean service at node 2 for both classes.
    pub(crate) fn baseline() -> Analytics<f64> {
        let svc = ServiceDistribution::<f64>::exponential(1.0).unwrap();
        let params = SystemParams::new(0.5, 0.5, 1.0, svc.clone(), svc).unwrap();
        Analytics::new(params)
    }

    /// Hand-derived rational form of the class-1 node-2 delay transform for
    /// the baseline (all-exponential) case.
    fn tau12_baseline_oracle(s: f64) -> f64 {
        (0.75 + 0.5 * s) / ((1.0 + s) * (0.75 + s))
    }

    #[test]
    fn tau11_values() {
        let an = baseline();
        assert_eq!(an.tau11(0.0), 1.0);
        assert!((an.tau11(0.75) - 0.5).abs() < 1e-15);
        let mean = numeric_mean_from_lst(&an.tau11_transform()).unwrap();
        assert!((mean - 4.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn tau12_matches_baseline_rational_form() {
        let an = baseline();
        assert_eq!(an.tau12(0.0), 1.0);
        let mut s = 1e-8;
        while s < 20.0 {
            let got = an.tau12(s);
            let want = tau12_baseline_oracle(s);
            assert!((got - want).abs() < 1e-12, "s={s}: {got} vs {want}");
            s *= 2.7;
        }
        assert!((an.tau12(0.25) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn tau12_mean_is_cobham_delay() {
        // W1 = (l1 b1^2 + l2 b2^2) / (2 (1 - rho1)), delay = W1 + b1
        let an = baseline();
        let mean = numeric_mean_from_lst(&an.tau12_transform()).unwrap();
        assert!((mean - 5.0 / 3.0).abs() < 1e-7, "{mean}");
    }

    #[test]
    fn tau2_mean_is_low_priority_cobham() {
        let an = baseline();
        let mean = numeric_mean_from_lst(&an.tau2_transform()).unwrap();
        assert!((mean - 7.0 / 3.0).abs() < 1e-7, "{mean}");
    }

    #[test]
    fn tau2_reduces_to_mm1_at_p_zero() {
        let svc = ServiceDistribution::<f64>::exponential(1.0).unwrap();
        let params = SystemParams::new(0.5, 0.0, 1.0, svc.clone(), svc).unwrap();
        let an = Analytics::new(params);
        // M/M/1 delay transform: (mu - lambda) / (mu - lambda + s)
        let mut s = 1e-6;
        while s < 10.0 {
            let want = 0.5 / (0.5 + s);
            assert!((an.tau2(s) - want).abs() < 1e-9, "s={s}");
            s *= 3.1;
        }
        let mean = numeric_mean_from_lst(&an.tau2_transform()).unwrap();
        assert!((mean - 2.0).abs() < 1e-7);
    }

    #[test]
    fn psi2_normalization_and_p0_reduction() {
        let an = baseline();
        assert_eq!(an.psi2(0.0), 1.0);
        assert!((an.psi2(0.25) - 0.618_033_988_749_894_9).abs() < 1e-9);

        let svc = ServiceDistribution::<f64>::exponential(1.0).unwrap();
        let params = SystemParams::new(0.5, 0.0, 1.0, svc.clone(), svc).unwrap();
        let an0 = Analytics::new(params);
        let mut s = 0.05;
        while s < 5.0 {
            assert!((an0.psi2(s) - an0.tau2(s)).abs() < 1e-12, "s={s}");
            s *= 2.0;
        }
    }

    #[test]
    fn transform_ordering_on_grid() {
        // adding stages can only decrease the transform pointwise
        let an = baseline();
        for s in [0.1, 0.5, 1.0, 4.0, 10.0] {
            let beta2 = an.params().svc2().lst(s);
            assert!(an.tau2(s) <= beta2 + 1e-12);
            assert!(an.tau12(s) <= an.params().svc1().lst(s) + 1e-12);
        }
    }
}
