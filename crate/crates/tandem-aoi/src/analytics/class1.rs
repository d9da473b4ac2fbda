//! Priority-class (relayed) peak-age, delay and age transforms.
//!
//! The analysis conditions on how the tagged packet interacts with its
//! predecessor: no queueing anywhere, blocked at node 2 by the predecessor,
//! blocked by a non-priority service in progress, queued at node 1 with the
//! second node free, queued at both, or queued at node 1 with a
//! non-priority service in progress. The six conditional transforms below
//! are the joint (defective) LSTs of the age/delay building blocks on those
//! events; the per-class transforms are their weighted sums.
//!
//! Two forms of the peak-age transform are provided. [`Analytics::alpha1_c`]
//! is the full case sum, which is exactly normalized at `s = 0` and is what
//! every mean and the age assembly use. [`Analytics::alpha1_compact_c`] is a
//! shorter single-expression variant that differs by the term
//! `beta(z) * beta1(z) * (tau12(z) - tau12(z + lambda1))`; it is retained for
//! regression comparison and its normalization deficit
//! `1 - tau12(lambda1)` is surfaced in reports rather than hidden.

use num_complex::Complex;
use num_traits::One;

use super::{is_zero, Analytics};
use crate::transforms::Transform;
use crate::Real;

/// The six per-case contributions to the class-1 peak-age and delay
/// transforms, in case order C1..C6. Each pair is `(alpha_m, tau_m)`;
/// summing the six pairs yields `alpha1` and `tau1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseContributions<T: Real> {
    pub alpha: [Complex<T>; 6],
    pub tau: [Complex<T>; 6],
}

impl<T: Real> CaseContributions<T> {
    pub fn alpha_sum(&self) -> Complex<T> {
        self.alpha.iter().fold(Complex::zero(), |a, &x| a + x)
    }

    pub fn tau_sum(&self) -> Complex<T> {
        self.tau.iter().fold(Complex::zero(), |a, &x| a + x)
    }
}

use num_traits::Zero;

impl<T: Real> Analytics<T> {
    /// Joint transform pieces shared by cases C1/C3 (no node-1 queueing,
    /// second node clears the predecessor in time).
    fn eta_xi_13(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let p = self.params();
        let l1 = p.lambda1();
        let mu = p.mu();
        let rho11 = p.rho11();
        let beta = self.beta_node1(z);
        let t12_l1s = self.tau12_c(z + Complex::from(l1));
        let t12_mus = self.tau12_c(z + Complex::from(mu));
        let eta = beta * l1 / (z + Complex::from(l1)) * t12_l1s - beta * beta * rho11 * t12_mus;
        let xi = self.tau11_c(z) * (Complex::from(self.tau12(l1)) - beta * rho11 * t12_mus);
        (eta, xi)
    }

    /// Case C2: predecessor still at the second node, no node-1 queueing.
    fn eta_xi_2(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let p = self.params();
        let l1 = p.lambda1();
        let mu = p.mu();
        let rho11 = p.rho11();
        let one = T::one();
        let beta = self.beta_node1(z);
        let t12_s = self.tau12_c(z);
        let t12_l1 = Complex::from(self.tau12(l1));
        let t12_l1s = self.tau12_c(z + Complex::from(l1));
        let t12_mus = self.tau12_c(z + Complex::from(mu));
        let eta = beta * ((t12_s * (one - rho11)) - t12_l1s + t12_mus * rho11);
        let dq = self.tau12_diff_quotient(z, l1);
        let xi = dq * ((one - rho11) * l1) + self.tau11_c(z) * rho11 * (t12_mus - t12_l1);
        (eta, xi)
    }

    /// Cases C4/C6: queued at node 1, predecessor gone from node 2.
    fn eta_xi_46(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let p = self.params();
        let rho11 = p.rho11();
        let beta = self.beta_node1(z);
        let t12_mus = self.tau12_c(z + Complex::from(p.mu()));
        let base = self.tau11_c(z) * rho11 * beta * t12_mus;
        (base * beta, base)
    }

    /// Case C5: queued at node 1 and again behind the predecessor at node 2.
    fn eta_xi_5(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let p = self.params();
        let rho11 = p.rho11();
        let beta = self.beta_node1(z);
        let diff = self.tau12_c(z) - self.tau12_c(z + Complex::from(p.mu()));
        let xi = self.tau11_c(z) * rho11 * diff;
        (xi * beta, xi)
    }

    /// The six per-case `(alpha, tau)` contributions at complex argument.
    pub fn cases_c(&self, z: Complex<T>) -> CaseContributions<T> {
        let p = self.params();
        let rho2 = p.rho2();
        let one_m_rho2 = T::one() - rho2;
        let beta1 = p.svc1().lst_complex(z);
        let res2 = self.beta2_residual(z) * rho2;

        let (eta13, xi13) = self.eta_xi_13(z);
        let (eta2, xi2) = self.eta_xi_2(z);
        let (eta46, xi46) = self.eta_xi_46(z);
        let (eta5, xi5) = self.eta_xi_5(z);

        CaseContributions {
            alpha: [
                beta1 * eta13 * one_m_rho2,
                beta1 * eta2,
                beta1 * eta13 * res2,
                beta1 * eta46 * one_m_rho2,
                beta1 * eta5,
                beta1 * eta46 * res2,
            ],
            tau: [
                beta1 * xi13 * one_m_rho2,
                beta1 * xi2,
                beta1 * xi13 * res2,
                beta1 * xi46 * one_m_rho2,
                beta1 * xi5,
                beta1 * xi46 * res2,
            ],
        }
    }

    /// The six per-case `(alpha, tau)` values at real `s`.
    pub fn cases(&self, s: T) -> CaseContributions<T> {
        self.cases_c(Complex::from(s))
    }

    /// Class-1 peak-age transform: the sum over the six cases, grouped so
    /// the occupancy weighting `nu` multiplies the shared pieces once.
    pub fn alpha1_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let nu = self.nu(z);
        let (eta13, _) = self.eta_xi_13(z);
        let (eta2, _) = self.eta_xi_2(z);
        let (eta46, _) = self.eta_xi_46(z);
        let (eta5, _) = self.eta_xi_5(z);
        self.params().svc1().lst_complex(z) * (nu * (eta13 + eta46) + eta2 + eta5)
    }

    pub fn alpha1(&self, s: T) -> T {
        self.alpha1_c(Complex::from(s)).re
    }

    /// Class-1 system-delay transform (node-1 plus node-2 sojourn).
    pub fn tau1_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let nu = self.nu(z);
        let (_, xi13) = self.eta_xi_13(z);
        let (_, xi2) = self.eta_xi_2(z);
        let (_, xi46) = self.eta_xi_46(z);
        let (_, xi5) = self.eta_xi_5(z);
        self.params().svc1().lst_complex(z) * (nu * (xi13 + xi46) + xi2 + xi5)
    }

    pub fn tau1(&self, s: T) -> T {
        self.tau1_c(Complex::from(s)).re
    }

    /// Compact single-expression peak-age variant. Not normalized: its
    /// value at 0 is `tau12(lambda1)`, short of 1 by exactly the term noted
    /// in the module docs. Kept for regression comparison.
    pub fn alpha1_compact_c(&self, z: Complex<T>) -> Complex<T> {
        let p = self.params();
        let l1 = p.lambda1();
        if is_zero(z) {
            return Complex::from(self.tau12(l1));
        }
        let mu = p.mu();
        let theta = p.theta();
        let rho11 = p.rho11();
        let nu = self.nu(z);
        let beta = self.beta_node1(z);
        let beta1 = p.svc1().lst_complex(z);
        let first = nu * l1 / (z + Complex::from(l1)) * beta * self.tau12_c(z + Complex::from(l1));
        let one = Complex::<T>::new(T::one(), T::zero());
        let inner = self.tau12_c(z) - self.tau12_c(z + Complex::from(mu)) * (one - nu * beta);
        let second = z / (z + Complex::from(theta)) * beta * rho11 * inner;
        (first - second) * beta1
    }

    pub fn alpha1_compact(&self, s: T) -> T {
        self.alpha1_compact_c(Complex::from(s)).re
    }

    /// Class-1 age transform assembled from the stationary-age identity
    /// `delta(s) = (lambda/s) * (tau(s) - alpha(s))`, `s > 0`.
    pub fn delta1_c(&self, z: Complex<T>) -> Complex<T> {
        let l1 = self.params().lambda1();
        (self.tau1_c(z) - self.alpha1_c(z)) * l1 / z
    }

    pub fn delta1(&self, s: T) -> T {
        self.delta1_c(Complex::from(s)).re
    }

    /// Expanded single-expression age variant, retained for regression
    /// comparison against the assembly form (it does not agree with it; see
    /// report discrepancies). `beta~` is read as the node-1 residual law.
    pub fn delta1_expanded_c(&self, z: Complex<T>) -> Complex<T> {
        let p = self.params();
        let l1 = p.lambda1();
        let mu = p.mu();
        let rho11 = p.rho11();
        let one = Complex::<T>::one();
        let nu = self.nu(z);
        let beta = self.beta_node1(z);
        let beta1 = p.svc1().lst_complex(z);
        let t11 = self.tau11_c(z);
        let t12_l1 = Complex::from(self.tau12(l1));
        let lc = Complex::from(l1);
        let node1_residual = if is_zero(z) {
            one
        } else {
            // (1 - beta(z)) / (z b) with b = 1/mu
            z / (z + Complex::from(mu)) * mu / z
        };
        let term1 = t11 * t12_l1 * (lc / (z - lc)) * (nu + (lc / z) * (one - nu));
        let term2 =
            beta1 * self.tau12_c(z) * (lc / (lc + z)) * (one + (lc / z) * (one - nu));
        let term3 = beta * t11 * t11 * self.tau12_c(z + Complex::from(mu))
            * (one - nu * beta)
            * (rho11 * rho11 * rho11 / (T::one() - rho11));
        let term4 = node1_residual * beta * nu * (rho11 * rho11);
        beta1 * (term1 + term2 - term3 + term4)
    }

    // -- transform objects --------------------------------------------------

    pub fn alpha1_transform(&self) -> Transform<T> {
        let an = self.clone();
        let lambda1 = self.params().lambda1();
        let scale = T::one() / lambda1 + self.mean_t1();
        Transform::new(T::one(), true, scale, move |z| an.alpha1_c(z)).with_margin(lambda1)
    }

    pub fn tau1_transform(&self) -> Transform<T> {
        let an = self.clone();
        let scale = self.mean_t1();
        Transform::new(T::one(), true, scale, move |z| an.tau1_c(z))
    }

    pub fn alpha1_compact_transform(&self) -> Transform<T> {
        let an = self.clone();
        let lambda1 = self.params().lambda1();
        let at_zero = self.tau12(lambda1);
        let scale = T::one() / lambda1 + self.mean_t1();
        Transform::new(at_zero, false, scale, move |z| an.alpha1_compact_c(z))
            .with_margin(lambda1)
    }

    /// Age transform with its finite limit at 0 stored. The limit pairs the
    /// two construction derivatives (not the exact closed-form delay, which
    /// the construction's transform mean deviates from slightly); in every
    /// case the age interval exceeds the delay interval by exactly one
    /// interarrival, so the stored limit works out to 1.
    pub fn delta1_transform(&self) -> Transform<T> {
        let an = self.clone();
        let lambda1 = self.params().lambda1();
        let tau1_mean = crate::transforms::numeric_mean_from_lst(&self.tau1_transform())
            .expect("tau1 finite near the origin for stable parameters");
        let limit = lambda1 * (self.mean_a1() - tau1_mean);
        let scale = self.mean_a1();
        Transform::new(limit, false, scale, move |z| an.delta1_c(z)).with_margin(lambda1)
    }
}
