//! Non-priority class peak-age and age transforms.
//!
//! A non-priority packet can start service only when the second node holds
//! no priority work: at the end of the predecessor's waiting-plus-completion
//! interval `Psi = W2 + G2`, at the end of an ongoing class-1 busy period,
//! or on arrival at an empty node. The peak-age split is: interarrival
//! longer than `Psi` and node found empty; interarrival longer than `Psi`
//! and node busy with priority work (wait for the residual busy period);
//! interarrival shorter than `Psi` (the predecessor still pins the node).

use num_complex::Complex;
use num_traits::One;

use super::{is_zero, Analytics};
use crate::transforms::Transform;
use crate::Real;

impl<T: Real> Analytics<T> {
    /// Class-2 peak-age transform. Exactly normalized: the three case
    /// weights telescope to 1 at `s = 0`.
    pub fn alpha2_c(&self, z: Complex<T>) -> Complex<T> {
        if is_zero(z) {
            return Complex::one();
        }
        let p = self.params();
        let l2 = p.lambda2();
        let rho1 = p.rho1();
        let one = T::one();
        let lc = Complex::from(l2);
        let interarrival = lc / (lc + z);
        let psi_shift = self.psi2_c(z + lc);
        let empty = interarrival * psi_shift * (one - rho1);
        let pinned = self.psi2_c(z) - psi_shift;
        let busy = interarrival * psi_shift * self.busy_residual(z) * rho1;
        (empty + pinned + busy) * p.svc2().lst_complex(z)
    }

    pub fn alpha2(&self, s: T) -> T {
        self.alpha2_c(Complex::from(s)).re
    }

    /// Class-2 age transform from the stationary-age identity.
    pub fn delta2_c(&self, z: Complex<T>) -> Complex<T> {
        let l2 = self.params().lambda2();
        (self.tau2_c(z) - self.alpha2_c(z)) * l2 / z
    }

    pub fn delta2(&self, s: T) -> T {
        self.delta2_c(Complex::from(s)).re
    }

    /// Expanded single-expression age variant, retained for regression
    /// comparison (the ambiguous interarrival denominators are read as
    /// `lambda2 + s`). Does not agree with the assembly form; see report
    /// discrepancies.
    pub fn delta2_expanded_c(&self, z: Complex<T>) -> Complex<T> {
        let p = self.params();
        let l1 = p.lambda1();
        let l2 = p.lambda2();
        let rho1 = p.rho1();
        let rho2 = p.rho2();
        let one = Complex::<T>::one();
        let lc = Complex::from(l2);

        let barg = z + self.busy_deficit(z) * l1;
        let mean_g2 = p.svc2().mean() / (T::one() - rho1);
        let g2_residual = p.svc2().lst_deficit_complex(barg) / (z * mean_g2);
        let first = self.tau2_c(z) * g2_residual * (rho2 / (T::one() - rho1));

        let interarrival = lc / (lc + z);
        let tail = interarrival * (one - self.busy_residual(z)) * (lc / z) * rho1;
        let second = self.psi2_c(z + lc) * p.svc2().lst_complex(z) * (interarrival + tail);
        first + second
    }

    // -- transform objects --------------------------------------------------

    pub fn alpha2_transform(&self) -> Transform<T> {
        let an = self.clone();
        let lambda2 = self.params().lambda2();
        let scale = T::one() / lambda2 + self.mean_t2();
        Transform::new(T::one(), true, scale, move |z| an.alpha2_c(z)).with_margin(lambda2)
    }

    /// Age transform with its finite limit at 0 stored. The limit is
    /// `lambda2 * (E[A2] - E[T2])`, which the case construction leaves
    /// slightly above 1 at high priority load; the deviation is a measured
    /// output, not an error.
    pub fn delta2_transform(&self) -> Transform<T> {
        let an = self.clone();
        let lambda2 = self.params().lambda2();
        let limit = lambda2 * (self.mean_a2() - self.mean_t2());
        let scale = self.mean_a2();
        Transform::new(limit, false, scale, move |z| an.delta2_c(z)).with_margin(lambda2)
    }
}
