//! Closed-form means, bounds, and their agreement with the transform
//! derivatives.
//!
//! For every metric the authoritative value is the numeric derivative of
//! the corresponding transform at the origin; closed-form expressions are
//! evaluated alongside and any disagreement beyond 1e-6 relative is
//! surfaced through [`MeanComparison`] rather than silently absorbed.
//! Two expressions are known to deviate and are kept only for comparison:
//! the long class-1 peak-age expression (it descends from the compact
//! transform variant's algebra and matches neither transform derivative)
//! and the expanded class-1 age expression. The class-2 closed forms agree
//! with their derivatives to full precision.

use num_complex::Complex;

use super::Analytics;
use crate::transforms::{numeric_mean_from_lst, Transform};
use crate::{num, Real};

/// A closed-form-vs-derivative agreement record.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanComparison<T: Real> {
    pub name: &'static str,
    pub closed_form: T,
    pub derivative: T,
    pub rel_gap: T,
    /// Agreement within 1e-6 relative.
    pub agrees: bool,
}

fn compare<T: Real>(name: &'static str, closed_form: T, derivative: T) -> MeanComparison<T> {
    let rel_gap = (closed_form - derivative).abs() / T::one().max(derivative.abs());
    MeanComparison {
        name,
        closed_form,
        derivative,
        rel_gap,
        agrees: rel_gap < num(1e-6),
    }
}

/// Mean-value bundle for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Means<T: Real> {
    pub delay: T,
    pub paoi: T,
    pub aoi: T,
}

impl<T: Real> Analytics<T> {
    /// Mean residual-work term `W0 = (l1 b1^(2) + l2 b2^(2)) / 2`.
    pub(crate) fn w0(&self) -> T {
        let p = self.params();
        (p.lambda1() * p.svc1().moment2() + p.lambda2() * p.svc2().moment2()) / num::<T>(2.0)
    }

    /// Mean class-1 system delay: node-1 M/M/1 sojourn plus node-2
    /// head-of-line delay.
    ///
    /// The node-1 waiting term uses the node-1 utilization `lambda1/mu`, so
    /// the first two terms reduce to the M/M/1 mean `1/(mu - lambda1)`
    /// exactly; the node-2 term is the high-priority mean wait plus `b1`.
    pub fn mean_t1(&self) -> T {
        let p = self.params();
        let two = num::<T>(2.0);
        let b = p.b_node1();
        let b2nd = two * b * b; // second moment of the exponential node-1 service
        let node1 = b + p.lambda1() * b2nd / (two * (T::one() - p.rho11()));
        let node2 = p.svc1().mean() + self.w0() / (T::one() - p.rho1());
        node1 + node2
    }

    /// Mean class-2 system delay (exact: low-priority mean wait plus `b2`).
    pub fn mean_t2(&self) -> T {
        let p = self.params();
        p.svc2().mean() + self.w0() / ((T::one() - p.rho1()) * (T::one() - p.rho()))
    }

    /// Mean class-1 peak age, as the numeric derivative of the case-sum
    /// peak-age transform.
    pub fn mean_a1(&self) -> T {
        numeric_mean_from_lst(&self.alpha1_transform())
            .expect("alpha1 finite near the origin for stable parameters")
    }

    /// Long closed-form class-1 peak-age expression, kept for comparison.
    /// It tracks the compact transform variant rather than the case sum, so
    /// it undershoots the derivative value.
    pub fn mean_a1_closed_form(&self) -> T {
        let p = self.params();
        let one = T::one();
        let l1 = p.lambda1();
        let b = p.b_node1();
        let b1 = p.svc1().mean();
        let rho11 = p.rho11();
        let rho2 = p.rho2();
        let bt2 = p.svc2().residual_mean();
        let occ = one - rho2 + rho2 * bt2;
        let t12_l1 = self.tau12(l1);
        let t12_mu = self.tau12(p.mu());
        let e_t11 = one / p.theta();
        let e_t12 = b1 + self.w0() / (one - p.rho1());

        (one / l1 + b1 + rho2 * bt2) * t12_l1
            - rho11 * (b + b * t12_mu) * occ
            + (one - rho11) * (b1 + e_t12 * t12_mu)
            + rho11 * occ * (b1 + e_t11 + e_t12 * t12_mu)
            + rho11 * (b1 + e_t11 + e_t12 * (one - t12_mu))
    }

    /// Closed-form lower bound on the mean class-1 age.
    pub fn mean_delta1_lower(&self) -> T {
        let p = self.params();
        let one = T::one();
        let l1 = p.lambda1();
        let mu = p.mu();
        let theta = p.theta();
        let rho11 = p.rho11();
        let rho1 = p.rho1();
        let b1 = p.svc1().mean();
        let t12_l1 = self.tau12(l1);
        let e_t1 = self.mean_t1();
        let tail = one / theta - rho11 / mu + rho11 / theta + one / l1 + mu / (l1 * l1)
            - one / (rho11 * rho11)
            - one / rho11;
        b1 + t12_l1 / l1 + t12_l1 * e_t1 + rho1 * rho1 * e_t1 + rho11 * rho11 * tail
    }

    /// Mean class-1 age from the assembled age transform (informational;
    /// the reported class-1 age statistic is the lower bound).
    pub fn mean_delta1_assembly(&self) -> T {
        numeric_mean_from_lst(&self.delta1_transform())
            .expect("delta1 finite near the origin for stable parameters")
    }

    /// Mean class-2 peak age, as the numeric derivative of the class-2
    /// peak-age transform.
    pub fn mean_a2(&self) -> T {
        numeric_mean_from_lst(&self.alpha2_transform())
            .expect("alpha2 finite near the origin for stable parameters")
    }

    /// Closed-form class-2 mean peak age via the residual busy-period
    /// algebra; agrees with the derivative to full numeric precision.
    ///
    /// `E[A2] = b2 + psi2(l2)/l2 + E[W2] + E[G2] + rho1 psi2(l2) E[G1~]`
    /// with `E[G2] = b2/(1-rho1)` and the residual busy-period mean
    /// `E[G1~] = b1^(2) / (2 b1 (1-rho1)^2)`.
    pub fn mean_a2_closed_form(&self) -> T {
        let p = self.params();
        let one = T::one();
        let two = num::<T>(2.0);
        let l2 = p.lambda2();
        let b2 = p.svc2().mean();
        let rho1 = p.rho1();
        let psi_l2 = self.psi2(l2);
        let e_w2 = self.w0() / ((one - rho1) * (one - p.rho()));
        let e_g2 = b2 / (one - rho1);
        let residual_busy =
            p.svc1().moment2() / (two * p.svc1().mean() * (one - rho1) * (one - rho1));
        b2 + psi_l2 / l2 + e_w2 + e_g2 + rho1 * psi_l2 * residual_busy
    }

    /// Mean class-2 age from the assembled age transform.
    pub fn mean_delta2(&self) -> T {
        numeric_mean_from_lst(&self.delta2_transform())
            .expect("delta2 finite near the origin for stable parameters")
    }

    /// Class means bundle; class-1 `aoi` is the lower bound, class-2 `aoi`
    /// the assembled-age mean.
    pub fn means_class1(&self) -> Means<T> {
        Means {
            delay: self.mean_t1(),
            paoi: self.mean_a1(),
            aoi: self.mean_delta1_lower(),
        }
    }

    pub fn means_class2(&self) -> Means<T> {
        Means {
            delay: self.mean_t2(),
            paoi: self.mean_a2(),
            aoi: self.mean_delta2(),
        }
    }

    /// All closed-form-vs-derivative agreement records for the present
    /// classes.
    pub fn mean_comparisons(&self) -> Vec<MeanComparison<T>> {
        let mut out = Vec::new();
        if self.params().class1_present() {
            let t1_deriv = numeric_mean_from_lst(&self.tau1_transform())
                .expect("tau1 finite near origin");
            out.push(compare("delay_1", self.mean_t1(), t1_deriv));
            out.push(compare("paoi_1_closed_form", self.mean_a1_closed_form(), self.mean_a1()));
            let expanded = self.delta1_expanded_mean();
            out.push(compare("aoi_1_expanded_form", expanded, self.mean_delta1_assembly()));
        }
        if self.params().class2_present() {
            let t2_deriv = numeric_mean_from_lst(&self.tau2_transform())
                .expect("tau2 finite near origin");
            out.push(compare("delay_2", self.mean_t2(), t2_deriv));
            out.push(compare("paoi_2_closed_form", self.mean_a2_closed_form(), self.mean_a2()));
            let expanded = self.delta2_expanded_mean();
            out.push(compare("aoi_2_expanded_form", expanded, self.mean_delta2()));
        }
        out
    }

    fn delta1_expanded_mean(&self) -> T {
        let an = self.clone();
        let scale = self.mean_a1();
        let near_zero = self.delta1_expanded_c(Complex::from(num::<T>(1e-8))).re;
        let t = Transform::new(near_zero, false, scale, move |z| an.delta1_expanded_c(z));
        numeric_mean_from_lst(&t).unwrap_or(T::nan())
    }

    fn delta2_expanded_mean(&self) -> T {
        let an = self.clone();
        let scale = self.mean_a2();
        let near_zero = self.delta2_expanded_c(Complex::from(num::<T>(1e-8))).re;
        let t = Transform::new(near_zero, false, scale, move |z| an.delta2_expanded_c(z));
        numeric_mean_from_lst(&t).unwrap_or(T::nan())
    }
}
