//! Bundled analytic results for one parameter point.

use serde::Serialize;

use super::{Analytics, SystemParams};
use crate::transforms::{invert_lst_cdf, EulerInversion};
use crate::{num, Real};

/// How a reported class-level figure is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValueKind {
    /// Exact consequence of the model.
    Exact,
    /// Rests on the independence assumption for the priority class.
    Approximate,
    /// A one-sided bound.
    LowerBound,
}

/// Closed-form-vs-derivative disagreement surfaced in a report.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub name: String,
    pub closed_form: f64,
    pub derivative: f64,
    pub rel_gap: f64,
}

/// Per-class analytic metrics.
#[derive(Debug, Clone, Serialize)]
pub struct ClassAnalytics {
    pub mean_delay: f64,
    pub mean_paoi: f64,
    /// Class 1: lower bound on the mean age. Class 2: mean age.
    pub mean_aoi: f64,
    pub aoi_kind: ValueKind,
    pub label: &'static str,
    /// `|1 - alpha(0)|` of the class peak-age transform actually used
    /// (the stored limit; zero when the case weights telescope exactly).
    pub paoi_normalization_deficit: f64,
    /// `delta(0+) - 1`: total-mass excess of the assembled age transform.
    /// Zero means the peak-age and delay constructions are mutually
    /// consistent; the class-2 value grows with priority load.
    pub age_mass_excess: f64,
    /// Class 1 only: deficit of the compact peak-age variant,
    /// `1 - tau12(lambda1)`.
    pub compact_paoi_deficit: Option<f64>,
    /// Optional CDF samples `(t, F_T(t), F_A(t), F_Delta(t))`.
    pub cdf: Option<Vec<CdfRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CdfRow {
    pub t: f64,
    pub delay: f64,
    pub paoi: f64,
    pub aoi: f64,
}

/// Analytic report for one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticReport {
    pub lambda: f64,
    pub p: f64,
    pub mu: f64,
    pub rho: f64,
    pub rho11: f64,
    pub class1: Option<ClassAnalytics>,
    pub class2: Option<ClassAnalytics>,
    pub discrepancies: Vec<Discrepancy>,
}

impl AnalyticReport {
    /// Evaluates every mean and agreement record for the point. CDF grids
    /// are attached separately via [`AnalyticReport::with_cdf_grid`].
    pub fn build<T: Real>(params: &SystemParams<T>) -> Self {
        let an = Analytics::new(params.clone());
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let class1 = params.class1_present().then(|| {
            let m = an.means_class1();
            ClassAnalytics {
                mean_delay: f(m.delay),
                mean_paoi: f(m.paoi),
                mean_aoi: f(m.aoi),
                aoi_kind: ValueKind::LowerBound,
                label: "approximate (assumes independence across nodes; \
                        second node found clear of non-priority work with \
                        probability 1 - rho2)",
                paoi_normalization_deficit: f(
                    (T::one() - an.alpha1_transform().at_zero()).abs(),
                ),
                age_mass_excess: f(an.delta1_transform().at_zero() - T::one()),
                compact_paoi_deficit: Some(f(
                    T::one() - an.tau12(params.lambda1())
                )),
                cdf: None,
            }
        });
        let class2 = params.class2_present().then(|| {
            let m = an.means_class2();
            ClassAnalytics {
                mean_delay: f(m.delay),
                mean_paoi: f(m.paoi),
                mean_aoi: f(m.aoi),
                aoi_kind: ValueKind::Exact,
                label: "exact (delay and peak-age case split are exact; the \
                        busy-state weighting is stationary)",
                paoi_normalization_deficit: f(
                    (T::one() - an.alpha2_transform().at_zero()).abs(),
                ),
                age_mass_excess: f(an.delta2_transform().at_zero() - T::one()),
                compact_paoi_deficit: None,
                cdf: None,
            }
        });
        let discrepancies = an
            .mean_comparisons()
            .into_iter()
            .filter(|c| !c.agrees)
            .map(|c| Discrepancy {
                name: c.name.to_string(),
                closed_form: f(c.closed_form),
                derivative: f(c.derivative),
                rel_gap: f(c.rel_gap),
            })
            .collect();
        AnalyticReport {
            lambda: f(params.lambda()),
            p: f(params.p()),
            mu: f(params.mu()),
            rho: f(params.rho()),
            rho11: f(params.rho11()),
            class1,
            class2,
            discrepancies,
        }
    }

    /// Adds per-class CDF samples on the given time grid by numerically
    /// inverting the delay, peak-age and age transforms.
    pub fn with_cdf_grid<T: Real>(mut self, params: &SystemParams<T>, grid: &[f64]) -> Self {
        let an = Analytics::new(params.clone());
        let opts = EulerInversion::default();
        let invert = |tr: &crate::transforms::Transform<T>, t: f64| -> f64 {
            invert_lst_cdf(tr, num::<T>(t), &opts)
                .map(|v| v.to_f64().unwrap_or(f64::NAN))
                .unwrap_or(f64::NAN)
        };
        if let Some(c1) = self.class1.as_mut() {
            let (td, ta, tg) = (
                an.tau1_transform(),
                an.alpha1_transform(),
                an.delta1_transform(),
            );
            c1.cdf = Some(
                grid.iter()
                    .map(|&t| CdfRow {
                        t,
                        delay: invert(&td, t),
                        paoi: invert(&ta, t),
                        aoi: invert(&tg, t),
                    })
                    .collect(),
            );
        }
        if let Some(c2) = self.class2.as_mut() {
            let (td, ta, tg) = (
                an.tau2_transform(),
                an.alpha2_transform(),
                an.delta2_transform(),
            );
            c2.cdf = Some(
                grid.iter()
                    .map(|&t| CdfRow {
                        t,
                        delay: invert(&td, t),
                        paoi: invert(&ta, t),
                        aoi: invert(&tg, t),
                    })
                    .collect(),
            );
        }
        self
    }
}
