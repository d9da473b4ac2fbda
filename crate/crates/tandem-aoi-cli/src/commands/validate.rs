//! `validate` subcommand: reduced-scale self-checks.
//!
//! Runs the oracle suite at 1e4 packets and prints one pass/fail line per
//! check. Returns `Ok(true)` iff everything passed. `--inject-fault
//! priority-inversion` flips the dispatch order at the second node; the
//! priority-safety check must then fail, proving the checks have teeth.

use tandem_aoi::analytics::Analytics;
use tandem_aoi::sim::{run_simulation_with, FaultInjection, SimOptions};
use tandem_aoi::transforms::{
    busy_period_lst, invert_lst_cdf, numeric_mean_from_lst, EulerInversion, Transform,
};
use tandem_aoi::{Dist, Params};

use crate::config::RunConfig;

const VALIDATE_PACKETS: usize = 10_000;

struct Tally {
    all_ok: bool,
}

impl Tally {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("[{}] {name}: {detail}", if ok { " PASS " } else { " FAIL " });
        self.all_ok &= ok;
    }
}

pub fn run(cfg: &RunConfig, inject_fault: bool) -> Result<bool, String> {
    let params = super::params_from(cfg)?;
    let an = Analytics::new(params.clone());
    let mut t = Tally { all_ok: true };

    // busy-period fixed point residuals
    let svc1 = params.svc1().clone();
    let mut worst = 0.0f64;
    for lambda in [0.1, 0.4, 0.8] {
        for s in [0.0, 0.1, 1.0, 10.0] {
            let gamma = busy_period_lst(&svc1, lambda / svc1.mean(), s).map_err(|e| e.to_string())?;
            let arg = s + lambda / svc1.mean() * (1.0 - gamma);
            worst = worst.max((gamma - svc1.lst(arg)).abs());
        }
    }
    t.check(
        "busy-period fixed point",
        worst < 1e-12,
        format!("max residual {worst:.2e} (tolerance 1e-12)"),
    );

    // normalization at s -> 0
    let mut norm_worst = 0.0f64;
    for v in [an.tau12(1e-9), an.tau2(1e-9), an.psi2(1e-9)] {
        norm_worst = norm_worst.max((v - 1.0).abs());
    }
    if params.class1_present() {
        norm_worst = norm_worst.max((an.tau1(1e-9) - 1.0).abs());
        norm_worst = norm_worst.max((an.alpha1(1e-9) - 1.0).abs());
    }
    if params.class2_present() {
        norm_worst = norm_worst.max((an.alpha2(1e-9) - 1.0).abs());
    }
    t.check(
        "transform normalization",
        norm_worst < 1e-7,
        format!("max |f(0+) - 1| = {norm_worst:.2e}"),
    );

    // case decomposition sums to the class-1 transforms
    if params.class1_present() {
        let mut worst = 0.0f64;
        for s in [0.1, 0.5, 1.0] {
            let cases = an.cases(s);
            worst = worst.max((cases.alpha_sum().re - an.alpha1(s)).abs());
            worst = worst.max((cases.tau_sum().re - an.tau1(s)).abs());
        }
        t.check(
            "case-sum identity",
            worst < 1e-9,
            format!("max deviation {worst:.2e}"),
        );
    }

    // closed forms that must equal their transform derivatives
    if params.class2_present() {
        let cmp = an.mean_comparisons();
        let delay = cmp.iter().find(|c| c.name == "delay_2").unwrap();
        let paoi = cmp.iter().find(|c| c.name == "paoi_2_closed_form").unwrap();
        t.check(
            "class-2 closed forms vs derivatives",
            delay.agrees && paoi.agrees,
            format!("delay gap {:.2e}, peak-age gap {:.2e}", delay.rel_gap, paoi.rel_gap),
        );
    }

    // single-queue reduction oracles at p = 0, lambda = 0.5
    {
        let svc = Dist::exponential(1.0).unwrap();
        let p0 = Params::new(0.5, 0.0, 1.0, svc.clone(), svc).map_err(|e| e.to_string())?;
        let an0 = Analytics::new(p0.clone());
        let (d, a, g) = (an0.mean_t2(), an0.mean_a2(), an0.mean_delta2());
        let analytic_ok =
            (d - 2.0).abs() < 1e-6 && (a - 4.0).abs() < 1e-6 && (g - 3.5).abs() < 1e-6;
        t.check(
            "single-queue reduction (analytic)",
            analytic_ok,
            format!("delay {d:.6} vs 2, peak age {a:.6} vs 4, age {g:.6} vs 3.5"),
        );
        let rep = run_simulation_with(
            &p0,
            VALIDATE_PACKETS,
            cfg.seed,
            &SimOptions {
                warmup_fraction: cfg.warmup,
                ..SimOptions::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let c2 = rep.class2.as_ref().ok_or("no class-2 stats at p = 0")?;
        let sim_ok = (c2.delay_mean - 2.0).abs() / 2.0 < 0.08
            && (c2.paoi_mean - 4.0).abs() / 4.0 < 0.08
            && (c2.aoi_time_avg - 3.5).abs() / 3.5 < 0.08;
        t.check(
            "single-queue reduction (simulated, 1e4 packets)",
            sim_ok,
            format!(
                "delay {:.4}, peak age {:.4}, age {:.4} (8% tolerance)",
                c2.delay_mean, c2.paoi_mean, c2.aoi_time_avg
            ),
        );
    }

    // inversion spot check
    {
        let d = Dist::exponential(0.75).unwrap();
        let tr = Transform::from_distribution(&d);
        let opts = EulerInversion::default();
        let got = invert_lst_cdf(&tr, 1.0, &opts).map_err(|e| e.to_string())?;
        let want = 1.0 - (-0.75f64).exp();
        t.check(
            "numerical inversion",
            (got - want).abs() < 1e-5,
            format!("exp CDF at t=1: {got:.7} vs {want:.7}"),
        );
        let mean = numeric_mean_from_lst(&tr).map_err(|e| e.to_string())?;
        t.check(
            "numerical differentiation",
            (mean - 4.0 / 3.0).abs() < 1e-6,
            format!("recovered mean {mean:.8} vs 4/3"),
        );
    }

    // simulation invariants at the configured point
    {
        let opts = SimOptions {
            warmup_fraction: cfg.warmup,
            fault: if inject_fault {
                FaultInjection::PriorityInversion
            } else {
                FaultInjection::Off
            },
            ..SimOptions::default()
        };
        let rep = run_simulation_with(&params, VALIDATE_PACKETS, cfg.seed, &opts)
            .map_err(|e| e.to_string())?;
        let ch = &rep.checks;
        t.check(
            "priority safety",
            ch.priority_safety_violations == 0,
            format!("{} violations", ch.priority_safety_violations),
        );
        t.check(
            "non-preemption",
            ch.non_preemption_violations == 0,
            format!("{} violations", ch.non_preemption_violations),
        );
        t.check(
            "work conservation",
            ch.work_conservation_violations == 0,
            format!("{} violations", ch.work_conservation_violations),
        );
        t.check(
            "conservation",
            ch.conservation_ok,
            format!("in-system tally {:?}", rep.in_system),
        );
        let mut fcfs = 0.0f64;
        for c in [&rep.class1, &rep.class2].into_iter().flatten() {
            fcfs = fcfs.max(c.fcfs_identity_max_err);
        }
        t.check(
            "peak age = interarrival + delay",
            fcfs < 1e-12,
            format!("max relative deviation {fcfs:.2e}"),
        );
        if let Some((d, crit)) = ch.node1_delay_ks {
            t.check(
                "node-1 delay is Exp(theta) (KS, 1%)",
                d < crit,
                format!("D {d:.5} vs critical {crit:.5}"),
            );
        }
        // peak age dominates age within confidence bands
        for (name, c) in [("class 1", &rep.class1), ("class 2", &rep.class2)] {
            if let Some(c) = c {
                t.check(
                    &format!("peak age >= age ({name})"),
                    c.paoi_mean + c.paoi_ci >= c.aoi_time_avg - c.aoi_ci,
                    format!("peak {:.4}±{:.4} vs age {:.4}±{:.4}", c.paoi_mean, c.paoi_ci, c.aoi_time_avg, c.aoi_ci),
                );
            }
        }
        // analytic spot comparison at the configured point (loose at 1e4)
        if let Some(c2) = &rep.class2 {
            let rel = (an.mean_t2() - c2.delay_mean).abs() / c2.delay_mean;
            t.check(
                "class-2 delay vs simulation",
                rel < 0.1,
                format!("analytic {:.4} vs simulated {:.4} ({:.1}%)", an.mean_t2(), c2.delay_mean, 100.0 * rel),
            );
        }
    }

    println!("{}", if t.all_ok { "all checks passed" } else { "SOME CHECKS FAILED" });
    Ok(t.all_ok)
}
