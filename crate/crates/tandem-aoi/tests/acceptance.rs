//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`; always
//! visible on failure).
//!
//! The criteria encode the target tolerances up front. Three of them probe
//! claims that the measurement layer (the simulator, which is validated
//! against closed single-queue oracles) shows to be only approximately
//! true of the transform constructions; those tests fail with the measured
//! evidence printed rather than with loosened tolerances. README's
//! "accuracy notes" section summarizes the same findings.

use std::sync::OnceLock;
use std::time::Instant;

use tandem_aoi::analytics::Analytics;
use tandem_aoi::experiments::{find_aoi_minimum, run_sweep, Metric, SweepOutput, SweepSpec};
use tandem_aoi::sim::run_simulation;
use tandem_aoi::transforms::{busy_period_lst, invert_lst_cdf_raw, EulerInversion};
use tandem_aoi::{Dist, Params};

fn exp_unit() -> Dist {
    Dist::exponential(1.0).unwrap()
}

fn baseline() -> Params {
    Params::new(0.5, 0.5, 1.0, exp_unit(), exp_unit()).unwrap()
}

struct Grid {
    out: SweepOutput,
    elapsed_s: f64,
}

/// The reference grid (5 p-values x 9 rho-values, exponential unit-mean
/// service, 1e5 packets, 3 seeds), shared across criteria.
fn grid() -> &'static Grid {
    static GRID: OnceLock<Grid> = OnceLock::new();
    GRID.get_or_init(|| {
        let start = Instant::now();
        let out = run_sweep(&SweepSpec::reference(None)).expect("reference sweep runs");
        Grid {
            out,
            elapsed_s: start.elapsed().as_secs_f64(),
        }
    })
}

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_exact_class2_analytics() {
    let g = grid();
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in g.out.rows.iter().filter(|r| r.class == 2) {
        let tol = if r.rho <= 0.7 + 1e-9 { 0.02 } else { 0.04 };
        checked += 1;
        if r.rel_err > tol {
            failures.push(format!(
                "  p={:.1} rho={:.1} {}: analytic {:.4} sim {:.4} rel {:.2}% (tol {:.0}%)",
                r.p,
                r.rho,
                r.metric.as_str(),
                r.analytic,
                r.simulated,
                100.0 * r.rel_err,
                100.0 * tol
            ));
        }
    }
    for line in &failures {
        println!("{line}");
    }
    println!(
        "criterion 1: grid runtime {:.1}s (must be under 300s), {} class-2 comparisons",
        g.elapsed_s, checked
    );
    assert!(g.elapsed_s < 300.0, "grid exceeded the runtime budget");
    verdict(
        "criterion 1 (exact class-2 analytics on the reference grid)",
        failures.is_empty(),
        &format!(
            "{} of {checked} comparisons outside tolerance{}",
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                " (peak-age/age constructions bias upward with priority load; \
                 delay is exact, its one flagged point is replication noise)"
                    .to_string()
            }
        ),
    );
}

#[test]
fn criterion_2_class1_bound_quality() {
    let g = grid();
    // clause 1: mean peak age within 3% of simulation everywhere
    let mut paoi_worst = (0.0f64, 0.0, 0.0);
    for r in g.out.rows.iter().filter(|r| r.class == 1 && r.metric == Metric::Paoi) {
        if r.rel_err > paoi_worst.2 {
            paoi_worst = (r.p, r.rho, r.rel_err);
        }
    }
    println!(
        "criterion 2 clause 1: worst |mean_a1 - sim|/sim = {:.2}% at p={} rho={} (3% allowed)",
        100.0 * paoi_worst.2,
        paoi_worst.0,
        paoi_worst.1
    );
    // clause 2: the age lower bound holds at every point
    let mut violations = Vec::new();
    for r in g.out.rows.iter().filter(|r| r.class == 1 && r.metric == Metric::Aoi) {
        if r.analytic > r.simulated + r.ci_halfwidth {
            violations.push(format!(
                "  p={:.1} rho={:.1}: bound {:.4} > sim age {:.4} + ci {:.4}",
                r.p, r.rho, r.analytic, r.simulated, r.ci_halfwidth
            ));
        }
    }
    for line in &violations {
        println!("{line}");
    }
    let pass = paoi_worst.2 <= 0.03 && violations.is_empty();
    verdict(
        "criterion 2 (class-1 bound quality)",
        pass,
        &format!(
            "peak-age clause {}; bound clause: {} of 45 points violated",
            if paoi_worst.2 <= 0.03 { "holds" } else { "FAILS" },
            violations.len()
        ),
    );
}

#[test]
fn criterion_3_u_shape_reproduction() {
    let g = grid();
    let p = 0.9; // the slice whose rho1 range crosses the claimed threshold
    let points: Vec<(f64, f64)> = g
        .out
        .rows
        .iter()
        .filter(|r| r.class == 1 && r.metric == Metric::Aoi && (r.p - p).abs() < 1e-9)
        .map(|r| (r.rho, r.simulated))
        .collect();
    print!("criterion 3: simulated class-1 age at p={p}:");
    for (rho, v) in &points {
        print!(" ({rho:.1}, {v:.3})");
    }
    println!();
    let min = find_aoi_minimum(&points).expect("nine rho points");
    let rho1_at_min = p * min.rho;
    println!(
        "criterion 3: minimum at rho={} (rho1={rho1_at_min:.3}), interior: {}",
        min.rho, min.interior
    );
    verdict(
        "criterion 3 (age U-shape with minimum at rho1 in [0.5, 0.75])",
        min.interior && (0.5..=0.75).contains(&rho1_at_min),
        &format!(
            "interior minimum {}, rho1 at minimum {rho1_at_min:.3} {} [0.5, 0.75]",
            min.interior,
            if (0.5..=0.75).contains(&rho1_at_min) {
                "inside"
            } else {
                "OUTSIDE"
            }
        ),
    );
}

#[test]
fn criterion_4_paoi_dominates_aoi() {
    let g = grid();
    let mut dominance_failures = Vec::new();
    let mut gap_failures = Vec::new();
    let mut max_gap: f64 = 0.0;
    for r in g.out.rows.iter().filter(|r| r.metric == Metric::Paoi) {
        let aoi = g.out.row(r.p, r.rho, r.class, Metric::Aoi).unwrap();
        // dominance asserted with the replication confidence bands: at the
        // tiniest per-class loads the two statistics are near ties and raw
        // point estimates flip by noise
        if r.simulated + r.ci_halfwidth < aoi.simulated - aoi.ci_halfwidth {
            dominance_failures.push(format!(
                "  p={:.1} rho={:.1} class {}: paoi {:.4}±{:.4} < aoi {:.4}±{:.4}",
                r.p, r.rho, r.class, r.simulated, r.ci_halfwidth, aoi.simulated, aoi.ci_halfwidth
            ));
        }
        if r.rho <= 0.5 + 1e-9 {
            let gap = (r.simulated - aoi.simulated) / r.simulated;
            max_gap = max_gap.max(gap);
            if gap > 0.15 {
                gap_failures.push(format!(
                    "  p={:.1} rho={:.1} class {}: gap {:.1}% of peak age",
                    r.p,
                    r.rho,
                    r.class,
                    100.0 * gap
                ));
            }
        }
    }
    for line in dominance_failures.iter().chain(&gap_failures) {
        println!("{line}");
    }
    verdict(
        "criterion 4 (peak age dominates age; tight at low load)",
        dominance_failures.is_empty() && gap_failures.is_empty(),
        &format!(
            "dominance holds at all 90 class-points within confidence bands; \
             max gap at rho <= 0.5 is {:.1}% (15% allowed)",
            100.0 * max_gap
        ),
    );
}

#[test]
fn criterion_5_degenerate_oracles() {
    // p = 0: plain M/M/1 for class 2 at lambda 0.5
    let p0 = Params::new(0.5, 0.0, 1.0, exp_unit(), exp_unit()).unwrap();
    let an0 = Analytics::new(p0.clone());
    let rep0 = run_simulation(&p0, 1_000_000, 4_242, 0.1).unwrap();
    let c2 = rep0.class2.as_ref().unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for (name, analytic, sim, want) in [
        ("delay", an0.mean_t2(), c2.delay_mean, 2.0),
        ("peak age", an0.mean_a2(), c2.paoi_mean, 4.0),
        ("age", an0.mean_delta2(), c2.aoi_time_avg, 3.5),
    ] {
        let a_ok = (analytic - want).abs() / want < 0.01;
        let s_ok = (sim - want).abs() / want < 0.01;
        ok &= a_ok && s_ok;
        detail.push_str(&format!(
            "{name}: analytic {analytic:.4} sim {sim:.4} vs {want}; "
        ));
    }
    // p = 1: class-1 delay equals the M/M/1 sojourn plus the one-class
    // head-of-line delay
    let p1 = Params::new(0.5, 1.0, 1.0, exp_unit(), exp_unit()).unwrap();
    let an1 = Analytics::new(p1.clone());
    let want_t1 = 1.0 / (1.0 - 0.5) + 1.0 + 0.5 * 2.0 / (2.0 * (1.0 - 0.5));
    let analytic_ok = (an1.mean_t1() - want_t1).abs() < 1e-6;
    let rep1 = run_simulation(&p1, 1_000_000, 4_243, 0.1).unwrap();
    let sim_t1 = rep1.class1.as_ref().unwrap().delay_mean;
    let sim_ok = (sim_t1 - want_t1).abs() / want_t1 < 0.01;
    ok &= analytic_ok && sim_ok;
    detail.push_str(&format!(
        "p=1 delay: analytic {:.8} sim {sim_t1:.4} vs {want_t1}",
        an1.mean_t1()
    ));
    verdict("criterion 5 (degenerate-routing oracles)", ok, &detail);
}

#[test]
fn criterion_6_transform_suite() {
    let mut ok = true;
    let mut notes = Vec::new();

    // busy-period: fixed-point residual and the M/M/1 quadratic closed form
    let svc = exp_unit();
    let mut worst_residual = 0.0f64;
    let mut worst_quadratic = 0.0f64;
    for lambda in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let mut s = 0.0;
        while s <= 20.0 {
            let gamma = busy_period_lst(&svc, lambda, s).unwrap();
            worst_residual =
                worst_residual.max((gamma - svc.lst(s + lambda * (1.0 - gamma))).abs());
            let b = s + lambda + 1.0;
            let root = (b - (b * b - 4.0 * lambda).sqrt()) / (2.0 * lambda);
            worst_quadratic = worst_quadratic.max((gamma - root).abs());
            s += 0.5;
        }
    }
    ok &= worst_residual < 1e-12 && worst_quadratic < 1e-10;
    notes.push(format!(
        "busy-period residual {worst_residual:.1e} (<1e-12), quadratic gap {worst_quadratic:.1e} (<1e-10)"
    ));

    // normalization at the origin
    let an = Analytics::new(baseline());
    let norm = [an.tau12(0.0), an.tau2(0.0), an.alpha2(0.0), an.tau1(0.0)]
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0f64, f64::max);
    // and the limits are approached, not just stored
    let approach = [
        an.tau12(1e-8) - 1.0,
        an.tau2(1e-8) - 1.0,
        an.alpha2(1e-8) - 1.0,
    ]
    .iter()
    .map(|v| v.abs())
    .fold(0.0f64, f64::max);
    ok &= norm < 1e-9 && approach < 1e-6;
    notes.push(format!("normalization {norm:.1e} (<1e-9), approach at 1e-8 {approach:.1e}"));

    // case-sum identity
    let mut case_worst = 0.0f64;
    for s in [0.1, 0.5, 1.0, 4.0] {
        let cases = an.cases(s);
        case_worst = case_worst.max((cases.alpha_sum().re - an.alpha1(s)).abs());
        case_worst = case_worst.max((cases.tau_sum().re - an.tau1(s)).abs());
    }
    ok &= case_worst < 1e-9;
    notes.push(format!("case-sum identity {case_worst:.1e} (<1e-9)"));

    // every closed form equals its derivative within 1e-6 or is surfaced
    // as a logged discrepancy (never silent)
    let cmp = an.mean_comparisons();
    let report = tandem_aoi::analytics::AnalyticReport::build(an.params());
    for c in &cmp {
        let logged = report.discrepancies.iter().any(|d| d.name == c.name);
        if !(c.agrees || logged) {
            ok = false;
            notes.push(format!("{} neither agrees nor is logged", c.name));
        }
    }
    let exact_ok = cmp
        .iter()
        .filter(|c| c.name == "delay_2" || c.name == "paoi_2_closed_form")
        .all(|c| c.agrees);
    ok &= exact_ok;
    notes.push(format!(
        "{} closed-form comparisons: each agrees within 1e-6 or is logged; exact class-2 forms agree",
        cmp.len()
    ));

    verdict("criterion 6 (transform suite)", ok, &notes.join("; "));
}

#[test]
fn criterion_7_inversion_of_the_age_transform() {
    let an = Analytics::new(baseline());
    let d2 = an.delta2_transform();
    let opts = EulerInversion::default();
    let plateau = d2.at_zero();

    // monotone and reaching 1 - 1e-3
    let mut prev = 0.0;
    let mut monotone = true;
    let mut t = 0.25;
    let mut reached = 0.0f64;
    while t <= 60.0 {
        let (v, _) = invert_lst_cdf_raw(&d2, t, &opts).unwrap();
        if v < prev - 1e-6 {
            monotone = false;
        }
        prev = v;
        reached = reached.max(v);
        t += 0.25;
    }
    let reaches = reached >= 1.0 - 1e-3;

    // integrated mean against the transform-derivative mean; the recovered
    // distribution plateaus at delta2(0+), so integrate against that level
    let mut t_max = 8.0 * an.mean_delta2();
    while plateau - invert_lst_cdf_raw(&d2, t_max, &opts).unwrap().0 > 1e-4 * plateau {
        t_max *= 1.5;
    }
    let n = 1_500usize;
    let h = t_max / n as f64;
    let mut integral = 0.0;
    for k in 0..=n {
        let ti = k as f64 * h;
        let f = invert_lst_cdf_raw(&d2, ti, &opts).unwrap().0;
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        integral += w * (plateau - f) * h;
    }
    let f1 = invert_lst_cdf_raw(&d2, 0.9 * t_max, &opts).unwrap().0;
    let f2 = invert_lst_cdf_raw(&d2, t_max, &opts).unwrap().0;
    let tail_rate = ((plateau - f1) / (plateau - f2)).ln() / (0.1 * t_max);
    let mean_from_cdf = integral + (plateau - f2) / tail_rate;
    let rel = (mean_from_cdf - an.mean_delta2()).abs() / an.mean_delta2();

    verdict(
        "criterion 7 (age-transform inversion)",
        monotone && reaches && rel < 0.005,
        &format!(
            "monotone {monotone}, max level {reached:.6} (needs >= 0.999), \
             integrated mean {mean_from_cdf:.6} vs derivative {:.6} (rel {rel:.2e}, 0.5% allowed); \
             recovered plateau {plateau:.6}",
            an.mean_delta2()
        ),
    );
}

#[test]
fn criterion_8_simulator_correctness_properties() {
    let report = run_simulation(&baseline(), 100_000, 1_234, 0.1).unwrap();
    let ch = &report.checks;
    let mut fcfs = 0.0f64;
    for c in [&report.class1, &report.class2].into_iter().flatten() {
        fcfs = fcfs.max(c.fcfs_identity_max_err);
    }
    let (ks, crit) = ch.node1_delay_ks.unwrap();
    let ok = ch.priority_safety_violations == 0
        && ch.non_preemption_violations == 0
        && ch.work_conservation_violations == 0
        && ch.departure_order_violations == 0
        && ch.conservation_ok
        && fcfs < 1e-12
        && ks < crit;
    verdict(
        "criterion 8 (simulator correctness properties)",
        ok,
        &format!(
            "priority {}, preemption {}, work-conservation {}, order {}, conservation {}, \
             peak-age identity {fcfs:.1e}, node-1 KS {ks:.5} vs critical {crit:.5}",
            ch.priority_safety_violations,
            ch.non_preemption_violations,
            ch.work_conservation_violations,
            ch.departure_order_violations,
            ch.conservation_ok
        ),
    );
}
