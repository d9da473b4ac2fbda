//! Minimal analytic-vs-simulated comparison at one parameter point.

use tandem_aoi::sim::run_simulation;
use tandem_aoi::{Analytics, Dist, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let svc = Dist::exponential(1.0)?;
    let params = Params::new(0.5, 0.5, 1.0, svc.clone(), svc)?;

    let an = Analytics::new(params.clone());
    let analytic_delay = an.mean_t1(); // 3.0
    let analytic_peak_age = an.mean_a1(); // 6.975

    let report = run_simulation(&params, 100_000, 7, 0.1)?;
    let sim = report.class1.as_ref().unwrap();
    assert!((sim.delay_mean - analytic_delay).abs() / analytic_delay < 0.02);
    assert!(sim.paoi_mean < analytic_peak_age * 1.03);
    println!(
        "class-1 delay: analytic {analytic_delay:.4}, simulated {:.4}",
        sim.delay_mean
    );
    println!(
        "class-1 peak age: analytic {analytic_peak_age:.4}, simulated {:.4}",
        sim.paoi_mean
    );
    Ok(())
}
