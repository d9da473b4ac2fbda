//! `sweep` subcommand: full grid comparison with CSV panels.

use tandem_aoi::experiments::{run_sweep, SweepSpec};

use crate::config::RunConfig;

pub fn run(cfg: &RunConfig) -> Result<(), String> {
    let svc1 = cfg.service(1).map_err(|e| e.to_string())?;
    let svc2 = cfg.service(2).map_err(|e| e.to_string())?;
    let spec = SweepSpec {
        p_values: cfg.p_grid.clone(),
        rho_values: cfg.rho_grid.clone(),
        mu: cfg.mu,
        svc1,
        svc2,
        n_packets: cfg.packets,
        seeds: cfg.sweep_seeds.clone(),
        warmup_fraction: cfg.warmup,
        out_dir: Some(cfg.out_dir()),
    };
    let out = run_sweep(&spec).map_err(|e| e.to_string())?;
    println!(
        "swept {} points ({} rows, {} skipped)",
        spec.p_values.len() * spec.rho_values.len(),
        out.rows.len(),
        out.skipped.len()
    );
    for s in &out.skipped {
        println!("  skipped p={} rho={}: {}", s.p, s.rho, s.reason);
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
