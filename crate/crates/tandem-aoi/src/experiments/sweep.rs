//! Grid sweep execution and CSV/summary emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{Analytics, SystemParams};
use crate::sim::{run_simulation, SimError};
use crate::transforms::ServiceDistribution;

/// What to sweep. `lambda` is derived per grid point from `rho`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub p_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    /// Node-1 service rate.
    pub mu: f64,
    pub svc1: ServiceDistribution<f64>,
    pub svc2: ServiceDistribution<f64>,
    pub n_packets: usize,
    /// One replication per seed; common across grid points.
    pub seeds: Vec<u64>,
    pub warmup_fraction: f64,
    /// Destination for CSV panels and the summary; in-memory only if None.
    pub out_dir: Option<PathBuf>,
}

impl SweepSpec {
    /// The reference study setup: p in {0.1,...,0.9}, rho in {0.1,...,0.9},
    /// exponential unit-mean service everywhere, 1e5 packets, 3 seeds.
    pub fn reference(out_dir: Option<PathBuf>) -> Self {
        let svc = ServiceDistribution::exponential(1.0).unwrap();
        SweepSpec {
            p_values: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            rho_values: (1..=9).map(|i| i as f64 / 10.0).collect(),
            mu: 1.0,
            svc1: svc.clone(),
            svc2: svc,
            n_packets: 100_000,
            seeds: vec![101, 211, 307],
            warmup_fraction: 0.1,
            out_dir,
        }
    }

    /// Generation rate hitting the target utilization at this `p`.
    pub fn lambda_for(&self, p: f64, rho: f64) -> f64 {
        rho / (p * self.svc1.mean() + (1.0 - p) * self.svc2.mean())
    }

    fn validate(&self) -> Result<(), SweepError> {
        if self.p_values.is_empty() {
            return Err(SweepError::BadSpec("empty p grid".into()));
        }
        if self.rho_values.is_empty() {
            return Err(SweepError::BadSpec("empty rho grid".into()));
        }
        if self.seeds.is_empty() {
            return Err(SweepError::BadSpec("no seeds".into()));
        }
        if !self.mu.is_finite() || self.mu <= 0.0 {
            return Err(SweepError::BadSpec(format!("mu = {} not positive", self.mu)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Metric {
    Delay,
    Paoi,
    Aoi,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Delay => "delay",
            Metric::Paoi => "paoi",
            Metric::Aoi => "aoi",
        }
    }

    pub const ALL: [Metric; 3] = [Metric::Delay, Metric::Paoi, Metric::Aoi];
}

/// How to read the analytic side of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValueLabel {
    Exact,
    Approximate,
    LowerBound,
}

impl ValueLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueLabel::Exact => "exact",
            ValueLabel::Approximate => "approximate",
            ValueLabel::LowerBound => "lower-bound",
        }
    }
}

/// One (point, class, metric) comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub p: f64,
    pub rho: f64,
    pub class: u8,
    pub metric: Metric,
    pub analytic: f64,
    pub simulated: f64,
    pub ci_halfwidth: f64,
    /// `|analytic - simulated| / simulated`.
    pub rel_err: f64,
    pub label: ValueLabel,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedPoint {
    pub p: f64,
    pub rho: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub rows: Vec<ComparisonRow>,
    pub skipped: Vec<SkippedPoint>,
    /// Files written (empty when no out_dir was given).
    pub files: Vec<PathBuf>,
}

impl SweepOutput {
    pub fn row(&self, p: f64, rho: f64, class: u8, metric: Metric) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| {
            r.class == class
                && r.metric == metric
                && (r.p - p).abs() < 1e-12
                && (r.rho - rho).abs() < 1e-12
        })
    }
}

#[derive(Debug)]
pub enum SweepError {
    BadSpec(String),
    Sim(SimError),
    Io(std::io::Error),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::BadSpec(msg) => write!(f, "invalid sweep spec: {msg}"),
            SweepError::Sim(e) => write!(f, "simulation failed: {e}"),
            SweepError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for SweepError {}

impl From<SimError> for SweepError {
    fn from(e: SimError) -> Self {
        SweepError::Sim(e)
    }
}

impl From<std::io::Error> for SweepError {
    fn from(e: std::io::Error) -> Self {
        SweepError::Io(e)
    }
}

struct PointResult {
    rows: Vec<ComparisonRow>,
    skipped: Option<SkippedPoint>,
}

/// (delay, paoi, aoi) triple with matching confidence half-widths, per
/// class where present.
type ClassTriples = [Option<([f64; 3], [f64; 3])>; 2];

/// Simulated per-class triple (delay, paoi, aoi) averaged over seeds, with
/// across-seed confidence half-widths (single-seed runs fall back to the
/// run's batch-means interval).
fn simulate_point(params: &SystemParams<f64>, spec: &SweepSpec) -> Result<ClassTriples, SimError> {
    let mut per_class: [Vec<[f64; 3]>; 2] = [Vec::new(), Vec::new()];
    let mut single_ci: [[f64; 3]; 2] = [[f64::NAN; 3]; 2];
    for &seed in &spec.seeds {
        let report = run_simulation(params, spec.n_packets, seed, spec.warmup_fraction)?;
        for class in [1u8, 2u8] {
            if let Some(stats) = report.class(class) {
                per_class[(class - 1) as usize].push([
                    stats.delay_mean,
                    stats.paoi_mean,
                    stats.aoi_time_avg,
                ]);
                single_ci[(class - 1) as usize] =
                    [stats.delay_ci, stats.paoi_ci, stats.aoi_ci];
            }
        }
    }
    let mut out: ClassTriples = [None, None];
    for c in 0..2 {
        let reps = &per_class[c];
        if reps.is_empty() {
            continue;
        }
        let n = reps.len() as f64;
        let mut mean = [0.0f64; 3];
        for rep in reps {
            for k in 0..3 {
                mean[k] += rep[k] / n;
            }
        }
        let ci = if reps.len() >= 2 {
            let mut hw = [0.0f64; 3];
            for (k, h) in hw.iter_mut().enumerate() {
                let means: Vec<f64> = reps.iter().map(|r| r[k]).collect();
                *h = crate::sim::halfwidth_of_means(&means);
            }
            hw
        } else {
            single_ci[c]
        };
        out[c] = Some((mean, ci));
    }
    Ok(out)
}

fn analyze_point(params: &SystemParams<f64>) -> [Option<([f64; 3], ValueLabel)>; 2] {
    let an = Analytics::new(params.clone());
    let c1 = params.class1_present().then(|| {
        let m = an.means_class1();
        ([m.delay, m.paoi, m.aoi], ValueLabel::Approximate)
    });
    let c2 = params.class2_present().then(|| {
        let m = an.means_class2();
        ([m.delay, m.paoi, m.aoi], ValueLabel::Exact)
    });
    [c1, c2]
}

fn run_point(spec: &SweepSpec, p: f64, rho: f64) -> PointResult {
    let lambda = spec.lambda_for(p, rho);
    let params = match SystemParams::new(lambda, p, spec.mu, spec.svc1.clone(), spec.svc2.clone())
    {
        Ok(params) => params,
        Err(e) => {
            return PointResult {
                rows: Vec::new(),
                skipped: Some(SkippedPoint {
                    p,
                    rho,
                    reason: e.to_string(),
                }),
            }
        }
    };
    let analytic = analyze_point(&params);
    let simulated = match simulate_point(&params, spec) {
        Ok(sim) => sim,
        Err(e) => {
            return PointResult {
                rows: Vec::new(),
                skipped: Some(SkippedPoint {
                    p,
                    rho,
                    reason: e.to_string(),
                }),
            }
        }
    };
    let mut rows = Vec::new();
    for c in 0..2usize {
        let (Some((ana, label)), Some((sim, ci))) = (&analytic[c], &simulated[c]) else {
            continue;
        };
        for (k, metric) in Metric::ALL.into_iter().enumerate() {
            let label = match (metric, label) {
                // the class-1 age figure is a bound, not an estimate
                (Metric::Aoi, ValueLabel::Approximate) => ValueLabel::LowerBound,
                (_, l) => *l,
            };
            rows.push(ComparisonRow {
                p,
                rho,
                class: (c + 1) as u8,
                metric,
                analytic: ana[k],
                simulated: sim[k],
                ci_halfwidth: ci[k],
                rel_err: (ana[k] - sim[k]).abs() / sim[k],
                label,
            });
        }
    }
    PointResult {
        rows,
        skipped: None,
    }
}

/// Runs the sweep. Grid points execute concurrently; output row order is
/// `(p, rho, class, metric)` regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput, SweepError> {
    spec.validate()?;
    let grid: Vec<(f64, f64)> = spec
        .p_values
        .iter()
        .flat_map(|&p| spec.rho_values.iter().map(move |&rho| (p, rho)))
        .collect();
    let results: Vec<PointResult> = grid
        .par_iter()
        .map(|&(p, rho)| run_point(spec, p, rho))
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        rows.extend(r.rows);
        skipped.extend(r.skipped);
    }
    rows.sort_by(|a, b| {
        a.p.partial_cmp(&b.p)
            .unwrap()
            .then(a.rho.partial_cmp(&b.rho).unwrap())
            .then(a.class.cmp(&b.class))
            .then(a.metric.cmp(&b.metric))
    });
    skipped.sort_by(|a, b| {
        a.p.partial_cmp(&b.p)
            .unwrap()
            .then(a.rho.partial_cmp(&b.rho).unwrap())
    });

    let files = match &spec.out_dir {
        Some(dir) => write_outputs(dir, &rows, &skipped)?,
        None => Vec::new(),
    };
    Ok(SweepOutput {
        rows,
        skipped,
        files,
    })
}

/// One CSV per figure panel plus the bound-gap table and a text summary.
fn write_outputs(
    dir: &Path,
    rows: &[ComparisonRow],
    skipped: &[SkippedPoint],
) -> Result<Vec<PathBuf>, SweepError> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let panels: [(&str, u8, Metric); 6] = [
        ("fig3a_priority_paoi.csv", 1, Metric::Paoi),
        ("fig3b_priority_aoi.csv", 1, Metric::Aoi),
        ("fig3c_priority_delay.csv", 1, Metric::Delay),
        ("fig4a_nonpriority_paoi.csv", 2, Metric::Paoi),
        ("fig4b_nonpriority_aoi.csv", 2, Metric::Aoi),
        ("fig4c_nonpriority_delay.csv", 2, Metric::Delay),
    ];
    for (name, class, metric) in panels {
        let mut text = String::from("rho,p,metric,analytic,simulated,ci_halfwidth\n");
        for row in rows.iter().filter(|r| r.class == class && r.metric == metric) {
            writeln!(
                text,
                "{:.6},{:.6},{},{:.9},{:.9},{:.9}",
                row.rho,
                row.p,
                row.metric.as_str(),
                row.analytic,
                row.simulated,
                row.ci_halfwidth
            )
            .expect("string write");
        }
        let path = dir.join(name);
        std::fs::write(&path, text)?;
        files.push(path);
    }

    // bound-tightness panel: class-1 |analytic - simulated| against rho2,
    // since the approximation quality is driven by the non-priority load
    let mut gap = String::from("p,rho,rho2,metric,abs_gap,label\n");
    for row in rows.iter().filter(|r| r.class == 1) {
        let rho2 = row.rho * (1.0 - row.p);
        writeln!(
            gap,
            "{:.6},{:.6},{:.6},{},{:.9},{}",
            row.p,
            row.rho,
            rho2,
            row.metric.as_str(),
            (row.analytic - row.simulated).abs(),
            row.label.as_str()
        )
        .expect("string write");
    }
    let gap_path = dir.join("bound_gap_priority.csv");
    std::fs::write(&gap_path, gap)?;
    files.push(gap_path);

    let summary_path = dir.join("summary.txt");
    std::fs::write(&summary_path, render_summary(rows, skipped))?;
    files.push(summary_path);
    Ok(files)
}

/// Plain-text comparison tables, one per metric.
pub fn render_summary(rows: &[ComparisonRow], skipped: &[SkippedPoint]) -> String {
    let mut out = String::new();
    for metric in Metric::ALL {
        writeln!(out, "== {} ==", metric.as_str()).unwrap();
        writeln!(
            out,
            "{:>6} {:>6} {:>6} {:>14} {:>14} {:>12} {:>10}  label",
            "p", "rho", "class", "analytic", "simulated", "ci", "rel_err"
        )
        .unwrap();
        for r in rows.iter().filter(|r| r.metric == metric) {
            writeln!(
                out,
                "{:>6.2} {:>6.2} {:>6} {:>14.6} {:>14.6} {:>12.6} {:>9.4}%  {}",
                r.p,
                r.rho,
                r.class,
                r.analytic,
                r.simulated,
                r.ci_halfwidth,
                100.0 * r.rel_err,
                r.label.as_str()
            )
            .unwrap();
        }
        writeln!(out).unwrap();
    }
    if !skipped.is_empty() {
        writeln!(out, "== skipped points ==").unwrap();
        for s in skipped {
            writeln!(out, "p={} rho={}: {}", s.p, s.rho, s.reason).unwrap();
        }
    }
    out
}
