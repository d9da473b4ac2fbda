//! Run configuration: defaults, TOML file, flag overrides.

use serde::{Deserialize, Serialize};

use tandem_aoi::transforms::DistributionError;
use tandem_aoi::Dist;

/// Flat run configuration. Every field has a default reproducing the
/// reference study setup (exponential service, b = b1 = b2 = 1, 1e5
/// packets); a TOML config file with the same keys may override any subset,
/// and command-line flags override the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lambda: f64,
    pub p: f64,
    pub mu: f64,
    pub b1: f64,
    pub b2: f64,
    /// Service-law kind at node 2 for class 1: `exp`, `det`, `erlang:K`,
    /// `gamma:SHAPE`, `hyper:CV2`.
    pub svc1: String,
    pub svc2: String,
    pub packets: usize,
    pub seed: u64,
    pub warmup: f64,
    /// Output directory (flag > file > TANDEM_AOI_OUT > "./out").
    pub out: Option<String>,
    // sweep-specific grids and replication seeds
    pub p_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    pub sweep_seeds: Vec<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: 0.5,
            p: 0.5,
            mu: 1.0,
            b1: 1.0,
            b2: 1.0,
            svc1: "exp".into(),
            svc2: "exp".into(),
            packets: 100_000,
            seed: 1,
            warmup: 0.1,
            out: None,
            p_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            rho_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            sweep_seeds: vec![101, 211, 307],
        }
    }
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        toml::from_str(&text).map_err(|e| format!("cannot parse config {path}: {e}"))
    }

    pub fn out_dir(&self) -> std::path::PathBuf {
        match &self.out {
            Some(dir) => dir.into(),
            None => std::env::var("TANDEM_AOI_OUT")
                .unwrap_or_else(|_| "out".into())
                .into(),
        }
    }

    pub fn service(&self, class: u8) -> Result<Dist, DistributionError> {
        let (kind, mean) = match class {
            1 => (self.svc1.as_str(), self.b1),
            _ => (self.svc2.as_str(), self.b2),
        };
        parse_service(kind, mean)
    }
}

/// Builds a service law from a kind token and its mean.
pub fn parse_service(kind: &str, mean: f64) -> Result<Dist, DistributionError> {
    let (name, arg) = match kind.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (kind, None),
    };
    match (name, arg) {
        ("exp" | "exponential", None) => Dist::exponential_with_mean(mean),
        ("det" | "deterministic", None) => Dist::deterministic(mean),
        ("erlang", Some(k)) => {
            let k: u32 = k
                .parse()
                .map_err(|_| DistributionError(format!("bad erlang shape {k:?}")))?;
            Dist::erlang_with_mean(k, mean)
        }
        ("gamma", Some(shape)) => {
            let shape: f64 = shape
                .parse()
                .map_err(|_| DistributionError(format!("bad gamma shape {shape:?}")))?;
            Dist::gamma_with_mean(shape, mean)
        }
        ("hyper" | "hyperexp", Some(cv2)) => {
            let cv2: f64 = cv2
                .parse()
                .map_err(|_| DistributionError(format!("bad hyperexp cv2 {cv2:?}")))?;
            Dist::hyperexponential_balanced(mean, cv2)
        }
        _ => Err(DistributionError(format!(
            "unknown service kind {kind:?} (want exp, det, erlang:K, gamma:SHAPE, hyper:CV2)"
        ))),
    }
}
