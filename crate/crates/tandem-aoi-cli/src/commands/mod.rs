pub mod analyze;
pub mod simulate;
pub mod sweep;
pub mod validate;

use crate::config::RunConfig;
use tandem_aoi::Params;

/// Builds validated system parameters; instability messages name the
/// violated load condition.
pub fn params_from(cfg: &RunConfig) -> Result<Params, String> {
    let svc1 = cfg.service(1).map_err(|e| e.to_string())?;
    let svc2 = cfg.service(2).map_err(|e| e.to_string())?;
    Params::new(cfg.lambda, cfg.p, cfg.mu, svc1, svc2).map_err(|e| e.to_string())
}
