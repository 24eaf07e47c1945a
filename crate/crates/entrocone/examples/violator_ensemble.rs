//! Distances between independently found maximal violators, and the
//! correlation of entanglement entropy with capacity across them.
//!
//! Usage: violator_ensemble [restarts]

use entrocone::ensemble::{distance_record, ingleton_subsystems, resource_correlation, Violator};
use entrocone::optimize::{restarts, Cost, OptimizerConfig, Scope};

fn main() -> entrocone::Result<()> {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let cfg = OptimizerConfig { scope: Scope::SingleInstance, seed: 2, ..OptimizerConfig::default() };
    let cost = Cost::for_scope(6, cfg.scope)?;
    let runs = restarts(count, &cfg, &cost, None)?;

    for pair in runs.chunks(2).take(5) {
        let d = distance_record(&pair[0].x_star, &pair[1].x_star)?;
        println!("D_E = {:.4}  D_T = {:.4}", d.euclidean, d.trace);
    }

    let violators = runs.iter().map(|r| Violator::from_run(r, &cost)).collect::<entrocone::Result<Vec<_>>>()?;
    for c in resource_correlation(&violators, &ingleton_subsystems())? {
        let rho = c.pearson.map_or("undefined".to_string(), |r| format!("{r:+.4}"));
        println!("{:<4} <S> = {:.5}  <C_E> = {:.5}  rho = {rho}", c.label, c.mean_s_vn, c.mean_capacity);
    }
    Ok(())
}
