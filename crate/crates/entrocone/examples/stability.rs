//! Perturbs a converged violator and re-minimizes, tracing how the fidelity
//! with the original solution falls with the perturbation size.
//!
//! Usage: stability [trials]

use entrocone::ensemble::stability_scan;
use entrocone::optimize::{restarts, Cost, Method, OptimizerConfig, Scope};

fn main() -> entrocone::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let cfg = OptimizerConfig {
        method: Method::Cobyla,
        scope: Scope::SingleInstance,
        ..OptimizerConfig::default()
    };
    let cost = Cost::for_scope(6, cfg.scope)?;
    let reference = restarts(1, &cfg, &cost, None)?.remove(0);
    println!("reference gap {:.9}", reference.final_cost);

    let norms = [0.02, 0.05, 0.08, 0.11, 0.15, 0.3];
    let est = stability_scan(&reference.x_star, &norms, trials, &cfg, &cost, None)?;
    for p in &est.curve {
        println!("|delta| = {:.2}  fidelity {:.4}  excluded {}", p.delta_norm, p.mean_fidelity, p.excluded);
    }
    match est.xi {
        Some(xi) => println!("xi = {xi:.2} ± {:.2}", est.xi_uncertainty),
        None => println!("no scanned norm keeps fidelity above the bar"),
    }
    Ok(())
}
