//! A few CMA-ES and COBYLA restarts on six qubits, minimizing the Ingleton
//! gap over all instances.
//!
//! Usage: max_violation [restarts]

use std::time::Instant;

use entrocone::optimize::{restarts, Cost, Method, OptimizerConfig, Scope};

fn main() -> entrocone::Result<()> {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let cost = Cost::for_scope(6, Scope::FullSet)?;
    println!("{} instances", cost.instances().len());
    for method in [Method::CmaEs, Method::Cobyla] {
        let cfg = OptimizerConfig { method, seed: 1, ..OptimizerConfig::default() };
        let t = Instant::now();
        let runs = restarts(count, &cfg, &cost, None)?;
        for (i, r) in runs.iter().enumerate() {
            let (idx, _) = cost.evaluate_state(&r.state())?;
            println!(
                "{method:?} #{i}: gap {:.9} after {} evals ({:?}) on {}",
                r.final_cost,
                r.evals,
                r.stop,
                cost.instances()[idx].label
            );
        }
        println!("{method:?}: {:.1?}", t.elapsed());
    }
    Ok(())
}
