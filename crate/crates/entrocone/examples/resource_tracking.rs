//! Entanglement entropy, capacity of entanglement and the magic witness of
//! the violated subsystems along one CMA-ES run.

use entrocone::ensemble::{ingleton_subsystems, role_label};
use entrocone::optimize::{minimize, sample_unit_sphere, track_resources, Cost, OptimizerConfig, Scope};
use entrocone::seed;

fn main() -> entrocone::Result<()> {
    let cost = Cost::for_scope(6, Scope::SingleInstance)?;
    let x0 = sample_unit_sphere(cost.dim(), &mut seed::stream(5, 0))?;
    let cfg = OptimizerConfig {
        scope: Scope::SingleInstance,
        record_iterates: true,
        ..OptimizerConfig::default()
    };
    let run = minimize(&x0, &cfg, &cost)?;
    let subs = ingleton_subsystems();
    let table = track_resources(&run, &cost, &subs)?;

    print!("{:>6} {:>10} {:>9}", "iter", "cost", "W2");
    for &m in &subs {
        print!(" {:>11}", format!("S/C_{}", role_label(m)));
    }
    println!();
    let step = (table.rows.len() / 12).max(1);
    for row in table.rows.iter().step_by(step).chain(table.rows.last()) {
        print!("{:>6} {:>10.6} {:>9.4}", row.iteration, row.cost, row.witness2);
        for s in &row.subsystems {
            print!(" {:>5.3}/{:<5.3}", s.s_vn, s.capacity);
        }
        println!();
    }
    for (m, c) in subs.iter().zip(&table.crossings) {
        if let Some(i) = c {
            println!("S_{} first exceeds C_E at iteration {i}", role_label(*m));
        }
    }
    Ok(())
}
