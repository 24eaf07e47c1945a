//! Distribution of the Ingleton gap of the first four qubits of Haar-random
//! eight-qubit states.
//!
//! Usage: haar_scan [samples]

use entrocone::ensemble::{haar_gap_scan, GapPolicy};

fn main() -> entrocone::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    for policy in [GapPolicy::Canonical, GapPolicy::MinOverForms] {
        let (h, _) = haar_gap_scan(8, samples, policy, 0, None)?;
        println!(
            "{policy:?}: mean {:.4} std {:.4} KL {:.4} violations {} z(0) {:.2}",
            h.mean, h.std, h.kl_to_normal, h.violations, h.zero_z
        );
        let peak = *h.counts.iter().max().unwrap_or(&1) as f64;
        for (e, c) in h.edges.windows(2).zip(&h.counts).step_by(3) {
            println!("  {:>7.4} {}", e[0], "#".repeat((40.0 * *c as f64 / peak).round() as usize));
        }
    }
    Ok(())
}
