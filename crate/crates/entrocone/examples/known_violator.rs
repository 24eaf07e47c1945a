//! The four-party mixed state ½GHZ + ¼|0101⟩ + ¼|1001⟩ and its six-qubit
//! purification both violate Ingleton's inequality.

use entrocone::entropy::{entropy_vector, entropy_vector_mixed, single_qubit_parties};
use entrocone::inequal::{ingleton_instances, mi_rewrite_terms, two_party_dominance};
use entrocone::qsim::named;

fn main() -> entrocone::Result<()> {
    let rho = named::rho_abcd();
    let ev = entropy_vector_mixed(&rho, &single_qubit_parties(4))?;
    let forms = ingleton_instances(4, false)?;
    for inst in &forms.instances {
        println!("{:<40} gap {:+.9}", inst.label, inst.gap(&ev)?);
    }
    let (idx, gap) = forms.min_gap(&ev)?;
    println!("min gap {gap:.12} at {}", forms.instances[idx].label);

    // Purifier on qubits 0 and 1, A..D on qubits 2..5.
    let psi = named::psi_abcdr();
    let ev6 = entropy_vector(&psi, &single_qubit_parties(6))?;
    let roles = named::ABCD_PARTIES;
    let (i1, i2, r) = mi_rewrite_terms(&ev6, roles)?;
    println!("I(B:C|A) = {i1:.6}, I(A:D|B) = {i2:.6}, R = {r:.6}, sum = {:.6}", i1 + i2 + r);
    println!("S_CD dominates the other pairs: {}", two_party_dominance(&ev6, roles)?);
    Ok(())
}
