//! Runs the six-qubit purified-violator circuit gate by gate, before and
//! after decomposing it into Clifford+T, and prints the Ingleton gap.

use entrocone::entropy::{entropy_vector, single_qubit_parties};
use entrocone::inequal::InequalityInstance;
use entrocone::qsim::{named, PureState};

fn main() -> entrocone::Result<()> {
    let circuit = named::psi_abcdr_circuit();
    let inst = InequalityInstance::ingleton(6, named::ABCD_PARTIES)?;
    let parties = single_qubit_parties(6);
    let start = PureState::zero(6);

    let mut gaps = Vec::new();
    let out = start.run_circuit_with(&circuit, |i, s| {
        let ev = entropy_vector(s, &parties).expect("valid parties");
        gaps.push((i, inst.gap(&ev).expect("complete vector")));
    })?;
    for (i, g) in &gaps {
        println!("{:>2} {:<10} gap {:+.6}", i + 1, circuit.gates()[*i].to_string(), g);
    }

    let fine = circuit.decomposed();
    let out2 = start.run_circuit(&fine)?;
    println!("{} gates decompose to {}; trace distance {:.2e}", circuit.len(), fine.len(), out.trace_distance(&out2)?);
    println!("distance to the closed-form state {:.2e}", out.trace_distance(&named::psi_abcdr())?);
    Ok(())
}
