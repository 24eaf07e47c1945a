//! Q-learning with H and CNOT from |0000⟩ until monogamy of mutual
//! information fails on qubits 0, 1, 2.

use entrocone::agent::{train_to_violation, ActionSpace, AgentConfig, Outcome, Target};
use entrocone::entropy::single_qubit_parties;
use entrocone::inequal::InequalityInstance;
use entrocone::qsim::{GateKind, PureState};

fn main() -> entrocone::Result<()> {
    let space = ActionSpace::from_kinds(4, &[GateKind::H, GateKind::Cnot])?;
    let target = Target::new(single_qubit_parties(4), vec![InequalityInstance::mmi(4, 1, 2, 4)?])?;
    let cfg = AgentConfig { seed: 7, ..AgentConfig::default() };

    let result = train_to_violation(&PureState::zero(4), &space, &target, &cfg)?;
    match result.outcome {
        Outcome::Violated { circuit, state, gap, episode, .. } => {
            println!("episode {episode}: {} gates, MMI difference {:.6}", circuit.len(), -gap);
            for (mask, s) in target.entropy_vector(&state)?.ordered() {
                println!("  S[{mask:03b}] = {s:.6}");
            }
        }
        Outcome::BudgetExhausted { episodes, best_gap } => {
            println!("no violation after {episodes} episodes (best gap {best_gap:.6})");
        }
    }
    Ok(())
}
