//! Entanglement and magic along an optimizer trajectory.

use serde::Serialize;

use super::{devectorize, Cost, OptRun};
use crate::entropy::spectrum_stats;
use crate::error::{Error, Result};
use crate::inequal::InequalityInstance;
use crate::magic::magic_witness;

/// S_vN and C_E of one subsystem at one iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubsystemResources {
    /// Mask over the roles A=bit 0 .. D=bit 3.
    pub role_mask: u64,
    pub qubits: u64,
    pub s_vn: f64,
    pub capacity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceRow {
    pub iteration: usize,
    pub evals: usize,
    pub cost: f64,
    pub subsystems: Vec<SubsystemResources>,
    /// W₂ of the reduced state on A ∪ B ∪ C ∪ D.
    pub witness2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceTable {
    /// Qubit masks of A, B, C, D.
    pub roles: [u64; 4],
    pub rows: Vec<ResourceRow>,
    /// Per requested subsystem, the first iteration with S_vN > C_E.
    pub crossings: Vec<Option<usize>>,
}

/// Qubit mask of a role mask under `roles`.
pub fn role_qubits(roles: [u64; 4], role_mask: u64) -> u64 {
    (0..4).filter(|i| role_mask >> i & 1 == 1).fold(0, |acc, i| acc | roles[i])
}

/// Roles of the instance attaining the run's final cost.
pub fn violated_roles(run: &OptRun, cost: &Cost) -> Result<[u64; 4]> {
    let (idx, _) = cost.evaluate_state(&run.state())?;
    roles_of(&cost.instances()[idx])
}

fn roles_of(inst: &InequalityInstance) -> Result<[u64; 4]> {
    inst.roles
        .ok_or_else(|| Error::InvalidConfig(format!("instance {} has no role assignment", inst.label)))
}

/// Tracks `subsystems` (role masks, A = bit 0) over the recorded iterates.
///
/// Roles come from the instance attaining the minimum at the final point.
pub fn track_resources(run: &OptRun, cost: &Cost, subsystems: &[u64]) -> Result<ResourceTable> {
    if run.iterates.is_empty() {
        return Err(Error::InvalidConfig("run has no recorded iterates".into()));
    }
    if subsystems.iter().any(|&m| m == 0 || m > 0b1111) {
        return Err(Error::InvalidConfig("subsystem masks must be nonempty role masks".into()));
    }
    let roles = violated_roles(run, cost)?;
    let abcd = roles.iter().fold(0, |a, r| a | r);
    let mut rows = Vec::with_capacity(run.iterates.len());
    for (iteration, (x, tp)) in run.iterates.iter().zip(&run.trace).enumerate() {
        let state = devectorize(x)?;
        let subs = subsystems
            .iter()
            .map(|&rm| {
                let qubits = role_qubits(roles, rm);
                let st = spectrum_stats(&state, qubits)?;
                Ok(SubsystemResources {
                    role_mask: rm,
                    qubits,
                    s_vn: st.s_vn,
                    capacity: st.capacity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let witness2 = magic_witness(&state.partial_trace(abcd)?, 2.0)?;
        rows.push(ResourceRow {
            iteration,
            evals: tp.evals,
            cost: tp.cost,
            subsystems: subs,
            witness2,
        });
    }
    let crossings = (0..subsystems.len())
        .map(|k| rows.iter().position(|r| r.subsystems[k].s_vn > r.subsystems[k].capacity))
        .collect();
    Ok(ResourceTable {
        roles,
        rows,
        crossings,
    })
}
