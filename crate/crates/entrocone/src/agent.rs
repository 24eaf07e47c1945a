//! Tabular Q-learning over gate sequences.
//!
//! Each episode starts from the same initial state and appends gates chosen
//! ε-greedily from a fixed action list. The reward after a gate is the
//! inequality difference RHS − LHS of the resulting entropy vector, so it
//! turns positive exactly at violation. States are keyed by a hash of their
//! amplitudes rounded to 1e-9.

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{entropy_vector_partial, EntropyVector};
use crate::error::{Error, Result};
use crate::inequal::{min_gap, InequalityInstance};
use crate::qsim::{Circuit, Gate, GateKind, PureState};
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    /// α in (0, 1].
    pub learning_rate: f64,
    /// ε in [0, 1].
    pub exploration: f64,
    /// γ in [0, 1).
    pub discount: f64,
    pub max_steps: usize,
    pub max_episodes: usize,
    /// An episode ends once the gap drops below −threshold.
    pub violation_threshold: f64,
    pub step_penalty: f64,
    pub terminal_bonus: f64,
    /// When false the reward is the bare inequality difference.
    pub shaping: bool,
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            learning_rate: 0.8,
            exploration: 0.2,
            discount: 0.5,
            max_steps: 200,
            max_episodes: 5000,
            violation_threshold: 1e-6,
            step_penalty: -0.01,
            terminal_bonus: 10.0,
            shaping: true,
            seed: 0,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning rate must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.exploration) {
            return bad("exploration must lie in [0, 1]");
        }
        if !(0.0..1.0).contains(&self.discount) {
            return bad("discount must lie in [0, 1)");
        }
        if self.max_steps == 0 || self.max_episodes == 0 {
            return bad("step and episode budgets must be positive");
        }
        if !(self.violation_threshold >= 0.0) {
            return bad("violation threshold must be nonnegative");
        }
        Ok(())
    }
}

/// Q-values keyed by state hash; absent entries read as zero.
#[derive(Clone, Debug, Default)]
pub struct QTable {
    n_actions: usize,
    rows: HashMap<u64, Vec<f64>>,
}

impl QTable {
    pub fn new(n_actions: usize) -> Self {
        QTable {
            n_actions,
            rows: HashMap::new(),
        }
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, s: u64, a: usize) -> f64 {
        self.rows.get(&s).map_or(0.0, |r| r[a])
    }

    pub fn set(&mut self, s: u64, a: usize, q: f64) {
        let n = self.n_actions;
        self.rows.entry(s).or_insert_with(|| vec![0.0; n])[a] = q;
    }

    /// max_a Q(s, a), zero for unseen states.
    pub fn max_value(&self, s: u64) -> f64 {
        self.rows
            .get(&s)
            .map_or(0.0, |r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Lowest-index argmax over the row of `s`.
    pub fn argmax(&self, s: u64) -> usize {
        let Some(row) = self.rows.get(&s) else { return 0 };
        let mut best = 0;
        for (a, &q) in row.iter().enumerate() {
            if q > row[best] {
                best = a;
            }
        }
        best
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }
}

/// Hash of the amplitudes rounded to 1e-9, real and imaginary parts apart.
pub fn state_key(state: &PureState) -> u64 {
    let mut h = DefaultHasher::new();
    for a in state.amplitudes() {
        ((a.re * 1e9).round() as i64).hash(&mut h);
        ((a.im * 1e9).round() as i64).hash(&mut h);
    }
    h.finish()
}

/// Q(s,a) ← (1−α) Q(s,a) + α (r + γ max_a' Q(s',a')). Returns the new value.
pub fn q_update(table: &mut QTable, s: u64, a: usize, r: f64, s_next: u64, cfg: &AgentConfig) -> f64 {
    let target = r + cfg.discount * table.max_value(s_next);
    let q = (1.0 - cfg.learning_rate) * table.get(s, a) + cfg.learning_rate * target;
    table.set(s, a, q);
    q
}

/// ε-greedy choice; greedy ties go to the lowest index.
pub fn select_action<R: Rng + ?Sized>(table: &QTable, s: u64, epsilon: f64, rng: &mut R) -> usize {
    if rng.random::<f64>() < epsilon {
        rng.random_range(0..table.n_actions())
    } else {
        table.argmax(s)
    }
}

/// Indexed gate list built from per-kind templates.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionSpace {
    n_qubits: usize,
    actions: Vec<Gate>,
}

impl ActionSpace {
    /// Expands each kind over the register: one-qubit kinds over every qubit,
    /// two-qubit kinds over ordered (control, target) pairs, CCX over control
    /// pairs with c0 < c1 and every remaining target.
    pub fn from_kinds(n_qubits: usize, kinds: &[GateKind]) -> Result<Self> {
        let mut actions = Vec::new();
        for &k in kinds {
            match k.arity() {
                1 => actions.extend((0..n_qubits).map(|q| Gate::new(k, &[q]).unwrap())),
                2 => {
                    for c in 0..n_qubits {
                        for t in (0..n_qubits).filter(|&t| t != c) {
                            actions.push(Gate::new(k, &[c, t]).unwrap());
                        }
                    }
                }
                _ => {
                    for c0 in 0..n_qubits {
                        for c1 in c0 + 1..n_qubits {
                            for t in (0..n_qubits).filter(|&t| t != c0 && t != c1) {
                                actions.push(Gate::new(k, &[c0, c1, t]).unwrap());
                            }
                        }
                    }
                }
            }
        }
        if actions.is_empty() {
            return Err(Error::InvalidConfig("empty action space".into()));
        }
        Ok(ActionSpace { n_qubits, actions })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn gate(&self, index: usize) -> &Gate {
        &self.actions[index]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.actions
    }
}

/// Inequality instances together with the party structure they read.
#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub parties: Vec<u64>,
    pub instances: Vec<InequalityInstance>,
    masks: Vec<u64>,
}

impl Target {
    pub fn new(parties: Vec<u64>, instances: Vec<InequalityInstance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::InvalidConfig("target has no instances".into()));
        }
        if let Some(i) = instances.iter().find(|i| i.n_parties != parties.len()) {
            return Err(Error::InvalidConfig(format!(
                "instance {} expects {} parties, target has {}",
                i.label,
                i.n_parties,
                parties.len()
            )));
        }
        let mut masks: Vec<u64> = instances.iter().flat_map(|i| i.masks()).collect();
        masks.sort_unstable();
        masks.dedup();
        Ok(Target {
            parties,
            instances,
            masks,
        })
    }

    /// Entropy vector over the masks the instances read.
    pub fn entropy_vector(&self, state: &PureState) -> Result<EntropyVector> {
        entropy_vector_partial(state, &self.parties, &self.masks)
    }

    /// Minimum gap over the instances, and the entropy vector used.
    pub fn evaluate(&self, state: &PureState) -> Result<(f64, EntropyVector)> {
        let ev = self.entropy_vector(state)?;
        let (_, g) = min_gap(&self.instances, &ev)?;
        Ok((g, ev))
    }
}

/// RHS − LHS, maximised over instances (the instance closest to violation).
pub fn reward(ev: &EntropyVector, instances: &[InequalityInstance]) -> Result<f64> {
    Ok(-min_gap(instances, ev)?.1)
}

/// One applied gate in a logged episode.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub action: usize,
    pub gap: f64,
    pub reward: f64,
    pub entropies: EntropyVector,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Violated {
        circuit: Circuit,
        state: PureState,
        gap: f64,
        episode: usize,
        log: Vec<StepRecord>,
    },
    BudgetExhausted {
        episodes: usize,
        best_gap: f64,
    },
}

#[derive(Clone, Debug)]
pub struct TrainResult {
    pub outcome: Outcome,
    pub table: QTable,
}

/// Runs episodes until some state violates `target` or the budget runs out.
pub fn train_to_violation(
    initial: &PureState,
    space: &ActionSpace,
    target: &Target,
    cfg: &AgentConfig,
) -> Result<TrainResult> {
    cfg.validate()?;
    if space.n_qubits() != initial.n_qubits() {
        return Err(Error::DimensionMismatch(space.n_qubits(), initial.n_qubits()));
    }
    let mut rng = seed::stream(cfg.seed, 0);
    let mut table = QTable::new(space.len());
    let start_key = state_key(initial);
    let mut best_gap = target.evaluate(initial)?.0;
    for episode in 0..cfg.max_episodes {
        let mut state = initial.clone();
        let mut key = start_key;
        let mut circuit = Circuit::new(initial.n_qubits());
        let mut log = Vec::new();
        for step in 0..cfg.max_steps {
            let a = select_action(&table, key, cfg.exploration, &mut rng);
            let gate = space.gate(a);
            state.apply_gate_mut(gate)?;
            circuit.push(gate.clone())?;
            let (gap, ev) = target.evaluate(&state)?;
            best_gap = best_gap.min(gap);
            let violated = gap < -cfg.violation_threshold;
            let mut r = -gap;
            if cfg.shaping {
                r += cfg.step_penalty;
                if violated {
                    r += cfg.terminal_bonus;
                }
            }
            let next = state_key(&state);
            q_update(&mut table, key, a, r, next, cfg);
            log.push(StepRecord {
                step,
                action: a,
                gap,
                reward: r,
                entropies: ev,
            });
            if violated {
                return Ok(TrainResult {
                    outcome: Outcome::Violated {
                        circuit,
                        state,
                        gap,
                        episode,
                        log,
                    },
                    table,
                });
            }
            key = next;
        }
    }
    Ok(TrainResult {
        outcome: Outcome::BudgetExhausted {
            episodes: cfg.max_episodes,
            best_gap,
        },
        table,
    })
}
