use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{Gate, GateKind};

/// An ordered gate list over a fixed register size.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check_register(n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check_register(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Rewrites every gate into {H, T, Tdg, CNOT}.
    pub fn decomposed(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .flat_map(|g| match g.kind() {
                GateKind::H | GateKind::T | GateKind::Tdg | GateKind::Cnot => vec![g.clone()],
                _ => super::decompose_gate(g).expect("all other kinds decompose"),
            })
            .collect();
        Circuit {
            n_qubits: self.n_qubits,
            gates,
        }
    }

    /// Parses `NAME q0 [q1 [q2]]` lines; `#` starts a comment.
    ///
    /// The register size is `n_qubits` when given, otherwise one more than
    /// the largest index used.
    pub fn parse(text: &str, n_qubits: Option<usize>) -> Result<Self> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let mut parts = line.split_whitespace();
            let name = parts.next().expect("nonempty line");
            let kind: GateKind = name.parse().map_err(|e: Error| err(e.to_string()))?;
            let qubits = parts
                .map(|p| p.parse::<usize>().map_err(|_| err(format!("bad qubit index {p:?}"))))
                .collect::<Result<Vec<_>>>()?;
            gates.push(Gate::new(kind, &qubits).map_err(|e| err(e.to_string()))?);
        }
        let used = gates
            .iter()
            .flat_map(|g| g.qubits().iter().copied())
            .max()
            .map_or(0, |q| q + 1);
        let n = n_qubits.unwrap_or(used);
        Circuit::from_gates(n, gates)
    }

    /// A uniformly drawn sequence of `len` gates from {H, S, CNOT}.
    pub fn random_clifford<R: Rng + ?Sized>(n_qubits: usize, len: usize, rng: &mut R) -> Self {
        let mut c = Circuit::new(n_qubits);
        for _ in 0..len {
            let choice = if n_qubits > 1 { rng.random_range(0..3) } else { rng.random_range(0..2) };
            let q = rng.random_range(0..n_qubits);
            let g = match choice {
                0 => Gate::h(q),
                1 => Gate::s(q),
                _ => {
                    let mut t = rng.random_range(0..n_qubits - 1);
                    if t >= q {
                        t += 1;
                    }
                    Gate::cnot(q, t)
                }
            };
            c.gates.push(g);
        }
        c
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
