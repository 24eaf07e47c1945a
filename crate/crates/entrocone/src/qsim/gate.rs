use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named gates supported by the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Cnot,
    Ch,
    Ccx,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::X,
        GateKind::Cnot,
        GateKind::Ch,
        GateKind::Ccx,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Ch => 2,
            GateKind::Ccx => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::T => "T",
            GateKind::Tdg => "TDG",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Ch => "CH",
            GateKind::Ccx => "CCX",
        }
    }

    /// The single-qubit operator applied to the target, before controls.
    pub(crate) fn target_matrix(self) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let diag = |p: Complex64| [[one, z], [z, p]];
        match self {
            GateKind::H | GateKind::Ch => [[h, h], [h, -h]],
            GateKind::S => diag(Complex64::i()),
            GateKind::Sdg => diag(-Complex64::i()),
            GateKind::T => diag(Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
            GateKind::Tdg => diag(Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
            GateKind::X | GateKind::Cnot | GateKind::Ccx => [[z, one], [one, z]],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown gate name {s:?}")))
    }
}

/// A gate bound to qubit indices. Controls come first, the target last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Arity {
                kind,
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        Ok(Gate {
            kind,
            qubits: qubits.to_vec(),
        })
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, &[q]).unwrap()
    }

    pub fn t(q: usize) -> Self {
        Gate::new(GateKind::T, &[q]).unwrap()
    }

    pub fn tdg(q: usize) -> Self {
        Gate::new(GateKind::Tdg, &[q]).unwrap()
    }

    pub fn s(q: usize) -> Self {
        Gate::new(GateKind::S, &[q]).unwrap()
    }

    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, &[q]).unwrap()
    }

    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cnot, &[control, target]).expect("distinct qubits")
    }

    /// Panics if `control == target`.
    pub fn ch(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Ch, &[control, target]).expect("distinct qubits")
    }

    /// Panics unless the three qubits are distinct.
    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::new(GateKind::Ccx, &[c0, c1, target]).expect("distinct qubits")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gates have at least one qubit")
    }

    pub fn controls(&self) -> &[usize] {
        &self.qubits[..self.qubits.len() - 1]
    }

    pub fn check_register(&self, n_qubits: usize) -> Result<()> {
        match self.qubits.iter().find(|&&q| q >= n_qubits) {
            Some(&index) => Err(Error::QubitOutOfRange { index, n_qubits }),
            None => Ok(()),
        }
    }

    /// Applies the gate to a little-endian amplitude buffer in place.
    pub(crate) fn apply_to(&self, amps: &mut [Complex64]) {
        let u = self.kind.target_matrix();
        let bit = 1usize << self.target();
        let cmask = self.controls().iter().fold(0usize, |m, &c| m | (1 << c));
        for i in 0..amps.len() {
            if i & bit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | bit;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = u[0][0] * a0 + u[0][1] * a1;
            amps[j] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}
