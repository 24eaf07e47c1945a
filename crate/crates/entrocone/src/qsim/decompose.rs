use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{Gate, GateKind, PureState};

/// Rewrites X, S, Sdg, CH and CCX over {H, T, Tdg, CNOT}.
///
/// Each output sequence equals the input unitary up to a global phase.
pub fn decompose_gate(gate: &Gate) -> Result<Vec<Gate>> {
    let q = gate.qubits();
    let out = match gate.kind() {
        GateKind::S => vec![Gate::t(q[0]), Gate::t(q[0])],
        GateKind::Sdg => vec![Gate::tdg(q[0]), Gate::tdg(q[0])],
        GateKind::X => {
            let mut v = vec![Gate::h(q[0])];
            v.extend((0..4).map(|_| Gate::t(q[0])));
            v.push(Gate::h(q[0]));
            v
        }
        GateKind::Ch => {
            let (c, t) = (q[0], q[1]);
            vec![
                Gate::t(t),
                Gate::t(t),
                Gate::h(t),
                Gate::t(t),
                Gate::cnot(c, t),
                Gate::tdg(t),
                Gate::h(t),
                Gate::tdg(t),
                Gate::tdg(t),
            ]
        }
        GateKind::Ccx => {
            let (a, b, t) = (q[0], q[1], q[2]);
            vec![
                Gate::h(t),
                Gate::cnot(b, t),
                Gate::tdg(t),
                Gate::cnot(a, t),
                Gate::t(t),
                Gate::cnot(b, t),
                Gate::tdg(t),
                Gate::cnot(a, t),
                Gate::t(b),
                Gate::t(t),
                Gate::h(t),
                Gate::cnot(a, b),
                Gate::t(a),
                Gate::tdg(b),
                Gate::cnot(a, b),
            ]
        }
        kind => return Err(Error::UnsupportedDecomposition(kind)),
    };
    Ok(out)
}

/// Dense unitary of a gate sequence on `n_qubits`, built column by column.
pub fn sequence_unitary(n_qubits: usize, gates: &[Gate]) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut s = PureState::basis(n_qubits, col);
        for g in gates {
            s.apply_gate_mut(g)?;
        }
        for (row, a) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = *a;
        }
    }
    Ok(u)
}

/// Max entrywise distance between `a` and `e^{iφ} b` for the best φ.
pub fn distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let inner: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}
