//! Fixed states and circuits used throughout the examples and tests.
//!
//! Ket strings in this module are written with qubit 0 as the rightmost
//! character, so `ket("01")` sets qubit 0.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::qsim::{Circuit, DensityMatrix, Gate, PureState};

/// Basis index of a ket string whose rightmost character is qubit 0.
pub fn ket(bits: &str) -> usize {
    bits.chars().fold(0, |acc, c| (acc << 1) | usize::from(c == '1'))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (|0…0⟩ + |1…1⟩)/√2.
pub fn ghz(n_qubits: usize) -> PureState {
    let h = c(FRAC_1_SQRT_2, 0.0);
    PureState::from_terms(n_qubits, &[(0, h), ((1 << n_qubits) - 1, h)]).unwrap()
}

/// T|+⟩ on one qubit.
pub fn t_plus() -> PureState {
    PureState::zero(1)
        .apply_gate(&Gate::h(0))
        .and_then(|s| s.apply_gate(&Gate::t(0)))
        .unwrap()
}

/// H on qubit 0 followed by a CNOT chain: prepares GHZ from |0…0⟩.
pub fn ghz_circuit(n_qubits: usize) -> Circuit {
    let mut gates = vec![Gate::h(0)];
    gates.extend((1..n_qubits).map(|q| Gate::cnot(q - 1, q)));
    Circuit::from_gates(n_qubits, gates).unwrap()
}

/// Register layout of the six-qubit purified violator: the purifier sits on
/// qubits 0 and 1 and parties A, B, C, D on qubits 2, 3, 4, 5.
pub const PURIFIER_MASK: u64 = 0b000011;
pub const ABCD_PARTIES: [u64; 4] = [1 << 2, 1 << 3, 1 << 4, 1 << 5];

/// √½ |GHZ₄⟩|00⟩ + ½ |0101⟩|01⟩ + ½ |1001⟩|10⟩ over six qubits.
pub fn psi_abcdr() -> PureState {
    let h = c(0.5, 0.0);
    PureState::from_terms(
        6,
        &[
            (ket("000000"), h),
            (ket("111100"), h),
            (ket("010101"), h),
            (ket("100110"), h),
        ],
    )
    .unwrap()
}

/// ½ |GHZ₄⟩⟨GHZ₄| + ¼ |0101⟩⟨0101| + ¼ |1001⟩⟨1001|.
pub fn rho_abcd() -> DensityMatrix {
    let g = ghz(4);
    let a = PureState::basis(4, ket("0101"));
    let b = PureState::basis(4, ket("1001"));
    DensityMatrix::mixture(&[(0.5, &g), (0.25, &a), (0.25, &b)]).unwrap()
}

/// Prepares [`psi_abcdr`] from |000000⟩ with H, X, CNOT and CCX.
pub fn psi_abcdr_circuit() -> Circuit {
    let gates = vec![
        Gate::h(4),
        Gate::h(5),
        Gate::cnot(4, 2),
        Gate::cnot(5, 2),
        Gate::ccx(4, 5, 2),
        Gate::ccx(4, 5, 3),
        Gate::x(5),
        Gate::ccx(4, 5, 0),
        Gate::x(5),
        Gate::x(4),
        Gate::ccx(4, 5, 1),
        Gate::x(4),
    ];
    Circuit::from_gates(6, gates).unwrap()
}

/// A fixed six-qubit state with twelve nonzero amplitudes, used as a
/// non-violating reference point.
pub fn saturating_state() -> PureState {
    let q = 0.25;
    let r = 32f64.sqrt().recip();
    PureState::from_terms(
        6,
        &[
            (ket("000000"), c(q, 0.0)),
            (ket("000001"), c(q, 0.0)),
            (ket("001110"), c(r, r)),
            (ket("001111"), c(-r, -r)),
            (ket("010000"), c(q, 0.0)),
            (ket("010001"), c(q, 0.0)),
            (ket("011110"), c(r, r)),
            (ket("011111"), c(-r, -r)),
            (ket("101010"), c(q, -q)),
            (ket("101011"), c(q, q)),
            (ket("111000"), c(q, -q)),
            (ket("111001"), c(q, q)),
        ],
    )
    .unwrap()
}
