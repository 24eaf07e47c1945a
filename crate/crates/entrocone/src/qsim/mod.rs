//! Statevector simulation for registers of up to ten qubits.
//!
//! Amplitudes are little-endian: qubit 0 is the least significant bit of a
//! basis index. Gates act in place on pairs of amplitudes.

mod circuit;
mod decompose;
mod density;
mod gate;
pub mod named;
mod state;

pub use circuit::Circuit;
pub use decompose::{decompose_gate, distance_up_to_phase, sequence_unitary};
pub use density::{DensityMatrix, EIG_CLIP};
pub use gate::{Gate, GateKind};
pub use state::{PureState, StateFile, MAX_QUBITS};

pub(crate) use density::{check_mask, reduce_amplitudes};
