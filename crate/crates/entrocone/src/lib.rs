//! Entropy vectors of small multi-qubit states and the search for
//! violations of linear entropy inequalities, Ingleton's in particular.
//!
//! The crate is organised bottom-up:
//!
//! - [`qsim`]: statevector simulation, reduced states, gate decompositions.
//! - [`entropy`]: subsystem entropies, capacity of entanglement, non-flatness.
//! - [`inequal`]: inequality instances, gaps, the full Ingleton instance sets.
//! - [`magic`]: Pauli spectra, stabilizer Rényi entropy, the mixed-state witness.
//! - [`agent`]: tabular Q-learning over gate sequences.
//! - [`optimize`]: CMA-ES and a COBYLA-style trust-region search over states.
//! - [`hypercone`]: hypergraph min-cut realization of five-qubit entropy vectors.
//! - [`ensemble`]: Haar scans, solution distances, stability and correlations.
//! - [`experiment`]: seeded, reproducible runs that write CSV and JSON outputs.

pub mod agent;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod hypercone;
pub mod inequal;
pub mod magic;
pub mod optimize;
pub mod pool;
pub mod qsim;
pub mod seed;

pub use error::{Error, Result};
