use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 10;

const NORM_TOL: f64 = 1e-10;

/// A normalized pure state over `n_qubits` qubits, little-endian
/// (qubit 0 is the least significant bit of the basis index).
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

impl PureState {
    /// |0…0⟩.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state |index⟩. Panics if `index >= 2^n_qubits`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        PureState { n_qubits, amps }
    }

    /// Wraps amplitudes that are already normalized within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { n_qubits, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(PureState { n_qubits, amps })
    }

    /// Sparse constructor from (basis index, amplitude) pairs, normalized.
    pub fn from_terms(n_qubits: usize, terms: &[(usize, Complex64)]) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for &(i, a) in terms {
            let slot = amps.get_mut(i).ok_or(Error::DimensionMismatch(i, 1 << n_qubits))?;
            *slot += a;
        }
        Self::normalized(amps)
    }

    /// Haar-random state as a normalized complex Gaussian vector.
    pub fn haar<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let amps: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps).expect("gaussian vector is nonzero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Product state with `self` on the low qubits and `high` above them.
    pub fn tensor(&self, high: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * high.dim());
        for b in &high.amps {
            amps.extend(self.amps.iter().map(|a| a * b));
        }
        PureState {
            n_qubits: self.n_qubits + high.n_qubits,
            amps,
        }
    }

    /// e^{iφ}|ψ⟩.
    pub fn with_phase(&self, phi: f64) -> PureState {
        let p = Complex64::from_polar(1.0, phi);
        PureState {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * p).collect(),
        }
    }

    pub fn apply_gate_mut(&mut self, gate: &Gate) -> Result<()> {
        gate.check_register(self.n_qubits)?;
        gate.apply_to(&mut self.amps);
        Ok(())
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<PureState> {
        let mut out = self.clone();
        out.apply_gate_mut(gate)?;
        Ok(out)
    }

    /// Runs every gate in order; `observer` sees the state after each gate.
    pub fn run_circuit_with<F>(&self, circuit: &Circuit, mut observer: F) -> Result<PureState>
    where
        F: FnMut(usize, &PureState),
    {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(circuit.n_qubits(), self.n_qubits));
        }
        let mut state = self.clone();
        for (i, g) in circuit.gates().iter().enumerate() {
            state.apply_gate_mut(g)?;
            observer(i, &state);
        }
        Ok(state)
    }

    pub fn run_circuit(&self, circuit: &Circuit) -> Result<PureState> {
        self.run_circuit_with(circuit, |_, _| {})
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// √(1 − |⟨ψ|φ⟩|²), in [0, 1].
    pub fn trace_distance(&self, other: &PureState) -> Result<f64> {
        let f = self.overlap(other)?.norm_sqr().min(1.0);
        Ok((1.0 - f).max(0.0).sqrt())
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            n: self.n_qubits,
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// On-disk state representation: `{"n": int, "amplitudes": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<StateFile> for PureState {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        if f.amplitudes.len() != 1usize << f.n {
            return Err(Error::DimensionMismatch(f.amplitudes.len(), 1 << f.n));
        }
        let amps = f.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        PureState::normalized(amps)
    }
}

impl PureState {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        if file.n > MAX_QUBITS {
            return Err(Error::InvalidConfig(format!("{} qubits exceeds {MAX_QUBITS}", file.n)));
        }
        file.try_into()
    }
}
