//! Pauli spectra, stabilizer Rényi entropy and the mixed-state magic witness.
//!
//! A Pauli string is indexed by base-4 digits, one per qubit with qubit 0
//! least significant, using I=0, X=1, Y=2, Z=3.

use num_complex::Complex64;

use crate::entropy::renyi2;
use crate::error::{Error, Result};
use crate::qsim::{DensityMatrix, PureState};

/// Largest register for which full spectra are computed.
pub const MAX_PAULI_QUBITS: usize = 8;

/// Tr(ρP) for every Pauli string P.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSpectrum {
    pub n_qubits: usize,
    pub values: Vec<f64>,
}

impl PauliSpectrum {
    /// Σ_P |Tr ρP|^{2α}.
    pub fn moment(&self, alpha: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(2.0 * alpha)).sum()
    }

    /// Value for the string with the given per-qubit digits.
    pub fn get(&self, digits: &[u8]) -> f64 {
        let idx = digits.iter().rev().fold(0usize, |acc, &d| acc * 4 + d as usize);
        self.values[idx]
    }
}

/// Base-4 index of the string with X-part `x` and Z-part `z`.
fn string_index(x: usize, z: usize, n: usize) -> usize {
    let mut idx = 0;
    for q in (0..n).rev() {
        let digit = match (x >> q & 1, z >> q & 1) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        idx = idx * 4 + digit;
    }
    idx
}

/// In-place Walsh-Hadamard transform: out[z] = Σ_i (−1)^{i·z} in[i].
fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Spectrum from w_x[i] = ρ[i, i⊕x], using
/// Tr(ρP) = i^{#Y} Σ_i (−1)^{popcount(i & z)} ρ[i, i⊕x].
fn spectrum_from(n: usize, mut entry: impl FnMut(usize, usize) -> Complex64) -> PauliSpectrum {
    let dim = 1usize << n;
    let mut values = vec![0.0; dim * dim];
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for x in 0..dim {
        for (i, slot) in w.iter_mut().enumerate() {
            *slot = entry(i, i ^ x);
        }
        walsh_hadamard(&mut w);
        for (z, s) in w.iter().enumerate() {
            let v = match (x & z).count_ones() % 4 {
                0 => s.re,
                1 => -s.im,
                2 => -s.re,
                _ => s.im,
            };
            values[string_index(x, z, n)] = v;
        }
    }
    PauliSpectrum { n_qubits: n, values }
}

pub fn pauli_spectrum(rho: &DensityMatrix) -> Result<PauliSpectrum> {
    let n = rho.n_qubits();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::InvalidConfig(format!("{n} qubits exceeds {MAX_PAULI_QUBITS}")));
    }
    let m = rho.matrix();
    Ok(spectrum_from(n, |i, j| m[(i, j)]))
}

pub fn pauli_spectrum_pure(state: &PureState) -> Result<PauliSpectrum> {
    let n = state.n_qubits();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::InvalidConfig(format!("{n} qubits exceeds {MAX_PAULI_QUBITS}")));
    }
    let a = state.amplitudes();
    Ok(spectrum_from(n, |i, j| a[i] * a[j].conj()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 1.0 {
        return Err(Error::AlphaOne);
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Stabilizer Rényi entropy (1/(1−α)) ln(2⁻ⁿ Σ_P ⟨P⟩^{2α}), in nats.
pub fn sre(state: &PureState, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let spec = pauli_spectrum_pure(state)?;
    let n = state.n_qubits() as f64;
    Ok((spec.moment(alpha).ln() - n * std::f64::consts::LN_2) / (1.0 - alpha))
}

/// W_α = (1/(1−α)) ln(2⁻ⁿ Σ_P |Tr ρP|^{2α}) − ((1−2α)/(1−α)) S₂(ρ), in nats.
///
/// `n` is the qubit count of `rho` itself.
pub fn magic_witness(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let spec = pauli_spectrum(rho)?;
    let n = rho.n_qubits() as f64;
    let m = (spec.moment(alpha).ln() - n * std::f64::consts::LN_2) / (1.0 - alpha);
    Ok(m - (1.0 - 2.0 * alpha) / (1.0 - alpha) * renyi2(rho))
}
