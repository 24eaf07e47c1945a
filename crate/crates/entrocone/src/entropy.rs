//! Subsystem entropies and the entropy vector.
//!
//! Von Neumann entropies and capacities are in bits; the Rényi-2 entropy is
//! in nats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{check_mask, reduce_amplitudes, DensityMatrix, PureState};

/// Eigenvalues at or below this are left out of logarithmic sums.
pub const SPECTRUM_FLOOR: f64 = 1e-12;

fn support(spectrum: &[f64]) -> impl Iterator<Item = f64> + '_ {
    spectrum.iter().copied().filter(|&l| l > SPECTRUM_FLOOR)
}

/// −Σ λ log₂ λ.
pub fn shannon_bits(spectrum: &[f64]) -> f64 {
    (-support(spectrum).map(|l| l * l.log2()).sum::<f64>()).max(0.0)
}

/// Σ λ (log₂ λ)² − (Σ λ log₂ λ)².
pub fn capacity_of_spectrum(spectrum: &[f64]) -> f64 {
    let m1: f64 = support(spectrum).map(|l| l * l.log2()).sum();
    let m2: f64 = support(spectrum).map(|l| l * l.log2() * l.log2()).sum();
    (m2 - m1 * m1).max(0.0)
}

/// Σ λ³ − (Σ λ²)².
pub fn nonflatness_of_spectrum(spectrum: &[f64]) -> f64 {
    let p2: f64 = spectrum.iter().map(|l| l * l).sum();
    let p3: f64 = spectrum.iter().map(|l| l * l * l).sum();
    p3 - p2 * p2
}

pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_bits(&rho.eigenvalues()?))
}

/// −ln Tr ρ².
pub fn renyi2(rho: &DensityMatrix) -> f64 {
    -rho.purity().ln()
}

pub fn capacity(rho: &DensityMatrix) -> Result<f64> {
    Ok(capacity_of_spectrum(&rho.eigenvalues()?))
}

pub fn nonflatness(rho: &DensityMatrix) -> Result<f64> {
    Ok(nonflatness_of_spectrum(&rho.eigenvalues()?))
}

/// Nonzero spectrum of the reduced state on `qubits`, computed on whichever
/// side of the bipartition is smaller.
pub fn subsystem_spectrum(state: &PureState, qubits: u64) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    let mask = check_mask(qubits, n)?;
    let full = (1usize << n) - 1;
    if mask == full {
        return Ok(vec![1.0]);
    }
    let comp = full & !mask;
    let side = if comp.count_ones() < mask.count_ones() { comp } else { mask };
    let rho = DensityMatrix::from_trusted(reduce_amplitudes(state.amplitudes(), n, side));
    rho.eigenvalues()
}

/// S(ρ_I) in bits for the qubit subset `qubits`.
pub fn subsystem_entropy(state: &PureState, qubits: u64) -> Result<f64> {
    Ok(shannon_bits(&subsystem_spectrum(state, qubits)?))
}

/// Entropies of every nonempty union of parties, indexed by party bitmask.
///
/// Entries that were not computed hold NaN and read back as
/// [`Error::MissingEntry`].
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyVector {
    n_parties: usize,
    entries: Vec<f64>,
}

impl EntropyVector {
    /// A vector with every entry missing.
    pub fn empty(n_parties: usize) -> Self {
        EntropyVector {
            n_parties,
            entries: vec![f64::NAN; 1 << n_parties],
        }
    }

    pub fn zeros(n_parties: usize) -> Self {
        let mut v = Self::empty(n_parties);
        v.entries[1..].iter_mut().for_each(|e| *e = 0.0);
        v
    }

    /// Fills entries from a function of the party mask.
    pub fn from_fn(n_parties: usize, mut f: impl FnMut(u64) -> f64) -> Self {
        let mut v = Self::empty(n_parties);
        for m in 1..v.entries.len() {
            v.entries[m] = f(m as u64);
        }
        v
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn get(&self, mask: u64) -> Result<f64> {
        match self.entries.get(mask as usize) {
            Some(&v) if mask != 0 && !v.is_nan() => Ok(v),
            _ => Err(Error::MissingEntry(mask)),
        }
    }

    /// Panics if `mask` is zero or out of range.
    pub fn set(&mut self, mask: u64, value: f64) {
        assert!(mask != 0 && (mask as usize) < self.entries.len(), "mask {mask:#b} out of range");
        self.entries[mask as usize] = value;
    }

    /// Present entries as (mask, value), ordered by popcount then mask.
    pub fn ordered(&self) -> Vec<(u64, f64)> {
        let mut out: Vec<(u64, f64)> = (1..self.entries.len() as u64)
            .filter_map(|m| self.get(m).ok().map(|v| (m, v)))
            .collect();
        out.sort_by_key(|&(m, _)| (m.count_ones(), m));
        out
    }

    /// `{"mask": value}` with decimal mask keys.
    pub fn to_json_map(&self) -> BTreeMap<String, f64> {
        self.ordered().into_iter().map(|(m, v)| (m.to_string(), v)).collect()
    }

    pub fn from_json_map(n_parties: usize, map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut v = Self::empty(n_parties);
        for (k, &val) in map {
            let mask: u64 = k
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad subset mask {k:?}")))?;
            if mask == 0 || mask >= 1 << n_parties {
                return Err(Error::InvalidConfig(format!("mask {mask} out of range")));
            }
            v.set(mask, val);
        }
        Ok(v)
    }
}

/// Summary of one reduced spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub subsystem: u64,
    /// Von Neumann entropy, bits.
    pub s_vn: f64,
    /// Rényi-2 entropy, nats.
    pub s2: f64,
    /// Capacity of entanglement, bits².
    pub capacity: f64,
    pub nonflatness: f64,
}

impl SpectrumStats {
    pub fn from_spectrum(subsystem: u64, spectrum: &[f64]) -> Self {
        SpectrumStats {
            subsystem,
            s_vn: shannon_bits(spectrum),
            s2: -spectrum.iter().map(|l| l * l).sum::<f64>().ln(),
            capacity: capacity_of_spectrum(spectrum),
            nonflatness: nonflatness_of_spectrum(spectrum),
        }
    }
}

pub fn spectrum_stats(state: &PureState, qubits: u64) -> Result<SpectrumStats> {
    Ok(SpectrumStats::from_spectrum(qubits, &subsystem_spectrum(state, qubits)?))
}

/// Spectrum statistics of a subsystem of a mixed state.
pub fn spectrum_stats_mixed(rho: &DensityMatrix, qubits: u64) -> Result<SpectrumStats> {
    let full = (1u64 << rho.n_qubits()) - 1;
    let spectrum = if qubits == full {
        rho.eigenvalues()?
    } else {
        rho.partial_trace(qubits)?.eigenvalues()?
    };
    Ok(SpectrumStats::from_spectrum(qubits, &spectrum))
}

fn check_parties(parties: &[u64], n_qubits: usize) -> Result<()> {
    let full = if n_qubits >= 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
    let mut seen = 0u64;
    for &p in parties {
        if p == 0 || p & seen != 0 || p & !full != 0 {
            return Err(Error::InvalidParties);
        }
        seen |= p;
    }
    if parties.is_empty() {
        return Err(Error::InvalidParties);
    }
    Ok(())
}

/// Qubit mask covered by the parties selected in `party_mask`.
pub fn qubits_of(parties: &[u64], party_mask: u64) -> u64 {
    parties
        .iter()
        .enumerate()
        .filter(|(i, _)| party_mask >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | p)
}

/// Entropy vector of `state` for the given disjoint qubit subsets.
pub fn entropy_vector(state: &PureState, parties: &[u64]) -> Result<EntropyVector> {
    let all: Vec<u64> = (1..1u64 << parties.len()).collect();
    entropy_vector_partial(state, parties, &all)
}

/// Like [`entropy_vector`], computing only the listed party masks.
pub fn entropy_vector_partial(
    state: &PureState,
    parties: &[u64],
    masks: &[u64],
) -> Result<EntropyVector> {
    check_parties(parties, state.n_qubits())?;
    let mut ev = EntropyVector::empty(parties.len());
    for &m in masks {
        ev.set(m, subsystem_entropy(state, qubits_of(parties, m))?);
    }
    Ok(ev)
}

/// Single-qubit parties 0..n.
pub fn single_qubit_parties(n_qubits: usize) -> Vec<u64> {
    (0..n_qubits).map(|q| 1u64 << q).collect()
}

/// Entropy vector of a mixed state with parties given as qubit subsets.
pub fn entropy_vector_mixed(rho: &DensityMatrix, parties: &[u64]) -> Result<EntropyVector> {
    check_parties(parties, rho.n_qubits())?;
    let mut ev = EntropyVector::empty(parties.len());
    for m in 1..1u64 << parties.len() {
        ev.set(m, spectrum_stats_mixed(rho, qubits_of(parties, m))?.s_vn);
    }
    Ok(ev)
}
