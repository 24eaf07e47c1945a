use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::PureState;

const HERM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIG_CLIP, 0)` are treated as zero.
pub const EIG_CLIP: f64 = 1e-10;

/// A validated density operator on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: DMatrix<Complex64>,
}

/// Spreads the low bits of `value` onto the set bits of `mask`.
pub(crate) fn deposit(mut value: usize, mask: usize) -> usize {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value & 1 == 1 {
            out |= low;
        }
        value >>= 1;
        m &= m - 1;
    }
    out
}

/// Basis indices of the full register for each reduced index over `mask`.
pub(crate) fn scatter_table(mask: usize) -> Vec<usize> {
    (0..1usize << mask.count_ones()).map(|v| deposit(v, mask)).collect()
}

pub(crate) fn check_mask(mask: u64, n_qubits: usize) -> Result<usize> {
    let full = (1u64 << n_qubits) - 1;
    if mask == 0 || mask & !full != 0 {
        return Err(Error::InvalidSubsystem { mask, n_qubits });
    }
    Ok(mask as usize)
}

/// Reduced density matrix of raw amplitudes on the qubits in `keep`.
///
/// Kept qubits map to reduced indices in increasing order.
pub(crate) fn reduce_amplitudes(amps: &[Complex64], n_qubits: usize, keep: usize) -> DMatrix<Complex64> {
    let full = (1usize << n_qubits) - 1;
    let keep_idx = scatter_table(keep);
    let rest_idx = scatter_table(full & !keep);
    let k = keep_idx.len();
    let mut rho = DMatrix::<Complex64>::zeros(k, k);
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    for &r in &rest_idx {
        for (slot, &i) in v.iter_mut().zip(&keep_idx) {
            *slot = amps[r | i];
        }
        for j in 0..k {
            let cj = v[j].conj();
            if cj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..k {
                rho[(i, j)] += v[i] * cj;
            }
        }
    }
    rho
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let dim = m.nrows();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if dev > HERM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr));
        }
        let rho = DensityMatrix {
            n_qubits: dim.trailing_zeros() as usize,
            m,
        };
        rho.eigenvalues()?;
        Ok(rho)
    }

    /// Builds a matrix known to be valid by construction.
    pub(crate) fn from_trusted(m: DMatrix<Complex64>) -> Self {
        DensityMatrix {
            n_qubits: m.nrows().trailing_zeros() as usize,
            m,
        }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        let d = a.len();
        Self::from_trusted(DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()))
    }

    /// I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self::from_trusted(DMatrix::from_diagonal_element(d, d, Complex64::new(1.0 / d as f64, 0.0)))
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = probs.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
    }

    /// Convex mixture Σ pᵢ |ψᵢ⟩⟨ψᵢ|.
    pub fn mixture(terms: &[(f64, &PureState)]) -> Result<Self> {
        let d = terms.first().ok_or(Error::InvalidConfig("empty mixture".into()))?.1.dim();
        let mut m = DMatrix::zeros(d, d);
        for (p, s) in terms {
            if s.dim() != d {
                return Err(Error::DimensionMismatch(s.dim(), d));
            }
            m += DensityMatrix::from_pure(s).m * Complex64::new(*p, 0.0);
        }
        Self::new(m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// Tr ρ² from the Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order with jitter clipped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = if self.dim() == 1 {
            vec![self.m[(0, 0)].re]
        } else if self.dim() == 2 {
            let a = self.m[(0, 0)].re;
            let d = self.m[(1, 1)].re;
            let b = self.m[(0, 1)].norm();
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mid - rad, mid + rad]
        } else {
            self.m.clone().symmetric_eigenvalues().iter().copied().collect()
        };
        ev.sort_by(f64::total_cmp);
        for l in ev.iter_mut() {
            if *l < 0.0 {
                if *l < -EIG_CLIP {
                    return Err(Error::NotPositive(*l));
                }
                *l = 0.0;
            }
        }
        Ok(ev)
    }

    /// Reduced state on the qubits in `keep`, in increasing qubit order.
    pub fn partial_trace(&self, keep: u64) -> Result<DensityMatrix> {
        let keep = check_mask(keep, self.n_qubits)?;
        let full = (1usize << self.n_qubits) - 1;
        let keep_idx = scatter_table(keep);
        let rest_idx = scatter_table(full & !keep);
        let k = keep_idx.len();
        let m = DMatrix::from_fn(k, k, |i, j| {
            rest_idx
                .iter()
                .map(|&r| self.m[(r | keep_idx[i], r | keep_idx[j])])
                .sum()
        });
        Ok(Self::from_trusted(m))
    }
}

impl PureState {
    /// Reduced density matrix on the qubits in `keep`.
    pub fn partial_trace(&self, keep: u64) -> Result<DensityMatrix> {
        let keep = check_mask(keep, self.n_qubits())?;
        Ok(DensityMatrix::from_trusted(reduce_amplitudes(
            self.amplitudes(),
            self.n_qubits(),
            keep,
        )))
    }
}
