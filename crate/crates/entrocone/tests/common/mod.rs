//! Reference implementations used as test oracles. Deliberately naive and
//! independent of the library's fast paths.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// ρ_keep by explicit summation over the traced-out bits.
pub fn reduced(amps: &[C], n: usize, keep: &[usize]) -> DMatrix<C> {
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let mut rho = DMatrix::from_element(dk, dk, c(0.0, 0.0));
    let compose = |i: usize, j: usize| {
        let mut idx = 0usize;
        for (b, &q) in keep.iter().enumerate() {
            idx |= (i >> b & 1) << q;
        }
        for (b, &q) in rest.iter().enumerate() {
            idx |= (j >> b & 1) << q;
        }
        idx
    };
    for r in 0..1usize << rest.len() {
        for i in 0..dk {
            for k in 0..dk {
                rho[(i, k)] += amps[compose(i, r)] * amps[compose(k, r)].conj();
            }
        }
    }
    rho
}

pub fn qubits(mask: u64) -> Vec<usize> {
    (0..64).filter(|q| mask >> q & 1 == 1).collect()
}

/// Eigenvalues of a Hermitian matrix via the real 2d×2d embedding.
pub fn hermitian_eigenvalues(m: &DMatrix<C>) -> Vec<f64> {
    let d = m.nrows();
    let real = DMatrix::from_fn(2 * d, 2 * d, |i, j| {
        let z = m[(i % d, j % d)];
        match (i < d, j < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    // Each eigenvalue appears twice in the embedding.
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub fn entropy_bits(rho: &DMatrix<C>) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&p| p > 1e-14)
        .map(|p| -p * p.log2())
        .sum()
}

pub fn entropy_of(amps: &[C], n: usize, mask: u64) -> f64 {
    entropy_bits(&reduced(amps, n, &qubits(mask)))
}

pub fn pauli(k: u8) -> [[C; 2]; 2] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match k {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Tr(ρ P) for the Pauli string `digits` (qubit q uses digits[q]).
pub fn pauli_expectation(rho: &DMatrix<C>, digits: &[u8]) -> f64 {
    let d = rho.nrows();
    let mut acc = c(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            // ⟨j|P|i⟩ as a product of single-qubit entries.
            let mut p = c(1.0, 0.0);
            for (q, &k) in digits.iter().enumerate() {
                p *= pauli(k)[j >> q & 1][i >> q & 1];
            }
            acc += rho[(i, j)] * p;
        }
    }
    acc.re
}

/// Stabilizer Rényi entropy (natural log) from explicit Pauli strings.
pub fn sre_oracle(amps: &[C], n: usize, alpha: f64) -> f64 {
    let rho = outer(amps);
    let d = 1usize << n;
    let mut sum = 0.0;
    for s in 0..4usize.pow(n as u32) {
        let digits: Vec<u8> = (0..n).map(|q| (s / 4usize.pow(q as u32) % 4) as u8).collect();
        let e = pauli_expectation(&rho, &digits);
        sum += (e * e).powf(alpha) / d as f64;
    }
    sum.ln() / (1.0 - alpha)
}

pub fn outer(amps: &[C]) -> DMatrix<C> {
    let d = amps.len();
    DMatrix::from_fn(d, d, |i, j| amps[i] * amps[j].conj())
}

/// Full 2ⁿ×2ⁿ unitary of a target 2×2 matrix `u` on `target`, active when
/// every control bit is 1.
pub fn controlled_unitary(n: usize, controls: &[usize], target: usize, u: [[C; 2]; 2]) -> DMatrix<C> {
    let d = 1usize << n;
    let mut m = DMatrix::from_element(d, d, c(0.0, 0.0));
    for col in 0..d {
        if controls.iter().all(|&q| col >> q & 1 == 1) {
            let b = col >> target & 1;
            for out in 0..2 {
                let row = (col & !(1 << target)) | (out << target);
                m[(row, col)] += u[out][b];
            }
        } else {
            m[(col, col)] = c(1.0, 0.0);
        }
    }
    m
}

pub fn gate_matrix(name: &str) -> [[C; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match name {
        "H" => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        "S" => [[o, z], [z, c(0.0, 1.0)]],
        "SDG" => [[o, z], [z, c(0.0, -1.0)]],
        "T" => [[o, z], [z, c(s, s)]],
        "TDG" => [[o, z], [z, c(s, -s)]],
        "X" => [[z, o], [o, z]],
        _ => panic!("no matrix for {name}"),
    }
}

/// min over global phases of the max-abs entry difference.
pub fn phase_distance(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    let (i, _) = a.iter().enumerate().fold((0, 0.0), |best, (k, z)| if z.norm() > best.1 { (k, z.norm()) } else { best });
    let (r, cidx) = (i % a.nrows(), i / a.nrows());
    let phase = b[(r, cidx)] / a[(r, cidx)];
    let phase = phase / phase.norm();
    a.iter().zip(b.iter()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}
