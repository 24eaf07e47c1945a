//! Statistics over ensembles of states: Haar gap distributions, distances
//! between optimizer solutions, stability radii and entanglement-resource
//! correlations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::statistics::Statistics;

use crate::entropy::{entropy_vector_partial, spectrum_stats};
use crate::error::{Error, Result};
use crate::inequal::{ingleton_instances, min_gap, InequalityInstance, VIOLATION_THRESHOLD};
use crate::optimize::{
    devectorize, minimize, sample_unit_sphere, violated_roles, Cost, OptRun, OptimizerConfig, RealVecState,
};
use crate::pool::map_indexed;
use crate::qsim::PureState;
use crate::seed;

pub const HIST_BINS: usize = 60;
pub const KL_SMOOTHING: f64 = 1e-9;
pub const FIDELITY_BAR: f64 = 0.99;
/// Smallest sample count accepted by [`haar_gap_scan`].
pub const MIN_HAAR_SAMPLES: usize = 1000;
/// Smallest ensemble accepted by [`resource_correlation`].
pub const MIN_ENSEMBLE: usize = 30;
/// A re-minimization counts as converged when its cost is within this of the
/// reference cost.
pub const RECONVERGE_TOL: f64 = 1e-4;

// ---------------------------------------------------------------------------
// Distances

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    /// ‖x − y‖₂ of the real coordinate vectors.
    pub euclidean: f64,
    /// √(1 − |⟨ψ|φ⟩|²).
    pub trace: f64,
}

pub fn distance_record(x: &RealVecState, y: &RealVecState) -> Result<DistanceRecord> {
    let euclidean = x.distance(y)?;
    let trace = devectorize(x)?.trace_distance(&devectorize(y)?)?;
    Ok(DistanceRecord { euclidean, trace })
}

/// Distances between the solutions of each pair of runs.
pub fn solution_distances(pairs: &[(OptRun, OptRun)]) -> Result<Vec<DistanceRecord>> {
    pairs
        .iter()
        .map(|(a, b)| {
            if !a.converged() || !b.converged() {
                return Err(Error::InvalidConfig("distance pairs must be converged runs".into()));
            }
            distance_record(&a.x_star, &b.x_star)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Haar scans

/// Which Ingleton instances the Haar gap is taken over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapPolicy {
    /// The instance with A, B, C, D on qubits 0..3.
    #[default]
    Canonical,
    /// Minimum over the six relabelings of the four qubits.
    MinOverForms,
}

impl GapPolicy {
    pub fn instances(self) -> Result<Vec<InequalityInstance>> {
        Ok(match self {
            GapPolicy::Canonical => vec![InequalityInstance::ingleton_canonical()],
            GapPolicy::MinOverForms => ingleton_instances(4, false)?.instances,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapHistogram {
    pub policy: GapPolicy,
    pub samples: usize,
    pub mean: f64,
    pub std: f64,
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub kl_to_normal: f64,
    pub violations: usize,
    /// z-score of gap 0 under the fitted normal.
    pub zero_z: f64,
}

/// KL(p ‖ q) in nats for two histograms, each smoothed by `KL_SMOOTHING`
/// per bin and renormalized.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    if p.iter().chain(q).any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidConfig("histogram weights must be nonnegative".into()));
    }
    let smooth = |v: &[f64]| {
        let t: f64 = v.iter().map(|x| x + KL_SMOOTHING).sum();
        v.iter().map(|x| (x + KL_SMOOTHING) / t).collect::<Vec<_>>()
    };
    let (p, q) = (smooth(p), smooth(q));
    Ok(p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum::<f64>().max(0.0))
}

/// Fits a normal to `gaps` and bins them.
pub fn gap_histogram(gaps: &[f64], policy: GapPolicy) -> Result<GapHistogram> {
    if gaps.len() < 2 {
        return Err(Error::InvalidConfig("need at least two gaps".into()));
    }
    let mean = gaps.mean();
    let std = gaps.std_dev();
    if !(std > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let lo = gaps.min();
    let hi = gaps.max();
    let width = (hi - lo) / HIST_BINS as f64;
    let edges: Vec<f64> = (0..=HIST_BINS).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; HIST_BINS];
    for &g in gaps {
        let i = (((g - lo) / width) as usize).min(HIST_BINS - 1);
        counts[i] += 1;
    }
    let normal = Normal::new(mean, std).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let p: Vec<f64> = counts.iter().map(|&c| c as f64 / gaps.len() as f64).collect();
    let q: Vec<f64> = edges.windows(2).map(|w| normal.cdf(w[1]) - normal.cdf(w[0])).collect();
    Ok(GapHistogram {
        policy,
        samples: gaps.len(),
        mean,
        std,
        kl_to_normal: kl_divergence(&p, &q)?,
        violations: gaps.iter().filter(|&&g| g < -VIOLATION_THRESHOLD).count(),
        zero_z: -mean / std,
        edges,
        counts,
    })
}

/// Ingleton gap of the reduced state on qubits 0..3.
pub fn first_four_gap(state: &PureState, instances: &[InequalityInstance]) -> Result<f64> {
    let all: Vec<u64> = (1..16).collect();
    let ev = entropy_vector_partial(state, &[1, 2, 4, 8], &all)?;
    Ok(min_gap(instances, &ev)?.1)
}

/// Gaps of `samples` Haar-random `n_qubits` states; sample i uses stream i.
pub fn haar_gaps(
    n_qubits: usize,
    samples: usize,
    policy: GapPolicy,
    seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<f64>> {
    if n_qubits < 4 {
        return Err(Error::InvalidConfig("Haar scan needs at least 4 qubits".into()));
    }
    let instances = policy.instances()?;
    map_indexed(jobs, samples, |i| {
        let state = PureState::haar(n_qubits, &mut seed::stream(seed, i as u64));
        first_four_gap(&state, &instances)
    })
    .into_iter()
    .collect()
}

pub fn haar_gap_scan(
    n_qubits: usize,
    samples: usize,
    policy: GapPolicy,
    seed: u64,
    jobs: Option<usize>,
) -> Result<(GapHistogram, Vec<f64>)> {
    if samples < MIN_HAAR_SAMPLES {
        return Err(Error::InvalidConfig(format!("Haar scan needs at least {MIN_HAAR_SAMPLES} samples")));
    }
    let gaps = haar_gaps(n_qubits, samples, policy, seed, jobs)?;
    Ok((gap_histogram(&gaps, policy)?, gaps))
}

/// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
/// the phases of R's diagonal moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// U|+⟩^⊗n for a Haar unitary U.
pub fn haar_state_via_unitary<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
    let dim = 1usize << n_qubits;
    let u = haar_unitary(dim, rng);
    let plus = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    let amps = (0..dim).map(|i| u.row(i).iter().sum::<Complex64>() * plus).collect();
    PureState::normalized(amps)
}

/// Tr ρ² of qubit 0.
pub fn single_qubit_purity(state: &PureState) -> Result<f64> {
    Ok(state.partial_trace(1)?.purity())
}

// ---------------------------------------------------------------------------
// Stability

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityPoint {
    pub delta_norm: f64,
    /// NaN when every trial was excluded.
    pub mean_fidelity: f64,
    pub fidelities: Vec<f64>,
    /// Re-minimizations that did not return to the reference cost.
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityEstimate {
    /// Largest scanned ‖δ‖ such that it and every smaller scanned norm keep
    /// mean fidelity ≥ `FIDELITY_BAR`. `None` if the smallest fails.
    pub xi: Option<f64>,
    /// Half the spacing to the neighbouring scanned norm.
    pub xi_uncertainty: f64,
    pub curve: Vec<StabilityPoint>,
}

/// Perturbs `x_star` isotropically by each norm in `delta_norms`, re-minimizes
/// with `cfg`, and records the fidelity with the original solution.
///
/// Trial t at norm index i uses `seed::derive(cfg.seed, i * trials + t)` for
/// both the perturbation and the optimizer.
pub fn stability_scan(
    x_star: &RealVecState,
    delta_norms: &[f64],
    trials: usize,
    cfg: &OptimizerConfig,
    cost: &Cost,
    jobs: Option<usize>,
) -> Result<StabilityEstimate> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("need at least one trial".into()));
    }
    if delta_norms.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::InvalidConfig("perturbation norms must be nonnegative".into()));
    }
    let x_star = x_star.normalized()?;
    let reference = devectorize(&x_star)?;
    let reference_cost = cost.cost(&x_star)?;
    let dim = x_star.coords.len();

    let mut norms = delta_norms.to_vec();
    norms.sort_by(f64::total_cmp);
    let outcomes = map_indexed(jobs, norms.len() * trials, |k| -> Result<Option<f64>> {
        let delta = norms[k / trials];
        let sub = seed::derive(cfg.seed, k as u64);
        let dir = sample_unit_sphere(dim, &mut seed::stream(sub, 0))?;
        let start = RealVecState::new(
            x_star.coords.iter().zip(&dir.coords).map(|(x, d)| x + delta * d).collect(),
        )?;
        let run = minimize(&start, &OptimizerConfig { seed: sub, ..cfg.clone() }, cost)?;
        if !run.converged() || run.final_cost > reference_cost + RECONVERGE_TOL {
            return Ok(None);
        }
        Ok(Some(reference.overlap(&run.state())?.norm_sqr().min(1.0)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let curve: Vec<StabilityPoint> = norms
        .iter()
        .zip(outcomes.chunks(trials))
        .map(|(&delta_norm, chunk)| {
            let fidelities: Vec<f64> = chunk.iter().flatten().copied().collect();
            let mean_fidelity = if fidelities.is_empty() { f64::NAN } else { fidelities.iter().mean() };
            StabilityPoint {
                delta_norm,
                mean_fidelity,
                excluded: trials - fidelities.len(),
                fidelities,
            }
        })
        .collect();

    let passing = curve.iter().take_while(|p| p.mean_fidelity >= FIDELITY_BAR).count();
    let xi = passing.checked_sub(1).map(|i| curve[i].delta_norm);
    let xi_uncertainty = match passing {
        0 => 0.0,
        p if p < curve.len() => 0.5 * (curve[p].delta_norm - curve[p - 1].delta_norm),
        p if p >= 2 => 0.5 * (curve[p - 1].delta_norm - curve[p - 2].delta_norm),
        _ => 0.0,
    };
    Ok(StabilityEstimate { xi, xi_uncertainty, curve })
}

// ---------------------------------------------------------------------------
// Resource correlations

/// A violating state with the qubit masks of its A, B, C, D roles.
#[derive(Clone, Debug)]
pub struct Violator {
    pub state: PureState,
    pub roles: [u64; 4],
}

impl Violator {
    /// Takes the roles of the instance attaining the run's final cost.
    pub fn from_run(run: &OptRun, cost: &Cost) -> Result<Self> {
        Ok(Violator {
            state: run.state(),
            roles: violated_roles(run, cost)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsystemCorrelation {
    /// Over roles, A = bit 0.
    pub role_mask: u64,
    pub label: String,
    pub mean_s_vn: f64,
    pub mean_capacity: f64,
    /// `None` when either column has zero variance.
    pub pearson: Option<f64>,
}

/// Role masks of the ten subsystems in Ingleton's inequality.
pub fn ingleton_subsystems() -> Vec<u64> {
    InequalityInstance::ingleton_canonical().masks().collect()
}

/// "A", "CD", "ABD", ...
pub fn role_label(role_mask: u64) -> String {
    (0..4)
        .filter(|i| role_mask >> i & 1 == 1)
        .map(|i| char::from(b'A' + i as u8))
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::InvalidConfig("correlation needs at least two points".into()));
    }
    let sx = x.std_dev();
    let sy = y.std_dev();
    if !(sx > 0.0 && sy > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((x.covariance(y) / (sx * sy)).clamp(-1.0, 1.0))
}

/// Per subsystem: mean S_vN, mean C_E and their Pearson correlation across
/// the ensemble.
pub fn resource_correlation(violators: &[Violator], subsystems: &[u64]) -> Result<Vec<SubsystemCorrelation>> {
    if violators.len() < MIN_ENSEMBLE {
        return Err(Error::InvalidConfig(format!("ensemble needs at least {MIN_ENSEMBLE} states")));
    }
    subsystems
        .iter()
        .map(|&rm| {
            if rm == 0 || rm > 0b1111 {
                return Err(Error::InvalidConfig(format!("bad role mask {rm:#b}")));
            }
            let (s, c): (Vec<f64>, Vec<f64>) = violators
                .iter()
                .map(|v| {
                    let q = crate::optimize::role_qubits(v.roles, rm);
                    spectrum_stats(&v.state, q).map(|st| (st.s_vn, st.capacity))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip();
            let pearson = match pearson(&s, &c) {
                Ok(r) => Some(r),
                Err(Error::ZeroVariance) => None,
                Err(e) => return Err(e),
            };
            Ok(SubsystemCorrelation {
                role_mask: rm,
                label: role_label(rm),
                mean_s_vn: s.iter().mean(),
                mean_capacity: c.iter().mean(),
                pearson,
            })
        })
        .collect()
}
