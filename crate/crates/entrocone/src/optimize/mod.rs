//! Derivative-free search for Ingleton violators over the state sphere.
//!
//! A pure state on n qubits is flattened to the real vector of its real
//! parts followed by its imaginary parts. The cost of a vector is the
//! minimum Ingleton gap of the state on its ray, so both optimizers work in
//! unconstrained Euclidean space.

mod cmaes;
mod cobyla;
mod resources;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::entropy::{shannon_bits, EntropyVector};
use crate::error::{Error, Result};
use crate::inequal::{ingleton_instances, InequalityInstance};
use crate::pool::map_indexed;
use crate::qsim::{reduce_amplitudes, DensityMatrix, PureState};
use crate::seed;

pub use cmaes::default_population;
pub use resources::{role_qubits, track_resources, violated_roles, ResourceRow, ResourceTable, SubsystemResources};

/// A pure state flattened to (Re ψ, Im ψ).
#[derive(Clone, Debug, PartialEq)]
pub struct RealVecState {
    pub n_qubits: usize,
    pub coords: Vec<f64>,
}

impl RealVecState {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let len = coords.len();
        if len < 4 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        Ok(RealVecState {
            n_qubits: len.trailing_zeros() as usize - 1,
            coords,
        })
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(RealVecState {
            n_qubits: self.n_qubits,
            coords: self.coords.iter().map(|c| c / n).collect(),
        })
    }

    pub fn distance(&self, other: &RealVecState) -> Result<f64> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch(self.coords.len(), other.coords.len()));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

pub fn vectorize(state: &PureState) -> RealVecState {
    let a = state.amplitudes();
    let mut coords: Vec<f64> = a.iter().map(|z| z.re).collect();
    coords.extend(a.iter().map(|z| z.im));
    RealVecState {
        n_qubits: state.n_qubits(),
        coords,
    }
}

/// Inverse of [`vectorize`]; the input is rescaled onto the unit sphere.
pub fn devectorize(x: &RealVecState) -> Result<PureState> {
    amplitudes_of(&x.coords).and_then(PureState::normalized)
}

fn amplitudes_of(coords: &[f64]) -> Result<Vec<Complex64>> {
    let d = coords.len() / 2;
    if coords.len() < 4 || !coords.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(coords.len()));
    }
    Ok((0..d).map(|i| Complex64::new(coords[i], coords[d + i])).collect())
}

/// Isotropic unit vector in `dim` dimensions.
pub fn sample_unit_sphere<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<RealVecState> {
    if dim < 2 {
        return Err(Error::InvalidConfig("sphere dimension must be at least 2".into()));
    }
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.0 {
            return RealVecState::new(coords.into_iter().map(|c| c / n).collect());
        }
    }
}

/// Which Ingleton instances the cost minimizes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every purity-reduced instance on the register.
    FullSet,
    /// The canonical instance with A, B, C, D on qubits 0..3.
    SingleInstance,
}

/// Minimum Ingleton gap of the state on a ray.
#[derive(Clone, Debug)]
pub struct Cost {
    n_qubits: usize,
    instances: Vec<InequalityInstance>,
    masks: Vec<u64>,
    /// Per instance: (index into `masks`, signed coefficient).
    terms: Vec<Vec<(usize, f64)>>,
}

impl Cost {
    /// Instances are over single-qubit parties of an `n_qubits` register.
    pub fn new(n_qubits: usize, instances: Vec<InequalityInstance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::InvalidConfig("cost needs at least one instance".into()));
        }
        let mut masks: Vec<u64> = instances.iter().flat_map(|i| i.masks()).collect();
        masks.sort_unstable();
        masks.dedup();
        let terms = instances
            .iter()
            .map(|inst| {
                if inst.n_parties != n_qubits {
                    return Err(Error::DimensionMismatch(inst.n_parties, n_qubits));
                }
                Ok(inst
                    .signed()
                    .into_iter()
                    .map(|(m, c)| (masks.binary_search(&m).unwrap(), c as f64))
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Cost {
            n_qubits,
            instances,
            masks,
            terms,
        })
    }

    pub fn for_scope(n_qubits: usize, scope: Scope) -> Result<Self> {
        match scope {
            Scope::FullSet => Self::new(n_qubits, ingleton_instances(n_qubits, true)?.instances),
            Scope::SingleInstance => {
                if n_qubits < 4 {
                    return Err(Error::InvalidConfig("Ingleton needs at least 4 qubits".into()));
                }
                Self::new(n_qubits, vec![InequalityInstance::ingleton(n_qubits, [1, 2, 4, 8])?])
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        2 << self.n_qubits
    }

    pub fn instances(&self) -> &[InequalityInstance] {
        &self.instances
    }

    fn mask_entropies(&self, amps: &[Complex64]) -> Vec<f64> {
        let n = self.n_qubits;
        let full = (1usize << n) - 1;
        self.masks
            .iter()
            .map(|&m| {
                let m = m as usize;
                if m == full {
                    return 0.0;
                }
                let comp = full & !m;
                let side = if comp.count_ones() < m.count_ones() { comp } else { m };
                let rho = DensityMatrix::from_trusted(reduce_amplitudes(amps, n, side));
                // Gaussian inputs are well inside the PSD tolerance.
                shannon_bits(&rho.eigenvalues().unwrap_or_default())
            })
            .collect()
    }

    /// (argmin instance index, minimum gap) for a normalized state.
    pub fn evaluate_state(&self, state: &PureState) -> Result<(usize, f64)> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(state.n_qubits(), self.n_qubits));
        }
        Ok(self.argmin(&self.mask_entropies(state.amplitudes())))
    }

    fn argmin(&self, s: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, t) in self.terms.iter().enumerate() {
            let g: f64 = t.iter().map(|&(k, c)| c * s[k]).sum();
            if g < best.1 {
                best = (i, g);
            }
        }
        best
    }

    /// Cost of a raw coordinate vector, projected onto the sphere first.
    /// Returns +inf for the zero vector.
    pub fn eval(&self, x: &[f64]) -> f64 {
        if x.len() != self.dim() {
            return f64::NAN;
        }
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return f64::INFINITY;
        }
        let d = x.len() / 2;
        let amps: Vec<Complex64> = (0..d).map(|i| Complex64::new(x[i] / norm, x[d + i] / norm)).collect();
        self.argmin(&self.mask_entropies(&amps)).1
    }

    pub fn cost(&self, x: &RealVecState) -> Result<f64> {
        if x.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(x.coords.len(), self.dim()));
        }
        Ok(self.eval(&x.coords))
    }

    /// Entropy vector over single-qubit parties restricted to the masks in use.
    pub fn entropy_vector(&self, state: &PureState) -> EntropyVector {
        let s = self.mask_entropies(state.amplitudes());
        let mut ev = EntropyVector::empty(self.n_qubits);
        for (&m, v) in self.masks.iter().zip(s) {
            ev.set(m, v);
        }
        ev
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    CmaEs,
    Cobyla,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    /// CMA-ES population; `None` selects 4 + ⌊3 ln m⌋.
    pub population: Option<usize>,
    /// CMA-ES initial step size.
    pub sigma0: f64,
    /// COBYLA initial trust radius.
    pub rho_beg: f64,
    /// COBYLA final trust radius.
    pub rho_end: f64,
    pub max_evals: usize,
    /// Stop once the cost reaches −target.
    pub target_violation: Option<f64>,
    pub scope: Scope,
    pub seed: u64,
    /// Keep the best point after every iteration for resource tracking.
    pub record_iterates: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::CmaEs,
            population: None,
            sigma0: 0.3,
            rho_beg: 0.5,
            rho_end: 1e-8,
            max_evals: 100_000,
            target_violation: None,
            scope: Scope::FullSet,
            seed: 0,
            record_iterates: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.population.is_some_and(|l| l < 4) {
            return bad("CMA-ES population must be at least 4");
        }
        if !(self.sigma0 > 0.0) {
            return bad("sigma0 must be positive");
        }
        if !(self.rho_end > 0.0 && self.rho_end < self.rho_beg) {
            return bad("need 0 < rho_end < rho_beg");
        }
        if self.max_evals == 0 {
            return bad("max_evals must be positive");
        }
        if self.target_violation.is_some_and(|t| !(t > 0.0)) {
            return bad("target violation must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// CMA-ES step size fell below 1e-10.
    StepSize,
    /// CMA-ES generation-best costs spanned less than 1e-9 over 50 generations.
    Plateau,
    /// The trust radius reached its final value.
    TrustRegion,
    TargetReached,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evals: usize,
    /// Best cost seen so far.
    pub cost: f64,
}

#[derive(Clone, Debug)]
pub struct OptRun {
    pub x0: RealVecState,
    pub trace: Vec<TracePoint>,
    /// Best point, normalized.
    pub x_star: RealVecState,
    pub final_cost: f64,
    pub evals: usize,
    pub stop: StopReason,
    /// Best point after each trace entry, when recording was requested.
    pub iterates: Vec<RealVecState>,
}

impl OptRun {
    /// False when the evaluation budget ran out first.
    pub fn converged(&self) -> bool {
        self.stop != StopReason::BudgetExhausted
    }

    pub fn state(&self) -> PureState {
        devectorize(&self.x_star).expect("x_star is normalized")
    }
}

/// Shared bookkeeping for both optimizers.
pub(crate) struct Recorder<'a> {
    cost: &'a Cost,
    pub evals: usize,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub trace: Vec<TracePoint>,
    pub iterates: Vec<RealVecState>,
    record: bool,
    n_qubits: usize,
}

impl<'a> Recorder<'a> {
    fn new(cost: &'a Cost, x0: &[f64], record: bool) -> Self {
        Recorder {
            cost,
            evals: 0,
            best_x: x0.to_vec(),
            best_f: f64::INFINITY,
            trace: Vec::new(),
            iterates: Vec::new(),
            record,
            n_qubits: cost.n_qubits(),
        }
    }

    pub fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let f = self.cost.eval(x);
        if f < self.best_f {
            self.best_f = f;
            self.best_x.copy_from_slice(x);
        }
        f
    }

    /// Appends the current best to the trace.
    pub fn checkpoint(&mut self) {
        self.trace.push(TracePoint {
            evals: self.evals,
            cost: self.best_f,
        });
        if self.record {
            let n = self.best_x.iter().map(|c| c * c).sum::<f64>().sqrt();
            self.iterates.push(RealVecState {
                n_qubits: self.n_qubits,
                coords: self.best_x.iter().map(|c| c / n).collect(),
            });
        }
    }
}

/// Runs the configured optimizer from `x0`.
pub fn minimize(x0: &RealVecState, cfg: &OptimizerConfig, cost: &Cost) -> Result<OptRun> {
    cfg.validate()?;
    if x0.coords.len() != cost.dim() {
        return Err(Error::DimensionMismatch(x0.coords.len(), cost.dim()));
    }
    let x0 = x0.normalized()?;
    let mut rec = Recorder::new(cost, &x0.coords, cfg.record_iterates);
    let stop = match cfg.method {
        Method::CmaEs => cmaes::run(&mut rec, &x0.coords, cfg),
        Method::Cobyla => cobyla::run(&mut rec, &x0.coords, cfg),
    };
    let x_star = RealVecState::new(rec.best_x.clone())?.normalized()?;
    Ok(OptRun {
        x0,
        final_cost: rec.best_f,
        evals: rec.evals,
        trace: rec.trace,
        x_star,
        stop,
        iterates: rec.iterates,
    })
}

/// Convenience wrapper: builds the cost for `cfg.scope` and minimizes.
pub fn minimize_scoped(x0: &RealVecState, cfg: &OptimizerConfig) -> Result<OptRun> {
    let cost = Cost::for_scope(x0.n_qubits, cfg.scope)?;
    minimize(x0, cfg, &cost)
}

/// Independent restarts from Haar-random starting points.
///
/// Restart `r` draws its start and optimizer stream from
/// `seed::derive(cfg.seed, r)`.
pub fn restarts(count: usize, cfg: &OptimizerConfig, cost: &Cost, jobs: Option<usize>) -> Result<Vec<OptRun>> {
    cfg.validate()?;
    map_indexed(jobs, count, |r| {
        let sub = seed::derive(cfg.seed, r as u64);
        let x0 = sample_unit_sphere(cost.dim(), &mut seed::stream(sub, 0))?;
        minimize(&x0, &OptimizerConfig { seed: sub, ..cfg.clone() }, cost)
    })
    .into_iter()
    .collect()
}
