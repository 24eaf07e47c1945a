//! (μ/μ_w, λ)-CMA-ES with cumulative step-size adaptation and rank-one plus
//! rank-μ covariance updates.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use super::{OptimizerConfig, Recorder, StopReason};
use crate::seed;

const SIGMA_TOL: f64 = 1e-10;
const PLATEAU_TOL: f64 = 1e-9;
const PLATEAU_WINDOW: usize = 50;
/// Costs closer than this rank as equal.
const RANK_FLOOR: f64 = 1e-9;

/// λ = 4 + ⌊3 ln m⌋.
pub fn default_population(dim: usize) -> usize {
    4 + (3.0 * (dim as f64).ln()).floor() as usize
}

pub(super) fn run(rec: &mut Recorder<'_>, x0: &[f64], cfg: &OptimizerConfig) -> StopReason {
    let n = x0.len();
    let nf = n as f64;
    let lambda = cfg.population.unwrap_or_else(|| default_population(n));
    let mu = lambda / 2;
    let raw: Vec<f64> = (0..mu).map(|i| (mu as f64 + 0.5).ln() - ((i + 1) as f64).ln()).collect();
    let wsum: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / wsum).collect();
    let mueff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

    let cc = (4.0 + mueff / nf) / (nf + 4.0 + 2.0 * mueff / nf);
    let cs = (mueff + 2.0) / (nf + mueff + 5.0);
    let c1 = 2.0 / ((nf + 1.3).powi(2) + mueff);
    let cmu = (1.0 - c1).min(2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nf + 2.0).powi(2) + mueff));
    let damps = 1.0 + 2.0 * (((mueff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + cs;
    let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
    let eigen_every = ((lambda as f64 / (c1 + cmu) / nf / 10.0).floor() as usize).max(1);

    let mut rng = seed::stream(cfg.seed, 1);
    let mut mean = DVector::from_column_slice(x0);
    let mut sigma = cfg.sigma0;
    let mut c = DMatrix::<f64>::identity(n, n);
    let mut b = DMatrix::<f64>::identity(n, n);
    let mut d = DVector::<f64>::from_element(n, 1.0);
    let mut ps = DVector::<f64>::zeros(n);
    let mut pc = DVector::<f64>::zeros(n);

    rec.eval(x0);
    rec.checkpoint();
    // Best cost of each generation.
    let mut history: Vec<f64> = Vec::new();
    let mut gen = 0usize;

    loop {
        if let Some(t) = cfg.target_violation {
            if rec.best_f <= -t {
                return StopReason::TargetReached;
            }
        }
        if rec.evals + lambda > cfg.max_evals {
            return StopReason::BudgetExhausted;
        }

        let mut pop: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let z = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            let y = &b * d.component_mul(&z);
            let x = &mean + sigma * &y;
            let f = rec.eval(x.as_slice());
            pop.push((f, y, z));
        }
        pop.sort_by_key(|(f, _, _)| {
            if f.is_finite() { (f / RANK_FLOOR).round() as i64 } else { i64::MAX }
        });

        let mut y_w = DVector::<f64>::zeros(n);
        let mut z_w = DVector::<f64>::zeros(n);
        for (w, (_, y, z)) in weights.iter().zip(&pop) {
            y_w.axpy(*w, y, 1.0);
            z_w.axpy(*w, z, 1.0);
        }
        mean.axpy(sigma, &y_w, 1.0);

        // C^{-1/2} y_w = B z_w
        ps = (1.0 - cs) * &ps + (cs * (2.0 - cs) * mueff).sqrt() * (&b * &z_w);
        let ps_norm = ps.norm();
        let hsig = ps_norm / (1.0 - (1.0 - cs).powi(2 * (gen as i32 + 1))).sqrt() / chi_n
            < 1.4 + 2.0 / (nf + 1.0);
        let hs = if hsig { 1.0 } else { 0.0 };
        pc = (1.0 - cc) * &pc + hs * (cc * (2.0 - cc) * mueff).sqrt() * &y_w;

        let keep = 1.0 - c1 - cmu + (1.0 - hs) * c1 * cc * (2.0 - cc);
        c *= keep;
        c.ger(c1, &pc, &pc, 1.0);
        for (w, (_, y, _)) in weights.iter().zip(&pop) {
            c.ger(cmu * w, y, y, 1.0);
        }
        sigma *= ((cs / damps) * (ps_norm / chi_n - 1.0)).exp();
        gen += 1;

        if gen % eigen_every == 0 {
            c = (&c + c.transpose()) * 0.5;
            let eig = c.clone().symmetric_eigen();
            b = eig.eigenvectors;
            d = eig.eigenvalues.map(|l| l.max(1e-300).sqrt());
        }

        rec.checkpoint();
        history.push(pop[0].0);
        if sigma < SIGMA_TOL {
            return StopReason::StepSize;
        }
        if history.len() >= PLATEAU_WINDOW {
            let recent = &history[history.len() - PLATEAU_WINDOW..];
            let hi = recent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = recent.iter().copied().fold(f64::INFINITY, f64::min);
            if hi - lo < PLATEAU_TOL {
                return StopReason::Plateau;
            }
        }
    }
}
