//! Trust-region search on linear interpolation models, after Powell's COBYLA
//! without constraints.
//!
//! The model lives on a simplex of m + 1 points: the best point x_b and m
//! others stored as displacement rows S_i = v_i − x_b. The inverse W = S⁻¹ is
//! kept up to date with rank-one updates, so the model gradient is
//! g = W (f − f_b).

use super::{OptimizerConfig, Recorder, StopReason};

/// Vertices farther than this many radii from x_b are pulled back in.
const FAR: f64 = 2.1;
/// Minimum distance of a vertex from the opposite face, in radii.
const FLAT: f64 = 0.25;
const REFRESH_EVERY: usize = 2000;

struct Simplex {
    xb: Vec<f64>,
    fb: f64,
    /// Displacement rows.
    s: Vec<Vec<f64>>,
    f: Vec<f64>,
    /// Columns of S⁻¹.
    w: Vec<Vec<f64>>,
    updates: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl Simplex {
    fn gradient(&self) -> Vec<f64> {
        let m = self.xb.len();
        let mut g = vec![0.0; m];
        for (wi, fi) in self.w.iter().zip(&self.f) {
            let df = fi - self.fb;
            for (gk, wk) in g.iter_mut().zip(wi) {
                *gk += wk * df;
            }
        }
        g
    }

    /// Puts the point x_b + d with value fd into row j.
    fn replace(&mut self, j: usize, d: Vec<f64>, fd: f64) {
        let denom = dot(&d, &self.w[j]);
        let wj: Vec<f64> = self.w[j].iter().map(|x| x / denom).collect();
        for (k, wk) in self.w.iter_mut().enumerate() {
            if k != j {
                let t = dot(&d, wk);
                for (a, b) in wk.iter_mut().zip(&wj) {
                    *a -= t * b;
                }
            }
        }
        self.w[j] = wj;
        self.s[j] = d;
        self.f[j] = fd;
        self.updates += 1;
        if self.f[j] < self.fb {
            self.promote(j);
        }
        if self.updates % REFRESH_EVERY == 0 {
            self.refresh();
        }
    }

    /// Makes vertex j the new best point.
    fn promote(&mut self, j: usize) {
        let dj = self.s[j].clone();
        for (i, si) in self.s.iter_mut().enumerate() {
            if i != j {
                for (a, b) in si.iter_mut().zip(&dj) {
                    *a -= b;
                }
            }
        }
        self.s[j] = dj.iter().map(|x| -x).collect();
        for (a, b) in self.xb.iter_mut().zip(&dj) {
            *a += b;
        }
        std::mem::swap(&mut self.fb, &mut self.f[j]);
        let m = self.xb.len();
        let mut sum = vec![0.0; m];
        for wi in &self.w {
            for (a, b) in sum.iter_mut().zip(wi) {
                *a += b;
            }
        }
        self.w[j] = sum.into_iter().map(|x| -x).collect();
    }

    /// Recomputes W from S to shed accumulated rounding.
    fn refresh(&mut self) {
        let m = self.xb.len();
        let s = nalgebra::DMatrix::from_fn(m, m, |i, k| self.s[i][k]);
        if let Some(inv) = s.try_inverse() {
            for (k, wk) in self.w.iter_mut().enumerate() {
                for (i, x) in wk.iter_mut().enumerate() {
                    *x = inv[(i, k)];
                }
            }
        }
    }
}

pub(super) fn run(rec: &mut Recorder<'_>, x0: &[f64], cfg: &OptimizerConfig) -> StopReason {
    let m = x0.len();
    let mut rho = cfg.rho_beg;
    let fb = rec.eval(x0);
    rec.checkpoint();
    let mut sx = Simplex {
        xb: x0.to_vec(),
        fb,
        s: Vec::with_capacity(m),
        f: Vec::with_capacity(m),
        w: Vec::with_capacity(m),
        updates: 0,
    };
    for i in 0..m {
        let mut d = vec![0.0; m];
        d[i] = rho;
        let mut x = x0.to_vec();
        x[i] += rho;
        sx.f.push(rec.eval(&x));
        sx.s.push(d);
        let mut wi = vec![0.0; m];
        wi[i] = 1.0 / rho;
        sx.w.push(wi);
    }
    if let Some(j) = (0..m).min_by(|&a, &b| sx.f[a].total_cmp(&sx.f[b])) {
        if sx.f[j] < sx.fb {
            sx.promote(j);
        }
    }
    rec.checkpoint();

    let mut last_best = sx.fb;
    loop {
        if let Some(t) = cfg.target_violation {
            if sx.fb <= -t {
                return StopReason::TargetReached;
            }
        }
        if rec.evals >= cfg.max_evals {
            return StopReason::BudgetExhausted;
        }

        let g = sx.gradient();
        let gn = norm(&g);
        let mut shrink_ok = true;
        if gn > 0.0 && gn.is_finite() {
            let d: Vec<f64> = g.iter().map(|x| -rho * x / gn).collect();
            let x: Vec<f64> = sx.xb.iter().zip(&d).map(|(a, b)| a + b).collect();
            let fx = rec.eval(&x);
            let predicted = rho * gn;
            let actual = sx.fb - fx;
            let j = pick_vertex(&sx, &d, rho);
            if actual > 0.0 || replace_helps(&sx, j, &d, rho) {
                sx.replace(j, d, fx);
            }
            if actual >= 0.1 * predicted {
                shrink_ok = false;
            }
        }
        if shrink_ok && !fix_geometry(&mut sx, rec, rho) {
            if rho <= cfg.rho_end {
                return StopReason::TrustRegion;
            }
            rho = (0.5 * rho).max(cfg.rho_end);
        }
        if sx.fb < last_best {
            last_best = sx.fb;
            rec.checkpoint();
        }
    }
}

/// Vertex whose replacement by x_b + d keeps the simplex best conditioned,
/// favouring vertices far from x_b.
fn pick_vertex(sx: &Simplex, d: &[f64], rho: f64) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (j, (wj, sj)) in sx.w.iter().zip(&sx.s).enumerate() {
        let dist = (norm(sj) / rho).max(1.0);
        let score = dot(d, wj).abs() * dist * dist;
        if score > best.1 {
            best = (j, score);
        }
    }
    best.0
}

fn replace_helps(sx: &Simplex, j: usize, d: &[f64], rho: f64) -> bool {
    norm(&sx.s[j]) > FAR * rho || dot(d, &sx.w[j]).abs() > 1.0
}

/// Replaces one badly placed vertex. Returns false when the simplex was
/// already acceptable at radius `rho`.
fn fix_geometry(sx: &mut Simplex, rec: &mut Recorder<'_>, rho: f64) -> bool {
    let mut far = (usize::MAX, FAR * rho);
    let mut flat = (usize::MAX, FLAT * rho);
    for (j, (sj, wj)) in sx.s.iter().zip(&sx.w).enumerate() {
        let dist = norm(sj);
        if dist > far.1 {
            far = (j, dist);
        }
        let height = 1.0 / norm(wj);
        if height < flat.1 {
            flat = (j, height);
        }
    }
    let j = if far.0 != usize::MAX { far.0 } else { flat.0 };
    if j == usize::MAX {
        return false;
    }
    let g = sx.gradient();
    let wj = &sx.w[j];
    let wn = norm(wj);
    let sign = if dot(&g, wj) > 0.0 { -1.0 } else { 1.0 };
    let d: Vec<f64> = wj.iter().map(|x| sign * 0.5 * rho * x / wn).collect();
    let x: Vec<f64> = sx.xb.iter().zip(&d).map(|(a, b)| a + b).collect();
    let fx = rec.eval(&x);
    sx.replace(j, d, fx);
    true
}
