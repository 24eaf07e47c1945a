//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use entrocone::agent::{train_to_violation, ActionSpace, AgentConfig, Outcome, Target};
use entrocone::ensemble::{
    haar_gap_scan, haar_gaps, ingleton_subsystems, resource_correlation, role_label, solution_distances,
    stability_scan, GapPolicy, Violator,
};
use entrocone::entropy::{entropy_vector, entropy_vector_mixed, single_qubit_parties, subsystem_entropy};
use entrocone::hypercone::realize_5qubit;
use entrocone::inequal::{ingleton_instances, mi_rewrite_terms, InequalityInstance};
use entrocone::magic::{magic_witness, sre};
use entrocone::optimize::{restarts, Cost, Method, OptRun, OptimizerConfig, Scope};
use entrocone::qsim::{decompose_gate, named, sequence_unitary, Circuit, DensityMatrix, Gate, GateKind, PureState};
use entrocone::seed;
use rand::Rng;

const SEED: u64 = 20_240_611;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

/// Runs shared by the max-violation and distance criteria.
#[derive(Default)]
struct Shared {
    full_scope_runs: Option<(Vec<OptRun>, Vec<OptRun>)>,
}

fn criterion_1(_: &mut Shared) -> Check {
    let expected = [3usize, 90, 780, 6090, 39270];
    let t0 = Instant::now();
    let with: Vec<usize> = (4..=8).map(|n| ingleton_instances(n, true).unwrap().len()).collect();
    let secs = t0.elapsed().as_secs_f64();
    let without: Vec<usize> = (4..=8).map(|n| ingleton_instances(n, false).unwrap().len()).collect();
    check(
        with == expected && secs < 30.0,
        format!("counts {with:?} (without purity {without:?}), expected {expected:?}; {secs:.1} s"),
    )
}

fn criterion_2(_: &mut Shared) -> Check {
    let t0 = Instant::now();
    let space = ActionSpace::from_kinds(4, &[GateKind::H, GateKind::Cnot]).unwrap();
    let target = Target::new(single_qubit_parties(4), vec![InequalityInstance::mmi(4, 1, 2, 4).unwrap()]).unwrap();
    let cfg = AgentConfig { seed: 7, max_episodes: 5000, ..AgentConfig::default() };
    let res = train_to_violation(&PureState::zero(4), &space, &target, &cfg).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    match res.outcome {
        Outcome::Violated { state, gap, episode, circuit, .. } => {
            let ev = target.entropy_vector(&state).unwrap();
            let ones = ev.ordered().iter().all(|(_, s)| (s - 1.0).abs() < 1e-9);
            let diff = -gap;
            check(
                ones && (diff - 1.0).abs() < 1e-9 && secs < 60.0,
                format!("episode {episode}, {} gates, difference {diff:.9}, all ones {ones}; {secs:.1} s", circuit.len()),
            )
        }
        Outcome::BudgetExhausted { episodes, best_gap } => {
            check(false, format!("no violation in {episodes} episodes (best gap {best_gap})"))
        }
    }
}

fn criterion_3(_: &mut Shared) -> Check {
    let gap = || {
        let ev = entropy_vector_mixed(&named::rho_abcd(), &single_qubit_parties(4)).unwrap();
        ingleton_instances(4, false).unwrap().min_gap(&ev).unwrap().1
    };
    let (a, b) = (gap(), gap());
    let oracle = -0.122_556_248_918;
    check(
        a < 0.0 && (a - b).abs() <= 1e-9 && (a - oracle).abs() <= 1e-9,
        format!("min gap {a:.12}, repeat {b:.12}, oracle {oracle}"),
    )
}

fn criterion_4(_: &mut Shared) -> Check {
    let t0 = Instant::now();
    let set = ingleton_instances(5, true).unwrap();
    let (mut worst_residual, mut worst_gap) = (0.0f64, f64::INFINITY);
    for i in 0..100 {
        let psi = PureState::haar(5, &mut seed::stream(SEED, i));
        let ev = entropy_vector(&psi, &single_qubit_parties(5)).unwrap();
        worst_residual = worst_residual.max(realize_5qubit(&ev).unwrap().residual);
        worst_gap = worst_gap.min(set.min_gap(&ev).unwrap().1);
    }
    let secs = t0.elapsed().as_secs_f64();
    check(
        worst_residual < 1e-9 && worst_gap >= -1e-8 && secs < 60.0,
        format!("max residual {worst_residual:.2e}, min gap {worst_gap:.6}; {secs:.1} s"),
    )
}

fn criterion_5(shared: &mut Shared) -> Check {
    let t0 = Instant::now();
    let cost = Cost::for_scope(6, Scope::FullSet).unwrap();
    let run = |k: u64, method: Method| {
        let cfg = OptimizerConfig { method, seed: seed::derive(SEED, k), ..OptimizerConfig::default() };
        restarts(20, &cfg, &cost, None).unwrap()
    };
    let cma = run(0, Method::CmaEs);
    let cobyla = run(1, Method::Cobyla);
    let secs = t0.elapsed().as_secs_f64();
    let mut pass = secs < 1800.0;
    let mut parts = Vec::new();
    for (name, runs) in [("cma-es", &cma), ("cobyla", &cobyla)] {
        let best = runs.iter().map(|r| r.final_cost).fold(f64::INFINITY, f64::min);
        let near = runs.iter().filter(|r| r.final_cost <= best + 0.01).count();
        pass &= (best - (-0.1699)).abs() <= 0.005 && near * 5 >= runs.len() * 4;
        parts.push(format!("{name} best {best:.6}, {near}/{} within 0.01", runs.len()));
    }
    shared.full_scope_runs = Some((cma, cobyla));
    check(pass, format!("{}; {secs:.0} s", parts.join("; ")))
}

fn criterion_6(_: &mut Shared) -> Check {
    let t0 = Instant::now();
    let (h, _) = haar_gap_scan(8, 10_000, GapPolicy::Canonical, SEED, None).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    check(
        (h.mean - 0.2026).abs() <= 0.01
            && (h.std - 0.0321).abs() <= 0.01
            && h.violations == 0
            && h.zero_z.abs() >= 5.0
            && secs < 1200.0,
        format!(
            "mu {:.4}, sigma {:.4}, violations {}, z {:.2}, KL {:.4}; {secs:.1} s",
            h.mean, h.std, h.violations, h.zero_z, h.kl_to_normal
        ),
    )
}

fn criterion_7(_: &mut Shared) -> Check {
    let t0 = Instant::now();
    let cost = Cost::for_scope(6, Scope::SingleInstance).unwrap();
    let cfg = OptimizerConfig { method: Method::Cobyla, scope: Scope::SingleInstance, ..OptimizerConfig::default() };
    let reference = restarts(1, &OptimizerConfig { seed: seed::derive(SEED, 0), ..cfg.clone() }, &cost, None)
        .unwrap()
        .remove(0);
    let norms: Vec<f64> = (1..=10).map(|k| 0.02 * k as f64).collect();
    let scan_cfg = OptimizerConfig { seed: seed::derive(SEED, 1), ..cfg };
    let est = stability_scan(&reference.x_star, &norms, 8, &scan_cfg, &cost, None).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let curve: Vec<String> = est.curve.iter().map(|p| format!("{:.2}:{:.4}", p.delta_norm, p.mean_fidelity)).collect();
    let pass = est.xi.is_some_and(|x| (0.05 - 1e-12..=0.11 + 1e-12).contains(&x)) && secs < 1800.0;
    check(
        pass,
        format!(
            "xi {} +/- {:.2}, reference gap {:.6}, curve [{}]; {secs:.0} s",
            est.xi.map_or("none".into(), |x| format!("{x:.2}")),
            est.xi_uncertainty,
            reference.final_cost,
            curve.join(" ")
        ),
    )
}

fn criterion_8(shared: &mut Shared) -> Check {
    let Some((cma, cobyla)) = &shared.full_scope_runs else {
        return check(false, "no converged runs from the max-violation criterion");
    };
    let pairs: Vec<(OptRun, OptRun)> = cma.iter().cloned().zip(cobyla.iter().cloned()).collect();
    if let Some(i) = pairs.iter().position(|(a, b)| a.final_cost >= -1e-6 || b.final_cost >= -1e-6) {
        return check(false, format!("pair {i} is not a violator pair"));
    }
    match solution_distances(&pairs) {
        Ok(d) => {
            let min_e = d.iter().map(|r| r.euclidean).fold(f64::INFINITY, f64::min);
            let min_t = d.iter().map(|r| r.trace).fold(f64::INFINITY, f64::min);
            check(min_e > 0.5 && min_t > 0.5, format!("{} pairs, min D_E {min_e:.4}, min D_T {min_t:.4}", d.len()))
        }
        Err(e) => check(false, format!("{e}")),
    }
}

fn criterion_9(_: &mut Shared) -> Check {
    let t0 = Instant::now();
    let cost = Cost::for_scope(6, Scope::SingleInstance).unwrap();
    let cfg = OptimizerConfig { scope: Scope::SingleInstance, seed: seed::derive(SEED, 9), ..OptimizerConfig::default() };
    let runs = restarts(110, &cfg, &cost, None).unwrap();
    let best = runs.iter().map(|r| r.final_cost).fold(f64::INFINITY, f64::min);
    let violators: Vec<Violator> = runs
        .iter()
        .filter(|r| r.converged() && r.final_cost <= best + 0.01)
        .map(|r| Violator::from_run(r, &cost).unwrap())
        .collect();
    if violators.len() < 100 {
        return check(false, format!("only {} maximal violators of 110 restarts", violators.len()));
    }
    let corr = resource_correlation(&violators, &ingleton_subsystems()).unwrap();
    let rho = |label: &str| corr.iter().find(|c| c.label == label).and_then(|c| c.pearson);
    let (a, b, cd) = (rho("A"), rho("B"), rho("CD"));
    let pass = cd.is_some_and(|r| r <= -0.9) && a.is_some_and(|r| r <= -0.85) && b.is_some_and(|r| r <= -0.85);
    let all: Vec<String> = corr
        .iter()
        .map(|c| format!("{} {}", role_label(c.role_mask), c.pearson.map_or("undefined".into(), |r| format!("{r:.4}"))))
        .collect();
    let secs = t0.elapsed().as_secs_f64();
    check(pass, format!("{} violators, best {best:.6}; {}; {secs:.0} s", violators.len(), all.join(", ")))
}

fn phase_close(a: &PureState, b: &PureState) -> bool {
    a.trace_distance(b).unwrap() < 1e-7
}

fn criterion_10(_: &mut Shared) -> Check {
    let mut rng = seed::stream(SEED, 10);
    let mut failures = Vec::new();
    let mut expect = |ok: bool, name: &str| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    for _ in 0..20 {
        let n = rng.random_range(2..7);
        let psi = PureState::haar(n, &mut rng);
        let full = (1u64 << n) - 1;
        let s = |m: u64| if m == 0 { 0.0 } else { subsystem_entropy(&psi, m).unwrap() };
        let dual = (1..full).all(|m| (s(m) - s(full ^ m)).abs() < 1e-10);
        expect(dual, "purity duality");
        let (a, b, c) = (1u64, 2u64, if n > 2 { 4u64 } else { 0 });
        expect(s(a) + s(b) - s(a | b) >= -1e-10, "subadditivity");
        expect(s(a | b) + s(b | c) - s(b) - s(a | b | c) >= -1e-10, "strong subadditivity");
    }

    for _ in 0..10 {
        let cl = Circuit::random_clifford(4, 40, &mut rng);
        let stab = PureState::zero(4).run_circuit(&cl).unwrap();
        expect(sre(&stab, 2.0).unwrap().abs() < 1e-10, "SRE faithfulness");
        let psi = PureState::haar(3, &mut rng);
        let moved = psi.run_circuit(&Circuit::random_clifford(3, 30, &mut rng)).unwrap();
        expect((sre(&psi, 2.0).unwrap() - sre(&moved, 2.0).unwrap()).abs() < 1e-10, "SRE Clifford invariance");
        let phi = PureState::haar(2, &mut rng);
        let joint = sre(&psi.tensor(&phi), 2.0).unwrap();
        expect((joint - sre(&psi, 2.0).unwrap() - sre(&phi, 2.0).unwrap()).abs() < 1e-10, "SRE additivity");
        let w = magic_witness(&DensityMatrix::from_pure(&psi), 2.0).unwrap();
        expect((w - sre(&psi, 2.0).unwrap()).abs() < 1e-10, "witness equals SRE");
    }
    expect(sre(&named::t_plus(), 2.0).unwrap() > 0.1, "SRE of T state");

    for _ in 0..20 {
        let psi = PureState::haar(5, &mut rng);
        let ev = entropy_vector(&psi, &single_qubit_parties(5)).unwrap();
        let roles = [1u64, 4, 8, 16];
        let g = InequalityInstance::ingleton(5, roles).unwrap().gap(&ev).unwrap();
        let (x, y, z) = mi_rewrite_terms(&ev, roles).unwrap();
        expect((g - x - y - z).abs() < 1e-10, "mutual-information rewrite");
    }

    for g in [Gate::s(1), Gate::new(GateKind::Sdg, &[0]).unwrap(), Gate::x(2), Gate::ch(2, 0), Gate::ccx(0, 2, 1)] {
        let seq = decompose_gate(&g).unwrap();
        let psi = PureState::haar(3, &mut rng);
        let a = psi.apply_gate(&g).unwrap();
        let mut b = psi.clone();
        for h in &seq {
            b.apply_gate_mut(h).unwrap();
        }
        expect(phase_close(&a, &b), "decomposition");
        let u = sequence_unitary(3, &seq).unwrap();
        let v = sequence_unitary(3, std::slice::from_ref(&g)).unwrap();
        let (i, _) = v.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).unwrap();
        let phase = u[i] / v[i];
        expect(u.iter().zip(v.iter()).all(|(p, q)| (p - q * phase).norm() < 1e-12), "decomposition unitary");
    }

    let cost = Cost::for_scope(5, Scope::FullSet).unwrap();
    let cfg = OptimizerConfig { max_evals: 4000, seed: SEED, ..OptimizerConfig::default() };
    let (r1, r2) = (restarts(2, &cfg, &cost, None).unwrap(), restarts(2, &cfg, &cost, Some(2)).unwrap());
    expect(r1.iter().zip(&r2).all(|(a, b)| a.x_star == b.x_star && a.trace == b.trace), "optimizer determinism");
    let gaps = |jobs| haar_gaps(5, 200, GapPolicy::Canonical, SEED, jobs).unwrap();
    expect(gaps(None) == gaps(Some(3)), "scan determinism");

    failures.dedup();
    check(failures.is_empty(), if failures.is_empty() { "all property checks hold".into() } else { failures.join(", ") })
}

fn main() -> ExitCode {
    let criteria: [fn(&mut Shared) -> Check; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut shared = Shared::default();
    let mut failed = 0;
    for (i, f) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(|| f(&mut shared)))
            .unwrap_or_else(|_| check(false, "panicked"));
        if !result.pass {
            failed += 1;
        }
        println!("criterion {}: {}  {}", i + 1, if result.pass { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
