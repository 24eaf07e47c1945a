mod common;

use common::*;
use entrocone::magic::{magic_witness, pauli_spectrum_pure, sre};
use entrocone::qsim::{named, Circuit, DensityMatrix, PureState};
use entrocone::{seed, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sre_matches_explicit_pauli_sum(s in any::<u64>(), n in 1usize..4, alpha in prop::sample::select(vec![0.5, 2.0, 3.0])) {
        let psi = PureState::haar(n, &mut seed::stream(s, 0));
        let ours = sre(&psi, alpha).unwrap();
        let oracle = sre_oracle(psi.amplitudes(), n, alpha);
        prop_assert!((ours - oracle).abs() < 1e-10, "{} vs {}", ours, oracle);
    }

    #[test]
    fn clifford_circuits_leave_sre_unchanged(s in any::<u64>(), len in 1usize..40) {
        let mut rng = seed::stream(s, 1);
        let psi = PureState::haar(3, &mut rng);
        let cl = Circuit::random_clifford(3, len, &mut rng);
        let out = psi.run_circuit(&cl).unwrap();
        prop_assert!((sre(&psi, 2.0).unwrap() - sre(&out, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn stabilizer_states_have_zero_sre(s in any::<u64>(), n in 1usize..6, len in 0usize..60) {
        let cl = Circuit::random_clifford(n, len, &mut seed::stream(s, 2));
        let out = PureState::zero(n).run_circuit(&cl).unwrap();
        prop_assert!(sre(&out, 2.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn sre_is_additive(s in any::<u64>()) {
        let mut rng = seed::stream(s, 3);
        let a = PureState::haar(2, &mut rng);
        let b = PureState::haar(2, &mut rng);
        let joint = sre(&a.tensor(&b), 2.0).unwrap();
        prop_assert!((joint - sre(&a, 2.0).unwrap() - sre(&b, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn witness_equals_sre_on_pure_states(s in any::<u64>(), n in 1usize..4) {
        let psi = PureState::haar(n, &mut seed::stream(s, 4));
        let w = magic_witness(&DensityMatrix::from_pure(&psi), 2.0).unwrap();
        prop_assert!((w - sre(&psi, 2.0).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn t_state_magic() {
    let m2 = sre(&named::t_plus(), 2.0).unwrap();
    assert!((m2 - (4.0f64 / 3.0).ln()).abs() < 1e-12);
    assert!(sre(&named::t_plus(), 2.0).unwrap() > 0.0);
}

#[test]
fn pauli_spectrum_entries() {
    let spec = pauli_spectrum_pure(&named::ghz(2)).unwrap();
    // Digits: 0=I, 1=X, 2=Y, 3=Z, qubit 0 first.
    assert!((spec.get(&[3, 3]) - 1.0).abs() < 1e-12);
    assert!((spec.get(&[1, 1]) - 1.0).abs() < 1e-12);
    assert!((spec.get(&[2, 2]) + 1.0).abs() < 1e-12);
    assert!(spec.get(&[3, 0]).abs() < 1e-12);
}

#[test]
fn alpha_one_is_rejected() {
    assert!(matches!(sre(&PureState::zero(1), 1.0), Err(Error::AlphaOne)));
    assert!(matches!(magic_witness(&DensityMatrix::maximally_mixed(1), 1.0), Err(Error::AlphaOne)));
    assert!(sre(&PureState::zero(1), -1.0).is_err());
}

#[test]
fn witness_of_violator_marginal() {
    let w = magic_witness(&named::rho_abcd(), 2.0).unwrap();
    assert!((w + 1.268_511).abs() < 1e-6, "{w}");
}
