mod common;

use common::*;
use entrocone::qsim::{decompose_gate, named, sequence_unitary, Circuit, Gate, GateKind, PureState};
use entrocone::{seed, Error};
use proptest::prelude::*;
use rand::Rng;

fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let kind = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
    let mut qs: Vec<usize> = (0..n).collect();
    for i in 0..kind.arity() {
        let j = rng.random_range(i..n);
        qs.swap(i, j);
    }
    Gate::new(kind, &qs[..kind.arity()]).unwrap()
}

/// Reference unitary of one gate, built from its definition.
fn reference_unitary(n: usize, g: &Gate) -> nalgebra::DMatrix<C> {
    let q = g.qubits();
    match g.kind() {
        GateKind::Cnot => controlled_unitary(n, &q[..1], q[1], gate_matrix("X")),
        GateKind::Ch => controlled_unitary(n, &q[..1], q[1], gate_matrix("H")),
        GateKind::Ccx => controlled_unitary(n, &q[..2], q[2], gate_matrix("X")),
        k => controlled_unitary(n, &[], q[0], gate_matrix(k.name())),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gates_preserve_norm(s in any::<u64>(), n in 3usize..7, len in 0usize..40) {
        let mut rng = seed::stream(s, 0);
        let mut state = PureState::haar(n, &mut rng);
        for _ in 0..len {
            state.apply_gate_mut(&random_gate(n, &mut rng)).unwrap();
        }
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gate_action_matches_reference_matrix(s in any::<u64>()) {
        let mut rng = seed::stream(s, 1);
        let n = 4;
        let g = random_gate(n, &mut rng);
        let psi = PureState::haar(n, &mut rng);
        let out = psi.apply_gate(&g).unwrap();
        let u = reference_unitary(n, &g);
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let expect = &u * v;
        for (a, b) in out.amplitudes().iter().zip(expect.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn decompositions_equal_their_gate_up_to_phase() {
    let placements: [(GateKind, Vec<usize>); 5] = [
        (GateKind::S, vec![2]),
        (GateKind::Sdg, vec![0]),
        (GateKind::X, vec![1]),
        (GateKind::Ch, vec![0, 2]),
        (GateKind::Ccx, vec![2, 0, 1]),
    ];
    for (kind, qs) in placements {
        let g = Gate::new(kind, &qs).unwrap();
        let seq = decompose_gate(&g).unwrap();
        assert!(seq.iter().all(|x| matches!(x.kind(), GateKind::H | GateKind::T | GateKind::Tdg | GateKind::Cnot)));
        let u = sequence_unitary(3, &seq).unwrap();
        let d = phase_distance(&reference_unitary(3, &g), &u);
        assert!(d < 1e-12, "{kind}: {d}");
    }
    for kind in [GateKind::H, GateKind::T, GateKind::Tdg, GateKind::Cnot] {
        let qs: Vec<usize> = (0..kind.arity()).collect();
        assert!(decompose_gate(&Gate::new(kind, &qs).unwrap()).is_err());
    }
}

#[test]
fn decomposed_circuit_prepares_same_state() {
    let c = named::psi_abcdr_circuit();
    let a = PureState::zero(6).run_circuit(&c).unwrap();
    let b = PureState::zero(6).run_circuit(&c.decomposed()).unwrap();
    assert!(a.trace_distance(&b).unwrap() < 1e-12);
}

#[test]
fn rightmost_ket_character_is_qubit_zero() {
    assert_eq!(named::ket("0001"), 1);
    assert_eq!(named::ket("1000"), 8);
    let s = PureState::zero(2).apply_gate(&Gate::x(0)).unwrap();
    assert_eq!(s.amplitudes()[named::ket("01")], c(1.0, 0.0));
}

#[test]
fn violator_circuit_prepares_closed_form_state() {
    let out = PureState::zero(6).run_circuit(&named::psi_abcdr_circuit()).unwrap();
    assert!(out.trace_distance(&named::psi_abcdr()).unwrap() < 1e-12);
    let ghz = PureState::zero(5).run_circuit(&named::ghz_circuit(5)).unwrap();
    assert!(ghz.trace_distance(&named::ghz(5)).unwrap() < 1e-12);
}

#[test]
fn circuit_text_round_trip_and_errors() {
    let text = "# prep\nH 0\nCNOT 0 1\n\nccx 0 1 2  # toffoli\nTDG 2\n";
    let c = Circuit::parse(text, None).unwrap();
    assert_eq!(c.n_qubits(), 3);
    assert_eq!(c.len(), 4);
    assert_eq!(Circuit::parse(&c.to_string(), Some(3)).unwrap(), c);

    match Circuit::parse("H 0\nFOO 1\n", None) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(Circuit::parse("CNOT 1 1\n", None).is_err());
    assert!(Circuit::parse("H 3\n", Some(2)).is_err());
    assert!(Circuit::parse("CNOT 0\n", None).is_err());
}

#[test]
fn state_json_round_trip() {
    let s = PureState::haar(3, &mut seed::stream(9, 0));
    let back = PureState::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
    let plus = PureState::from_json(r#"{"n":1,"amplitudes":[[1,0],[1,0]]}"#).unwrap();
    assert!((plus.amplitudes()[1].re - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(PureState::from_json(r#"{"n":1,"amplitudes":[[0,0],[0,0]]}"#).is_err());
    assert!(PureState::from_json(r#"{"n":2,"amplitudes":[[1,0],[0,0]]}"#).is_err());
}

#[test]
fn global_phase_does_not_change_distance() {
    let s = PureState::haar(3, &mut seed::stream(4, 0));
    assert!(s.trace_distance(&s.with_phase(1.234)).unwrap() < 1e-7);
    assert!((PureState::zero(1).trace_distance(&PureState::basis(1, 1)).unwrap() - 1.0).abs() < 1e-15);
}
