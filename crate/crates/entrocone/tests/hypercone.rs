use entrocone::entropy::{entropy_vector, single_qubit_parties, EntropyVector};
use entrocone::hypercone::{closed_form_weights, edges_5, hypergraph_5, incidence_matrix_5, realize_5qubit};
use entrocone::inequal::ingleton_instances;
use entrocone::qsim::PureState;
use entrocone::seed;
use nalgebra::DMatrix;
use rand::Rng;

const PRINTED: [[u8; 15]; 15] = [
    [1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0],
    [1, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1],
    [1, 0, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1],
    [1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0],
    [0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0],
    [1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1],
    [1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

const PRINTED_COLUMNS: [&str; 15] = [
    "ABCD", "ABDE", "BCDE", "ACDE", "ABCE", "ABC", "BCD", "CDE", "ADE", "ABE", "ACD", "BDE", "ACE", "ABD", "BCE",
];

fn letters(s: &str) -> u64 {
    s.bytes().fold(0, |m, b| m | 1 << (b - b'A'))
}

fn det(m: &[[u8; 15]; 15]) -> f64 {
    DMatrix::from_fn(15, 15, |i, j| m[i][j] as f64).determinant()
}

#[test]
fn printed_system_differs_from_cut_incidence_by_one_entry() {
    let ours = incidence_matrix_5();
    let edges = edges_5();
    let col_of: Vec<usize> =
        PRINTED_COLUMNS.iter().map(|s| edges.iter().position(|&e| e == letters(s)).unwrap()).collect();
    let mut diffs = Vec::new();
    for i in 0..15 {
        for (j, &k) in col_of.iter().enumerate() {
            if PRINTED[i][j] != ours[i][k] {
                diffs.push((i, j));
            }
        }
    }
    // Row S_E, column BCE: E is not in BCE but the printed entry is 0.
    assert_eq!(diffs, vec![(4, 14)]);

    let mut fixed = PRINTED;
    fixed[4][14] = 1;
    assert!((det(&PRINTED).abs() - 7.0).abs() < 1e-9);
    assert!((det(&fixed).abs() - 6.0).abs() < 1e-9);
    assert!((det(&ours).abs() - 6.0).abs() < 1e-9);
}

fn haar_ev(s: u64) -> EntropyVector {
    let psi = PureState::haar(5, &mut seed::stream(s, 0));
    entropy_vector(&psi, &single_qubit_parties(5)).unwrap()
}

#[test]
fn haar_entropy_vectors_are_realized() {
    let full = ingleton_instances(5, true).unwrap();
    for s in 0..100 {
        let ev = haar_ev(s);
        let r = realize_5qubit(&ev).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.closed_form_deviation < 1e-10);
        let (_, g) = full.min_gap(&ev).unwrap();
        assert!(g >= -1e-8, "sample {s}: {g}");
    }
}

#[test]
fn closed_form_inverts_arbitrary_targets() {
    let mut rng = seed::stream(11, 0);
    for _ in 0..100 {
        let ev = EntropyVector::from_fn(5, |_| rng.random_range(0.0..3.0));
        let w = closed_form_weights(&ev).unwrap();
        let r = realize_5qubit(&ev).unwrap();
        for (a, b) in w.iter().zip(&r.weights) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn min_cuts_reproduce_designated_entropies() {
    for s in 0..20 {
        let ev = haar_ev(s);
        let r = realize_5qubit(&ev).unwrap();
        let h = hypergraph_5(&r.weights);
        for m in 1u64..31 {
            if m.count_ones() <= 2 {
                let cut = h.min_cut_entropy(m).unwrap();
                assert!((cut.weight - ev.get(m).unwrap()).abs() < 1e-9, "sample {s} region {m:#b}");
                assert_eq!(cut.cut_semantic, r.all_nonneg);
            }
        }
    }
}
