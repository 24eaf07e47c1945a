//! Realizes the entropy vector of a Haar-random five-qubit state as
//! min-cuts of a weighted hypergraph on five vertices.

use entrocone::entropy::{entropy_vector, single_qubit_parties};
use entrocone::hypercone::{edges_5, hypergraph_5, realize_5qubit, regions_5};
use entrocone::qsim::PureState;
use entrocone::seed;

fn label(mask: u64) -> String {
    (0..5).filter(|i| mask >> i & 1 == 1).map(|i| char::from(b'A' + i as u8)).collect()
}

fn main() -> entrocone::Result<()> {
    let state = PureState::haar(5, &mut seed::stream(3, 0));
    let ev = entropy_vector(&state, &single_qubit_parties(5))?;
    let res = realize_5qubit(&ev)?;
    for (e, w) in edges_5().iter().zip(&res.weights) {
        println!("w[{:<4}] = {w:+.6}", label(*e));
    }
    println!("residual {:.2e}, closed form deviation {:.2e}", res.residual, res.closed_form_deviation);
    println!("all weights nonnegative: {}", res.all_nonneg);

    let graph = hypergraph_5(&res.weights);
    for r in regions_5() {
        let cut = graph.min_cut_entropy(r)?;
        println!("S_{:<2} = {:.6}  min cut {:.6}", label(r), ev.get(r)?, cut.weight);
    }
    Ok(())
}
