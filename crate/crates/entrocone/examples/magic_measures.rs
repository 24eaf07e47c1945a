//! Stabilizer Rényi entropy, the mixed-state witness and the capacity of
//! entanglement on a few named states.

use entrocone::entropy::spectrum_stats;
use entrocone::magic::{magic_witness, sre};
use entrocone::qsim::{named, DensityMatrix, PureState};

fn main() -> entrocone::Result<()> {
    let states: [(&str, PureState); 4] = [
        ("|0>", PureState::zero(1)),
        ("T|+>", named::t_plus()),
        ("GHZ4", named::ghz(4)),
        ("psi_ABCDR", named::psi_abcdr()),
    ];
    for (name, s) in &states {
        let rho = DensityMatrix::from_pure(s);
        println!(
            "{name:<10} M2 = {:.6}  W2 = {:.6}",
            sre(s, 2.0)?,
            magic_witness(&rho, 2.0)?
        );
    }

    let psi = named::psi_abcdr();
    let abcd = named::ABCD_PARTIES.iter().fold(0, |a, b| a | b);
    println!("W2 of rho_ABCD = {:.6}", magic_witness(&psi.partial_trace(abcd)?, 2.0)?);
    for (label, mask) in [("A", 1u64 << 2), ("CD", 0b110000), ("R", named::PURIFIER_MASK)] {
        let st = spectrum_stats(&psi, mask)?;
        println!(
            "{label:<3} S = {:.6}  C_E = {:.6}  F = {:.6}",
            st.s_vn, st.capacity, st.nonflatness
        );
    }
    Ok(())
}
