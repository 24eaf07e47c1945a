//! Sizes of the Ingleton instance sets, with and without identifying a
//! subset with its complement.

use std::time::Instant;

use entrocone::inequal::ingleton_instances;

fn main() -> entrocone::Result<()> {
    println!("{:>2} {:>8} {:>8} {:>9}", "n", "pure", "mixed", "time");
    for n in 4..=8 {
        let t = Instant::now();
        let pure = ingleton_instances(n, true)?;
        let mixed = ingleton_instances(n, false)?;
        println!("{n:>2} {:>8} {:>8} {:>8.2?}", pure.len(), mixed.len(), t.elapsed());
    }
    let four = ingleton_instances(4, true)?;
    for inst in &four.instances {
        println!("{}", inst.pretty());
    }
    Ok(())
}
