//! Clifford index of the trigonal family and an upper bound by enumeration.

use noether_forge::koszul::family_cp;
use noether_forge::linear_systems::{clifford_classify, clifford_upper};
use noether_forge::Result;

fn main() -> Result<()> {
    for p in 1..=3 {
        let c = family_cp(p)?;
        let cl = clifford_classify(&c, &[])?;
        let up = clifford_upper(&c, 1 << 14, &[])?;
        println!(
            "C_{p}: genus {}, gonality {}, Clifford index {} ({:?}); best enumerated sheaf: {}",
            cl.genus, cl.gonality.bound, cl.value, cl.reason, up.record.description
        );
    }
    Ok(())
}
