//! The lemma witness, the sequence certificate and level-two surjectivity.

use noether_forge::noether::{find_lemma_witness, max_noether_level, verify_theorem1};
use noether_forge::{GoodSemigroup, Result};

fn main() -> Result<()> {
    let s = GoodSemigroup::from_numerical_generators(&[3, 7, 10, 11])?;
    let w = find_lemma_witness(&s)?;
    println!(
        "witness d = {}, branch {}, beta - d - e = {}",
        w.d, w.ell, w.complement
    );

    let check = verify_theorem1(&s)?;
    println!("sequence certificate passed: {}", check.passed);
    for d in &check.certificate.decompositions {
        println!("  {} = {} + {}  ({:?})", d.element, d.left, d.right, d.rule);
    }

    let level = max_noether_level(&s, 2)?;
    println!(
        "H0(W^2): degree {}, h0 {}, surjective {}",
        level.degree, level.h0, level.surjective
    );
    for p in level.products.iter().filter(|p| p.exponent >= 8) {
        println!("  t^{} = {:?}", p.exponent, p.factors);
    }
    Ok(())
}
