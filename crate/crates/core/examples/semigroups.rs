//! Canonical ideals, classification and blowups of value semigroups.

use noether_forge::semigroup::{blowup_semigroup, canonical_k, classify, validate};
use noether_forge::{GoodSemigroup, Result, ValueVector};

fn main() -> Result<()> {
    let s = GoodSemigroup::from_numerical_generators(&[3, 7, 10, 11])?;
    println!(
        "S = <3,7,10,11>: conductor {}, gaps {:?}",
        s.conductor(),
        s.gaps()?
    );

    let k = canonical_k(&s)?;
    let interior: Vec<String> = k.interior().iter().map(|a| a.to_string()).collect();
    println!("K° = {{{}}}", interior.join(", "));

    let c = classify(&s)?;
    println!(
        "delta {}, eta {}, mu {}, Kunz {}, almost Gorenstein {}",
        c.delta, c.eta, c.mu, c.kunz, c.almost_gorenstein
    );
    let b = blowup_semigroup(&s)?;
    println!("blowup small elements: {:?}", b.small_elements());

    // a two-branch semigroup given by its truncation at the conductor
    let small = [[0, 0], [1, 3], [1, 5], [2, 3], [2, 6]].map(ValueVector::from);
    let t = GoodSemigroup::from_small_elements(ValueVector::from([2, 6]), small)?;
    println!("two-branch semigroup valid: {}", validate(&t).passed());
    let c = classify(&t)?;
    println!("two-branch: delta {}, eta {}, mu {}", c.delta, c.eta, c.mu);
    Ok(())
}
