//! The semigroup whose blowup along the canonical ideal is a given one.

use noether_forge::koszul::star_semigroup;
use noether_forge::{GoodSemigroup, Result};

fn main() -> Result<()> {
    for gens in [&[3, 5, 7][..], &[3, 7, 10, 11], &[4, 5, 6, 7]] {
        let s = GoodSemigroup::from_numerical_generators(gens)?;
        let st = star_semigroup(&s)?;
        println!(
            "{gens:?}: S_* generated by {:?}, genus {} eta {} mu {}, closed forms match: {}",
            st.semigroup.minimal_generators()?,
            st.genus,
            st.eta,
            st.mu,
            st.matches()
        );
    }
    Ok(())
}
