//! Koszul cohomology of the canonical sheaf and dimensions of ideals.

use noether_forge::koszul::{
    family_cp, koszul_dimension, koszul_semigroup, quadrics, quadrics_hat,
};
use noether_forge::{GoodSemigroup, Result};

fn main() -> Result<()> {
    let s = GoodSemigroup::from_numerical_generators(&[3, 7, 10, 11])?;
    let k = koszul_semigroup(&s, 0, 2)?;
    println!("<3,7,10,11>: dim K_(0,2) = {}", k.dim_kpq);
    let h = GoodSemigroup::from_numerical_generators(&[2, 7])?;
    println!(
        "<2,7>: dim K_(0,2) = {}",
        koszul_semigroup(&h, 0, 2)?.dim_kpq
    );

    for p in 1..=3 {
        let c = family_cp(p)?;
        let dims: Vec<usize> = (0..=p as usize)
            .map(|j| koszul_dimension(&c, j, 2).map(|r| r.dim_kpq))
            .collect::<Result<_>>()?;
        println!("C_{p}: dim K_(j,2) for j = 0..={p}: {dims:?}");
    }

    for r in 2..=4 {
        let hat = quadrics_hat(&s, r)?;
        let own = quadrics(&s, r)?;
        println!(
            "r = {r}: blowup formula {} direct {:?}; curve formula {} direct {:?}",
            hat.formula_value, hat.direct_value, own.formula_value, own.direct_value
        );
    }
    Ok(())
}
