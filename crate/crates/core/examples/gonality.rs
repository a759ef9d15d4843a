//! Pencil searches and the general gonality bounds.

use noether_forge::curve::{curve_invariants, CurveSpec};
use noether_forge::linalg::q;
use noether_forge::linear_systems::{
    gonality_bounds, gonality_upper, rational_unibranch_applies, value_chain, MonomialSheaf,
};
use noether_forge::{GoodSemigroup, Result};

fn main() -> Result<()> {
    let curve = CurveSpec::monomial(&[4, 7, 10, 12, 13])?;
    let gon = gonality_upper(&curve, 256, &[])?;
    println!(
        "genus 6 curve: gonality {} (exact {}) via O<1, {}>",
        gon.bound, gon.exact, gon.witness.generator
    );

    let s = GoodSemigroup::from_numerical_generators(&[4, 7, 10, 12, 13])?;
    let pencil = MonomialSheaf::pencil(&s, 1)?;
    let chain: Vec<i64> = value_chain(&pencil.values, s.conductor())
        .iter()
        .map(|a| a.get(0))
        .collect();
    println!("values of O<1, t> up to the conductor: {chain:?}");

    let inv = curve_invariants(&curve)?;
    let b = gonality_bounds(inv.genus, 0, inv.eta, rational_unibranch_applies(&inv));
    println!("bounds: {b:?}");

    let nm = CurveSpec::parse_parametrized(&["t^4", "t^5+t^7", "t^10", "t^11"], vec![vec![q(0)]])?;
    let gon = gonality_upper(&nm, 256, &[])?;
    println!(
        "non-monomial curve: gonality <= {} (exact {})",
        gon.bound, gon.exact
    );
    Ok(())
}
