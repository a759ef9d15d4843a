//! Value semigroups and sheaf degrees on a parametrized two-branch curve.

use noether_forge::curve::{
    curve_invariants, local_value_semigroup, sheaf_summary, CurveSpec, SheafModel,
};
use noether_forge::linalg::q;
use noether_forge::Result;

fn main() -> Result<()> {
    let curve = CurveSpec::parse_parametrized(
        &["t*(t-1)^5", "t^2*(t-1)^3", "t^2*(t-1)^6", "t^2*(t-1)^7"],
        vec![vec![q(0), q(1)]],
    )?;
    let s = local_value_semigroup(&curve, &[q(0), q(1)])?;
    println!(
        "conductor {}, small elements {:?}",
        s.conductor(),
        s.small_elements()
    );

    let inv = curve_invariants(&curve)?;
    println!("genus {}, eta {}, mu {:?}", inv.genus, inv.eta, inv.mu);

    let f = SheafModel::parse(curve, &["t*(t-1)^3", "t^2*(t-1)^3"])?;
    let (deg, h0) = sheaf_summary(&f)?;
    for p in &deg.points {
        println!("  {:?} {:?}: degree {}", p.kind, p.fiber, p.degree);
    }
    println!("deg {} h0 {}", deg.total, h0);
    Ok(())
}
