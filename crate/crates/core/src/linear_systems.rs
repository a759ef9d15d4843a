//! Pencils, gonality and Clifford index bounds.
//!
//! On a monomial curve with one unibranch singular point every sheaf we
//! enumerate is monomial: it is described by a value set `E` at `t = 0` and a
//! pole bound `d` at infinity. Then `h⁰ = |E ∩ (-∞, d]|` and
//! `h¹ = |(K - E) ∩ (-∞, β - 2 - d]|` with `K - E = {a : a + E ⊆ K}`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{curve_invariants, sheaf_summary, CurveInvariants, CurveSpec, SheafModel};
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::semigroup::{canonical_k, distance, GoodSemigroup, IdealValueSet, ValueSet};
use crate::value::{box_points, ValueVector};

/// A monomial rank-one sheaf on a unibranch monomial curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSheaf {
    pub values: ValueSet,
    pub pole_at_infinity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafNumbers {
    pub degree_at_point: i64,
    pub degree_at_infinity: i64,
    pub degree: i64,
    pub h0: u64,
    pub h1: u64,
}

impl MonomialSheaf {
    /// `O⟨1, t^r⟩` on the curve with semigroup `s`.
    pub fn pencil(s: &GoodSemigroup, r: i64) -> Result<Self> {
        let values = union_with_shift(s, r)?;
        Ok(MonomialSheaf {
            values,
            pole_at_infinity: r.max(0),
        })
    }

    /// Degree, `h⁰` and `h¹` relative to `S`.
    pub fn numbers(&self, s: &GoodSemigroup, k: &IdealValueSet) -> Result<SheafNumbers> {
        let e = &self.values;
        let d = self.pole_at_infinity;
        // deg_P = dim(F/O); distance works for sets containing S
        let degree_at_point = distance(e, s.values())? as i64;
        let h0 = count_upto(e, d);
        let h1 = dual_count(e, k, s.conductor().get(0) - 2 - d);
        Ok(SheafNumbers {
            degree_at_point,
            degree_at_infinity: d,
            degree: degree_at_point + d,
            h0,
            h1,
        })
    }
}

fn count_upto(e: &ValueSet, top: i64) -> u64 {
    let lo = e.min().get(0);
    (lo..=top)
        .filter(|&a| e.contains(&ValueVector::scalar(a)))
        .count() as u64
}

/// `|{a <= top : a + E ⊆ K}|`.
fn dual_count(e: &ValueSet, k: &IdealValueSet, top: i64) -> u64 {
    let lo = -e.min().get(0);
    let kb = k.values().conductor().get(0);
    (lo..=top)
        .filter(|&a| {
            let hi = e.conductor().get(0).max(kb - a);
            (e.min().get(0)..=hi)
                .filter(|&x| e.contains(&ValueVector::scalar(x)))
                .all(|x| k.contains(&ValueVector::scalar(a + x)))
        })
        .count() as u64
}

/// `S ∪ (r + S)`.
fn union_with_shift(s: &GoodSemigroup, r: i64) -> Result<ValueSet> {
    let beta = s.conductor().get(0);
    let lo = ValueVector::scalar(r.min(0));
    let hi = ValueVector::scalar(beta + r.abs());
    ValueSet::from_box_predicate(&lo, &hi, |a| {
        s.contains(a) || s.contains(&(a - &ValueVector::scalar(r)))
    })
}

/// A pencil `O⟨1, f⟩` with its degree and `h⁰`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilCandidate {
    /// The second generator, as text.
    pub generator: String,
    /// Exponent `r` when the pencil is `O⟨1, t^r⟩`.
    pub exponent: Option<i64>,
    pub degree: u64,
    pub degree_at_singular_points: u64,
    pub h0: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GonalityResult {
    pub bound: u64,
    /// Set for monomial curves with one unibranch singular point, where the
    /// pencils `O⟨1, t^r⟩` are known to suffice.
    pub exact: bool,
    pub witness: PencilCandidate,
    pub candidates_checked: usize,
    pub budget_exhausted: bool,
}

fn monomial_name(r: i64) -> String {
    format!("t^{r}")
}

/// Range of exponents for the pencil family.
fn pencil_range(beta_norm: i64, genus: u64) -> Vec<i64> {
    (-beta_norm..=genus as i64 + 1)
        .filter(|&r| r != 0)
        .collect()
}

fn monomial_pencils(s: &GoodSemigroup, budget: usize) -> Result<(Vec<PencilCandidate>, bool)> {
    let k = canonical_k(s)?;
    let g = s.delta()?;
    let range = pencil_range(s.conductor().get(0), g);
    let exhausted = range.len() > budget;
    let out = range
        .into_iter()
        .take(budget)
        .map(|r| {
            let n = MonomialSheaf::pencil(s, r)?.numbers(s, &k)?;
            Ok(PencilCandidate {
                generator: monomial_name(r),
                exponent: Some(r),
                degree: n.degree as u64,
                degree_at_singular_points: n.degree_at_point as u64,
                h0: n.h0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((out, exhausted))
}

fn analytic_candidate(
    curve: &CurveSpec,
    f: RatFunc,
    exponent: Option<i64>,
) -> Result<PencilCandidate> {
    let text = f.to_string();
    let sheaf = SheafModel::new(curve.clone(), vec![f])?;
    let (deg, h0) = sheaf_summary(&sheaf)?;
    let singular = deg
        .points
        .iter()
        .filter(|p| p.kind == crate::curve::PointKind::Singular)
        .map(|p| p.degree)
        .sum();
    Ok(PencilCandidate {
        generator: text,
        exponent,
        degree: deg.total,
        degree_at_singular_points: singular,
        h0,
    })
}

fn best(cands: &[PencilCandidate]) -> Option<&PencilCandidate> {
    cands.iter().filter(|c| c.h0 >= 2).min_by_key(|c| {
        // ties: polynomial pencils first, then small exponents
        let r = c.exponent.map(|r| (r < 0, r.abs()));
        (c.degree, r.is_none(), r, c.generator.clone())
    })
}

/// Least degree over the pencils `O⟨1, t^r⟩`, `-|β| <= r <= g + 1`, plus any
/// supplied second generators.
pub fn gonality_upper(
    curve: &CurveSpec,
    budget: usize,
    extra: &[RatFunc],
) -> Result<GonalityResult> {
    let (mut cands, exhausted, exact) = match curve.numerical_semigroup() {
        Some(s) => {
            let (c, ex) = monomial_pencils(&s, budget)?;
            (c, ex, !ex)
        }
        None => {
            let inv = curve_invariants_light(curve)?;
            let range = pencil_range(inv.1, inv.0);
            let exhausted = range.len() > budget;
            let c = range
                .into_par_iter()
                .take_any(budget)
                .map(|r| analytic_candidate(curve, pencil_function(r), Some(r)))
                .collect::<Result<Vec<_>>>()?;
            (c, exhausted, false)
        }
    };
    for f in extra {
        cands.push(analytic_candidate(curve, f.clone(), None)?);
    }
    let checked = cands.len();
    let witness = best(&cands).cloned().ok_or_else(|| {
        Error::BudgetExhausted(format!("no pencil with h0 >= 2 among {checked} candidates"))
    })?;
    Ok(GonalityResult {
        bound: witness.degree,
        exact: exact && witness.exponent.is_some(),
        witness,
        candidates_checked: checked,
        budget_exhausted: exhausted,
    })
}

fn pencil_function(r: i64) -> RatFunc {
    use crate::poly::Poly;
    if r >= 0 {
        RatFunc::poly(Poly::monomial(r as usize))
    } else {
        RatFunc::new(Poly::one(), Poly::monomial((-r) as usize)).unwrap()
    }
}

/// `(g, max |β_P|)` without the pencil search.
fn curve_invariants_light(curve: &CurveSpec) -> Result<(u64, i64)> {
    let pts = crate::curve::singular_points(curve, false)?;
    let mut g = 0;
    let mut beta = 0;
    for s in &pts {
        g += s.delta()?;
        beta = beta.max(s.conductor().norm());
    }
    Ok((g, beta))
}

/// Whether some pencil of degree at most two exists in the searched family.
pub fn has_degree_two_pencil(curve: &CurveSpec, genus: u64) -> Result<bool> {
    if genus == 0 {
        return Ok(true);
    }
    match curve.numerical_semigroup() {
        Some(s) => {
            let (c, _) = monomial_pencils(&s, usize::MAX)?;
            Ok(best(&c).is_some_and(|b| b.degree <= 2))
        }
        None => {
            let (_, beta) = curve_invariants_light(curve)?;
            let found = (-beta..=2)
                .filter(|&r| r != 0)
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|r| analytic_candidate(curve, pencil_function(r), Some(r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(found.iter().any(|c| c.h0 >= 2 && c.degree <= 2))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GonalityBounds {
    pub lower: u64,
    pub upper_general: u64,
    pub upper_refined: i64,
    pub upper_rational_unibranch: Option<u64>,
}

/// `2 <= gon <= g`, `gon <= g + 1 - ⌊ḡ/2⌋ - η`, and `gon <= ⌊(g+3)/2⌋` for
/// rational curves with a unique non-Gorenstein point, which is unibranch.
pub fn gonality_bounds(
    genus: u64,
    normalization_genus: u64,
    eta: u64,
    rational_unibranch: bool,
) -> GonalityBounds {
    GonalityBounds {
        lower: 2,
        upper_general: genus,
        upper_refined: genus as i64 + 1 - (normalization_genus / 2) as i64 - eta as i64,
        upper_rational_unibranch: rational_unibranch.then_some((genus + 3) / 2),
    }
}

/// Whether the rational-unibranch bound applies to a computed curve.
pub fn rational_unibranch_applies(inv: &CurveInvariants) -> bool {
    let non_gor: Vec<_> = inv.points.iter().filter(|p| !p.gorenstein).collect();
    non_gor.len() == 1 && non_gor[0].branches == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordRecord {
    pub description: String,
    pub degree: i64,
    pub h0: u64,
    pub h1: u64,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordResult {
    pub value: i64,
    pub record: CliffordRecord,
    pub enumerated: usize,
    pub budget_exhausted: bool,
}

fn record(description: String, degree: i64, h0: u64, h1: u64) -> CliffordRecord {
    CliffordRecord {
        description,
        degree,
        h0,
        h1,
        index: degree - 2 * (h0 as i64 - 1),
    }
}

/// Every relative ideal `E` with `S ⊆ E ⊆ N`, as a value set.
pub fn monomial_ideals(s: &GoodSemigroup) -> Result<Vec<ValueSet>> {
    let gaps: Vec<i64> = s.gaps()?.into_iter().map(|x| x as i64).collect();
    let beta = s.conductor().get(0);
    let mut out = Vec::new();
    for mask in 0u64..(1 << gaps.len()) {
        let added: BTreeSet<i64> = gaps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &g)| g)
            .collect();
        let member = |a: i64| s.contains(&ValueVector::scalar(a)) || added.contains(&a);
        let closed = added
            .iter()
            .all(|&x| s.small_elements().iter().all(|y| member(x + y.get(0))));
        if closed {
            out.push(ValueSet::from_box_predicate(
                &ValueVector::scalar(0),
                &ValueVector::scalar(beta),
                |a| member(a.get(0)),
            )?);
        }
    }
    Ok(out)
}

/// Minimum of `deg - 2(h⁰ - 1)` over sheaves with `h⁰, h¹ >= 2`: monomial
/// sheaves on monomial curves plus the supplied candidates, whose `h¹` is
/// read off Riemann-Roch.
pub fn clifford_upper(
    curve: &CurveSpec,
    budget: usize,
    candidates: &[SheafModel],
) -> Result<CliffordResult> {
    let mut records = Vec::new();
    let mut enumerated = 0;
    let mut exhausted = false;
    let genus;
    if let Some(s) = curve.numerical_semigroup() {
        let k = canonical_k(&s)?;
        genus = s.delta()?;
        let ideals = monomial_ideals(&s)?;
        'outer: for e in &ideals {
            for d in 0..=(2 * genus as i64) {
                if enumerated >= budget {
                    exhausted = true;
                    break 'outer;
                }
                enumerated += 1;
                let sheaf = MonomialSheaf {
                    values: e.clone(),
                    pole_at_infinity: d,
                };
                let n = sheaf.numbers(&s, &k)?;
                if n.h0 >= 2 && n.h1 >= 2 {
                    let elems: Vec<String> = e.elements().iter().map(|x| x.to_string()).collect();
                    records.push(record(
                        format!("E = {{{}}}+, pole {d} at infinity", elems.join(",")),
                        n.degree,
                        n.h0,
                        n.h1,
                    ));
                }
            }
        }
    } else {
        genus = curve_invariants_light(curve)?.0;
    }
    for c in candidates {
        let (deg, h0) = sheaf_summary(c)?;
        let h1 = h0 as i64 - (deg.total as i64 + 1 - genus as i64);
        enumerated += 1;
        if h0 >= 2 && h1 >= 2 {
            let gens: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
            records.push(record(
                format!("O<{}>", gens.join(", ")),
                deg.total as i64,
                h0,
                h1 as u64,
            ));
        }
    }
    let best = records
        .into_iter()
        .min_by(|a, b| (a.index, &a.description).cmp(&(b.index, &b.description)))
        .ok_or_else(|| {
            Error::BudgetExhausted(format!("no sheaf with h0, h1 >= 2 among {enumerated}"))
        })?;
    Ok(CliffordResult {
        value: best.index,
        record: best,
        enumerated,
        budget_exhausted: exhausted,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CliffordReason {
    Hyperelliptic,
    RationalNearlyNormal,
    Trigonal,
    /// Positive by the equivalences, and a sheaf of index one was found.
    PositiveWithWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordClassification {
    pub value: i64,
    pub reason: CliffordReason,
    pub genus: u64,
    pub gonality: GonalityResult,
    /// For genus five: a sheaf of degree 5 with `h⁰ = 3`, when found.
    pub genus_five_witness: Option<CliffordRecord>,
}

/// Exact Clifford index where the propositions force it.
pub fn clifford_classify(
    curve: &CurveSpec,
    candidates: &[SheafModel],
) -> Result<CliffordClassification> {
    let inv = curve_invariants(curve)?;
    let gon = gonality_upper(curve, 256, &[])?;
    let upper = clifford_upper(curve, 1 << 16, candidates).ok();
    let genus_five_witness = if inv.genus == 5 {
        find_degree_five_net(curve, candidates)?
    } else {
        None
    };
    let done = |value, reason| {
        Ok(CliffordClassification {
            value,
            reason,
            genus: inv.genus,
            gonality: gon.clone(),
            genus_five_witness: genus_five_witness.clone(),
        })
    };
    if !inv.nonhyperelliptic {
        return done(0, CliffordReason::Hyperelliptic);
    }
    if inv.nearly_normal {
        return done(0, CliffordReason::RationalNearlyNormal);
    }
    if gon.exact && gon.bound == 3 && inv.genus >= 4 {
        return done(1, CliffordReason::Trigonal);
    }
    if upper.as_ref().is_some_and(|u| u.value == 1) || genus_five_witness.is_some() {
        return done(1, CliffordReason::PositiveWithWitness);
    }
    Err(Error::Inconclusive)
}

fn find_degree_five_net(
    curve: &CurveSpec,
    candidates: &[SheafModel],
) -> Result<Option<CliffordRecord>> {
    for c in candidates {
        let (deg, h0) = sheaf_summary(c)?;
        if deg.total == 5 && h0 == 3 {
            let gens: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
            return Ok(Some(record(format!("O<{}>", gens.join(", ")), 5, 3, 2)));
        }
    }
    if let Some(s) = curve.numerical_semigroup() {
        let k = canonical_k(&s)?;
        for e in monomial_ideals(&s)? {
            for d in 0..=10 {
                let n = MonomialSheaf {
                    values: e.clone(),
                    pole_at_infinity: d,
                }
                .numbers(&s, &k)?;
                if n.degree == 5 && n.h0 == 3 {
                    return Ok(Some(record(format!("monomial E, pole {d}"), 5, 3, n.h1)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperellipticReason {
    Hyperelliptic,
    RationalNearlyNormal,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticCheck {
    pub gon2: bool,
    pub reason: HyperellipticReason,
}

pub fn is_hyperelliptic_like(curve: &CurveSpec) -> Result<HyperellipticCheck> {
    let inv = curve_invariants(curve)?;
    let reason = if inv.nearly_normal {
        HyperellipticReason::RationalNearlyNormal
    } else if inv.gon2 {
        HyperellipticReason::Hyperelliptic
    } else {
        HyperellipticReason::None
    };
    Ok(HyperellipticCheck {
        gon2: inv.gon2,
        reason,
    })
}

/// Members of `v(F_P)` in `[0, top]`: a saturated chain when unibranch.
pub fn value_chain(e: &ValueSet, top: &ValueVector) -> Vec<ValueVector> {
    let lo = ValueVector::zero(e.branches()).join(e.min());
    box_points(&lo, top).filter(|a| e.contains(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(g: &[u64]) -> GoodSemigroup {
        GoodSemigroup::from_numerical_generators(g).unwrap()
    }

    #[test]
    fn genus_six_pencil() {
        let s = num(&[4, 7, 10, 12, 13]);
        let k = canonical_k(&s).unwrap();
        let p = MonomialSheaf::pencil(&s, 1).unwrap();
        let n = p.numbers(&s, &k).unwrap();
        assert_eq!((n.degree_at_point, n.degree, n.h0), (3, 4, 2));
        let chain: Vec<i64> = value_chain(&p.values, s.conductor())
            .iter()
            .map(|a| a.get(0))
            .collect();
        assert_eq!(chain, vec![0, 1, 4, 5, 7, 8, 9, 10]);
        let c = CurveSpec::monomial(&[4, 7, 10, 12, 13]).unwrap();
        let gon = gonality_upper(&c, 64, &[]).unwrap();
        assert_eq!((gon.bound, gon.exact), (4, true));
    }

    #[test]
    fn riemann_roch_for_monomial_sheaves() {
        let s = num(&[3, 7, 10, 11]);
        let k = canonical_k(&s).unwrap();
        let g = 5;
        for e in monomial_ideals(&s).unwrap() {
            for d in 0..12 {
                let n = MonomialSheaf {
                    values: e.clone(),
                    pole_at_infinity: d,
                }
                .numbers(&s, &k)
                .unwrap();
                assert_eq!(n.h0 as i64 - n.h1 as i64, n.degree + 1 - g);
            }
        }
    }

    #[test]
    fn bounds() {
        let b = gonality_bounds(6, 0, 1, true);
        assert_eq!(b.upper_rational_unibranch, Some(4));
        assert_eq!(b.upper_refined, 6);
        assert_eq!(
            gonality_bounds(5, 0, 1, true).upper_rational_unibranch,
            Some(4)
        );
    }

    #[test]
    fn hyperelliptic_and_trigonal() {
        let h = CurveSpec::monomial(&[2, 7]).unwrap();
        let r = is_hyperelliptic_like(&h).unwrap();
        assert!(r.gon2);
        assert_eq!(r.reason, HyperellipticReason::Hyperelliptic);
        let nn = CurveSpec::monomial(&[4, 5, 6, 7]).unwrap();
        assert_eq!(
            is_hyperelliptic_like(&nn).unwrap().reason,
            HyperellipticReason::RationalNearlyNormal
        );
        let c1 = CurveSpec::monomial(&[4, 6, 7, 8, 9]).unwrap();
        let cl = clifford_classify(&c1, &[]).unwrap();
        assert_eq!((cl.value, cl.reason), (1, CliffordReason::Trigonal));
        assert_eq!(clifford_upper(&c1, 1 << 16, &[]).unwrap().value, 1);
    }
}
