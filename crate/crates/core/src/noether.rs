//! The combinatorial core of Max Noether surjectivity for non-Gorenstein
//! points: the lemma witness `d`, the sequence `β = a_1 < ... < 2β - α` with
//! every element split as a sum of two elements of `K°`, and the level-`n`
//! surjectivity model for unibranch monomial curves.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{canonical_k, distance, n_fold_sumset, sumset, GoodSemigroup, ValueSet};
use crate::value::{box_points, minimal_elements, ValueVector};

/// `d ∈ K° \ S` minimal, with `β - d - e_ℓ ∈ K°`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub d: ValueVector,
    /// Zero-based branch index `ℓ`.
    pub ell: usize,
    pub complement: ValueVector,
}

/// `K° \ S`.
pub fn non_gorenstein_part(s: &GoodSemigroup) -> Result<Vec<ValueVector>> {
    let k = canonical_k(s)?;
    Ok(k.interior()
        .into_iter()
        .filter(|a| !s.contains(a))
        .collect())
}

fn witness_for(
    s: &GoodSemigroup,
    interior: &BTreeSet<ValueVector>,
    d: &ValueVector,
) -> Option<LemmaWitness> {
    let beta = s.conductor();
    (0..s.branches()).find_map(|ell| {
        let complement = &(beta - d) - &ValueVector::unit(s.branches(), ell);
        interior.contains(&complement).then(|| LemmaWitness {
            d: d.clone(),
            ell,
            complement,
        })
    })
}

/// Scans the minimal elements of `K° \ S` in lexicographic order and returns
/// the first one admitting a branch `ℓ`.
pub fn find_lemma_witness(s: &GoodSemigroup) -> Result<LemmaWitness> {
    let candidates = non_gorenstein_part(s)?;
    if candidates.is_empty() {
        return Err(Error::GorensteinInput);
    }
    let interior: BTreeSet<_> = canonical_k(s)?.interior().into_iter().collect();
    let mut minimal = minimal_elements(&candidates);
    minimal.sort();
    minimal
        .iter()
        .find_map(|d| witness_for(s, &interior, d))
        .ok_or(Error::WitnessNotFound)
}

/// Every minimal `d ∈ K° \ S` together with its witness, if any.
pub fn all_minimal_witnesses(
    s: &GoodSemigroup,
) -> Result<Vec<(ValueVector, Option<LemmaWitness>)>> {
    let candidates = non_gorenstein_part(s)?;
    if candidates.is_empty() {
        return Err(Error::GorensteinInput);
    }
    let interior: BTreeSet<_> = canonical_k(s)?.interior().into_iter().collect();
    let mut minimal = minimal_elements(&candidates);
    minimal.sort();
    Ok(minimal
        .into_iter()
        .map(|d| {
            let w = witness_for(s, &interior, &d);
            (d, w)
        })
        .collect())
}

/// How a sequence element was written as a sum of two elements of `K°`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    /// `(β - α + v) + α^{n+1}`.
    Shift,
    /// `β + α^n - e_ℓ` rewritten as a shift with a smaller `v` (`n > m`).
    Truncated,
    /// `(q_{n1} α + d_1) + (q_{n2} α + d_2)` (`n <= m`).
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub element: ValueVector,
    pub left: ValueVector,
    pub right: ValueVector,
    pub rule: SplitRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSplit {
    pub n: i64,
    pub q1: i64,
    pub q2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoetherCertificate {
    pub alpha: ValueVector,
    pub beta: ValueVector,
    pub r: i64,
    pub m: i64,
    pub u: ValueVector,
    pub witness: LemmaWitness,
    pub d1: ValueVector,
    pub d2: ValueVector,
    /// `α^n = min(nα, β)` for `n = 0..=r+1`.
    pub alpha_powers: Vec<ValueVector>,
    pub q_table: Vec<QSplit>,
    pub sequence: Vec<ValueVector>,
    pub decompositions: Vec<Decomposition>,
}

fn alpha_power(alpha: &ValueVector, beta: &ValueVector, n: i64) -> ValueVector {
    alpha.scale(n).meet(beta)
}

/// Largest `q >= 0` with `q α <= x`.
fn largest_multiple_below(alpha: &ValueVector, x: &ValueVector) -> i64 {
    let mut q = 0;
    while alpha.scale(q + 1).leq(x) {
        q += 1;
    }
    q
}

/// The `q_{nj}` for `1 <= n <= m`, or `None` if a bound `q α + d_j < β` fails.
fn q_table(
    alpha: &ValueVector,
    beta: &ValueVector,
    m: i64,
    d1: &ValueVector,
    d2: &ValueVector,
) -> Option<Vec<QSplit>> {
    let qm2 = largest_multiple_below(alpha, d1);
    let qm1 = m - qm2;
    if qm1 < 0 {
        return None;
    }
    let mut table = Vec::new();
    for n in 1..=m {
        let (q1, q2) = if n == m {
            (qm1, qm2)
        } else {
            let q1 = n.min(qm1);
            (q1, n - q1)
        };
        let a1 = &alpha.scale(q1) + d1;
        let a2 = &alpha.scale(q2) + d2;
        if !a1.less(beta) || !a2.less(beta) {
            return None;
        }
        table.push(QSplit { n, q1, q2 });
    }
    Some(table)
}

/// Builds the sequence exactly along the case analysis of the proof.
pub fn build_noether_sequence(s: &GoodSemigroup) -> Result<NoetherCertificate> {
    let witness = find_lemma_witness(s)?;
    let k = canonical_k(s)?;
    let interior: BTreeSet<ValueVector> = k.interior().into_iter().collect();
    let branches = s.branches();
    let beta = s.conductor().clone();
    let alpha = s
        .alpha()
        .ok_or_else(|| Error::ConstructionFailure("semigroup has no nonzero element".into()))?;
    let e_ell = ValueVector::unit(branches, witness.ell);
    let zero = ValueVector::zero(branches);

    if !alpha.less(&beta) {
        return Ok(NoetherCertificate {
            u: zero.clone(),
            d1: witness.d.clone(),
            d2: witness.complement.clone(),
            alpha,
            beta,
            r: 0,
            m: 0,
            witness,
            alpha_powers: Vec::new(),
            q_table: Vec::new(),
            sequence: Vec::new(),
            decompositions: Vec::new(),
        });
    }

    // r: smallest with (r+2)α > β.
    let mut r = 0;
    while !beta.less(&alpha.scale(r + 2)) {
        r += 1;
        if r > beta.norm() + 1 {
            return Err(Error::ConstructionFailure("no r with (r+2)α > β".into()));
        }
    }
    // m: largest with (m+1)α <= β.
    let mut m = 0;
    while alpha.scale(m + 2).leq(&beta) {
        m += 1;
    }
    let alpha_powers: Vec<ValueVector> =
        (0..=r + 1).map(|n| alpha_power(&alpha, &beta, n)).collect();
    let u = &beta - &alpha_powers[(r + 1) as usize];
    if !u.is_nonnegative() || !(u.less(&alpha) || u.is_zero()) {
        return Err(Error::ConstructionFailure(format!(
            "β - α^(r+1) = {u} is not in [0, α)"
        )));
    }

    // d_1 <= d_2 when comparable; otherwise try both orders.
    let (mut d1, mut d2) = (witness.d.clone(), witness.complement.clone());
    if d2.leq(&d1) && d1 != d2 {
        std::mem::swap(&mut d1, &mut d2);
    }
    let table = match q_table(&alpha, &beta, m, &d1, &d2) {
        Some(t) => t,
        None => {
            std::mem::swap(&mut d1, &mut d2);
            q_table(&alpha, &beta, m, &d1, &d2).ok_or_else(|| {
                Error::ConstructionFailure(format!(
                    "no admissible q split for d = {}, ℓ = {}",
                    witness.d, witness.ell
                ))
            })?
        }
    };

    let base = &beta - &alpha;
    let top_v = &alpha - &e_ell;
    let mut found: BTreeMap<ValueVector, Decomposition> = BTreeMap::new();
    let mut push = |element: ValueVector, left: ValueVector, right: ValueVector, rule| {
        found.entry(element.clone()).or_insert(Decomposition {
            element,
            left,
            right,
            rule,
        });
    };

    // case (i): 0 <= n <= r-1, 0 <= v <= α - e_ℓ
    for n in 0..r {
        let power = &alpha_powers[(n + 1) as usize];
        for v in box_points(&zero, &top_v) {
            let element = &(&base + power) + &v;
            if v != top_v {
                push(element, &base + &v, power.clone(), SplitRule::Shift);
                continue;
            }
            // element = β + α^k - e_ℓ with k = n + 1
            let kk = n + 1;
            if kk > m {
                let shifted = &(&(&alpha_powers[kk as usize] - &alpha_powers[(kk + 1) as usize])
                    + &alpha)
                    - &e_ell;
                if !shifted.is_nonnegative() || !shifted.less(&top_v) {
                    return Err(Error::ConstructionFailure(format!(
                        "no v < α - e_ℓ for β + α^{kk} - e_ℓ (got {shifted})"
                    )));
                }
                push(
                    element,
                    &base + &shifted,
                    alpha_powers[(kk + 1) as usize].clone(),
                    SplitRule::Truncated,
                );
            } else {
                let q = &table[(kk - 1) as usize];
                push(
                    element,
                    &alpha.scale(q.q1) + &d1,
                    &alpha.scale(q.q2) + &d2,
                    SplitRule::Split,
                );
            }
        }
    }
    // case (ii): n = r, 0 <= v < u
    if !u.is_zero() {
        let power = &alpha_powers[(r + 1) as usize];
        for v in box_points(&zero, &u) {
            if v == u {
                continue;
            }
            let element = &(&base + power) + &v;
            push(element, &base + &v, power.clone(), SplitRule::Shift);
        }
    }

    for dec in found.values() {
        let ok = interior.contains(&dec.left)
            && interior.contains(&dec.right)
            && &dec.left + &dec.right == dec.element;
        if !ok {
            return Err(Error::ConstructionFailure(format!(
                "{} = {} + {} is not a sum in K° + K°",
                dec.element, dec.left, dec.right
            )));
        }
    }

    let length = (beta.norm() - alpha.norm()) as usize;
    let sequence = unit_chain(&found, &beta, length).ok_or_else(|| {
        Error::ConstructionFailure(format!(
            "no chain of length {length} from β through the constructed elements"
        ))
    })?;
    let bound = &beta.scale(2) - &alpha;
    if let Some(last) = sequence.last() {
        if !last.less(&bound) {
            return Err(Error::ConstructionFailure(format!(
                "{last} is not below 2β - α"
            )));
        }
    }
    let decompositions = sequence.iter().map(|a| found[a].clone()).collect();
    Ok(NoetherCertificate {
        alpha,
        beta,
        r,
        m,
        u,
        witness,
        d1,
        d2,
        alpha_powers,
        q_table: table,
        sequence,
        decompositions,
    })
}

/// A chain `start = a_1 < ... < a_len` inside `pool`, each step adding one
/// unit vector. Depth-first, preferring lexicographically smaller steps.
fn unit_chain<V>(
    pool: &BTreeMap<ValueVector, V>,
    start: &ValueVector,
    len: usize,
) -> Option<Vec<ValueVector>> {
    fn go<V>(
        pool: &BTreeMap<ValueVector, V>,
        chain: &mut Vec<ValueVector>,
        len: usize,
        dead: &mut BTreeSet<ValueVector>,
    ) -> bool {
        if chain.len() == len {
            return true;
        }
        let cur = chain.last().unwrap().clone();
        let mut steps: Vec<ValueVector> = (0..cur.branches())
            .map(|j| &cur + &ValueVector::unit(cur.branches(), j))
            .filter(|n| pool.contains_key(n) && !dead.contains(n))
            .collect();
        steps.sort();
        for next in steps {
            chain.push(next.clone());
            if go(pool, chain, len, dead) {
                return true;
            }
            chain.pop();
            dead.insert(next);
        }
        false
    }
    if len == 0 {
        return Some(Vec::new());
    }
    if !pool.contains_key(start) {
        return None;
    }
    let mut chain = vec![start.clone()];
    let mut dead = BTreeSet::new();
    go(pool, &mut chain, len, &mut dead).then_some(chain)
}

/// Result of checking the combinatorial core of Max Noether's statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Check {
    pub passed: bool,
    pub certificate: NoetherCertificate,
    /// `K° + K°` restricted to the sequence range, computed by brute force.
    pub brute_force_members: Vec<ValueVector>,
    pub failures: Vec<String>,
}

pub fn verify_theorem1(s: &GoodSemigroup) -> Result<Theorem1Check> {
    let certificate = build_noether_sequence(s)?;
    let k = canonical_k(s)?;
    let interior = k.interior();
    let g = sumset(&interior, &interior, None);
    let gset: BTreeSet<_> = g.iter().cloned().collect();
    let mut failures = Vec::new();
    for a in &certificate.sequence {
        if !gset.contains(a) {
            failures.push(format!("{a} not in K° + K°"));
        }
    }
    for w in certificate.sequence.windows(2) {
        if !w[0].less(&w[1]) {
            failures.push(format!("{} is not below {}", w[0], w[1]));
        }
    }
    if s.branches() == 1 && !certificate.sequence.is_empty() {
        let b = certificate.beta.get(0);
        let a = certificate.alpha.get(0);
        let interval: Vec<ValueVector> = (b..2 * b - a).map(ValueVector::scalar).collect();
        if interval != certificate.sequence {
            failures.push(format!(
                "sequence differs from the interval [{b}, {})",
                2 * b - a
            ));
        }
    }
    let brute_force_members = certificate
        .sequence
        .iter()
        .filter(|a| gset.contains(a))
        .cloned()
        .collect();
    Ok(Theorem1Check {
        passed: failures.is_empty(),
        certificate,
        brute_force_members,
        failures,
    })
}

/// One section `t^a` of `H⁰(W^n)` written as a product of `n` sections of `H⁰(W)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Product {
    pub exponent: i64,
    pub factors: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub surjective: bool,
    pub genus: u64,
    pub degree_at_point: u64,
    pub degree_at_infinity: u64,
    pub degree: u64,
    pub h0: usize,
    /// Exponents of a monomial basis of `H⁰(W^n)`.
    pub sections: Vec<i64>,
    /// Sections outside the image of `Sym^n H⁰(W)`.
    pub missing: Vec<i64>,
    pub products: Vec<Product>,
}

/// Exponents of a monomial basis of `H⁰(W^k)` on the rational monomial curve
/// with one singular point of semigroup `S` and a smooth point at infinity.
pub fn section_exponents(s: &GoodSemigroup, k: usize) -> Result<Vec<i64>> {
    if s.branches() != 1 {
        return Err(Error::UnsupportedBranchCount(s.branches()));
    }
    if k == 0 {
        return Ok(vec![0]);
    }
    let kset = canonical_k(s)?;
    let interior = kset.interior();
    let Some(top) = interior.iter().map(|a| a.get(0)).max() else {
        return Ok(Vec::new());
    };
    let hi = ValueVector::scalar(top * k as i64);
    let members = kset.values().members_upto(&hi);
    Ok(n_fold_sumset(&members, k, Some(&hi))
        .into_iter()
        .map(|a| a.get(0))
        .collect())
}

/// Value set of the stalk of `W^n` at the singular point.
pub fn power_value_set(s: &GoodSemigroup, n: usize) -> Result<ValueSet> {
    let k = canonical_k(s)?;
    let beta = s.conductor().clone();
    let members = k.values().members_upto(&beta);
    let sums: BTreeSet<ValueVector> = n_fold_sumset(&members, n.max(1), Some(&beta))
        .into_iter()
        .collect();
    let zero = ValueVector::zero(s.branches());
    ValueSet::from_box_predicate(&zero, &beta, |a| sums.contains(a))
}

fn factorizations(target: i64, parts: usize, basis: &[i64]) -> Option<Vec<i64>> {
    if parts == 0 {
        return (target == 0).then(Vec::new);
    }
    for &b in basis.iter().rev() {
        if b <= target {
            if let Some(mut rest) = factorizations(target - b, parts - 1, basis) {
                rest.insert(0, b);
                return Some(rest);
            }
        }
    }
    None
}

/// Compares `H⁰(W^n)` with the image of `Sym^n H⁰(W)` on the monomial model.
pub fn max_noether_level(s: &GoodSemigroup, n: usize) -> Result<LevelReport> {
    if s.branches() != 1 {
        return Err(Error::UnsupportedBranchCount(s.branches()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    let genus = s.delta()?;
    let basis = section_exponents(s, 1)?;
    let sections = section_exponents(s, n)?;
    let image: BTreeSet<i64> = if basis.is_empty() {
        BTreeSet::new()
    } else {
        let b: Vec<ValueVector> = basis.iter().map(|&a| ValueVector::scalar(a)).collect();
        n_fold_sumset(&b, n, None)
            .into_iter()
            .map(|a| a.get(0))
            .collect()
    };
    let missing: Vec<i64> = sections
        .iter()
        .filter(|a| !image.contains(a))
        .copied()
        .collect();
    let top = basis.iter().copied().max().unwrap_or(0);
    let degree_at_infinity = (top * n as i64) as u64;
    let degree_at_point = distance(&power_value_set(s, n)?, s.values())?;
    let products = sections
        .iter()
        .filter_map(|&a| {
            factorizations(a, n, &basis).map(|factors| Product {
                exponent: a,
                factors,
            })
        })
        .collect();
    Ok(LevelReport {
        level: n,
        surjective: missing.is_empty(),
        genus,
        degree_at_point,
        degree_at_infinity,
        degree: degree_at_point + degree_at_infinity,
        h0: sections.len(),
        sections,
        missing,
        products,
    })
}
