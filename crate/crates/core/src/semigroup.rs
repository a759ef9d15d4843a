//! Good semigroups of `Z^s`, their relative ideals and the canonical set `K`.
//!
//! Every set is stored by its finite truncation to a box `[min, conductor]`.
//! Membership of an arbitrary vector `a` is decided by the box rule: `a` is a
//! member iff `a >= min` and `min(a, conductor)` is one of the stored elements.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::value::{box_points, minimal_elements, ValueVector, MAX_BRANCHES};

/// A box-truncated subset of `Z^s` closed upwards past its conductor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ValueSet {
    min: ValueVector,
    conductor: ValueVector,
    elements: Vec<ValueVector>,
}

impl ValueSet {
    /// Builds a set from its truncation. Elements are sorted and deduplicated;
    /// each must lie in `[min, conductor]`, and both corners must be present.
    pub fn from_parts(
        min: ValueVector,
        conductor: ValueVector,
        elements: impl IntoIterator<Item = ValueVector>,
    ) -> Result<Self> {
        let s = min.branches();
        if s == 0 || s > MAX_BRANCHES {
            return Err(Error::UnsupportedBranchCount(s));
        }
        if conductor.branches() != s || !min.leq(&conductor) {
            return Err(Error::InvalidSemigroup(format!(
                "box [{min}, {conductor}] is empty or has mixed branch counts"
            )));
        }
        let set: BTreeSet<ValueVector> = elements.into_iter().collect();
        for a in &set {
            if a.branches() != s || !min.leq(a) || !a.leq(&conductor) {
                return Err(Error::InvalidSemigroup(format!(
                    "element {a} outside box [{min}, {conductor}]"
                )));
            }
        }
        if !set.contains(&min) || !set.contains(&conductor) {
            return Err(Error::InvalidSemigroup(format!(
                "box corners {min} and {conductor} must both be members"
            )));
        }
        Ok(ValueSet {
            min,
            conductor,
            elements: set.into_iter().collect(),
        })
    }

    /// Builds a set from a membership predicate evaluated on `[lo, hi]`, where
    /// `hi` is assumed to dominate the true conductor. The minimum and the
    /// smallest conductor are recomputed from the data.
    pub fn from_box_predicate(
        lo: &ValueVector,
        hi: &ValueVector,
        member: impl Fn(&ValueVector) -> bool,
    ) -> Result<Self> {
        let pts: Vec<ValueVector> = box_points(lo, hi).filter(|a| member(a)).collect();
        if pts.is_empty() {
            return Err(Error::InvalidSemigroup("empty value set".into()));
        }
        let min = pts.iter().skip(1).fold(pts[0].clone(), |m, a| m.meet(a));
        let full = ValueSet {
            min: lo.clone(),
            conductor: hi.clone(),
            elements: pts,
        };
        if !full.contains(&min) {
            return Err(Error::InvalidSemigroup(format!(
                "componentwise minimum {min} is not a member"
            )));
        }
        let conductor = find_conductor(&full, &min, hi).ok_or_else(|| {
            Error::InvalidSemigroup(format!("no conductor inside box [{min}, {hi}]"))
        })?;
        let elements = box_points(&min, &conductor).filter(|a| full.contains(a));
        ValueSet::from_parts(min, conductor, elements)
    }

    /// `N^s` itself: minimum and conductor both zero.
    pub fn normalization(branches: usize) -> Self {
        let z = ValueVector::zero(branches);
        ValueSet {
            min: z.clone(),
            conductor: z.clone(),
            elements: vec![z],
        }
    }

    pub fn branches(&self) -> usize {
        self.min.branches()
    }

    pub fn min(&self) -> &ValueVector {
        &self.min
    }

    pub fn conductor(&self) -> &ValueVector {
        &self.conductor
    }

    /// The stored truncation, sorted lexicographically.
    pub fn elements(&self) -> &[ValueVector] {
        &self.elements
    }

    pub fn contains(&self, a: &ValueVector) -> bool {
        if a.branches() != self.branches() || !self.min.leq(a) {
            return false;
        }
        let clamped = a.meet(&self.conductor);
        self.elements.binary_search(&clamped).is_ok()
    }

    /// Members inside `[lo, hi]`.
    pub fn members_in_box(&self, lo: &ValueVector, hi: &ValueVector) -> Vec<ValueVector> {
        let lo = lo.join(&self.min);
        box_points(&lo, hi).filter(|a| self.contains(a)).collect()
    }

    /// Members `a <= hi`.
    pub fn members_upto(&self, hi: &ValueVector) -> Vec<ValueVector> {
        self.members_in_box(&self.min.clone(), hi)
    }

    /// `Δ(a)`: members `b` with `b_i = a_i` for some `i` and `b_j > a_j` for
    /// all `j != i`. Coordinates past the conductor are represented by one
    /// point each, so the result is finite and empty exactly when `Δ(a)` is.
    pub fn delta_set(&self, a: &ValueVector) -> Vec<ValueVector> {
        let s = self.branches();
        let mut out = BTreeSet::new();
        for i in 0..s {
            let mut lo = Vec::with_capacity(s);
            let mut hi = Vec::with_capacity(s);
            for j in 0..s {
                if j == i {
                    lo.push(a.get(j));
                    hi.push(a.get(j));
                } else {
                    lo.push(a.get(j) + 1);
                    hi.push((a.get(j) + 1).max(self.conductor.get(j)));
                }
            }
            for b in box_points(&lo.into(), &hi.into()) {
                if self.contains(&b) {
                    out.insert(b);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Whether every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &ValueSet) -> Option<ValueVector> {
        let hi = self.conductor.join(&other.conductor);
        box_points(&self.min, &hi).find(|a| self.contains(a) && !other.contains(a))
    }

    /// A saturated chain of members from `from` to `to` (both members,
    /// `from <= to`). Each step moves to a minimal member strictly above the
    /// current one, the lexicographically smallest (or largest) such.
    pub fn saturated_chain(
        &self,
        from: &ValueVector,
        to: &ValueVector,
        tie: TieBreak,
    ) -> Vec<ValueVector> {
        let mut chain = vec![from.clone()];
        let mut cur = from.clone();
        while &cur != to {
            let above: Vec<ValueVector> = box_points(&cur, to)
                .filter(|b| b != &cur && self.contains(b))
                .collect();
            let minimal = minimal_elements(&above);
            let next = match tie {
                TieBreak::LexMin => minimal.into_iter().min(),
                TieBreak::LexMax => minimal.into_iter().max(),
            }
            .expect("`to` is a member above the current element");
            chain.push(next.clone());
            cur = next;
        }
        chain
    }

    /// Length of saturated chains from the minimum to `to`, checked on two
    /// different tie-breaking rules.
    pub fn chain_length_to(&self, to: &ValueVector) -> Result<usize> {
        let a = self.saturated_chain(&self.min, to, TieBreak::LexMin).len() - 1;
        let b = self.saturated_chain(&self.min, to, TieBreak::LexMax).len() - 1;
        if a != b {
            return Err(Error::ChainLengthMismatch {
                first: a,
                second: b,
            });
        }
        Ok(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LexMin,
    LexMax,
}

/// Smallest `c` in `[lo, hi]` such that every point of `[c, hi]` is a member.
fn find_conductor(set: &ValueSet, lo: &ValueVector, hi: &ValueVector) -> Option<ValueVector> {
    let valid = |c: &ValueVector| box_points(c, hi).all(|a| set.contains(&a));
    let candidates: Vec<ValueVector> = box_points(lo, hi).filter(|c| valid(c)).collect();
    let first = candidates.first()?.clone();
    let meet = candidates.iter().fold(first, |m, c| m.meet(c));
    valid(&meet).then_some(meet)
}

/// `dim(E/F)` for nested good sets `F ⊆ E`, as the difference of saturated
/// chain lengths up to a common point past both conductors.
pub fn distance(e: &ValueSet, f: &ValueSet) -> Result<u64> {
    if e.branches() != f.branches() {
        return Err(Error::InvalidInput("branch counts differ".into()));
    }
    if let Some(w) = f.is_subset_of(e) {
        return Err(Error::NotNested(w));
    }
    let top = e.conductor.join(&f.conductor);
    let le = e.chain_length_to(&top)?;
    let lf = f.chain_length_to(&top)?;
    if lf > le {
        return Err(Error::ChainLengthMismatch {
            first: le,
            second: lf,
        });
    }
    Ok((le - lf) as u64)
}

/// All sums `a + b`, restricted to `<= hi` when given.
pub fn sumset(a: &[ValueVector], b: &[ValueVector], hi: Option<&ValueVector>) -> Vec<ValueVector> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            let z = x + y;
            if hi.is_none_or(|h| z.leq(h)) {
                out.insert(z);
            }
        }
    }
    out.into_iter().collect()
}

/// The `n`-fold sumset `A + ... + A`, restricted to `<= hi` when given.
pub fn n_fold_sumset(a: &[ValueVector], n: usize, hi: Option<&ValueVector>) -> Vec<ValueVector> {
    assert!(n >= 1, "n-fold sumset needs n >= 1");
    let mut acc: Vec<ValueVector> = a
        .iter()
        .filter(|x| hi.is_none_or(|h| x.leq(h)))
        .cloned()
        .collect();
    acc.sort();
    acc.dedup();
    for _ in 1..n {
        acc = sumset(&acc, a, hi);
    }
    acc
}

/// The value semigroup of a singular point, truncated at its conductor `β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GoodSemigroup {
    values: ValueSet,
    generators: Option<Vec<u64>>,
}

impl GoodSemigroup {
    /// The numerical semigroup generated by `gens`.
    pub fn from_numerical_generators(gens: &[u64]) -> Result<Self> {
        let gens: Vec<u64> = {
            let mut g: Vec<u64> = gens.iter().copied().filter(|&x| x > 0).collect();
            g.sort_unstable();
            g.dedup();
            g
        };
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let gcd = gens.iter().fold(0, |acc, &x| num_integer::gcd(acc, x));
        if gcd != 1 {
            return Err(Error::NonCoprimeGenerators { gcd });
        }
        let smallest = gens[0] as usize;
        let largest = *gens.last().unwrap() as usize;
        let bound = smallest * largest + largest;
        let mut member = vec![false; bound + 1];
        member[0] = true;
        for n in 1..=bound {
            member[n] = gens
                .iter()
                .any(|&g| g as usize <= n && member[n - g as usize]);
        }
        let conductor = (0..=bound)
            .rev()
            .find(|&n| !member[n])
            .map_or(0, |frob| frob + 1);
        let elements = (0..=conductor)
            .filter(|&n| member[n])
            .map(|n| ValueVector::scalar(n as i64));
        let values = ValueSet::from_parts(
            ValueVector::scalar(0),
            ValueVector::scalar(conductor as i64),
            elements,
        )?;
        Ok(GoodSemigroup {
            values,
            generators: Some(gens),
        })
    }

    /// A semigroup given by its truncation at the conductor. Only the box
    /// shape is checked here; run [`validate`] for the axioms.
    pub fn from_small_elements(
        conductor: ValueVector,
        small_elements: impl IntoIterator<Item = ValueVector>,
    ) -> Result<Self> {
        let zero = ValueVector::zero(conductor.branches());
        let values = ValueSet::from_parts(zero, conductor, small_elements)?;
        Ok(GoodSemigroup {
            values,
            generators: None,
        })
    }

    /// A numerical semigroup from its set of gaps.
    pub fn from_gaps(gaps: &[u64]) -> Result<Self> {
        let conductor = gaps.iter().max().map_or(0, |&f| f + 1);
        let elements = (0..=conductor)
            .filter(|n| !gaps.contains(n))
            .map(|n| ValueVector::scalar(n as i64));
        Self::from_small_elements(ValueVector::scalar(conductor as i64), elements)
    }

    pub(crate) fn from_values(values: ValueSet) -> Result<Self> {
        if !values.min.is_zero() {
            return Err(Error::InvalidSemigroup(format!(
                "minimum {} is not zero",
                values.min
            )));
        }
        Ok(GoodSemigroup {
            values,
            generators: None,
        })
    }

    pub fn values(&self) -> &ValueSet {
        &self.values
    }

    pub fn generators(&self) -> Option<&[u64]> {
        self.generators.as_deref()
    }

    pub fn branches(&self) -> usize {
        self.values.branches()
    }

    /// `β`.
    pub fn conductor(&self) -> &ValueVector {
        &self.values.conductor
    }

    /// `γ = β - (1, ..., 1)`.
    pub fn frobenius_vector(&self) -> ValueVector {
        self.conductor() - &ValueVector::splat(self.branches(), 1)
    }

    pub fn small_elements(&self) -> &[ValueVector] {
        &self.values.elements
    }

    pub fn contains(&self, a: &ValueVector) -> bool {
        self.values.contains(a)
    }

    /// `α = min(S \ {0})`; `None` for `N^s`.
    pub fn alpha(&self) -> Option<ValueVector> {
        let mut nonzero = self.small_elements().iter().filter(|a| !a.is_zero());
        let first = nonzero.next()?.clone();
        Some(nonzero.fold(first, |m, a| m.meet(a)))
    }

    /// `S° = {a ∈ S : a < β}`.
    pub fn interior(&self) -> Vec<ValueVector> {
        let beta = self.conductor();
        self.small_elements()
            .iter()
            .filter(|a| a.less(beta))
            .cloned()
            .collect()
    }

    /// Gaps of a numerical semigroup.
    pub fn gaps(&self) -> Result<Vec<u64>> {
        if self.branches() != 1 {
            return Err(Error::UnsupportedBranchCount(self.branches()));
        }
        let beta = self.conductor().get(0);
        Ok((0..beta)
            .filter(|&n| !self.contains(&ValueVector::scalar(n)))
            .map(|n| n as u64)
            .collect())
    }

    /// `δ = dim(Ō/O)`, as the distance from the normalization.
    pub fn delta(&self) -> Result<u64> {
        distance(&ValueSet::normalization(self.branches()), &self.values)
    }

    /// `dim(O/C)`, the saturated chain length from `0` to `β`.
    pub fn conductor_colength(&self) -> Result<u64> {
        Ok(self.values.chain_length_to(self.conductor())? as u64)
    }

    /// Minimal generators of a numerical semigroup.
    pub fn minimal_generators(&self) -> Result<Vec<u64>> {
        if self.branches() != 1 {
            return Err(Error::UnsupportedBranchCount(self.branches()));
        }
        let Some(alpha) = self.alpha() else {
            return Ok(vec![1]);
        };
        let top = self.conductor().get(0) + alpha.get(0);
        let members: Vec<i64> = (1..top)
            .filter(|&n| self.contains(&ValueVector::scalar(n)))
            .collect();
        Ok(members
            .iter()
            .filter(|&&n| {
                !members
                    .iter()
                    .any(|&a| a < n && self.contains(&ValueVector::scalar(n - a)) && n - a > 0)
            })
            .map(|&n| n as u64)
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.branches() != 1 {
            return false;
        }
        let gamma = self.frobenius_vector();
        (0..=gamma.get(0).max(0)).all(|a| {
            let a = ValueVector::scalar(a);
            self.contains(&a) != self.contains(&(&gamma - &a))
        })
    }
}

/// A relative ideal `E` of a good semigroup `S` (`E + S ⊆ E`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealValueSet {
    base: GoodSemigroup,
    values: ValueSet,
}

impl IdealValueSet {
    pub fn new(base: GoodSemigroup, values: ValueSet) -> Result<Self> {
        if base.branches() != values.branches() {
            return Err(Error::InvalidInput("branch counts differ".into()));
        }
        Ok(IdealValueSet { base, values })
    }

    pub fn base(&self) -> &GoodSemigroup {
        &self.base
    }

    pub fn values(&self) -> &ValueSet {
        &self.values
    }

    pub fn contains(&self, a: &ValueVector) -> bool {
        self.values.contains(a)
    }

    /// `E° = {a ∈ E : a < β}` with `β` the base conductor.
    pub fn interior(&self) -> Vec<ValueVector> {
        let beta = self.base.conductor();
        self.values
            .members_upto(beta)
            .into_iter()
            .filter(|a| a.less(beta))
            .collect()
    }

    /// `E* = {a ∈ E : a <= β}`.
    pub fn star(&self) -> Vec<ValueVector> {
        self.values.members_upto(self.base.conductor())
    }
}

/// `K = {a : Δ^S(γ - a) = ∅}`.
pub fn canonical_k(s: &GoodSemigroup) -> Result<IdealValueSet> {
    let gamma = s.frobenius_vector();
    let zero = ValueVector::zero(s.branches());
    let beta = s.conductor().clone();
    let elements: Vec<ValueVector> = box_points(&zero, &beta)
        .filter(|a| s.values.delta_set(&(&gamma - a)).is_empty())
        .collect();
    let values = ValueSet::from_parts(zero, beta, elements)?;
    IdealValueSet::new(s.clone(), values)
}

/// Outcome of one axiom check, with a violating tuple on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<Vec<ValueVector>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn check(axiom: &'static str, witness: Option<Vec<ValueVector>>) -> AxiomCheck {
    AxiomCheck {
        axiom,
        passed: witness.is_none(),
        witness,
    }
}

fn min_closure_witness(set: &ValueSet) -> Option<Vec<ValueVector>> {
    let el = set.elements();
    for (i, a) in el.iter().enumerate() {
        for b in &el[i + 1..] {
            if !set.contains(&a.meet(b)) {
                return Some(vec![a.clone(), b.clone()]);
            }
        }
    }
    None
}

/// (E2): if `a_i = b_i` there is `ε` with `ε_i > a_i` and `ε_j >= min(a_j, b_j)`,
/// with equality where `a_j != b_j`.
fn e2_witness(set: &ValueSet) -> Option<Vec<ValueVector>> {
    let el = set.elements();
    let s = set.branches();
    let cond = set.conductor();
    for (ia, a) in el.iter().enumerate() {
        for b in &el[ia + 1..] {
            for i in 0..s {
                if a.get(i) != b.get(i) {
                    continue;
                }
                let mut lo = Vec::with_capacity(s);
                let mut hi = Vec::with_capacity(s);
                for j in 0..s {
                    let m = a.get(j).min(b.get(j));
                    if j == i {
                        lo.push(m + 1);
                        hi.push((m + 1).max(cond.get(j)));
                    } else if a.get(j) != b.get(j) {
                        lo.push(m);
                        hi.push(m);
                    } else {
                        lo.push(m);
                        hi.push(m.max(cond.get(j)));
                    }
                }
                let found = box_points(&lo.into(), &hi.into()).any(|e| set.contains(&e));
                if !found {
                    return Some(vec![a.clone(), b.clone()]);
                }
            }
        }
    }
    None
}

fn conductor_witness(set: &ValueSet) -> Option<Vec<ValueVector>> {
    let cond = set.conductor();
    // Minimality: lowering any coordinate must break the upward closure.
    for j in 0..set.branches() {
        if cond.get(j) <= set.min().get(j) {
            continue;
        }
        let lower = cond.with(j, cond.get(j) - 1);
        if box_points(&lower, cond).all(|a| set.contains(&a)) {
            return Some(vec![lower]);
        }
    }
    None
}

/// Checks the good-semigroup axioms inside the conductor box.
pub fn validate(s: &GoodSemigroup) -> AxiomReport {
    let set = s.values();
    let el = set.elements();
    let zero = ValueVector::zero(s.branches());
    let mut checks = vec![check(
        "zero",
        (!set.contains(&zero)).then(|| vec![zero.clone()]),
    )];
    let local = el
        .iter()
        .find(|a| !a.is_zero() && a.coords().iter().any(|&c| c <= 0))
        .map(|a| vec![a.clone()]);
    checks.push(check("local", local));
    let mut addition = None;
    'outer: for (i, a) in el.iter().enumerate() {
        for b in &el[i..] {
            if !set.contains(&(a + b)) {
                addition = Some(vec![a.clone(), b.clone()]);
                break 'outer;
            }
        }
    }
    checks.push(check("addition", addition));
    checks.push(check("min_closure", min_closure_witness(set)));
    checks.push(check("e2", e2_witness(set)));
    checks.push(check("conductor", conductor_witness(set)));
    AxiomReport { checks }
}

/// Checks that `E` is a good relative ideal of its base.
pub fn validate_ideal(e: &IdealValueSet) -> AxiomReport {
    let set = e.values();
    let base = e.base();
    let hi = set.conductor().max(base.conductor());
    let mut ideal = None;
    'outer: for a in set.members_upto(hi) {
        for b in base.small_elements() {
            if !set.contains(&(&a + b)) {
                ideal = Some(vec![a.clone(), b.clone()]);
                break 'outer;
            }
        }
    }
    AxiomReport {
        checks: vec![
            check("ideal", ideal),
            check("min_closure", min_closure_witness(set)),
            check("e2", e2_witness(set)),
            check("conductor", conductor_witness(set)),
        ],
    }
}

/// The local classification of a singular point from its value semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub delta: u64,
    pub eta: u64,
    pub mu: u64,
    pub conductor_colength: u64,
    pub blowup: GoodSemigroup,
    pub gorenstein: bool,
    pub kunz: bool,
    pub almost_gorenstein: bool,
}

pub fn classify(s: &GoodSemigroup) -> Result<Classification> {
    let k = canonical_k(s)?;
    let delta = s.delta()?;
    let eta = distance(k.values(), s.values())?;
    let blowup = blowup_semigroup(s)?;
    let mu = distance(blowup.values(), k.values())?;
    Ok(Classification {
        delta,
        eta,
        mu,
        conductor_colength: s.conductor_colength()?,
        blowup,
        gorenstein: eta == 0,
        kunz: eta == 1,
        almost_gorenstein: mu <= 1,
    })
}

/// Closure of `K ∩ [0, top]` under addition and componentwise minimum, with
/// coordinates clamped at `top`.
fn close_canonical(k: &IdealValueSet, top: &ValueVector) -> Result<ValueSet> {
    let cap = k.base().conductor().clone();
    let mut set: BTreeSet<ValueVector> = k.values().members_upto(top).into_iter().collect();
    loop {
        loop {
            let cur: Vec<ValueVector> = set.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in cur.iter().enumerate() {
                for b in &cur[i..] {
                    for c in [(a + b).meet(top), a.meet(b)] {
                        grew |= set.insert(c);
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if !complete_e2(&mut set, top, &cap)? {
            break;
        }
    }
    Ok(ValueSet {
        min: ValueVector::zero(top.branches()),
        conductor: top.clone(),
        elements: set.into_iter().collect(),
    })
}

/// Adds the elements the second good axiom forces when its witness box is a
/// single point. Coordinates at or past `cap`, a bound on the conductor, are
/// pinned to their least value. Errors when a required witness is missing
/// but not determined.
fn complete_e2(
    set: &mut BTreeSet<ValueVector>,
    top: &ValueVector,
    cap: &ValueVector,
) -> Result<bool> {
    let cur: Vec<ValueVector> = set.iter().cloned().collect();
    let mut added = false;
    let mut open = None;
    for (x, a) in cur.iter().enumerate() {
        for b in &cur[x + 1..] {
            for j in 0..a.branches() {
                if a.get(j) != b.get(j) || a.get(j) >= top.get(j) {
                    continue;
                }
                let mut lo = a.meet(b);
                let mut hi = top.clone();
                lo = lo.with(j, a.get(j) + 1);
                for i in 0..a.branches() {
                    if (i != j && a.get(i) != b.get(i)) || lo.get(i) >= cap.get(i) {
                        hi = hi.with(i, lo.get(i));
                    }
                }
                if set.iter().any(|c| lo.leq(c) && c.leq(&hi)) {
                    continue;
                }
                if lo == hi {
                    set.insert(lo);
                    added = true;
                } else {
                    open.get_or_insert((a.clone(), b.clone()));
                }
            }
        }
    }
    match open {
        Some((a, b)) if !added => Err(Error::UnsupportedModel(format!(
            "the values {a} and {b} do not determine the blowup"
        ))),
        _ => Ok(added),
    }
}

/// The value semigroup of the blowup along the canonical ideal: the smallest
/// semigroup containing every sumset `K + ... + K`, closed under minima.
pub fn blowup_semigroup(s: &GoodSemigroup) -> Result<GoodSemigroup> {
    let k = canonical_k(s)?;
    let beta = s.conductor().clone();
    let zero = ValueVector::zero(s.branches());
    let reduce = |top: &ValueVector| -> Result<ValueSet> {
        let closed = close_canonical(&k, top)?;
        ValueSet::from_box_predicate(&zero, top, |a| closed.contains(a))
    };
    let small = reduce(&beta)?;
    let guard = reduce(&beta.scale(2))?;
    if small != guard {
        return Err(Error::NoStabilization(format!(
            "blowup of a semigroup with conductor {beta} differs between boxes β and 2β"
        )));
    }
    let blowup = GoodSemigroup::from_values(small)?;
    let report = validate(&blowup);
    if let Some(f) = report.first_failure() {
        return Err(Error::SemigroupAxiomFailure(format!(
            "blowup violates {} at {:?}",
            f.axiom, f.witness
        )));
    }
    Ok(blowup)
}
