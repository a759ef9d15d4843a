//! Koszul cohomology of the canonical sheaf on monomial models, dimensions
//! of the degree `r` parts of homogeneous ideals, and the inverse blowup
//! construction for numerical semigroups.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::binomial;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::linalg::bareiss_rank;
use crate::noether::section_exponents;
use crate::semigroup::{blowup_semigroup, classify, GoodSemigroup};
use crate::value::ValueVector;

/// Largest basis size of any of the three spaces of a Koszul complex.
pub const MAX_KOSZUL_DIM: usize = 40_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub p: usize,
    pub q: usize,
    pub dim_domain: usize,
    pub dim_middle: usize,
    pub dim_codomain: usize,
    pub rank_phi1: usize,
    pub rank_phi2: usize,
    pub dim_kpq: usize,
}

/// Basis of `∧^p H⁰(W) ⊗ H⁰(W^q)`: index sets into the `H⁰(W)` basis and an
/// exponent of `H⁰(W^q)`.
struct Space {
    elems: Vec<(Vec<usize>, i64)>,
    index: HashMap<(Vec<usize>, i64), usize>,
    weight: Vec<i64>,
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

fn space(w: &[i64], p: Option<usize>, sections: &[i64]) -> Result<Space> {
    let Some(p) = p else {
        return Ok(Space {
            elems: Vec::new(),
            index: HashMap::new(),
            weight: Vec::new(),
        });
    };
    let size = binomial(w.len(), p).saturating_mul(sections.len());
    if size > MAX_KOSZUL_DIM {
        return Err(Error::BudgetExhausted(format!(
            "Koszul space of dimension {size} exceeds {MAX_KOSZUL_DIM}"
        )));
    }
    let mut elems = Vec::with_capacity(size);
    for set in subsets(w.len(), p) {
        for &e in sections {
            elems.push((set.clone(), e));
        }
    }
    let index = elems
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    let weight = elems
        .iter()
        .map(|(set, e)| set.iter().map(|&i| w[i]).sum::<i64>() + e)
        .collect();
    Ok(Space {
        elems,
        index,
        weight,
    })
}

/// Image of one basis element: `Σ_j (-1)^j (I \ i_j) ⊗ w_{i_j} m`.
fn apply(w: &[i64], x: &(Vec<usize>, i64), target: &Space) -> Result<Vec<(usize, i64)>> {
    let (set, e) = x;
    let mut out = Vec::with_capacity(set.len());
    for (j, &i) in set.iter().enumerate() {
        let mut rest = set.clone();
        rest.remove(j);
        let key = (rest, e + w[i]);
        let Some(&t) = target.index.get(&key) else {
            return Err(Error::UnsupportedModel(format!(
                "product of sections leaves H⁰ at exponent {}",
                key.1
            )));
        };
        out.push((t, if j % 2 == 0 { 1 } else { -1 }));
    }
    Ok(out)
}

type Sparse = Vec<Vec<(usize, i64)>>;

fn differential(w: &[i64], source: &Space, target: &Space) -> Result<Sparse> {
    if target.elems.is_empty() {
        return Ok(vec![Vec::new(); source.elems.len()]);
    }
    source.elems.iter().map(|x| apply(w, x, target)).collect()
}

/// Rank of a weight-preserving map, one fraction-free elimination per weight.
fn graded_rank(d: &Sparse, source: &Space, target: &Space) -> usize {
    let mut blocks: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, &wt) in source.weight.iter().enumerate() {
        blocks.entry(wt).or_default().0.push(i);
    }
    for (i, &wt) in target.weight.iter().enumerate() {
        blocks.entry(wt).or_default().1.push(i);
    }
    let blocks: Vec<_> = blocks.into_values().collect();
    blocks
        .par_iter()
        .map(|(cols, rows)| {
            if cols.is_empty() || rows.is_empty() {
                return 0;
            }
            let pos: HashMap<usize, usize> =
                rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
            let mut m = vec![vec![BigInt::from(0); cols.len()]; rows.len()];
            for (c, &src) in cols.iter().enumerate() {
                for &(t, v) in &d[src] {
                    m[pos[&t]][c] += v;
                }
            }
            bareiss_rank(m)
        })
        .sum()
}

fn composes_to_zero(d1: &Sparse, d2: &Sparse) -> bool {
    d1.par_iter().all(|col| {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(mid, a) in col {
            for &(t, b) in &d2[mid] {
                *acc.entry(t).or_default() += a * b;
            }
        }
        acc.values().all(|&v| v == 0)
    })
}

/// `dim K_{p,q}(C, W)` on the monomial model of a numerical semigroup.
pub fn koszul_semigroup(s: &GoodSemigroup, p: usize, q: usize) -> Result<KoszulReport> {
    let w = section_exponents(s, 1)?;
    let sec = |k: Option<usize>| -> Result<Vec<i64>> {
        match k {
            Some(k) => section_exponents(s, k),
            None => Ok(Vec::new()),
        }
    };
    let domain = space(&w, Some(p + 1), &sec(q.checked_sub(1))?)?;
    let middle = space(&w, Some(p), &sec(Some(q))?)?;
    let codomain = space(&w, p.checked_sub(1), &sec(Some(q + 1))?)?;
    let d1 = differential(&w, &domain, &middle)?;
    let d2 = differential(&w, &middle, &codomain)?;
    if !composes_to_zero(&d1, &d2) {
        return Err(Error::ConstructionFailure(
            "Koszul differentials do not compose to zero".into(),
        ));
    }
    let rank_phi1 = graded_rank(&d1, &domain, &middle);
    let rank_phi2 = graded_rank(&d2, &middle, &codomain);
    Ok(KoszulReport {
        p,
        q,
        dim_domain: domain.elems.len(),
        dim_middle: middle.elems.len(),
        dim_codomain: codomain.elems.len(),
        rank_phi1,
        rank_phi2,
        dim_kpq: middle.elems.len() - rank_phi2 - rank_phi1,
    })
}

pub fn koszul_dimension(curve: &CurveSpec, p: usize, q: usize) -> Result<KoszulReport> {
    let s = curve
        .numerical_semigroup()
        .ok_or_else(|| Error::UnsupportedModel("Koszul dimensions need a monomial curve".into()))?;
    if curve.singular_fibers().is_empty() {
        return Err(Error::UnsupportedModel("the curve is smooth".into()));
    }
    koszul_semigroup(&s, p, q)
}

fn choose(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n, k)
    }
}

/// Degree `r` part of the ideal of the blowup along the canonical sheaf.
pub fn dim_ir_hat(g: i64, eta: i64, mu: i64, r: i64) -> i64 {
    choose(r + g - 2 + mu, r) - r * (2 * g - 2 - eta) + (g - eta - mu - 1)
}

pub fn dim_i2_hat_closed(g: i64, eta: i64, mu: i64) -> i64 {
    (g * g + (2 * mu - 7) * g + mu * mu - 3 * mu + 2 * eta + 6) / 2
}

/// Degree `r` part of the ideal of the curve itself; `rs` is `ρ - σ`.
pub fn dim_ir(g: i64, rs: i64, r: i64) -> i64 {
    choose(r + g + 2 * rs - 1, r) + g * (1 - 2 * r) - 2 * r * rs + r - 1
}

pub fn dim_i2_closed(g: i64, rs: i64) -> i64 {
    ((g + 2 * rs - 1) * (g + 2 * rs - 2) - 2 * g) / 2
}

/// Forms of degree `r` vanishing on the monomial embedding with the given
/// exponents: all monomials minus the distinct exponent sums.
pub fn direct_ir(basis: &[i64], r: usize) -> i64 {
    let mut sums: BTreeSet<i64> = BTreeSet::from([0]);
    for _ in 0..r {
        sums = sums
            .iter()
            .flat_map(|a| basis.iter().map(move |b| a + b))
            .collect();
    }
    let n = basis.len() as i64 - 1;
    choose(r as i64 + n, r as i64) - sums.len() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrDimensionRecord {
    pub r: usize,
    pub formula_value: i64,
    pub closed_form: Option<i64>,
    pub direct_value: Option<i64>,
    /// `N` for the embedding into `P^N`.
    pub embedding_dimension: usize,
    pub basis: Vec<i64>,
}

impl IrDimensionRecord {
    pub fn agrees(&self) -> bool {
        self.direct_value.is_none_or(|d| d == self.formula_value)
            && self.closed_form.is_none_or(|c| c == self.formula_value)
    }
}

fn numerical(s: &GoodSemigroup) -> Result<(i64, i64)> {
    if s.branches() != 1 {
        return Err(Error::UnsupportedBranchCount(s.branches()));
    }
    Ok((s.conductor().get(0), s.delta()? as i64))
}

/// Exponents of `H⁰(O_Ĉ W)`: blowup values in `[0, β - 2]`.
pub fn blowup_basis(s: &GoodSemigroup) -> Result<Vec<i64>> {
    let (beta, _) = numerical(s)?;
    let b = blowup_semigroup(s)?;
    Ok((0..=beta - 2)
        .filter(|&a| b.contains(&ValueVector::scalar(a)))
        .collect())
}

/// Exponents embedding the curve through the inverse blowup: `S ∩ [0, 2β - 1]`.
pub fn star_basis(s: &GoodSemigroup) -> Result<Vec<i64>> {
    let (beta, _) = numerical(s)?;
    Ok((0..2 * beta)
        .filter(|&a| s.contains(&ValueVector::scalar(a)))
        .collect())
}

/// Formula and direct count for the blowup of the monomial curve of `S`.
pub fn quadrics_hat(s: &GoodSemigroup, r: usize) -> Result<IrDimensionRecord> {
    let c = classify(s)?;
    if c.gorenstein {
        return Err(Error::GorensteinInput);
    }
    let (g, eta, mu) = (c.delta as i64, c.eta as i64, c.mu as i64);
    let basis = blowup_basis(s)?;
    Ok(IrDimensionRecord {
        r,
        formula_value: dim_ir_hat(g, eta, mu, r as i64),
        closed_form: (r == 2).then(|| dim_i2_hat_closed(g, eta, mu)),
        direct_value: Some(direct_ir(&basis, r)),
        embedding_dimension: basis.len().saturating_sub(1),
        basis,
    })
}

/// Formula and direct count for the monomial curve of `S` itself.
pub fn quadrics(s: &GoodSemigroup, r: usize) -> Result<IrDimensionRecord> {
    let (beta, delta) = numerical(s)?;
    if s.is_symmetric() {
        return Err(Error::GorensteinInput);
    }
    let rs = beta - delta;
    let basis = star_basis(s)?;
    Ok(IrDimensionRecord {
        r,
        formula_value: dim_ir(delta, rs, r as i64),
        closed_form: (r == 2).then(|| dim_i2_closed(delta, rs)),
        direct_value: Some(direct_ir(&basis, r)),
        embedding_dimension: basis.len().saturating_sub(1),
        basis,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarSemigroup {
    pub semigroup: GoodSemigroup,
    pub genus: u64,
    pub eta: u64,
    pub mu: u64,
    pub expected_genus: u64,
    pub expected_eta: u64,
}

impl StarSemigroup {
    pub fn matches(&self) -> bool {
        self.genus == self.expected_genus && self.eta == self.expected_eta && self.mu == 1
    }
}

/// `S_* = {0} ∪ {2β - l : l a gap} ∪ [2β + 1, ∞)`, checked to be a semigroup
/// whose blowup along the canonical ideal is `S`.
pub fn star_semigroup(s: &GoodSemigroup) -> Result<StarSemigroup> {
    let (beta, delta) = numerical(s)?;
    if beta == 0 {
        return Ok(StarSemigroup {
            semigroup: s.clone(),
            genus: 0,
            eta: 0,
            mu: 0,
            expected_genus: 0,
            expected_eta: 0,
        });
    }
    let mut small: BTreeSet<i64> = BTreeSet::from([0]);
    for l in s.gaps()? {
        small.insert(2 * beta - l as i64);
    }
    let cond = 2 * beta + 1;
    let member = |a: i64| a >= cond || small.contains(&a);
    for &a in &small {
        for &b in &small {
            if !member(a + b) {
                return Err(Error::SemigroupAxiomFailure(format!(
                    "{a} + {b} is missing from the inverse blowup"
                )));
            }
        }
    }
    let gaps: Vec<u64> = (1..cond)
        .filter(|&a| !member(a))
        .map(|a| a as u64)
        .collect();
    let star = GoodSemigroup::from_gaps(&gaps)?;
    let c = classify(&star)?;
    if c.blowup.values() != s.values() {
        return Err(Error::SemigroupAxiomFailure(
            "the blowup of the inverse blowup differs from the input".into(),
        ));
    }
    Ok(StarSemigroup {
        genus: c.delta,
        eta: c.eta,
        mu: c.mu,
        expected_genus: (delta + 2 * (beta - delta)) as u64,
        expected_eta: (2 * (beta - delta) - 1) as u64,
        semigroup: star,
    })
}

/// The monomial curve with exponents `p+3, p+5, p+6, ..., 2p+7`.
pub fn family_cp(p: u64) -> Result<CurveSpec> {
    if p == 0 {
        return Err(Error::InvalidInput("the family starts at p = 1".into()));
    }
    let mut e = vec![p + 3];
    e.extend(p + 5..=2 * p + 7);
    CurveSpec::monomial(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(g: &[u64]) -> GoodSemigroup {
        GoodSemigroup::from_numerical_generators(g).unwrap()
    }

    #[test]
    fn k02_and_k01() {
        let s = num(&[3, 7, 10, 11]);
        let r = koszul_semigroup(&s, 0, 2).unwrap();
        assert_eq!((r.dim_middle, r.dim_kpq), (12, 0));
        let r = koszul_semigroup(&s, 0, 1).unwrap();
        assert_eq!(r.dim_kpq, 0);
        assert_eq!(koszul_semigroup(&s, 1, 1).unwrap().rank_phi1, 10);
    }

    #[test]
    fn quadric_counts() {
        assert_eq!(dim_i2_hat_closed(5, 1, 1), 3);
        assert_eq!(dim_ir_hat(5, 1, 1, 2), 3);
        assert_eq!(direct_ir(&[0, 3, 4, 6, 7], 2), 3);
        assert_eq!(direct_ir(&[0, 3, 4, 6, 7], 1), 0);
        let rec = quadrics_hat(&num(&[3, 7, 10, 11]), 2).unwrap();
        assert_eq!(rec.basis, vec![0, 3, 4, 6, 7]);
        assert!(rec.agrees());
        let rec = quadrics(&num(&[3, 5, 7]), 2).unwrap();
        assert_eq!((rec.formula_value, rec.direct_value), (12, Some(12)));
    }

    #[test]
    fn inverse_blowup() {
        let st = star_semigroup(&num(&[3, 5, 7])).unwrap();
        let small: Vec<i64> = st
            .semigroup
            .small_elements()
            .iter()
            .map(|a| a.get(0))
            .collect();
        assert_eq!(small, vec![0, 6, 8, 9, 11]);
        assert_eq!((st.genus, st.eta, st.mu), (7, 3, 1));
        assert!(st.matches());
        let st = star_semigroup(&num(&[1])).unwrap();
        assert_eq!(st.semigroup.conductor().get(0), 0);
        let st = star_semigroup(&num(&[3, 7, 10, 11])).unwrap();
        assert_eq!((st.genus, st.eta), (13, 7));
    }

    #[test]
    fn family() {
        let c = family_cp(1).unwrap();
        assert_eq!(c.exponents(), Some(&[4u64, 6, 7, 8, 9][..]));
        assert!(family_cp(0).is_err());
    }
}
