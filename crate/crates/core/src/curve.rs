//! Rational curves given by monomials or by polynomial parametrizations,
//! their local value semigroups and fractional ideal sheaves.
//!
//! Local computations happen in `∏_j Q[t]/(t - c_j)^N`, one factor per point
//! of a singular fiber. A value `a` is attained by the local ring iff
//! `rank C(a + e_i) > rank C(a)` for every branch `i`, where `C(a)` is the set
//! of coordinates `(j, k)` with `k < a_j`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{q, rank_profile, rank_q, Echelon, Q};
use crate::poly::{parse, parse_poly, series_mul, Poly, RatFunc};
use crate::semigroup::{
    blowup_semigroup, canonical_k, distance, validate, GoodSemigroup, ValueSet,
};
use crate::value::{box_points, ValueVector, MAX_BRANCHES};

/// First truncation order tried for local computations.
pub const INITIAL_ORDER: usize = 16;
/// Largest truncation order before giving up.
pub const MAX_ORDER: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Monomial,
    Parametrized,
}

/// A rational curve with normalization `P^1`, smooth at `t = ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    kind: CurveKind,
    exponents: Vec<u64>,
    generators: Vec<Poly>,
    singular_fibers: Vec<Vec<Q>>,
}

pub fn fmt_q(c: &Q) -> String {
    c.to_string()
}

impl CurveSpec {
    /// `Spec k[t^{e_1}, ..., t^{e_n}]`; singular at `t = 0` unless some `e_i = 1`.
    pub fn monomial(exponents: &[u64]) -> Result<Self> {
        let mut e: Vec<u64> = exponents.iter().copied().filter(|&x| x > 0).collect();
        e.sort_unstable();
        e.dedup();
        if e.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let g = e.iter().fold(0, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::NotBirational(format!(
                "exponents share the factor {g}"
            )));
        }
        let singular_fibers = if e[0] == 1 {
            Vec::new()
        } else {
            vec![vec![q(0)]]
        };
        Ok(CurveSpec {
            kind: CurveKind::Monomial,
            generators: e.iter().map(|&x| Poly::monomial(x as usize)).collect(),
            exponents: e,
            singular_fibers,
        })
    }

    /// A curve given by polynomial generators and its singular fibers.
    pub fn parametrized(generators: Vec<Poly>, singular_fibers: Vec<Vec<Q>>) -> Result<Self> {
        let curve = CurveSpec {
            kind: CurveKind::Parametrized,
            exponents: Vec::new(),
            generators,
            singular_fibers,
        };
        curve.check()?;
        Ok(curve)
    }

    pub fn parse_parametrized(generators: &[&str], singular_fibers: Vec<Vec<Q>>) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| parse_poly(g))
            .collect::<Result<Vec<_>>>()?;
        Self::parametrized(gens, singular_fibers)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn exponents(&self) -> Option<&[u64]> {
        (self.kind == CurveKind::Monomial).then_some(self.exponents.as_slice())
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn singular_fibers(&self) -> &[Vec<Q>] {
        &self.singular_fibers
    }

    /// The numerical semigroup of a monomial curve, read off its exponents.
    pub fn numerical_semigroup(&self) -> Option<GoodSemigroup> {
        self.exponents()
            .map(|e| GoodSemigroup::from_numerical_generators(e).expect("checked at construction"))
    }

    fn check(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if let Some(g) = self
            .generators
            .iter()
            .find(|g| g.degree().unwrap_or(0) == 0)
        {
            return Err(Error::InvalidInput(format!("generator {g} is constant")));
        }
        let mut seen = BTreeSet::new();
        for fiber in &self.singular_fibers {
            if fiber.is_empty() || fiber.len() > MAX_BRANCHES {
                return Err(Error::UnsupportedBranchCount(fiber.len()));
            }
            for c in fiber {
                if !seen.insert(c.clone()) {
                    return Err(Error::InvalidInput(format!(
                        "parameter {} appears in two fibers",
                        fmt_q(c)
                    )));
                }
            }
            let image = |c: &Q| -> Vec<Q> { self.generators.iter().map(|g| g.eval(c)).collect() };
            let first = image(&fiber[0]);
            for c in &fiber[1..] {
                if image(c) != first {
                    return Err(Error::FiberMismatch(format!(
                        "{} and {} map to different points",
                        fmt_q(&fiber[0]),
                        fmt_q(c)
                    )));
                }
            }
        }
        self.check_birational()?;
        self.check_declared_singularities()
    }

    /// The degree of `t -> (g_i(t))` onto its image is the degree of
    /// `gcd_i(g_i(t) - g_i(u))` for a generic `u`.
    fn check_birational(&self) -> Result<()> {
        let degree = [
            q(2),
            Q::new(7.into(), 3.into()),
            q(-5),
            Q::new(11.into(), 13.into()),
        ]
        .iter()
        .map(|u| {
            self.generators
                .iter()
                .map(|g| g.sub(&Poly::constant(g.eval(u))))
                .fold(Poly::zero(), |acc, p| acc.gcd(&p))
                .degree()
                .unwrap_or(0)
        })
        .min()
        .unwrap();
        if degree > 1 {
            return Err(Error::NotBirational(format!(
                "the parametrization has degree {degree} onto its image"
            )));
        }
        Ok(())
    }

    /// Rational cusps and rational collisions with a declared point must lie
    /// in the declared fibers.
    fn check_declared_singularities(&self) -> Result<()> {
        let declared: BTreeSet<&Q> = self.singular_fibers.iter().flatten().collect();
        let dgcd = self
            .generators
            .iter()
            .map(|g| g.derivative())
            .fold(Poly::zero(), |acc, p| acc.gcd(&p));
        for c in dgcd.rational_roots()? {
            if !declared.contains(&c) {
                return Err(Error::UndeclaredSingularity(format!(
                    "all derivatives vanish at t = {}",
                    fmt_q(&c)
                )));
            }
        }
        let images: Vec<Vec<Q>> = self
            .singular_fibers
            .iter()
            .map(|f| self.generators.iter().map(|g| g.eval(&f[0])).collect())
            .collect();
        for (i, a) in images.iter().enumerate() {
            if let Some(j) = images[i + 1..].iter().position(|b| b == a) {
                return Err(Error::UndeclaredSingularity(format!(
                    "fibers of t = {} and t = {} have the same image",
                    fmt_q(&self.singular_fibers[i][0]),
                    fmt_q(&self.singular_fibers[i + 1 + j][0])
                )));
            }
        }
        for fiber in &self.singular_fibers {
            let common = self
                .generators
                .iter()
                .map(|g| g.sub(&Poly::constant(g.eval(&fiber[0]))))
                .fold(Poly::zero(), |acc, p| acc.gcd(&p));
            for c in common.rational_roots()? {
                if !fiber.contains(&c) {
                    return Err(Error::UndeclaredSingularity(format!(
                        "t = {} maps to the image of the fiber of t = {}",
                        fmt_q(&c),
                        fmt_q(&fiber[0])
                    )));
                }
            }
        }
        Ok(())
    }

    fn fiber_position(&self, fiber: &[Q]) -> Result<usize> {
        self.singular_fibers
            .iter()
            .position(|f| f.as_slice() == fiber)
            .ok_or_else(|| Error::InvalidInput("fiber is not declared on the curve".into()))
    }
}

/// Image of the local ring of a fiber in `∏_j Q[t]/(t - c_j)^N`, as echelon
/// rows over the concatenated coordinates.
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    pub fiber: Vec<Q>,
    pub order: usize,
    pub rows: Vec<Vec<Q>>,
}

impl LocalAlgebra {
    pub fn branches(&self) -> usize {
        self.fiber.len()
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// The same algebra at a lower truncation order.
    pub fn truncate(&self, order: usize) -> LocalAlgebra {
        let n = self.order;
        let mut ech = Echelon::new();
        for r in &self.rows {
            let cut: Vec<Q> = (0..self.branches())
                .flat_map(|j| r[j * n..j * n + order.min(n)].iter().cloned())
                .collect();
            ech.insert(cut);
        }
        LocalAlgebra {
            fiber: self.fiber.clone(),
            order: order.min(n),
            rows: ech.rows().map(|r| r.to_vec()).collect(),
        }
    }
}

fn branch_product(a: &[Q], b: &[Q], s: usize, n: usize) -> Vec<Q> {
    (0..s)
        .flat_map(|j| series_mul(&a[j * n..(j + 1) * n], &b[j * n..(j + 1) * n]))
        .collect()
}

/// Closure of `{1}` under multiplication by the shifted generators.
pub fn local_algebra(curve: &CurveSpec, fiber: &[Q], order: usize) -> Result<LocalAlgebra> {
    let s = fiber.len();
    let n = order;
    let ys: Vec<Vec<Q>> = curve
        .generators
        .iter()
        .map(|g| {
            let shift = g.eval(&fiber[0]);
            fiber
                .iter()
                .flat_map(|c| {
                    let mut t = g.taylor(c, n);
                    t[0] -= &shift;
                    t
                })
                .collect()
        })
        .collect();
    let mut one = vec![q(0); s * n];
    for j in 0..s {
        one[j * n] = q(1);
    }
    let mut ech = Echelon::new();
    let mut queue = vec![ech.insert(one).expect("1 is nonzero")];
    while let Some(b) = queue.pop() {
        for y in &ys {
            if let Some(r) = ech.insert(branch_product(&b, y, s, n)) {
                queue.push(r);
            }
        }
    }
    Ok(LocalAlgebra {
        fiber: fiber.to_vec(),
        order,
        rows: ech.rows().map(|r| r.to_vec()).collect(),
    })
}

/// Ranks of `C(c)` by one rank profile per prefix `c[..s-1]`.
fn prefix_ranks(rows: &[Vec<Q>], len: usize, s: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let prefixes: Vec<Vec<usize>> = if s == 1 {
        vec![Vec::new()]
    } else {
        let hi = ValueVector::splat(s - 1, len as i64);
        box_points(&ValueVector::zero(s - 1), &hi)
            .map(|p| p.coords().iter().map(|&x| x as usize).collect())
            .collect()
    };
    prefixes
        .par_iter()
        .map(|p| {
            let mut order = Vec::with_capacity(s * len);
            for (j, &cj) in p.iter().enumerate() {
                order.extend(j * len..j * len + cj);
            }
            let used = order.len();
            order.extend((s - 1) * len..s * len);
            for (j, &cj) in p.iter().enumerate() {
                order.extend(j * len + cj..(j + 1) * len);
            }
            let profile = rank_profile(rows, &order);
            let counts = (0..=len)
                .map(|k| profile.iter().filter(|&&x| x < used + k).count())
                .collect();
            (p.clone(), counts)
        })
        .collect()
}

/// Two branches: the rows of the span vanishing on the first `c0` columns
/// of branch 0 are those with pivot at least `c0`, so lowering `c0` adds one
/// row at a time to an echelon of branch 1 projections.
fn two_branch_ranks(rows: &[Vec<Q>], len: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut span = Echelon::new();
    for r in rows {
        span.insert(r.clone());
    }
    let dim = span.rank();
    let mut by_pivot: Vec<Option<&[Q]>> = vec![None; 2 * len];
    for (p, r) in span.pivots().zip(span.rows()) {
        by_pivot[p] = Some(r);
    }
    let mut proj = Echelon::new();
    let mut w = 0;
    for r in by_pivot[len..].iter().flatten() {
        proj.insert(r[len..].to_vec());
        w += 1;
    }
    let mut out = Vec::with_capacity(len + 1);
    for c0 in (0..=len).rev() {
        if let Some(Some(r)) = by_pivot.get(c0).filter(|_| c0 < len) {
            proj.insert(r[len..].to_vec());
            w += 1;
        }
        let mut piv: Vec<usize> = proj.pivots().collect();
        piv.sort_unstable();
        let counts = (0..=len)
            .map(|c1| dim - (w - piv.partition_point(|&x| x < c1)))
            .collect();
        out.push((vec![c0], counts));
    }
    out
}

/// Values attained by the span of `rows`, whose coordinates are `len` per
/// branch starting at exponent `lo[j]`. Only values `< lo + len` are decided.
pub fn attained_values(rows: &[Vec<Q>], lo: &[i64], len: usize) -> BTreeSet<ValueVector> {
    let s = lo.len();
    let side = len + 1;
    let idx = |c: &[usize]| c.iter().fold(0, |acc, &x| acc * side + x);
    // rank of C(c) for every count vector c in [0, len]^s
    let ranks: Vec<(Vec<usize>, Vec<usize>)> = if s == 2 {
        two_branch_ranks(rows, len)
    } else {
        prefix_ranks(rows, len, s)
    };
    let mut rank = vec![0usize; side.pow(s as u32)];
    for (p, counts) in &ranks {
        for (k, &r) in counts.iter().enumerate() {
            let mut c = p.clone();
            c.push(k);
            rank[idx(&c)] = r;
        }
    }
    let top = ValueVector::splat(s, len as i64 - 1);
    box_points(&ValueVector::zero(s), &top)
        .filter(|c| {
            let cs: Vec<usize> = c.coords().iter().map(|&x| x as usize).collect();
            let r = rank[idx(&cs)];
            (0..s).all(|i| {
                let mut up = cs.clone();
                up[i] += 1;
                rank[idx(&up)] > r
            })
        })
        .map(|c| ValueVector::new(c.coords().iter().zip(lo).map(|(x, l)| x + l).collect()))
        .collect()
}

fn value_set_from(attained: &BTreeSet<ValueVector>, lo: &[i64], len: usize) -> Result<ValueSet> {
    let lo_v = ValueVector::new(lo.to_vec());
    let hi = ValueVector::new(lo.iter().map(|l| l + len as i64 - 1).collect());
    ValueSet::from_box_predicate(&lo_v, &hi, |a| attained.contains(a))
}

/// A singular point with its value semigroup and the truncated local ring
/// used to compute it.
#[derive(Clone, Debug)]
pub struct LocalPoint {
    pub fiber: Vec<Q>,
    pub semigroup: GoodSemigroup,
    pub algebra: LocalAlgebra,
    /// Truncation order at which two consecutive rounds first agreed.
    pub stable_order: usize,
}

fn semigroup_at_order(
    curve: &CurveSpec,
    fiber: &[Q],
    order: usize,
) -> Result<(GoodSemigroup, LocalAlgebra)> {
    let alg = local_algebra(curve, fiber, order)?;
    let lo = vec![0; fiber.len()];
    let attained = attained_values(&alg.rows, &lo, order);
    for (j, point) in fiber.iter().enumerate() {
        let g = attained.iter().fold(0i64, |acc, a| acc.gcd(&a.get(j)));
        if g > 1 {
            return Err(Error::NotBirational(format!(
                "branch at t = {} only attains multiples of {g}",
                fmt_q(point)
            )));
        }
    }
    let values = value_set_from(&attained, &lo, order)?;
    let s =
        GoodSemigroup::from_small_elements(values.conductor().clone(), values.elements().to_vec())?;
    Ok((s, alg))
}

/// Computes the value semigroup at a declared fiber, doubling the truncation
/// order until two consecutive orders agree.
pub fn analyze_point(curve: &CurveSpec, fiber: &[Q]) -> Result<LocalPoint> {
    type Cache = Mutex<HashMap<(Vec<Poly>, Vec<Q>), Result<LocalPoint>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (curve.generators.clone(), fiber.to_vec());
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let out = analyze_point_uncached(curve, fiber);
    cache.lock().unwrap().insert(key, out.clone());
    out
}

fn analyze_point_uncached(curve: &CurveSpec, fiber: &[Q]) -> Result<LocalPoint> {
    curve.fiber_position(fiber)?;
    let mut order = INITIAL_ORDER;
    let mut prev = semigroup_at_order(curve, fiber, order);
    while order < MAX_ORDER {
        let next = semigroup_at_order(curve, fiber, 2 * order);
        if let (Ok((a, _)), Ok((b, alg))) = (&prev, &next) {
            let room = a
                .conductor()
                .coords()
                .iter()
                .all(|&c| (c as usize) + 2 <= order);
            if a == b && room {
                let b = b.clone();
                if b.values() == &ValueSet::normalization(fiber.len()) {
                    return Err(Error::NotSingular);
                }
                let report = validate(&b);
                if let Some(f) = report.first_failure() {
                    return Err(Error::SemigroupAxiomFailure(format!(
                        "value set at t = {} violates {}",
                        fmt_q(&fiber[0]),
                        f.axiom
                    )));
                }
                return Ok(LocalPoint {
                    fiber: fiber.to_vec(),
                    semigroup: b,
                    algebra: alg.clone(),
                    stable_order: order,
                });
            }
        }
        if let Err(e @ Error::NotBirational(_)) = &next {
            return Err(e.clone());
        }
        order *= 2;
        prev = next;
    }
    Err(Error::NoStabilization(format!(
        "value set at t = {} still changing at truncation order {MAX_ORDER}",
        fmt_q(&fiber[0])
    )))
}

pub fn local_value_semigroup(curve: &CurveSpec, fiber: &[Q]) -> Result<GoodSemigroup> {
    Ok(analyze_point(curve, fiber)?.semigroup)
}

/// The local data of every singular point. Monomial curves use the exponent
/// semigroup directly and the analytic path only when `analytic` is set.
pub fn singular_points(curve: &CurveSpec, analytic: bool) -> Result<Vec<GoodSemigroup>> {
    if !analytic {
        if let Some(s) = curve.numerical_semigroup() {
            return Ok(if curve.singular_fibers.is_empty() {
                Vec::new()
            } else {
                vec![s]
            });
        }
    }
    curve
        .singular_fibers
        .par_iter()
        .map(|f| local_value_semigroup(curve, f))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointInvariants {
    pub fiber: Vec<String>,
    pub branches: usize,
    pub conductor: ValueVector,
    pub delta: u64,
    pub eta: u64,
    /// `dim(Ô/W)` from the blowup along the canonical ideal.
    pub mu_blowup: u64,
    pub conductor_colength: u64,
    pub beta_norm: u64,
    pub gorenstein: bool,
    pub kunz: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub points: Vec<PointInvariants>,
    pub genus: u64,
    pub eta: u64,
    /// Not reported for hyperelliptic curves; elsewhere `Ô = O'`.
    pub mu: Option<u64>,
    pub conductor_colength: u64,
    pub gorenstein: bool,
    pub nearly_normal: bool,
    pub nearly_gorenstein: Option<bool>,
    pub gon2: bool,
    /// Genus at least two and not hyperelliptic.
    pub nonhyperelliptic: bool,
    /// `Σ (|β_P| - δ_P)` over the non-Gorenstein points.
    pub rho_minus_sigma: i64,
    /// `ρ - σ` evaluated literally with `C̃` the desingularization at the
    /// non-Gorenstein points: `Σ_Gor |β_P| - Σ_nonGor δ_P`.
    pub rho_minus_sigma_literal: i64,
}

pub fn point_invariants(fiber: &[Q], s: &GoodSemigroup) -> Result<PointInvariants> {
    let k = canonical_k(s)?;
    let delta = s.delta()?;
    let eta = distance(k.values(), s.values())?;
    let blow = blowup_semigroup(s)?;
    let mu_blowup = distance(blow.values(), k.values())?;
    Ok(PointInvariants {
        fiber: fiber.iter().map(fmt_q).collect(),
        branches: s.branches(),
        conductor: s.conductor().clone(),
        delta,
        eta,
        mu_blowup,
        conductor_colength: s.conductor_colength()?,
        beta_norm: s.conductor().norm() as u64,
        gorenstein: eta == 0,
        kunz: eta == 1,
    })
}

/// Global invariants; `gon2` comes from an exact pencil search on monomial
/// curves and from the pencil family otherwise.
pub fn curve_invariants(curve: &CurveSpec) -> Result<CurveInvariants> {
    let sgs = singular_points(curve, false)?;
    let points = curve
        .singular_fibers
        .iter()
        .zip(&sgs)
        .map(|(f, s)| point_invariants(f, s))
        .collect::<Result<Vec<_>>>()?;
    let genus: u64 = points.iter().map(|p| p.delta).sum();
    let eta: u64 = points.iter().map(|p| p.eta).sum();
    let gorenstein = eta == 0;
    let conductor_colength = points.iter().map(|p| p.conductor_colength).sum();
    // the projective line has gonality one
    let gon2 = genus >= 1 && crate::linear_systems::has_degree_two_pencil(curve, genus)?;
    let hyperelliptic = gorenstein && genus >= 2 && gon2;
    let nonhyperelliptic = genus >= 2 && !hyperelliptic;
    let mu = (!hyperelliptic).then(|| points.iter().map(|p| p.mu_blowup).sum::<u64>());
    let rho_minus_sigma = points
        .iter()
        .filter(|p| !p.gorenstein)
        .map(|p| p.beta_norm as i64 - p.delta as i64)
        .sum();
    let literal = points
        .iter()
        .map(|p| {
            if p.gorenstein {
                p.beta_norm as i64
            } else {
                -(p.delta as i64)
            }
        })
        .sum();
    Ok(CurveInvariants {
        genus,
        eta,
        mu,
        conductor_colength,
        gorenstein,
        nearly_normal: conductor_colength == 1,
        nearly_gorenstein: mu.map(|m| m == 1),
        gon2,
        nonhyperelliptic,
        rho_minus_sigma,
        rho_minus_sigma_literal: literal,
        points,
    })
}

/// A fractional ideal sheaf `O_C⟨1, f_2, ..., f_k⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafModel {
    curve: CurveSpec,
    generators: Vec<RatFunc>,
}

impl SheafModel {
    /// Prepends `1` if missing. Denominators must split over `Q`.
    pub fn new(curve: CurveSpec, mut generators: Vec<RatFunc>) -> Result<Self> {
        let one = RatFunc::poly(Poly::one());
        if !generators.contains(&one) {
            generators.insert(0, one);
        }
        for g in &generators {
            let (_, rest) = g.den().split_rational()?;
            if rest.degree() != Some(0) {
                return Err(Error::UnsupportedModel(format!(
                    "denominator of {g} does not split over Q"
                )));
            }
        }
        Ok(SheafModel { curve, generators })
    }

    pub fn parse(curve: CurveSpec, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| parse(g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(curve, gens)
    }

    /// `O_C` itself.
    pub fn structure(curve: CurveSpec) -> Self {
        Self::new(curve, Vec::new()).unwrap()
    }

    /// `O_C⟨1, t^r⟩`.
    pub fn pencil(curve: CurveSpec, r: i64) -> Self {
        let f = if r >= 0 {
            RatFunc::poly(Poly::monomial(r as usize))
        } else {
            RatFunc::new(Poly::one(), Poly::monomial((-r) as usize)).unwrap()
        };
        Self::new(curve, vec![f]).unwrap()
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn generators(&self) -> &[RatFunc] {
        &self.generators
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Singular,
    Smooth,
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafPoint {
    pub kind: PointKind,
    pub fiber: Vec<String>,
    pub degree: u64,
    /// `v(F_P)` at singular points.
    pub values: Option<Vec<ValueVector>>,
    pub min: Option<ValueVector>,
    pub conductor: Option<ValueVector>,
    /// `dim(F_P/O_P)` from ranks of truncated spans; must equal `degree`.
    pub dimension_check: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafDegree {
    pub points: Vec<SheafPoint>,
    pub total: u64,
}

/// Stalk of a sheaf at a singular fiber, truncated like the algebra.
struct Stalk {
    lo: Vec<i64>,
    len: usize,
    rows: Vec<Vec<Q>>,
    values: ValueSet,
}

fn stalk(gens: &[RatFunc], alg: &LocalAlgebra) -> Result<Stalk> {
    let s = alg.branches();
    let n = alg.order;
    let laurents: Vec<Vec<(i64, Vec<Q>)>> = gens
        .iter()
        .map(|f| alg.fiber.iter().map(|c| f.laurent(c, n)).collect())
        .collect();
    let lo: Vec<i64> = (0..s)
        .map(|j| laurents.iter().map(|l| l[j].0).min().unwrap().min(0))
        .collect();
    let mut ech = Echelon::new();
    for l in &laurents {
        for b in &alg.rows {
            let mut row = vec![q(0); s * n];
            for j in 0..s {
                let (v, coeffs) = &l[j];
                let bj = &b[j * n..(j + 1) * n];
                for (k, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (m, x) in bj.iter().enumerate() {
                        let col = v + k as i64 + m as i64 - lo[j];
                        if col >= n as i64 {
                            break;
                        }
                        if !x.is_zero() {
                            row[j * n + col as usize] += c * x;
                        }
                    }
                }
            }
            ech.insert(row);
        }
    }
    let rows: Vec<Vec<Q>> = ech.rows().map(|r| r.to_vec()).collect();
    let attained = attained_values(&rows, &lo, n);
    let values = value_set_from(&attained, &lo, n)?;
    Ok(Stalk {
        lo,
        len: n,
        rows,
        values,
    })
}

/// Rows restricted to the coordinates `(j, k)` with `k < cut[j]`.
fn restrict(rows: &[Vec<Q>], lo: &[i64], len: usize, cut: &[i64]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| {
            (0..lo.len())
                .flat_map(|j| {
                    let keep = (cut[j] - lo[j]).clamp(0, len as i64) as usize;
                    r[j * len..j * len + keep].to_vec()
                })
                .collect()
        })
        .collect()
}

struct SingularStalk {
    point: LocalPoint,
    stalk: Stalk,
}

/// Computes the stalk at the given fiber, raising the truncation order until
/// the stalk value set agrees at two consecutive orders.
fn stable_stalk(f: &SheafModel, fiber: &[Q]) -> Result<SingularStalk> {
    let point = analyze_point(&f.curve, fiber)?;
    let mut order = point.stable_order;
    let mut cur = stalk(&f.generators, &point.algebra.truncate(order))?;
    while order < MAX_ORDER {
        let next = if 2 * order == point.algebra.order {
            stalk(&f.generators, &point.algebra)?
        } else {
            stalk(&f.generators, &local_algebra(&f.curve, fiber, order * 2)?)?
        };
        let room = cur
            .values
            .conductor()
            .coords()
            .iter()
            .zip(&cur.lo)
            .all(|(&c, &l)| c - l + 2 <= order as i64);
        if next.values == cur.values && room {
            return Ok(SingularStalk { point, stalk: cur });
        }
        cur = next;
        order *= 2;
    }
    Err(Error::NoStabilization(format!(
        "stalk at t = {} still changing at order {MAX_ORDER}",
        fmt_q(&fiber[0])
    )))
}

/// Poles of the generators outside the singular fibers, with orders.
fn smooth_poles(f: &SheafModel) -> Result<Vec<(Q, u64)>> {
    let singular: BTreeSet<&Q> = f.curve.singular_fibers.iter().flatten().collect();
    let mut poles: Vec<(Q, u64)> = Vec::new();
    for g in &f.generators {
        for (c, e) in g.den().split_rational()?.0 {
            if singular.contains(&c) {
                continue;
            }
            match poles.iter_mut().find(|(d, _)| *d == c) {
                Some(p) => p.1 = p.1.max(e as u64),
                None => poles.push((c, e as u64)),
            }
        }
    }
    poles.sort();
    Ok(poles)
}

fn pole_at_infinity(f: &SheafModel) -> u64 {
    f.generators
        .iter()
        .filter_map(|g| g.pole_at_infinity())
        .max()
        .unwrap_or(0)
        .max(0) as u64
}

struct SheafData {
    singular: Vec<SingularStalk>,
    smooth: Vec<(Q, u64)>,
    infinity: u64,
}

fn sheaf_data(f: &SheafModel) -> Result<SheafData> {
    let singular = f
        .curve
        .singular_fibers
        .par_iter()
        .map(|fib| stable_stalk(f, fib))
        .collect::<Result<Vec<_>>>()?;
    Ok(SheafData {
        singular,
        smooth: smooth_poles(f)?,
        infinity: pole_at_infinity(f),
    })
}

fn degree_table(data: &SheafData) -> Result<SheafDegree> {
    let mut points = Vec::new();
    for st in &data.singular {
        let s = &st.point.semigroup;
        let deg = distance(&st.stalk.values, s.values())?;
        let cut = s.conductor().coords().to_vec();
        let alg = &st.point.algebra;
        let zero = vec![0; alg.branches()];
        let module_rank = rank_q(&restrict(&st.stalk.rows, &st.stalk.lo, st.stalk.len, &cut));
        let algebra_rank = rank_q(&restrict(&alg.rows, &zero, alg.order, &cut));
        points.push(SheafPoint {
            kind: PointKind::Singular,
            fiber: st.point.fiber.iter().map(fmt_q).collect(),
            degree: deg,
            values: Some(st.stalk.values.elements().to_vec()),
            min: Some(st.stalk.values.min().clone()),
            conductor: Some(st.stalk.values.conductor().clone()),
            dimension_check: Some((module_rank - algebra_rank) as u64),
        });
    }
    for (c, e) in &data.smooth {
        points.push(SheafPoint {
            kind: PointKind::Smooth,
            fiber: vec![fmt_q(c)],
            degree: *e,
            values: None,
            min: None,
            conductor: None,
            dimension_check: None,
        });
    }
    points.push(SheafPoint {
        kind: PointKind::Infinity,
        fiber: vec!["inf".into()],
        degree: data.infinity,
        values: None,
        min: None,
        conductor: None,
        dimension_check: None,
    });
    let total = points.iter().map(|p| p.degree).sum();
    Ok(SheafDegree { points, total })
}

pub fn sheaf_degree(f: &SheafModel) -> Result<SheafDegree> {
    degree_table(&sheaf_data(f)?)
}

/// Degree table and `h⁰` from one pass over the singular fibers.
pub fn sheaf_summary(f: &SheafModel) -> Result<(SheafDegree, u64)> {
    let data = sheaf_data(f)?;
    Ok((degree_table(&data)?, h0_from(&data)?))
}

/// `h⁰(F)`: sections are `P/D` with `D` clearing every finite pole allowed by
/// `F`, `deg P <= deg D + deg_∞ F`, and `P/D ∈ F_P` at each singular point.
pub fn h0_sheaf(f: &SheafModel) -> Result<u64> {
    h0_from(&sheaf_data(f)?)
}

fn h0_from(data: &SheafData) -> Result<u64> {
    let mut den = Poly::one();
    for st in &data.singular {
        for (j, c) in st.point.fiber.iter().enumerate() {
            let m = st.stalk.values.min().get(j);
            if m < 0 {
                den = den.mul(&Poly::linear_power(c, (-m) as u32));
            }
        }
    }
    for (c, e) in &data.smooth {
        den = den.mul(&Poly::linear_power(c, *e as u32));
    }
    let nvars = den.degree().unwrap() + data.infinity as usize + 1;
    let mut constraints: Vec<Vec<Q>> = vec![Vec::new(); nvars];
    for st in &data.singular {
        let stalk = &st.stalk;
        let cut: Vec<i64> = stalk.values.conductor().coords().to_vec();
        let module = restrict(&stalk.rows, &stalk.lo, stalk.len, &cut);
        let mut ech = Echelon::new();
        for r in module {
            ech.insert(r);
        }
        for (m, row) in constraints.iter_mut().enumerate() {
            let f = RatFunc::new(Poly::monomial(m), den.clone())?;
            let mut v: Vec<Q> = Vec::new();
            for (j, c) in st.point.fiber.iter().enumerate() {
                let width = (cut[j] - stalk.lo[j]).max(0) as usize;
                let (val, coeffs) = f.laurent(c, width + 1);
                let mut part = vec![q(0); width];
                for (k, x) in coeffs.iter().enumerate() {
                    let col = val + k as i64 - stalk.lo[j];
                    if col < 0 {
                        if !x.is_zero() {
                            return Err(Error::InvalidInput("pole below the stalk minimum".into()));
                        }
                        continue;
                    }
                    if (col as usize) < width {
                        part[col as usize] = x.clone();
                    }
                }
                v.extend(part);
            }
            ech.reduce(&mut v);
            row.extend(v);
        }
    }
    let rank = if constraints[0].is_empty() {
        0
    } else {
        rank_q(&constraints)
    };
    Ok((nvars - rank) as u64)
}

/// Outcome of sampling a random element realizing a value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSample {
    pub value: ValueVector,
    pub attempts: usize,
    pub found: bool,
}

/// Draws random combinations from a basis of `{f : v(f) >= a}` and checks
/// that one of them has value exactly `a`.
pub fn sample_value_witness(alg: &LocalAlgebra, a: &ValueVector, seed: u64) -> WitnessSample {
    let s = alg.branches();
    let n = alg.order;
    let inside: Vec<usize> = (0..s)
        .flat_map(|j| (j * n..j * n + a.get(j).clamp(0, n as i64) as usize).collect::<Vec<_>>())
        .collect();
    let outside: Vec<usize> = (0..s * n).filter(|c| !inside.contains(c)).collect();
    let order: Vec<usize> = inside.iter().chain(&outside).copied().collect();
    let basis = kernel_rows(&alg.rows, &order, inside.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=3 {
        let mut f = vec![q(0); s * n];
        for b in &basis {
            let c = q(rng.gen_range(-1000..=1000));
            for (x, y) in f.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        let ok = (0..s).all(|j| {
            let branch = &f[j * n..(j + 1) * n];
            branch.iter().position(|x| !x.is_zero()) == Some(a.get(j) as usize)
        });
        if ok {
            return WitnessSample {
                value: a.clone(),
                attempts: attempt,
                found: true,
            };
        }
    }
    WitnessSample {
        value: a.clone(),
        attempts: 3,
        found: false,
    }
}

/// Rows spanning the elements of the row space that vanish on `order[..k]`.
fn kernel_rows(rows: &[Vec<Q>], order: &[usize], k: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut top = 0;
    for (pos, &col) in order.iter().enumerate().take(k) {
        let _ = pos;
        let Some(p) = (top..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(top, p);
        let inv = m[top][col].recip();
        let pivot: Vec<Q> = m[top].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(top + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        m[top] = pivot;
        top += 1;
    }
    m.split_off(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalars(v: &[i64]) -> Vec<ValueVector> {
        v.iter().map(|&a| ValueVector::scalar(a)).collect()
    }

    #[test]
    fn two_branch_ranks_match_profiles() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let len = rng.gen_range(1..6);
            let rows: Vec<Vec<Q>> = (0..rng.gen_range(1..7))
                .map(|_| {
                    (0..2 * len)
                        .map(|_| {
                            q(if rng.gen_bool(0.5) {
                                0
                            } else {
                                rng.gen_range(-2..3)
                            })
                        })
                        .collect()
                })
                .collect();
            assert_eq!(two_branch_ranks(&rows, len), {
                let mut r = prefix_ranks(&rows, len, 2);
                r.reverse();
                r
            });
        }
    }

    #[test]
    fn monomial_curve_analytic_semigroup() {
        let c = CurveSpec::monomial(&[3, 7, 10, 11]).unwrap();
        let s = local_value_semigroup(&c, &[q(0)]).unwrap();
        assert_eq!(s.small_elements(), scalars(&[0, 3, 6, 7, 9]).as_slice());
        assert_eq!(s.values(), c.numerical_semigroup().unwrap().values());
    }

    #[test]
    fn nonmonomial_semigroup() {
        let c =
            CurveSpec::parse_parametrized(&["t^4", "t^5+t^7", "t^10", "t^11"], vec![vec![q(0)]])
                .unwrap();
        let s = local_value_semigroup(&c, &[q(0)]).unwrap();
        assert_eq!(s.delta().unwrap(), 5);
    }

    #[test]
    fn node_and_errors() {
        // t^2 - 1, t^3 - t: a node over t = ±1
        let c =
            CurveSpec::parse_parametrized(&["t^2-1", "t^3-t"], vec![vec![q(-1), q(1)]]).unwrap();
        let s = local_value_semigroup(&c, &[q(-1), q(1)]).unwrap();
        assert_eq!(s.conductor(), &ValueVector::from([1, 1]));
        assert_eq!(s.delta().unwrap(), 1);

        let undeclared = CurveSpec::parse_parametrized(&["t^2", "t^3"], vec![]);
        assert!(matches!(undeclared, Err(Error::UndeclaredSingularity(_))));
        let split =
            CurveSpec::parse_parametrized(&["t^2-1", "t^3-t"], vec![vec![q(-1)], vec![q(1)]]);
        assert!(matches!(split, Err(Error::UndeclaredSingularity(_))));
        let undeclared = CurveSpec::parse_parametrized(&["t^2-1", "t^3-t"], vec![vec![q(-1)]]);
        assert!(matches!(undeclared, Err(Error::UndeclaredSingularity(_))));
        let mismatch = CurveSpec::parse_parametrized(&["t^2", "t^3"], vec![vec![q(0), q(1)]]);
        assert!(matches!(mismatch, Err(Error::FiberMismatch(_))));
        let double = CurveSpec::parse_parametrized(&["t^2", "t^4"], vec![vec![q(0)]]);
        assert!(matches!(double, Err(Error::NotBirational(_))));
        let smooth = CurveSpec::parse_parametrized(&["t", "t^2"], vec![vec![q(0)]]).unwrap();
        assert_eq!(
            local_value_semigroup(&smooth, &[q(0)]),
            Err(Error::NotSingular)
        );
    }

    #[test]
    fn sheaf_degrees_and_sections() {
        let c = CurveSpec::monomial(&[4, 7, 10, 12, 13]).unwrap();
        let f = SheafModel::parse(c.clone(), &["t"]).unwrap();
        let (deg, h0) = sheaf_summary(&f).unwrap();
        assert_eq!(deg.total, 4);
        assert_eq!(deg.points[0].degree, 3);
        assert_eq!(deg.points[0].dimension_check, Some(3));
        assert_eq!(h0, 2);
        let o = SheafModel::structure(c);
        assert_eq!(sheaf_summary(&o).unwrap().0.total, 0);
        assert_eq!(h0_sheaf(&o).unwrap(), 1);
    }

    #[test]
    fn witnesses_found() {
        let c = CurveSpec::monomial(&[3, 7, 10, 11]).unwrap();
        let p = analyze_point(&c, &[q(0)]).unwrap();
        for a in [0, 3, 6, 7, 9, 10] {
            assert!(sample_value_witness(&p.algebra, &ValueVector::scalar(a), 7).found);
        }
        assert!(!sample_value_witness(&p.algebra, &ValueVector::scalar(4), 7).found);
    }
}
