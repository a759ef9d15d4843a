//! Verification drivers behind the command line tool and the reports they
//! produce.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::numerical_semigroups_up_to_genus;
use crate::curve::{curve_invariants, point_invariants, sheaf_summary, CurveInvariants, CurveSpec};
use crate::error::{Error, Result};
use crate::koszul::{koszul_dimension, koszul_semigroup, quadrics, quadrics_hat};
use crate::linear_systems::{
    clifford_classify, clifford_upper, gonality_bounds, gonality_upper, has_degree_two_pencil,
    rational_unibranch_applies,
};
use crate::literal::{Document, Object, SemigroupLiteral};
use crate::noether::{find_lemma_witness, max_noether_level, verify_theorem1};
use crate::poly::RatFunc;
use crate::semigroup::{canonical_k, classify, GoodSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Inconclusive => 1,
        }
    }
}

/// Outcome of one verification or search run. `counterexample` is set
/// exactly when the status is [`Status::Fail`].
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub target: String,
    pub status: Status,
    pub summary: String,
    pub input: Value,
    pub witnesses: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        };
        let _ = writeln!(out, "{status} {}: {}", self.target, self.summary);
        if let Some(c) = &self.counterexample {
            let _ = writeln!(out, "counterexample: {c}");
        }
        let _ = writeln!(out, "time: {:.3}s", self.elapsed.as_secs_f64());
        out
    }
}

/// What a driver runs on.
#[derive(Clone, Debug)]
pub enum Input {
    Document(Document),
    /// All numerical semigroups up to this genus.
    Corpus(u64),
}

impl Input {
    /// Parses `genus<=N`.
    pub fn corpus_spec(spec: &str) -> Result<Self> {
        let n = spec
            .trim()
            .strip_prefix("genus<=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("expected genus<=N, got {spec:?}")))?;
        Ok(Input::Corpus(n))
    }

    fn echo(&self) -> Value {
        match self {
            Input::Document(d) => serde_json::to_value(d).expect("documents serialize"),
            Input::Corpus(n) => json!({ "corpus": format!("genus<={n}") }),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// `{"numerical_generators": ...}` when numerical, the value form otherwise.
pub fn literal_of(s: &GoodSemigroup) -> SemigroupLiteral {
    match s.minimal_generators() {
        Ok(g) if s.branches() == 1 => SemigroupLiteral::Numerical {
            numerical_generators: g,
        },
        _ => SemigroupLiteral::from_semigroup(s),
    }
}

enum Outcome {
    Pass(Option<Value>),
    Skip,
    Fail(Value),
}

struct Run {
    status: Status,
    summary: String,
    witnesses: Value,
    counterexample: Option<Value>,
}

fn finish(target: &str, input: &Input, start: Instant, run: Run) -> VerificationReport {
    VerificationReport {
        target: target.into(),
        status: run.status,
        summary: run.summary,
        input: input.echo(),
        witnesses: run.witnesses,
        counterexample: run.counterexample,
        elapsed: start.elapsed(),
    }
}

/// Runs `check` on every semigroup of the corpus in parallel. The reported
/// counterexample is the first failure in corpus order, which has least genus.
fn run_corpus<F>(max_genus: u64, keep_witnesses: bool, check: F) -> Result<Run>
where
    F: Fn(&GoodSemigroup) -> Result<Outcome> + Sync,
{
    let corpus = numerical_semigroups_up_to_genus(max_genus)?;
    let outcomes: Vec<Outcome> = corpus
        .par_iter()
        .map(|s| check(s).unwrap_or_else(|e| Outcome::Fail(json!({ "error": e.to_string() }))))
        .collect();
    let (mut passed, mut skipped) = (0, 0);
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (s, o) in corpus.iter().zip(outcomes) {
        match o {
            Outcome::Pass(w) => {
                passed += 1;
                if let (true, Some(w)) = (keep_witnesses, w) {
                    witnesses.push(json!({ "semigroup": literal_of(s), "witness": w }));
                }
            }
            Outcome::Skip => skipped += 1,
            Outcome::Fail(detail) => {
                failures.push(json!({ "semigroup": literal_of(s), "detail": detail }))
            }
        }
    }
    let summary = format!(
        "{} semigroups: {passed} passed, {skipped} not applicable, {} failed",
        corpus.len(),
        failures.len()
    );
    Ok(Run {
        status: if failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        },
        summary,
        witnesses: json!({
            "checked": corpus.len(),
            "passed": passed,
            "skipped": skipped,
            "failed": failures.len(),
            "items": witnesses,
        }),
        counterexample: failures.into_iter().next(),
    })
}

fn single(outcome: Outcome, pass: String, skip: String) -> Run {
    match outcome {
        Outcome::Pass(w) => Run {
            status: Status::Pass,
            summary: pass,
            witnesses: w.unwrap_or(Value::Null),
            counterexample: None,
        },
        Outcome::Skip => Run {
            status: Status::Inconclusive,
            summary: skip,
            witnesses: Value::Null,
            counterexample: None,
        },
        Outcome::Fail(detail) => Run {
            status: Status::Fail,
            summary: "check failed".into(),
            witnesses: Value::Null,
            counterexample: Some(detail),
        },
    }
}

fn build(doc: &Document) -> Result<Object> {
    doc.build()
}

fn semigroup_of(doc: &Document) -> Result<GoodSemigroup> {
    build(doc)?.semigroup().ok_or_else(|| {
        Error::UnsupportedModel("the input is not a semigroup or a monomial curve".into())
    })
}

/// Hyperelliptic in the sense of the theorems: Gorenstein, `g >= 2` and a
/// pencil of degree two.
fn monomial_hyperelliptic(s: &GoodSemigroup) -> Result<bool> {
    let g = s.delta()?;
    if g < 2 || !s.is_symmetric() {
        return Ok(false);
    }
    let curve = CurveSpec::monomial(&s.minimal_generators()?)?;
    has_degree_two_pencil(&curve, g)
}

fn noether_check(s: &GoodSemigroup, level: usize) -> Result<Outcome> {
    if monomial_hyperelliptic(s)? {
        return Ok(Outcome::Skip);
    }
    let mut out = serde_json::Map::new();
    if !s.is_symmetric() {
        let t = verify_theorem1(s)?;
        if !t.passed {
            return Ok(Outcome::Fail(json!({ "theorem1": t })));
        }
        out.insert("certificate".into(), to_value(&t.certificate));
    }
    let mut levels = Vec::new();
    for n in 1..=level {
        let r = max_noether_level(s, n)?;
        if !r.surjective {
            return Ok(Outcome::Fail(json!({ "level": n, "missing": r.missing })));
        }
        if n == level {
            levels.push(r);
        }
    }
    out.insert("level".into(), to_value(&levels[0]));
    Ok(Outcome::Pass(Some(Value::Object(out))))
}

/// Max Noether surjectivity up to `level` and the sequence certificate for
/// non-Gorenstein points. Hyperelliptic inputs are outside the statement.
pub fn verify_noether(input: &Input, level: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    if level == 0 {
        return Err(Error::InvalidInput("level must be at least 1".into()));
    }
    let run = match input {
        Input::Corpus(n) => run_corpus(*n, false, |s| noether_check(s, level))?,
        Input::Document(d) => {
            let s = semigroup_of(d)?;
            if s.branches() != 1 {
                let t = verify_theorem1(&s)?;
                let o = if t.passed {
                    Outcome::Pass(Some(to_value(&t)))
                } else {
                    Outcome::Fail(to_value(&t))
                };
                single(o, "sequence certificate verified".into(), String::new())
            } else {
                single(
                    noether_check(&s, level)?,
                    format!("surjective at levels 1..={level}"),
                    "hyperelliptic: the statement does not apply".into(),
                )
            }
        }
    };
    Ok(finish("noether", input, start, run))
}

fn lemma_check(s: &GoodSemigroup) -> Result<Outcome> {
    if s.is_symmetric() {
        return Ok(Outcome::Skip);
    }
    match find_lemma_witness(s) {
        Ok(w) => Ok(Outcome::Pass(Some(to_value(&w)))),
        Err(Error::WitnessNotFound) => Ok(Outcome::Fail(json!("no witness"))),
        Err(e) => Err(e),
    }
}

/// A lemma witness for every non-Gorenstein point.
pub fn verify_lemma(input: &Input) -> Result<VerificationReport> {
    let start = Instant::now();
    let run = match input {
        Input::Corpus(n) => run_corpus(*n, true, lemma_check)?,
        Input::Document(d) => {
            let points = match build(d)? {
                Object::Semigroup(s) => vec![s],
                Object::Curve(c, _) => crate::curve::singular_points(&c, false)?,
            };
            let mut witnesses = Vec::new();
            let mut failure = None;
            for s in &points {
                match lemma_check(s)? {
                    Outcome::Pass(w) => witnesses.push(json!({
                        "semigroup": literal_of(s),
                        "witness": w,
                    })),
                    Outcome::Skip => {}
                    Outcome::Fail(_) => {
                        failure.get_or_insert_with(|| json!({ "semigroup": literal_of(s) }));
                    }
                }
            }
            match failure {
                Some(c) => Run {
                    status: Status::Fail,
                    summary: "a non-Gorenstein point has no witness".into(),
                    witnesses: Value::Array(witnesses),
                    counterexample: Some(c),
                },
                None if witnesses.is_empty() => Run {
                    status: Status::Inconclusive,
                    summary: "every point is Gorenstein".into(),
                    witnesses: Value::Array(witnesses),
                    counterexample: None,
                },
                None => Run {
                    status: Status::Pass,
                    summary: format!("witnesses at {} non-Gorenstein point(s)", witnesses.len()),
                    witnesses: Value::Array(witnesses),
                    counterexample: None,
                },
            }
        }
    };
    Ok(finish("lemma", input, start, run))
}

fn quadrics_check(s: &GoodSemigroup, r: usize) -> Result<Outcome> {
    if s.is_symmetric() {
        return Ok(Outcome::Skip);
    }
    let hat = quadrics_hat(s, r)?;
    let own = quadrics(s, r)?;
    let w = json!({ "blowup": hat, "curve": own });
    Ok(if hat.agrees() && own.agrees() {
        Outcome::Pass(Some(w))
    } else {
        Outcome::Fail(w)
    })
}

/// Formula against direct count for the degree-`r` ideals of the blowup and
/// of the curve.
pub fn verify_quadrics(input: &Input, r: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let run = match input {
        Input::Corpus(n) => run_corpus(*n, false, |s| quadrics_check(s, r))?,
        Input::Document(d) => single(
            quadrics_check(&semigroup_of(d)?, r)?,
            format!("formula and direct count agree at r = {r}"),
            "Gorenstein: the formulas need a non-Gorenstein point".into(),
        ),
    };
    Ok(finish("quadrics", input, start, run))
}

fn gonality_check(curve: &CurveSpec, extra: &[RatFunc]) -> Result<Outcome> {
    let inv = curve_invariants(curve)?;
    if inv.genus < 2 {
        return Ok(Outcome::Skip);
    }
    let gon = gonality_upper(curve, 256, extra)?;
    let b = gonality_bounds(inv.genus, 0, inv.eta, rational_unibranch_applies(&inv));
    let mut violated = Vec::new();
    if gon.exact && gon.bound < b.lower {
        violated.push("lower");
    }
    if gon.exact && gon.bound > b.upper_general {
        violated.push("upper_general");
    }
    if gon.exact && gon.bound as i64 > b.upper_refined {
        violated.push("upper_refined");
    }
    if b.upper_rational_unibranch.is_some_and(|u| gon.bound > u) {
        violated.push("upper_rational_unibranch");
    }
    let w = json!({ "genus": inv.genus, "eta": inv.eta, "gonality": gon, "bounds": b });
    Ok(if violated.is_empty() {
        Outcome::Pass(Some(w))
    } else {
        Outcome::Fail(json!({ "violated": violated, "data": w }))
    })
}

/// The computed pencil degree against the general bounds. Inexact upper
/// bounds are only tested against the bounds they could violate.
pub fn verify_gonality_bounds(input: &Input) -> Result<VerificationReport> {
    let start = Instant::now();
    let run = match input {
        Input::Corpus(n) => run_corpus(*n, false, |s| {
            gonality_check(&CurveSpec::monomial(&s.minimal_generators()?)?, &[])
        })?,
        Input::Document(d) => {
            let obj = build(d)?;
            let extra = pencil_generators(obj.sheaves());
            single(
                gonality_check(&obj.curve()?, &extra)?,
                "gonality bounds hold".into(),
                "genus below 2".into(),
            )
        }
    };
    Ok(finish("gonality-bounds", input, start, run))
}

fn pencil_generators(sheaves: &[crate::curve::SheafModel]) -> Vec<RatFunc> {
    sheaves
        .iter()
        .filter(|m| m.generators().len() == 2)
        .map(|m| m.generators()[1].clone())
        .collect()
}

fn equivalence_check(s: &GoodSemigroup) -> Result<Outcome> {
    let g = s.delta()?;
    // in genus 2 both sides of Sym^2 H⁰(W) -> H⁰(W^2) have dimension 3
    if g < 3 {
        return Ok(Outcome::Skip);
    }
    let curve = CurveSpec::monomial(&s.minimal_generators()?)?;
    let inv = curve_invariants(&curve)?;
    let k02 = koszul_semigroup(s, 0, 2)?.dim_kpq;
    let level2 = max_noether_level(s, 2)?.surjective;
    let w = json!({
        "genus": g,
        "k02": k02,
        "max_noether_level2": level2,
        "gon2": inv.gon2,
        "nonhyperelliptic": inv.nonhyperelliptic,
    });
    let agree = (k02 == 0) == level2 && level2 == inv.nonhyperelliptic;
    Ok(if agree {
        Outcome::Pass(Some(w))
    } else {
        Outcome::Fail(w)
    })
}

/// `K_{0,2} = 0`, surjectivity at level two and nonhyperellipticity agree.
pub fn verify_equivalences(input: &Input) -> Result<VerificationReport> {
    let start = Instant::now();
    let run = match input {
        Input::Corpus(n) => run_corpus(*n, false, equivalence_check)?,
        Input::Document(d) => single(
            equivalence_check(&semigroup_of(d)?)?,
            "K_{0,2} = 0, level-2 surjectivity and nonhyperellipticity agree".into(),
            "genus below 3".into(),
        ),
    };
    Ok(finish("equivalences", input, start, run))
}

/// Least pencil degree found, with its exactness flag.
pub fn search_gonality(doc: &Document, budget: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let obj = build(doc)?;
    let gon = gonality_upper(&obj.curve()?, budget, &pencil_generators(obj.sheaves()))?;
    let kind = if gon.exact { "exact" } else { "upper bound" };
    let run = Run {
        status: Status::Pass,
        summary: format!(
            "gonality {kind} {} via O<1, {}>",
            gon.bound, gon.witness.generator
        ),
        witnesses: to_value(&gon),
        counterexample: None,
    };
    Ok(finish(
        "gonality",
        &Input::Document(doc.clone()),
        start,
        run,
    ))
}

/// Clifford index where the propositions decide it, otherwise the best
/// upper bound and the candidate sheaves' numbers.
pub fn search_clifford(doc: &Document, budget: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let obj = build(doc)?;
    let curve = obj.curve()?;
    let sheaves = obj.sheaves();
    let mut candidates = Vec::new();
    for m in sheaves {
        let (deg, h0) = sheaf_summary(m)?;
        let gens: Vec<String> = m.generators().iter().map(|g| g.to_string()).collect();
        candidates.push(json!({ "generators": gens, "degree": deg, "h0": h0 }));
    }
    let run = match clifford_classify(&curve, sheaves) {
        Ok(c) => Run {
            status: Status::Pass,
            summary: format!("Clifford index {} ({:?})", c.value, c.reason),
            witnesses: json!({ "classification": c, "candidates": candidates }),
            counterexample: None,
        },
        Err(Error::Inconclusive) => {
            let upper = clifford_upper(&curve, budget, sheaves).ok();
            Run {
                status: Status::Inconclusive,
                summary: match &upper {
                    Some(u) => format!("no proposition applies; Clifford index <= {}", u.value),
                    None => "no proposition applies and no sheaf with h0, h1 >= 2 found".into(),
                },
                witnesses: json!({ "upper": upper, "candidates": candidates }),
                counterexample: None,
            }
        }
        Err(e) => return Err(e),
    };
    Ok(finish(
        "clifford",
        &Input::Document(doc.clone()),
        start,
        run,
    ))
}

pub fn search_koszul(doc: &Document, p: usize, q: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let curve = build(doc)?.curve()?;
    let k = koszul_dimension(&curve, p, q)?;
    let run = Run {
        status: Status::Pass,
        summary: format!("dim K_{{{p},{q}}} = {}", k.dim_kpq),
        witnesses: to_value(&k),
        counterexample: None,
    };
    Ok(finish("koszul", &Input::Document(doc.clone()), start, run))
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub semigroup: SemigroupLiteral,
    pub fiber: Vec<String>,
    pub branches: usize,
    pub conductor: Vec<i64>,
    pub delta: u64,
    pub eta: u64,
    pub mu_blowup: u64,
    pub gorenstein: bool,
    pub kunz: bool,
    pub almost_gorenstein: bool,
}

/// Full invariant record of a curve or a single semigroup.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub input: Value,
    pub points: Vec<PointSummary>,
    /// Global invariants, absent for multibranch semigroups given alone.
    pub curve: Option<CurveInvariants>,
    pub gonality_upper: Option<u64>,
    pub gonality_exact: Option<bool>,
    pub gonality_bounds: Option<crate::linear_systems::GonalityBounds>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn summarize_point(fiber: &[crate::linalg::Q], s: &GoodSemigroup) -> Result<PointSummary> {
    let p = point_invariants(fiber, s)?;
    let c = classify(s)?;
    canonical_k(s)?;
    Ok(PointSummary {
        semigroup: literal_of(s),
        fiber: p.fiber,
        branches: p.branches,
        conductor: p.conductor.coords().to_vec(),
        delta: p.delta,
        eta: p.eta,
        mu_blowup: p.mu_blowup,
        gorenstein: c.gorenstein,
        kunz: c.kunz,
        almost_gorenstein: c.almost_gorenstein,
    })
}

pub fn analyze(doc: &Document) -> Result<Analysis> {
    let start = Instant::now();
    let obj = build(doc)?;
    let curve = match &obj {
        Object::Curve(c, _) => Some(c.clone()),
        Object::Semigroup(s) if s.branches() == 1 => Some(obj.curve()?),
        Object::Semigroup(_) => None,
    };
    let mut analysis = Analysis {
        input: to_value(doc),
        points: Vec::new(),
        curve: None,
        gonality_upper: None,
        gonality_exact: None,
        gonality_bounds: None,
        elapsed: Duration::ZERO,
    };
    match curve {
        Some(c) => {
            let pts = crate::curve::singular_points(&c, false)?;
            for (f, s) in c.singular_fibers().iter().zip(&pts) {
                analysis.points.push(summarize_point(f, s)?);
            }
            let inv = curve_invariants(&c)?;
            if inv.genus >= 1 {
                let gon = gonality_upper(&c, 256, &pencil_generators(obj.sheaves()))?;
                analysis.gonality_upper = Some(gon.bound);
                analysis.gonality_exact = Some(gon.exact);
            }
            if inv.genus >= 2 {
                analysis.gonality_bounds = Some(gonality_bounds(
                    inv.genus,
                    0,
                    inv.eta,
                    rational_unibranch_applies(&inv),
                ));
            }
            analysis.curve = Some(inv);
        }
        None => {
            if let Object::Semigroup(s) = &obj {
                analysis.points.push(summarize_point(&[], s)?);
            }
        }
    }
    analysis.elapsed = start.elapsed();
    Ok(analysis)
}

impl Analysis {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(
                out,
                "point {i} (t = {}): branches {}, conductor {:?}, delta {}, eta {}, mu {}{}{}",
                if p.fiber.is_empty() {
                    "-".into()
                } else {
                    p.fiber.join(", ")
                },
                p.branches,
                p.conductor,
                p.delta,
                p.eta,
                p.mu_blowup,
                if p.gorenstein { ", Gorenstein" } else { "" },
                if p.kunz { ", Kunz" } else { "" },
            );
        }
        if let Some(c) = &self.curve {
            let _ = writeln!(
                out,
                "genus {}, eta {}, mu {}, nonhyperelliptic {}, nearly normal {}",
                c.genus,
                c.eta,
                c.mu.map_or("-".into(), |m| m.to_string()),
                c.nonhyperelliptic,
                c.nearly_normal
            );
        }
        if let Some(g) = self.gonality_upper {
            let exact = if self.gonality_exact == Some(true) {
                "exact"
            } else {
                "upper bound"
            };
            let _ = writeln!(out, "gonality {g} ({exact})");
        }
        let _ = writeln!(out, "time: {:.3}s", self.elapsed.as_secs_f64());
        out
    }
}

/// One line per semigroup, each a canonical value-form literal.
pub fn corpus_documents(max_genus: u64) -> Result<Vec<String>> {
    Ok(numerical_semigroups_up_to_genus(max_genus)?
        .iter()
        .map(|s| Document::Semigroup(SemigroupLiteral::from_semigroup(s)).to_canonical())
        .collect())
}
