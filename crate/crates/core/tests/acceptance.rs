//! Acceptance run: one line per criterion. Runs without the test harness so
//! the lines are always printed.
//!
//! Criteria 7 and 9 are expected to be red: the stated numbers disagree with
//! exact computation on the stated inputs. For those two the run checks that
//! the disagreement is exactly the known one, so any change in behaviour
//! still fails the run.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{ideal_dimension, Num, Two};
use noether_forge::corpus::numerical_semigroups_up_to_genus;
use noether_forge::curve::{
    analyze_point, attained_values, curve_invariants, local_algebra, local_value_semigroup,
    sample_value_witness, sheaf_summary, CurveSpec,
};
use noether_forge::koszul::{
    blowup_basis, dim_i2_hat_closed, dim_ir, dim_ir_hat, family_cp, koszul_dimension,
    koszul_semigroup, quadrics, quadrics_hat, star_basis, star_semigroup,
};
use noether_forge::linalg::q;
use noether_forge::linear_systems::{
    clifford_classify, gonality_upper, value_chain, MonomialSheaf,
};
use noether_forge::literal::{Document, Object};
use noether_forge::noether::{find_lemma_witness, max_noether_level, verify_theorem1};
use noether_forge::semigroup::{
    blowup_semigroup, canonical_k, distance, validate, GoodSemigroup, ValueSet,
};
use noether_forge::ValueVector;

struct Outcome {
    pass: bool,
    detail: String,
    /// For expected-red criteria: the failure is exactly the recorded one.
    known_red: bool,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
        known_red: false,
    }
}

fn bad(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
        known_red: false,
    }
}

fn fixture(name: &str) -> Object {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    Document::parse(&text).unwrap().build().unwrap()
}

fn fixture_curve(name: &str) -> CurveSpec {
    fixture(name).curve().unwrap()
}

fn corpus() -> Vec<GoodSemigroup> {
    numerical_semigroups_up_to_genus(8).unwrap()
}

fn scalars(v: &[ValueVector]) -> Vec<i64> {
    v.iter().map(|a| a.get(0)).collect()
}

fn two(s: &GoodSemigroup) -> Two {
    Two {
        small: s
            .small_elements()
            .iter()
            .map(|a| (a.get(0), a.get(1)))
            .collect(),
        conductor: (s.conductor().get(0), s.conductor().get(1)),
    }
}

fn oracle(s: &GoodSemigroup) -> Num {
    Num::from_gaps(
        &s.gaps()
            .unwrap()
            .iter()
            .map(|&g| g as i64)
            .collect::<Vec<_>>(),
    )
}

fn c1_canonical_example() -> Outcome {
    let s = GoodSemigroup::from_numerical_generators(&[3, 7, 10, 11]).unwrap();
    let curve = fixture_curve("ex_noether_g5");
    let g = curve_invariants(&curve).unwrap().genus;
    let kint = scalars(&canonical_k(&s).unwrap().interior());
    let level = max_noether_level(&s, 2).unwrap();
    let products: BTreeSet<i64> = level.products.iter().map(|p| p.exponent).collect();
    let covered = (8..=14).all(|e| products.contains(&e));
    let sound = level
        .products
        .iter()
        .all(|p| p.factors.len() == 2 && p.factors.iter().sum::<i64>() == p.exponent);
    let detail = format!(
        "g={g}, K°={kint:?}, deg W²={}, h⁰(W²)={}, surjective={}, products t^8..t^14 covered={covered}",
        level.degree, level.h0, level.surjective
    );
    let want = g == 5
        && g as i64 == Num::from_generators(&[3, 7, 10, 11]).genus()
        && kint == vec![0, 3, 4, 6, 7]
        && level.degree == 16
        && level.h0 == 12
        && level.surjective
        && covered
        && sound;
    if want {
        ok(detail)
    } else {
        bad(detail)
    }
}

fn two_branch_fixture_semigroups() -> Vec<GoodSemigroup> {
    ["ex_cliff_g5", "multibranch_g5"]
        .iter()
        .map(|f| local_value_semigroup(&fixture_curve(f), &[q(0), q(1)]).unwrap())
        .collect()
}

fn c2_lemma() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in corpus() {
        let n = oracle(&s);
        if n.symmetric() {
            continue;
        }
        checked += 1;
        let kint = n.k_interior();
        let ngor: Vec<i64> = kint.iter().copied().filter(|&a| !n.contains(a)).collect();
        match find_lemma_witness(&s) {
            Ok(w) => {
                let d = w.d.get(0);
                let good = d == ngor[0]
                    && w.ell == 0
                    && kint.contains(&(n.conductor - d - 1))
                    && w.complement.get(0) == n.conductor - d - 1;
                if !good {
                    failures.push(format!("{:?}", n.gaps()));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", n.gaps())),
        }
    }
    let mut multi = 0;
    for s in two_branch_fixture_semigroups() {
        let t = two(&s);
        let bound = 4 * (t.conductor.0 + t.conductor.1) + 4;
        match find_lemma_witness(&s) {
            Ok(w) => {
                let beta = s.conductor();
                let d = (w.d.get(0), w.d.get(1));
                let c = &(beta - &w.d) - &ValueVector::unit(2, w.ell);
                let inside = |a: (i64, i64)| {
                    a.0 >= 0
                        && a.1 >= 0
                        && a.0 < beta.get(0)
                        && a.1 < beta.get(1)
                        && t.k_contains(a, bound)
                };
                if inside(d) && !t.contains(d) && inside((c.get(0), c.get(1))) {
                    multi += 1;
                } else {
                    failures.push(format!("two-branch {:?}", s.conductor()));
                }
            }
            Err(e) => failures.push(format!("two-branch {:?}: {e}", s.conductor())),
        }
    }
    let detail = format!(
        "{checked} non-Gorenstein numerical semigroups and {multi} two-branch value sets have witnesses, {} failures",
        failures.len()
    );
    if failures.is_empty() && checked > 0 && multi == 2 {
        ok(detail)
    } else {
        bad(format!(
            "{detail}: {:?}",
            &failures[..failures.len().min(5)]
        ))
    }
}

fn c3_sequence() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in corpus() {
        let n = oracle(&s);
        if n.symmetric() {
            continue;
        }
        checked += 1;
        let kint = n.k_interior();
        let sums: BTreeSet<i64> = kint
            .iter()
            .flat_map(|a| kint.iter().map(move |b| a + b))
            .collect();
        match verify_theorem1(&s) {
            Ok(t) => {
                let seq = scalars(&t.certificate.sequence);
                let alpha = t.certificate.alpha.get(0);
                let interval: Vec<i64> = (n.conductor..2 * n.conductor - alpha).collect();
                let good = t.passed
                    && seq == interval
                    && seq.iter().all(|a| sums.contains(a))
                    && t.brute_force_members == t.certificate.sequence
                    && alpha == (1..).find(|&a| n.contains(a)).unwrap();
                if !good {
                    failures.push(format!("{:?}", n.gaps()));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", n.gaps())),
        }
    }
    let detail = format!("{checked} semigroups, {} failures", failures.len());
    if failures.is_empty() && checked > 0 {
        ok(detail)
    } else {
        bad(format!(
            "{detail}: {:?}",
            &failures[..failures.len().min(5)]
        ))
    }
}

fn c4_ideal_formulas() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in corpus() {
        let n = oracle(&s);
        if n.symmetric() {
            continue;
        }
        let beta = n.conductor;
        let hat: Vec<i64> = n
            .blowup(4 * beta)
            .into_iter()
            .filter(|&a| a <= beta - 2)
            .collect();
        let own: Vec<i64> = (0..2 * beta).filter(|&a| n.contains(a)).collect();
        if blowup_basis(&s).unwrap() != hat || star_basis(&s).unwrap() != own {
            failures.push(format!("basis {:?}", n.gaps()));
        }
        for r in 2..=4 {
            let h = quadrics_hat(&s, r).unwrap();
            if h.formula_value != ideal_dimension(&hat, r) || !h.agrees() {
                failures.push(format!("blowup {:?} r={r}", n.gaps()));
            }
            let c = quadrics(&s, r).unwrap();
            if c.formula_value != ideal_dimension(&own, r) || !c.agrees() {
                failures.push(format!("curve {:?} r={r}", n.gaps()));
            }
        }
        checked += 1;
    }
    // the worked example: g = 5, η = μ = 1
    let ex = ideal_dimension(&[0, 3, 4, 6, 7], 2);
    let formula = dim_ir_hat(5, 1, 1, 2);
    let closed = dim_i2_hat_closed(5, 1, 1);
    // ⟨3,5,7⟩: ρ - σ = |β| - δ = 2, and its inverse blowup has genus 7
    let s357 = GoodSemigroup::from_numerical_generators(&[3, 5, 7]).unwrap();
    let star_ok = dim_ir(3, 2, 2) == ideal_dimension(&star_basis(&s357).unwrap(), 2)
        && star_semigroup(&s357).unwrap().genus == 7;
    let detail = format!(
        "Ĉ(<3,7,10,11>) r=2: formula {formula}, closed {closed}, direct {ex}; blowup and curve formulas agree with direct counts for r=2..4 on {checked} semigroups, {} failures",
        failures.len()
    );
    if failures.is_empty() && ex == 3 && formula == 3 && closed == 3 && checked >= 20 && star_ok {
        ok(detail)
    } else {
        bad(format!(
            "{detail}: {:?}",
            &failures[..failures.len().min(5)]
        ))
    }
}

fn c5_star_inversion() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in corpus() {
        let n = oracle(&s);
        if n.symmetric() {
            continue;
        }
        checked += 1;
        let beta = n.conductor;
        let delta = n.genus();
        let gaps = n.gaps();
        // S_* straight from its definition
        let star_member = |a: i64| a == 0 || a > 2 * beta || gaps.contains(&(2 * beta - a));
        let star_gaps: Vec<i64> = (1..=2 * beta).filter(|&a| !star_member(a)).collect();
        let ns = Num::from_gaps(&star_gaps);
        let closed = (0..=2 * beta + 1).filter(|&a| star_member(a)).all(|a| {
            (0..=2 * beta + 1)
                .filter(|&b| star_member(b))
                .all(|b| star_member(a + b))
        });
        let limit = 4 * beta + 8;
        let hat = ns.blowup(limit);
        let blown: Vec<i64> = hat.iter().copied().filter(|&a| a <= beta).collect();
        let original: Vec<i64> = (0..=beta).filter(|&a| n.contains(a)).collect();
        let k_star: BTreeSet<i64> = (0..ns.conductor).filter(|&a| ns.k_contains(a)).collect();
        let eta = k_star.iter().filter(|&&a| !ns.contains(a)).count() as i64;
        let mu = (0..ns.conductor)
            .filter(|a| hat.contains(a) && !k_star.contains(a))
            .count() as i64;
        let g = ns.genus();
        let lib_ok = star_semigroup(&s).is_ok_and(|st| {
            let lib_gaps: Vec<i64> = st
                .semigroup
                .gaps()
                .unwrap()
                .iter()
                .map(|&x| x as i64)
                .collect();
            st.matches()
                && lib_gaps == star_gaps
                && blowup_semigroup(&st.semigroup).unwrap().values() == s.values()
        });
        let formulas = g == delta + 2 * (beta - delta) && eta == 2 * (beta - delta) - 1 && mu == 1;
        if !(closed && blown == original && formulas && lib_ok) {
            failures.push(format!("{:?}", n.gaps()));
        }
    }
    let detail = format!("{checked} semigroups, {} failures", failures.len());
    if failures.is_empty() && checked > 0 {
        ok(detail)
    } else {
        bad(format!(
            "{detail}: {:?}",
            &failures[..failures.len().min(5)]
        ))
    }
}

/// Least degree of `O⟨1, t^r⟩` over `r`, from the semigroup alone.
fn monomial_gonality(n: &Num) -> i64 {
    let g = n.genus();
    (-n.conductor..=g + 1)
        .filter(|&r| r != 0)
        .map(|r| {
            let lo = r.min(0);
            let hi = n.conductor + r.abs();
            let e = |a: i64| n.contains(a) || n.contains(a - r);
            let deg_p = (lo..=hi).filter(|&a| e(a) && !n.contains(a)).count() as i64;
            deg_p + r.max(0)
        })
        .min()
        .unwrap()
}

fn c6_gonality() -> Outcome {
    let curve = fixture_curve("ex_gon_g6");
    let gon = gonality_upper(&curve, 256, &[]).unwrap();
    let s = GoodSemigroup::from_numerical_generators(&[4, 7, 10, 12, 13]).unwrap();
    let k = canonical_k(&s).unwrap();
    let pencil = MonomialSheaf::pencil(&s, 1).unwrap();
    let numbers = pencil.numbers(&s, &k).unwrap();
    let chain: Vec<String> = value_chain(&pencil.values, s.conductor())
        .iter()
        .map(|a| a.get(0).to_string())
        .collect();
    let chain = chain.join("<");
    let n6 = Num::from_generators(&[4, 7, 10, 12, 13]);
    let part_a = gon.exact
        && gon.bound == 4
        && monomial_gonality(&n6) == 4
        && numbers.degree_at_point == 3
        && numbers.degree == 4
        && numbers.h0 == 2
        && chain == "0<1<4<5<7<8<9<10";

    let nm = fixture_curve("ex_gon_g5_nonmonomial");
    let ng = gonality_upper(&nm, 256, &[]).unwrap();
    let part_b = ng.bound == 4 && curve_invariants(&nm).unwrap().genus == 5;

    let mut violations = 0;
    let mut checked = 0;
    for s in corpus() {
        let n = oracle(&s);
        let g = n.genus();
        if g < 2 {
            continue;
        }
        checked += 1;
        let curve = CurveSpec::monomial(&s.minimal_generators().unwrap()).unwrap();
        let lib = gonality_upper(&curve, 1 << 12, &[]).unwrap();
        let brute = monomial_gonality(&n);
        if lib.bound as i64 != brute || brute > (g + 3) / 2 {
            violations += 1;
        }
    }
    let detail = format!(
        "genus 6: gonality {} (exact {}), O<1,t> deg_P {} chain {chain}; non-monomial genus 5: gonality {} (upper bound, exact {}); bound ⌊(g+3)/2⌋ on {checked} curves, {violations} violations",
        gon.bound, gon.exact, numbers.degree_at_point, ng.bound, ng.exact
    );
    if part_a && part_b && violations == 0 {
        ok(detail)
    } else {
        bad(detail)
    }
}

/// Red by design: the supplied sheaf has degree 6, not 5.
fn c7_clifford() -> Outcome {
    let obj = fixture("ex_cliff_g5");
    let curve = obj.curve().unwrap();
    let genus = curve_invariants(&curve).unwrap().genus;
    let (deg, h0) = sheaf_summary(&obj.sheaves()[0]).unwrap();
    let mut family = Vec::new();
    for p in 1..=3 {
        let c = family_cp(p).unwrap();
        let cl = clifford_classify(&c, &[]).unwrap();
        family.push((cl.gonality.bound, cl.gonality.exact, cl.value));
    }
    let family_ok = family
        .iter()
        .all(|&(gon, exact, cliff)| gon == 3 && exact && cliff == 1);
    let pass = genus == 5 && deg.total == 5 && h0 == 3 && family_ok;
    let detail = format!(
        "curve genus {genus}; supplied sheaf degree {} (stated 5), h⁰ {h0}; C_p (gonality, exact, Cliff) = {family:?}",
        deg.total
    );
    // the known disagreement: degree 1 at the singular point plus 5 at infinity
    let known = genus == 5 && deg.total == 6 && h0 == 3 && family_ok;
    let detail = if known {
        format!("{detail}; red: the degree differs from the stated value")
    } else {
        detail
    };
    Outcome {
        pass,
        detail,
        known_red: known,
    }
}

fn c8_koszul() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for s in corpus() {
        let n = oracle(&s);
        let g = n.genus();
        let hyperelliptic = n.contains(2);
        if g < 2 || hyperelliptic {
            continue;
        }
        checked += 1;
        let cokernel = n.level_two_cokernel();
        let k = koszul_semigroup(&s, 0, 2).unwrap().dim_kpq as i64;
        if k != 0 || cokernel != 0 {
            failures.push(format!("{:?}", n.gaps()));
        }
    }
    let hyper = fixture("hyperelliptic_g3").semigroup().unwrap();
    let hk = koszul_semigroup(&hyper, 0, 2).unwrap().dim_kpq as i64;
    let hn = Num::from_generators(&[2, 7]);
    let h_oracle = hn.level_two_cokernel();
    let mut family = Vec::new();
    for p in 1..=3u64 {
        let c = family_cp(p).unwrap();
        let dims: Vec<usize> = (0..=p as usize)
            .map(|j| koszul_dimension(&c, j, 2).unwrap().dim_kpq)
            .collect();
        family.push(dims);
    }
    let family_ok = family.iter().all(|d| d.iter().all(|&x| x == 0));
    let detail = format!(
        "K_(0,2)=0 on {checked} nonhyperelliptic curves ({} failures); <2,7>: K_(0,2)={hk} (oracle {h_oracle}); C_p K_(j,2) for j<=p: {family:?}",
        failures.len()
    );
    if failures.is_empty() && hk != 0 && hk == h_oracle && family_ok {
        ok(detail)
    } else {
        bad(detail)
    }
}

/// Red by design: the printed curve has δ = 2.
fn c9_multibranch() -> Outcome {
    let curve = fixture_curve("multibranch_g5");
    let s = local_value_semigroup(&curve, &[q(0), q(1)]).unwrap();
    let valid = validate(&s).passed();
    let delta = s.delta().unwrap();
    let gon = gonality_upper(&curve, 256, &[]).unwrap();
    let pass = valid && s.branches() == 2 && delta == 5 && gon.bound <= 5;
    let detail = format!(
        "validated {valid}, branches {}, total δ {delta} (stated 5), gonality upper bound {}",
        s.branches(),
        gon.bound
    );
    let known = valid && s.branches() == 2 && delta == 2 && gon.bound <= 5;
    let detail = if known {
        format!("{detail}; red: δ differs from the stated value")
    } else {
        detail
    };
    Outcome {
        pass,
        detail,
        known_red: known,
    }
}

fn c10_properties() -> Outcome {
    let mut failures = Vec::new();
    let normal = ValueSet::normalization(1);
    for s in corpus() {
        let n = oracle(&s);
        let k = canonical_k(&s).unwrap();
        let hat = blowup_semigroup(&s).unwrap();
        let d_ks = distance(k.values(), s.values()).unwrap();
        let d_hk = distance(hat.values(), k.values()).unwrap();
        let d_hs = distance(hat.values(), s.values()).unwrap();
        let d_ns = distance(&normal, s.values()).unwrap();
        let d_nh = distance(&normal, hat.values()).unwrap();
        if d_hs != d_hk + d_ks || d_ns != d_nh + d_hs {
            failures.push(format!("additivity {:?}", n.gaps()));
        }
        let top = n.conductor + 2;
        let k_minus_s = (0..top)
            .filter(|&a| n.k_contains(a) && !n.contains(a))
            .count() as u64;
        if d_ks != k_minus_s || d_ns != n.genus() as u64 {
            failures.push(format!("cardinality {:?}", n.gaps()));
        }
        let gamma = n.gamma();
        let dual_ok = (-4..top + 4).all(|a| {
            let in_dual = !k.contains(&ValueVector::scalar(gamma - a));
            in_dual == n.contains(a)
        });
        if !dual_ok {
            failures.push(format!("duality {:?}", n.gaps()));
        }
    }
    for s in two_branch_fixture_semigroups() {
        let t = two(&s);
        let bound = 4 * (t.conductor.0 + t.conductor.1) + 4;
        let k = canonical_k(&s).unwrap();
        let hat = blowup_semigroup(&s).unwrap();
        let normal = ValueSet::normalization(2);
        let d = |e: &ValueSet, f: &ValueSet| distance(e, f).unwrap();
        if d(&normal, s.values())
            != d(&normal, hat.values()) + d(hat.values(), k.values()) + d(k.values(), s.values())
        {
            failures.push(format!("two-branch additivity {:?}", s.conductor()));
        }
        let agree = (0..=t.conductor.0 + 2).all(|x| {
            (0..=t.conductor.1 + 2)
                .all(|y| k.contains(&ValueVector::from([x, y])) == t.k_contains((x, y), bound))
        });
        if !agree {
            failures.push(format!("two-branch K {:?}", s.conductor()));
        }
    }
    let mut samples = 0;
    let mut stable = 0;
    for (name, fiber) in [
        ("ex_cliff_g5", vec![q(0), q(1)]),
        ("multibranch_g5", vec![q(0), q(1)]),
        ("ex_gon_g5_nonmonomial", vec![q(0)]),
        ("ex_noether_g5", vec![q(0)]),
    ] {
        let curve = fixture_curve(name);
        let point = analyze_point(&curve, &fiber).unwrap();
        for (i, a) in point.semigroup.small_elements().iter().enumerate() {
            let w = sample_value_witness(&point.algebra, a, 17 + i as u64);
            samples += 1;
            if !w.found || w.attempts > 3 {
                failures.push(format!("witness {name} {a}"));
            }
        }
        let order = 2 * point.stable_order;
        let alg = local_algebra(&curve, &fiber, order).unwrap();
        let lo = vec![0; fiber.len()];
        let attained = attained_values(&alg.rows, &lo, order);
        let c = point.semigroup.conductor();
        let agree = point
            .semigroup
            .small_elements()
            .iter()
            .all(|a| attained.contains(a))
            && attained.iter().all(|a| {
                let clamp =
                    ValueVector::new((0..a.branches()).map(|j| a.get(j).min(c.get(j))).collect());
                point.semigroup.contains(&clamp)
            });
        if agree {
            stable += 1;
        } else {
            failures.push(format!("stabilization {name}"));
        }
    }
    let detail = format!(
        "additivity, cardinality and duality over the corpus and two-branch fixtures; {samples} value witnesses sampled; {stable} points re-checked at twice the stable order; {} failures",
        failures.len()
    );
    if failures.is_empty() {
        ok(detail)
    } else {
        bad(format!(
            "{detail}: {:?}",
            &failures[..failures.len().min(5)]
        ))
    }
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, u64, bool, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "canonical example", 1, false, c1_canonical_example),
        (2, "lemma witnesses", 30, false, c2_lemma),
        (3, "sequence certificate", 60, false, c3_sequence),
        (4, "ideal dimension formulas", 60, false, c4_ideal_formulas),
        (5, "inverse blowup", 30, false, c5_star_inversion),
        (6, "gonality", 120, false, c6_gonality),
        (7, "Clifford index", 60, true, c7_clifford),
        (8, "Koszul cohomology", 300, false, c8_koszul),
        (9, "multibranch engine", 60, true, c9_multibranch),
        (10, "property suites", 120, false, c10_properties),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, red, f) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = out.pass && in_time;
        println!(
            "criterion {id:>2} {} {name}: {} [{:.2}s, limit {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
        );
        let expected = if red {
            !out.pass && out.known_red && in_time
        } else {
            pass
        };
        if !expected {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every criterion behaves as recorded (7 and 9 red)");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected result for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
