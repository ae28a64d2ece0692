//! The checks behind each suite and the parallel runner.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{CheckRecord, Report, Suite, SuiteConfig, Verdict};
use crate::error::{Error, Result};
use crate::finite_group::Family;
use crate::hecke_affine::classify::{i_h_triple, is_supersingular, round_trip_grid, same_factors, unit_trivial_characters};
use crate::hecke_affine::functors::{build_finite_ses, build_ses, check_affine_adjunction, induct, ind_coind_twist_iso, torus_trivial};
use crate::hecke_affine::presentation::presentation_report;
use crate::hecke_affine::theta::{check_theta_compare, AffineLevi};
use crate::hecke_affine::{check_eta, AffineSetting};
use crate::hecke_core::frobenius::{check_bimodule_twisted, check_bimodule_untwisted, check_frobenius, FrobeniusData};
use crate::hecke_core::levi_embedding_respects_products;
use crate::hecke_modules::{characters, find_isomorphism, HeckeModule};
use crate::monomial::Monomial;
use crate::rep_finite::{diagram_grid, projectivity_defect, q3_witness, tensor_x, FiniteSetting, UniversalModule};
use crate::scalar::Scalar;
use crate::with_scalar;

/// One verdict produced by a check.
struct Item {
    name: String,
    params: Value,
    verdict: Verdict,
    measured: Value,
}

fn item(name: &str, params: Value, ok: bool, measured: impl Serialize) -> Item {
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Item { name: name.into(), params, verdict, measured: serde_json::to_value(measured).unwrap_or(Value::Null) }
}

fn skip(name: &str, params: Value, reason: &str) -> Item {
    Item { name: name.into(), params, verdict: Verdict::Skip, measured: json!({ "reason": reason }) }
}

type Job = Box<dyn FnOnce() -> Result<Vec<Item>> + Send>;

struct Check {
    suite: Suite,
    name: String,
    params: Value,
    job: Job,
}

struct Checks {
    suite: Suite,
    list: Vec<Check>,
}

impl Checks {
    fn add(&mut self, name: &str, params: Value, job: impl FnOnce() -> Result<Vec<Item>> + Send + 'static) {
        self.list.push(Check { suite: self.suite, name: name.into(), params, job: Box::new(job) });
    }

    fn one(&mut self, name: &str, params: Value, job: impl FnOnce() -> Result<Item> + Send + 'static) {
        self.add(name, params, move || Ok(vec![job()?]));
    }

    fn skip(&mut self, name: &str, reason: &str) {
        let reason = reason.to_string();
        let n = name.to_string();
        self.add(name, Value::Null, move || Ok(vec![skip(&n, Value::Null, &reason)]));
    }
}

fn set(j: &BTreeSet<usize>) -> Value {
    json!(j.iter().collect::<Vec<_>>())
}

fn run(check: Check) -> Vec<CheckRecord> {
    let start = Instant::now();
    let items = (check.job)().unwrap_or_else(|e| vec![item(&check.name, check.params.clone(), false, json!({ "error": e.to_string() }))]);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3 / items.len().max(1) as f64;
    items
        .into_iter()
        .map(|i| CheckRecord { suite: check.suite, name: i.name, params: i.params, verdict: i.verdict, measured: i.measured, wall_ms })
        .collect()
}

/// Runs every check of the configured suite; sampled checks are seeded by `config.seed`.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let g = config.group;
    if g.n < 2 || g.n > 3 {
        return Err(Error::Config(format!("rank {} outside the supported range 2..=3", g.n)));
    }
    let finite = if config.suite.expand().iter().any(|s| matches!(s, Suite::Coxeter | Suite::FiniteOracle | Suite::Frobenius | Suite::FiniteDiagrams)) {
        Some(Arc::new(FiniteSetting::new(g.family, g.n, g.q)?))
    } else {
        None
    };
    let affine = if g.n == 2 && config.suite.expand().iter().any(|s| matches!(s, Suite::AffinePresentation | Suite::AffineFunctors | Suite::Supersingular)) {
        Some(Arc::new(AffineSetting::new(g.family, g.n, g.q)?))
    } else {
        None
    };
    let mut checks = Vec::new();
    for suite in config.suite.expand() {
        let mut c = Checks { suite, list: Vec::new() };
        with_scalar!(config.coeff, S => build::<S>(&mut c, config, finite.clone(), affine.clone()))?;
        checks.extend(c.list);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records: Vec<CheckRecord> = pool.install(|| checks.into_par_iter().map(run).collect::<Vec<_>>()).into_iter().flatten().collect();
    Ok(Report::new(config.clone(), records))
}

fn build<S: Scalar>(c: &mut Checks, config: &SuiteConfig, finite: Option<Arc<FiniteSetting>>, affine: Option<Arc<AffineSetting>>) -> Result<()> {
    match c.suite {
        Suite::Coxeter => coxeter(c, finite.expect("built for finite suites")),
        Suite::FiniteOracle => finite_oracle::<S>(c, finite.expect("built for finite suites")),
        Suite::Frobenius => frobenius::<S>(c, finite.expect("built for finite suites")),
        Suite::FiniteDiagrams => finite_diagrams::<S>(c, finite.expect("built for finite suites")),
        Suite::AffinePresentation | Suite::AffineFunctors | Suite::Supersingular => match affine {
            None => {
                c.skip(&c.suite.to_string(), "affine suites cover rank 2");
                Ok(())
            }
            Some(a) => match c.suite {
                Suite::AffinePresentation => affine_presentation(c, a, config.seed),
                Suite::AffineFunctors => affine_functors::<S>(c, a, config.seed),
                _ => supersingular::<S>(c, a),
            },
        },
        Suite::Finite | Suite::All => unreachable!("expanded before building"),
    }
}

fn coxeter(c: &mut Checks, st: Arc<FiniteSetting>) -> Result<()> {
    let g = st.group().clone();
    let d = g.datum.clone();
    c.one("length_equals_inversions", json!({}), move || {
        let roots: Vec<Vec<i64>> = d.all_roots().into_iter().filter(|a| d.is_positive_root(a)).collect();
        let elems = d.elements();
        let bad = elems.iter().filter(|w| roots.iter().filter(|a| !d.is_positive_root(&w.act(a))).count() != w.length()).count();
        Ok(item("length_equals_inversions", json!({}), bad == 0, json!({ "elements": elems.len(), "mismatches": bad })))
    });
    let d = g.datum.clone();
    c.one("reduced_words", json!({}), move || {
        let bad = d
            .elements()
            .iter()
            .filter(|w| {
                let word = d.reduced_word(w);
                d.from_word(&word) != **w || word.len() != w.length()
            })
            .count();
        Ok(item("reduced_words", json!({}), bad == 0, json!({ "mismatches": bad })))
    });
    for j in st.all_levis() {
        let (d, gg) = (g.datum.clone(), g.clone());
        c.one("coset_factorization", json!({ "j": set(&j) }), move || {
            let reps = d.min_coset_reps(&j);
            let levi = d.levi(&j);
            let w_j = d.elements().iter().filter(|w| levi.contains(w)).count();
            let mut ok = reps.len() * w_j == d.elements().len();
            for w in d.elements() {
                let (m, r) = d.split_left(&j, &w);
                ok &= levi.contains(&m) && reps.contains(&r) && m.mul(&r) == w && m.length() + r.length() == w.length();
            }
            let lifted = gg.parabolic_coset_reps(&j).map(|v| v.len());
            ok &= lifted.as_ref().is_ok_and(|n| *n == reps.len());
            Ok(item("coset_factorization", json!({ "j": set(&j) }), ok, json!({ "cosets": reps.len(), "levi_order": w_j })))
        });
    }
    for k in g.simple_indices() {
        let gg = g.clone();
        c.one("bruhat_bsbsb", json!({ "s": k }), move || Ok(item("bruhat_bsbsb", json!({ "s": k }), gg.verify_bruhat_bsbsb(k), Value::Null)));
    }
    let gg = g.clone();
    c.one("bruhat_cell_sizes", json!({}), move || {
        let q = gg.field.q() as usize;
        let sum: usize = gg.weyl_elements().iter().map(|w| q.pow(w.length() as u32)).sum::<usize>() * gg.torus.len() * gg.unipotent.len();
        Ok(item("bruhat_cell_sizes", json!({}), sum == gg.order(), json!({ "order": gg.order(), "cell_sum": sum })))
    });
    Ok(())
}

fn finite_oracle<S: Scalar>(c: &mut Checks, st: Arc<FiniteSetting>) -> Result<()> {
    let data = st.data.clone();
    c.one("oracle_equivalence", json!({}), move || {
        let bad = data.oracle_mismatches::<S>()?;
        Ok(item("oracle_equivalence", json!({}), bad == 0, json!({ "basis": data.oracle.dim(), "mismatches": bad })))
    });
    for (k, q) in st.data.quad.clone() {
        c.one("quadratic_relation", json!({ "s": k }), move || {
            let sum: i64 = q.c.iter().map(|(_, x)| x).sum();
            let c_vals: Vec<(String, i64)> = q.c.iter().map(|(z, x)| (z.to_string(), *x)).collect();
            Ok(item("quadratic_relation", json!({ "s": k }), sum == q.q_s - 1, json!({ "q_s": q.q_s, "c": c_vals })))
        });
    }
    for j in st.all_levis().into_iter().filter(|j| *j != st.data.full_j()) {
        let data = st.data.clone();
        c.one("levi_embedding", json!({ "j": set(&j) }), move || {
            let ok = levi_embedding_respects_products(&data.algebra::<S>(), &data.levi_algebra::<S>(&j)?)?;
            Ok(item("levi_embedding", json!({ "j": set(&j) }), ok, Value::Null))
        });
    }
    Ok(())
}

fn frobenius<S: Scalar>(c: &mut Checks, st: Arc<FiniteSetting>) -> Result<()> {
    let full = st.data.full_j();
    for j in st.all_levis() {
        let data = st.data.clone();
        c.one("frobenius", json!({ "j": set(&j) }), move || {
            let alg = data.levi_algebra::<S>(&j)?;
            let r = check_frobenius(&alg, &FrobeniusData::new(&alg.system))?;
            Ok(item("frobenius", json!({ "j": set(&j) }), r.passed(), &r))
        });
    }
    let char_ne_p = S::characteristic() != st.p();
    for j in st.all_levis().into_iter().filter(|j| *j != full) {
        let (data, jt) = (st.data.clone(), j.clone());
        c.one("bimodule_twisted", json!({ "j": set(&j) }), move || {
            let r = check_bimodule_twisted(&data.algebra::<S>(), &data.levi_algebra::<S>(&jt)?)?;
            Ok(item("bimodule_twisted", json!({ "j": set(&jt) }), r.passed(), &r))
        });
        if char_ne_p {
            let data = st.data.clone();
            c.one("bimodule_untwisted", json!({ "j": set(&j) }), move || {
                let r = check_bimodule_untwisted(&data.algebra::<S>(), &data.levi_algebra::<S>(&j)?)?;
                Ok(item("bimodule_untwisted", json!({ "j": set(&j) }), r.passed(), &r))
            });
        }
    }
    Ok(())
}

fn finite_diagrams<S: Scalar>(c: &mut Checks, st: Arc<FiniteSetting>) -> Result<()> {
    let s = st.clone();
    c.add("diagram_cell", Value::Null, move || {
        Ok(diagram_grid::<S>(&s)?
            .into_iter()
            .map(|cell| item("diagram_cell", json!({ "j": set(&cell.j), "v": cell.v }), cell.passed(), &cell))
            .collect())
    });
    let char_p = S::characteristic() == st.p();
    if char_p {
        let s = st.clone();
        c.one("projectivity_defect", json!({}), move || {
            let r = projectivity_defect::<S>(&s)?;
            Ok(item("projectivity_defect", json!({}), r.strict, &r))
        });
    }
    let s = st.clone();
    c.one("q3_witness", json!({}), move || {
        let r = q3_witness::<S>(&s)?;
        Ok(item("q3_witness", json!({ "expect_surjective": !char_p }), r.surjective != char_p, &r))
    });
    let q_plus_one = S::from_i64(st.group().field.q() as i64 + 1);
    if !char_p && !q_plus_one.is_zero() {
        let s = st.clone();
        c.one("triv_tensor_x", json!({}), move || {
            let alg = s.data.algebra::<S>();
            let x = UniversalModule::<S>::new(s.group().clone());
            let r = tensor_x(&HeckeModule::triv(alg)?, &x)?;
            Ok(item("triv_tensor_x", json!({}), r.dim == 1, json!({ "dim": r.dim })))
        });
    } else {
        c.skip("triv_tensor_x", "needs characteristic different from p with q + 1 invertible");
    }
    Ok(())
}

const ASSOCIATIVITY_TRIPLES: usize = 10_000;

fn affine_presentation(c: &mut Checks, st: Arc<AffineSetting>, seed: u64) -> Result<()> {
    c.add("presentation", Value::Null, move || {
        let r = presentation_report(&st, ASSOCIATIVITY_TRIPLES, seed)?;
        let mut out = vec![match r.matrix_model {
            Some(m) => item("matrix_model", json!({}), m.passed(), m),
            None => skip("matrix_model", json!({}), "the matrix model covers rank 2"),
        }];
        out.push(item("length_oracle", json!({ "box": 2, "level": 4 }), r.length_oracle.passed(), r.length_oracle));
        out.push(item("associativity", json!({ "triples": ASSOCIATIVITY_TRIPLES, "seed": seed }), r.associativity.passed(), r.associativity));
        Ok(out)
    });
    Ok(())
}

/// Three translations of `T` that are neither central nor of a single sign pattern.
pub fn theta_samples(setting: &AffineSetting) -> Vec<Monomial> {
    let m = setting.field.units();
    let t = |v: &[i64]| Monomial::translation(v, m);
    match setting.family {
        Family::GL => vec![t(&[1, 0]), t(&[0, 1]), t(&[2, -1])],
        Family::SL => vec![t(&[1, -1]), t(&[-1, 1]), t(&[2, -2])],
    }
}

fn affine_functors<S: Scalar>(c: &mut Checks, st: Arc<AffineSetting>, seed: u64) -> Result<()> {
    let empty = BTreeSet::new();
    let s = st.clone();
    let e = empty.clone();
    c.add("ind_twisted_coind", Value::Null, move || {
        let al = AffineLevi::<S>::new(&s, &e)?;
        let mut out = Vec::new();
        for chi in characters(al.levi()) {
            let p = json!({ "j": [], "m": chi.to_json().generators });
            let ind = induct(&al, &chi)?;
            out.push(item("induced_rank", p.clone(), ind.rank == 2 * chi.rank, json!({ "rank": ind.rank })));
            out.push(item("ind_twisted_coind", p, ind_coind_twist_iso(&s, &e, &chi)?.is_some(), Value::Null));
        }
        Ok(out)
    });
    let s = st.clone();
    c.add("adjunction", Value::Null, move || {
        let al = AffineLevi::<S>::new(&s, &BTreeSet::new())?;
        let mut out = Vec::new();
        for m in characters(al.levi()) {
            for n in characters(al.big()) {
                let r = check_affine_adjunction(&al, &m, &n)?;
                out.push(item("adjunction", json!({ "m": m.to_json().generators, "n": n.to_json().generators }), r.passed(), r));
            }
        }
        Ok(out)
    });
    let s = st.clone();
    c.one("eta", json!({ "samples": 40, "seed": seed }), move || {
        let r = check_eta(&s.algebra::<S>()?, 40, seed);
        Ok(item("eta", json!({ "samples": 40, "seed": seed }), r.passed(), r))
    });
    if S::characteristic() == 0 {
        let s = st.clone();
        c.one("theta_compare", json!({}), move || {
            let al = AffineLevi::<S>::new(&s, &BTreeSet::new())?;
            let rows = check_theta_compare(&al, &theta_samples(&s))?;
            let ok = rows.iter().all(|r| r.with_delta_inverse);
            let literal = rows.iter().all(|r| r.with_delta);
            Ok(item("theta_compare", json!({ "samples": rows.len() }), ok, json!({ "rows": rows, "literal_identity_holds": literal })))
        });
        let s = st.clone();
        c.one("ses_finite_control", json!({}), move || {
            let r = build_finite_ses::<S>(s.family, s.field.q())?;
            Ok(item("ses_finite_control", json!({}), r.triv_sub && r.sign_quotient && r.split, r))
        });
    } else if S::characteristic() == st.p() {
        if st.family == Family::GL && st.p() != 2 {
            c.skip("ses", "for GL₂ in odd characteristic the quotient is Sign twisted by ω ↦ −1");
        } else {
            let s = st.clone();
            c.one("ses", json!({}), move || {
                let r = build_ses::<S>(&s)?;
                Ok(item("ses", json!({}), r.nonsplit(), r))
            });
        }
    }
    Ok(())
}

fn supersingular<S: Scalar>(c: &mut Checks, st: Arc<AffineSetting>) -> Result<()> {
    if S::characteristic() != st.p() {
        c.skip("supersingular", "supersingularity is tested in characteristic p");
        return Ok(());
    }
    let s = st.clone();
    c.add("character_classification", Value::Null, move || {
        let chars = unit_trivial_characters::<S>(&s)?;
        let mut out = Vec::new();
        let expected = if s.family == Family::SL { 4 } else { 2 };
        out.push(item("unit_trivial_characters", json!({}), chars.len() == expected, json!({ "count": chars.len() })));
        for (vals, m) in chars {
            let mixed = vals.windows(2).any(|w| w[0] != w[1]);
            let r = is_supersingular(&s, &m)?;
            let names: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            out.push(item("character_classification", json!({ "values": names }), r.supersingular == mixed, r));
        }
        Ok(out)
    });
    if st.family == Family::SL || st.p() == 2 {
        let s = st.clone();
        c.add("induced_trivial_factors", Value::Null, move || {
            let e = BTreeSet::new();
            let al = AffineLevi::<S>::new(&s, &e)?;
            let triv_t = torus_trivial::<S>(&s)?;
            let ind = induct(&al, &triv_t)?;
            let alg = s.algebra::<S>()?;
            let (triv, sign) = (HeckeModule::triv(alg.clone())?, HeckeModule::sign(alg)?);
            let factors = crate::hecke_affine::classify::composition_factors(&ind)?;
            let top = i_h_triple(&s, &e, &triv_t, &s.full_j())?;
            let bottom = i_h_triple(&s, &e, &triv_t, &e)?;
            Ok(vec![
                item("induced_trivial_factors", json!({}), same_factors(&factors, &[triv.clone(), sign.clone()]), json!({ "factors": factors.len() })),
                item("i_h_top", json!({ "q": "G" }), find_isomorphism(&top, &triv).is_some(), json!({ "rank": top.rank })),
                item("i_h_bottom", json!({ "q": "B" }), find_isomorphism(&bottom, &sign).is_some(), json!({ "rank": bottom.rank })),
            ])
        });
    } else {
        c.skip("induced_trivial_factors", "for GL₂ in odd characteristic the quotient is Sign twisted by ω ↦ −1");
    }
    let s = st.clone();
    c.add("round_trip", Value::Null, move || {
        Ok(round_trip_grid::<S>(&s)?
            .into_iter()
            .map(|r| item("round_trip", json!({ "p": r.p, "sigma": r.sigma, "q": r.q }), r.passed(), &r))
            .collect())
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_reports::Coeff;

    fn config(suite: &str, group: &str, coeff: &str) -> SuiteConfig {
        SuiteConfig::new(suite.parse().unwrap(), group.parse().unwrap(), coeff.parse().unwrap())
    }

    #[test]
    fn finite_oracle_gl2_f3() {
        let r = run_suite(&config("finite-oracle", "gl:2:3", "fp:3")).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.records.iter().any(|x| x.name == "oracle_equivalence" && x.verdict == Verdict::Pass));
    }

    #[test]
    fn frobenius_gl2_f2_has_three_checks() {
        let r = run_suite(&config("frobenius", "gl:2:2", "fp:2")).unwrap();
        assert_eq!(r.summary.total, 3);
        assert_eq!(r.summary.passed, 3);
    }

    #[test]
    fn coxeter_gl3() {
        let r = run_suite(&config("coxeter", "gl:3:2", "q")).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn reports_are_deterministic() {
        let mut cfg = config("affine-functors", "sl:2:3", "fp:3");
        cfg.jobs = 2;
        let a = run_suite(&cfg).unwrap();
        cfg.jobs = 1;
        let b = run_suite(&cfg).unwrap();
        let (a, b) = (a.without_timings(), b.without_timings());
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
        assert!(a.passed());
    }

    #[test]
    fn unsupported_rank_is_a_config_error() {
        let cfg = SuiteConfig::new(Suite::Coxeter, "gl:4:2".parse().unwrap(), Coeff::Q);
        assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
    }
}
