use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use heckelab::cli_reports::{report_from_json, to_json, CheckRecord, Coeff, Report, Suite, SuiteConfig, Verdict};
use heckelab::finite_group::{Family, FiniteGroup};
use heckelab::hecke_affine::{eta, random_index, AffineSetting};
use heckelab::hecke_core::frobenius::FrobeniusData;
use heckelab::hecke_core::{FiniteHeckeData, HeckeAlgebra, HeckeElement};
use heckelab::monomial::Monomial;
use heckelab::{Scalar, F3, F7, Q};

fn gl2_f3() -> &'static FiniteHeckeData {
    static DATA: OnceLock<FiniteHeckeData> = OnceLock::new();
    DATA.get_or_init(|| FiniteHeckeData::build(Arc::new(FiniteGroup::build(Family::GL, 2, 3).unwrap())).unwrap())
}

fn sl2_affine() -> &'static AffineSetting {
    static SETTING: OnceLock<AffineSetting> = OnceLock::new();
    SETTING.get_or_init(|| AffineSetting::new(Family::SL, 2, 3).unwrap())
}

fn gl2_affine() -> &'static AffineSetting {
    static SETTING: OnceLock<AffineSetting> = OnceLock::new();
    SETTING.get_or_init(|| AffineSetting::new(Family::GL, 2, 3).unwrap())
}

fn monomial(n: usize, m: u8) -> impl Strategy<Value = Monomial> {
    (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec(-3i64..=3, n), prop::collection::vec(0i64..m as i64, n))
        .prop_map(move |(perm, val, ulog)| Monomial::new(&perm, &val, &ulog, m))
}

fn monomial_triples() -> impl Strategy<Value = (Monomial, Monomial, Monomial)> {
    (2usize..=3, 1u8..=4).prop_flat_map(|(n, m)| (monomial(n, m), monomial(n, m), monomial(n, m)))
}

fn finite_element<S: Scalar>(alg: &HeckeAlgebra<S>, coeffs: &[i64]) -> HeckeElement<S> {
    let basis = alg.finite_basis().unwrap();
    let v: Vec<S> = coeffs.iter().map(|&c| S::from_i64(c)).collect();
    alg.from_coordinates(&v, &basis)
}

fn affine_element<S: Scalar>(alg: &HeckeAlgebra<S>, seed: u64, terms: usize) -> HeckeElement<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = HeckeElement::zero();
    for k in 0..terms {
        x.add_term(random_index(&alg.system, &mut rng, 5), S::from_i64(k as i64 + 1));
    }
    x
}

fn finite_laws<S: Scalar>(a: &[i64], b: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let alg = gl2_f3().algebra::<S>();
    let (x, y, z) = (finite_element(&alg, a), finite_element(&alg, b), finite_element(&alg, c));
    prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
    prop_assert_eq!(alg.mul(&alg.one(), &x), x.clone());
    let fd = FrobeniusData::new(&alg.system);
    prop_assert_eq!(fd.delta(&alg.mul(&x, &y)), fd.delta(&alg.mul(&fd.iota(&y), &x)));
    prop_assert_eq!(fd.iota(&fd.iota(&x)), x);
    Ok(())
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomials_form_a_group((x, y, z) in monomial_triples()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert_eq!(x.inverse().inverse(), x);
    }

    #[test]
    fn finite_algebra_is_associative_with_twisted_trace(a in coeffs(), b in coeffs(), c in coeffs()) {
        finite_laws::<F3>(&a, &b, &c)?;
        finite_laws::<Q>(&a, &b, &c)?;
        finite_laws::<F7>(&a, &b, &c)?;
    }

    #[test]
    fn eta_is_an_involutive_automorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
        for st in [sl2_affine(), gl2_affine()] {
            let alg = st.algebra::<F3>().unwrap();
            let (x, y) = (affine_element(&alg, s1, 3), affine_element(&alg, s2, 2));
            prop_assert_eq!(eta(&alg, &eta(&alg, &x)), x.clone());
            prop_assert_eq!(eta(&alg, &alg.mul(&x, &y)), alg.mul(&eta(&alg, &x), &eta(&alg, &y)));
        }
    }

    #[test]
    fn lengths_add_means_basis_product(seed in any::<u64>()) {
        let alg = sl2_affine().algebra::<Q>().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_index(&alg.system, &mut rng, 6);
        let y = random_index(&alg.system, &mut rng, 6);
        let xy = x.mul(&y);
        if alg.length(&xy) == alg.length(&x) + alg.length(&y) {
            prop_assert_eq!(alg.mul(&HeckeElement::basis(x), &HeckeElement::basis(y)), HeckeElement::basis(xy));
        }
    }

    #[test]
    fn rationals_print_and_parse(num in -1000i64..1000, den in 1i64..1000) {
        let x = Q::from_i64(num) / Q::from_i64(den);
        prop_assert_eq!(Q::parse_scalar(&x.to_string()), Some(x.clone()));
        if num != 0 {
            prop_assert_eq!(x.clone() * x.inverse().unwrap(), Q::from_i64(1));
        }
    }

    #[test]
    fn report_summary_matches_records(verdicts in prop::collection::vec(0u8..3, 0..20), seed in any::<u64>()) {
        let mut cfg = SuiteConfig::new(Suite::Coxeter, "sl:2:3".parse().unwrap(), Coeff::Fp(3));
        cfg.seed = seed;
        let records: Vec<CheckRecord> = verdicts
            .iter()
            .enumerate()
            .map(|(i, v)| CheckRecord {
                suite: Suite::Coxeter,
                name: format!("c{i}"),
                params: serde_json::json!({ "i": i }),
                verdict: [Verdict::Pass, Verdict::Fail, Verdict::Skip][*v as usize],
                measured: serde_json::Value::Null,
                wall_ms: i as f64 * 0.25,
            })
            .collect();
        let r = Report::new(cfg, records);
        let s = r.summary;
        prop_assert_eq!(s.total, s.passed + s.failed + s.skipped);
        prop_assert_eq!(r.exit_code() == 0, verdicts.iter().all(|v| *v != 1));
        prop_assert_eq!(report_from_json(&to_json(&r).unwrap()).unwrap(), r);
    }
}
