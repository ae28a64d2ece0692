//! Soundness checks of the presentation of `W(1)` and of the multiplication of `𝓗`
//! against independent models: monomial matrices over `F_q[ϖ^{±1}]`, affine-root counting
//! and seeded associativity.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::random_index;
use crate::coxeter::{AffineRoot, CartanType, RootDatum};
use crate::gf::Gf;
use crate::hecke_core::WeylSystem;
use crate::monomial::Monomial;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCount {
    pub checked: usize,
    pub failures: usize,
}

impl CheckCount {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

/// Entry `(Teichmüller unit as a field element, valuation)` or empty.
type Entry = Option<(u8, i64)>;

/// An `n × n` monomial matrix with entries `x·ϖ^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModel {
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixModel {
    pub fn of(x: &Monomial, field: &Gf) -> Self {
        let n = x.n();
        let mut entries = vec![vec![None; n]; n];
        for i in 0..n {
            entries[x.perm()[i] as usize][i] = Some((field.exp(x.ulog()[i] as i64), x.val()[i] as i64));
        }
        MatrixModel { entries }
    }

    pub fn mul(&self, o: &Self, field: &Gf) -> Self {
        let n = self.entries.len();
        let mut entries = vec![vec![None; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                // Sum over k, where at most one term is nonzero for monomial matrices.
                let mut acc: Option<(u8, i64)> = None;
                for k in 0..n {
                    if let (Some((a, va)), Some((b, vb))) = (self.entries[i][k], o.entries[k][j]) {
                        acc = Some(match acc {
                            None => (field.mul(a, b), va + vb),
                            Some(_) => panic!("monomial matrices have one term per entry"),
                        });
                    }
                }
                *out = acc;
            }
        }
        MatrixModel { entries }
    }
}

/// All elements of `W(1)` for `GL₂` with valuations in `[−r, r]²`.
pub fn gl2_box(field: &Gf, r: i64) -> Vec<Monomial> {
    let m = field.units();
    let mut out = Vec::new();
    for perm in [[0usize, 1], [1, 0]] {
        for v0 in -r..=r {
            for v1 in -r..=r {
                for u0 in 0..m as i64 {
                    for u1 in 0..m as i64 {
                        out.push(Monomial::new(&perm, &[v0, v1], &[u0, u1], m));
                    }
                }
            }
        }
    }
    out
}

/// Products in `W(1)` against matrix products, and the projection to `W` as a
/// homomorphism whose kernel consists of length-0 torus units.
pub fn check_matrix_model(field: &Gf, elems: &[Monomial]) -> CheckCount {
    let mut out = CheckCount::default();
    let datum = RootDatum::new(CartanType::for_gl(2).expect("rank 2"));
    let levi = datum.levi(&[1].into_iter().collect());
    for x in elems {
        let mx = MatrixModel::of(x, field);
        for y in elems {
            let xy = x.mul(y);
            let model = MatrixModel::of(&xy, field) == mx.mul(&MatrixModel::of(y, field), field);
            let proj = xy.affine_weyl() == x.affine_weyl().mul(&y.affine_weyl());
            out.record(model && proj);
        }
        if x.affine_weyl().w0.is_identity() && x.is_finite() {
            out.record(x.length(&levi) == 0);
        }
    }
    out
}

/// Number of positive affine roots of level `|r| ≤ level` sent to negative roots.
pub fn brute_force_length(datum: &RootDatum, x: &Monomial, level: i64) -> usize {
    let w = x.affine_weyl();
    let mut count = 0;
    for alpha in datum.all_roots() {
        for r in -level..=level {
            let a = AffineRoot::new(alpha.clone(), r);
            if a.is_positive(datum) && !w.act(&a).is_positive(datum) {
                count += 1;
            }
        }
    }
    count
}

pub fn check_length_oracle(sys: &WeylSystem, elems: &[Monomial], level: i64) -> CheckCount {
    let mut out = CheckCount::default();
    for x in elems.iter().filter(|x| sys.contains(x)) {
        out.record(sys.length(x) == brute_force_length(&sys.datum, x, level));
    }
    out
}

type Terms = BTreeMap<Monomial, i64>;

fn mul_terms(sys: &WeylSystem, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (x, cx) in a {
        for (y, cy) in b {
            for (z, k) in sys.mul_basis(x, y).iter() {
                *out.entry(*z).or_insert(0) += cx * cy * k;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `(τ_xτ_y)τ_z = τ_x(τ_yτ_z)` over `ℤ` on seeded random triples.
pub fn check_associativity(sys: &WeylSystem, triples: usize, max_word: usize, seed: u64) -> CheckCount {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckCount::default();
    let one = |w: Monomial| -> Terms { [(w, 1)].into_iter().collect() };
    for _ in 0..triples {
        let x = one(random_index(sys, &mut rng, max_word));
        let y = one(random_index(sys, &mut rng, max_word));
        let z = one(random_index(sys, &mut rng, max_word));
        let lhs = mul_terms(sys, &mul_terms(sys, &x, &y), &z);
        let rhs = mul_terms(sys, &x, &mul_terms(sys, &y, &z));
        out.record(lhs == rhs);
    }
    out
}

/// The three presentation checks for `(family, q)` in rank 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub group: String,
    pub matrix_model: Option<CheckCount>,
    pub length_oracle: CheckCount,
    pub associativity: CheckCount,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.matrix_model.is_none_or(|c| c.passed()) && self.length_oracle.passed() && self.associativity.passed()
    }
}

pub fn presentation_report(setting: &super::AffineSetting, triples: usize, seed: u64) -> crate::error::Result<PresentationReport> {
    let sys = setting.system(&setting.full_j())?;
    let elems: Vec<Monomial> = gl2_box(&setting.field, 2).into_iter().filter(|x| sys.contains(x)).collect();
    let matrix_model = (setting.n == 2).then(|| check_matrix_model(&setting.field, &elems));
    let length_oracle = check_length_oracle(&sys, &elems, 4);
    let associativity = check_associativity(&sys, triples, 6, seed);
    Ok(PresentationReport {
        group: format!("{}:{}:{}", setting.family, setting.n, setting.field.q()),
        matrix_model,
        length_oracle,
        associativity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::Family;
    use crate::hecke_affine::AffineSetting;

    #[test]
    fn matrix_model_gl2() {
        for q in [2, 3] {
            let field = Gf::new(q).unwrap();
            let elems = gl2_box(&field, 2);
            let r = check_matrix_model(&field, &elems);
            assert!(r.passed(), "{r:?}");
            assert!(r.checked >= elems.len() * elems.len());
        }
    }

    #[test]
    fn length_examples() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let sys = st.system(&st.full_j()).unwrap();
        let t = |a, b| Monomial::translation(&[a, b], 2);
        assert_eq!(brute_force_length(&sys.datum, &t(1, 0), 3), 1);
        assert_eq!(brute_force_length(&sys.datum, &t(1, 1), 3), 0);
        let r = check_length_oracle(&sys, &gl2_box(&st.field, 2), 4);
        assert!(r.passed());
    }

    #[test]
    fn associativity_small() {
        for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
            let st = AffineSetting::new(fam, 2, q).unwrap();
            let r = presentation_report(&st, 300, 0).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.matrix_model.is_some_and(|m| m.checked > 0));
        }
    }
}
