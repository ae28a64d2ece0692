//! Pro-p Iwahori Hecke algebras of split `GL_n` / `SL_n` and their Levi subalgebras:
//! inverses, the `τ*` basis, `η`, the embeddings `θ`, parabolic functors and the
//! classification of simple modules through standard triples.

pub mod classify;
pub mod functors;
pub mod presentation;
pub mod theta;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::Family;
use crate::gf::Gf;
use crate::hecke_core::oracle::rank_one_c;
use crate::hecke_core::{HeckeAlgebra, HeckeElement, RankOneC, WeylSystem};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// Split `GL_n` or `SL_n` over a p-adic field with residue field `F_q`, together with the
/// algebras of its standard Levi subgroups.
pub struct AffineSetting {
    pub family: Family,
    pub n: usize,
    pub field: Gf,
    pub c: RankOneC,
    systems: Mutex<BTreeMap<BTreeSet<usize>, Arc<WeylSystem>>>,
}

impl std::fmt::Debug for AffineSetting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AffineSetting({}:{}:{})", self.family, self.n, self.field.q())
    }
}

impl AffineSetting {
    pub fn new(family: Family, n: usize, q: u8) -> Result<Self> {
        if !(2..=crate::monomial::MAX_N).contains(&n) {
            return Err(Error::Config(format!("rank {n} outside 2..={}", crate::monomial::MAX_N)));
        }
        let field = Gf::new(q)?;
        let c = rank_one_c(family, q)?;
        Ok(AffineSetting { family, n, field, c, systems: Mutex::new(BTreeMap::new()) })
    }

    pub fn q(&self) -> i64 {
        self.field.q() as i64
    }

    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }

    /// `Π` as `{1, …, n−1}`.
    pub fn full_j(&self) -> BTreeSet<usize> {
        (1..self.n).collect()
    }

    /// Every standard Levi, the whole group last.
    pub fn all_levis(&self) -> Vec<BTreeSet<usize>> {
        let full: Vec<usize> = (1..self.n).collect();
        let mut out: Vec<BTreeSet<usize>> = (0..1u32 << full.len())
            .map(|mask| full.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k).collect())
            .collect();
        out.sort_by_key(|j: &BTreeSet<usize>| j.len());
        out
    }

    pub fn proper_levis(&self) -> Vec<BTreeSet<usize>> {
        let full = self.full_j();
        self.all_levis().into_iter().filter(|j| *j != full).collect()
    }

    pub fn system(&self, j: &BTreeSet<usize>) -> Result<Arc<WeylSystem>> {
        if let Some(s) = self.systems.lock().unwrap().get(j) {
            return Ok(s.clone());
        }
        let sys = Arc::new(WeylSystem::affine(self.family, self.n, &self.field, j, &self.c)?);
        self.systems.lock().unwrap().insert(j.clone(), sys.clone());
        Ok(sys)
    }

    pub fn algebra<S: Scalar>(&self) -> Result<HeckeAlgebra<S>> {
        self.levi_algebra(&self.full_j())
    }

    pub fn levi_algebra<S: Scalar>(&self, j: &BTreeSet<usize>) -> Result<HeckeAlgebra<S>> {
        Ok(HeckeAlgebra::new(self.system(j)?))
    }

    /// Strictly `M_J`-positive central translation: the sum of the fundamental coweights
    /// outside `J`, projected to the coroot lattice for `SL_n`.
    pub fn mu(&self, j: &BTreeSet<usize>) -> Monomial {
        let n = self.n;
        let mut v = vec![0i64; n];
        for k in (1..n).filter(|k| !j.contains(k)) {
            for x in v.iter_mut().take(k) {
                *x += 1;
            }
        }
        if self.family == Family::SL {
            let total: i64 = v.iter().sum();
            v = v.iter().map(|x| n as i64 * x - total).collect();
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g > 1 {
                v = v.iter().map(|x| x / g).collect();
            }
        }
        Monomial::translation(&v, self.field.units())
    }
}

fn q_inverse<S: Scalar>(alg: &HeckeAlgebra<S>) -> Result<S> {
    S::from_i64(alg.system.q)
        .inverse()
        .ok_or_else(|| Error::Precondition(format!("q = {} is not invertible in {}", alg.system.q, S::descriptor())))
}

/// `τ_{n_s}⁻¹ = q⁻¹ τ_{n_s⁻²}(τ_{n_s} − c_{n_s})`.
pub fn simple_inverse<S: Scalar>(alg: &HeckeAlgebra<S>, i: usize) -> Result<HeckeElement<S>> {
    let qi = q_inverse(alg)?;
    let n = alg.system.simples[i].lift;
    let inner = HeckeElement::basis(n).sub(&alg.c_element(i));
    Ok(alg.mul(&HeckeElement::term(n.pow(-2), qi), &inner))
}

/// `τ_w⁻¹` through a reduced factorization `w = n_{s_1}⋯n_{s_k}u`.
pub fn tau_inverse<S: Scalar>(alg: &HeckeAlgebra<S>, w: &Monomial) -> Result<HeckeElement<S>> {
    let (word, u) = alg.system.decompose(w);
    let mut acc = HeckeElement::basis(u.inverse());
    for &i in word.iter().rev() {
        acc = alg.mul(&acc, &simple_inverse(alg, i)?);
    }
    Ok(acc)
}

/// `(τ*_w)⁻¹ = q_w⁻¹ τ_{w⁻¹}`.
pub fn star_inverse<S: Scalar>(alg: &HeckeAlgebra<S>, w: &Monomial) -> Result<HeckeElement<S>> {
    let qi = q_inverse(alg)?;
    let k = alg.length(w) as i64;
    Ok(HeckeElement::term(w.inverse(), qi.pow_i(k).expect("q is invertible")))
}

/// Coordinates of `x` in the `τ*` basis; the change of basis is unitriangular in length.
pub fn to_star_coords<S: Scalar>(alg: &HeckeAlgebra<S>, x: &HeckeElement<S>) -> HeckeElement<S> {
    let mut rest = x.clone();
    let mut out = HeckeElement::zero();
    while let Some((w, c)) = rest.terms().iter().max_by_key(|(w, _)| alg.length(w)).map(|(w, c)| (*w, c.clone())) {
        rest = rest.sub(&alg.star(&w).scale(&c));
        out.add_term(w, c);
    }
    out
}

/// `η(τ_w) = (−1)^{ℓ(w)} τ*_w`, extended linearly.
pub fn eta<S: Scalar>(alg: &HeckeAlgebra<S>, x: &HeckeElement<S>) -> HeckeElement<S> {
    let mut out = HeckeElement::zero();
    for (w, c) in x.terms() {
        out = out.add(&alg.star(w).scale(&(c.clone() * alg.sign(w))));
    }
    out
}

/// Basis index reached by a random word of at most `max_len` generators (simple lifts and
/// length-0 generators with their inverses).
pub fn random_index(sys: &WeylSystem, rng: &mut impl Rng, max_len: usize) -> Monomial {
    let gens: Vec<Monomial> = sys
        .simples
        .iter()
        .map(|s| s.lift)
        .chain(sys.zero_gens.iter().flat_map(|g| [g.element, g.element.inverse()]))
        .collect();
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(sys.identity(), |acc, _| acc.mul(&gens[rng.gen_range(0..gens.len())]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaReport {
    pub samples: usize,
    pub automorphism: bool,
    pub involution: bool,
    /// `Triv ∘ η = Sign` on generators.
    pub triv_eta_is_sign: bool,
    /// `Sign ∘ η = Triv` on generators.
    pub sign_eta_is_triv: bool,
}

impl EtaReport {
    pub fn passed(&self) -> bool {
        self.automorphism && self.involution && self.triv_eta_is_sign && self.sign_eta_is_triv
    }
}

pub fn check_eta<S: Scalar>(alg: &HeckeAlgebra<S>, samples: usize, seed: u64) -> EtaReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sys = &alg.system;
    let (mut automorphism, mut involution) = (true, true);
    for _ in 0..samples {
        let a = HeckeElement::basis(random_index(sys, &mut rng, 4));
        let b = HeckeElement::basis(random_index(sys, &mut rng, 4));
        automorphism &= eta(alg, &alg.mul(&a, &b)) == alg.mul(&eta(alg, &a), &eta(alg, &b));
        involution &= eta(alg, &eta(alg, &a)) == a;
    }
    let gens: Vec<Monomial> = sys.simples.iter().map(|s| s.lift).chain(sys.zero_gens.iter().map(|g| g.element)).collect();
    let triv = |x: &HeckeElement<S>| alg.eval(|w| alg.triv(w), x);
    let sign = |x: &HeckeElement<S>| alg.eval(|w| alg.sign(w), x);
    let (mut triv_eta_is_sign, mut sign_eta_is_triv) = (true, true);
    for g in gens {
        let t = HeckeElement::basis(g);
        let e = eta(alg, &t);
        triv_eta_is_sign &= triv(&e) == sign(&t);
        sign_eta_is_triv &= sign(&e) == triv(&t);
    }
    EtaReport { samples, automorphism, involution, triv_eta_is_sign, sign_eta_is_triv }
}

/// Parses one factor: `t[a,b,…]`, a simple (`s0`, `s1`, …), a length-0 generator name,
/// or `1`.
fn parse_factor(sys: &WeylSystem, tok: &str) -> Result<Monomial> {
    let bad = |why: &str| Error::parse("expr", format!("{tok:?}: {why}"));
    if tok == "1" {
        return Ok(sys.identity());
    }
    if let Some(body) = tok.strip_prefix("t[").and_then(|t| t.strip_suffix(']')) {
        let v = body.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad("bad translation entry"))).collect::<Result<Vec<_>>>()?;
        if v.len() != sys.n {
            return Err(bad("translation has the wrong length"));
        }
        return Ok(Monomial::translation(&v, sys.field.units()));
    }
    if let Some(i) = sys.simple_position(tok) {
        return Ok(sys.simples[i].lift);
    }
    if let Some(g) = sys.zero_gens.iter().find(|g| g.name == tok) {
        return Ok(g.element);
    }
    Err(bad("unknown factor"))
}

/// Evaluates a product like `t[1,0] * s0 * s1^-1` of `τ` basis elements; negative powers
/// require `q` invertible.
pub fn eval_expr<S: Scalar>(alg: &HeckeAlgebra<S>, expr: &str) -> Result<HeckeElement<S>> {
    let sys = &alg.system;
    let mut acc = alg.one();
    for raw in expr.split('*') {
        let tok = raw.trim();
        if tok.is_empty() {
            return Err(Error::parse("expr", "empty factor"));
        }
        let (base, k) = match tok.rsplit_once('^') {
            Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| Error::parse("expr", format!("bad exponent in {tok:?}")))?),
            None => (tok, 1),
        };
        let w = parse_factor(sys, base)?;
        alg.tau(&w)?;
        let f = if k >= 0 { HeckeElement::basis(w) } else { tau_inverse(alg, &w)? };
        for _ in 0..k.unsigned_abs() {
            acc = alg.mul(&acc, &f);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::scalar::{F3, Q};

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn mu_choices() {
        let gl2 = AffineSetting::new(Family::GL, 2, 3).unwrap();
        assert_eq!(gl2.mu(&set(&[])).val(), &[1, 0]);
        let gl3 = AffineSetting::new(Family::GL, 3, 2).unwrap();
        assert_eq!(gl3.mu(&set(&[])).val(), &[2, 1, 0]);
        assert_eq!(gl3.mu(&set(&[1])).val(), &[1, 1, 0]);
        assert_eq!(gl3.mu(&set(&[2])).val(), &[1, 0, 0]);
        let sl2 = AffineSetting::new(Family::SL, 2, 3).unwrap();
        assert_eq!(sl2.mu(&set(&[])).val(), &[1, -1]);
    }

    #[test]
    fn lengths_and_products() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let alg = st.algebra::<F3>().unwrap();
        let m = st.field.units();
        let t = |a, b| Monomial::translation(&[a, b], m);
        assert_eq!(alg.length(&t(1, 1)), 0);
        assert_eq!(alg.length(&t(1, 0)), 1);
        assert_eq!(alg.length(&Monomial::unit(&[1, 0], m)), 0);
        let p = alg.mul(&HeckeElement::basis(t(1, 0)), &HeckeElement::basis(t(1, 0)));
        assert_eq!(p, HeckeElement::basis(t(2, 0)));
        let s0 = alg.system.simples[0].clone();
        let lhs = alg.mul(&HeckeElement::basis(s0.lift), &HeckeElement::basis(s0.lift));
        let rhs = HeckeElement::term(s0.lift.pow(2), alg.q_s(0)).add(&alg.mul(&alg.c_element(0), &HeckeElement::basis(s0.lift)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverses_over_q() {
        for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
            let st = AffineSetting::new(fam, 2, q).unwrap();
            let alg = st.algebra::<Q>().unwrap();
            for i in 0..alg.system.simples.len() {
                let n = alg.system.simples[i].lift;
                assert_eq!(alg.mul(&HeckeElement::basis(n), &simple_inverse(&alg, i).unwrap()), alg.one());
            }
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
            for _ in 0..20 {
                let w = random_index(&alg.system, &mut rng, 5);
                assert_eq!(alg.mul(&HeckeElement::basis(w), &tau_inverse(&alg, &w).unwrap()), alg.one());
                assert_eq!(alg.mul(&alg.star(&w), &star_inverse(&alg, &w).unwrap()), alg.one());
            }
        }
        let alg = AffineSetting::new(Family::GL, 2, 3).unwrap().algebra::<F3>().unwrap();
        assert!(matches!(simple_inverse(&alg, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn star_basis_properties() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let alg = st.algebra::<F3>().unwrap();
        let sys = &alg.system;
        let u = Monomial::unit(&[1, 0], st.field.units());
        assert_eq!(alg.star(&u), HeckeElement::basis(u));
        let s0 = sys.simples[0].lift;
        assert_eq!(alg.star(&s0), HeckeElement::basis(s0).sub(&alg.c_element(0)));
        let w = sys.simples[0].lift.mul(&sys.simples[1].lift).mul(&sys.simples[0].lift);
        assert_eq!(alg.length(&w), 3);
        let prod = alg.mul_all(&[alg.star(&sys.simples[0].lift), alg.star(&sys.simples[1].lift), alg.star(&sys.simples[0].lift)]);
        assert_eq!(prod, alg.star(&w));
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2);
        for _ in 0..30 {
            let w = random_index(sys, &mut rng, 5);
            let s = alg.star(&w);
            assert_eq!(s.coeff(&w), F3::one());
            assert!(s.terms().keys().all(|x| *x == w || alg.length(x) < alg.length(&w)));
            assert_eq!(to_star_coords(&alg, &HeckeElement::basis(w)).terms().keys().max_by_key(|x| alg.length(x)), Some(&w));
            let x = HeckeElement::basis(w);
            assert_eq!(alg.star_of(&to_star_coords(&alg, &x)), x);
        }
    }

    #[test]
    fn eta_swaps_triv_and_sign() {
        for (fam, q) in [(Family::GL, 2), (Family::GL, 3), (Family::SL, 3)] {
            let st = AffineSetting::new(fam, 2, q).unwrap();
            let r = check_eta(&st.algebra::<F3>().unwrap(), 40, 0);
            assert!(r.passed(), "{fam} {q}: {r:?}");
            assert!(check_eta(&st.algebra::<Q>().unwrap(), 20, 0).passed());
        }
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let alg = st.algebra::<F3>().unwrap();
        let s0 = alg.system.simples[0].lift;
        assert_eq!(eta(&alg, &HeckeElement::basis(s0)), alg.star(&s0).scale(&-F3::one()));
    }

    #[test]
    fn expressions() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let alg = st.algebra::<F3>().unwrap();
        let x = eval_expr(&alg, "t[1,0] * s0 * s1").unwrap();
        let sys = &alg.system;
        let t = Monomial::translation(&[1, 0], 2);
        let want = alg.mul_all(&[HeckeElement::basis(t), HeckeElement::basis(sys.simples[0].lift), HeckeElement::basis(sys.simples[1].lift)]);
        assert_eq!(x, want);
        assert!(eval_expr(&alg, "s7").is_err());
        assert!(eval_expr(&alg, "t[1] * s0").is_err());
        assert!(eval_expr(&alg, "s0^-1").is_err());
        let alg_q = st.algebra::<Q>().unwrap();
        assert_eq!(eval_expr(&alg_q, "s0 * s0^-1").unwrap(), alg_q.one());
    }
}
