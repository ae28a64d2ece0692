//! Supersingularity through vanishing of the Levi adjoints, standard triples `(P, σ, Q)`,
//! the modules `I_𝓗(P, σ, Q)` and composition factors of small modules.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::functors::induct;
use super::theta::AffineLevi;
use super::{to_star_coords, AffineSetting};
use crate::error::{Error, Result};
use crate::hecke_core::HeckeElement;
use crate::hecke_modules::{characters, find_isomorphism, hom_space, HeckeModule};
use crate::linalg::{unit_vec, Matrix};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviNilpotency {
    pub j: Vec<usize>,
    /// Nilpotency index of `θ(τ^M_{μ_J})`, `None` if not nilpotent.
    pub theta: Option<usize>,
    /// Nilpotency index of `θ*(τ^{M,*}_{μ_J})`, `None` if not nilpotent.
    pub theta_star: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersingularityReport {
    pub levis: Vec<LeviNilpotency>,
    pub supersingular: bool,
}

fn nilpotency_index<S: Scalar>(a: &Matrix<S>) -> Option<usize> {
    let mut p = Matrix::identity(a.rows());
    for k in 0..=a.rows() {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(a);
    }
    None
}

/// Supersingular iff `θ(τ_{μ_J})` and `θ*(τ_{μ_J})` are nilpotent for every proper `J`.
pub fn is_supersingular<S: Scalar>(setting: &AffineSetting, m: &HeckeModule<S>) -> Result<SupersingularityReport> {
    if S::characteristic() != setting.p() {
        return Err(Error::Precondition(format!("supersingularity is tested in characteristic {}, not {}", setting.p(), S::descriptor())));
    }
    let alg = &m.algebra;
    let mut levis = Vec::new();
    for j in setting.proper_levis() {
        let mu = setting.mu(&j);
        levis.push(LeviNilpotency {
            j: j.iter().copied().collect(),
            theta: nilpotency_index(&m.action_basis(&mu)?),
            theta_star: nilpotency_index(&m.action(&alg.star(&mu))?),
        });
    }
    let supersingular = levis.iter().all(|l| l.theta.is_some() && l.theta_star.is_some());
    Ok(SupersingularityReport { levis, supersingular })
}

fn orthogonal(a: usize, b: usize) -> bool {
    a.abs_diff(b) > 1
}

/// Coroot translation and coroot unit of the simple root `α_k`.
fn coroot_generators(setting: &AffineSetting, k: usize) -> [Monomial; 2] {
    let mut e = vec![0i64; setting.n];
    e[k - 1] = 1;
    e[k] = -1;
    let m = setting.field.units();
    [Monomial::translation(&e, m), Monomial::unit(&e, m)]
}

/// `Π_σ`: simple roots orthogonal to `Π_M` on whose coroot group `σ(τ^{M,*}_w)` is trivial.
pub fn pi_sigma<S: Scalar>(setting: &AffineSetting, j: &BTreeSet<usize>, sigma: &HeckeModule<S>) -> Result<BTreeSet<usize>> {
    let levi = &sigma.algebra;
    if levi.system.levi.j != *j {
        return Err(Error::Precondition(format!("σ is a module over {}, not over the Levi {j:?}", levi.system.id())));
    }
    let mut out = BTreeSet::new();
    for k in (1..setting.n).filter(|k| !j.contains(k) && j.iter().all(|&i| orthogonal(i, *k))) {
        let mut trivial = true;
        for w in coroot_generators(setting, k) {
            trivial &= sigma.action(&levi.star(&w))?.is_identity();
        }
        if trivial {
            out.insert(k);
        }
    }
    Ok(out)
}

/// `J(σ) = J ⊔ Π_σ`.
pub fn p_of_sigma<S: Scalar>(setting: &AffineSetting, j: &BTreeSet<usize>, sigma: &HeckeModule<S>) -> Result<BTreeSet<usize>> {
    Ok(j.union(&pi_sigma(setting, j, sigma)?).copied().collect())
}

/// The factor in `W_M(1)` of `w ∈ W_{M_Q}(1) = W_M(1)·W_{M′}(1)`: blocks of `Q` made of roots
/// of `J` are kept, the others are replaced by their determinant in the first slot.
fn levi_factor(setting: &AffineSetting, j: &BTreeSet<usize>, q: &BTreeSet<usize>, w: &Monomial) -> Monomial {
    let datum = crate::coxeter::RootDatum::new(crate::coxeter::CartanType::for_gl(setting.n).expect("valid rank"));
    let lvl = datum.levi(q);
    let n = setting.n;
    let (mut perm, mut val, mut ulog) = ((0..n).collect::<Vec<usize>>(), vec![0i64; n], vec![0i64; n]);
    let lm1 = setting.field.log_minus_one() as i64;
    for block in lvl.blocks() {
        let in_j = block.windows(2).all(|p| j.contains(&(p[1])));
        if in_j {
            for &i in &block {
                perm[i] = w.perm()[i] as usize;
                val[i] = w.val()[i] as i64;
                ulog[i] = w.ulog()[i] as i64;
            }
        } else {
            let mut u: i64 = block.iter().map(|&i| w.ulog()[i] as i64).sum();
            let mut seen = vec![false; n];
            let mut odd = false;
            for &i in &block {
                if seen[i] {
                    continue;
                }
                let mut len = 0;
                let mut x = i;
                while !seen[x] {
                    seen[x] = true;
                    x = w.perm()[x] as usize;
                    len += 1;
                }
                odd ^= len % 2 == 0;
            }
            if odd {
                u += lm1;
            }
            val[block[0]] = block.iter().map(|&i| w.val()[i] as i64).sum();
            ulog[block[0]] = u;
        }
    }
    Monomial::new(&perm, &val, &ulog, setting.field.units())
}

/// `e_{𝓗_{M_Q}}(σ)`: `τ^{M_Q,*}_w` acts by `σ(τ^{M,*}_m)` for the `W_M(1)` factor `m` of `w`.
pub fn extend_module<S: Scalar>(setting: &AffineSetting, j: &BTreeSet<usize>, sigma: &HeckeModule<S>, q: &BTreeSet<usize>) -> Result<HeckeModule<S>> {
    let js = p_of_sigma(setting, j, sigma)?;
    if !j.is_subset(q) || !q.is_subset(&js) {
        return Err(Error::Precondition(format!("Q = {q:?} is not between J = {j:?} and J(σ) = {js:?}")));
    }
    if q == j {
        return Ok(sigma.clone());
    }
    let levi = &sigma.algebra;
    let alg_q = setting.levi_algebra::<S>(q)?;
    let image = |x: &Monomial| -> Result<Matrix<S>> {
        let mut acc = Matrix::zeros(sigma.rank, sigma.rank);
        for (y, c) in to_star_coords(&alg_q, &HeckeElement::basis(*x)).terms() {
            let m = levi_factor(setting, j, q, y);
            if !levi.system.contains(&m) {
                return Err(Error::Unsupported(format!("{y} has no factor in W_M(1)")));
            }
            acc.add_scaled(&sigma.action(&levi.star(&m))?, c);
        }
        Ok(acc)
    };
    let sys = alg_q.system.clone();
    let s = sys.simples.iter().map(|x| image(&x.lift)).collect::<Result<_>>()?;
    let z = sys.zero_gens.iter().map(|x| image(&x.element)).collect::<Result<_>>()?;
    HeckeModule::with_rank(alg_q, sigma.rank, s, z)
}

fn subsets_between(lo: &BTreeSet<usize>, hi: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let extra: Vec<usize> = hi.difference(lo).copied().collect();
    (0..1u32 << extra.len())
        .map(|mask| lo.iter().copied().chain(extra.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k)).collect())
        .collect()
}

/// `I_𝓗(P, σ, Q)`: `Ind_{M_Q}(e_Q(σ))` modulo the images of `Ind_{M_{Q₁}}(e_{Q₁}(σ))` for
/// `Q ⊊ Q₁ ⊆ P(σ)`, each generated by `x ⊗ Σ_d τ_{n_d}` over `d ∈ ^{M_Q}W_{M_{Q₁}}`.
pub fn i_h_triple<S: Scalar>(setting: &AffineSetting, j: &BTreeSet<usize>, sigma: &HeckeModule<S>, q: &BTreeSet<usize>) -> Result<HeckeModule<S>> {
    let e_q = extend_module(setting, j, sigma, q)?;
    let al = AffineLevi::<S>::new(setting, q)?;
    let ind = induct(&al, &e_q)?;
    let js = p_of_sigma(setting, j, sigma)?;
    let r = e_q.rank;
    let mut gens = Vec::new();
    for q1 in subsets_between(q, &js).into_iter().filter(|q1| q1 != q) {
        let lvl1 = al.big().system.datum.levi(&q1);
        let ds: Vec<usize> = (0..al.pair.left_reps.len()).filter(|&d| lvl1.contains(&al.pair.left_reps[d].weyl())).collect();
        let mut span = Vec::new();
        for x in 0..r {
            let mut v = vec![S::zero(); ind.rank];
            for &d in &ds {
                v[d * r + x] = S::one();
            }
            span.push(v);
        }
        let sub = ind.spin(&span);
        if sub.len() != r * al.big().system.datum.min_coset_reps(&q1).len() {
            return Err(Error::Internal(format!("image of the Q₁ = {q1:?} induction has rank {}", sub.len())));
        }
        gens.extend(sub);
    }
    if gens.is_empty() {
        return Ok(ind);
    }
    let span = ind.spin(&gens);
    Ok(ind.quotient(&span)?.0)
}

/// A simple subquotient; `QuadraticPair` is simple over `S` with endomorphism field of
/// degree 2, so it splits into two conjugate factors over the quadratic extension.
#[derive(Clone, Debug, PartialEq)]
pub enum CompositionFactor<S: Scalar> {
    Simple(HeckeModule<S>),
    QuadraticPair(HeckeModule<S>),
}

impl<S: Scalar> CompositionFactor<S> {
    pub fn module(&self) -> &HeckeModule<S> {
        match self {
            CompositionFactor::Simple(m) | CompositionFactor::QuadraticPair(m) => m,
        }
    }
}

const MAX_RANK: usize = 4;
const MAX_ENUMERATION: usize = 200_000;

/// A proper nonzero submodule, or `None` when the search certifies simplicity.
fn find_submodule<S: Scalar>(m: &HeckeModule<S>) -> Result<Option<Vec<Vec<S>>>> {
    let r = m.rank;
    match S::enumerate() {
        Some(field) if field.len().checked_pow(r as u32).is_some_and(|n| n <= MAX_ENUMERATION) => {
            // Vectors whose first nonzero entry is 1 cover every line.
            let mut idx = vec![0usize; r];
            loop {
                let v: Vec<S> = idx.iter().map(|&i| field[i].clone()).collect();
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_one()) {
                    let sub = m.spin(&[v]);
                    if sub.len() < r {
                        return Ok(Some(sub));
                    }
                }
                let mut k = 0;
                while k < r {
                    idx[k] += 1;
                    if idx[k] < field.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == r {
                    return Ok(None);
                }
            }
        }
        Some(_) => Err(Error::Unsupported(format!("exhaustive search over {} in rank {r}", S::descriptor()))),
        None => {
            // Over Q: eigenvectors of generators and of random combinations for small integer
            // eigenvalues. A miss is not a proof of simplicity.
            let mut ops: Vec<Matrix<S>> = m.generator_mats().into_iter().cloned().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..4 {
                let mut x = Matrix::zeros(r, r);
                for g in m.generator_mats() {
                    x.add_scaled(g, &S::from_i64(rand::Rng::gen_range(&mut rng, -3..=3)));
                }
                ops.push(x.mul(&ops[0]));
                ops.push(x);
            }
            let q = m.algebra.system.q;
            for a in &ops {
                for lam in -(q * q)..=(q * q) {
                    let shifted = a.sub(&Matrix::scalar(r, S::from_i64(lam)));
                    for v in shifted.transpose().nullspace() {
                        let sub = m.spin(&[v]);
                        if sub.len() < r {
                            return Ok(Some(sub));
                        }
                    }
                }
            }
            if r == 1 {
                Ok(None)
            } else {
                Err(Error::Unsupported(format!("no invariant subspace found in rank {r} over Q; simplicity is not certified")))
            }
        }
    }
}

/// Composition factors of a module of rank at most 4.
pub fn composition_factors<S: Scalar>(m: &HeckeModule<S>) -> Result<Vec<CompositionFactor<S>>> {
    if m.rank > MAX_RANK {
        return Err(Error::Precondition(format!("rank {} exceeds {MAX_RANK}", m.rank)));
    }
    if m.rank == 0 {
        return Ok(Vec::new());
    }
    match find_submodule(m)? {
        Some(sub) => {
            let (a, _) = m.submodule(&sub)?;
            let (b, _) = m.quotient(&sub)?;
            let mut out = composition_factors(&a)?;
            out.extend(composition_factors(&b)?);
            Ok(out)
        }
        None => match hom_space(m, m).len() {
            1 => Ok(vec![CompositionFactor::Simple(m.clone())]),
            2 => Ok(vec![CompositionFactor::QuadraticPair(m.clone())]),
            d => Err(Error::Unsupported(format!("endomorphism algebra of dimension {d} needs an extension of degree > 2"))),
        },
    }
}

/// Multiset equality of factor lists up to isomorphism.
pub fn same_factors<S: Scalar>(a: &[CompositionFactor<S>], b: &[HeckeModule<S>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|f| {
        let hit = (0..b.len()).find(|&i| !used[i] && find_isomorphism(f.module(), &b[i]).is_some());
        hit.map(|i| used[i] = true).is_some()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRow {
    pub p: Vec<usize>,
    pub sigma: String,
    pub q: Vec<usize>,
    pub rank: usize,
    pub supersingular: bool,
    pub expected: bool,
}

impl TripleRow {
    pub fn passed(&self) -> bool {
        self.supersingular == self.expected
    }
}

fn describe<S: Scalar>(m: &HeckeModule<S>) -> String {
    let vals: Vec<String> = m.generator_names().into_iter().zip(m.generator_mats()).map(|(n, a)| format!("{n}={}", a[(0, 0)])).collect();
    vals.join(",")
}

/// Every standard triple `(P, σ, Q)` with `σ` a character of `𝓗_M`, checking that
/// `I_𝓗(P, σ, Q)` is supersingular iff `P = Q = G` and `σ` is supersingular.
pub fn round_trip_grid<S: Scalar>(setting: &AffineSetting) -> Result<Vec<TripleRow>> {
    let full = setting.full_j();
    let mut rows = Vec::new();
    for j in setting.all_levis() {
        let levi = setting.levi_algebra::<S>(&j)?;
        for sigma in characters(&levi) {
            let js = p_of_sigma(setting, &j, &sigma)?;
            let sigma_ss = j == full && is_supersingular(setting, &sigma)?.supersingular;
            for q in subsets_between(&j, &js) {
                let module = i_h_triple(setting, &j, &sigma, &q)?;
                let supersingular = is_supersingular(setting, &module)?.supersingular;
                rows.push(TripleRow {
                    p: j.iter().copied().collect(),
                    sigma: describe(&sigma),
                    q: q.iter().copied().collect(),
                    rank: module.rank,
                    supersingular,
                    expected: j == full && q == full && sigma_ss,
                });
            }
        }
    }
    Ok(rows)
}

/// The characters of `𝓗` with trivial action of the torus units, as `(a₀, a₁, …)` values
/// of the simple generators.
pub fn unit_trivial_characters<S: Scalar>(setting: &AffineSetting) -> Result<Vec<(Vec<S>, HeckeModule<S>)>> {
    let alg = setting.algebra::<S>()?;
    let sys = alg.system.clone();
    Ok(characters(&alg)
        .into_iter()
        .filter(|m| sys.zero_gens.iter().zip(&m.zero_mats).all(|(g, a)| g.order.is_none() || a.is_identity()))
        .filter(|m| {
            // Central `ω`-type generators may act by any scalar; keep the value 1.
            sys.zero_gens.iter().zip(&m.zero_mats).all(|(g, a)| g.order.is_some() || a.is_identity())
        })
        .map(|m| (m.simple_mats.iter().map(|a| a[(0, 0)].clone()).collect(), m))
        .collect())
}

pub fn unit_vector_basis<S: Scalar>(r: usize) -> Vec<Vec<S>> {
    (0..r).map(|i| unit_vec(r, i)).collect()
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;
    use crate::finite_group::Family;
    use crate::hecke_affine::functors::torus_trivial;
    use crate::scalar::{F2, F3, Q};

    fn empty() -> BTreeSet<usize> {
        BTreeSet::new()
    }

    #[test]
    fn supersingular_characters_sl2() {
        let st = AffineSetting::new(Family::SL, 2, 3).unwrap();
        let chars = unit_trivial_characters::<F3>(&st).unwrap();
        assert_eq!(chars.len(), 4);
        let (zero, m1) = (F3::zero(), -F3::one());
        for (vals, m) in chars {
            let mixed = vals[0] != vals[1];
            assert!(vals.iter().all(|v| *v == zero || *v == m1));
            assert_eq!(is_supersingular(&st, &m).unwrap().supersingular, mixed, "{vals:?}");
        }
        let alg = st.algebra::<Q>().unwrap();
        assert!(matches!(is_supersingular(&st, &HeckeModule::triv(alg).unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn gl2_has_no_mixed_unit_trivial_characters() {
        for q in [2, 3] {
            let st = AffineSetting::new(Family::GL, 2, q).unwrap();
            let chars = if q == 2 { unit_trivial_characters::<F2>(&st).unwrap().len() } else { unit_trivial_characters::<F3>(&st).unwrap().len() };
            assert_eq!(chars, 2);
        }
    }

    #[test]
    fn pi_sigma_examples() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let triv_t = torus_trivial::<F3>(&st).unwrap();
        assert_eq!(pi_sigma(&st, &empty(), &triv_t).unwrap(), st.full_j());
        let t = st.levi_algebra::<F3>(&empty()).unwrap();
        let m = HeckeModule::character(t, &[], &[-F3::one(), F3::one(), F3::one(), F3::one()]).unwrap();
        assert!(pi_sigma(&st, &empty(), &m).unwrap().is_empty());
        let triv = HeckeModule::triv(st.algebra::<F3>().unwrap()).unwrap();
        assert!(pi_sigma(&st, &st.full_j(), &triv).unwrap().is_empty());
    }

    #[test]
    fn triples_gl2() {
        let st = AffineSetting::new(Family::GL, 2, 2).unwrap();
        let triv_t = torus_trivial::<F2>(&st).unwrap();
        let alg = st.algebra::<F2>().unwrap();
        let triv = HeckeModule::triv(alg.clone()).unwrap();
        let sign = HeckeModule::sign(alg).unwrap();
        let top = i_h_triple(&st, &empty(), &triv_t, &st.full_j()).unwrap();
        assert!(find_isomorphism(&top, &triv).is_some());
        let bottom = i_h_triple(&st, &empty(), &triv_t, &empty()).unwrap();
        assert!(find_isomorphism(&bottom, &sign).is_some());
        assert_eq!(i_h_triple(&st, &st.full_j(), &sign, &st.full_j()).unwrap(), sign);
        assert!(matches!(i_h_triple(&st, &st.full_j(), &sign, &empty()), Err(Error::Precondition(_))));
    }

    fn induced_trivial_factors<S: Scalar>(st: &AffineSetting) -> bool {
        let al = AffineLevi::<S>::new(st, &empty()).unwrap();
        let ind = induct(&al, &torus_trivial(st).unwrap()).unwrap();
        let alg = st.algebra::<S>().unwrap();
        let want = [HeckeModule::triv(alg.clone()).unwrap(), HeckeModule::sign(alg).unwrap()];
        same_factors(&composition_factors(&ind).unwrap(), &want)
    }

    #[test]
    fn factors_of_induced_trivial() {
        assert!(induced_trivial_factors::<F2>(&AffineSetting::new(Family::GL, 2, 2).unwrap()));
        assert!(induced_trivial_factors::<F3>(&AffineSetting::new(Family::SL, 2, 3).unwrap()));
        // For GL₂ in odd characteristic `ω` acts by −1 on the quotient.
        assert!(!induced_trivial_factors::<F3>(&AffineSetting::new(Family::GL, 2, 3).unwrap()));
    }

    #[test]
    fn regular_unit_part_gives_simple_induced() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let t = st.levi_algebra::<F3>(&empty()).unwrap();
        let chi = HeckeModule::character(t, &[], &[F3::one(), F3::one(), F3::one(), -F3::one()]).unwrap();
        let al = AffineLevi::<F3>::new(&st, &empty()).unwrap();
        let ind = induct(&al, &chi).unwrap();
        let f = composition_factors(&ind).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].module().rank, 2);
    }

    #[test]
    fn round_trip() {
        for (fam, q) in [(Family::GL, 2), (Family::SL, 3)] {
            let st = AffineSetting::new(fam, 2, q).unwrap();
            let rows = if q == 2 { round_trip_grid::<F2>(&st).unwrap() } else { round_trip_grid::<F3>(&st).unwrap() };
            assert!(!rows.is_empty());
            assert!(rows.iter().all(|r| r.passed()), "{rows:?}");
            assert_eq!(rows.iter().any(|r| r.expected), fam == Family::SL);
        }
    }
}
