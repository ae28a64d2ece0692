//! Induction, coinduction, restriction and the left adjoint of induction between a finite
//! Hecke algebra `H` and a Levi subalgebra `H_𝕄`.

use serde::{Deserialize, Serialize};

use super::{find_isomorphism, hom_space, HeckeModule};
use crate::error::{Error, Result};
use crate::hecke_core::frobenius::longest_lift;
use crate::hecke_core::{HeckeAlgebra, HeckeElement};
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// Coset lifts relating `H` and `H_𝕄`.
pub struct LeviPair<S: Scalar> {
    pub big: HeckeAlgebra<S>,
    pub levi: HeckeAlgebra<S>,
    /// `n_d` for `d ∈ ^M W`.
    pub left_reps: Vec<Monomial>,
    /// `n_e` for `e ∈ W^M`.
    pub right_reps: Vec<Monomial>,
}

impl<S: Scalar> LeviPair<S> {
    pub fn new(big: &HeckeAlgebra<S>, levi: &HeckeAlgebra<S>) -> Result<Self> {
        let (bs, ls) = (&big.system, &levi.system);
        if bs.n != ls.n || bs.family != ls.family || bs.affine != ls.affine || !ls.levi.j.is_subset(&bs.levi.j) {
            return Err(Error::Precondition(format!("{} is not a Levi subalgebra of {}", ls.id(), bs.id())));
        }
        let datum = &bs.datum;
        let j = &ls.levi.j;
        let lift = |w: &crate::coxeter::WeylElement| bs.lift_of_word(&datum.reduced_word(w));
        let left_reps = datum.min_coset_reps(j).into_iter().filter(|d| bs.levi.contains(d)).map(|w| lift(&w)).collect();
        let right_reps = datum.min_right_coset_reps(j).into_iter().filter(|d| bs.levi.contains(d)).map(|w| lift(&w)).collect();
        Ok(LeviPair { big: big.clone(), levi: levi.clone(), left_reps, right_reps })
    }

    fn position(reps: &[Monomial], d: &crate::coxeter::WeylElement) -> Result<usize> {
        reps.iter().position(|r| r.weyl() == *d).ok_or_else(|| Error::Internal(format!("no coset representative for {d:?}")))
    }

    /// `y = m·n_d` with `d ∈ ^M W`.
    pub fn split_left(&self, y: &Monomial) -> Result<(Monomial, usize)> {
        let (_, d) = self.big.system.datum.split_left(&self.levi.system.levi.j, &y.weyl());
        let i = Self::position(&self.left_reps, &d)?;
        Ok((y.mul(&self.left_reps[i].inverse()), i))
    }

    /// `y = n_e·m` with `e ∈ W^M`.
    pub fn split_right(&self, y: &Monomial) -> Result<(usize, Monomial)> {
        let (e, _) = self.big.system.datum.split_right(&self.levi.system.levi.j, &y.weyl());
        let i = Self::position(&self.right_reps, &e)?;
        Ok((i, self.right_reps[i].inverse().mul(y)))
    }

    /// Length-0 and simple generators of `H` as basis indices.
    fn big_generators(&self) -> (Vec<Monomial>, Vec<Monomial>) {
        let sys = &self.big.system;
        (sys.simples.iter().map(|s| s.lift).collect(), sys.zero_gens.iter().map(|g| g.element).collect())
    }
}

/// `Ind(m) = m ⊗_{H_𝕄} H` on the basis `v ⊗ τ_{n_d}`.
pub fn induct<S: Scalar>(pair: &LeviPair<S>, m: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    let r = m.rank;
    let k = pair.left_reps.len();
    let mat = |g: &Monomial| -> Result<Matrix<S>> {
        let mut a = Matrix::zeros(r * k, r * k);
        for (d, nd) in pair.left_reps.iter().enumerate() {
            let prod = pair.big.mul(&HeckeElement::basis(*nd), &HeckeElement::basis(*g));
            for (y, c) in prod.terms() {
                let (mm, d2) = pair.split_left(y)?;
                a.add_block(d * r, d2 * r, &m.action_basis(&mm)?.scale(c));
            }
        }
        Ok(a)
    };
    let (s, z) = pair.big_generators();
    HeckeModule::with_rank(pair.big.clone(), r * k, s.iter().map(mat).collect::<Result<_>>()?, z.iter().map(mat).collect::<Result<_>>()?)
}

/// `Coind(m) = Hom_{H_𝕄}(H, m)` on the coordinates `f(τ_{n_e})`, `e ∈ W^M`.
pub fn coinduct<S: Scalar>(pair: &LeviPair<S>, m: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    let r = m.rank;
    let k = pair.right_reps.len();
    let mat = |g: &Monomial| -> Result<Matrix<S>> {
        let mut a = Matrix::zeros(r * k, r * k);
        for (e, ne) in pair.right_reps.iter().enumerate() {
            let prod = pair.big.mul(&HeckeElement::basis(*g), &HeckeElement::basis(*ne));
            for (y, c) in prod.terms() {
                let (e2, mm) = pair.split_right(y)?;
                a.add_block(e2 * r, e * r, &m.action_basis(&mm)?.scale(c));
            }
        }
        Ok(a)
    };
    let (s, z) = pair.big_generators();
    HeckeModule::with_rank(pair.big.clone(), r * k, s.iter().map(mat).collect::<Result<_>>()?, z.iter().map(mat).collect::<Result<_>>()?)
}

/// Module over `levi` whose generator `g` acts through `n` by `τ_{f(g)}`.
fn pull_back<S: Scalar>(n: &HeckeModule<S>, levi: &HeckeAlgebra<S>, f: impl Fn(&Monomial) -> Monomial) -> Result<HeckeModule<S>> {
    let sys = &levi.system;
    let s = sys.simples.iter().map(|x| n.action_basis(&f(&x.lift))).collect::<Result<_>>()?;
    let z = sys.zero_gens.iter().map(|x| n.action_basis(&f(&x.element))).collect::<Result<_>>()?;
    HeckeModule::with_rank(levi.clone(), n.rank, s, z)
}

pub fn restrict<S: Scalar>(n: &HeckeModule<S>, levi: &HeckeAlgebra<S>) -> Result<HeckeModule<S>> {
    pull_back(n, levi, |m| *m)
}

/// `L(n) = Res_{H_{𝕄′}}(n)ι⁻¹ι_𝕄`: `τ_m` acts by `τ_{ñ⁻¹ñ_𝕄 m ñ_𝕄⁻¹ñ}`.
pub fn left_adjoint<S: Scalar>(n: &HeckeModule<S>, levi: &HeckeAlgebra<S>) -> Result<HeckeModule<S>> {
    let g = longest_lift(&n.algebra.system).inverse().mul(&longest_lift(&levi.system));
    pull_back(n, levi, |m| m.conj(&g))
}

/// `m ι_𝕄⁻¹ι` as a module over `H_{𝕄′}`: `τ_{m′}` acts by `τ_{g m′ g⁻¹}` with `g = ñ_𝕄⁻¹ñ`.
pub fn twist_to_conjugate<S: Scalar>(m: &HeckeModule<S>, big: &HeckeAlgebra<S>, target: &HeckeAlgebra<S>) -> Result<HeckeModule<S>> {
    let g = longest_lift(&m.algebra.system).inverse().mul(&longest_lift(&big.system));
    pull_back(m, target, |x| x.conj(&g))
}

/// `Ind(f)` for a morphism `f: m → m′` given by its matrix.
pub fn induct_morphism<S: Scalar>(pair: &LeviPair<S>, f: &Matrix<S>) -> Matrix<S> {
    let k = pair.left_reps.len();
    let mut out = Matrix::zeros(f.rows() * k, f.cols() * k);
    for d in 0..k {
        out.add_block(d * f.rows(), d * f.cols(), f);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionReport {
    /// `dim Hom_H(Ind m, n)` and `dim Hom_𝕄(m, Res n)`.
    pub ind_res: (usize, usize),
    /// `dim Hom_𝕄(L n, m)` and `dim Hom_H(n, Ind m)`.
    pub l_ind: (usize, usize),
    /// `dim Hom_𝕄(Res n, m)` and `dim Hom_H(n, Ind m)` when the characteristic is not `p`.
    pub res_ind: Option<(usize, usize)>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.ind_res.0 == self.ind_res.1 && self.l_ind.0 == self.l_ind.1 && self.res_ind.is_none_or(|(a, b)| a == b)
    }
}

pub fn check_adjunction<S: Scalar>(pair: &LeviPair<S>, m: &HeckeModule<S>, n: &HeckeModule<S>) -> Result<AdjunctionReport> {
    let ind = induct(pair, m)?;
    let res = restrict(n, &pair.levi)?;
    let l = left_adjoint(n, &pair.levi)?;
    let n_ind = hom_space(n, &ind).len();
    let res_ind = (S::characteristic() != pair.big.system.field.p() as u64).then(|| (hom_space(&res, m).len(), n_ind));
    Ok(AdjunctionReport {
        ind_res: (hom_space(&ind, n).len(), hom_space(m, &res).len()),
        l_ind: (hom_space(&l, m).len(), n_ind),
        res_ind,
    })
}

/// Explicit isomorphism `Ind_𝕄(m) ≅ Coind_{𝕄′}(m ι_𝕄⁻¹ι)`, if one is found.
pub fn ind_coind_twist_iso<S: Scalar>(pair: &LeviPair<S>, conj_pair: &LeviPair<S>, m: &HeckeModule<S>) -> Result<Option<Matrix<S>>> {
    let ind = induct(pair, m)?;
    let twisted = twist_to_conjugate(m, &pair.big, &conj_pair.levi)?;
    let coind = coinduct(conj_pair, &twisted)?;
    Ok(find_isomorphism(&ind, &coind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{Family, FiniteGroup};
    use crate::hecke_core::FiniteHeckeData;
    use crate::hecke_modules::characters;
    use crate::{F2, F3, Q};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn data(fam: Family, n: usize, q: u8) -> FiniteHeckeData {
        FiniteHeckeData::build(Arc::new(FiniteGroup::build(fam, n, q).unwrap())).unwrap()
    }

    #[test]
    fn ranks_gl2_f3() {
        let d = data(Family::GL, 2, 3);
        let h = d.algebra::<F3>();
        let t = d.levi_algebra::<F3>(&BTreeSet::new()).unwrap();
        let pair = LeviPair::new(&h, &t).unwrap();
        for chi in characters(&t) {
            assert_eq!(induct(&pair, &chi).unwrap().rank, 2);
            assert_eq!(coinduct(&pair, &chi).unwrap().rank, 2);
        }
    }

    #[test]
    fn full_levi_is_identity() {
        let d = data(Family::GL, 2, 3);
        let h = d.algebra::<F3>();
        let pair = LeviPair::new(&h, &h).unwrap();
        let s = HeckeModule::sign(h.clone()).unwrap();
        assert_eq!(induct(&pair, &s).unwrap(), s);
        assert_eq!(coinduct(&pair, &s).unwrap(), s);
        assert_eq!(left_adjoint(&s, &h).unwrap(), s);
    }

    #[test]
    fn adjunctions_gl2_f3() {
        let d = data(Family::GL, 2, 3);
        let h = d.algebra::<F3>();
        let t = d.levi_algebra::<F3>(&BTreeSet::new()).unwrap();
        let pair = LeviPair::new(&h, &t).unwrap();
        for m in characters(&t) {
            for n in characters(&h) {
                let r = check_adjunction(&pair, &m, &n).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn ind_coind_twist_gl3_f2() {
        let d = data(Family::GL, 3, 2);
        let h = d.algebra::<F2>();
        let j = BTreeSet::from([1]);
        let m = d.levi_algebra::<F2>(&j).unwrap();
        let jc = h.system.datum.conjugate_levi(&h.system.datum.longest(), &j).unwrap();
        let mc = d.levi_algebra::<F2>(&jc).unwrap();
        let (p, pc) = (LeviPair::new(&h, &m).unwrap(), LeviPair::new(&h, &mc).unwrap());
        let triv = HeckeModule::triv(m).unwrap();
        assert!(ind_coind_twist_iso(&p, &pc, &triv).unwrap().is_some());
    }

    #[test]
    fn char_zero_frobenius_pair() {
        let d = data(Family::GL, 2, 3);
        let h = d.algebra::<Q>();
        let t = d.levi_algebra::<Q>(&BTreeSet::new()).unwrap();
        let pair = LeviPair::new(&h, &t).unwrap();
        let m = characters(&t).remove(0);
        let ind = induct(&pair, &m).unwrap();
        let coind = coinduct(&pair, &m).unwrap();
        assert!(find_isomorphism(&ind, &coind).is_some());
        let n = HeckeModule::triv(h.clone()).unwrap();
        let l = left_adjoint(&n, &t).unwrap();
        assert!(find_isomorphism(&l, &restrict(&n, &t).unwrap()).is_some());
    }
}
