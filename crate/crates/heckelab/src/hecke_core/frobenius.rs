//! Frobenius forms `δ`, `δ′`, the automorphism `ι`, and the bimodule isomorphism
//! `Hom_{H_𝕄}(H, H_𝕄) ≅ H ι⁻¹ι_𝕄`.

use serde::{Deserialize, Serialize};

use super::{HeckeAlgebra, HeckeElement, WeylSystem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// `δ` picks the coefficient of `τ_ñ`; `ι(τ_n) = τ_{ñnñ⁻¹}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub lift: Monomial,
}

/// Lift of the longest element of `W_J` along its lexicographically smallest reduced word.
pub fn longest_lift(sys: &WeylSystem) -> Monomial {
    let w = sys.datum.elements().into_iter().filter(|w| sys.levi.contains(w)).max_by_key(|w| w.length()).unwrap();
    sys.lift_of_word(&sys.datum.reduced_word(&w))
}

impl FrobeniusData {
    pub fn new(sys: &WeylSystem) -> Self {
        FrobeniusData { lift: longest_lift(sys) }
    }

    pub fn with_lift(lift: Monomial) -> Self {
        FrobeniusData { lift }
    }

    pub fn delta<S: Scalar>(&self, x: &HeckeElement<S>) -> S {
        x.coeff(&self.lift)
    }

    pub fn iota_index(&self, n: &Monomial) -> Monomial {
        n.conj(&self.lift)
    }

    pub fn iota_inv_index(&self, n: &Monomial) -> Monomial {
        n.conj(&self.lift.inverse())
    }

    pub fn iota<S: Scalar>(&self, x: &HeckeElement<S>) -> HeckeElement<S> {
        x.map_indices(|n| self.iota_index(n))
    }

    pub fn iota_inv<S: Scalar>(&self, x: &HeckeElement<S>) -> HeckeElement<S> {
        x.map_indices(|n| self.iota_inv_index(n))
    }
}

/// `δ′`: the coefficient of `τ₁`.
pub fn delta_prime<S: Scalar>(x: &HeckeElement<S>) -> S {
    x.terms().iter().find(|(w, _)| w.is_identity()).map(|(_, c)| c.clone()).unwrap_or_else(S::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub delta_of_lift_is_one: bool,
    /// `δ(ab) = δ(ι(b)a)` for all basis pairs.
    pub twisted_trace: bool,
    pub gram_invertible: bool,
    pub iota_involution: bool,
    pub iota_multiplicative: bool,
    /// `δ′(ab) = δ′(ba)` with invertible Gram matrix, checked when the characteristic is not `p`.
    pub symmetric_trace: Option<bool>,
    pub symmetric_gram_invertible: Option<bool>,
    pub pairs_checked: usize,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.delta_of_lift_is_one
            && self.twisted_trace
            && self.gram_invertible
            && self.iota_involution
            && self.iota_multiplicative
            && self.symmetric_trace.unwrap_or(true)
            && self.symmetric_gram_invertible.unwrap_or(true)
    }
}

fn gram<S: Scalar>(alg: &HeckeAlgebra<S>, basis: &[Monomial], form: impl Fn(&HeckeElement<S>) -> S) -> Matrix<S> {
    let rows: Vec<Vec<S>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| form(&alg.mul(&HeckeElement::basis(*a), &HeckeElement::basis(*b)))).collect())
        .collect();
    Matrix::from_rows(&rows, basis.len())
}

pub fn check_frobenius<S: Scalar>(alg: &HeckeAlgebra<S>, fd: &FrobeniusData) -> Result<FrobeniusReport> {
    let basis = alg.finite_basis()?;
    let sys = &alg.system;
    let mut twisted = true;
    let mut mult = true;
    for a in &basis {
        for b in &basis {
            let (ta, tb) = (HeckeElement::basis(*a), HeckeElement::basis(*b));
            let ab = alg.mul(&ta, &tb);
            if fd.delta(&ab) != fd.delta(&alg.mul(&fd.iota(&tb), &ta)) {
                twisted = false;
            }
            if fd.iota(&ab) != alg.mul(&fd.iota(&ta), &fd.iota(&tb)) {
                mult = false;
            }
        }
    }
    let involution = basis.iter().all(|n| fd.iota_index(&fd.iota_index(n)) == *n);
    let g = gram(alg, &basis, |x| fd.delta(x));
    let char_ne_p = S::characteristic() != sys.field.p() as u64;
    let (sym, sym_gram) = if char_ne_p {
        let sym = basis.iter().all(|a| {
            basis.iter().all(|b| {
                let (ta, tb) = (HeckeElement::basis(*a), HeckeElement::basis(*b));
                delta_prime(&alg.mul(&ta, &tb)) == delta_prime(&alg.mul(&tb, &ta))
            })
        });
        (Some(sym), Some(gram(alg, &basis, delta_prime).is_invertible()))
    } else {
        (None, None)
    };
    Ok(FrobeniusReport {
        delta_of_lift_is_one: fd.delta(&HeckeElement::<S>::basis(fd.lift)) == S::one() && sys.contains(&fd.lift),
        twisted_trace: twisted,
        gram_invertible: g.is_invertible(),
        iota_involution: involution,
        iota_multiplicative: mult,
        symmetric_trace: sym,
        symmetric_gram_invertible: sym_gram,
        pairs_checked: basis.len() * basis.len(),
    })
}

/// Left `H_𝕄`-linear maps `H → H_𝕄`, stored by their values on `τ_{n_d}`, `d ∈ ^M W`.
pub struct LeviHom<'a, S: Scalar> {
    pub big: &'a HeckeAlgebra<S>,
    pub levi: &'a HeckeAlgebra<S>,
    pub reps: Vec<Monomial>,
    levi_basis: Vec<Monomial>,
}

impl<'a, S: Scalar> LeviHom<'a, S> {
    pub fn new(big: &'a HeckeAlgebra<S>, levi: &'a HeckeAlgebra<S>) -> Result<Self> {
        let datum = &big.system.datum;
        let reps = datum
            .min_coset_reps(&levi.system.levi.j)
            .iter()
            .map(|d| big.system.lift_of_word(&datum.reduced_word(d)))
            .collect();
        Ok(LeviHom { big, levi, reps, levi_basis: levi.finite_basis()? })
    }

    /// Writes `y = m·n_d` with `m ∈ 𝒩_𝕄`.
    pub fn split(&self, y: &Monomial) -> Result<(Monomial, usize)> {
        let datum = &self.big.system.datum;
        let (_, d) = datum.split_left(&self.levi.system.levi.j, &y.weyl());
        let i = self
            .reps
            .iter()
            .position(|r| r.weyl() == d)
            .ok_or_else(|| Error::Internal(format!("no coset representative for {y}")))?;
        let m = y.mul(&self.reps[i].inverse());
        if !self.levi.system.contains(&m) {
            return Err(Error::Internal(format!("{m} is not in the Levi")));
        }
        Ok((m, i))
    }

    /// `f(x)` from the values `f(τ_{n_d})`.
    pub fn eval(&self, f: &[HeckeElement<S>], x: &HeckeElement<S>) -> Result<HeckeElement<S>> {
        let mut out = HeckeElement::zero();
        for (y, c) in x.terms() {
            let (m, i) = self.split(y)?;
            out = out.add(&self.levi.mul(&HeckeElement::basis(m), &f[i]).scale(c));
        }
        Ok(out)
    }

    /// `(h·f)(x) = f(xh)`.
    pub fn act_left(&self, h: &HeckeElement<S>, f: &[HeckeElement<S>]) -> Result<Vec<HeckeElement<S>>> {
        self.reps.iter().map(|r| self.eval(f, &self.big.mul(&HeckeElement::basis(*r), h))).collect()
    }

    /// `(f·m)(x) = f(x)m`.
    pub fn act_right(&self, f: &[HeckeElement<S>], m: &HeckeElement<S>) -> Vec<HeckeElement<S>> {
        f.iter().map(|v| self.levi.mul(v, m)).collect()
    }

    pub fn coords(&self, f: &[HeckeElement<S>]) -> Result<Vec<S>> {
        let mut v = Vec::new();
        for x in f {
            v.extend(self.levi.coordinates(x, &self.levi_basis)?);
        }
        Ok(v)
    }

    /// The map `h ↦ Ψ_h` with `form_M(m′·Ψ_h(x)) = form(m′·x·h)` for all `m′ ∈ H_𝕄`.
    pub fn psi(
        &self,
        h: &HeckeElement<S>,
        form: &dyn Fn(&HeckeElement<S>) -> S,
        form_m: &dyn Fn(&HeckeElement<S>) -> S,
    ) -> Result<Vec<HeckeElement<S>>> {
        let lb = &self.levi_basis;
        let g = gram(self.levi, lb, form_m);
        let mut out = Vec::new();
        for r in &self.reps {
            let xh = self.big.mul(&HeckeElement::basis(*r), h);
            let rhs: Vec<S> = lb.iter().map(|m| form(&self.big.mul(&HeckeElement::basis(*m), &xh))).collect();
            let sol = g.solve(&rhs).ok_or_else(|| Error::Internal("Levi Gram matrix is singular".into()))?;
            out.push(self.levi.from_coordinates(&sol, lb));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleReport {
    pub bijective: bool,
    pub left_equivariant: bool,
    pub right_equivariant: bool,
}

impl BimoduleReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.left_equivariant && self.right_equivariant
    }
}

fn check_psi<S: Scalar>(
    hom: &LeviHom<S>,
    form: &dyn Fn(&HeckeElement<S>) -> S,
    form_m: &dyn Fn(&HeckeElement<S>) -> S,
    twist: &dyn Fn(&Monomial) -> Monomial,
) -> Result<BimoduleReport> {
    let basis = hom.big.finite_basis()?;
    let lb = hom.levi.finite_basis()?;
    let images: Vec<Vec<HeckeElement<S>>> =
        basis.iter().map(|h| hom.psi(&HeckeElement::basis(*h), form, form_m)).collect::<Result<_>>()?;
    let rows: Vec<Vec<S>> = images.iter().map(|f| hom.coords(f)).collect::<Result<_>>()?;
    let bijective = Matrix::from_rows(&rows, basis.len()).rank() == basis.len();
    let psi_of = |x: &HeckeElement<S>| -> Result<Vec<S>> {
        let mut v = vec![S::zero(); basis.len()];
        for (w, c) in x.terms() {
            let i = basis.binary_search(w).map_err(|_| Error::Internal(format!("{w} outside basis")))?;
            for (k, e) in rows[i].iter().enumerate() {
                v[k] = v[k].clone() + c.clone() * e.clone();
            }
        }
        Ok(v)
    };
    let mut left = true;
    let mut right = true;
    for (i, h) in basis.iter().enumerate() {
        let th = HeckeElement::basis(*h);
        for g in &basis {
            let tg = HeckeElement::basis(*g);
            let lhs = hom.coords(&hom.act_left(&tg, &images[i])?)?;
            if lhs != psi_of(&hom.big.mul(&tg, &th))? {
                left = false;
            }
        }
        for m in &lb {
            let tm = HeckeElement::basis(*m);
            let lhs = hom.coords(&hom.act_right(&images[i], &tm))?;
            let twisted = HeckeElement::basis(twist(m));
            if lhs != psi_of(&hom.big.mul(&th, &twisted))? {
                right = false;
            }
        }
    }
    Ok(BimoduleReport { bijective, left_equivariant: left, right_equivariant: right })
}

/// `Hom_{H_𝕄}(H, H_𝕄) ≅ H ι⁻¹ι_𝕄` through the map defined by `δ` and `δ_𝕄`.
pub fn check_bimodule_twisted<S: Scalar>(big: &HeckeAlgebra<S>, levi: &HeckeAlgebra<S>) -> Result<BimoduleReport> {
    let hom = LeviHom::new(big, levi)?;
    let fd = FrobeniusData::new(&big.system);
    let fm = FrobeniusData::new(&levi.system);
    let twist = |m: &Monomial| fd.iota_inv_index(&fm.iota_index(m));
    check_psi(&hom, &|x| fd.delta(x), &|x| fm.delta(x), &twist)
}

/// `Hom_{H_𝕄}(H, H_𝕄) ≅ H` untwisted, through the symmetric form `δ′` (characteristic not `p`).
pub fn check_bimodule_untwisted<S: Scalar>(big: &HeckeAlgebra<S>, levi: &HeckeAlgebra<S>) -> Result<BimoduleReport> {
    if S::characteristic() == big.system.field.p() as u64 {
        return Err(Error::Precondition("the untwisted isomorphism needs characteristic different from p".into()));
    }
    let hom = LeviHom::new(big, levi)?;
    check_psi(&hom, &delta_prime, &delta_prime, &|m| *m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{Family, FiniteGroup};
    use crate::hecke_core::FiniteHeckeData;
    use crate::{F2, F3, Q};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn data(fam: Family, n: usize, q: u8) -> FiniteHeckeData {
        FiniteHeckeData::build(Arc::new(FiniteGroup::build(fam, n, q).unwrap())).unwrap()
    }

    #[test]
    fn frobenius_gl2_f3() {
        let d = data(Family::GL, 2, 3);
        let h = d.algebra::<F3>();
        let r = check_frobenius(&h, &FrobeniusData::new(&h.system)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.pairs_checked, 64);
        assert_eq!(r.symmetric_trace, None);
        let hq = d.algebra::<Q>();
        let r = check_frobenius(&hq, &FrobeniusData::new(&hq.system)).unwrap();
        assert_eq!(r.symmetric_trace, Some(true));
        assert!(r.passed());
    }

    #[test]
    fn frobenius_gl3_f2() {
        let d = data(Family::GL, 3, 2);
        let h = d.algebra::<F2>();
        assert!(check_frobenius(&h, &FrobeniusData::new(&h.system)).unwrap().passed());
    }

    #[test]
    fn bimodule_gl2_f3() {
        let d = data(Family::GL, 2, 3);
        let (h, t) = (d.algebra::<F3>(), d.levi_algebra::<F3>(&BTreeSet::new()).unwrap());
        assert!(check_bimodule_twisted(&h, &t).unwrap().passed());
        let (h, t) = (d.algebra::<Q>(), d.levi_algebra::<Q>(&BTreeSet::new()).unwrap());
        assert!(check_bimodule_twisted(&h, &t).unwrap().passed());
        assert!(check_bimodule_untwisted(&h, &t).unwrap().passed());
    }

    #[test]
    fn untwisted_rejected_in_char_p() {
        let d = data(Family::GL, 2, 2);
        let (h, t) = (d.algebra::<F2>(), d.levi_algebra::<F2>(&BTreeSet::new()).unwrap());
        assert!(check_bimodule_untwisted(&h, &t).is_err());
    }
}
