//! Parabolic induction `Ind = − ⊗_{𝓗_{M⁺},θ} 𝓗`, coinduction
//! `Coind = Hom_{𝓗_{M⁻},θ*}(𝓗, −)`, their adjoints `L ⊣ Ind ⊣ R` through Fitting
//! localization, and the sequence `0 → Triv → Ind(Triv_T) → Sign → 0`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::theta::{AffineLevi, ThetaMode};
use super::{to_star_coords, AffineSetting};
use crate::error::{Error, Result};
use crate::finite_group::{Family, FiniteGroup};
use crate::hecke_core::{FiniteHeckeData, HeckeAlgebra, HeckeElement};
use crate::hecke_modules::functors::{self as finite, twist_to_conjugate, LeviPair};
use crate::hecke_modules::{find_isomorphism, hom_space, HeckeModule};
use crate::linalg::{coordinates, span_basis, Matrix};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

const MAX_SHIFT: u32 = 32;

fn big_generators<S: Scalar>(al: &AffineLevi<S>) -> Vec<Monomial> {
    let sys = &al.big().system;
    sys.simples.iter().map(|s| s.lift).chain(sys.zero_gens.iter().map(|g| g.element)).collect()
}

fn from_generators<S: Scalar>(al: &AffineLevi<S>, rank: usize, mats: Vec<Matrix<S>>) -> Result<HeckeModule<S>> {
    let mut mats = mats;
    let z = mats.split_off(al.big().system.simples.len());
    HeckeModule::with_rank(al.big().clone(), rank, mats, z)
}

/// `Ind(m)` on the basis `v ⊗ τ_{n_d}`, `d ∈ ^M W`. A product `τ_{n_d}τ_g` is multiplied by
/// `θ(τ^M_μ)^N` until every term is `τ_{m n_{d′}}` with `m ∈ M⁺` and lengths adding.
pub fn induct<S: Scalar>(al: &AffineLevi<S>, m: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    let (big, pair) = (al.big(), &al.pair);
    let r = m.rank;
    let k = pair.left_reps.len();
    let a_mu = m.action_basis(&al.mu)?;
    let a_mu_inv = a_mu.inverse().ok_or_else(|| Error::Internal("τ^M_μ acts singularly".into()))?;
    let mut mats = Vec::new();
    for g in big_generators(al) {
        let mut a = Matrix::zeros(r * k, r * k);
        for (d, nd) in pair.left_reps.iter().enumerate() {
            let x = big.mul(&HeckeElement::basis(*nd), &HeckeElement::basis(g));
            let mut shift = 0u32;
            let blocks = loop {
                let y = big.mul(&HeckeElement::basis(al.mu.pow(shift as i64)), &x);
                if let Some(b) = positive_blocks(al, &y)? {
                    break b;
                }
                shift += 1;
                if shift > MAX_SHIFT {
                    return Err(Error::Internal(format!("τ_{{n_d}}τ_g for {g} does not reach M⁺")));
                }
            };
            let back = a_mu_inv.pow(shift as i64).expect("nonnegative power");
            for (mm, d2, c) in blocks {
                a.add_block(d * r, d2 * r, &back.mul(&m.action_basis(&mm)?).scale(&c));
            }
        }
        mats.push(a);
    }
    from_generators(al, r * k, mats)
}

/// Terms `c τ_{m n_{d′}}` with `m ∈ M⁺` and `ℓ(m n_{d′}) = ℓ(m) + ℓ(n_{d′})`, or `None`.
fn positive_blocks<S: Scalar>(al: &AffineLevi<S>, y: &HeckeElement<S>) -> Result<Option<Vec<(Monomial, usize, S)>>> {
    let big = al.big();
    let mut out = Vec::new();
    for (z, c) in y.terms() {
        let (mm, d2) = al.pair.split_left(z)?;
        if !al.is_positive(&mm)? || big.length(z) != big.length(&mm) + big.length(&al.pair.left_reps[d2]) {
            return Ok(None);
        }
        out.push((mm, d2, c.clone()));
    }
    Ok(Some(out))
}

/// `Coind(m)` on the coordinates `f(τ*_{n_e})`, `e ∈ W^M`. A product `τ_gτ*_{n_e}` is
/// multiplied on the right by `θ*(τ^{M,*}_{μ⁻¹})^N` until it is a combination of
/// `τ*_{n_{e′}m}` with `m ∈ M⁻` and lengths adding.
pub fn coinduct<S: Scalar>(al: &AffineLevi<S>, m: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    let (big, levi, pair) = (al.big(), al.levi(), &al.pair);
    let r = m.rank;
    let k = pair.right_reps.len();
    let b = al.mu.inverse();
    let b_inv = m.action_basis(&b)?.inverse().ok_or_else(|| Error::Internal("τ^M_{μ⁻¹} acts singularly".into()))?;
    let mut mats = Vec::new();
    for g in big_generators(al) {
        let mut a = Matrix::zeros(r * k, r * k);
        for (e, ne) in pair.right_reps.iter().enumerate() {
            let x = big.mul(&HeckeElement::basis(g), &big.star(ne));
            let mut shift = 0u32;
            let blocks = loop {
                let y = to_star_coords(big, &big.mul(&x, &big.star(&b.pow(shift as i64))));
                if let Some(bl) = negative_blocks(al, &y)? {
                    break bl;
                }
                shift += 1;
                if shift > MAX_SHIFT {
                    return Err(Error::Internal(format!("τ_gτ*_{{n_e}} for {g} does not reach M⁻")));
                }
            };
            let back = b_inv.pow(shift as i64).expect("nonnegative power");
            for (e2, mm, c) in blocks {
                a.add_block(e2 * r, e * r, &m.action(&levi.star(&mm))?.mul(&back).scale(&c));
            }
        }
        mats.push(a);
    }
    from_generators(al, r * k, mats)
}

fn negative_blocks<S: Scalar>(al: &AffineLevi<S>, y: &HeckeElement<S>) -> Result<Option<Vec<(usize, Monomial, S)>>> {
    let big = al.big();
    let mut out = Vec::new();
    for (z, c) in y.terms() {
        let (e2, mm) = al.pair.split_right(z)?;
        if !al.is_negative(&mm)? || big.length(z) != big.length(&mm) + big.length(&al.pair.right_reps[e2]) {
            return Ok(None);
        }
        out.push((e2, mm, c.clone()));
    }
    Ok(Some(out))
}

/// Rows spanning `V·T^r`, the component of `V` on which `T` is invertible.
pub fn fitting_image<S: Scalar>(t: &Matrix<S>) -> Vec<Vec<S>> {
    let r = t.rows();
    span_basis(&t.pow(r as i64).expect("nonnegative power").row_vecs(), r)
}

fn restrict_to<S: Scalar>(basis: &[Vec<S>], a: &Matrix<S>) -> Result<Matrix<S>> {
    let rows = basis
        .iter()
        .map(|v| coordinates(basis, &a.left_apply(v)).ok_or_else(|| Error::Internal("Fitting component is not stable".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(&rows, basis.len()))
}

/// Localization of `n` at `θ(τ^M_μ)` (plain) or `θ*(τ^{M,*}_μ)` (star) as an `𝓗_M`-module.
fn localize<S: Scalar>(al: &AffineLevi<S>, n: &HeckeModule<S>, mode: ThetaMode) -> Result<HeckeModule<S>> {
    let (big, levi) = (al.big(), al.levi());
    let op = |z: &Monomial| -> Result<Matrix<S>> {
        match mode {
            ThetaMode::Plain => n.action_basis(z),
            ThetaMode::Star => n.action(&big.star(z)),
        }
    };
    let basis = fitting_image(&op(&al.mu)?);
    if basis.is_empty() {
        return Ok(HeckeModule::zero(levi.clone()));
    }
    let t_inv = restrict_to(&basis, &op(&al.mu)?)?.inverse().ok_or_else(|| Error::Internal("singular Fitting component".into()))?;
    let act = |y: &Monomial| -> Result<Matrix<S>> {
        let mut z = *y;
        let mut e = 0i64;
        while !al.is_positive(&z)? {
            z = al.mu.mul(&z);
            e += 1;
            if e > MAX_SHIFT as i64 {
                return Err(Error::Internal(format!("{y} does not reach M⁺")));
            }
        }
        Ok(t_inv.pow(e).expect("nonnegative power").mul(&restrict_to(&basis, &op(&z)?)?))
    };
    let gen = |x: &Monomial| -> Result<Matrix<S>> {
        match mode {
            ThetaMode::Plain => act(x),
            ThetaMode::Star => {
                let mut acc = Matrix::zeros(basis.len(), basis.len());
                for (y, c) in to_star_coords(levi, &HeckeElement::basis(*x)).terms() {
                    acc.add_scaled(&act(y)?, c);
                }
                Ok(acc)
            }
        }
    };
    let sys = &levi.system;
    let s = sys.simples.iter().map(|x| gen(&x.lift)).collect::<Result<_>>()?;
    let z = sys.zero_gens.iter().map(|x| gen(&x.element)).collect::<Result<_>>()?;
    HeckeModule::with_rank(levi.clone(), basis.len(), s, z)
}

/// `R(n)`: the Fitting-invertible part of `θ(τ^M_μ)` with `𝓗_M` acting through `θ`.
pub fn right_adjoint<S: Scalar>(al: &AffineLevi<S>, n: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    localize(al, n, ThetaMode::Plain)
}

/// `L(n)`: the Fitting-invertible part of `θ*(τ^{M,*}_μ)` with `𝓗_M` acting through `θ*`.
pub fn left_adjoint<S: Scalar>(al: &AffineLevi<S>, n: &HeckeModule<S>) -> Result<HeckeModule<S>> {
    localize(al, n, ThetaMode::Star)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineAdjunctionReport {
    /// `dim Hom_𝓗(Ind m, n)` and `dim Hom_{𝓗_M}(m, R n)`.
    pub ind_r: (usize, usize),
    /// `dim Hom_{𝓗_M}(L n, m)` and `dim Hom_𝓗(n, Ind m)`.
    pub l_ind: (usize, usize),
}

impl AffineAdjunctionReport {
    pub fn passed(&self) -> bool {
        self.ind_r.0 == self.ind_r.1 && self.l_ind.0 == self.l_ind.1
    }
}

pub fn check_affine_adjunction<S: Scalar>(al: &AffineLevi<S>, m: &HeckeModule<S>, n: &HeckeModule<S>) -> Result<AffineAdjunctionReport> {
    let ind = induct(al, m)?;
    let r = right_adjoint(al, n)?;
    let l = left_adjoint(al, n)?;
    Ok(AffineAdjunctionReport {
        ind_r: (hom_space(&ind, n).len(), hom_space(m, &r).len()),
        l_ind: (hom_space(&l, m).len(), hom_space(n, &ind).len()),
    })
}

/// `Ind_{𝓗_M}(m)` and `Coind_{𝓗_{M′}}(m ι_M⁻¹ι)` with an explicit isomorphism if one exists.
pub fn ind_coind_twist_iso<S: Scalar>(setting: &AffineSetting, j: &BTreeSet<usize>, m: &HeckeModule<S>) -> Result<Option<Matrix<S>>> {
    let al = AffineLevi::<S>::new(setting, j)?;
    let datum = &al.big().system.datum;
    let jc = datum.conjugate_levi(&datum.longest(), j)?;
    let conj = AffineLevi::<S>::new(setting, &jc)?;
    let ind = induct(&al, m)?;
    let twisted = twist_to_conjugate(m, al.big(), conj.levi())?;
    let coind = coinduct(&conj, &twisted)?;
    Ok(find_isomorphism(&ind, &coind))
}

/// `Triv_{𝓗_T}`: every length-0 generator of `𝓗_T` acts by 1.
pub fn torus_trivial<S: Scalar>(setting: &AffineSetting) -> Result<HeckeModule<S>> {
    let t = setting.levi_algebra::<S>(&BTreeSet::new())?;
    let ones = vec![S::one(); t.system.zero_gens.len()];
    HeckeModule::character(t, &[], &ones)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesReport {
    pub ind_rank: usize,
    /// `Hom(Triv, Ind)` is nonzero.
    pub triv_sub: bool,
    /// The quotient by the image of `Triv` is `Sign`.
    pub sign_quotient: bool,
    /// `Hom(Sign, Ind)` is nonzero, so `Triv ⊕ Sign ≅ Ind`.
    pub split: bool,
}

impl SesReport {
    /// A non-split `0 → Triv → Ind → Sign → 0`.
    pub fn nonsplit(&self) -> bool {
        self.ind_rank == 2 && self.triv_sub && self.sign_quotient && !self.split
    }
}

pub fn build_ses<S: Scalar>(setting: &AffineSetting) -> Result<SesReport> {
    if setting.n != 2 {
        return Err(Error::Precondition("the sequence is built for rank-2 groups".into()));
    }
    let al = AffineLevi::<S>::new(setting, &BTreeSet::new())?;
    let ind = induct(&al, &torus_trivial(setting)?)?;
    ses_report(&ind, al.big())
}

/// The same sequence for the finite Hecke algebra of `G(F_q)`, which is semisimple over `Q`.
pub fn build_finite_ses<S: Scalar>(family: Family, q: u8) -> Result<SesReport> {
    let data = FiniteHeckeData::build(Arc::new(FiniteGroup::build(family, 2, q)?))?;
    let big = data.algebra::<S>();
    let t = data.levi_algebra::<S>(&BTreeSet::new())?;
    let ones = vec![S::one(); t.system.zero_gens.len()];
    let ind = finite::induct(&LeviPair::new(&big, &t)?, &HeckeModule::character(t, &[], &ones)?)?;
    ses_report(&ind, &big)
}

fn ses_report<S: Scalar>(ind: &HeckeModule<S>, big: &HeckeAlgebra<S>) -> Result<SesReport> {
    let triv = HeckeModule::triv(big.clone())?;
    let sign = HeckeModule::sign(big.clone())?;
    let into = hom_space(&triv, ind);
    let sign_quotient = match into.first() {
        Some(f) => {
            let (q, _) = ind.quotient(&f.row_vecs())?;
            find_isomorphism(&q, &sign).is_some()
        }
        None => false,
    };
    let split = hom_space(&sign, ind).iter().any(|f| into.first().is_none_or(|t| span_basis(&[f.row(0).to_vec(), t.row(0).to_vec()], ind.rank).len() == 2));
    Ok(SesReport { ind_rank: ind.rank, triv_sub: !into.is_empty(), sign_quotient, split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::Family;
    use crate::hecke_modules::characters;
    use crate::scalar::{F2, F3, Q};

    fn empty() -> BTreeSet<usize> {
        BTreeSet::new()
    }

    #[test]
    fn induced_ranks() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let al = AffineLevi::<F3>::new(&st, &empty()).unwrap();
        for chi in characters(al.levi()) {
            assert_eq!(induct(&al, &chi).unwrap().rank, 2);
            assert_eq!(coinduct(&al, &chi).unwrap().rank, 2);
        }
        let full = AffineLevi::<F3>::new(&st, &st.full_j()).unwrap();
        let triv = HeckeModule::triv(st.algebra::<F3>().unwrap()).unwrap();
        assert_eq!(induct(&full, &triv).unwrap(), triv);
        assert_eq!(right_adjoint(&full, &triv).unwrap(), triv);
        assert_eq!(left_adjoint(&full, &triv).unwrap(), triv);
    }

    #[test]
    fn gl3_induction_ranks() {
        let st = AffineSetting::new(Family::GL, 3, 2).unwrap();
        for (j, k) in [(vec![], 6), (vec![1], 3), (vec![2], 3)] {
            let j: BTreeSet<usize> = j.into_iter().collect();
            let al = AffineLevi::<F2>::new(&st, &j).unwrap();
            let triv = HeckeModule::triv(al.levi().clone()).unwrap();
            assert_eq!(induct(&al, &triv).unwrap().rank, k);
            assert_eq!(coinduct(&al, &triv).unwrap().rank, k);
        }
    }

    #[test]
    fn adjoint_examples() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let al = AffineLevi::<F3>::new(&st, &empty()).unwrap();
        let triv = HeckeModule::triv(al.big().clone()).unwrap();
        let sign = HeckeModule::sign(al.big().clone()).unwrap();
        assert_eq!(right_adjoint(&al, &triv).unwrap().rank, 0);
        assert_eq!(right_adjoint(&al, &sign).unwrap().rank, 1);
        assert_eq!(left_adjoint(&al, &sign).unwrap().rank, 0);
        assert_eq!(left_adjoint(&al, &triv).unwrap().rank, 1);
        let alq = AffineLevi::<Q>::new(&st, &empty()).unwrap();
        assert_eq!(right_adjoint(&alq, &HeckeModule::triv(alq.big().clone()).unwrap()).unwrap().rank, 1);
    }

    #[test]
    fn adjunctions_on_character_grid() {
        for (fam, q) in [(Family::GL, 2), (Family::SL, 3)] {
            let st = AffineSetting::new(fam, 2, q).unwrap();
            let al = AffineLevi::<F3>::new(&st, &empty()).unwrap();
            let chars_h: Vec<_> = characters(al.big()).into_iter().take(8).collect();
            for m in characters(al.levi()).iter().take(6) {
                for n in &chars_h {
                    let r = check_affine_adjunction(&al, m, n).unwrap();
                    assert!(r.passed(), "{fam} {q}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn mu_independence() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let al = AffineLevi::<F3>::new(&st, &empty()).unwrap();
        let al2 = AffineLevi::<F3>::new(&st, &empty()).unwrap().with_mu(st.mu(&empty()).pow(2)).unwrap();
        for n in characters(al.big()) {
            let (a, b) = (right_adjoint(&al, &n).unwrap(), right_adjoint(&al2, &n).unwrap());
            assert!(find_isomorphism(&a, &b).is_some());
            let (a, b) = (left_adjoint(&al, &n).unwrap(), left_adjoint(&al2, &n).unwrap());
            assert!(find_isomorphism(&a, &b).is_some());
        }
    }

    #[test]
    fn ind_is_twisted_coind() {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let t = st.levi_algebra::<F3>(&empty()).unwrap();
        for m in characters(&t) {
            assert!(ind_coind_twist_iso(&st, &empty(), &m).unwrap().is_some());
        }
        let triv = HeckeModule::triv(st.algebra::<F3>().unwrap()).unwrap();
        assert!(ind_coind_twist_iso(&st, &st.full_j(), &triv).unwrap().is_some());
        let st3 = AffineSetting::new(Family::GL, 3, 2).unwrap();
        let j: BTreeSet<usize> = [1].into_iter().collect();
        let m = HeckeModule::sign(st3.levi_algebra::<F2>(&j).unwrap()).unwrap();
        assert!(ind_coind_twist_iso(&st3, &j, &m).unwrap().is_some());
    }

    #[test]
    fn ses_nonsplit_in_char_p() {
        let sl2 = AffineSetting::new(Family::SL, 2, 3).unwrap();
        let r = build_ses::<F3>(&sl2).unwrap();
        assert!(r.nonsplit(), "{r:?}");
        let gl2 = AffineSetting::new(Family::GL, 2, 2).unwrap();
        let r = build_ses::<F2>(&gl2).unwrap();
        assert!(r.nonsplit(), "{r:?}");
        for st in [&sl2, &gl2] {
            let r = build_ses::<Q>(st).unwrap();
            assert!(r.triv_sub && !r.split, "{r:?}");
        }
        for (fam, q) in [(Family::SL, 3), (Family::GL, 2)] {
            let r = build_finite_ses::<Q>(fam, q).unwrap();
            assert!(r.triv_sub && r.sign_quotient && r.split, "{r:?}");
        }
    }
}
