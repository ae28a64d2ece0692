//! The embeddings `θ`, `θ*` of the monoid algebras `𝓗_{M^±}` into `𝓗`, their extensions
//! to `𝓗_M` when `q` is invertible, and the modulus `δ_P`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{star_inverse, tau_inverse, to_star_coords, AffineSetting};
use crate::error::{Error, Result};
use crate::hecke_core::{HeckeAlgebra, HeckeElement};
use crate::hecke_modules::functors::LeviPair;
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// `𝓗 ⊇ θ(𝓗_{M⁺})` for a standard Levi, with coset lifts and the central element `μ`.
pub struct AffineLevi<S: Scalar> {
    pub pair: LeviPair<S>,
    pub mu: Monomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaMode {
    Plain,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extension {
    Plus,
    Minus,
    StarPlus,
    StarMinus,
}

impl<S: Scalar> AffineLevi<S> {
    pub fn new(setting: &AffineSetting, j: &BTreeSet<usize>) -> Result<Self> {
        let big = setting.algebra::<S>()?;
        let levi = setting.levi_algebra::<S>(j)?;
        Ok(AffineLevi { pair: LeviPair::new(&big, &levi)?, mu: setting.mu(j) })
    }

    pub fn with_mu(mut self, mu: Monomial) -> Result<Self> {
        if !self.is_strictly_positive_central(&mu) {
            return Err(Error::Precondition(format!("{mu} is not a strictly positive central translation")));
        }
        self.mu = mu;
        Ok(self)
    }

    pub fn big(&self) -> &HeckeAlgebra<S> {
        &self.pair.big
    }

    pub fn levi(&self) -> &HeckeAlgebra<S> {
        &self.pair.levi
    }

    fn outside_roots(&self) -> Vec<Vec<i64>> {
        let datum = &self.big().system.datum;
        let inside = self.levi().system.levi.positive_roots(datum);
        datum.positive_roots.iter().filter(|r| !inside.contains(r)).cloned().collect()
    }

    fn is_strictly_positive_central(&self, mu: &Monomial) -> bool {
        let lvl = &self.levi().system.levi;
        let central = mu.is_translation()
            && mu.ulog().iter().all(|&u| u == 0)
            && (0..mu.n()).all(|i| (0..mu.n()).all(|k| !lvl.same_block(i, k) || mu.val()[i] == mu.val()[k]));
        let lam: Vec<i64> = mu.val().iter().map(|&x| x as i64).collect();
        central && self.levi().system.contains(mu) && self.outside_roots().iter().all(|r| dot(&lam, r) > 0)
    }

    pub fn is_positive(&self, m: &Monomial) -> Result<bool> {
        m.affine_weyl().is_levi_positive(&self.big().system.datum, &self.levi().system.levi)
    }

    pub fn is_negative(&self, m: &Monomial) -> Result<bool> {
        m.affine_weyl().is_levi_negative(&self.big().system.datum, &self.levi().system.levi)
    }

    fn check_levi(&self, m: &Monomial) -> Result<()> {
        if !self.levi().system.contains(m) {
            return Err(Error::Domain(format!("{m} is not in W_M(1) of {}", self.levi().system.id())));
        }
        Ok(())
    }

    /// `θ(τ^M_m) = τ_m` or `θ*(τ^{M,*}_m) = τ*_m` on `M⁺ ∪ M⁻`.
    pub fn theta(&self, m: &Monomial, mode: ThetaMode) -> Result<HeckeElement<S>> {
        self.check_levi(m)?;
        if !self.is_positive(m)? && !self.is_negative(m)? {
            return Err(Error::Domain(format!("{m} is neither M-positive nor M-negative")));
        }
        Ok(match mode {
            ThetaMode::Plain => HeckeElement::basis(*m),
            ThetaMode::Star => self.big().star(m),
        })
    }

    /// Linear extension of `θ` to `𝓗_{M^±}` given in the `τ^M` basis (plain) or the
    /// `τ^{M,*}` basis (star).
    pub fn theta_of(&self, x: &HeckeElement<S>, mode: ThetaMode) -> Result<HeckeElement<S>> {
        let mut out = HeckeElement::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.theta(m, mode)?.scale(c));
        }
        Ok(out)
    }

    /// `θ^±`, `θ^{*±}` applied to `x ∈ 𝓗_M` in the `τ^M` basis, with `a = μ`.
    pub fn theta_ext(&self, x: &HeckeElement<S>, ext: Extension) -> Result<HeckeElement<S>> {
        self.theta_ext_with(x, ext, &self.mu, 0)
    }

    /// The extension formula with a chosen strictly positive central `a` and `extra` added to
    /// the minimal exponent.
    pub fn theta_ext_with(&self, x: &HeckeElement<S>, ext: Extension, a: &Monomial, extra: u32) -> Result<HeckeElement<S>> {
        if S::from_i64(self.big().system.q).inverse().is_none() {
            return Err(Error::Precondition(format!("extensions of θ need q invertible in {}", S::descriptor())));
        }
        if !self.is_strictly_positive_central(a) {
            return Err(Error::Precondition(format!("{a} is not a strictly positive central translation")));
        }
        let big = self.big();
        let (base, star, positive) = match ext {
            Extension::Plus => (*a, false, true),
            Extension::Minus => (a.inverse(), false, false),
            Extension::StarPlus => (*a, true, true),
            Extension::StarMinus => (a.inverse(), true, false),
        };
        let coords = if star { to_star_coords(self.levi(), x) } else { x.clone() };
        let inv = if star { star_inverse(big, &base)? } else { tau_inverse(big, &base)? };
        let mut out = HeckeElement::zero();
        for (m, c) in coords.terms() {
            self.check_levi(m)?;
            let mut n = 0u32;
            let mut shifted = *m;
            loop {
                let ok = if positive { self.is_positive(&shifted)? } else { self.is_negative(&shifted)? };
                if ok {
                    break;
                }
                n += 1;
                shifted = base.mul(&shifted);
                if n > 64 {
                    return Err(Error::Internal(format!("no power of {base} moves {m} into the monoid")));
                }
            }
            for _ in 0..extra {
                n += 1;
                shifted = base.mul(&shifted);
            }
            let mut term = if star { big.star(&shifted) } else { HeckeElement::basis(shifted) };
            for _ in 0..n {
                term = big.mul(&inv, &term);
            }
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }

    /// Exponent `e` with `δ_P(m) = q^e`: `e = −Σ_{α ∈ Σ⁺ − Σ_M⁺} ⟨λ, α⟩`.
    pub fn delta_exponent(&self, m: &Monomial) -> Result<i64> {
        self.check_levi(m)?;
        let lam: Vec<i64> = m.val().iter().map(|&x| x as i64).collect();
        Ok(-self.outside_roots().iter().map(|r| dot(&lam, r)).sum::<i64>())
    }

    pub fn delta_p(&self, m: &Monomial) -> Result<S> {
        let e = self.delta_exponent(m)?;
        S::from_i64(self.big().system.q)
            .pow_i(e)
            .ok_or_else(|| Error::Precondition(format!("δ_P({m}) = q^{e} needs q invertible in {}", S::descriptor())))
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `θ^{*+}(τ^M_m)` against `θ⁻(τ^M_m)·δ_P(m)` and against `θ⁻(τ^M_m)·δ_P(m)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCompareRow {
    pub m: String,
    pub delta_exponent: i64,
    pub with_delta: bool,
    pub with_delta_inverse: bool,
}

pub fn check_theta_compare<S: Scalar>(levi: &AffineLevi<S>, samples: &[Monomial]) -> Result<Vec<ThetaCompareRow>> {
    samples
        .iter()
        .map(|m| {
            let x = HeckeElement::basis(*m);
            let lhs = levi.theta_ext(&x, Extension::StarPlus)?;
            let minus = levi.theta_ext(&x, Extension::Minus)?;
            let d = levi.delta_p(m)?;
            let d_inv = d.inverse().expect("powers of q are invertible here");
            Ok(ThetaCompareRow {
                m: m.to_string(),
                delta_exponent: levi.delta_exponent(m)?,
                with_delta: lhs == minus.scale(&d),
                with_delta_inverse: lhs == minus.scale(&d_inv),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::finite_group::Family;
    use crate::scalar::{F3, Q};

    fn gl2() -> (AffineSetting, AffineLevi<Q>) {
        let st = AffineSetting::new(Family::GL, 2, 3).unwrap();
        let l = AffineLevi::new(&st, &BTreeSet::new()).unwrap();
        (st, l)
    }

    fn t(a: i64, b: i64) -> Monomial {
        Monomial::translation(&[a, b], 2)
    }

    #[test]
    fn theta_on_monoids() {
        let (_, l) = gl2();
        assert_eq!(l.theta(&t(1, 0), ThetaMode::Plain).unwrap(), HeckeElement::basis(t(1, 0)));
        assert!(l.is_positive(&t(1, 0)).unwrap() && !l.is_negative(&t(1, 0)).unwrap());
        assert!(l.is_negative(&t(0, 1)).unwrap());
        assert_eq!(l.theta_ext(&HeckeElement::basis(t(0, 1)), Extension::Minus).unwrap(), HeckeElement::basis(t(0, 1)));
        let plus = l.theta_ext(&HeckeElement::basis(t(0, 1)), Extension::Plus).unwrap();
        let want = l.big().mul(&tau_inverse(l.big(), &t(1, 0)).unwrap(), &HeckeElement::basis(t(1, 1)));
        assert_eq!(plus, want);
        let st3 = AffineSetting::new(Family::GL, 3, 2).unwrap();
        let l3 = AffineLevi::<Q>::new(&st3, &BTreeSet::new()).unwrap();
        let mixed = Monomial::translation(&[1, -1, 1], 1);
        assert!(matches!(l3.theta(&mixed, ThetaMode::Plain), Err(Error::Domain(_))));
        let lp = AffineLevi::<F3>::new(&AffineSetting::new(Family::GL, 2, 3).unwrap(), &BTreeSet::new()).unwrap();
        assert!(matches!(lp.theta_ext(&HeckeElement::basis(t(0, 1)), Extension::Plus), Err(Error::Precondition(_))));
    }

    #[test]
    fn monoid_products_are_preserved() {
        let (_, l) = gl2();
        let levi = l.levi().clone();
        for mode in [ThetaMode::Plain, ThetaMode::Star] {
            for (a, b) in [(t(1, 0), t(2, -1)), (t(0, 1), t(-1, 2))] {
                let (xa, xb) = (HeckeElement::basis(a), HeckeElement::basis(b));
                let prod = levi.mul(&xa, &xb);
                let lhs = l.big().mul(&l.theta_of(&xa, mode).unwrap(), &l.theta_of(&xb, mode).unwrap());
                assert_eq!(lhs, l.theta_of(&prod, mode).unwrap());
            }
        }
    }

    #[test]
    fn extensions_are_multiplicative_and_independent() {
        let (_, l) = gl2();
        let levi = l.levi().clone();
        let u = Monomial::unit(&[1, 0], 2);
        let samples = [t(0, 1), t(1, 0), t(-1, 2), t(1, 1).mul(&u)];
        let mu2 = l.mu.pow(2);
        for ext in [Extension::Plus, Extension::Minus, Extension::StarPlus, Extension::StarMinus] {
            for a in &samples {
                let x = HeckeElement::basis(*a);
                let base = l.theta_ext(&x, ext).unwrap();
                assert_eq!(base, l.theta_ext_with(&x, ext, &l.mu, 1).unwrap());
                assert_eq!(base, l.theta_ext_with(&x, ext, &mu2, 0).unwrap());
                for b in &samples {
                    let y = HeckeElement::basis(*b);
                    let lhs = l.big().mul(&base, &l.theta_ext(&y, ext).unwrap());
                    assert_eq!(lhs, l.theta_ext(&levi.mul(&x, &y), ext).unwrap(), "{ext:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn modulus() {
        let (_, l) = gl2();
        assert_eq!(l.delta_p(&t(1, 1)).unwrap(), Q::one());
        assert_eq!(l.delta_p(&t(1, 0)).unwrap(), Q::from_i64(3).inverse().unwrap());
        assert_eq!(l.delta_p(&t(0, 1)).unwrap(), Q::from_i64(3));
    }

    #[test]
    fn theta_compare_holds_with_inverse_modulus() {
        let (_, l) = gl2();
        let rows = check_theta_compare(&l, &[t(1, 1), t(1, 0), t(0, 1), t(2, -1)]).unwrap();
        assert!(rows[0].with_delta && rows[0].with_delta_inverse);
        for r in &rows[1..] {
            assert!(!r.with_delta && r.with_delta_inverse, "{r:?}");
        }
    }
}
