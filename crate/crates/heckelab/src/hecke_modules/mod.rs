//! Finite-rank right modules over Hecke algebras, given by generator matrices.
//!
//! Vectors are rows and `τ_w` acts by `v ↦ v·A_w`, so `A_{xy} = A_x A_y`. The same type
//! serves finite and affine algebras.

pub mod functors;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke_core::{HeckeAlgebra, HeckeElement};
use crate::linalg::{intertwiners, span_basis, Matrix};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

pub struct HeckeModule<S: Scalar> {
    pub algebra: HeckeAlgebra<S>,
    pub rank: usize,
    /// One matrix per entry of `system.simples`.
    pub simple_mats: Vec<Matrix<S>>,
    /// One matrix per entry of `system.zero_gens`.
    pub zero_mats: Vec<Matrix<S>>,
    zero_inv: Vec<Matrix<S>>,
    cache: Mutex<HashMap<Monomial, Matrix<S>>>,
}

impl<S: Scalar> Clone for HeckeModule<S> {
    fn clone(&self) -> Self {
        Self::assemble(self.algebra.clone(), self.rank, self.simple_mats.clone(), self.zero_mats.clone(), self.zero_inv.clone())
    }
}

impl<S: Scalar> fmt::Debug for HeckeModule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeModule(rank {} over {})", self.rank, self.algebra.system.id())
    }
}

impl<S: Scalar> PartialEq for HeckeModule<S> {
    fn eq(&self, o: &Self) -> bool {
        self.algebra.system.id() == o.algebra.system.id() && self.simple_mats == o.simple_mats && self.zero_mats == o.zero_mats
    }
}

impl<S: Scalar> HeckeModule<S> {
    fn assemble(algebra: HeckeAlgebra<S>, rank: usize, simple_mats: Vec<Matrix<S>>, zero_mats: Vec<Matrix<S>>, zero_inv: Vec<Matrix<S>>) -> Self {
        HeckeModule { algebra, rank, simple_mats, zero_mats, zero_inv, cache: Mutex::new(HashMap::new()) }
    }

    /// Builds a module and checks every defining relation.
    pub fn new(algebra: HeckeAlgebra<S>, simple_mats: Vec<Matrix<S>>, zero_mats: Vec<Matrix<S>>) -> Result<Self> {
        let rank = simple_mats.first().or(zero_mats.first()).map_or(0, |a| a.rows());
        Self::with_rank(algebra, rank, simple_mats, zero_mats)
    }

    /// Like [`HeckeModule::new`] with the rank given, which matters when the algebra has no generators.
    pub fn with_rank(algebra: HeckeAlgebra<S>, rank: usize, simple_mats: Vec<Matrix<S>>, zero_mats: Vec<Matrix<S>>) -> Result<Self> {
        let m = Self::new_unchecked(algebra, rank, simple_mats, zero_mats)?;
        m.validate()?;
        Ok(m)
    }

    /// Builds a module checking only shapes and invertibility of length-0 generators.
    pub fn new_unchecked(algebra: HeckeAlgebra<S>, rank: usize, simple_mats: Vec<Matrix<S>>, zero_mats: Vec<Matrix<S>>) -> Result<Self> {
        let sys = &algebra.system;
        if simple_mats.len() != sys.simples.len() || zero_mats.len() != sys.zero_gens.len() {
            return Err(Error::Domain(format!(
                "expected {} simple and {} length-0 generator matrices",
                sys.simples.len(),
                sys.zero_gens.len()
            )));
        }
        if simple_mats.iter().chain(&zero_mats).any(|a| a.rows() != rank || a.cols() != rank) {
            return Err(Error::Domain("generator matrices must be square of equal size".into()));
        }
        let zero_inv = zero_mats
            .iter()
            .zip(&sys.zero_gens)
            .map(|(a, g)| a.inverse().ok_or_else(|| Error::Domain(format!("generator {} acts non-invertibly", g.name))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(algebra, rank, simple_mats, zero_mats, zero_inv))
    }

    /// Rank-0 module, useful as the value of vanishing functors.
    pub fn zero(algebra: HeckeAlgebra<S>) -> Self {
        let ns = algebra.system.simples.len();
        let nz = algebra.system.zero_gens.len();
        Self::assemble(algebra, 0, vec![Matrix::zeros(0, 0); ns], vec![Matrix::zeros(0, 0); nz], vec![Matrix::zeros(0, 0); nz])
    }

    /// One-dimensional module with the given generator values.
    pub fn character(algebra: HeckeAlgebra<S>, simple_vals: &[S], zero_vals: &[S]) -> Result<Self> {
        let one = |x: &S| Matrix::scalar(1, x.clone());
        Self::with_rank(algebra, 1, simple_vals.iter().map(one).collect(), zero_vals.iter().map(one).collect())
    }

    /// `Triv(τ_{n_s}) = q_s`, length-0 elements act by 1.
    pub fn triv(algebra: HeckeAlgebra<S>) -> Result<Self> {
        let s: Vec<S> = (0..algebra.system.simples.len()).map(|i| algebra.q_s(i)).collect();
        let z = vec![S::one(); algebra.system.zero_gens.len()];
        Self::character(algebra, &s, &z)
    }

    /// `Sign(τ_{n_s}) = −1`, length-0 elements act by 1.
    pub fn sign(algebra: HeckeAlgebra<S>) -> Result<Self> {
        let s = vec![-S::one(); algebra.system.simples.len()];
        let z = vec![S::one(); algebra.system.zero_gens.len()];
        Self::character(algebra, &s, &z)
    }

    /// The regular right module `H` of a finite algebra on its `τ` basis.
    pub fn regular(algebra: HeckeAlgebra<S>) -> Result<Self> {
        let basis = algebra.finite_basis()?;
        let mat = |w: &Monomial| -> Result<Matrix<S>> {
            let rows = basis
                .iter()
                .map(|b| algebra.coordinates(&algebra.mul(&HeckeElement::basis(*b), &HeckeElement::basis(*w)), &basis))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows(&rows, basis.len()))
        };
        let sys = algebra.system.clone();
        let s = sys.simples.iter().map(|x| mat(&x.lift)).collect::<Result<_>>()?;
        let z = sys.zero_gens.iter().map(|x| mat(&x.element)).collect::<Result<_>>()?;
        Self::new(algebra, s, z)
    }

    fn zero_power(&self, g: usize, k: i64) -> Matrix<S> {
        let base = if k < 0 { &self.zero_inv[g] } else { &self.zero_mats[g] };
        let mut acc = Matrix::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(base);
        }
        acc
    }

    /// `A_w` for a basis index, through the reduced factorization of `w`.
    pub fn action_basis(&self, w: &Monomial) -> Result<Matrix<S>> {
        if let Some(a) = self.cache.lock().unwrap().get(w) {
            return Ok(a.clone());
        }
        let sys = &self.algebra.system;
        if !sys.contains(w) {
            return Err(Error::Domain(format!("{w} is not a basis index of {}", sys.id())));
        }
        let (word, u) = sys.decompose(w);
        let mut acc = Matrix::identity(self.rank);
        for i in word {
            acc = acc.mul(&self.simple_mats[i]);
        }
        for (g, k) in sys.decompose_zero(&u)? {
            acc = acc.mul(&self.zero_power(g, k));
        }
        self.cache.lock().unwrap().insert(*w, acc.clone());
        Ok(acc)
    }

    pub fn action(&self, x: &HeckeElement<S>) -> Result<Matrix<S>> {
        let mut acc = Matrix::zeros(self.rank, self.rank);
        for (w, c) in x.terms() {
            acc.add_scaled(&self.action_basis(w)?, c);
        }
        Ok(acc)
    }

    /// All generator matrices, simple reflections first.
    pub fn generator_mats(&self) -> Vec<&Matrix<S>> {
        self.simple_mats.iter().chain(&self.zero_mats).collect()
    }

    pub fn generator_names(&self) -> Vec<String> {
        let sys = &self.algebra.system;
        sys.simples.iter().map(|s| s.name.clone()).chain(sys.zero_gens.iter().map(|g| g.name.clone())).collect()
    }

    /// Checks the length-0 group law, units of finite order, the braid relations (through
    /// every reduced word of length ≤ 3), conjugation of simple lifts by length-0
    /// generators and the quadratic relations.
    pub fn validate(&self) -> Result<()> {
        let sys = self.algebra.system.clone();
        let fail = |what: String| Err(Error::Domain(format!("module relation fails: {what}")));
        for (g, gen) in sys.zero_gens.iter().enumerate() {
            if let Some(ord) = gen.order {
                if !self.zero_power(g, ord as i64).is_identity() {
                    return fail(format!("{}^{ord} ≠ 1", gen.name));
                }
            }
            for (h, gh) in sys.zero_gens.iter().enumerate() {
                let lhs = self.zero_mats[g].mul(&self.zero_mats[h]);
                if lhs != self.action_basis(&gen.element.mul(&gh.element))? {
                    return fail(format!("{}·{}", gen.name, gh.name));
                }
            }
            for (i, s) in sys.simples.iter().enumerate() {
                if self.zero_mats[g].mul(&self.simple_mats[i]) != self.action_basis(&gen.element.mul(&s.lift))? {
                    return fail(format!("{}·{}", gen.name, s.name));
                }
                if self.simple_mats[i].mul(&self.zero_mats[g]) != self.action_basis(&s.lift.mul(&gen.element))? {
                    return fail(format!("{}·{}", s.name, gen.name));
                }
            }
        }
        let k = sys.simples.len();
        for i in 0..k {
            let s = &sys.simples[i];
            let mut rhs = self.action_basis(&s.lift.mul(&s.lift))?.scale(&S::from_i64(s.quad.q_s));
            for (z, c) in &s.quad.c {
                rhs.add_scaled(&self.action_basis(&z.mul(&s.lift))?, &S::from_i64(*c));
            }
            if self.simple_mats[i].mul(&self.simple_mats[i]) != rhs {
                return fail(format!("quadratic relation for {}", s.name));
            }
            for j in 0..k {
                if i == j {
                    continue;
                }
                let mut word = vec![i, j];
                while word.len() <= 3 {
                    let w = word.iter().fold(sys.identity(), |acc, &x| acc.mul(&sys.simples[x].lift));
                    if sys.length(&w) != word.len() {
                        break;
                    }
                    let prod = word.iter().fold(Matrix::identity(self.rank), |acc, &x| acc.mul(&self.simple_mats[x]));
                    if prod != self.action_basis(&w)? {
                        return fail(format!("braid relation on word {word:?}"));
                    }
                    word.push(if word.len() % 2 == 0 { i } else { j });
                }
            }
        }
        Ok(())
    }

    /// Basis of the submodule generated by the given vectors.
    pub fn spin(&self, vecs: &[Vec<S>]) -> Vec<Vec<S>> {
        let mut basis = span_basis(vecs, self.rank);
        loop {
            let mut all = basis.clone();
            for v in &basis {
                for a in self.generator_mats() {
                    all.push(a.left_apply(v));
                }
                for a in &self.zero_inv {
                    all.push(a.left_apply(v));
                }
            }
            let next = span_basis(&all, self.rank);
            if next.len() == basis.len() {
                return basis;
            }
            basis = next;
        }
    }

    /// The submodule spanned by `rows` (which must be stable) in the coordinates of a basis of it.
    pub fn submodule(&self, rows: &[Vec<S>]) -> Result<(Self, Matrix<S>)> {
        let basis = span_basis(rows, self.rank);
        if basis.is_empty() {
            return Ok((Self::zero(self.algebra.clone()), Matrix::zeros(0, self.rank)));
        }
        let w = Matrix::from_rows(&basis, self.rank);
        let wt = w.transpose();
        let restrict = |a: &Matrix<S>| -> Result<Matrix<S>> {
            let rows = basis
                .iter()
                .map(|v| wt.solve(&a.left_apply(v)).ok_or_else(|| Error::Domain("subspace is not stable".into())))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows(&rows, basis.len()))
        };
        let s = self.simple_mats.iter().map(restrict).collect::<Result<_>>()?;
        let z = self.zero_mats.iter().map(restrict).collect::<Result<_>>()?;
        Ok((Self::new_unchecked(self.algebra.clone(), basis.len(), s, z)?, w))
    }

    /// The quotient by the stable subspace spanned by `rows`, with the projection matrix
    /// (`rank × rank_quotient`).
    pub fn quotient(&self, rows: &[Vec<S>]) -> Result<(Self, Matrix<S>)> {
        let r = self.rank;
        let basis = span_basis(rows, r);
        let (rref, pivots) = if basis.is_empty() { (Matrix::zeros(0, r), Vec::new()) } else { Matrix::from_rows(&basis, r).rref() };
        let free: Vec<usize> = (0..r).filter(|c| !pivots.contains(c)).collect();
        let reduce = |v: &[S]| -> Vec<S> {
            let mut v = v.to_vec();
            for (k, &p) in pivots.iter().enumerate() {
                let c = v[p].clone();
                if !c.is_zero() {
                    for j in 0..r {
                        v[j] = v[j].clone() - c.clone() * rref[(k, j)].clone();
                    }
                }
            }
            free.iter().map(|&j| v[j].clone()).collect()
        };
        for v in &basis {
            for a in self.generator_mats() {
                if !reduce(&a.left_apply(v)).iter().all(|x| x.is_zero()) {
                    return Err(Error::Domain("subspace is not stable".into()));
                }
            }
        }
        let proj_rows: Vec<Vec<S>> = (0..r).map(|i| reduce(&crate::linalg::unit_vec(r, i))).collect();
        let proj = Matrix::from_rows(&proj_rows, free.len());
        let act = |a: &Matrix<S>| -> Matrix<S> {
            let rows: Vec<Vec<S>> = free.iter().map(|&j| reduce(a.row(j))).collect();
            Matrix::from_rows(&rows, free.len())
        };
        let s = self.simple_mats.iter().map(act).collect();
        let z = self.zero_mats.iter().map(act).collect();
        Ok((Self::new_unchecked(self.algebra.clone(), free.len(), s, z)?, proj))
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        let ds = |a: &Matrix<S>, b: &Matrix<S>| {
            let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            m.add_block(0, 0, a);
            m.add_block(a.rows(), a.cols(), b);
            m
        };
        let s = self.simple_mats.iter().zip(&o.simple_mats).map(|(a, b)| ds(a, b)).collect();
        let z = self.zero_mats.iter().zip(&o.zero_mats).map(|(a, b)| ds(a, b)).collect();
        Self::new_unchecked(self.algebra.clone(), self.rank + o.rank, s, z)
    }

    /// Module with every generator conjugated: `A_g ↦ P⁻¹ A_g P`.
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let pi = p.inverse().ok_or_else(|| Error::Domain("change of basis is singular".into()))?;
        let c = |a: &Matrix<S>| pi.mul(a).mul(p);
        Self::new_unchecked(self.algebra.clone(), self.rank, self.simple_mats.iter().map(c).collect(), self.zero_mats.iter().map(c).collect())
    }

    pub fn to_json(&self) -> ModuleJson {
        let mut generators = BTreeMap::new();
        for (name, a) in self.generator_names().into_iter().zip(self.generator_mats()) {
            generators.insert(name, a.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect());
        }
        ModuleJson { algebra_id: self.algebra.system.id(), rank: self.rank, coeff: S::descriptor(), generators }
    }

    pub fn from_json(algebra: HeckeAlgebra<S>, doc: &ModuleJson) -> Result<Self> {
        if doc.algebra_id != algebra.system.id() {
            return Err(Error::parse("algebra_id", format!("expected {}, got {}", algebra.system.id(), doc.algebra_id)));
        }
        if doc.coeff != S::descriptor() {
            return Err(Error::parse("coeff", format!("expected {}, got {}", S::descriptor(), doc.coeff)));
        }
        let sys = algebra.system.clone();
        let parse = |name: &str| -> Result<Matrix<S>> {
            let field = format!("generators.{name}");
            let rows = doc.generators.get(name).ok_or_else(|| Error::parse(&field, "missing"))?;
            if rows.len() != doc.rank || rows.iter().any(|r| r.len() != doc.rank) {
                return Err(Error::parse(&field, format!("expected a {0}×{0} matrix", doc.rank)));
            }
            let vals = rows
                .iter()
                .map(|r| r.iter().map(|x| S::parse_scalar(x).ok_or_else(|| Error::parse(&field, format!("bad scalar {x:?}")))).collect())
                .collect::<Result<Vec<Vec<S>>>>()?;
            Ok(Matrix::from_rows(&vals, doc.rank))
        };
        let s = sys.simples.iter().map(|x| parse(&x.name)).collect::<Result<_>>()?;
        let z = sys.zero_gens.iter().map(|x| parse(&x.name)).collect::<Result<_>>()?;
        if let Some(extra) = doc.generators.keys().find(|k| sys.simple_position(k).is_none() && !sys.zero_gens.iter().any(|g| &g.name == *k)) {
            return Err(Error::parse(format!("generators.{extra}"), "unknown generator"));
        }
        Self::with_rank(algebra, doc.rank, s, z)
    }
}

/// `{algebra_id, rank, coeff, generators: {name: matrix}}` with scalars as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra_id: String,
    pub rank: usize,
    pub coeff: String,
    pub generators: BTreeMap<String, Vec<Vec<String>>>,
}

/// Basis of `Hom(a, b)` as matrices `X` with `v ↦ vX`.
pub fn hom_space<S: Scalar>(a: &HeckeModule<S>, b: &HeckeModule<S>) -> Vec<Matrix<S>> {
    if a.rank == 0 || b.rank == 0 {
        return Vec::new();
    }
    let pairs: Vec<(&Matrix<S>, &Matrix<S>)> = a.generator_mats().into_iter().zip(b.generator_mats()).collect();
    intertwiners(&pairs, a.rank, b.rank)
}

pub fn is_morphism<S: Scalar>(a: &HeckeModule<S>, b: &HeckeModule<S>, x: &Matrix<S>) -> bool {
    a.generator_mats().into_iter().zip(b.generator_mats()).all(|(p, q)| p.mul(x) == x.mul(q))
}

/// An isomorphism `a → b` when one exists among the hom basis or seeded random combinations.
pub fn find_isomorphism<S: Scalar>(a: &HeckeModule<S>, b: &HeckeModule<S>) -> Option<Matrix<S>> {
    if a.rank != b.rank {
        return None;
    }
    if a.rank == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    let homs = hom_space(a, b);
    if let Some(x) = homs.iter().find(|x| x.is_invertible()) {
        return Some(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..50 {
        let mut x = Matrix::zeros(a.rank, b.rank);
        for h in &homs {
            x.add_scaled(h, &S::from_i64(rng.gen_range(-3..=3)));
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

/// All one-dimensional modules whose generator values lie in `S` (finite fields) or in
/// `{0, ±1, q_s}` (rationals).
pub fn characters<S: Scalar>(algebra: &HeckeAlgebra<S>) -> Vec<HeckeModule<S>> {
    let sys = &algebra.system;
    let simple_vals: Vec<Vec<S>> = (0..sys.simples.len())
        .map(|i| {
            S::enumerate().unwrap_or_else(|| {
                let mut v = vec![S::zero(), S::one(), -S::one(), algebra.q_s(i)];
                v.dedup();
                v
            })
        })
        .collect();
    let zero_vals: Vec<Vec<S>> = sys
        .zero_gens
        .iter()
        .map(|_| match S::enumerate() {
            Some(all) => all.into_iter().filter(|x| !x.is_zero()).collect(),
            None => vec![S::one(), -S::one()],
        })
        .collect();
    let all: Vec<Vec<S>> = simple_vals.into_iter().chain(zero_vals).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; all.len()];
    loop {
        let vals: Vec<S> = idx.iter().zip(&all).map(|(&i, v)| v[i].clone()).collect();
        let (s, z) = vals.split_at(sys.simples.len());
        if let Ok(m) = HeckeModule::character(algebra.clone(), s, z) {
            out.push(m);
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < all[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{Family, FiniteGroup};
    use crate::hecke_core::FiniteHeckeData;
    use crate::{F3, Q};
    use std::sync::Arc;

    fn gl23() -> FiniteHeckeData {
        FiniteHeckeData::build(Arc::new(FiniteGroup::build(Family::GL, 2, 3).unwrap())).unwrap()
    }

    #[test]
    fn triv_sign_and_regular_validate() {
        let d = gl23();
        let h = d.algebra::<F3>();
        let t = HeckeModule::triv(h.clone()).unwrap();
        let s = HeckeModule::sign(h.clone()).unwrap();
        assert!(hom_space(&t, &s).is_empty());
        assert_eq!(hom_space(&t, &t).len(), 1);
        let r = HeckeModule::regular(h).unwrap();
        assert_eq!(r.rank, 8);
    }

    #[test]
    fn bad_module_is_rejected() {
        let d = gl23();
        let h = d.algebra::<F3>();
        assert!(HeckeModule::character(h, &[F3::new(1)], &[F3::new(1), F3::new(1)]).is_err());
    }

    #[test]
    fn characters_of_gl2_f3() {
        let d = gl23();
        let h = d.algebra::<F3>();
        // Unit values ±1 on two generators; τ_s ∈ {0, −1} when the torus character is trivial on Z′_s.
        let chars = characters(&h);
        assert!(chars.len() >= 4);
        assert!(chars.contains(&HeckeModule::triv(h.clone()).unwrap()));
        assert!(chars.contains(&HeckeModule::sign(h).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let d = gl23();
        let h = d.algebra::<Q>();
        let r = HeckeModule::regular(h.clone()).unwrap();
        let doc = serde_json::to_string(&r.to_json()).unwrap();
        let back: ModuleJson = serde_json::from_str(&doc).unwrap();
        assert_eq!(HeckeModule::from_json(h.clone(), &back).unwrap(), r);
        let mut broken = back.clone();
        broken.generators.remove("s1");
        let err = HeckeModule::from_json(h, &broken).unwrap_err();
        assert_eq!(err, Error::parse("generators.s1", "missing"));
    }

    #[test]
    fn quotient_and_submodule() {
        let d = gl23();
        let h = d.algebra::<F3>();
        let r = HeckeModule::regular(h).unwrap();
        let e = vec![F3::new(1); 8];
        let sub = r.spin(&[e]);
        let (s, _) = r.submodule(&sub).unwrap();
        let (q, p) = r.quotient(&sub).unwrap();
        assert_eq!(s.rank + q.rank, 8);
        assert!(is_morphism(&r, &q, &p));
        s.validate().unwrap();
        q.validate().unwrap();
    }
}
