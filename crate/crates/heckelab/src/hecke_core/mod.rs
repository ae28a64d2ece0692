//! Hecke algebras over an exact coefficient field: elements, presentation-based products,
//! the `τ*` basis, characters, the Iwahori idempotent and Levi embeddings.

pub mod frobenius;
pub mod oracle;
pub mod system;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::FiniteGroup;
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::scalar::Scalar;

pub use oracle::{quadratic_data, rank_one_c, ConvolutionTable};
pub use system::{QuadraticData, RankOneC, SimpleReflection, WeylSystem, ZeroGenerator};

/// Finite formal sum `Σ c_w τ_w` without stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElement<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for HeckeElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> HeckeElement<S> {
    pub fn zero() -> Self {
        HeckeElement { terms: BTreeMap::new() }
    }

    pub fn basis(w: Monomial) -> Self {
        Self::term(w, S::one())
    }

    pub fn term(w: Monomial, c: S) -> Self {
        let mut x = Self::zero();
        x.add_term(w, c);
        x
    }

    pub fn from_int_terms(terms: &[(Monomial, i64)]) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(*w, S::from_i64(*c));
        }
        x
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, S> {
        &self.terms
    }

    pub fn coeff(&self, w: &Monomial) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, w: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(S::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(*w, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.add_term(*w, c.clone() * s.clone());
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies a map on indices, e.g. conjugation.
    pub fn map_indices(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.add_term(f(w), c.clone());
        }
        r
    }
}

impl<S: Scalar> fmt::Display for HeckeElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}·τ{w}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A Hecke algebra presented by a [`WeylSystem`], with coefficients in `S`.
pub struct HeckeAlgebra<S> {
    pub system: Arc<WeylSystem>,
    _s: PhantomData<fn() -> S>,
}

impl<S> Clone for HeckeAlgebra<S> {
    fn clone(&self) -> Self {
        HeckeAlgebra { system: self.system.clone(), _s: PhantomData }
    }
}

impl<S> fmt::Debug for HeckeAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeAlgebra({})", self.system.id())
    }
}

impl<S: Scalar> HeckeAlgebra<S> {
    pub fn new(system: Arc<WeylSystem>) -> Self {
        HeckeAlgebra { system, _s: PhantomData }
    }

    pub fn one(&self) -> HeckeElement<S> {
        HeckeElement::basis(self.system.identity())
    }

    pub fn tau(&self, w: &Monomial) -> Result<HeckeElement<S>> {
        if !self.system.contains(w) {
            return Err(Error::Domain(format!("{w} is not a basis index of {}", self.system.id())));
        }
        Ok(HeckeElement::basis(*w))
    }

    pub fn mul(&self, a: &HeckeElement<S>, b: &HeckeElement<S>) -> HeckeElement<S> {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                let c = cx.clone() * cy.clone();
                for (z, k) in self.system.mul_basis(x, y).iter() {
                    let e = acc.entry(*z).or_insert_with(S::zero);
                    *e = e.clone() + c.clone() * S::from_i64(*k);
                }
            }
        }
        let mut r = HeckeElement::zero();
        for (z, c) in acc {
            r.add_term(z, c);
        }
        r
    }

    pub fn mul_all(&self, xs: &[HeckeElement<S>]) -> HeckeElement<S> {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// `τ*_w` in the `τ` basis.
    pub fn star(&self, w: &Monomial) -> HeckeElement<S> {
        HeckeElement::from_int_terms(&self.system.star_basis(w))
    }

    /// Linear extension of `τ_w ↦ τ*_w`.
    pub fn star_of(&self, x: &HeckeElement<S>) -> HeckeElement<S> {
        let mut r = HeckeElement::zero();
        for (w, c) in x.terms() {
            r = r.add(&self.star(w).scale(c));
        }
        r
    }

    /// `c_{n_s} = Σ_z c(z) τ_z` for the simple reflection at position `i`.
    pub fn c_element(&self, i: usize) -> HeckeElement<S> {
        HeckeElement::from_int_terms(&self.system.simples[i].quad.c)
    }

    pub fn q_s(&self, i: usize) -> S {
        S::from_i64(self.system.simples[i].quad.q_s)
    }

    pub fn length(&self, w: &Monomial) -> usize {
        self.system.length(w)
    }

    /// `Triv(τ_w) = q_w` with `q_w` the product of `q_s` along a reduced word.
    pub fn triv(&self, w: &Monomial) -> S {
        let (word, _) = self.system.decompose(w);
        word.iter().fold(S::one(), |acc, &i| acc * self.q_s(i))
    }

    /// `Sign(τ_w) = (−1)^{ℓ(w)}`.
    pub fn sign(&self, w: &Monomial) -> S {
        if self.length(w).is_multiple_of(2) {
            S::one()
        } else {
            -S::one()
        }
    }

    /// Evaluates a character given on basis indices.
    pub fn eval(&self, chi: impl Fn(&Monomial) -> S, x: &HeckeElement<S>) -> S {
        x.terms().iter().fold(S::zero(), |acc, (w, c)| acc + c.clone() * chi(w))
    }

    /// Checks `χ(τ_aτ_b) = χ(τ_a)χ(τ_b)` on the given basis indices.
    pub fn is_character_on(&self, chi: &dyn Fn(&Monomial) -> S, basis: &[Monomial]) -> bool {
        basis.iter().all(|a| {
            basis.iter().all(|b| {
                let p = self.mul(&HeckeElement::basis(*a), &HeckeElement::basis(*b));
                self.eval(chi, &p) == chi(a) * chi(b)
            })
        })
    }

    /// All basis indices of a finite algebra.
    pub fn finite_basis(&self) -> Result<Vec<Monomial>> {
        self.system.finite_basis()
    }

    /// Matrix of left multiplication coordinates: `coords(x)` over a finite basis.
    pub fn coordinates(&self, x: &HeckeElement<S>, basis: &[Monomial]) -> Result<Vec<S>> {
        let mut v = vec![S::zero(); basis.len()];
        for (w, c) in x.terms() {
            let i = basis.binary_search(w).map_err(|_| Error::Domain(format!("{w} outside the basis")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, v: &[S], basis: &[Monomial]) -> HeckeElement<S> {
        let mut x = HeckeElement::zero();
        for (w, c) in basis.iter().zip(v) {
            x.add_term(*w, c.clone());
        }
        x
    }

    /// `ε₁ = |𝕋|⁻¹ Σ_t τ_t` over the length-0 units of a finite algebra.
    pub fn iwahori_idempotent(&self) -> Result<HeckeElement<S>> {
        let units: Vec<Monomial> = self.finite_basis()?.into_iter().filter(|w| w.is_torus_unit()).collect();
        let inv = S::from_i64(units.len() as i64)
            .inverse()
            .ok_or_else(|| Error::Precondition(format!("|T| = {} is not invertible in {}", units.len(), S::descriptor())))?;
        let mut e = HeckeElement::zero();
        for t in units {
            e.add_term(t, inv.clone());
        }
        Ok(e)
    }
}

/// Oracle output and derived presentation data for one finite group.
pub struct FiniteHeckeData {
    pub group: Arc<FiniteGroup>,
    pub oracle: ConvolutionTable,
    pub quad: BTreeMap<usize, QuadraticData>,
    systems: Mutex<HashMap<BTreeSet<usize>, Arc<WeylSystem>>>,
}

impl fmt::Debug for FiniteHeckeData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteHeckeData({:?})", self.group)
    }
}

impl FiniteHeckeData {
    /// Runs the convolution oracle and extracts the quadratic relations from it.
    pub fn build(group: Arc<FiniteGroup>) -> Result<Self> {
        if !group.is_whole_group() {
            return Err(Error::Precondition("convolution data is built on the whole group".into()));
        }
        let oracle = ConvolutionTable::from_group(&group);
        let quad = quadratic_data(&group, &oracle)?;
        for (k, d) in &quad {
            if d.c.iter().map(|(_, c)| c).sum::<i64>() != d.q_s - 1 {
                return Err(Error::Internal(format!("Σ c(z) ≠ q_s − 1 for s{k}")));
            }
        }
        Ok(FiniteHeckeData { group, oracle, quad, systems: Mutex::new(HashMap::new()) })
    }

    /// Presentation data for `H_𝕄` with `𝕄 = 𝕄_J`.
    pub fn system(&self, j: &BTreeSet<usize>) -> Result<Arc<WeylSystem>> {
        if let Some(s) = self.systems.lock().unwrap().get(j) {
            return Ok(s.clone());
        }
        let g = &self.group;
        let sys = Arc::new(WeylSystem::finite(g.family, g.n, &g.field, j, &self.quad)?);
        self.systems.lock().unwrap().insert(j.clone(), sys.clone());
        Ok(sys)
    }

    pub fn full_j(&self) -> BTreeSet<usize> {
        self.group.simple_indices().into_iter().collect()
    }

    pub fn algebra<S: Scalar>(&self) -> HeckeAlgebra<S> {
        HeckeAlgebra::new(self.system(&self.full_j()).expect("full system"))
    }

    pub fn levi_algebra<S: Scalar>(&self, j: &BTreeSet<usize>) -> Result<HeckeAlgebra<S>> {
        Ok(HeckeAlgebra::new(self.system(j)?))
    }

    /// Entry-by-entry comparison of presentation and oracle tables over `S`.
    /// Returns the number of mismatching `(a, b)` pairs.
    pub fn oracle_mismatches<S: Scalar>(&self) -> Result<usize> {
        let alg = self.algebra::<S>();
        if alg.finite_basis()? != self.oracle.basis {
            return Err(Error::Internal("presentation basis differs from 𝒩_ℾ".into()));
        }
        let mut bad = 0;
        for a in &self.oracle.basis {
            for b in &self.oracle.basis {
                let p = alg.mul(&HeckeElement::basis(*a), &HeckeElement::basis(*b));
                let o = HeckeElement::<S>::from_int_terms(&self.oracle.product(a, b));
                if p != o {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    }

    /// JSON-ready structure constants.
    pub fn dump(&self) -> AlgebraDump {
        let mut table = Vec::new();
        for (a, row) in self.oracle.table.iter().enumerate() {
            for (b, entries) in row.iter().enumerate() {
                for &(c, k) in entries {
                    table.push((a, b, c, k));
                }
            }
        }
        AlgebraDump {
            group: self.group.descriptor().to_string(),
            basis: self.oracle.basis.clone(),
            q: self.quad.iter().map(|(k, d)| (format!("s{k}"), d.q_s)).collect(),
            c: self.quad.iter().map(|(k, d)| (format!("s{k}"), d.c.clone())).collect(),
            table,
        }
    }
}

/// Structure constants `τ_{basis[a]} τ_{basis[b]} = Σ k τ_{basis[c]}` as `(a, b, c, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub group: String,
    pub basis: Vec<Monomial>,
    pub q: BTreeMap<String, i64>,
    pub c: BTreeMap<String, Vec<(Monomial, i64)>>,
    pub table: Vec<(usize, usize, usize, i64)>,
}

/// Exhaustive check that `τ^M_a τ^M_b` computed in `H_𝕄` equals the product in `H`.
pub fn levi_embedding_respects_products<S: Scalar>(big: &HeckeAlgebra<S>, levi: &HeckeAlgebra<S>) -> Result<bool> {
    let basis = levi.finite_basis()?;
    for a in &basis {
        if !big.system.contains(a) {
            return Ok(false);
        }
        for b in &basis {
            let (x, y) = (HeckeElement::basis(*a), HeckeElement::basis(*b));
            if levi.mul(&x, &y) != big.mul(&x, &y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ranks of `{τ_m τ_{n_d}}` over `d ∈ ^M W` and `{τ_{n_e} τ_m}` over `e ∈ W^M`, with
/// `m ∈ 𝒩_𝕄`; both equal `dim H` exactly when `H` is free over `H_𝕄` on that side.
pub fn freeness_ranks<S: Scalar>(big: &HeckeAlgebra<S>, levi: &HeckeAlgebra<S>) -> Result<(usize, usize, usize)> {
    let basis = big.finite_basis()?;
    let mb = levi.finite_basis()?;
    let j = &levi.system.levi.j;
    let datum = &big.system.datum;
    let lift = |w: &crate::coxeter::WeylElement| HeckeElement::basis(big.system.lift_of_word(&datum.reduced_word(w)));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for m in &mb {
        let tm = HeckeElement::basis(*m);
        for d in datum.min_coset_reps(j) {
            left.push(big.coordinates(&big.mul(&tm, &lift(&d)), &basis)?);
        }
        for e in datum.min_right_coset_reps(j) {
            right.push(big.coordinates(&big.mul(&lift(&e), &tm), &basis)?);
        }
    }
    let dim = basis.len();
    let rank = |rows: &[Vec<S>]| Matrix::from_rows(rows, dim).rank();
    Ok((dim, rank(&left), rank(&right)))
}
