//! Representations of a finite `ℾ = GL_n(F_q)` or `SL_n(F_q)` and of its standard Levi
//! subgroups, the universal module `𝕏 = ind_𝕌^ℾ(1)`, and the functors linking them to
//! unipotent Hecke modules.
//!
//! Representations act on column vectors; Hecke modules use rows.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::{Family, FiniteGroup};
use crate::hecke_core::{FiniteHeckeData, HeckeAlgebra};
use crate::hecke_modules::functors::{induct, restrict, LeviPair};
use crate::hecke_modules::{find_isomorphism, is_morphism, HeckeModule};
use crate::linalg::{intertwiners, unit_vec, vec_is_zero, vec_sub, Matrix};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// Element matrices are cached only up to this dimension.
const CACHE_DIM: usize = 64;

/// A finite-dimensional representation, stored by the images of `group.generators`.
pub struct GroupRep<S: Scalar> {
    pub group: Arc<FiniteGroup>,
    pub dim: usize,
    pub gens: Vec<Matrix<S>>,
    cache: Mutex<HashMap<usize, Arc<Matrix<S>>>>,
}

impl<S: Scalar> Clone for GroupRep<S> {
    fn clone(&self) -> Self {
        GroupRep { group: self.group.clone(), dim: self.dim, gens: self.gens.clone(), cache: Mutex::new(HashMap::new()) }
    }
}

impl<S: Scalar> fmt::Debug for GroupRep<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRep(dim {} of {:?})", self.dim, self.group)
    }
}

impl<S: Scalar> GroupRep<S> {
    pub fn new(group: Arc<FiniteGroup>, dim: usize, gens: Vec<Matrix<S>>) -> Result<Self> {
        if gens.len() != group.generators.len() {
            return Err(Error::Domain(format!("expected {} generator images, got {}", group.generators.len(), gens.len())));
        }
        if gens.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::Domain("generator images must be square of equal size".into()));
        }
        Ok(GroupRep { group, dim, gens, cache: Mutex::new(HashMap::new()) })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, dim: usize, f: impl Fn(usize) -> Matrix<S>) -> Result<Self> {
        let gens = group.generators.iter().map(|&g| f(g)).collect();
        Self::new(group, dim, gens)
    }

    /// Permutation representation with `g·e_i = e_{f(g, i)}`.
    pub fn from_permutation(group: Arc<FiniteGroup>, dim: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let gens = group
            .generators
            .iter()
            .map(|&g| {
                let mut a = Matrix::zeros(dim, dim);
                for i in 0..dim {
                    a[(f(g, i), i)] = S::one();
                }
                a
            })
            .collect();
        Self::new(group, dim, gens)
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        Self::from_permutation(group, 1, |_, _| 0).expect("trivial representation")
    }

    /// `R[ℾ]` with basis `e_h` and `g·e_h = e_{gh}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let order = group.order();
        let g2 = group.clone();
        Self::from_permutation(group, order, move |g, h| g2.mul(g, h)).expect("regular representation")
    }

    /// `ρ(g)` as a product of generator images along `group.word(g)`.
    pub fn act(&self, g: usize) -> Arc<Matrix<S>> {
        if let Some(a) = self.cache.lock().unwrap().get(&g) {
            return a.clone();
        }
        let a = Arc::new(self.group.word(g).iter().fold(Matrix::identity(self.dim), |acc, &k| acc.mul(&self.gens[k])));
        if self.dim <= CACHE_DIM {
            self.cache.lock().unwrap().insert(g, a.clone());
        }
        a
    }

    /// `ρ(g)v` without forming `ρ(g)` for large representations.
    pub fn apply(&self, g: usize, v: &[S]) -> Vec<S> {
        if self.dim <= CACHE_DIM {
            return self.act(g).apply(v);
        }
        self.group.word(g).iter().rev().fold(v.to_vec(), |acc, &k| self.gens[k].apply(&acc))
    }

    /// Checks `ρ(g)ρ(h) = ρ(gh)` on `samples` seeded random pairs.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = self.group.order();
        for _ in 0..samples {
            let (g, h) = (rng.gen_range(0..order), rng.gen_range(0..order));
            let v: Vec<S> = (0..self.dim).map(|_| S::from_i64(rng.gen_range(-3..=3))).collect();
            if self.apply(g, &self.apply(h, &v)) != self.apply(self.group.mul(g, h), &v) {
                return Err(Error::Domain(format!("ρ(g)ρ(h) ≠ ρ(gh) for elements {g}, {h}")));
            }
        }
        Ok(())
    }

    /// Common fixed vectors of the subgroup `elems`.
    pub fn fixed_space(&self, elems: &[usize]) -> Vec<Vec<S>> {
        let gens = subgroup_generators(&self.group, elems);
        if gens.is_empty() {
            return (0..self.dim).map(|i| unit_vec(self.dim, i)).collect();
        }
        let id = Matrix::identity(self.dim);
        let sys = gens.iter().map(|&u| self.act(u).sub(&id)).reduce(|a, b| a.vstack(&b)).unwrap();
        sys.nullspace()
    }

    /// Representation on a stable subspace with the given (independent) basis.
    pub fn subrep(&self, basis: &[Vec<S>]) -> Result<Self> {
        let coords = SpanCoords::new(basis, self.dim);
        let gens = self
            .gens
            .iter()
            .map(|a| {
                let cols = basis
                    .iter()
                    .map(|b| coords.coords(&a.apply(b)).ok_or_else(|| Error::Domain("subspace is not stable".into())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_cols(&cols, basis.len()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), basis.len(), gens)
    }

    /// Quotient by a stable subspace spanned by `vectors`.
    pub fn quotient(&self, vectors: &[Vec<S>]) -> Result<(Self, Projection<S>)> {
        let proj = Projection::new(vectors, self.dim);
        let gens = self
            .gens
            .iter()
            .map(|a| {
                let cols: Vec<Vec<S>> = proj.complement.iter().map(|&c| proj.project(&a.col(c))).collect();
                Matrix::from_cols(&cols, proj.complement.len())
            })
            .collect();
        let rep = Self::new(self.group.clone(), proj.complement.len(), gens)?;
        for v in vectors {
            for a in &self.gens {
                if !vec_is_zero(&proj.project(&a.apply(v))) {
                    return Err(Error::Domain("quotient by a non-stable subspace".into()));
                }
            }
        }
        Ok((rep, proj))
    }

    /// Smallest stable subspace containing `vectors`.
    pub fn spin(&self, vectors: &[Vec<S>]) -> Vec<Vec<S>> {
        let mut ech = Echelon::new(self.dim);
        let mut out = Vec::new();
        let mut queue: Vec<Vec<S>> = vectors.to_vec();
        while let Some(v) = queue.pop() {
            if ech.insert(&v) {
                for a in &self.gens {
                    queue.push(a.apply(&v));
                }
                out.push(v);
            }
        }
        out
    }

    /// `V^∨` with `g ↦ ρ(g⁻¹)ᵀ`.
    pub fn contragredient(&self) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|a| a.inverse().map(|b| b.transpose()).ok_or_else(|| Error::Domain("non-invertible generator image".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), self.dim, gens)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        let d = self.dim + o.dim;
        let gens = self
            .gens
            .iter()
            .zip(&o.gens)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(d, d);
                m.add_block(0, 0, a);
                m.add_block(self.dim, self.dim, b);
                m
            })
            .collect();
        Self::new(self.group.clone(), d, gens)
    }
}

/// Greedy generating set of the subgroup with the given elements.
pub fn subgroup_generators(group: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut closure: BTreeSet<usize> = BTreeSet::from([group.identity()]);
    let mut gens = Vec::new();
    for &x in elems {
        if closure.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut frontier: Vec<usize> = closure.iter().copied().collect();
        while let Some(y) = frontier.pop() {
            for &g in &gens {
                let z = group.mul(y, g);
                if closure.insert(z) {
                    frontier.push(z);
                }
            }
        }
    }
    gens
}

/// Incremental row echelon form for span membership.
struct Echelon<S> {
    dim: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> Echelon<S> {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for j in 0..self.dim {
                    if !r[j].is_zero() {
                        v[j] = v[j].clone() - f.clone() * r[j].clone();
                    }
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, v: &[S]) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().unwrap();
        let v: Vec<S> = v.into_iter().map(|x| x * inv.clone()).collect();
        self.rows.push((p, v));
        true
    }
}

/// Coordinates in an independent family of vectors.
pub struct SpanCoords<S> {
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
    inv: Matrix<S>,
}

impl<S: Scalar> SpanCoords<S> {
    pub fn new(basis: &[Vec<S>], dim: usize) -> Self {
        if basis.is_empty() {
            return SpanCoords { basis: Vec::new(), pivots: Vec::new(), inv: Matrix::zeros(0, 0) };
        }
        let (_, pivots) = Matrix::from_rows(basis, dim).rref();
        assert_eq!(pivots.len(), basis.len(), "basis vectors are dependent");
        let sq = Matrix::from_fn(basis.len(), basis.len(), |i, j| basis[j][pivots[i]].clone());
        SpanCoords { basis: basis.to_vec(), pivots, inv: sq.inverse().expect("pivot rows are independent") }
    }

    /// Coordinates of `v` when it lies in the span.
    pub fn coords(&self, v: &[S]) -> Option<Vec<S>> {
        let c = self.inv.apply(&self.pivots.iter().map(|&p| v[p].clone()).collect::<Vec<_>>());
        let mut back = vec![S::zero(); v.len()];
        for (x, b) in c.iter().zip(&self.basis) {
            for (o, y) in back.iter_mut().zip(b) {
                if !x.is_zero() && !y.is_zero() {
                    *o = o.clone() + x.clone() * y.clone();
                }
            }
        }
        (back == v).then_some(c)
    }
}

/// Projection onto a complement of a subspace, spanned by the non-pivot unit vectors.
pub struct Projection<S> {
    rows: Vec<(usize, Vec<S>)>,
    pub complement: Vec<usize>,
}

impl<S: Scalar> Projection<S> {
    pub fn new(vectors: &[Vec<S>], dim: usize) -> Self {
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        if !vectors.is_empty() {
            let (r, piv) = Matrix::from_rows(vectors, dim).rref();
            rows = piv.iter().enumerate().map(|(i, &p)| (p, r.row(i).to_vec())).collect();
            pivots = piv;
        }
        let complement = (0..dim).filter(|c| !pivots.contains(c)).collect();
        Projection { rows, complement }
    }

    /// Image in the quotient, in coordinates of the complement.
    pub fn project(&self, v: &[S]) -> Vec<S> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        self.complement.iter().map(|&c| v[c].clone()).collect()
    }
}

/// Basis of `Hom_ℾ(a, b)` as matrices `X` with `ρ_b(g)X = Xρ_a(g)`.
pub fn rep_hom_space<S: Scalar>(a: &GroupRep<S>, b: &GroupRep<S>) -> Vec<Matrix<S>> {
    if a.dim == 0 || b.dim == 0 {
        return Vec::new();
    }
    let pairs: Vec<(&Matrix<S>, &Matrix<S>)> = b.gens.iter().zip(&a.gens).collect();
    intertwiners(&pairs, b.dim, a.dim)
}

pub fn find_rep_isomorphism<S: Scalar>(a: &GroupRep<S>, b: &GroupRep<S>) -> Option<Matrix<S>> {
    if a.dim != b.dim {
        return None;
    }
    if a.dim == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    let homs = rep_hom_space(a, b);
    if let Some(x) = homs.iter().find(|x| x.is_invertible()) {
        return Some(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..50 {
        let mut x = Matrix::zeros(b.dim, a.dim);
        for h in &homs {
            x.add_scaled(h, &S::from_i64(rng.gen_range(-3..=3)));
        }
        if x.is_invertible() {
            return Some(x);
        }
    }
    None
}

/// A finite group with its Hecke data and its standard Levi subgroups.
pub struct FiniteSetting {
    pub data: Arc<FiniteHeckeData>,
    levis: Mutex<BTreeMap<BTreeSet<usize>, Arc<FiniteGroup>>>,
}

impl fmt::Debug for FiniteSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSetting({:?})", self.data.group)
    }
}

impl FiniteSetting {
    pub fn new(family: Family, n: usize, q: u8) -> Result<Self> {
        let group = Arc::new(FiniteGroup::build(family, n, q)?);
        Ok(Self::from_data(Arc::new(FiniteHeckeData::build(group)?)))
    }

    pub fn from_data(data: Arc<FiniteHeckeData>) -> Self {
        FiniteSetting { data, levis: Mutex::new(BTreeMap::new()) }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.data.group
    }

    /// `p`, the characteristic of `F_q`.
    pub fn p(&self) -> u64 {
        self.group().field.p() as u64
    }

    pub fn levi_group(&self, j: &BTreeSet<usize>) -> Result<Arc<FiniteGroup>> {
        if *j == self.data.full_j() {
            return Ok(self.group().clone());
        }
        if let Some(m) = self.levis.lock().unwrap().get(j) {
            return Ok(m.clone());
        }
        let g = self.group();
        let m = Arc::new(FiniteGroup::build_levi(g.family, g.n, g.field.q(), j)?);
        self.levis.lock().unwrap().insert(j.clone(), m.clone());
        Ok(m)
    }

    /// All subsets of the simple reflections.
    pub fn all_levis(&self) -> Vec<BTreeSet<usize>> {
        let simple = self.group().simple_indices();
        (0..1u32 << simple.len())
            .map(|mask| simple.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k).collect())
            .collect()
    }

    fn levi_pair<S: Scalar>(&self, j: &BTreeSet<usize>) -> Result<LeviPair<S>> {
        LeviPair::new(&self.data.algebra::<S>(), &self.data.levi_algebra::<S>(j)?)
    }

    /// Id in `levi` of an element of the whole group lying in the Levi subgroup.
    fn to_levi(&self, levi: &FiniteGroup, g: usize) -> usize {
        levi.id_of(self.group().element(g)).expect("element lies in the Levi subgroup")
    }

    fn levi_to_group(&self, levi: &FiniteGroup, m: usize) -> usize {
        self.group().id_of(levi.element(m)).expect("Levi elements lie in the group")
    }
}

/// `𝕏 = R[𝕌\ℾ]` with `g·1_{𝕌x} = 1_{𝕌xg⁻¹}` and the commuting left `H`-action
/// `τ_w·1_{𝕌x} = Σ_{𝕌y⊆𝕌w𝕌} 1_{𝕌yx}`.
pub struct UniversalModule<S: Scalar> {
    pub rep: GroupRep<S>,
}

impl<S: Scalar> UniversalModule<S> {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let g = group.clone();
        let dim = group.right_coset_reps.len();
        let rep = GroupRep::from_permutation(group, dim, move |x, c| g.right_coset(g.mul(g.right_coset_reps[c], g.inv(x))))
            .expect("coset representation");
        UniversalModule { rep }
    }

    /// Column of the coset `𝕌`.
    pub fn base_coset(&self) -> usize {
        let g = &self.rep.group;
        g.right_coset(g.identity())
    }

    /// Matrix of `τ_w` acting on the left.
    pub fn hecke_action(&self, w: &Monomial) -> Result<Matrix<S>> {
        let g = &self.rep.group;
        let pos = g.normalizer_pos(w).ok_or_else(|| Error::Domain(format!("{w} is not in the normalizer")))?;
        let d = self.rep.dim;
        let mut a = Matrix::<S>::zeros(d, d);
        for c in 0..d {
            for &y in &g.cell_cosets[pos] {
                let r = g.right_coset(g.mul(y, g.right_coset_reps[c]));
                a[(r, c)] = a[(r, c)].clone() + S::one();
            }
        }
        Ok(a)
    }

    /// `τ_w` for the simple and length-0 generators of `algebra`, in that order.
    pub fn generator_actions(&self, algebra: &HeckeAlgebra<S>) -> Result<Vec<Matrix<S>>> {
        let sys = &algebra.system;
        sys.simples.iter().map(|s| s.lift).chain(sys.zero_gens.iter().map(|z| z.element)).map(|w| self.hecke_action(&w)).collect()
    }

    /// Checks `τ_w ρ(g) = ρ(g) τ_w` for every generator pair.
    pub fn actions_commute(&self, algebra: &HeckeAlgebra<S>) -> Result<bool> {
        let hs = self.generator_actions(algebra)?;
        Ok(hs.iter().all(|h| self.rep.gens.iter().all(|a| h.mul(a) == a.mul(h))))
    }
}

/// `V^𝕌` with its right `H`-action, and its basis inside `V`.
pub struct Invariants<S: Scalar> {
    pub module: HeckeModule<S>,
    pub basis: Vec<Vec<S>>,
}

/// `V^𝕌` as a right module over `algebra`, with `v·τ_w = Σ_{𝕌y⊆𝕌w𝕌} y⁻¹v`.
pub fn u_invariants<S: Scalar>(v: &GroupRep<S>, algebra: &HeckeAlgebra<S>) -> Result<Invariants<S>> {
    let g = &v.group;
    if algebra.system.levi.j != g.levi.j || algebra.system.affine {
        return Err(Error::Precondition(format!("{} is not the Hecke algebra of {:?}", algebra.system.id(), g)));
    }
    let basis = v.fixed_space(&g.unipotent);
    let coords = SpanCoords::new(&basis, v.dim);
    let mat = |w: &Monomial| -> Result<Matrix<S>> {
        let pos = g.normalizer_pos(w).ok_or_else(|| Error::Internal(format!("{w} is not in the normalizer")))?;
        let rows = basis
            .iter()
            .map(|b| {
                let mut acc = vec![S::zero(); v.dim];
                for &y in &g.cell_cosets[pos] {
                    acc = crate::linalg::vec_add(&acc, &v.apply(g.inv(y), b));
                }
                coords.coords(&acc).ok_or_else(|| Error::Internal("Hecke action leaves the invariants".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(&rows, basis.len()))
    };
    let sys = algebra.system.clone();
    let s = sys.simples.iter().map(|x| mat(&x.lift)).collect::<Result<_>>()?;
    let z = sys.zero_gens.iter().map(|x| mat(&x.element)).collect::<Result<_>>()?;
    Ok(Invariants { module: HeckeModule::with_rank(algebra.clone(), basis.len(), s, z)?, basis })
}

/// `m ⊗_H 𝕏` as the cokernel of `(v·τ)⊗x − v⊗(τ·x)` over the generators `τ` of `H`.
pub fn tensor_x<S: Scalar>(m: &HeckeModule<S>, x: &UniversalModule<S>) -> Result<GroupRep<S>> {
    let (r, dx) = (m.rank, x.rep.dim);
    let d = r * dx;
    let mut relations = Vec::new();
    for (a, l) in m.generator_mats().into_iter().zip(x.generator_actions(&m.algebra)?) {
        for i in 0..r {
            for j in 0..dx {
                let mut v = vec![S::zero(); d];
                for k in 0..r {
                    v[k * dx + j] = v[k * dx + j].clone() + a[(i, k)].clone();
                }
                for k in 0..dx {
                    v[i * dx + k] = v[i * dx + k].clone() - l[(k, j)].clone();
                }
                if !vec_is_zero(&v) {
                    relations.push(v);
                }
            }
        }
    }
    let gens = x
        .rep
        .gens
        .iter()
        .map(|a| {
            let mut big = Matrix::zeros(d, d);
            for i in 0..r {
                big.add_block(i * dx, i * dx, a);
            }
            big
        })
        .collect();
    let full = GroupRep::new(x.rep.group.clone(), d, gens)?;
    Ok(full.quotient(&relations)?.0)
}

/// `Ind_ℙ^ℾ(V)` in the function model on `ℙ\ℾ` with fiber `V`.
pub struct Induced<S: Scalar> {
    pub rep: GroupRep<S>,
    pub j: BTreeSet<usize>,
    /// Coset of `ℙ` per element, and a representative per coset.
    pub coset_of: Vec<u32>,
    pub reps: Vec<usize>,
    pub fiber: usize,
}

impl<S: Scalar> Induced<S> {
    /// `f_{ℙ,v}`: supported on `ℙ` with `f(p) = p̄·v`.
    pub fn f_p(&self, setting: &FiniteSetting, v_rep: &GroupRep<S>, v: &[S]) -> Vec<S> {
        let g = setting.group();
        let base = self.coset_of[g.identity()];
        let mut out = vec![S::zero(); self.rep.dim];
        for (c, &x) in self.reps.iter().enumerate() {
            if self.coset_of[x] == base {
                let m = setting.to_levi(&v_rep.group, g.levi_component(&self.j, x));
                out.splice(c * self.fiber..(c + 1) * self.fiber, v_rep.apply(m, v));
            }
        }
        out
    }
}

pub fn parabolic_induce<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>) -> Result<Induced<S>> {
    let g = setting.group();
    let j = v.group.levi.j.clone();
    if v.group.n != g.n || v.group.family != g.family || v.group.field.q() != g.field.q() {
        return Err(Error::Precondition("representation is not of a Levi subgroup of this group".into()));
    }
    let (coset_of, reps) = g.parabolic_cosets(&j);
    let k = reps.len();
    let d = v.dim;
    let rep = GroupRep::from_fn(g.clone(), k * d, |x| {
        let mut a = Matrix::zeros(k * d, k * d);
        for (i, &xi) in reps.iter().enumerate() {
            let y = g.mul(xi, x);
            let jdx = coset_of[y] as usize;
            let p = g.mul(y, g.inv(reps[jdx]));
            let m = setting.to_levi(&v.group, g.levi_component(&j, p));
            a.add_block(i * d, jdx * d, &v.act(m));
        }
        a
    })?;
    Ok(Induced { rep, j, coset_of, reps, fiber: d })
}

/// Action of the Levi generators on a subspace of `V` stable under `𝕄_J`.
fn levi_subrep<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, levi: &Arc<FiniteGroup>, basis: &[Vec<S>]) -> Result<GroupRep<S>> {
    let coords = SpanCoords::new(basis, v.dim);
    GroupRep::new(
        levi.clone(),
        basis.len(),
        levi.generators
            .iter()
            .map(|&m| {
                let g = setting.levi_to_group(levi, m);
                let cols = basis
                    .iter()
                    .map(|b| coords.coords(&v.apply(g, b)).ok_or_else(|| Error::Internal("subspace is not 𝕄-stable".into())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_cols(&cols, basis.len()))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `V^ℕ` as a representation of `𝕄_J`, with its basis inside `V`.
pub fn n_invariants<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, j: &BTreeSet<usize>) -> Result<(GroupRep<S>, Vec<Vec<S>>)> {
    let levi = setting.levi_group(j)?;
    let basis = v.fixed_space(&setting.group().unipotent_radical(j));
    Ok((levi_subrep(setting, v, &levi, &basis)?, basis))
}

/// `V_ℕ = V / span{nv − v}` as a representation of `𝕄_J`.
pub fn n_coinvariants<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, j: &BTreeSet<usize>) -> Result<(GroupRep<S>, Projection<S>)> {
    let levi = setting.levi_group(j)?;
    let g = setting.group();
    let id = Matrix::identity(v.dim);
    let mut rels = Vec::new();
    for n in subgroup_generators(g, &g.unipotent_radical(j)) {
        rels.extend(v.act(n).sub(&id).col_vecs().into_iter().filter(|c| !vec_is_zero(c)));
    }
    let proj = Projection::new(&rels, v.dim);
    let gens = levi
        .generators
        .iter()
        .map(|&m| {
            let a = v.act(setting.levi_to_group(&levi, m));
            let cols: Vec<Vec<S>> = proj.complement.iter().map(|&c| proj.project(&a.col(c))).collect();
            Matrix::from_cols(&cols, proj.complement.len())
        })
        .collect();
    let rep = GroupRep::new(levi, proj.complement.len(), gens)?;
    Ok((rep, proj))
}

/// `V†`: the subrepresentation generated by `V^𝕌`.
pub fn dagger<S: Scalar>(v: &GroupRep<S>) -> Result<(GroupRep<S>, Vec<Vec<S>>)> {
    let basis = v.spin(&v.fixed_space(&v.group.unipotent));
    Ok((v.subrep(&basis)?, basis))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub bijective: bool,
    pub equivariant: bool,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.lhs_dim == self.rhs_dim && self.bijective && self.equivariant
    }
}

/// `V^{𝕌_𝕄} ⊗_{H_𝕄} H → (Ind_ℙ^ℾ V)^𝕌`, `v ⊗ h ↦ f_{ℙ,v}·h`.
pub fn check_diag_q1<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>) -> Result<DiagramReport> {
    let g = setting.group();
    let j = v.group.levi.j.clone();
    let pair = setting.levi_pair::<S>(&j)?;
    let inv_m = u_invariants(v, &pair.levi)?;
    let lhs = induct(&pair, &inv_m.module)?;
    let ind = parabolic_induce(setting, v)?;
    let rhs = u_invariants(&ind.rep, &pair.big)?;
    let coords = SpanCoords::new(&rhs.basis, ind.rep.dim);
    let mut rows = Vec::new();
    for nd in &pair.left_reps {
        let pos = g.normalizer_pos(nd).ok_or_else(|| Error::Internal(format!("{nd} is not in the normalizer")))?;
        for b in &inv_m.basis {
            let f = ind.f_p(setting, v, b);
            let mut acc = vec![S::zero(); ind.rep.dim];
            for &y in &g.cell_cosets[pos] {
                acc = crate::linalg::vec_add(&acc, &ind.rep.apply(g.inv(y), &f));
            }
            rows.push(coords.coords(&acc).ok_or_else(|| Error::Internal("f_{P,v}·τ is not 𝕌-invariant".into()))?);
        }
    }
    let (ld, rd) = (lhs.rank, rhs.module.rank);
    let phi = Matrix::from_rows(&rows, rd);
    Ok(DiagramReport {
        lhs_dim: ld,
        rhs_dim: rd,
        bijective: ld == rd && (ld == 0 || phi.is_invertible()),
        equivariant: ld == 0 || rd == 0 || is_morphism(&lhs, &rhs.module, &phi),
    })
}

/// `(V^ℕ)^{𝕌_𝕄}` against `Res(V^𝕌)`: same subspace of `V`, same `H_𝕄`-action.
pub fn check_diag_q2<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, j: &BTreeSet<usize>) -> Result<DiagramReport> {
    let pair = setting.levi_pair::<S>(j)?;
    let (vn, nbasis) = n_invariants(setting, v, j)?;
    let lhs = u_invariants(&vn, &pair.levi)?;
    let rhs = u_invariants(v, &pair.big)?;
    let res = restrict(&rhs.module, &pair.levi)?;
    let in_v: Vec<Vec<S>> = lhs
        .basis
        .iter()
        .map(|c| {
            let mut out = vec![S::zero(); v.dim];
            for (x, b) in c.iter().zip(&nbasis) {
                out = crate::linalg::vec_add(&out, &crate::linalg::vec_scale(b, x));
            }
            out
        })
        .collect();
    let coords = SpanCoords::new(&rhs.basis, v.dim);
    let t: Option<Vec<Vec<S>>> = in_v.iter().map(|x| coords.coords(x)).collect();
    let (ld, rd) = (lhs.module.rank, res.rank);
    let Some(t) = t else {
        return Ok(DiagramReport { lhs_dim: ld, rhs_dim: rd, bijective: false, equivariant: false });
    };
    let t = Matrix::from_rows(&t, rd);
    let bijective = ld == rd && (ld == 0 || t.is_invertible());
    Ok(DiagramReport { lhs_dim: ld, rhs_dim: rd, bijective, equivariant: ld == 0 || (bijective && is_morphism(&lhs.module, &res, &t)) })
}

/// `Res(V^𝕌) → (V_ℕ)^{𝕌_𝕄}` induced by the projection, inverted by averaging over `𝕌`.
pub fn check_q3_char_ne_p<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, j: &BTreeSet<usize>) -> Result<DiagramReport> {
    if S::characteristic() == setting.p() {
        return Err(Error::Precondition("the coinvariant comparison needs characteristic different from p".into()));
    }
    let g = setting.group();
    let pair = setting.levi_pair::<S>(j)?;
    let rhs = u_invariants(v, &pair.big)?;
    let res = restrict(&rhs.module, &pair.levi)?;
    let (vn, proj) = n_coinvariants(setting, v, j)?;
    let lhs = u_invariants(&vn, &pair.levi)?;
    let coords = SpanCoords::new(&lhs.basis, vn.dim);
    let phi_rows: Option<Vec<Vec<S>>> = rhs.basis.iter().map(|b| coords.coords(&proj.project(b))).collect();
    let (rd, ld) = (res.rank, lhs.module.rank);
    let Some(phi_rows) = phi_rows else {
        return Ok(DiagramReport { lhs_dim: ld, rhs_dim: rd, bijective: false, equivariant: false });
    };
    // Averaging inverse: lift along the complement, then average over 𝕌.
    let scale = S::from_i64(g.unipotent.len() as i64).inverse().expect("|𝕌| is invertible");
    let rcoords = SpanCoords::new(&rhs.basis, v.dim);
    let mut inverse_ok = true;
    let mut inv_rows = Vec::new();
    for b in &lhs.basis {
        let mut lift = vec![S::zero(); v.dim];
        for (&c, x) in proj.complement.iter().zip(b) {
            lift[c] = x.clone();
        }
        let mut avg = vec![S::zero(); v.dim];
        for &u in &g.unipotent {
            avg = crate::linalg::vec_add(&avg, &v.apply(u, &lift));
        }
        let avg = crate::linalg::vec_scale(&avg, &scale);
        inverse_ok &= vec_is_zero(&vec_sub(&proj.project(&avg), b));
        match rcoords.coords(&avg) {
            Some(c) => inv_rows.push(c),
            None => inverse_ok = false,
        }
    }
    if rd == 0 || ld == 0 {
        return Ok(DiagramReport { lhs_dim: rd, rhs_dim: ld, bijective: rd == ld && inverse_ok, equivariant: true });
    }
    let phi = Matrix::from_rows(&phi_rows, ld);
    let bijective = rd == ld && inverse_ok && Matrix::from_rows(&inv_rows, rd).mul(&phi).is_identity();
    Ok(DiagramReport { lhs_dim: rd, rhs_dim: ld, bijective, equivariant: is_morphism(&res, &lhs.module, &phi) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectivityDefect {
    pub dim_x: usize,
    /// `|𝕌|·dim 𝕏^𝕌`.
    pub bound: usize,
    pub strict: bool,
}

/// A projective `P` has `dim P = |𝕌|·dim P^𝕌` in characteristic `p`; `𝕏` does not.
pub fn projectivity_defect<S: Scalar>(setting: &FiniteSetting) -> Result<ProjectivityDefect> {
    if S::characteristic() != setting.p() {
        return Err(Error::Precondition("projectivity defect is measured in characteristic p".into()));
    }
    let x = UniversalModule::<S>::new(setting.group().clone());
    let inv = u_invariants(&x.rep, &setting.data.algebra::<S>())?;
    let bound = setting.group().unipotent.len() * inv.module.rank;
    Ok(ProjectivityDefect { dim_x: x.rep.dim, bound, strict: x.rep.dim < bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q3Witness {
    pub image_dim: usize,
    pub target_dim: usize,
    pub surjective: bool,
    /// Whether `1_𝕌 = τ_1` lies in the image.
    pub unit_in_image: bool,
}

/// Image of `R[ℾ]^𝕌 → 𝕏^𝕌` induced by the surjection `R[ℾ] → 𝕏`, `e_g ↦ g·1_𝕌`.
pub fn q3_witness<S: Scalar>(setting: &FiniteSetting) -> Result<Q3Witness> {
    let g = setting.group();
    let x = UniversalModule::<S>::new(g.clone());
    let reg = GroupRep::<S>::regular(g.clone());
    let alg = setting.data.algebra::<S>();
    let source = u_invariants(&reg, &alg)?;
    let target = u_invariants(&x.rep, &alg)?;
    let eval = |v: &[S]| -> Vec<S> {
        let mut out = vec![S::zero(); x.rep.dim];
        for (h, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let k = g.right_coset(g.inv(h));
                out[k] = out[k].clone() + c.clone();
            }
        }
        out
    };
    let coords = SpanCoords::new(&target.basis, x.rep.dim);
    let images = source
        .basis
        .iter()
        .map(|b| coords.coords(&eval(b)).ok_or_else(|| Error::Internal("evaluation leaves 𝕏^𝕌".into())))
        .collect::<Result<Vec<_>>>()?;
    let image_dim = crate::linalg::span_rank(&images, target.basis.len());
    let unit = coords.coords(&unit_vec(x.rep.dim, x.base_coset())).expect("1_𝕌 is invariant");
    let mut with_unit = images.clone();
    with_unit.push(unit);
    let unit_in_image = crate::linalg::span_rank(&with_unit, target.basis.len()) == image_dim;
    Ok(Q3Witness { image_dim, target_dim: target.basis.len(), surjective: image_dim == target.basis.len(), unit_in_image })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAdjunctionReport {
    /// `dim Hom_ℾ(Ind V, W)` and `dim Hom_𝕄(V, W^ℕ)`.
    pub ind_inv: (usize, usize),
    /// `dim Hom_ℾ(W, Ind V)` and `dim Hom_𝕄(W_ℕ, V)`.
    pub coinv_ind: (usize, usize),
}

impl GroupAdjunctionReport {
    pub fn passed(&self) -> bool {
        self.ind_inv.0 == self.ind_inv.1 && self.coinv_ind.0 == self.coinv_ind.1
    }
}

pub fn check_group_adjunction<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>, w: &GroupRep<S>) -> Result<GroupAdjunctionReport> {
    let j = v.group.levi.j.clone();
    let ind = parabolic_induce(setting, v)?;
    let (wn, _) = n_invariants(setting, w, &j)?;
    let (w_n, _) = n_coinvariants(setting, w, &j)?;
    Ok(GroupAdjunctionReport {
        ind_inv: (rep_hom_space(&ind.rep, w).len(), rep_hom_space(v, &wn).len()),
        coinv_ind: (rep_hom_space(w, &ind.rep).len(), rep_hom_space(&w_n, v).len()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContragredientReport {
    /// `Ind(V^∨) ≅ Ind(V)^∨`.
    pub induction: bool,
    /// `(W_ℕ)^∨ ≅ (W^∨)^ℕ` for `W = Ind(V)`.
    pub coinvariants: bool,
}

pub fn check_contra_ind<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>) -> Result<ContragredientReport> {
    let j = v.group.levi.j.clone();
    let ind = parabolic_induce(setting, v)?;
    let lhs = parabolic_induce(setting, &v.contragredient()?)?;
    let induction = find_rep_isomorphism(&lhs.rep, &ind.rep.contragredient()?).is_some();
    let (w_n, _) = n_coinvariants(setting, &ind.rep, &j)?;
    let (wd_n, _) = n_invariants(setting, &ind.rep.contragredient()?, &j)?;
    let coinvariants = find_rep_isomorphism(&w_n.contragredient()?, &wd_n).is_some();
    Ok(ContragredientReport { induction, coinvariants })
}

/// `(Ind V)† ≅ Ind(V†)`.
pub fn check_dagger<S: Scalar>(setting: &FiniteSetting, v: &GroupRep<S>) -> Result<bool> {
    let lhs = dagger(&parabolic_induce(setting, v)?.rep)?.0;
    let rhs = parabolic_induce(setting, &dagger(v)?.0)?.rep;
    Ok(find_rep_isomorphism(&lhs, &rhs).is_some())
}

/// `𝕏^𝕌 ≅ H` as right `H`-modules.
pub fn universal_invariants_are_regular<S: Scalar>(setting: &FiniteSetting) -> Result<bool> {
    let alg = setting.data.algebra::<S>();
    let x = UniversalModule::<S>::new(setting.group().clone());
    let inv = u_invariants(&x.rep, &alg)?;
    Ok(find_isomorphism(&inv.module, &HeckeModule::regular(alg)?).is_some())
}

/// One `(ℾ, J, V)` cell of the finite diagram grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    pub group: String,
    pub j: BTreeSet<usize>,
    pub coeff: String,
    /// `triv` or `universal`, for `Triv_𝕄` or `𝕏_𝕄`.
    pub v: String,
    pub q1: DiagramReport,
    pub q2: DiagramReport,
    /// Present when the characteristic is not `p`.
    pub q3: Option<DiagramReport>,
}

impl GridCell {
    pub fn passed(&self) -> bool {
        self.q1.passed() && self.q2.passed() && self.q3.as_ref().is_none_or(|r| r.passed())
    }
}

/// Runs Q1 on `V ∈ {Triv_𝕄, 𝕏_𝕄}` and Q2, Q3 on `Ind_ℙ^ℾ V`, for every `J`.
pub fn diagram_grid<S: Scalar>(setting: &FiniteSetting) -> Result<Vec<GridCell>> {
    let mut out = Vec::new();
    for j in setting.all_levis() {
        let m = setting.levi_group(&j)?;
        for (name, v) in [("triv", GroupRep::<S>::trivial(m.clone())), ("universal", UniversalModule::<S>::new(m.clone()).rep)] {
            let ind = parabolic_induce(setting, &v)?;
            let q3 = if S::characteristic() == setting.p() { None } else { Some(check_q3_char_ne_p(setting, &ind.rep, &j)?) };
            out.push(GridCell {
                group: setting.group().descriptor().to_string(),
                j: j.clone(),
                coeff: S::descriptor(),
                v: name.into(),
                q1: check_diag_q1(setting, &v)?,
                q2: check_diag_q2(setting, &ind.rep, &j)?,
                q3,
            });
        }
    }
    Ok(out)
}
