//! Root data of types A1, A1×A1, A2 and the combinatorics of their (affine) Weyl groups.
//!
//! Roots live in the `GL_n` coordinate lattice: `e_i − e_j` is a vector with `+1` at
//! `i` and `−1` at `j`. Simple reflections are numbered from 1; index 0 is reserved
//! for the affine node.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A1xA1,
    A2,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A1 => 1,
            CartanType::A1xA1 | CartanType::A2 => 2,
        }
    }

    /// Ambient dimension of the `GL_n` coordinate lattice.
    pub fn ambient(self) -> usize {
        match self {
            CartanType::A1 => 2,
            CartanType::A1xA1 => 4,
            CartanType::A2 => 3,
        }
    }

    /// Type of `GL_n` / `SL_n`.
    pub fn for_gl(n: usize) -> Result<Self> {
        match n {
            2 => Ok(CartanType::A1),
            3 => Ok(CartanType::A2),
            _ => Err(Error::Config(format!("unsupported rank n = {n}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub n: usize,
    /// Simple root `k` (1-based) is `e_a − e_{a+1}` with `a = simple_pos[k-1]`.
    pub simple_pos: Vec<usize>,
    pub positive_roots: Vec<Vec<i64>>,
    /// `⟨α_i, α_j^∨⟩`.
    pub pairing: Vec<Vec<i64>>,
}

fn root_vec(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = -1;
    v
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        let n = cartan_type.ambient();
        let simple_pos = match cartan_type {
            CartanType::A1 => vec![0],
            CartanType::A1xA1 => vec![0, 2],
            CartanType::A2 => vec![0, 1],
        };
        let positive_roots = match cartan_type {
            CartanType::A1 => vec![root_vec(n, 0, 1)],
            CartanType::A1xA1 => vec![root_vec(n, 0, 1), root_vec(n, 2, 3)],
            CartanType::A2 => vec![root_vec(n, 0, 1), root_vec(n, 1, 2), root_vec(n, 0, 2)],
        };
        let simples: Vec<Vec<i64>> = simple_pos.iter().map(|&a| root_vec(n, a, a + 1)).collect();
        // For simply-laced type A the coroot of α is α itself in these coordinates.
        let pairing = simples.iter().map(|a| simples.iter().map(|b| dot(a, b)).collect()).collect();
        RootDatum { cartan_type, n, simple_pos, positive_roots, pairing }
    }

    pub fn rank(&self) -> usize {
        self.simple_pos.len()
    }

    pub fn simple_root(&self, k: usize) -> Vec<i64> {
        let a = self.simple_pos[k - 1];
        root_vec(self.n, a, a + 1)
    }

    pub fn simple_indices(&self) -> Vec<usize> {
        (1..=self.rank()).collect()
    }

    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        v
    }

    pub fn is_positive_root(&self, a: &[i64]) -> bool {
        self.positive_roots.iter().any(|r| r.as_slice() == a)
    }

    /// Coefficients of a positive root in the simple roots.
    pub fn simple_coefficients(&self, a: &[i64]) -> Option<Vec<i64>> {
        // For type A the coefficient of α_k is the partial sum of coordinates up to position a_k.
        let coeffs: Vec<i64> = self.simple_pos.iter().map(|&p| a[..=p].iter().sum()).collect();
        let mut back = vec![0; self.n];
        for (k, c) in coeffs.iter().enumerate() {
            let s = self.simple_root(k + 1);
            for i in 0..self.n {
                back[i] += c * s[i];
            }
        }
        (back == a).then_some(coeffs)
    }

    /// Affine simple roots: `(α, 0)` for simple α and `(−θ, 1)` per irreducible component.
    pub fn affine_simple(&self) -> Vec<AffineRoot> {
        let mut out: Vec<AffineRoot> = (1..=self.rank()).map(|k| AffineRoot::new(self.simple_root(k), 0)).collect();
        for block in self.levi(&self.simple_indices().into_iter().collect()).blocks() {
            if block.len() >= 2 {
                let theta = root_vec(self.n, block[0], *block.last().unwrap());
                out.push(AffineRoot::new(theta.iter().map(|x| -x).collect(), 1));
            }
        }
        out
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::identity(self.n)
    }

    pub fn simple_reflection(&self, k: usize) -> WeylElement {
        let a = self.simple_pos[k - 1];
        WeylElement::transposition(self.n, a, a + 1)
    }

    /// All elements of `W₀`, sorted by length then permutation.
    pub fn elements(&self) -> Vec<WeylElement> {
        let mut seen: HashSet<WeylElement> = HashSet::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for k in self.simple_indices() {
                let x = w.mul(&self.simple_reflection(k));
                if seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
        }
        let mut v: Vec<WeylElement> = seen.into_iter().collect();
        v.sort_by(|a, b| (a.length(), &a.perm).cmp(&(b.length(), &b.perm)));
        v
    }

    pub fn longest(&self) -> WeylElement {
        self.elements().into_iter().max_by_key(|w| w.length()).unwrap()
    }

    /// Lexicographically smallest reduced word (1-based simple indices).
    pub fn reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while cur.length() > 0 {
            let k = self
                .simple_indices()
                .into_iter()
                .find(|&k| self.simple_reflection(k).mul(&cur).length() < cur.length())
                .expect("nontrivial element has a left descent");
            word.push(k);
            cur = self.simple_reflection(k).mul(&cur);
        }
        word
    }

    pub fn from_word(&self, word: &[usize]) -> WeylElement {
        word.iter().fold(self.identity(), |acc, &k| acc.mul(&self.simple_reflection(k)))
    }

    pub fn levi(&self, j: &BTreeSet<usize>) -> StandardLevi {
        StandardLevi::new(self, j.clone())
    }

    /// Simple indices `k` with `w s_k w⁻¹` simple.
    pub fn conjugate_levi(&self, w: &WeylElement, j: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        let winv = w.inverse();
        j.iter()
            .map(|&k| {
                let c = w.mul(&self.simple_reflection(k)).mul(&winv);
                self.simple_indices()
                    .into_iter()
                    .find(|&k2| self.simple_reflection(k2) == c)
                    .ok_or_else(|| Error::Domain(format!("conjugate of s{k} is not simple")))
            })
            .collect()
    }

    /// `^M W`: representatives of `W_J\W₀` of minimal length.
    pub fn min_coset_reps(&self, j: &BTreeSet<usize>) -> Vec<WeylElement> {
        self.elements()
            .into_iter()
            .filter(|d| j.iter().all(|&k| self.simple_reflection(k).mul(d).length() > d.length()))
            .collect()
    }

    /// `W^M`: representatives of `W₀/W_J` of minimal length.
    pub fn min_right_coset_reps(&self, j: &BTreeSet<usize>) -> Vec<WeylElement> {
        self.elements()
            .into_iter()
            .filter(|d| j.iter().all(|&k| d.mul(&self.simple_reflection(k)).length() > d.length()))
            .collect()
    }

    /// Splits `w = m·d` with `m ∈ W_J`, `d ∈ ^M W`.
    pub fn split_left(&self, j: &BTreeSet<usize>, w: &WeylElement) -> (WeylElement, WeylElement) {
        let mut d = w.clone();
        let mut m = self.identity();
        while let Some(&k) = j.iter().find(|&&k| self.simple_reflection(k).mul(&d).length() < d.length()) {
            let s = self.simple_reflection(k);
            d = s.mul(&d);
            m = m.mul(&s);
        }
        (m, d)
    }

    /// Splits `w = e·m` with `e ∈ W^M`, `m ∈ W_J`.
    pub fn split_right(&self, j: &BTreeSet<usize>, w: &WeylElement) -> (WeylElement, WeylElement) {
        let (m, d) = self.split_left(j, &w.inverse());
        (d.inverse(), m.inverse())
    }
}

/// A finite Weyl group element as a permutation `i ↦ perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(a, b);
        WeylElement { perm }
    }

    /// `(self·o)(i) = self(o(i))`.
    pub fn mul(&self, o: &Self) -> Self {
        WeylElement { perm: o.perm.iter().map(|&i| self.perm[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        WeylElement { perm }
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let n = self.perm.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.perm[i] > self.perm[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Action on a coordinate vector: `(w·x)_{w(i)} = x_i`.
    pub fn act(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; x.len()];
        for (i, &v) in x.iter().enumerate() {
            out[self.perm[i]] = v;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardLevi {
    pub n: usize,
    pub j: BTreeSet<usize>,
    /// Block id per coordinate.
    pub block_of: Vec<usize>,
}

impl StandardLevi {
    pub fn new(datum: &RootDatum, j: BTreeSet<usize>) -> Self {
        let n = datum.n;
        let mut block_of: Vec<usize> = (0..n).collect();
        for &k in &j {
            let a = datum.simple_pos[k - 1];
            let (x, y) = (block_of[a], block_of[a + 1]);
            for b in block_of.iter_mut() {
                if *b == y {
                    *b = x;
                }
            }
        }
        // Renumber blocks in order of first appearance.
        let mut ids: Vec<usize> = Vec::new();
        for &b in &block_of {
            if !ids.contains(&b) {
                ids.push(b);
            }
        }
        let block_of = block_of.iter().map(|b| ids.iter().position(|x| x == b).unwrap()).collect();
        StandardLevi { n, j, block_of }
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let nb = self.block_of.iter().max().map_or(0, |m| m + 1);
        (0..nb).map(|b| (0..self.n).filter(|&i| self.block_of[i] == b).collect()).collect()
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }

    /// `Σ_J⁺`.
    pub fn positive_roots(&self, datum: &RootDatum) -> Vec<Vec<i64>> {
        datum
            .positive_roots
            .iter()
            .filter(|r| {
                let i = r.iter().position(|&x| x == 1).unwrap();
                let j = r.iter().position(|&x| x == -1).unwrap();
                self.same_block(i, j)
            })
            .cloned()
            .collect()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        (0..self.n).all(|i| self.same_block(i, w.perm[i]))
    }
}

/// An affine root `(α, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub alpha: Vec<i64>,
    pub r: i64,
}

impl AffineRoot {
    pub fn new(alpha: Vec<i64>, r: i64) -> Self {
        AffineRoot { alpha, r }
    }

    /// Positive iff `r > 0`, or `r = 0` and `α ∈ Σ⁺`.
    pub fn is_positive(&self, datum: &RootDatum) -> bool {
        self.r > 0 || (self.r == 0 && datum.is_positive_root(&self.alpha))
    }
}

/// An element `w₀·t_λ` of the extended affine Weyl group `Λ ⋊ W₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineWeylElement {
    pub w0: WeylElement,
    pub lambda: Vec<i64>,
}

impl AffineWeylElement {
    pub fn new(w0: WeylElement, lambda: Vec<i64>) -> Self {
        AffineWeylElement { w0, lambda }
    }

    pub fn translation(lambda: Vec<i64>) -> Self {
        let n = lambda.len();
        AffineWeylElement { w0: WeylElement::identity(n), lambda }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let lambda = (0..self.lambda.len()).map(|i| self.lambda[o.w0.perm[i]] + o.lambda[i]).collect();
        AffineWeylElement { w0: self.w0.mul(&o.w0), lambda }
    }

    pub fn inverse(&self) -> Self {
        let winv = self.w0.inverse();
        let lambda = (0..self.lambda.len()).map(|i| -self.lambda[winv.perm[i]]).collect();
        AffineWeylElement { w0: winv, lambda }
    }

    /// `(α, r) ↦ (w₀α, r − ⟨ν(λ), α⟩)` with `⟨ν(λ), α⟩ = −λ·α`.
    pub fn act(&self, a: &AffineRoot) -> AffineRoot {
        AffineRoot { alpha: self.w0.act(&a.alpha), r: a.r + dot(&self.lambda, &a.alpha) }
    }

    /// Membership in the monoid `W_{M⁺}`.
    pub fn is_levi_positive(&self, datum: &RootDatum, levi: &StandardLevi) -> Result<bool> {
        if !levi.contains(&self.w0) {
            return Err(Error::Domain("finite part is not in the Levi Weyl group".into()));
        }
        let sigma_m = levi.positive_roots(datum);
        Ok(datum
            .positive_roots
            .iter()
            .filter(|r| !sigma_m.contains(r))
            .all(|r| dot(&self.lambda, r) >= 0))
    }

    /// Membership in `W_{M⁻}`: the inverse is M-positive.
    pub fn is_levi_negative(&self, datum: &RootDatum, levi: &StandardLevi) -> Result<bool> {
        self.inverse().is_levi_positive(datum, levi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn root_counts() {
        assert_eq!(RootDatum::new(CartanType::A1).positive_roots.len(), 1);
        assert_eq!(RootDatum::new(CartanType::A1xA1).positive_roots.len(), 2);
        assert_eq!(RootDatum::new(CartanType::A2).positive_roots.len(), 3);
    }

    #[test]
    fn pairing_is_cartan_matrix() {
        assert_eq!(RootDatum::new(CartanType::A2).pairing, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(RootDatum::new(CartanType::A1xA1).pairing, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn positive_roots_are_nonnegative_combinations() {
        for t in [CartanType::A1, CartanType::A1xA1, CartanType::A2] {
            let d = RootDatum::new(t);
            for r in &d.positive_roots {
                let c = d.simple_coefficients(r).unwrap();
                assert!(c.iter().all(|&x| x >= 0));
            }
        }
    }

    #[test]
    fn lengths_and_words_in_a2() {
        let d = RootDatum::new(CartanType::A2);
        let w = d.from_word(&[1, 2, 1]);
        assert_eq!(w.perm, vec![2, 1, 0]);
        assert_eq!(w.length(), 3);
        assert_eq!(d.reduced_word(&w), vec![1, 2, 1]);
        assert_eq!(d.reduced_word(&d.identity()), Vec::<usize>::new());
        assert_eq!(d.reduced_word(&d.simple_reflection(2)), vec![2]);
    }

    #[test]
    fn coset_reps_examples() {
        let d = RootDatum::new(CartanType::A2);
        assert_eq!(d.min_coset_reps(&set(&[1, 2])), vec![d.identity()]);
        assert_eq!(d.min_coset_reps(&set(&[])).len(), 6);
        let reps = d.min_coset_reps(&set(&[1]));
        let expected = vec![d.identity(), d.from_word(&[2]), d.from_word(&[2, 1])];
        assert_eq!(reps.len(), 3);
        for e in expected {
            assert!(reps.contains(&e));
        }
    }

    #[test]
    fn affine_action_examples() {
        let d = RootDatum::new(CartanType::A1);
        let alpha = d.simple_root(1);
        let a0 = AffineRoot::new(alpha.clone(), 0);
        let id = AffineWeylElement::translation(vec![0, 0]);
        assert_eq!(id.act(&a0), a0);
        let t = AffineWeylElement::translation(vec![1, 0]);
        assert_eq!(t.act(&a0), AffineRoot::new(alpha.clone(), 1));
        let s = AffineWeylElement::new(d.simple_reflection(1), vec![0, 0]);
        assert_eq!(s.act(&a0), AffineRoot::new(vec![-1, 1], 0));
    }

    #[test]
    fn levi_positivity_examples() {
        let d = RootDatum::new(CartanType::A1);
        let t = d.levi(&set(&[]));
        let g = d.levi(&set(&[1]));
        let x = AffineWeylElement::translation(vec![1, 0]);
        let y = AffineWeylElement::translation(vec![0, 1]);
        assert!(x.is_levi_positive(&d, &t).unwrap());
        assert!(!y.is_levi_positive(&d, &t).unwrap());
        assert!(y.is_levi_negative(&d, &t).unwrap());
        assert!(y.is_levi_positive(&d, &g).unwrap());
        let s = AffineWeylElement::new(d.simple_reflection(1), vec![0, 0]);
        assert!(s.is_levi_positive(&d, &t).is_err());
    }

    #[test]
    fn longest_conjugates_levi() {
        let d = RootDatum::new(CartanType::A2);
        let w = d.longest();
        assert_eq!(d.conjugate_levi(&w, &set(&[1])).unwrap(), set(&[2]));
    }

    #[test]
    fn affine_simple_roots() {
        let d = RootDatum::new(CartanType::A2);
        let aff = d.affine_simple();
        assert_eq!(aff.len(), 3);
        assert_eq!(aff[2], AffineRoot::new(vec![-1, 0, 1], 1));
    }
}
