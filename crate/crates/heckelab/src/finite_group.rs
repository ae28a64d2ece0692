//! Finite reductive groups `GL_n(F_q)`, `SL_n(F_q)` and their standard Levi subgroups,
//! materialized by full enumeration.
//!
//! A group built with a Levi index set `J` is the block-diagonal subgroup `𝕄_J`; the
//! whole group is the case `J = Π`. Elements are addressed by dense ids.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CartanType, RootDatum, StandardLevi, WeylElement};
use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::monomial::Monomial;

pub const DEFAULT_SIZE_LIMIT: u64 = 10_000_000;

/// Element-count cap, overridable through `HECKELAB_SIZE_LIMIT`.
pub fn size_limit() -> u64 {
    std::env::var("HECKELAB_SIZE_LIMIT").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SIZE_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GL => "gl",
            Family::SL => "sl",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Family::GL),
            "sl" => Ok(Family::SL),
            _ => Err(Error::parse("family", format!("expected gl or sl, got {s:?}"))),
        }
    }
}

/// `fam:n:q`, e.g. `gl:2:3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub family: Family,
    pub n: usize,
    pub q: u8,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.family, self.n, self.q)
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse("group", format!("expected fam:n:q, got {s:?}")));
        }
        let family = parts[0].parse()?;
        let n = parts[1].parse().map_err(|_| Error::parse("group", format!("bad rank {:?}", parts[1])))?;
        let q = parts[2].parse().map_err(|_| Error::parse("group", format!("bad field size {:?}", parts[2])))?;
        Ok(GroupDescriptor { family, n, q })
    }
}

/// Row-major `n×n` matrix over `F_q` with entry codes.
pub type Mat = [u8; 9];

pub struct FiniteGroup {
    pub family: Family,
    pub n: usize,
    pub field: Gf,
    pub datum: RootDatum,
    pub levi: StandardLevi,
    elements: Vec<Mat>,
    index: HashMap<Mat, u32>,
    inverse: Vec<u32>,
    identity: usize,
    /// Upper unitriangular elements of this group.
    pub unipotent: Vec<usize>,
    pub torus: Vec<usize>,
    /// Monomial elements, sorted by their [`Monomial`] key.
    pub normalizer: Vec<Monomial>,
    normalizer_index: HashMap<Monomial, usize>,
    /// Right coset `𝕌x` id per element, and one representative per coset.
    right_coset_of: Vec<u32>,
    pub right_coset_reps: Vec<usize>,
    /// Double coset `𝕌n𝕌` id per element (index into `normalizer`).
    cell_of: Vec<u32>,
    /// Right cosets contained in each double coset.
    pub cell_cosets: Vec<Vec<usize>>,
    /// Generators used for words: root elements, torus generators, simple lifts.
    pub generators: Vec<usize>,
    word_parent: Vec<(u32, u8)>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}:{}:{} J={:?}, order {})", self.family, self.n, self.field.q(), self.levi.j, self.order())
    }
}

fn expected_order(family: Family, n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    let mut o: u64 = (0..n).map(|i| qn - q.pow(i as u32)).product();
    if family == Family::SL {
        o /= q - 1;
    }
    o
}

impl FiniteGroup {
    /// The whole group `ℾ`.
    pub fn build(family: Family, n: usize, q: u8) -> Result<Self> {
        let datum = RootDatum::new(CartanType::for_gl(n)?);
        let all: BTreeSet<usize> = datum.simple_indices().into_iter().collect();
        Self::build_levi(family, n, q, &all)
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        Self::build(d.family, d.n, d.q)
    }

    /// The standard Levi subgroup `𝕄_J`.
    pub fn build_levi(family: Family, n: usize, q: u8, j: &BTreeSet<usize>) -> Result<Self> {
        Self::build_levi_limited(family, n, q, j, size_limit())
    }

    pub fn build_levi_limited(family: Family, n: usize, q: u8, j: &BTreeSet<usize>, limit: u64) -> Result<Self> {
        let field = Gf::new(q)?;
        let datum = RootDatum::new(CartanType::for_gl(n)?);
        if let Some(&k) = j.iter().find(|&&k| k == 0 || k > datum.rank()) {
            return Err(Error::Config(format!("simple index {k} out of range")));
        }
        let order = expected_order(family, n, q as u64);
        if order > limit {
            return Err(Error::Config(format!("group {family}:{n}:{q} has {order} elements, above the limit {limit}")));
        }
        let levi = datum.levi(j);
        let total = (q as u64).pow((n * n) as u32);
        let mut elements = Vec::new();
        let mut m: Mat = [0; 9];
        for code in 0..total {
            let mut c = code;
            for x in m.iter_mut().take(n * n) {
                *x = (c % q as u64) as u8;
                c /= q as u64;
            }
            let block_ok = (0..n).all(|r| (0..n).all(|s| m[r * n + s] == 0 || levi.same_block(r, s)));
            if !block_ok {
                continue;
            }
            let d = det(&field, n, &m);
            if d == 0 || (family == Family::SL && d != 1) {
                continue;
            }
            elements.push(m);
        }
        let index: HashMap<Mat, u32> = elements.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let mut g = FiniteGroup {
            family,
            n,
            field,
            datum,
            levi,
            elements,
            index,
            inverse: Vec::new(),
            identity: 0,
            unipotent: Vec::new(),
            torus: Vec::new(),
            normalizer: Vec::new(),
            normalizer_index: HashMap::new(),
            right_coset_of: Vec::new(),
            right_coset_reps: Vec::new(),
            cell_of: Vec::new(),
            cell_cosets: Vec::new(),
            generators: Vec::new(),
            word_parent: Vec::new(),
        };
        g.identity = g.id_of(&g.identity_mat()).expect("identity is an element");
        g.inverse = (0..g.order()).map(|i| g.id_of(&g.invert_mat(&g.elements[i])).unwrap() as u32).collect();
        g.unipotent = (0..g.order()).filter(|&i| g.is_unitriangular(&g.elements[i])).collect();
        g.torus = (0..g.order()).filter(|&i| g.is_diagonal(&g.elements[i])).collect();
        let mut normalizer: Vec<Monomial> = (0..g.order()).filter_map(|i| g.to_monomial(&g.elements[i])).collect();
        normalizer.sort();
        g.normalizer_index = normalizer.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        g.normalizer = normalizer;
        g.build_cosets();
        g.build_words();
        Ok(g)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor { family: self.family, n: self.n, q: self.field.q() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, id: usize) -> &Mat {
        &self.elements[id]
    }

    pub fn id_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub fn is_whole_group(&self) -> bool {
        self.levi.j.len() == self.datum.rank()
    }

    pub fn identity_mat(&self) -> Mat {
        let mut m = [0u8; 9];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    pub fn mul_mat(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.n;
        let f = &self.field;
        let mut out = [0u8; 9];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(a[i * n + k], b[k * n + j]));
                }
                out[i * n + j] = acc;
            }
        }
        out
    }

    fn invert_mat(&self, a: &Mat) -> Mat {
        let n = self.n;
        let f = &self.field;
        let mut m = *a;
        let mut inv = self.identity_mat();
        for c in 0..n {
            let p = (c..n).find(|&r| m[r * n + c] != 0).expect("invertible matrix");
            for j in 0..n {
                m.swap(c * n + j, p * n + j);
                inv.swap(c * n + j, p * n + j);
            }
            let s = f.inv(m[c * n + c]);
            for j in 0..n {
                m[c * n + j] = f.mul(m[c * n + j], s);
                inv[c * n + j] = f.mul(inv[c * n + j], s);
            }
            for r in 0..n {
                if r != c && m[r * n + c] != 0 {
                    let t = m[r * n + c];
                    for j in 0..n {
                        m[r * n + j] = f.sub(m[r * n + j], f.mul(t, m[c * n + j]));
                        inv[r * n + j] = f.sub(inv[r * n + j], f.mul(t, inv[c * n + j]));
                    }
                }
            }
        }
        inv
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.id_of(&self.mul_mat(&self.elements[a], &self.elements[b])).expect("closed under product")
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    fn is_unitriangular(&self, m: &Mat) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| if i == j { m[i * n + j] == 1 } else { i < j || m[i * n + j] == 0 }))
    }

    fn is_diagonal(&self, m: &Mat) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| i == j || m[i * n + j] == 0))
    }

    /// Monomial key of a monomial matrix.
    pub fn to_monomial(&self, m: &Mat) -> Option<Monomial> {
        let n = self.n;
        let mut perm = vec![0; n];
        let mut ulog = vec![0i64; n];
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&r| m[r * n + i] != 0).collect();
            if nz.len() != 1 {
                return None;
            }
            perm[i] = nz[0];
            ulog[i] = self.field.log(m[nz[0] * n + i]) as i64;
        }
        Some(Monomial::new(&perm, &vec![0; n], &ulog, self.field.units()))
    }

    pub fn monomial_matrix(&self, x: &Monomial) -> Mat {
        assert!(x.is_finite(), "finite groups contain only valuation-free monomials");
        let n = self.n;
        let mut m = [0u8; 9];
        for i in 0..n {
            m[x.perm()[i] as usize * n + i] = self.field.exp(x.ulog()[i] as i64);
        }
        m
    }

    pub fn monomial_id(&self, x: &Monomial) -> Option<usize> {
        self.id_of(&self.monomial_matrix(x))
    }

    pub fn normalizer_pos(&self, x: &Monomial) -> Option<usize> {
        self.normalizer_index.get(x).copied()
    }

    /// Elementary matrix `x_{ij}(a)` (identity plus `a` at `(i, j)`).
    pub fn root_element(&self, i: usize, j: usize, a: u8) -> Mat {
        let mut m = self.identity_mat();
        m[i * self.n + j] = a;
        m
    }

    fn build_cosets(&mut self) {
        let order = self.order();
        let mut right = vec![u32::MAX; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if right[g] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(g);
            for &u in &self.unipotent {
                let x = self.mul(u, g);
                right[x] = id;
            }
        }
        let mut cell = vec![u32::MAX; order];
        for (c, x) in self.normalizer.iter().enumerate() {
            let nid = self.monomial_id(x).unwrap();
            for &u in &self.unipotent {
                let un = self.mul(u, nid);
                for &v in &self.unipotent {
                    cell[self.mul(un, v)] = c as u32;
                }
            }
        }
        debug_assert!(cell.iter().all(|&c| c != u32::MAX), "Bruhat cells cover the group");
        let mut cell_cosets = vec![Vec::new(); self.normalizer.len()];
        for &r in &reps {
            cell_cosets[cell[r] as usize].push(r);
        }
        self.right_coset_of = right;
        self.right_coset_reps = reps;
        self.cell_of = cell;
        self.cell_cosets = cell_cosets;
    }

    /// Id of the right coset `𝕌g`.
    pub fn right_coset(&self, g: usize) -> usize {
        self.right_coset_of[g] as usize
    }

    /// Index in `normalizer` of the double coset `𝕌g𝕌`.
    pub fn cell(&self, g: usize) -> usize {
        self.cell_of[g] as usize
    }

    pub fn simple_indices(&self) -> Vec<usize> {
        self.levi.j.iter().copied().collect()
    }

    /// Simple lift `n_s`: the block `(0 1; −1 0)` at the positions of `α_k`.
    pub fn simple_lift(&self, k: usize) -> Monomial {
        let a = self.datum.simple_pos[k - 1];
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(a, a + 1);
        let mut ulog = vec![0i64; n];
        ulog[a] = self.field.log_minus_one() as i64;
        Monomial::new(&perm, &vec![0; n], &ulog, self.field.units())
    }

    /// Lift `n_w` along the lexicographically smallest reduced word.
    pub fn weyl_lift(&self, w: &WeylElement) -> Monomial {
        self.datum
            .reduced_word(w)
            .iter()
            .fold(Monomial::identity(self.n, self.field.units()), |acc, &k| acc.mul(&self.simple_lift(k)))
    }

    /// Lift table over the Weyl group of this group.
    pub fn weyl_lifts(&self) -> Vec<(WeylElement, Monomial)> {
        self.weyl_elements().into_iter().map(|w| {
            let l = self.weyl_lift(&w);
            (w, l)
        }).collect()
    }

    /// `W_J`, the Weyl group of this group.
    pub fn weyl_elements(&self) -> Vec<WeylElement> {
        self.datum.elements().into_iter().filter(|w| self.levi.contains(w)).collect()
    }

    pub fn longest(&self) -> WeylElement {
        self.weyl_elements().into_iter().max_by_key(|w| w.length()).unwrap()
    }

    /// Torus generators: `diag(g at i)` for GL, `h_i = diag(g at i, g⁻¹ at i+1)` for SL.
    pub fn torus_generators(&self) -> Vec<Monomial> {
        let n = self.n;
        let m = self.field.units();
        if m == 1 {
            return Vec::new();
        }
        match self.family {
            Family::GL => (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    Monomial::unit(&e, m)
                })
                .collect(),
            Family::SL => (0..n - 1)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e[i + 1] = -1;
                    Monomial::unit(&e, m)
                })
                .collect(),
        }
    }

    fn build_words(&mut self) {
        let n = self.n;
        let mut gens: Vec<usize> = Vec::new();
        for &k in &self.levi.j {
            let a = self.datum.simple_pos[k - 1];
            for b in self.field.additive_basis() {
                gens.push(self.id_of(&self.root_element(a, a + 1, b)).unwrap());
            }
            gens.push(self.monomial_id(&self.simple_lift(k)).unwrap());
        }
        for t in self.torus_generators() {
            gens.push(self.monomial_id(&t).unwrap());
        }
        let _ = n;
        let mut parent = vec![(u32::MAX, u8::MAX); self.order()];
        parent[self.identity] = (self.identity as u32, u8::MAX);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let x = self.mul(g, s);
                if parent[x].0 == u32::MAX {
                    parent[x] = (g as u32, k as u8);
                    queue.push_back(x);
                }
            }
        }
        assert!(parent.iter().all(|p| p.0 != u32::MAX), "generators generate the group");
        self.generators = gens;
        self.word_parent = parent;
    }

    /// Word `g = gen[i_1]·…·gen[i_k]` as generator positions.
    pub fn word(&self, g: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = g;
        while cur != self.identity {
            let (p, k) = self.word_parent[cur];
            w.push(k as usize);
            cur = p as usize;
        }
        w.reverse();
        w
    }

    /// Right cosets `P_K x` of a standard parabolic `P_K ⊇ B` inside this group.
    pub fn parabolic_cosets(&self, k: &BTreeSet<usize>) -> (Vec<u32>, Vec<usize>) {
        let lk = self.datum.levi(k);
        let n = self.n;
        let in_p: Vec<usize> = (0..self.order())
            .filter(|&g| {
                let m = &self.elements[g];
                (0..n).all(|r| (0..n).all(|s| m[r * n + s] == 0 || r <= s || lk.same_block(r, s)))
            })
            .collect();
        let mut coset = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if coset[g] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(g);
            for &p in &in_p {
                coset[self.mul(p, g)] = id;
            }
        }
        (coset, reps)
    }

    /// Elements of the standard parabolic `ℙ_K`.
    pub fn parabolic(&self, k: &BTreeSet<usize>) -> Vec<usize> {
        let lk = self.datum.levi(k);
        let n = self.n;
        (0..self.order())
            .filter(|&g| {
                let m = &self.elements[g];
                (0..n).all(|r| (0..n).all(|s| m[r * n + s] == 0 || r <= s || lk.same_block(r, s)))
            })
            .collect()
    }

    /// Elements of the unipotent radical `ℕ_K`.
    pub fn unipotent_radical(&self, k: &BTreeSet<usize>) -> Vec<usize> {
        let lk = self.datum.levi(k);
        let n = self.n;
        self.unipotent
            .iter()
            .copied()
            .filter(|&u| {
                let m = &self.elements[u];
                (0..n).all(|r| (0..n).all(|s| r == s || m[r * n + s] == 0 || !lk.same_block(r, s)))
            })
            .collect()
    }

    /// Block-diagonal part of a block upper triangular matrix.
    pub fn levi_component(&self, k: &BTreeSet<usize>, g: usize) -> usize {
        let lk = self.datum.levi(k);
        let n = self.n;
        let mut m = self.elements[g];
        for r in 0..n {
            for s in 0..n {
                if !lk.same_block(r, s) {
                    m[r * n + s] = 0;
                }
            }
        }
        self.id_of(&m).expect("Levi component lies in the group")
    }

    /// Borel `𝔹 = 𝕋𝕌`.
    pub fn borel(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.torus.iter().flat_map(|&t| self.unipotent.iter().map(move |&u| (t, u))).map(|(t, u)| self.mul(t, u)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Partition into `𝕌`-double cosets (by `𝒩_ℾ`) or `𝔹`-double cosets (by `W`).
    pub fn double_cosets(&self, by_borel: bool) -> Vec<Vec<usize>> {
        if !by_borel {
            let mut cells = vec![Vec::new(); self.normalizer.len()];
            for g in 0..self.order() {
                cells[self.cell(g)].push(g);
            }
            return cells;
        }
        let ws = self.weyl_elements();
        let mut cells = vec![Vec::new(); ws.len()];
        for g in 0..self.order() {
            let w = self.normalizer[self.cell(g)].weyl();
            cells[ws.iter().position(|x| *x == w).unwrap()].push(g);
        }
        cells
    }

    /// Checks `𝔹n_s𝔹n_s𝔹 = 𝔹n_s𝔹 ⊔ 𝔹` as subsets.
    pub fn verify_bruhat_bsbsb(&self, k: usize) -> bool {
        let borel = self.borel();
        let ns = self.monomial_id(&self.simple_lift(k)).unwrap();
        let bsb: HashSet<usize> = borel.iter().flat_map(|&b| borel.iter().map(move |&c| (b, c))).map(|(b, c)| self.mul(self.mul(b, ns), c)).collect();
        let mut lhs: HashSet<usize> = HashSet::new();
        for &x in &bsb {
            let xs = self.mul(x, ns);
            for &b in &borel {
                lhs.insert(self.mul(xs, b));
            }
        }
        let bset: HashSet<usize> = borel.iter().copied().collect();
        bsb.is_disjoint(&bset) && lhs.len() == bsb.len() + bset.len() && bsb.iter().chain(bset.iter()).all(|x| lhs.contains(x))
    }

    /// Lifts `d̂ = n_d` for `d ∈ ^M W`, after checking the parabolic decomposition
    /// `ℾ = ⊔ ℙ d̂ 𝕌` and `(ℙ ∩ d̂𝕌d̂⁻¹)ℕ = (𝕌∩𝕄)ℕ`.
    pub fn parabolic_coset_reps(&self, k: &BTreeSet<usize>) -> Result<Vec<(WeylElement, usize)>> {
        let reps = self.datum.min_coset_reps(k);
        let p = self.parabolic(k);
        let pset: HashSet<usize> = p.iter().copied().collect();
        let radical = self.unipotent_radical(k);
        let uset: HashSet<usize> = self.unipotent.iter().copied().collect();
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for d in reps {
            let nd = self.monomial_id(&self.weyl_lift(&d)).unwrap();
            let mut cell: HashSet<usize> = HashSet::new();
            for &x in &p {
                let xd = self.mul(x, nd);
                for &u in &self.unipotent {
                    cell.insert(self.mul(xd, u));
                }
            }
            for &g in &cell {
                if seen[g] {
                    return Err(Error::Internal(format!("parabolic cells overlap at {d:?}")));
                }
                seen[g] = true;
            }
            let ndi = self.inv(nd);
            let conj_u: HashSet<usize> = self.unipotent.iter().map(|&u| self.mul(self.mul(nd, u), ndi)).collect();
            let lhs: HashSet<usize> = pset
                .iter()
                .filter(|x| conj_u.contains(x))
                .flat_map(|&x| radical.iter().map(move |&r| (x, r)))
                .map(|(x, r)| self.mul(x, r))
                .collect();
            if lhs != uset {
                return Err(Error::Internal(format!("(P ∩ dUd⁻¹)N ≠ U at {d:?}")));
            }
            out.push((d, nd));
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Internal("parabolic cells do not cover the group".into()));
        }
        Ok(out)
    }
}

fn det(f: &Gf, n: usize, m: &Mat) -> u8 {
    match n {
        1 => m[0],
        2 => f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])),
        3 => {
            let t = |a: u8, b: u8, c: u8| f.mul(f.mul(a, b), c);
            let plus = f.add(f.add(t(m[0], m[4], m[8]), t(m[1], m[5], m[6])), t(m[2], m[3], m[7]));
            let minus = f.add(f.add(t(m[2], m[4], m[6]), t(m[0], m[5], m[7])), t(m[1], m[3], m[8]));
            f.sub(plus, minus)
        }
        _ => unreachable!("rank checked at construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders_and_subgroups() {
        let g = FiniteGroup::build(Family::GL, 2, 2).unwrap();
        assert_eq!((g.order(), g.unipotent.len(), g.normalizer.len()), (6, 2, 2));
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        assert_eq!((g.order(), g.unipotent.len(), g.torus.len(), g.normalizer.len()), (48, 3, 4, 8));
        let g = FiniteGroup::build(Family::GL, 3, 2).unwrap();
        assert_eq!((g.order(), g.unipotent.len()), (168, 8));
        let g = FiniteGroup::build(Family::SL, 2, 3).unwrap();
        assert_eq!((g.order(), g.normalizer.len()), (24, 4));
    }

    #[test]
    fn descriptor_round_trip() {
        let d: GroupDescriptor = "gl:2:3".parse().unwrap();
        assert_eq!(d.to_string(), "gl:2:3");
        assert!("gl:2".parse::<GroupDescriptor>().is_err());
    }

    #[test]
    fn size_limit_is_enforced() {
        // GL3(F5) has 1,488,000 elements; a tiny cap must reject it before enumeration.
        let err = FiniteGroup::build_levi_limited(Family::GL, 3, 5, &BTreeSet::from([1, 2]), 100);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn simple_lift_squares() {
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        let s = g.simple_lift(1);
        assert_eq!(s.mul(&s), Monomial::unit(&[1, 1], 2));
        let g = FiniteGroup::build(Family::GL, 2, 2).unwrap();
        let s = g.simple_lift(1);
        assert!(s.mul(&s).is_identity());
    }

    #[test]
    fn braid_relation_for_lifts() {
        let g = FiniteGroup::build(Family::GL, 3, 3).unwrap();
        let (a, b) = (g.simple_lift(1), g.simple_lift(2));
        assert_eq!(a.mul(&b).mul(&a), b.mul(&a).mul(&b));
    }

    #[test]
    fn double_coset_counts() {
        let g = FiniteGroup::build(Family::GL, 2, 2).unwrap();
        let mut sizes: Vec<usize> = g.double_cosets(false).iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
        let g3 = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        assert_eq!(g3.double_cosets(false).len(), 8);
        let b = g3.double_cosets(true);
        let mut borel = g3.borel();
        borel.sort();
        assert_eq!(b[0], borel);
    }

    #[test]
    fn bruhat_quadratic_set_identity() {
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let g = FiniteGroup::build(Family::GL, n, q).unwrap();
            assert!(g.verify_bruhat_bsbsb(1));
        }
    }

    #[test]
    fn parabolic_cells() {
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        assert_eq!(g.parabolic_coset_reps(&BTreeSet::from([1])).unwrap().len(), 1);
        assert_eq!(g.parabolic_coset_reps(&BTreeSet::new()).unwrap().len(), 2);
        let g = FiniteGroup::build(Family::GL, 3, 2).unwrap();
        assert_eq!(g.parabolic_coset_reps(&BTreeSet::from([1])).unwrap().len(), 3);
    }

    #[test]
    fn associativity_sampled() {
        let g = FiniteGroup::build(Family::GL, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let (a, b, c) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        }
    }

    #[test]
    fn words_evaluate_to_elements() {
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        for x in 0..g.order() {
            let y = g.word(x).iter().fold(g.identity(), |acc, &k| g.mul(acc, g.generators[k]));
            assert_eq!(x, y);
        }
    }
}
