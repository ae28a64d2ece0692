//! Presentation data shared by finite and affine Hecke algebras, plus the word-rewriting
//! engine computing integer structure constants.
//!
//! A [`WeylSystem`] fixes the monoid of basis indices (a subgroup of `W(1)` given by a
//! family, a Levi and finiteness), its simple reflections with lifts and quadratic data,
//! and generators of the length-0 subgroup. Products follow the braid relation and
//! `τ_{n_s}² = q_s τ_{n_s²} + Σ_z c(z) τ_{z n_s}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CartanType, RootDatum, StandardLevi};
use crate::error::{Error, Result};
use crate::finite_group::Family;
use crate::gf::Gf;
use crate::monomial::Monomial;

/// `q_s` and `c_{n_s}` as a list of `(z, c(z))` with `z` a torus unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticData {
    pub q_s: i64,
    pub c: Vec<(Monomial, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleReflection {
    /// 1-based finite index, or 0 for the affine node.
    pub index: usize,
    pub name: String,
    pub lift: Monomial,
    pub quad: QuadraticData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroGenerator {
    pub name: String,
    pub element: Monomial,
    /// Finite order, or `None` for translations.
    pub order: Option<u64>,
}

type Terms = Vec<(Monomial, i64)>;

pub struct WeylSystem {
    pub family: Family,
    pub n: usize,
    pub q: i64,
    pub field: Gf,
    pub affine: bool,
    pub datum: RootDatum,
    pub levi: StandardLevi,
    pub simples: Vec<SimpleReflection>,
    pub zero_gens: Vec<ZeroGenerator>,
    memo: Mutex<HashMap<(Monomial, Monomial), Arc<Terms>>>,
}

impl std::fmt::Debug for WeylSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl PartialEq for WeylSystem {
    fn eq(&self, o: &Self) -> bool {
        self.id() == o.id()
    }
}

/// `c` of the rank-one group as a function of `log x` for `z = α^∨(x)`.
pub type RankOneC = BTreeMap<u8, i64>;

impl WeylSystem {
    fn base(family: Family, n: usize, field: &Gf, j: &BTreeSet<usize>, affine: bool) -> Result<Self> {
        let datum = RootDatum::new(CartanType::for_gl(n)?);
        if let Some(&k) = j.iter().find(|&&k| k == 0 || k > datum.rank()) {
            return Err(Error::Config(format!("simple index {k} out of range")));
        }
        let levi = datum.levi(j);
        Ok(WeylSystem {
            family,
            n,
            q: field.q() as i64,
            field: field.clone(),
            affine,
            datum,
            levi,
            simples: Vec::new(),
            zero_gens: Vec::new(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    fn m(&self) -> u8 {
        self.field.units()
    }

    /// Finite unipotent Hecke algebra of `𝕄_J` with quadratic data for each `s ∈ J`.
    pub fn finite(family: Family, n: usize, field: &Gf, j: &BTreeSet<usize>, quad: &BTreeMap<usize, QuadraticData>) -> Result<Self> {
        let mut sys = Self::base(family, n, field, j, false)?;
        for &k in j {
            let data = quad.get(&k).ok_or_else(|| Error::Config(format!("missing quadratic data for s{k}")))?;
            sys.simples.push(SimpleReflection { index: k, name: format!("s{k}"), lift: sys.finite_lift(k), quad: data.clone() });
        }
        sys.zero_gens = sys.unit_generators();
        Ok(sys)
    }

    /// Pro-p Iwahori Hecke algebra of the Levi `M_J` of split `GL_n` / `SL_n` with residue
    /// field `field`. `c` is imported from the rank-one finite group.
    pub fn affine(family: Family, n: usize, field: &Gf, j: &BTreeSet<usize>, c: &RankOneC) -> Result<Self> {
        let mut sys = Self::base(family, n, field, j, true)?;
        let q = sys.q;
        let lm1 = field.log_minus_one() as i64;
        let m = sys.m();
        let coroot = |a: usize, b: usize| -> Vec<(Monomial, i64)> {
            c.iter()
                .map(|(&lx, &cz)| {
                    let mut e = vec![0i64; n];
                    e[a] += lx as i64;
                    e[b] -= lx as i64;
                    (Monomial::unit(&e, m), cz)
                })
                .collect()
        };
        for block in sys.levi.blocks() {
            if block.len() < 2 {
                continue;
            }
            let (a, b) = (block[0], *block.last().unwrap());
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(a, b);
            let mut val = vec![0i64; n];
            val[a] = 1;
            val[b] = -1;
            let mut ulog = vec![0i64; n];
            ulog[b] = lm1;
            let lift = Monomial::new(&perm, &val, &ulog, m);
            // The affine root has gradient −(e_a − e_b), so its coroot is `diag(x⁻¹ at a, x at b)`.
            sys.simples.push(SimpleReflection { index: 0, name: "s0".into(), lift, quad: QuadraticData { q_s: q, c: coroot(b, a) } });
        }
        for &k in j {
            let a = sys.datum.simple_pos[k - 1];
            sys.simples.push(SimpleReflection {
                index: k,
                name: format!("s{k}"),
                lift: sys.finite_lift(k),
                quad: QuadraticData { q_s: q, c: coroot(a, a + 1) },
            });
        }
        let mut gens = sys.omega_generators()?;
        gens.extend(sys.unit_generators());
        sys.zero_gens = gens;
        for s in &sys.simples {
            if sys.length(&s.lift) != 1 {
                return Err(Error::Internal(format!("lift of {} has length {}", s.name, sys.length(&s.lift))));
            }
        }
        Ok(sys)
    }

    /// Stable identifier, e.g. `affine:gl:2:3:J{}`.
    pub fn id(&self) -> String {
        let j: Vec<String> = self.levi.j.iter().map(|k| k.to_string()).collect();
        format!("{}:{}:{}:{}:J{{{}}}", if self.affine { "affine" } else { "finite" }, self.family, self.n, self.q, j.join(","))
    }

    pub fn identity(&self) -> Monomial {
        Monomial::identity(self.n, self.m())
    }

    fn finite_lift(&self, k: usize) -> Monomial {
        let a = self.datum.simple_pos[k - 1];
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(a, a + 1);
        let mut ulog = vec![0i64; self.n];
        ulog[a] = self.field.log_minus_one() as i64;
        Monomial::new(&perm, &vec![0; self.n], &ulog, self.m())
    }

    fn unit_generators(&self) -> Vec<ZeroGenerator> {
        let (n, m) = (self.n, self.m());
        if m == 1 {
            return Vec::new();
        }
        match self.family {
            Family::GL => (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    ZeroGenerator { name: format!("u{i}"), element: Monomial::unit(&e, m), order: Some(m as u64) }
                })
                .collect(),
            Family::SL => (0..n - 1)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e[i + 1] = -1;
                    ZeroGenerator { name: format!("h{}", i + 1), element: Monomial::unit(&e, m), order: Some(m as u64) }
                })
                .collect(),
        }
    }

    /// Length-0 element of a block with valuation sum 1 and trivial units.
    fn block_omega(&self, block: &[usize]) -> Result<Monomial> {
        let n = self.n;
        let s = block.len();
        for shift in 1..=s {
            let mut perm: Vec<usize> = (0..n).collect();
            for (i, &x) in block.iter().enumerate() {
                perm[x] = block[(i + shift) % s];
            }
            for &hot in block {
                let mut val = vec![0i64; n];
                val[hot] = 1;
                let w = Monomial::new(&perm, &val, &vec![0; n], self.m());
                if self.length(&w) == 0 {
                    return Ok(w);
                }
            }
        }
        Err(Error::Internal(format!("no length-0 generator for block {block:?}")))
    }

    fn omega_generators(&self) -> Result<Vec<ZeroGenerator>> {
        let blocks = self.levi.blocks();
        let omegas: Vec<Monomial> = blocks.iter().map(|b| self.block_omega(b)).collect::<Result<_>>()?;
        Ok(match self.family {
            Family::GL => omegas
                .into_iter()
                .enumerate()
                .map(|(b, w)| ZeroGenerator { name: format!("omega{b}"), element: w, order: None })
                .collect(),
            Family::SL => {
                let lm1 = self.field.log_minus_one();
                (0..blocks.len().saturating_sub(1))
                    .map(|b| {
                        let mut w = omegas[b].mul(&omegas[b + 1].inverse());
                        let d = w.det_ulog(lm1) as i64;
                        if d != 0 {
                            let mut e = vec![0; self.n];
                            e[*blocks[b].last().unwrap()] = -d;
                            w = w.mul(&Monomial::unit(&e, self.m()));
                        }
                        ZeroGenerator { name: format!("omega{b}"), element: w, order: None }
                    })
                    .collect()
            }
        })
    }

    pub fn length(&self, w: &Monomial) -> usize {
        w.length(&self.levi)
    }

    /// Membership of a monomial in the index monoid of this algebra.
    pub fn contains(&self, w: &Monomial) -> bool {
        w.n() == self.n
            && w.modulus() == self.m()
            && w.in_levi(&self.levi)
            && (self.affine || w.is_finite())
            && (self.family == Family::GL || (w.det_valuation() == 0 && w.det_ulog(self.field.log_minus_one()) == 0))
    }

    pub fn simple_position(&self, name: &str) -> Option<usize> {
        self.simples.iter().position(|s| s.name == name)
    }

    /// Reduced factorization `w = n_{s_1}⋯n_{s_k}·u` with `u` of length 0, by peeling left
    /// descents in the order of `simples`.
    pub fn decompose(&self, w: &Monomial) -> (Vec<usize>, Monomial) {
        let mut word = Vec::new();
        let mut cur = *w;
        let mut len = self.length(&cur);
        'outer: while len > 0 {
            for (i, s) in self.simples.iter().enumerate() {
                let next = s.lift.inverse().mul(&cur);
                let l = self.length(&next);
                if l < len {
                    word.push(i);
                    cur = next;
                    len = l;
                    continue 'outer;
                }
            }
            unreachable!("element of positive length {len} without a left descent: {cur}");
        }
        (word, cur)
    }

    /// Writes a length-0 element as an ordered product of powers of `zero_gens`.
    pub fn decompose_zero(&self, u: &Monomial) -> Result<Vec<(usize, i64)>> {
        if self.length(u) != 0 || !self.contains(u) {
            return Err(Error::Domain(format!("{u} is not a length-0 element of {}", self.id())));
        }
        let blocks = self.levi.blocks();
        let block_val: Vec<i64> = blocks.iter().map(|b| b.iter().map(|&i| u.val()[i] as i64).sum()).collect();
        let units_start = self.zero_gens.iter().position(|g| g.order.is_some()).unwrap_or(self.zero_gens.len());
        let mut omega_part: Vec<(usize, i64)> = Vec::new();
        if self.affine {
            match self.family {
                Family::GL => omega_part = block_val.iter().enumerate().map(|(b, &k)| (b, k)).collect(),
                Family::SL => {
                    let mut acc = 0;
                    for (b, v) in block_val.iter().enumerate().take(blocks.len() - 1) {
                        acc += v;
                        omega_part.push((b, acc));
                    }
                }
            }
        }
        let omega = omega_part.iter().fold(self.identity(), |acc, &(g, k)| acc.mul(&self.zero_gens[g].element.pow(k)));
        let rem = u.mul(&omega.inverse());
        if !rem.is_torus_unit() {
            return Err(Error::Internal(format!("length-0 remainder {rem} is not a unit")));
        }
        let m = self.m() as i64;
        let mut out: Vec<(usize, i64)> = Vec::new();
        if m > 1 {
            let e: Vec<i64> = rem.ulog().iter().map(|&x| x as i64).collect();
            match self.family {
                Family::GL => {
                    for (i, &x) in e.iter().enumerate() {
                        out.push((units_start + i, x));
                    }
                }
                Family::SL => {
                    let mut acc = 0;
                    for (i, &x) in e.iter().take(self.n - 1).enumerate() {
                        acc += x;
                        out.push((units_start + i, acc.rem_euclid(m)));
                    }
                }
            }
        }
        out.extend(omega_part);
        out.retain(|&(_, k)| k != 0);
        debug_assert_eq!(out.iter().fold(self.identity(), |acc, &(g, k)| acc.mul(&self.zero_gens[g].element.pow(k))), *u);
        Ok(out)
    }

    /// All basis indices of a finite system: `t·n_w` for `t` in the torus and `w ∈ W_J`.
    pub fn finite_basis(&self) -> Result<Vec<Monomial>> {
        if self.affine {
            return Err(Error::Unsupported("an affine algebra has no finite basis".into()));
        }
        let m = self.m() as i64;
        let n = self.n;
        let mut units = Vec::new();
        let total = (m as usize).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let e: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (c % m as usize) as i64;
                    c /= m as usize;
                    x
                })
                .collect();
            if self.family == Family::SL && e.iter().sum::<i64>() % m != 0 {
                continue;
            }
            units.push(Monomial::unit(&e, self.m()));
        }
        let weyl: Vec<_> = self.datum.elements().into_iter().filter(|w| self.levi.contains(w)).collect();
        let mut out = Vec::new();
        for w in weyl {
            let nw = self.lift_of_word(&self.datum.reduced_word(&w));
            for t in &units {
                out.push(t.mul(&nw));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Product of finite simple lifts along a word of 1-based indices.
    pub fn lift_of_word(&self, word: &[usize]) -> Monomial {
        word.iter().fold(self.identity(), |acc, &k| acc.mul(&self.finite_lift(k)))
    }

    /// `τ_y · τ_{n_s}` for the simple reflection at position `i`.
    fn right_mul_simple(&self, y: &Monomial, i: usize, coeff: i64, out: &mut HashMap<Monomial, i64>) {
        let s = &self.simples[i];
        let yn = y.mul(&s.lift);
        if self.length(&yn) > self.length(y) {
            *out.entry(yn).or_insert(0) += coeff;
            return;
        }
        let y1 = y.mul(&s.lift.inverse());
        if s.quad.q_s != 0 {
            *out.entry(yn).or_insert(0) += coeff * s.quad.q_s;
        }
        for (z, cz) in &s.quad.c {
            *out.entry(y1.mul(z).mul(&s.lift)).or_insert(0) += coeff * cz;
        }
    }

    /// Structure constants of `τ_x τ_w`, sorted by index.
    pub fn mul_basis(&self, x: &Monomial, w: &Monomial) -> Arc<Terms> {
        let key = (*x, *w);
        if let Some(r) = self.memo.lock().unwrap().get(&key) {
            return r.clone();
        }
        let (word, u) = self.decompose(w);
        let mut cur: HashMap<Monomial, i64> = HashMap::from([(*x, 1)]);
        for i in word {
            let mut next = HashMap::new();
            for (y, c) in cur {
                if c != 0 {
                    self.right_mul_simple(&y, i, c, &mut next);
                }
            }
            cur = next;
        }
        let mut terms: Terms = cur.into_iter().filter(|(_, c)| *c != 0).map(|(y, c)| (y.mul(&u), c)).collect();
        terms.sort();
        let r = Arc::new(terms);
        self.memo.lock().unwrap().insert(key, r.clone());
        r
    }

    /// `τ*_w` in the `τ` basis with integer coefficients.
    pub fn star_basis(&self, w: &Monomial) -> Terms {
        let (word, u) = self.decompose(w);
        let mut cur: BTreeMap<Monomial, i64> = BTreeMap::from([(self.identity(), 1)]);
        for i in word {
            let s = &self.simples[i];
            let mut next: BTreeMap<Monomial, i64> = BTreeMap::new();
            for (y, c) in &cur {
                for (t, ct) in self.mul_basis(y, &s.lift).iter() {
                    *next.entry(*t).or_insert(0) += c * ct;
                }
                for (z, cz) in &s.quad.c {
                    for (t, ct) in self.mul_basis(y, z).iter() {
                        *next.entry(*t).or_insert(0) -= c * cz * ct;
                    }
                }
            }
            next.retain(|_, c| *c != 0);
            cur = next;
        }
        cur.into_iter().map(|(y, c)| (y.mul(&u), c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c_all_ones(q: u8) -> RankOneC {
        (0..q - 1).map(|l| (l, 1)).collect()
    }

    fn gl2_affine(q: u8) -> WeylSystem {
        let f = Gf::new(q).unwrap();
        WeylSystem::affine(Family::GL, 2, &f, &BTreeSet::from([1]), &c_all_ones(q)).unwrap()
    }

    #[test]
    fn affine_generators_gl2() {
        let sys = gl2_affine(3);
        let names: Vec<&str> = sys.simples.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["s0", "s1"]);
        let zero: Vec<&str> = sys.zero_gens.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(zero, ["omega0", "u0", "u1"]);
        assert_eq!(sys.zero_gens[0].element, Monomial::new(&[1, 0], &[1, 0], &[0, 0], 2));
    }

    #[test]
    fn affine_node_gl3_and_sl2() {
        let f = Gf::new(3).unwrap();
        let sys = WeylSystem::affine(Family::GL, 3, &f, &BTreeSet::from([1, 2]), &c_all_ones(3)).unwrap();
        assert_eq!(sys.simples.len(), 3);
        let sl = WeylSystem::affine(Family::SL, 2, &f, &BTreeSet::from([1]), &c_all_ones(3)).unwrap();
        assert!(sl.simples.iter().all(|s| sl.contains(&s.lift)));
        assert_eq!(sl.zero_gens.len(), 1);
        let slt = WeylSystem::affine(Family::SL, 2, &f, &BTreeSet::new(), &c_all_ones(3)).unwrap();
        assert_eq!(slt.zero_gens[0].element, Monomial::translation(&[1, -1], 2));
    }

    #[test]
    fn decompositions_reassemble() {
        let sys = gl2_affine(3);
        for v0 in -2..=2 {
            for v1 in -2..=2 {
                for perm in [[0usize, 1], [1, 0]] {
                    for u in 0..2 {
                        let w = Monomial::new(&perm, &[v0, v1], &[u, 0], 2);
                        let (word, rest) = sys.decompose(&w);
                        assert_eq!(word.len(), sys.length(&w));
                        let back = word.iter().fold(sys.identity(), |acc, &i| acc.mul(&sys.simples[i].lift)).mul(&rest);
                        assert_eq!(back, w);
                        sys.decompose_zero(&rest).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn translation_squares_additively() {
        let sys = gl2_affine(3);
        let t = Monomial::translation(&[1, 0], 2);
        assert_eq!(*sys.mul_basis(&t, &t), vec![(Monomial::translation(&[2, 0], 2), 1)]);
    }

    #[test]
    fn quadratic_relation_affine_node() {
        let sys = gl2_affine(3);
        let s0 = &sys.simples[0];
        let got = sys.mul_basis(&s0.lift, &s0.lift);
        let mut want: Vec<(Monomial, i64)> = vec![(s0.lift.mul(&s0.lift), 3)];
        want.extend(s0.quad.c.iter().map(|(z, c)| (z.mul(&s0.lift), *c)));
        want.sort();
        assert_eq!(*got, want);
    }
}
