//! Structure constants by literal double-coset convolution on `𝕌\ℾ/𝕌`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::{QuadraticData, RankOneC};
use crate::error::{Error, Result};
use crate::finite_group::{Family, FiniteGroup};
use crate::monomial::Monomial;

/// `τ_a τ_b = Σ_c table[a][b][c] τ_c` over the basis `𝒩_ℾ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionTable {
    pub basis: Vec<Monomial>,
    /// Sparse `(c, count)` lists per `(a, b)`.
    pub table: Vec<Vec<Vec<(usize, i64)>>>,
    #[serde(skip)]
    index: HashMap<Monomial, usize>,
}

impl ConvolutionTable {
    /// `(τ_a τ_b)(g_c) = #{𝕌x ⊆ 𝕌b𝕌 : g_c x⁻¹ ∈ 𝕌a𝕌}` for `(f₁*f₂)(g) = Σ_{x∈𝕌\ℾ} f₁(gx⁻¹) f₂(x)`.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let basis = g.normalizer.clone();
        let dim = basis.len();
        let reps: Vec<usize> = basis.iter().map(|x| g.monomial_id(x).unwrap()).collect();
        let columns: Vec<Vec<BTreeMap<usize, i64>>> = (0..dim)
            .into_par_iter()
            .map(|b| {
                let mut col = vec![BTreeMap::new(); dim];
                for &x in &g.cell_cosets[b] {
                    let xi = g.inv(x);
                    for (c, &gc) in reps.iter().enumerate() {
                        let a = g.cell(g.mul(gc, xi));
                        *col[a].entry(c).or_insert(0) += 1;
                    }
                }
                col
            })
            .collect();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (b, col) in columns.into_iter().enumerate() {
            for (a, entries) in col.into_iter().enumerate() {
                table[a][b] = entries.into_iter().collect();
            }
        }
        let index = basis.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        ConvolutionTable { basis, table, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, x: &Monomial) -> Option<usize> {
        if self.index.is_empty() {
            return self.basis.iter().position(|y| y == x);
        }
        self.index.get(x).copied()
    }

    /// `τ_x τ_y` as sorted `(index, count)` terms.
    pub fn product(&self, x: &Monomial, y: &Monomial) -> Vec<(Monomial, i64)> {
        let (a, b) = (self.position(x).expect("basis index"), self.position(y).expect("basis index"));
        self.table[a][b].iter().map(|&(c, k)| (self.basis[c], k)).collect()
    }

    /// Rebuilds the lookup index after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.basis.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    }
}

/// Reads `q_s` and `c_{n_s}` off `τ_{n_s}²` for every simple reflection of `g`.
pub fn quadratic_data(g: &FiniteGroup, table: &ConvolutionTable) -> Result<BTreeMap<usize, QuadraticData>> {
    let mut out = BTreeMap::new();
    for k in g.simple_indices() {
        let ns = g.simple_lift(k);
        let sq = ns.mul(&ns);
        let mut q_s = None;
        let mut c = Vec::new();
        for (y, count) in table.product(&ns, &ns) {
            if y == sq {
                q_s = Some(count);
            } else if y.weyl() == ns.weyl() {
                let z = y.mul(&ns.inverse());
                if !z.is_torus_unit() {
                    return Err(Error::Internal(format!("τ_s² term {y} is not of the form z·n_s")));
                }
                c.push((z, count));
            } else {
                return Err(Error::Internal(format!("unexpected term {y} in τ_s² for s{k}")));
            }
        }
        let q_s = q_s.ok_or_else(|| Error::Internal(format!("τ_s² for s{k} has no n_s² term")))?;
        c.sort();
        out.insert(k, QuadraticData { q_s, c });
    }
    Ok(out)
}

/// `c` of the rank-one group `GL₂(F_q)` or `SL₂(F_q)` keyed by `log x` for `z = diag(x, x⁻¹)`.
pub fn rank_one_c(family: Family, q: u8) -> Result<RankOneC> {
    let g = FiniteGroup::build(family, 2, q)?;
    let table = ConvolutionTable::from_group(&g);
    let quad = quadratic_data(&g, &table)?;
    let mut out = BTreeMap::new();
    for (z, c) in &quad[&1].c {
        let (a, b) = (z.ulog()[0], z.ulog()[1]);
        if !(a as u16 + b as u16).is_multiple_of(g.field.units() as u16) {
            return Err(Error::Internal(format!("{z} is not on the coroot")));
        }
        out.insert(a, *c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn dimensions() {
        for (fam, n, q, dim) in [(Family::GL, 2, 2, 2), (Family::GL, 2, 3, 8), (Family::GL, 3, 2, 6), (Family::SL, 2, 3, 4)] {
            let g = FiniteGroup::build(fam, n, q).unwrap();
            assert_eq!(ConvolutionTable::from_group(&g).dim(), dim);
        }
    }

    #[test]
    fn gl2_f3_quadratic_data() {
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        let t = ConvolutionTable::from_group(&g);
        let quad = quadratic_data(&g, &t).unwrap();
        let d = &quad[&1];
        assert_eq!(d.q_s, 3);
        assert_eq!(d.c.len(), 2);
        assert!(d.c.iter().all(|(_, c)| *c == 1));
        assert_eq!(d.c.iter().map(|(_, c)| c).sum::<i64>(), d.q_s - 1);
    }

    #[test]
    fn gl2_f2_quadratic_data() {
        let g = FiniteGroup::build(Family::GL, 2, 2).unwrap();
        let t = ConvolutionTable::from_group(&g);
        let d = &quadratic_data(&g, &t).unwrap()[&1];
        assert_eq!((d.q_s, d.c.len(), d.c[0].1), (2, 1, 1));
    }

    /// `c_{n_s}` lives exactly on the coroot image of `F_q^×` and satisfies
    /// `c(z) = c(z·x·s(x)⁻¹)` for every torus element `x`.
    #[test]
    fn c_on_coroot_and_torus_invariant() {
        for (fam, n, q) in [(Family::GL, 2, 2), (Family::GL, 2, 3), (Family::GL, 3, 2), (Family::SL, 2, 3)] {
            let g = FiniteGroup::build(fam, n, q).unwrap();
            let quad = quadratic_data(&g, &ConvolutionTable::from_group(&g)).unwrap();
            let m = g.field.units();
            let torus: Vec<Monomial> = (0..(m as usize).pow(n as u32))
                .map(|code| (0..n).map(|i| ((code / (m as usize).pow(i as u32)) % m as usize) as i64).collect::<Vec<_>>())
                .filter(|e| fam == Family::GL || e.iter().sum::<i64>() % m as i64 == 0)
                .map(|e| Monomial::unit(&e, m))
                .collect();
            for (k, d) in &quad {
                let coroot: BTreeSet<Monomial> = (0..m as i64)
                    .map(|a| {
                        let mut e = vec![0; n];
                        e[k - 1] = a;
                        e[*k] = -a;
                        Monomial::unit(&e, m)
                    })
                    .collect();
                let c: BTreeMap<Monomial, i64> = d.c.iter().copied().collect();
                assert_eq!(c.keys().copied().collect::<BTreeSet<_>>(), coroot, "{fam}:{n}:{q} s{k}");
                let ns = g.simple_lift(*k);
                for x in &torus {
                    let sx = ns.mul(x).mul(&ns.inverse());
                    for (z, v) in &c {
                        assert_eq!(c.get(&z.mul(x).mul(&sx.inverse())), Some(v));
                    }
                }
            }
        }
    }

    #[test]
    fn identity_is_unit() {
        let g = FiniteGroup::build(Family::GL, 2, 3).unwrap();
        let t = ConvolutionTable::from_group(&g);
        let e = Monomial::identity(2, 2);
        for x in &t.basis {
            assert_eq!(t.product(&e, x), vec![(*x, 1)]);
            assert_eq!(t.product(x, &e), vec![(*x, 1)]);
        }
    }
}
