//! Elements of `W(1)` for split `GL_n` / `SL_n` as monomial matrices modulo `T¹`.
//!
//! A [`Monomial`] with permutation σ, valuations `v` and unit logarithms `u` stands for
//! the matrix whose only nonzero entry in column `i` is `g^{u_i}·ϖ^{v_i}` in row `σ(i)`,
//! where `g` generates `F_q^×` (through Teichmüller lifts). Finite `𝒩_ℾ` is the
//! subgroup with `v = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::{AffineWeylElement, StandardLevi, WeylElement};

pub const MAX_N: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    n: u8,
    /// Order of the unit group `q − 1`.
    m: u8,
    perm: [u8; MAX_N],
    val: [i32; MAX_N],
    ulog: [u8; MAX_N],
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n as usize;
        let p: Vec<String> = self.perm[..n].iter().map(|x| x.to_string()).collect();
        let v: Vec<String> = self.val[..n].iter().map(|x| x.to_string()).collect();
        let u: Vec<String> = self.ulog[..n].iter().map(|x| x.to_string()).collect();
        write!(f, "[{}|{}|{}]", p.join(" "), v.join(" "), u.join(" "))
    }
}

impl Monomial {
    pub fn identity(n: usize, m: u8) -> Self {
        assert!(n <= MAX_N && m >= 1);
        let mut perm = [0u8; MAX_N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        Monomial { n: n as u8, m, perm, val: [0; MAX_N], ulog: [0; MAX_N] }
    }

    pub fn new(perm: &[usize], val: &[i64], ulog: &[i64], m: u8) -> Self {
        let n = perm.len();
        let mut x = Self::identity(n, m);
        for i in 0..n {
            x.perm[i] = perm[i] as u8;
            x.val[i] = val[i] as i32;
            x.ulog[i] = ulog[i].rem_euclid(m as i64) as u8;
        }
        debug_assert!(x.weyl().inverse().mul(&x.weyl()).is_identity());
        x
    }

    pub fn translation(val: &[i64], m: u8) -> Self {
        let n = val.len();
        Self::new(&(0..n).collect::<Vec<_>>(), val, &vec![0; n], m)
    }

    /// Diagonal unit `diag(g^{e_0}, …)`.
    pub fn unit(exps: &[i64], m: u8) -> Self {
        let n = exps.len();
        Self::new(&(0..n).collect::<Vec<_>>(), &vec![0; n], exps, m)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u8 {
        self.m
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm[..self.n as usize]
    }

    pub fn val(&self) -> &[i32] {
        &self.val[..self.n as usize]
    }

    pub fn ulog(&self) -> &[u8] {
        &self.ulog[..self.n as usize]
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!((self.n, self.m), (o.n, o.m));
        let mut r = *self;
        for i in 0..self.n as usize {
            let s = o.perm[i] as usize;
            r.perm[i] = self.perm[s];
            r.val[i] = self.val[s] + o.val[i];
            r.ulog[i] = ((self.ulog[s] as u16 + o.ulog[i] as u16) % self.m as u16) as u8;
        }
        r
    }

    pub fn inverse(&self) -> Self {
        let mut r = *self;
        for i in 0..self.n as usize {
            let j = self.perm[i] as usize;
            r.perm[j] = i as u8;
            r.val[j] = -self.val[i];
            r.ulog[j] = (self.m - self.ulog[i] % self.m) % self.m;
        }
        r
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity(self.n(), self.m);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn conj(&self, by: &Self) -> Self {
        by.mul(self).mul(&by.inverse())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n(), self.m)
    }

    pub fn weyl(&self) -> WeylElement {
        WeylElement { perm: self.perm().iter().map(|&x| x as usize).collect() }
    }

    pub fn affine_weyl(&self) -> AffineWeylElement {
        AffineWeylElement::new(self.weyl(), self.val().iter().map(|&x| x as i64).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.val().iter().all(|&x| x == 0)
    }

    /// A pure unit: trivial permutation and valuation.
    pub fn is_torus_unit(&self) -> bool {
        self.is_finite() && self.weyl().is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.weyl().is_identity()
    }

    pub fn det_valuation(&self) -> i64 {
        self.val().iter().map(|&x| x as i64).sum()
    }

    /// Discrete log of the unit part of the determinant.
    pub fn det_ulog(&self, log_minus_one: u8) -> u8 {
        let mut s: u64 = self.ulog().iter().map(|&x| x as u64).sum();
        if self.weyl().length() % 2 == 1 {
            s += log_minus_one as u64;
        }
        (s % self.m as u64) as u8
    }

    pub fn in_levi(&self, levi: &StandardLevi) -> bool {
        levi.contains(&self.weyl())
    }

    /// Length in the extended affine Weyl group of the Levi with the given blocks.
    ///
    /// Counts positive affine roots `(e_i − e_j, r)` with `i, j` in one block sent to
    /// negative ones. For a fixed pair with `k = v_i − v_j` the count is closed-form.
    pub fn length(&self, levi: &StandardLevi) -> usize {
        let n = self.n();
        let mut total = 0i64;
        for i in 0..n {
            for j in 0..n {
                if i == j || !levi.same_block(i, j) {
                    continue;
                }
                let k = (self.val[i] - self.val[j]) as i64;
                let flips = self.perm[i] > self.perm[j];
                total += (-k - 1).max(0);
                if i < j && (k < 0 || (k == 0 && flips)) {
                    total += 1;
                }
                if k <= -1 && flips {
                    total += 1;
                }
            }
        }
        total as usize
    }
}
