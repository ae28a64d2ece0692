//! Small finite fields `F_q` for `q ∈ {2, 3, 4, 5}` as lookup tables.
//!
//! Elements are codes `0..q`. For `F_4 = F_2[x]/(x²+x+1)` the code of `a + b·x` is `a + 2b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gf {
    q: u8,
    p: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `exp[k] = g^k` for the fixed multiplicative generator `g`.
    exp: Vec<u8>,
    /// `log[x]` for nonzero `x`.
    log: Vec<u8>,
}

type BinOp = Box<dyn Fn(u8, u8) -> u8>;

impl Gf {
    pub fn new(q: u8) -> Result<Self> {
        let (p, add, mul): (u8, BinOp, BinOp) = match q {
            2 | 3 | 5 => (q, Box::new(move |a, b| (a + b) % q), Box::new(move |a, b| (a * b) % q)),
            4 => (
                2,
                Box::new(|a, b| a ^ b),
                Box::new(|a, b| {
                    // (a0 + a1 x)(b0 + b1 x) with x² = x + 1.
                    let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                    let c0 = (a0 & b0) ^ (a1 & b1);
                    let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
                    c0 | (c1 << 1)
                }),
            ),
            _ => return Err(Error::Config(format!("unsupported field size q = {q}"))),
        };
        let n = q as usize;
        let mut t_add = vec![0; n * n];
        let mut t_mul = vec![0; n * n];
        for a in 0..q {
            for b in 0..q {
                t_add[a as usize * n + b as usize] = add(a, b);
                t_mul[a as usize * n + b as usize] = mul(a, b);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add(a, b) == 0).unwrap()).collect();
        let inv = (0..q).map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul(a, b) == 1).unwrap() }).collect();
        let g = match q {
            2 => 1,
            3 => 2,
            4 => 2,
            _ => 2,
        };
        let mut exp = Vec::with_capacity(n - 1);
        let mut log = vec![0u8; n];
        let mut x = 1u8;
        for k in 0..(q - 1) {
            exp.push(x);
            log[x as usize] = k;
            x = mul(x, g);
        }
        debug_assert_eq!(x, 1);
        Ok(Gf { q, p, add: t_add, mul: t_mul, neg, inv, exp, log })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    /// Order of the multiplicative group.
    pub fn units(&self) -> u8 {
        self.q - 1
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn exp(&self, k: i64) -> u8 {
        self.exp[k.rem_euclid(self.units() as i64) as usize]
    }

    pub fn log(&self, a: u8) -> u8 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    /// Discrete log of `−1`.
    pub fn log_minus_one(&self) -> u8 {
        self.log(self.neg(1))
    }

    /// An `F_p`-basis of `F_q`, used for root-subgroup generators.
    pub fn additive_basis(&self) -> Vec<u8> {
        if self.q == 4 {
            vec![1, 2]
        } else {
            vec![1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold() {
        for q in [2u8, 3, 4, 5] {
            let f = Gf::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.exp(f.log(a) as i64), a);
                }
                for b in 0..q {
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn f4_generator_has_order_three() {
        let f = Gf::new(4).unwrap();
        assert_eq!(f.p(), 2);
        let x = f.exp(1);
        assert_eq!(f.mul(f.mul(x, x), x), 1);
        assert_ne!(f.mul(x, x), 1);
    }

    #[test]
    fn rejects_unsupported_size() {
        assert!(Gf::new(7).is_err());
    }
}
