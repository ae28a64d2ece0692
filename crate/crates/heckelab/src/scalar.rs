//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Scalar`]. Two families implement it:
//! prime fields [`Fp`] with a const modulus, and the rationals [`Q`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

/// An exact field usable as a coefficient ring.
pub trait Scalar:
    Num + Clone + Eq + Hash + Debug + Display + Neg<Output = Self> + Send + Sync + 'static
{
    /// 0 for the rationals, the prime otherwise.
    fn characteristic() -> u64;
    fn from_i64(v: i64) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// `fp:P` or `q`, matching the CLI coefficient grammar.
    fn descriptor() -> String;
    fn parse_scalar(s: &str) -> Option<Self>;
    /// All elements, for finite fields only.
    fn enumerate() -> Option<Vec<Self>>;

    fn is_invertible_int(v: i64) -> bool {
        !Self::from_i64(v).is_zero()
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        Some(acc)
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp((self.0 * o.0) % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero in prime field")
    }
}

// Every nonzero element is a unit, so the remainder of a field division is zero.
impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, _o: Self) -> Self {
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(P-2).
        let mut base = self.0;
        let mut e = P - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Some(Fp(acc))
    }

    fn descriptor() -> String {
        format!("fp:{P}")
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        s.trim().parse::<i64>().ok().map(Fp::new)
    }

    fn enumerate() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
}

/// Rational numbers.
pub type Q = BigRational;

impl Scalar for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn descriptor() -> String {
        "q".to_string()
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        s.trim().parse::<BigRational>().ok()
    }

    fn enumerate() -> Option<Vec<Self>> {
        None
    }
}

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F11 = Fp<11>;
pub type F13 = Fp<13>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        for a in 1..7 {
            let x = F7::new(a);
            assert_eq!(x * x.inverse().unwrap(), F7::one());
        }
        assert!(F7::zero().inverse().is_none());
    }

    #[test]
    fn rational_round_trip() {
        let x = Q::parse_scalar("-3/4").unwrap();
        assert_eq!(Q::parse_scalar(&x.to_string()).unwrap(), x);
        assert_eq!(Q::characteristic(), 0);
    }

    #[test]
    fn negative_integers_reduce() {
        assert_eq!(F3::from_i64(-1), F3::new(2));
        assert_eq!(F5::from_i64(-7).value(), 3);
    }

    #[test]
    fn pow_with_negative_exponent() {
        let q = Q::from_i64(3);
        assert_eq!(q.pow_i(-2).unwrap(), Q::new(1.into(), 9.into()));
    }
}
