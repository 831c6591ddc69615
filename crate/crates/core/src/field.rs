//! Exact scalar fields for the restoration oracle.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic needed by elimination and the restoration steps.
pub trait ExactField: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// A random nonzero element, used as a generic evaluation point.
    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// The Mersenne prime `2^61 - 1`.
pub const PRIME_MODULUS: u64 = (1 << 61) - 1;

/// An element of `F_q` for `q = 2^61 - 1`, kept reduced in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(value: u64) -> Self {
        Fp(value % PRIME_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        // 2^61 ≡ 1, so fold the high bits onto the low bits twice.
        let q = PRIME_MODULUS as u128;
        let folded = (x & q) + (x >> 61);
        let folded = (folded & q) + (folded >> 61);
        let r = folded as u64;
        if r >= PRIME_MODULUS {
            r - PRIME_MODULUS
        } else {
            r
        }
    }

    fn pow(self, mut exp: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl ExactField for Fp {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= PRIME_MODULUS { s - PRIME_MODULUS } else { s })
    }

    fn sub(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 {
            self.0 - other.0
        } else {
            self.0 + PRIME_MODULUS - other.0
        })
    }

    fn mul(&self, other: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * other.0 as u128))
    }

    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { PRIME_MODULUS - self.0 })
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(PRIME_MODULUS - 2))
    }

    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(1..PRIME_MODULUS))
    }
}

/// Upper end of the numerator and denominator range for random rationals.
pub const RATIONAL_SAMPLE_MAX: i64 = 1_000_000;

/// A random positive rational `a/b` with `a, b` uniform in `[1, 10^6]`.
pub fn sample_positive_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let a = rng.gen_range(1..=RATIONAL_SAMPLE_MAX);
    let b = rng.gen_range(1..=RATIONAL_SAMPLE_MAX);
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

impl ExactField for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        sample_positive_rational(rng)
    }
}

/// Sign of an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

pub fn sign_of(x: &BigRational) -> Sign {
    if Zero::is_zero(x) {
        Sign::Zero
    } else if x.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// The field used by the vanishing-set oracle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FieldChoice {
    /// `F_q` with `q = 2^61 - 1`.
    #[default]
    Prime,
    /// Exact rationals with unbounded integers.
    Rational,
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Prime => write!(f, "prime:{PRIME_MODULUS}"),
            FieldChoice::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    /// Accepts `prime`, `prime:2305843009213693951` and `rational`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(FieldChoice::Prime),
            "rational" => Ok(FieldChoice::Rational),
            _ => match s.strip_prefix("prime:") {
                Some(q) if q == PRIME_MODULUS.to_string() => Ok(FieldChoice::Prime),
                Some(q) => Err(Error::input(format!(
                    "unsupported prime {q}; only {PRIME_MODULUS} is available"
                ))),
                None => Err(Error::input(format!("unknown field {s:?}; use prime or rational"))),
            },
        }
    }
}

impl Serialize for FieldChoice {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldChoice {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `"num/den"` text form of a rational, always with an explicit denominator.
pub fn rational_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::input(format!("cannot parse rational {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_axioms_spot_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = Fp::sample_nonzero(&mut rng);
            let b = Fp::sample_nonzero(&mut rng);
            assert_eq!(a.mul(&a.inv().unwrap()), Fp::one());
            assert_eq!(a.add(&b).sub(&b), a);
            assert_eq!(a.add(&a.neg()), Fp::zero());
            // cross-check multiplication against u128 remainder
            let expected = (a.value() as u128 * b.value() as u128 % PRIME_MODULUS as u128) as u64;
            assert_eq!(a.mul(&b).value(), expected);
        }
        assert_eq!(Fp::zero().inv(), None);
        assert_eq!(Fp::new(PRIME_MODULUS - 1).mul(&Fp::new(PRIME_MODULUS - 1)), Fp::one());
    }

    #[test]
    fn rational_sampling_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sign_of(&sample_positive_rational(&mut rng)), Sign::Positive);
        }
    }

    #[test]
    fn field_choice_text() {
        assert_eq!(FieldChoice::Prime.to_string(), "prime:2305843009213693951");
        assert_eq!("prime".parse::<FieldChoice>().unwrap(), FieldChoice::Prime);
        assert_eq!(
            "prime:2305843009213693951".parse::<FieldChoice>().unwrap(),
            FieldChoice::Prime
        );
        assert_eq!("rational".parse::<FieldChoice>().unwrap(), FieldChoice::Rational);
        assert!("prime:7".parse::<FieldChoice>().is_err());
        assert!("reals".parse::<FieldChoice>().is_err());
    }

    #[test]
    fn rational_text() {
        let x = rational_from_str("6/4").unwrap();
        assert_eq!(rational_to_string(&x), "3/2");
        assert_eq!(rational_to_string(&rational_from_str("2").unwrap()), "2/1");
        assert_eq!(rational_to_string(&rational_from_str("-0/5").unwrap()), "0/1");
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }
}
