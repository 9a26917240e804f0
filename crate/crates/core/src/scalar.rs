//! Scalar bound shared by the polynomial containers, plus helpers for the
//! exact rational instantiation.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// Coefficient field for [`crate::UnivarPoly`] and [`crate::BivarPoly`].
///
/// Exact symbolic work uses [`crate::Rational`]; `f64` is accepted for
/// numerical experiments with the same containers.
pub trait Coeff:
    Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + Send + Sync
{
    /// Embeds a machine integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every field here contains the integers")
    }
}

impl<T> Coeff for T where
    T: Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + Send + Sync
{
}

/// Builds `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Embeds an integer as an exact rational.
pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Always renders `num/den`, including for integers (`2/1`).
pub fn rat_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a`, `-a` or `a/b`.
pub fn rat_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Least common multiple of the denominators in `it`.
pub fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    use num_integer::Integer;
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Serde adapter rendering rationals as `"num/den"` strings.
pub mod serde_rat {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::rat_from_str(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_zero_and_sign() {
        let z = rat(0, -7);
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
        let r = rat(4, -6);
        assert_eq!(rat_to_string(&r), "-2/3");
        assert_eq!(rat_to_string(&rat_int(2)), "2/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/4", "-5", "0", "10/-4"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
        }
        assert!(rat_from_str("1/0").is_none());
        assert!(rat_from_str("x").is_none());
    }
}
