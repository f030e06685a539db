//! Coefficient types.
//!
//! Everything in the algebra layer is generic over [`Scalar`]. The exact
//! rational instance is what the verification machinery uses; the float
//! instances exist for quick numerical exploration.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync {
    fn from_bigint(n: &BigInt) -> Self;

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        Self::from_bigint(num) / Self::from_bigint(den)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Whether values of this type are exact (equality tests are meaningful).
    const EXACT: bool;
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    const EXACT: bool = false;
}

impl Scalar for f32 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    const EXACT: bool = false;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced() {
        let q = BigRational::from_ratio(&BigInt::from(6), &BigInt::from(-4));
        assert_eq!(q, BigRational::new(BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn float_from_ratio() {
        let x = f64::from_ratio(&BigInt::from(1), &BigInt::from(4));
        assert_eq!(x, 0.25);
    }
}
