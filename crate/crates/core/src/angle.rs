//! Exact phases `e^{iπt}` with `t` rational, reduced into `[0, 2)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// The phase `e^{iπt}`. Equality is exact rational equality of `t mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle(Rational64);

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle(Rational64::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Self {
        Self::from_ratio(Rational64::new(num, den))
    }

    pub fn from_ratio(t: Rational64) -> Self {
        let two = Rational64::from_integer(2);
        let mut r = t % two;
        if r.is_negative() {
            r += two;
        }
        RationalAngle(r)
    }

    /// `t` in `[0, 2)`.
    pub fn turns_of_pi(&self) -> Rational64 {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True when the phase is `-1`.
    pub fn is_minus_one(&self) -> bool {
        self.0 == Rational64::from_integer(1)
    }

    pub fn conj(&self) -> Self {
        -*self
    }

    pub fn to_complex(&self) -> Complex64 {
        let x = std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        Complex64::new(x.cos(), x.sin())
    }

    /// Smallest `n > 0` with `nt ≡ 0 mod 2`.
    pub fn order(&self) -> u64 {
        if self.0.is_zero() {
            return 1;
        }
        // t = p/q in lowest terms; n p / q even  <=>  q | n and 2 | n p / q
        let p = *self.0.numer();
        let q = *self.0.denom() as u64;
        if p % 2 == 0 {
            q
        } else {
            2 * q
        }
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: Self) -> Self {
        RationalAngle::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: Self) -> Self {
        RationalAngle::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> Self {
        RationalAngle::from_ratio(-self.0)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}π", self.0.numer(), self.0.denom())
        }
    }
}

/// Serialized as the reduced pair `[num, den]` of `t`.
impl Serialize for RationalAngle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [*self.0.numer(), *self.0.denom()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [n, den] = <[i64; 2]>::deserialize(d)?;
        if den <= 0 {
            return Err(serde::de::Error::custom("angle denominator must be positive"));
        }
        Ok(RationalAngle::new(n, den))
    }
}
