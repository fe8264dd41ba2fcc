use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// SO(2) holonomy weight α = num/den with den ∈ {1, 2}, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    num: i64,
    den: i64,
}

impl Weight {
    pub const ZERO: Weight = Weight { num: 0, den: 1 };
    pub const HALF: Weight = Weight { num: 1, den: 2 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("weight denominator is zero".into()));
        }
        let g = gcd(num.abs(), den.abs()).max(1);
        let s = den.signum();
        let (num, den) = (s * num / g, s * den / g);
        if den != 1 && den != 2 {
            return Err(Error::BadParams(format!("weight {num}/{den} is not integer or half-integer")));
        }
        Ok(Weight { num, den })
    }

    pub fn integer(m: i64) -> Self {
        Weight { num: m, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn den(&self) -> i64 {
        self.den
    }
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
    pub fn abs(&self) -> Self {
        Weight { num: self.num.abs(), den: self.den }
    }
    /// Twice the weight, always an integer.
    pub fn twice(&self) -> i64 {
        2 * self.num / self.den
    }
    pub fn from_twice(k: i64) -> Self {
        Weight::new(k, 2).expect("den 2 is valid")
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad weight '{s}' (expected p or p/q)"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        Weight::new(n, d)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.num, self.den].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [num, den] = <[i64; 2]>::deserialize(d)?;
        Weight::new(num, den).map_err(serde::de::Error::custom)
    }
}
