use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CertifyError;

/// A reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigUint,
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, CertifyError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(CertifyError::Parse("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
        let num = sign * &num / &g;
        let den = (den.abs() / g).to_biguint().unwrap();
        Ok(Rational { num, den })
    }

    pub fn from_int(n: i64) -> Self {
        Rational { num: BigInt::from(n), den: BigUint::one() }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `self - 1`; the denominator is unchanged.
    pub fn minus_one(&self) -> Rational {
        Rational { num: &self.num - BigInt::from(self.den.clone()), den: self.den.clone() }
    }

    /// |numerator| as a natural number.
    pub fn num_abs(&self) -> BigUint {
        self.num.magnitude().clone()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CertifyError::Parse(format!("not a rational number: {s:?}"));
        let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|_| bad());
        match s.split_once('/') {
            Some((a, b)) => Rational::new(parse(a)?, parse(b)?),
            None => Rational::new(parse(s)?, 1),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn count_divisions(mut n: BigUint, p: &BigUint) -> i64 {
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact p-adic valuation; negative when p divides the denominator.
pub fn valuation(r: &Rational, p: &BigUint) -> Result<i64, CertifyError> {
    if r.is_zero() {
        return Err(CertifyError::ZeroArgument);
    }
    if *p <= BigUint::one() {
        return Err(CertifyError::Parse(format!("{p} is not a prime")));
    }
    let up = count_divisions(r.num_abs(), p);
    if up > 0 {
        return Ok(up);
    }
    Ok(-count_divisions(r.den.clone(), p))
}
