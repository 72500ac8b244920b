use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A rational linear form `c0 + sum_k c_k * q_k` in named formal parameters.
///
/// Parameters are treated as Q-linearly independent symbols. With no
/// parameters this is just an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    constant: BigRational,
    params: BTreeMap<String, BigRational>,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar {
            constant: r,
            params: BTreeMap::new(),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::from(BigRational::from_integer(v))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            constant: BigRational::zero(),
            params: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Scalar::from(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from(BigRational::new(num.into(), den.into()))
    }

    /// The formal parameter `name` with coefficient 1.
    pub fn param(name: &str) -> Self {
        let mut params = BTreeMap::new();
        params.insert(name.to_string(), BigRational::one());
        Scalar {
            constant: BigRational::zero(),
            params,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.params.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant.is_one() && self.params.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.params.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.constant)
    }

    pub fn constant(&self) -> &BigRational {
        &self.constant
    }

    /// Parameter coefficients, keyed by parameter name. Never contains zeros.
    pub fn params(&self) -> &BTreeMap<String, BigRational> {
        &self.params
    }

    /// Coefficient of `name`, or of the constant term when `name` is `None`.
    pub fn coefficient(&self, name: Option<&str>) -> BigRational {
        match name {
            None => self.constant.clone(),
            Some(p) => self
                .params
                .get(p)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Scalar) {
        self.constant += &other.constant;
        for (k, v) in &other.params {
            let slot = self
                .params
                .entry(k.clone())
                .or_insert_with(BigRational::zero);
            *slot += v;
            if slot.is_zero() {
                self.params.remove(k);
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            constant: -&self.constant,
            params: self.params.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul_rational(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            constant: &self.constant * r,
            params: self
                .params
                .iter()
                .map(|(k, v)| (k.clone(), v * r))
                .collect(),
        }
    }

    /// Product, defined when at least one factor is parameter-free.
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_rational() {
            Ok(self.mul_rational(&other.constant))
        } else if self.is_rational() {
            Ok(other.mul_rational(&self.constant))
        } else {
            Err(Error::ParameterProduct(self.to_string(), other.to_string()))
        }
    }

    pub fn div_rational(&self, r: &BigRational) -> Result<Scalar> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_rational(&r.recip()))
    }

    /// Evaluates the parameters at the given rationals; missing ones are an error.
    pub fn specialize(&self, values: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let mut out = self.constant.clone();
        for (k, v) in &self.params {
            let val = values
                .get(k)
                .ok_or_else(|| Error::InvalidStructure(format!("no value for parameter {k}")))?;
            out += v * val;
        }
        Ok(out)
    }

    pub fn is_negative_rational(&self) -> bool {
        self.is_rational() && self.constant.is_negative()
    }

    /// Rendering that can stand as a multiplicative prefix: single terms bare,
    /// sums parenthesized.
    pub(crate) fn is_single_term(&self) -> bool {
        matches!(
            (self.constant.is_zero(), self.params.len()),
            (_, 0) | (true, 1)
        )
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_coeff_times(c: &BigRational, name: &str) -> String {
    if c.is_one() {
        name.to_string()
    } else if (-c).is_one() {
        format!("-{name}")
    } else {
        format!("{}*{name}", fmt_rational(c))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_zero() || self.params.is_empty() {
            parts.push(fmt_rational(&self.constant));
        }
        for (k, v) in &self.params {
            parts.push(fmt_coeff_times(v, k));
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        f.write_str(&out)
    }
}
