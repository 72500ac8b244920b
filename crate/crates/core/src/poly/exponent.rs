use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A point of Z^n naming the Laurent monomial `x^e`.
///
/// The total order is graded reverse lexicographic with `x1 > x2 > ...`,
/// which is also the canonical term order for rendering.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Box<[i32]>);

impl ExponentVector {
    pub fn new(exps: Vec<i32>) -> Self {
        ExponentVector(exps.into_boxed_slice())
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n].into_boxed_slice())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i32 {
        self.0[i]
    }

    /// Adams degree: the exponent sum.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn checked_add(&self, other: &ExponentVector) -> Result<ExponentVector> {
        let v = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentVector::new(v))
    }

    pub fn checked_sub(&self, other: &ExponentVector) -> Result<ExponentVector> {
        let v = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentVector::new(v))
    }

    pub fn scaled(&self, k: i32) -> Result<ExponentVector> {
        let v = self
            .0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentVector::new(v))
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other` among
    /// ordinary monomials.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn with(&self, i: usize, value: i32) -> ExponentVector {
        let mut v = self.0.to_vec();
        v[i] = value;
        ExponentVector::new(v)
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(v: Vec<i32>) -> Self {
        ExponentVector::new(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex(&self.0, &other.0)
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded reverse lexicographic comparison of two exponent slices of equal
/// length, with the first variable largest.
/// All nonnegative exponent vectors in `n` variables of total degree at most
/// `d`, ordered by degree and then descending grevlex within a degree.
pub fn monomials_up_to_degree(n: usize, d: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    for k in 0..=d {
        let mut layer = monomials_of_degree(n, k);
        layer.sort_by(|a, b| b.cmp(a));
        out.extend(layer);
    }
    out
}

/// All nonnegative exponent vectors in `n` variables of total degree `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, left: i32, prefix: &mut Vec<i32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(ExponentVector::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(ExponentVector::new(Vec::new()));
        }
        return out;
    }
    rec(n, d as i32, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn grevlex(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
