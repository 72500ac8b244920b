use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::poly::{ExponentVector, Scalar};

/// Skew-symmetric matrix of scalars `Λ = (λ_ij)`, the structure constants
/// `{x_i, x_j} = λ_ij x_i x_j` of a quantum torus or skew polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewParamMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl SkewParamMatrix {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            return Err(Error::NotSquare { rows: n, cols });
        }
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        let m = SkewParamMatrix { n, entries };
        for i in 0..n {
            for j in i..n {
                if !m.get(i, j).add(m.get(j, i)).is_zero() {
                    return Err(Error::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(m)
    }

    /// Builds `Λ` from its strict upper triangle `λ_ij`, `i < j`.
    pub fn from_upper(n: usize, upper: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut entries = vec![Scalar::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = upper(i, j);
                entries[j * n + i] = v.neg();
                entries[i * n + j] = v;
            }
        }
        SkewParamMatrix { n, entries }
    }

    pub fn from_int(m: &IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let rows = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| Scalar::from(m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        SkewParamMatrix::new(rows)
    }

    /// `λ·M` for an integer skew matrix `M`.
    pub fn uniparameter(lambda: &Scalar, m: &IntMatrix) -> Result<Self> {
        let base = SkewParamMatrix::from_int(m)?;
        let entries = base
            .entries
            .iter()
            .map(|e| lambda.mul_rational(e.constant()))
            .collect();
        Ok(SkewParamMatrix { n: base.n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn parameters(&self) -> Vec<String> {
        let names: BTreeSet<&String> = self
            .entries
            .iter()
            .flat_map(|e| e.params().keys())
            .collect();
        names.into_iter().cloned().collect()
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(Scalar::is_rational)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[Scalar]>::to_vec)
            .collect()
    }

    /// Rational coefficient matrix of one parameter (`None` for the
    /// constant part).
    pub fn coefficient_matrix(&self, param: Option<&str>) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).coefficient(param))
                    .collect()
            })
            .collect()
    }

    /// The nonzero coefficient matrices, constant part first, each scaled to
    /// a primitive integer matrix.
    pub fn integer_coefficient_matrices(&self) -> Vec<(Option<String>, IntMatrix)> {
        let mut keys: Vec<Option<String>> = vec![None];
        keys.extend(self.parameters().into_iter().map(Some));
        keys.into_iter()
            .filter_map(|key| {
                let m = self.coefficient_matrix(key.as_deref());
                let cleared = clear_denominators(&m);
                (!cleared.is_zero()).then_some((key, cleared))
            })
            .collect()
    }

    /// `Some((λ, M))` when `Λ = λ·M` with `M` an integer matrix and `λ` a
    /// single parameter multiple or a rational.
    pub fn as_uniparameter(&self) -> Option<(Scalar, IntMatrix)> {
        let mats = self.integer_coefficient_matrices();
        match mats.len() {
            0 => Some((Scalar::one(), IntMatrix::zeros(self.n, self.n))),
            1 => {
                let (key, m) = &mats[0];
                let (i, j) = (0..self.n * self.n)
                    .map(|k| (k / self.n, k % self.n))
                    .find(|&(i, j)| !m.get(i, j).is_zero())?;
                let ratio = self.get(i, j).coefficient(key.as_deref())
                    / BigRational::from_integer(m.get(i, j).clone());
                let lambda = match key {
                    None => Scalar::from(ratio),
                    Some(p) => Scalar::param(p).mul_rational(&ratio),
                };
                Some((lambda, m.clone()))
            }
            _ => None,
        }
    }

    /// `uᵀ Λ v`.
    pub fn pairing(&self, u: &ExponentVector, v: &ExponentVector) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.n {
            let ui = u.get(i);
            if ui == 0 {
                continue;
            }
            for j in 0..self.n {
                let vj = v.get(j);
                if vj == 0 || i == j {
                    continue;
                }
                let k = BigRational::from_integer(BigInt::from(ui as i64 * vj as i64));
                acc.add_assign(&self.get(i, j).mul_rational(&k));
            }
        }
        acc
    }

    pub fn specialize(
        &self,
        values: &std::collections::BTreeMap<String, BigRational>,
    ) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.specialize(values).map(Scalar::from))
            .collect::<Result<_>>()?;
        Ok(SkewParamMatrix { n: self.n, entries })
    }
}

fn clear_denominators(m: &[Vec<BigRational>]) -> IntMatrix {
    let mut den = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for r in m.iter().flatten() {
        den = den.lcm(r.denom());
        num_gcd = num_gcd.gcd(r.numer());
    }
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| {
                    let scaled = (r * BigRational::from_integer(den.clone())).to_integer();
                    if num_gcd.is_zero() {
                        scaled
                    } else {
                        scaled / &num_gcd
                    }
                })
                .collect()
        })
        .collect();
    let n = m.len();
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(&rows).expect("square")
}
