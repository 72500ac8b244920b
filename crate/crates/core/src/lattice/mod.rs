//! Exact integer linear algebra: Smith and Hermite forms, determinants,
//! integer left kernels and unimodular inverses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::ExponentVector;

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: expected {c} columns, found {}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds an `n x k` matrix whose columns are the given vectors.
    pub fn from_columns<T: Clone + Into<BigInt>>(cols: &[Vec<T>]) -> Result<Self> {
        Ok(IntMatrix::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (i + 1..self.cols).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }

    /// `v * self` for a row vector `v`.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d1 | d2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by repeated minimal-pivot gcd reduction.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if !x.is_zero()
                        && best
                            .map(|(bi, bj)| x.abs() < a.get(bi, bj).abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(a, u, v);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                let nq = -q;
                a.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(a, u, v)
}

fn finish_smith(mut a: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> SmithDecomposition {
    for t in 0..a.rows.min(a.cols) {
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d: a, v }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_int(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, val);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Row-style Hermite normal form: echelon rows with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped,
/// so the result is a basis of the row lattice.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut p = 0;
    for col in 0..a.cols {
        if p == a.rows {
            break;
        }
        loop {
            let best = (p..a.rows)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by(|&x, &y| a.get(x, col).abs().cmp(&a.get(y, col).abs()));
            let Some(b) = best else { break };
            a.swap_rows(p, b);
            let pivot = a.get(p, col).clone();
            let mut clean = true;
            for r in p + 1..a.rows {
                let q = -a.get(r, col).div_floor(&pivot);
                a.add_row_multiple(r, p, &q);
                clean &= a.get(r, col).is_zero();
            }
            if clean {
                break;
            }
        }
        if a.get(p, col).is_zero() {
            continue;
        }
        if a.get(p, col).is_negative() {
            a.negate_row(p);
        }
        let pivot = a.get(p, col).clone();
        for r in 0..p {
            let q = -a.get(r, col).div_floor(&pivot);
            a.add_row_multiple(r, p, &q);
        }
        p += 1;
    }
    let mut out = IntMatrix::zeros(p, a.cols);
    for i in 0..p {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    out
}

/// Tests whether `v` lies in the row lattice spanned by a row-HNF basis.
pub fn in_hermite_lattice(hnf: &IntMatrix, v: &[BigInt]) -> bool {
    let mut rest = v.to_vec();
    for r in 0..hnf.rows {
        let Some(c) = (0..hnf.cols).find(|&j| !hnf.get(r, j).is_zero()) else {
            continue;
        };
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = rest[c].div_rem(hnf.get(r, c));
        if !rem.is_zero() {
            return false;
        }
        for (j, x) in rest.iter_mut().enumerate() {
            *x -= &q * hnf.get(r, j);
        }
    }
    rest.iter().all(Zero::is_zero)
}

fn to_exponent(v: &[BigInt]) -> ExponentVector {
    ExponentVector::new(
        v.iter()
            .map(|x| i32::try_from(x).expect("kernel entry fits in an exponent"))
            .collect(),
    )
}

/// Left kernel lattice `{a : a * m = 0}` as raw big-integer rows: primitive,
/// first nonzero coordinate positive, sorted lexicographically.
pub fn integer_left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let mut basis = IntMatrix::zeros(m.rows - r, m.rows);
    for (k, i) in (r..m.rows).enumerate() {
        for j in 0..m.rows {
            basis.set(k, j, snf.u.get(i, j).clone());
        }
    }
    let mut rows = hermite_rows(&basis).to_rows();
    rows.sort();
    rows
}

/// Z-basis of the integer vectors `a` with `a * m = 0`, normalized for
/// deterministic output.
pub fn integer_nullspace(m: &IntMatrix) -> Vec<ExponentVector> {
    integer_left_kernel(m)
        .iter()
        .map(|v| to_exponent(v))
        .collect()
}

/// Inverse of a matrix with determinant +-1.
pub fn unimodular_inverse(b: &IntMatrix) -> Result<IntMatrix> {
    let det = det_int(b)?;
    if det.abs() != BigInt::one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let snf = smith_normal_form(b);
    let inv = snf.v.mul(&snf.u)?;
    if b.mul(&inv)? != IntMatrix::identity(b.rows) {
        return Err(Error::Internal("unimodular inverse does not invert".into()));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests;
