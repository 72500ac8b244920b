//! Linear algebra over Q on sparse coordinate vectors.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{ExponentVector, LaurentPoly, Scalar};

/// Sparse row vector indexed by column position.
pub type SparseRow = BTreeMap<usize, BigRational>;

/// Basis of the solution space of `rows * c = 0` in `ncols` unknowns.
///
/// Each basis vector has a 1 in one free column and zeros in every other
/// free column, which makes the output canonical.
pub fn nullspace(rows: &[SparseRow], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut echelon = Echelon::default();
    for r in rows {
        echelon.insert(r.clone());
    }
    let pivots: BTreeMap<usize, &SparseRow> = echelon
        .rows
        .iter()
        .map(|r| (*r.keys().next().unwrap(), r))
        .collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains_key(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (&p, row) in &pivots {
            if let Some(x) = row.get(&free) {
                v[p] = -x.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// Rows with leading coefficient 1 at distinct pivot columns, fully
    /// reduced against each other.
    rows: Vec<SparseRow>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    fn reduce(&self, mut v: SparseRow) -> SparseRow {
        for row in &self.rows {
            let p = *row.keys().next().unwrap();
            if let Some(f) = v.get(&p).cloned() {
                for (c, x) in row {
                    let slot = v.entry(*c).or_insert_with(BigRational::zero);
                    *slot -= &f * x;
                    if slot.is_zero() {
                        v.remove(c);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseRow) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseRow) -> bool {
        let mut v = self.reduce(v);
        let Some((&p, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        for row in &mut self.rows {
            if let Some(f) = row.get(&p).cloned() {
                for (c, x) in &v {
                    let slot = row.entry(*c).or_insert_with(BigRational::zero);
                    *slot -= &f * x;
                    if slot.is_zero() {
                        row.remove(c);
                    }
                }
            }
        }
        self.rows.push(v);
        self.rows.sort_by_key(|r| *r.keys().next().unwrap());
        true
    }
}

/// Bijection between monomials and coordinate positions.
#[derive(Clone, Debug, Default)]
pub struct MonomialIndex {
    nvars: usize,
    positions: BTreeMap<ExponentVector, usize>,
    monomials: Vec<ExponentVector>,
}

impl MonomialIndex {
    pub fn new(nvars: usize) -> Self {
        MonomialIndex {
            nvars,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn get_or_insert(&mut self, e: &ExponentVector) -> usize {
        if let Some(&i) = self.positions.get(e) {
            return i;
        }
        let i = self.monomials.len();
        self.positions.insert(e.clone(), i);
        self.monomials.push(e.clone());
        i
    }

    pub fn position(&self, e: &ExponentVector) -> Option<usize> {
        self.positions.get(e).copied()
    }

    /// Coordinates of a rational polynomial; `None` if a coefficient carries
    /// a parameter.
    pub fn coordinates(&mut self, p: &LaurentPoly) -> Option<SparseRow> {
        let mut row = SparseRow::new();
        for (e, c) in p.terms() {
            let i = self.get_or_insert(e);
            row.insert(i, c.as_rational()?.clone());
        }
        Some(row)
    }

    pub fn to_poly(&self, coords: impl IntoIterator<Item = (usize, BigRational)>) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.nvars,
            coords
                .into_iter()
                .map(|(i, c)| (self.monomials[i].clone(), Scalar::from(c))),
        )
        .expect("indexed monomials share the arity")
    }
}
