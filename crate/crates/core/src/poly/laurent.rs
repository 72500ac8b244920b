use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exponent::ExponentVector;
use super::scalar::Scalar;
use super::MAX_ARITY;
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in `nvars` variables with `Scalar` coefficients.
///
/// Terms are kept in a map keyed by exponent (grevlex), zero coefficients
/// are never stored, and iteration via [`LaurentPoly::terms`] runs in
/// descending term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Scalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_ARITY, "arity {nvars} exceeds {MAX_ARITY}");
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        LaurentPoly::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        LaurentPoly::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn monomial(exp: ExponentVector, c: Scalar) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// `x^exp` with coefficient 1.
    pub fn from_exponent(exp: impl Into<ExponentVector>) -> Self {
        LaurentPoly::monomial(exp.into(), Scalar::one())
    }

    /// The generator `x_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        LaurentPoly::from_exponent(ExponentVector::unit(nvars, i))
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Scalar)>,
    {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    /// Convenience constructor from integer coefficients and exponent rows.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[i32])]) -> Self {
        LaurentPoly::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (ExponentVector::new(e.to_vec()), Scalar::from(*c))),
        )
        .expect("exponent rows must match the arity")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Largest term in grevlex order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }

    pub fn parameters(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .values()
            .flat_map(|c| c.params().keys().cloned())
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                slot.add_assign(c);
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check_arity(&self, other: &LaurentPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_arity(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, &ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.try_mul(s)?);
        }
        Ok(out)
    }

    pub fn scale_rational(&self, r: &BigRational) -> LaurentPoly {
        if r.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul_rational(r)))
                .collect(),
        }
    }

    /// Multiplies by the monomial `c * x^e`.
    pub fn mul_term(&self, e: &ExponentVector, c: &Scalar) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            out.add_term(ea.checked_add(e)?, &ca.try_mul(c)?);
        }
        Ok(out)
    }

    /// Nonnegative power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Result<LaurentPoly> {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `d/dx_i`, with Laurent exponents allowed.
    pub fn partial_derivative(&self, i: usize) -> Result<LaurentPoly> {
        if i >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: i,
                arity: self.nvars,
            });
        }
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k == 0 {
                continue;
            }
            let lowered = k.checked_sub(1).ok_or(Error::ExponentOverflow)?;
            let factor = BigRational::from_integer(BigInt::from(k));
            out.add_term(e.with(i, lowered), &c.mul_rational(&factor));
        }
        Ok(out)
    }

    /// If this is a single term `c * x^e` with rational `c`, returns it.
    pub fn as_unit_monomial(&self) -> Option<(&ExponentVector, &BigRational)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        c.as_rational().map(|r| (e, r))
    }

    /// Algebra-morphism evaluation `x_i -> images[i]`.
    ///
    /// A variable occurring with a negative exponent must map to a unit
    /// monomial, since only those are invertible.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map(LaurentPoly::nvars).unwrap_or(0);
        for img in images {
            if img.nvars != target {
                return Err(Error::ArityMismatch {
                    expected: target,
                    found: img.nvars,
                });
            }
        }
        let mut inverses: Vec<Option<LaurentPoly>> = vec![None; self.nvars];
        let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(target);
        for (e, c) in &self.terms {
            let mut acc = LaurentPoly::constant(target, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = powers.entry((i, k)) {
                    let p = if k > 0 {
                        images[i].pow(k as u32)?
                    } else {
                        if inverses[i].is_none() {
                            let (ue, uc) = images[i]
                                .as_unit_monomial()
                                .ok_or(Error::NegativePowerOfNonUnit { var: i })?;
                            let inv =
                                LaurentPoly::monomial(ue.scaled(-1)?, Scalar::from(uc.recip()));
                            inverses[i] = Some(inv);
                        }
                        inverses[i].as_ref().unwrap().pow(k.unsigned_abs())?
                    };
                    e.insert(p);
                }
                acc = acc.mul(&powers[&(i, k)])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Splits by Adams degree (exponent sum).
    pub fn adams_components(&self) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.degree())
                .or_insert_with(|| LaurentPoly::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(ExponentVector::degree).max()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().map(ExponentVector::degree).min()
    }

    /// Top Adams-degree form; zero for zero.
    pub fn top_form(&self) -> LaurentPoly {
        match self.max_degree() {
            None => LaurentPoly::zero(self.nvars),
            Some(d) => self.filter_terms(|e, _| e.degree() == d),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| !e.is_nonnegative())
    }

    /// First variable carrying a negative exponent somewhere, if any.
    pub fn first_negative_variable(&self) -> Option<usize> {
        (0..self.nvars).find(|&i| self.terms.keys().any(|e| e.get(i) < 0))
    }

    pub fn filter_terms<F>(&self, mut keep: F) -> LaurentPoly
    where
        F: FnMut(&ExponentVector, &Scalar) -> bool,
    {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, c)| keep(e, c))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-embeds the exponents through `f`, which must produce vectors of
    /// length `nvars`.
    pub fn map_exponents<F>(&self, nvars: usize, mut f: F) -> Result<LaurentPoly>
    where
        F: FnMut(&ExponentVector) -> ExponentVector,
    {
        LaurentPoly::from_terms(nvars, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// Evaluates all parameters at rationals.
    pub fn specialize(&self, values: &BTreeMap<String, BigRational>) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &Scalar::from(c.specialize(values)?));
        }
        Ok(out)
    }

    /// Coefficients as rationals, failing if any carries a parameter.
    pub fn rational_terms(&self) -> Result<Vec<(ExponentVector, BigRational)>> {
        self.terms()
            .map(|(e, c)| {
                c.as_rational()
                    .cloned()
                    .map(|r| (e.clone(), r))
                    .ok_or_else(|| Error::BadCoefficient(c.to_string()))
            })
            .collect()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_zero() && c.is_one())
                .unwrap_or(false)
    }
}
