//! Poisson morphisms: generator-pair verification, the classification of
//! monomial endomorphisms of tori, and Jacobian injectivity certificates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::analysis::is_poisson_simple_torus;
use crate::bracket::{PoissonStructure, SkewParamMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{det_int, hermite_rows, in_hermite_lattice, unimodular_inverse, IntMatrix};
use crate::poly::{ExponentVector, LaurentPoly, Scalar};

/// `φ(x_i) = c_i x^{b_i}` with `b_i` the `i`-th column of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    exponents: IntMatrix,
    coefficients: Vec<BigRational>,
}

impl MonomialMap {
    pub fn new(exponents: IntMatrix, coefficients: Vec<BigRational>) -> Result<Self> {
        if !exponents.is_square() {
            return Err(Error::NotSquare {
                rows: exponents.rows(),
                cols: exponents.cols(),
            });
        }
        if coefficients.len() != exponents.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} generators",
                coefficients.len(),
                exponents.cols()
            )));
        }
        if coefficients.iter().any(Zero::is_zero) {
            return Err(Error::BadCoefficient(
                "monomial map coefficients must be nonzero".into(),
            ));
        }
        for x in exponents.to_rows().iter().flatten() {
            if i32::try_from(x).is_err() {
                return Err(Error::ExponentOverflow);
            }
        }
        Ok(MonomialMap {
            exponents,
            coefficients,
        })
    }

    /// Unit coefficients.
    pub fn from_exponents(exponents: IntMatrix) -> Result<Self> {
        let n = exponents.cols();
        MonomialMap::new(exponents, vec![BigRational::one(); n])
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap {
            exponents: IntMatrix::identity(n),
            coefficients: vec![BigRational::one(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.exponents.cols()
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn exponent(&self, i: usize) -> ExponentVector {
        ExponentVector::new(
            self.exponents
                .column(i)
                .iter()
                .map(|x| i32::try_from(x).expect("checked at construction"))
                .collect(),
        )
    }

    pub fn image(&self, i: usize) -> LaurentPoly {
        LaurentPoly::monomial(self.exponent(i), Scalar::from(self.coefficients[i].clone()))
    }

    pub fn to_poly_map(&self) -> PolyMap {
        PolyMap {
            images: (0..self.n()).map(|i| self.image(i)).collect(),
        }
    }
}

/// `x_i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    pub images: Vec<LaurentPoly>,
}

impl PolyMap {
    pub fn new(images: Vec<LaurentPoly>) -> Result<Self> {
        if let Some(first) = images.first() {
            if let Some(bad) = images.iter().find(|p| p.nvars() != first.nvars()) {
                return Err(Error::ArityMismatch {
                    expected: first.nvars(),
                    found: bad.nvars(),
                });
            }
        }
        Ok(PolyMap { images })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            images: (0..n).map(|i| LaurentPoly::var(n, i)).collect(),
        }
    }

    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        f.substitute(&self.images)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        Ok(PolyMap {
            images: inner
                .images
                .iter()
                .map(|g| self.apply(g))
                .collect::<Result<_>>()?,
        })
    }
}

/// `φ({x_i, x_j})` against `{φ(x_i), φ(x_j)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorIdentity {
    pub i: usize,
    pub j: usize,
    /// `φ({x_i, x_j})`.
    pub lhs: LaurentPoly,
    /// `{φ(x_i), φ(x_j)}`.
    pub rhs: LaurentPoly,
}

impl GeneratorIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismCheck {
    Pass(Vec<GeneratorIdentity>),
    Fail(GeneratorIdentity),
}

impl MorphismCheck {
    pub fn passed(&self) -> bool {
        matches!(self, MorphismCheck::Pass(_))
    }
}

/// Compares `φ({x_i, x_j})` with `{φ(x_i), φ(x_j)}` for all `i < j`; both
/// sides are reduced in the target. Since both sides are biderivations
/// along `φ`, agreement on generators gives agreement everywhere.
pub fn check_poisson_morphism(
    src: &PoissonStructure,
    tgt: &PoissonStructure,
    map: &PolyMap,
) -> Result<MorphismCheck> {
    let n = src.arity();
    if map.images.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: map.images.len(),
        });
    }
    let images = map
        .images
        .iter()
        .map(|p| tgt.reduce(p))
        .collect::<Result<Vec<_>>>()?;
    let mut identities = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let src_bracket = src.bracket(&LaurentPoly::var(n, i), &LaurentPoly::var(n, j))?;
            let lhs = tgt.reduce(&src_bracket.substitute(&images)?)?;
            let rhs = tgt.bracket(&images[i], &images[j])?;
            let id = GeneratorIdentity { i, j, lhs, rhs };
            if !id.holds() {
                return Ok(MorphismCheck::Fail(id));
            }
            identities.push(id);
        }
    }
    Ok(MorphismCheck::Pass(identities))
}

fn check_square(lambda: &SkewParamMatrix, b: &IntMatrix) -> Result<()> {
    if b.rows() != lambda.n() || b.cols() != lambda.n() {
        return Err(Error::DimensionMismatch(format!(
            "exponent matrix is {}x{}, torus has {} generators",
            b.rows(),
            b.cols(),
            lambda.n()
        )));
    }
    Ok(())
}

fn column_exponent(b: &IntMatrix, i: usize) -> Result<ExponentVector> {
    b.column(i)
        .iter()
        .map(|x| i32::try_from(x).map_err(|_| Error::ExponentOverflow))
        .collect::<Result<Vec<_>>>()
        .map(ExponentVector::new)
}

/// First pair `i < j` with `b_iᵀ Λ b_j ≠ λ_ij`, if any. The coefficients of
/// a monomial map cancel from both sides, so only `B` matters.
pub fn monomial_compat(lambda: &SkewParamMatrix, b: &IntMatrix) -> Result<Option<(usize, usize)>> {
    check_square(lambda, b)?;
    let n = lambda.n();
    let cols = (0..n)
        .map(|i| column_exponent(b, i))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..n {
        for j in i + 1..n {
            if lambda.pairing(&cols[i], &cols[j]) != *lambda.get(i, j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoClassification {
    NotPoisson {
        pair: (usize, usize),
        lhs: LaurentPoly,
        rhs: LaurentPoly,
    },
    /// `det B = 0`: the exponents are dependent.
    NotInjective,
    Automorphism {
        inverse: MonomialMap,
    },
    InjectiveNotSurjective {
        index: BigInt,
        missing: ExponentVector,
    },
}

impl EndoClassification {
    pub fn name(&self) -> &'static str {
        match self {
            EndoClassification::NotPoisson { .. } => "not_poisson",
            EndoClassification::NotInjective => "not_injective",
            EndoClassification::Automorphism { .. } => "automorphism",
            EndoClassification::InjectiveNotSurjective { .. } => "injective_not_surjective",
        }
    }
}

/// Smallest standard basis vector outside the column lattice of `b`.
pub fn missing_standard_generator(b: &IntMatrix) -> Option<ExponentVector> {
    let hnf = hermite_rows(&b.transpose());
    let n = b.rows();
    (0..n).find_map(|k| {
        let mut e = vec![BigInt::zero(); n];
        e[k] = BigInt::one();
        (!in_hermite_lattice(&hnf, &e)).then(|| ExponentVector::unit(n, k))
    })
}

/// `x_i ↦ c_i x^{b_i}` on the torus `L_Λ`: not Poisson, not injective, an
/// automorphism (with verified inverse), or injective with an image lattice
/// of index `|det B|`.
pub fn classify_torus_endo(
    lambda: &SkewParamMatrix,
    map: &MonomialMap,
) -> Result<EndoClassification> {
    let b = map.exponents();
    if let Some((i, j)) = monomial_compat(lambda, b)? {
        let (bi, bj) = (column_exponent(b, i)?, column_exponent(b, j)?);
        let sum = bi.checked_add(&bj)?;
        let c = Scalar::from(&map.coefficients[i] * &map.coefficients[j]);
        let lhs = LaurentPoly::monomial(sum.clone(), lambda.get(i, j).try_mul(&c)?);
        let rhs = LaurentPoly::monomial(sum, lambda.pairing(&bi, &bj).try_mul(&c)?);
        return Ok(EndoClassification::NotPoisson {
            pair: (i, j),
            lhs,
            rhs,
        });
    }
    let det = det_int(b)?;
    if det.is_zero() {
        return Ok(EndoClassification::NotInjective);
    }
    if det.abs().is_one() {
        let inv = unimodular_inverse(b)?;
        let n = map.n();
        let mut coefficients = Vec::with_capacity(n);
        for k in 0..n {
            let mut d = BigRational::one();
            for j in 0..n {
                let e = i32::try_from(-inv.get(j, k)).map_err(|_| Error::ExponentOverflow)?;
                d *= num_traits::pow::Pow::pow(&map.coefficients[j], e);
            }
            coefficients.push(d);
        }
        let inverse = MonomialMap::new(inv, coefficients)?;
        let (fwd, back) = (map.to_poly_map(), inverse.to_poly_map());
        let id = PolyMap::identity(n);
        if fwd.compose(&back)? != id || back.compose(&fwd)? != id {
            return Err(Error::Internal(
                "computed inverse does not compose to the identity".into(),
            ));
        }
        return Ok(EndoClassification::Automorphism { inverse });
    }
    let missing = missing_standard_generator(b).ok_or_else(|| {
        Error::Internal("index > 1 but every generator is in the image lattice".into())
    })?;
    Ok(EndoClassification::InjectiveNotSurjective {
        index: det.abs(),
        missing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DixmierAssertion {
    /// Simple torus, compatible exponents, and `|det B| = 1` as predicted.
    Holds {
        det: BigInt,
    },
    NotApplicable {
        reason: String,
    },
}

/// On a Poisson-simple torus, every compatible exponent matrix is
/// unimodular; a counterexample is reported as an `AssertionFailure`.
pub fn simple_torus_dixmier_assert(
    lambda: &SkewParamMatrix,
    b: &IntMatrix,
) -> Result<DixmierAssertion> {
    if !is_poisson_simple_torus(lambda).simple {
        return Ok(DixmierAssertion::NotApplicable {
            reason: "torus is not Poisson simple".into(),
        });
    }
    if let Some((i, j)) = monomial_compat(lambda, b)? {
        return Ok(DixmierAssertion::NotApplicable {
            reason: format!("exponents incompatible at pair ({}, {})", i + 1, j + 1),
        });
    }
    let det = det_int(b)?;
    if !det.abs().is_one() {
        return Err(Error::AssertionFailure(format!(
            "compatible exponent matrix with determinant {det} on a simple torus"
        )));
    }
    Ok(DixmierAssertion::Holds { det })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DixmierSearch {
    pub examined: usize,
    pub compatible: usize,
    /// Compatible matrices found with `|det| != 1`; always empty on a simple
    /// torus.
    pub failures: Vec<IntMatrix>,
}

/// Runs [`simple_torus_dixmier_assert`] on every `n x n` integer matrix with
/// entries in `[-bound, bound]`.
pub fn exhaustive_dixmier_search(
    lambda: &SkewParamMatrix,
    bound: i64,
    exec: Exec,
) -> Result<DixmierSearch> {
    if bound < 0 {
        return Err(Error::DimensionMismatch(format!(
            "negative search bound {bound}"
        )));
    }
    let n = lambda.n();
    let side = (2 * bound + 1) as usize;
    let total = side
        .checked_pow((n * n) as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::LimitExceeded(format!("{side}^{} matrices", n * n)))?;
    let decode = |mut k: usize| {
        let mut m = IntMatrix::zeros(n, n);
        for idx in 0..n * n {
            m.set(idx / n, idx % n, BigInt::from((k % side) as i64 - bound));
            k /= side;
        }
        m
    };
    let outcomes = exec.map(total, |k| {
        let b = decode(k);
        match simple_torus_dixmier_assert(lambda, &b) {
            Ok(DixmierAssertion::Holds { .. }) => Ok((true, None)),
            Ok(DixmierAssertion::NotApplicable { .. }) => Ok((false, None)),
            Err(Error::AssertionFailure(_)) => Ok((true, Some(b))),
            Err(e) => Err(e),
        }
    });
    let mut summary = DixmierSearch {
        examined: total,
        ..Default::default()
    };
    for o in outcomes {
        let (compatible, failure) = o?;
        summary.compatible += compatible as usize;
        summary.failures.extend(failure);
    }
    Ok(summary)
}

/// Checks `Λ' = Gᵗ D Λ' D G` with `D = diag(p)`, i.e.
/// `λ'_ij = Σ_kt p_k p_t g_ki g_tj λ'_kt`. When it holds, `z_i ↦ Π_k y_k^{g_ki}`
/// with `y_k = z_k^{p_k}` is a Poisson isomorphism onto the subtorus generated
/// by the `z_k^{±p_k}`. Returns the first failing pair, if any.
pub fn scaled_presentation_mismatch(
    lambda_prime: &SkewParamMatrix,
    g: &IntMatrix,
    p: &[BigInt],
) -> Result<Option<(usize, usize)>> {
    let n = lambda_prime.n();
    if g.rows() != n || g.cols() != n || p.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rank {n} form with {}x{} matrix and {} scale factors",
            g.rows(),
            g.cols(),
            p.len()
        )));
    }
    if let Some(bad) = p.iter().find(|pk| !pk.is_positive()) {
        return Err(Error::DimensionMismatch(format!(
            "scale factor {bad} is not positive"
        )));
    }
    let det = det_int(g)?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    // scaled columns p_k g_ki
    let pg = |k: usize, i: usize| BigRational::from_integer(&p[k] * g.get(k, i));
    for i in 0..n {
        for j in i + 1..n {
            let mut sum = Scalar::zero();
            for k in 0..n {
                for t in 0..n {
                    let c = pg(k, i) * pg(t, j);
                    if !c.is_zero() {
                        sum.add_assign(&lambda_prime.get(k, t).mul_rational(&c));
                    }
                }
            }
            if sum != *lambda_prime.get(i, j) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationAssertion {
    /// The relation holds and every scale factor is 1, as predicted.
    Holds,
    NotApplicable {
        reason: String,
    },
}

/// On a Poisson-simple torus, a presentation satisfying
/// [`scaled_presentation_mismatch`] forces every `p_k = 1`, since taking
/// determinants gives `det(G)^2 (Π p_k)^2 = 1`. A counterexample is reported
/// as an `AssertionFailure`.
pub fn scaled_presentation_assert(
    lambda_prime: &SkewParamMatrix,
    g: &IntMatrix,
    p: &[BigInt],
) -> Result<PresentationAssertion> {
    if let Some((i, j)) = scaled_presentation_mismatch(lambda_prime, g, p)? {
        return Ok(PresentationAssertion::NotApplicable {
            reason: format!("relation fails at pair ({}, {})", i + 1, j + 1),
        });
    }
    if !is_poisson_simple_torus(lambda_prime).simple {
        return Ok(PresentationAssertion::NotApplicable {
            reason: "torus is not Poisson simple".into(),
        });
    }
    if let Some((k, pk)) = p.iter().enumerate().find(|(_, pk)| !pk.is_one()) {
        return Err(Error::AssertionFailure(format!(
            "scaled presentation with p_{} = {pk} on a simple torus",
            k + 1
        )));
    }
    Ok(PresentationAssertion::Holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injectivity {
    /// Nonzero Jacobian determinant: the images are algebraically
    /// independent, so the map is injective.
    Certified { jacobian: LaurentPoly },
    /// Zero (or non-square) Jacobian; nothing is claimed.
    Inconclusive { jacobian: Option<LaurentPoly> },
}

/// Determinant of a square matrix of polynomials by cofactor expansion,
/// memoized on column subsets.
pub fn poly_determinant(m: &[Vec<LaurentPoly>], nvars: usize) -> Result<LaurentPoly> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.first().map_or(0, Vec::len),
        });
    }
    fn minor(
        m: &[Vec<LaurentPoly>],
        row: usize,
        cols: u32,
        nvars: usize,
        memo: &mut HashMap<u32, LaurentPoly>,
    ) -> Result<LaurentPoly> {
        if row == m.len() {
            return Ok(LaurentPoly::one(nvars));
        }
        if let Some(p) = memo.get(&cols) {
            return Ok(p.clone());
        }
        let mut acc = LaurentPoly::zero(nvars);
        let mut sign_pos = 0;
        for j in 0..m.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &m[row][j];
            if !entry.is_zero() {
                let sub = minor(m, row + 1, cols & !(1 << j), nvars, memo)?;
                let term = entry.mul(&sub)?;
                acc = if sign_pos % 2 == 0 {
                    acc.add(&term)?
                } else {
                    acc.sub(&term)?
                };
            }
            sign_pos += 1;
        }
        memo.insert(cols, acc.clone());
        Ok(acc)
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    minor(m, 0, full, nvars, &mut HashMap::new())
}

/// Jacobian criterion: certifies injectivity of `x_i ↦ images[i]` when the
/// Jacobian determinant is nonzero (characteristic zero).
pub fn injectivity_certificate(map: &PolyMap) -> Result<Injectivity> {
    let n = map.images.len();
    let nvars = map.images.first().map_or(0, LaurentPoly::nvars);
    for (i, p) in map.images.iter().enumerate() {
        if p.has_negative_exponents() && p.as_unit_monomial().is_none() {
            return Err(Error::InvalidStructure(format!(
                "image {} is neither a polynomial nor a unit monomial",
                i + 1
            )));
        }
    }
    if n != nvars || n == 0 {
        return Ok(Injectivity::Inconclusive { jacobian: None });
    }
    let rows = map
        .images
        .iter()
        .map(|p| {
            (0..nvars)
                .map(|v| p.partial_derivative(v))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let jacobian = poly_determinant(&rows, nvars)?;
    Ok(if jacobian.is_zero() {
        Injectivity::Inconclusive {
            jacobian: Some(jacobian),
        }
    } else {
        Injectivity::Certified { jacobian }
    })
}

/// `42 d (d − 3)²`, the bound on graded automorphism groups of potential
/// algebras of degree `d`.
pub fn aut_bound(d: i64) -> Result<BigInt> {
    if d < 3 {
        return Err(Error::DegreeTooSmall(d));
    }
    let d = BigInt::from(d);
    let e = &d - 3;
    Ok(BigInt::from(42) * &d * &e * &e)
}
