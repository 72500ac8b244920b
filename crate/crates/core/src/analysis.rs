//! Poisson simplicity of tori and (truncated) Poisson centers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bracket::{PoissonStructure, SkewParamMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{integer_nullspace, IntMatrix};
use crate::linalg::{nullspace, SparseRow};
use crate::poly::{monomials_up_to_degree, ExponentVector, LaurentPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimplicityMethod {
    /// A single coefficient matrix (rational or single-parameter `Λ`).
    Rank,
    /// Several independent parameters, one coefficient matrix each.
    StackedRank,
}

impl SimplicityMethod {
    pub fn name(self) -> &'static str {
        match self {
            SimplicityMethod::Rank => "rank",
            SimplicityMethod::StackedRank => "stacked-rank",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub simple: bool,
    /// Exponent of a central monomial when the torus is not simple.
    pub witness: Option<ExponentVector>,
    pub method: SimplicityMethod,
}

/// `[M_0 | M_1 | ... | M_m]` where `Λ = M_0 + q_1 M_1 + ... + q_m M_m`,
/// each block scaled to an integer matrix.
pub fn stacked_coefficient_matrix(lambda: &SkewParamMatrix) -> (IntMatrix, usize) {
    let n = lambda.n();
    let blocks = lambda.integer_coefficient_matrices();
    if blocks.is_empty() {
        return (IntMatrix::zeros(n, n), 1);
    }
    let mut out = IntMatrix::zeros(n, n * blocks.len());
    for (b, (_, m)) in blocks.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                out.set(i, b * n + j, m.get(i, j).clone());
            }
        }
    }
    (out, blocks.len())
}

/// ℤ-basis of `{a ∈ ℤⁿ : Σ_i a_i λ_ij = 0 for all j}`, the exponents of
/// central monomials, treating distinct parameters as independent.
pub fn monomial_center_basis(lambda: &SkewParamMatrix) -> Vec<ExponentVector> {
    integer_nullspace(&stacked_coefficient_matrix(lambda).0)
}

/// The torus is Poisson simple iff no nonzero exponent is central.
pub fn is_poisson_simple_torus(lambda: &SkewParamMatrix) -> SimplicityReport {
    let (stacked, blocks) = stacked_coefficient_matrix(lambda);
    let method = if blocks > 1 {
        SimplicityMethod::StackedRank
    } else {
        SimplicityMethod::Rank
    };
    let witness = integer_nullspace(&stacked).into_iter().next();
    SimplicityReport {
        simple: witness.is_none(),
        witness,
        method,
    }
}

/// Whether `x^a` brackets to zero with every generator, evaluated directly.
pub fn is_central_monomial(lambda: &SkewParamMatrix, a: &ExponentVector) -> bool {
    let n = lambda.n();
    (0..n).all(|j| lambda.pairing(a, &ExponentVector::unit(n, j)).is_zero())
}

/// Nonzero central exponents with every `|a_i| <= radius`, by exhaustive
/// search.
pub fn central_monomials_in_box(
    lambda: &SkewParamMatrix,
    radius: i32,
    exec: Exec,
) -> Vec<ExponentVector> {
    let n = lambda.n();
    let side = (2 * radius + 1) as usize;
    let total = side.checked_pow(n as u32).expect("search box too large");
    let decode = |mut k: usize| {
        let mut e = vec![0i32; n];
        for x in e.iter_mut() {
            *x = (k % side) as i32 - radius;
            k /= side;
        }
        ExponentVector::new(e)
    };
    exec.map(total, |k| {
        let a = decode(k);
        (!a.is_zero() && is_central_monomial(lambda, &a)).then_some(a)
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Basis of the elements of degree at most `degree` that bracket to zero
/// with every generator.
///
/// The unknowns are the coefficients on the reduced monomials of degree at
/// most `degree`; parameters are treated as independent, so each
/// parameter's coefficient yields its own equations.
pub fn truncated_center(s: &PoissonStructure, degree: u32, exec: Exec) -> Result<Vec<LaurentPoly>> {
    if !s.is_polynomial() {
        return Err(Error::InvalidStructure(format!(
            "truncated centers need a polynomial structure, got {}",
            s.kind()
        )));
    }
    let n = s.arity();
    let candidates = monomials_up_to_degree(n, degree);
    let reduced = exec.map_slice(&candidates, |e| {
        let m = LaurentPoly::from_exponent(e.clone());
        s.reduce(&m).map(|r| r == m)
    });
    let mut basis = Vec::new();
    for (e, keep) in candidates.into_iter().zip(reduced) {
        if keep? {
            basis.push(e);
        }
    }
    let brackets = exec.map_slice(&basis, |e| {
        let m = LaurentPoly::from_exponent(e.clone());
        (0..n)
            .map(|i| s.bracket(&m, &LaurentPoly::var(n, i)))
            .collect::<Result<Vec<_>>>()
    });
    let mut equations: BTreeMap<(usize, ExponentVector, Option<String>), SparseRow> =
        BTreeMap::new();
    for (col, per_generator) in brackets.into_iter().enumerate() {
        for (i, b) in per_generator?.into_iter().enumerate() {
            for (e, c) in b.terms() {
                let mut add = |key: Option<String>, v: &BigRational| {
                    if !v.is_zero() {
                        equations
                            .entry((i, e.clone(), key))
                            .or_default()
                            .insert(col, v.clone());
                    }
                };
                add(None, c.constant());
                for (p, v) in c.params() {
                    add(Some(p.clone()), v);
                }
            }
        }
    }
    let rows: Vec<SparseRow> = equations.into_values().collect();
    Ok(nullspace(&rows, basis.len())
        .into_iter()
        .map(|v| {
            let terms = basis
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e.clone(), c.into()));
            LaurentPoly::from_terms(n, terms).expect("consistent arity")
        })
        .collect())
}

/// Integer left-kernel vectors are central: `Σ_i a_i λ_ij = 0` for each `j`.
pub fn satisfies_centrality_equations(lambda: &SkewParamMatrix, a: &ExponentVector) -> bool {
    let n = lambda.n();
    (0..n).all(|j| {
        let mut acc = crate::poly::Scalar::zero();
        for i in 0..n {
            let k = BigRational::from_integer(BigInt::from(a.get(i)));
            acc.add_assign(&lambda.get(i, j).mul_rational(&k));
        }
        acc.is_zero()
    })
}
