//! Poisson structures and exact bracket evaluation.

mod axioms;
mod skew;
mod table;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::MonomialOrder;
use crate::poly::{ExponentVector, LaurentPoly, Scalar, VarContext, MAX_ARITY};

pub use axioms::{
    verify_bracket_axioms, verify_poisson_axioms, Axiom, AxiomCounterexample, AxiomReport,
    TrialConfig,
};
pub use skew::SkewParamMatrix;
pub use table::GeneratorTable;

/// Anything that evaluates a bilinear bracket on polynomials in a fixed set
/// of variables.
pub trait PoissonBracket: Sync {
    fn arity(&self) -> usize;

    fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly>;

    /// Canonical representative (identity outside quotient structures).
    fn reduce(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        Ok(f.clone())
    }

    /// Whether variable `var` may carry negative exponents.
    fn allows_negative(&self, _var: usize) -> bool {
        false
    }

    fn var_names(&self) -> Vec<String> {
        crate::poly::default_names(self.arity())
    }
}

/// `k[x,y,z]` with `{f,g} = det(∇f, ∇g, ∇Ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    omega: LaurentPoly,
    partials: [LaurentPoly; 3],
    degree: i64,
}

impl Potential {
    pub fn new(omega: LaurentPoly) -> Result<Self> {
        if omega.nvars() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                found: omega.nvars(),
            });
        }
        if let Some(v) = omega.first_negative_variable() {
            return Err(Error::NegativeExponent { var: v });
        }
        if !omega.is_rational() {
            return Err(Error::InvalidStructure(
                "potential coefficients must be rational".into(),
            ));
        }
        if omega.is_zero() || !omega.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = omega.max_degree().unwrap_or(0);
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let partials = [
            omega.partial_derivative(0)?,
            omega.partial_derivative(1)?,
            omega.partial_derivative(2)?,
        ];
        Ok(Potential {
            omega,
            partials,
            degree,
        })
    }

    pub fn omega(&self) -> &LaurentPoly {
        &self.omega
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        let [ox, oy, oz] = &self.partials;
        let fx = f.partial_derivative(0)?;
        let fy = f.partial_derivative(1)?;
        let fz = f.partial_derivative(2)?;
        let gx = g.partial_derivative(0)?;
        let gy = g.partial_derivative(1)?;
        let gz = g.partial_derivative(2)?;
        // det of the rows (∇f, ∇g, ∇Ω), expanded along the first row
        let m1 = gy.mul(oz)?.sub(&gz.mul(oy)?)?;
        let m2 = gx.mul(oz)?.sub(&gz.mul(ox)?)?;
        let m3 = gx.mul(oy)?.sub(&gy.mul(ox)?)?;
        fx.mul(&m1)?.sub(&fy.mul(&m2)?)?.add(&fz.mul(&m3)?)
    }
}

/// `A_Ω / (Ω − ξ)`, with elements represented by their normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialQuotient {
    potential: Potential,
    xi: BigRational,
    order: MonomialOrder,
    divisor: LaurentPoly,
    lead: ExponentVector,
    lead_coeff: BigRational,
}

impl PotentialQuotient {
    pub fn new(omega: LaurentPoly, xi: BigRational, order: MonomialOrder) -> Result<Self> {
        let potential = Potential::new(omega)?;
        order.check_arity(3)?;
        let divisor = potential
            .omega
            .sub(&LaurentPoly::constant(3, Scalar::from(xi.clone())))?;
        let (lead, lc) = order
            .leading_term(&potential.omega)
            .expect("nonzero potential");
        let lead = lead.clone();
        let lead_coeff = lc.as_rational().expect("rational potential").clone();
        Ok(PotentialQuotient {
            potential,
            xi,
            order,
            divisor,
            lead,
            lead_coeff,
        })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn xi(&self) -> &BigRational {
        &self.xi
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Leading monomial of `Ω − ξ`; reduced representatives avoid its
    /// multiples.
    pub fn leading_monomial(&self) -> &ExponentVector {
        &self.lead
    }

    pub fn is_reduced(&self, f: &LaurentPoly) -> bool {
        f.terms().all(|(e, _)| !self.lead.divides(e))
    }

    /// Remainder of `f` under division by `Ω − ξ`.
    pub fn normal_form(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        if f.nvars() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                found: f.nvars(),
            });
        }
        if let Some(v) = f.first_negative_variable() {
            return Err(Error::NegativeExponent { var: v });
        }
        let mut work = f.clone();
        loop {
            let target = work
                .terms()
                .filter(|(e, _)| self.lead.divides(e))
                .max_by(|(a, _), (b, _)| self.order.cmp(a.as_slice(), b.as_slice()))
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = target else {
                return Ok(work);
            };
            let shift = e.checked_sub(&self.lead)?;
            let factor = c.div_rational(&self.lead_coeff)?;
            work = work.sub(&self.divisor.mul_term(&shift, &factor)?)?;
        }
    }

    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        for h in [f, g] {
            if !self.is_reduced(h) {
                return Err(Error::UnreducedQuotientInput(
                    VarContext::named(&["x", "y", "z"]).render(h),
                ));
            }
        }
        self.normal_form(&self.potential.bracket(f, g)?)
    }
}

/// Weyl Poisson algebra in variables `x1, y1, ..., xn, yn` with
/// `{x_i, y_i} = 1`; `laurent_x` inverts the `x` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weyl {
    pairs: usize,
    laurent_x: bool,
}

impl Weyl {
    pub fn new(pairs: usize, laurent_x: bool) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::InvalidStructure(
                "Weyl algebra needs at least one pair".into(),
            ));
        }
        if 2 * pairs > MAX_ARITY {
            return Err(Error::ArityTooLarge(2 * pairs));
        }
        Ok(Weyl { pairs, laurent_x })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn laurent_x(&self) -> bool {
        self.laurent_x
    }

    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(f.nvars());
        for i in 0..self.pairs {
            let (x, y) = (2 * i, 2 * i + 1);
            let a = f.partial_derivative(x)?.mul(&g.partial_derivative(y)?)?;
            let b = f.partial_derivative(y)?.mul(&g.partial_derivative(x)?)?;
            out = out.add(&a.sub(&b)?)?;
        }
        Ok(out)
    }

    fn names(&self) -> Vec<String> {
        if self.pairs == 1 {
            return vec!["x".into(), "y".into()];
        }
        (1..=self.pairs)
            .flat_map(|i| [format!("x{i}"), format!("y{i}")])
            .collect()
    }
}

/// Tensor product of structures on disjoint blocks of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    factors: Vec<PoissonStructure>,
    offsets: Vec<usize>,
    arity: usize,
}

impl Tensor {
    pub fn new(factors: Vec<PoissonStructure>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidStructure(
                "tensor product needs at least one factor".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut arity = 0;
        for f in &factors {
            offsets.push(arity);
            arity += f.arity();
        }
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(Tensor {
            factors,
            offsets,
            arity,
        })
    }

    pub fn factors(&self) -> &[PoissonStructure] {
        &self.factors
    }

    fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k] + self.factors[k].arity()
    }

    fn slice(&self, k: usize, e: &ExponentVector) -> ExponentVector {
        ExponentVector::new(e.as_slice()[self.block(k)].to_vec())
    }

    /// `{x^u, x^v} = Σ_k {x^{u_k}, x^{v_k}}_k · Π_{l≠k} x^{u_l + v_l}`.
    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.arity);
        for (u, a) in f.terms() {
            for (v, b) in g.terms() {
                let coeff = a.try_mul(b)?;
                let sum = u.checked_add(v)?;
                for (k, factor) in self.factors.iter().enumerate() {
                    let fu = LaurentPoly::from_exponent(self.slice(k, u));
                    let fv = LaurentPoly::from_exponent(self.slice(k, v));
                    let inner = factor.bracket_raw(&fu, &fv)?;
                    if inner.is_zero() {
                        continue;
                    }
                    let block = self.block(k);
                    for (w, c) in inner.terms() {
                        let mut e = sum.as_slice().to_vec();
                        e[block.clone()].copy_from_slice(w.as_slice());
                        out.add_term(ExponentVector::new(e), &coeff.try_mul(c)?);
                    }
                }
            }
        }
        self.reduce(&out)
    }

    /// Applies each factor's reduction to its own block.
    pub fn reduce(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        let mut cur = f.clone();
        for (k, factor) in self.factors.iter().enumerate() {
            if !factor.has_reduction() {
                continue;
            }
            let block = self.block(k);
            let mut groups: BTreeMap<Vec<i32>, Vec<(ExponentVector, Scalar)>> = BTreeMap::new();
            for (e, c) in cur.terms() {
                let mut outside = e.as_slice().to_vec();
                outside[block.clone()].iter_mut().for_each(|x| *x = 0);
                groups
                    .entry(outside)
                    .or_default()
                    .push((self.slice(k, e), c.clone()));
            }
            let mut next = LaurentPoly::zero(self.arity);
            for (outside, terms) in groups {
                let local = LaurentPoly::from_terms(factor.arity(), terms)?;
                for (w, c) in factor.reduce(&local)?.terms() {
                    let mut e = outside.clone();
                    e[block.clone()].copy_from_slice(w.as_slice());
                    next.add_term(ExponentVector::new(e), c);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    fn check_reduced(&self, f: &LaurentPoly) -> Result<()> {
        if self.reduce(f)? != *f {
            return Err(Error::UnreducedQuotientInput(
                VarContext::new(self.names(), vec![]).render(f),
            ));
        }
        Ok(())
    }

    fn names(&self) -> Vec<String> {
        let per: Vec<Vec<String>> = self
            .factors
            .iter()
            .map(PoissonStructure::var_names)
            .collect();
        let all: Vec<&String> = per.iter().flatten().collect();
        let distinct = all.iter().collect::<std::collections::BTreeSet<_>>().len() == all.len();
        if distinct {
            return all.into_iter().cloned().collect();
        }
        per.iter()
            .enumerate()
            .flat_map(|(k, names)| names.iter().map(move |n| format!("{n}_{}", k + 1)))
            .collect()
    }
}

/// Tagged description of a Poisson algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum PoissonStructure {
    /// Laurent polynomials with `{x_i, x_j} = λ_ij x_i x_j`.
    Torus(SkewParamMatrix),
    /// The polynomial subalgebra of the torus.
    SkewPoly(SkewParamMatrix),
    PotentialAffine(Potential),
    PotentialQuotient(PotentialQuotient),
    Weyl(Weyl),
    Tensor(Tensor),
}

impl PoissonStructure {
    pub fn torus(lambda: SkewParamMatrix) -> Result<Self> {
        check_skew_arity(&lambda)?;
        Ok(PoissonStructure::Torus(lambda))
    }

    pub fn skew_poly(lambda: SkewParamMatrix) -> Result<Self> {
        check_skew_arity(&lambda)?;
        Ok(PoissonStructure::SkewPoly(lambda))
    }

    pub fn potential(omega: LaurentPoly) -> Result<Self> {
        Ok(PoissonStructure::PotentialAffine(Potential::new(omega)?))
    }

    pub fn potential_quotient(
        omega: LaurentPoly,
        xi: BigRational,
        order: MonomialOrder,
    ) -> Result<Self> {
        Ok(PoissonStructure::PotentialQuotient(PotentialQuotient::new(
            omega, xi, order,
        )?))
    }

    pub fn weyl(pairs: usize) -> Result<Self> {
        Ok(PoissonStructure::Weyl(Weyl::new(pairs, false)?))
    }

    /// Weyl algebra with the `x` variables inverted.
    pub fn weyl_laurent_x(pairs: usize) -> Result<Self> {
        Ok(PoissonStructure::Weyl(Weyl::new(pairs, true)?))
    }

    pub fn tensor(factors: Vec<PoissonStructure>) -> Result<Self> {
        Ok(PoissonStructure::Tensor(Tensor::new(factors)?))
    }

    pub fn arity(&self) -> usize {
        match self {
            PoissonStructure::Torus(l) | PoissonStructure::SkewPoly(l) => l.n(),
            PoissonStructure::PotentialAffine(_) | PoissonStructure::PotentialQuotient(_) => 3,
            PoissonStructure::Weyl(w) => 2 * w.pairs,
            PoissonStructure::Tensor(t) => t.arity,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PoissonStructure::Torus(_) => "torus",
            PoissonStructure::SkewPoly(_) => "skew-poly",
            PoissonStructure::PotentialAffine(_) => "potential",
            PoissonStructure::PotentialQuotient(_) => "potential-quotient",
            PoissonStructure::Weyl(_) => "weyl",
            PoissonStructure::Tensor(_) => "tensor",
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        match self {
            PoissonStructure::Torus(l) | PoissonStructure::SkewPoly(l) => {
                crate::poly::default_names(l.n())
            }
            PoissonStructure::PotentialAffine(_) | PoissonStructure::PotentialQuotient(_) => {
                vec!["x".into(), "y".into(), "z".into()]
            }
            PoissonStructure::Weyl(w) => w.names(),
            PoissonStructure::Tensor(t) => t.names(),
        }
    }

    pub fn parameters(&self) -> Vec<String> {
        match self {
            PoissonStructure::Torus(l) | PoissonStructure::SkewPoly(l) => l.parameters(),
            PoissonStructure::Tensor(t) => {
                let mut all: Vec<String> = t
                    .factors
                    .iter()
                    .flat_map(PoissonStructure::parameters)
                    .collect();
                all.sort();
                all.dedup();
                all
            }
            _ => Vec::new(),
        }
    }

    pub fn var_context(&self) -> VarContext {
        VarContext::new(self.var_names(), self.parameters())
    }

    /// Substitutes rationals for the formal parameters.
    pub fn specialize(&self, values: &BTreeMap<String, BigRational>) -> Result<PoissonStructure> {
        Ok(match self {
            PoissonStructure::Torus(l) => PoissonStructure::Torus(l.specialize(values)?),
            PoissonStructure::SkewPoly(l) => PoissonStructure::SkewPoly(l.specialize(values)?),
            PoissonStructure::Tensor(t) => PoissonStructure::Tensor(Tensor::new(
                t.factors
                    .iter()
                    .map(|f| f.specialize(values))
                    .collect::<Result<_>>()?,
            )?),
            other => other.clone(),
        })
    }

    /// Whether the bracket respects the Adams grading (every structure but
    /// the inhomogeneous quotients).
    pub fn is_graded(&self) -> bool {
        match self {
            PoissonStructure::PotentialQuotient(q) => q.xi.is_zero(),
            PoissonStructure::Tensor(t) => t.factors.iter().all(PoissonStructure::is_graded),
            _ => true,
        }
    }

    /// Whether every variable has nonnegative exponents only.
    pub fn is_polynomial(&self) -> bool {
        (0..self.arity()).all(|v| !self.allows_negative(v))
    }

    fn has_reduction(&self) -> bool {
        match self {
            PoissonStructure::PotentialQuotient(_) => true,
            PoissonStructure::Tensor(t) => t.factors.iter().any(PoissonStructure::has_reduction),
            _ => false,
        }
    }

    fn validate(&self, f: &LaurentPoly) -> Result<()> {
        if f.nvars() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: f.nvars(),
            });
        }
        for (e, _) in f.terms() {
            for (v, &k) in e.as_slice().iter().enumerate() {
                if k < 0 && !self.allows_negative(v) {
                    return Err(Error::NegativeExponent { var: v });
                }
            }
        }
        Ok(())
    }

    /// Bracket without input validation, for use on factor blocks.
    fn bracket_raw(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        match self {
            PoissonStructure::Torus(l) | PoissonStructure::SkewPoly(l) => torus_bracket(l, f, g),
            PoissonStructure::PotentialAffine(p) => p.bracket(f, g),
            PoissonStructure::PotentialQuotient(q) => q.normal_form(&q.potential.bracket(f, g)?),
            PoissonStructure::Weyl(w) => w.bracket(f, g),
            PoissonStructure::Tensor(t) => t.bracket(f, g),
        }
    }

    /// `{f, g}`; quotient inputs must already be reduced.
    pub fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        self.validate(f)?;
        self.validate(g)?;
        match self {
            PoissonStructure::PotentialQuotient(q) => q.bracket(f, g),
            PoissonStructure::Tensor(t) => {
                t.check_reduced(f)?;
                t.check_reduced(g)?;
                t.bracket(f, g)
            }
            _ => self.bracket_raw(f, g),
        }
    }

    /// Canonical representative: the normal form in quotient structures,
    /// the input itself elsewhere.
    pub fn reduce(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.validate(f)?;
        match self {
            PoissonStructure::PotentialQuotient(q) => q.normal_form(f),
            PoissonStructure::Tensor(t) => t.reduce(f),
            _ => Ok(f.clone()),
        }
    }

    pub fn allows_negative(&self, var: usize) -> bool {
        match self {
            PoissonStructure::Torus(_) => true,
            PoissonStructure::Weyl(w) => w.laurent_x && var.is_multiple_of(2),
            PoissonStructure::Tensor(t) => {
                let k = t.offsets.partition_point(|&o| o <= var) - 1;
                t.factors[k].allows_negative(var - t.offsets[k])
            }
            _ => false,
        }
    }
}

fn check_skew_arity(lambda: &SkewParamMatrix) -> Result<()> {
    if lambda.n() == 0 {
        return Err(Error::InvalidStructure(
            "structure needs at least one variable".into(),
        ));
    }
    if lambda.n() > MAX_ARITY {
        return Err(Error::ArityTooLarge(lambda.n()));
    }
    Ok(())
}

fn torus_bracket(
    lambda: &SkewParamMatrix,
    f: &LaurentPoly,
    g: &LaurentPoly,
) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(f.nvars());
    for (u, a) in f.terms() {
        for (v, b) in g.terms() {
            let s = lambda.pairing(u, v);
            if s.is_zero() {
                continue;
            }
            out.add_term(u.checked_add(v)?, &a.try_mul(b)?.try_mul(&s)?);
        }
    }
    Ok(out)
}

impl PoissonBracket for PoissonStructure {
    fn arity(&self) -> usize {
        PoissonStructure::arity(self)
    }

    fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        PoissonStructure::bracket(self, f, g)
    }

    fn reduce(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        PoissonStructure::reduce(self, f)
    }

    fn allows_negative(&self, var: usize) -> bool {
        PoissonStructure::allows_negative(self, var)
    }

    fn var_names(&self) -> Vec<String> {
        PoissonStructure::var_names(self)
    }
}

/// Normal form of `f` in a `PotentialQuotient` structure.
pub fn normal_form_mod(s: &PoissonStructure, f: &LaurentPoly) -> Result<LaurentPoly> {
    match s {
        PoissonStructure::PotentialQuotient(q) => q.normal_form(f),
        other => Err(Error::InvalidStructure(format!(
            "{} is not a potential quotient",
            other.kind()
        ))),
    }
}

/// `{Ω, x_i}` for each generator; all vanish for a genuine potential.
pub fn omega_centrality(p: &Potential) -> Result<[LaurentPoly; 3]> {
    Ok([
        p.bracket(&p.omega, &LaurentPoly::var(3, 0))?,
        p.bracket(&p.omega, &LaurentPoly::var(3, 1))?,
        p.bracket(&p.omega, &LaurentPoly::var(3, 2))?,
    ])
}
