//! Adams gradings, weight valuations, the associated graded of potential
//! quotients, and the cofinite subalgebras `A(d)` and `A(d, ζ)`.
//!
//! Filtration indices are the negatives of Adams degrees. Everything here
//! works with Adams degrees directly: a bracket that raises Adams degree by
//! at most `w` (`deg{f,g} <= deg f + deg g + w`) is exactly a `w`-filtration
//! for `F_{-i} = {deg <= i}`, which is axiom (5) for `ν = −deg`.

mod closure;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bracket::{PoissonBracket, PoissonStructure, PotentialQuotient};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groebner::{MonomialOrder, OrderKind};
use crate::poly::{monomials_up_to_degree, ExponentVector, LaurentPoly, Scalar, VarContext};
use crate::random::{trial_rng, PolySampler};

pub use crate::bracket::TrialConfig;
pub use closure::{bounded_poisson_closure, ClosureResult, ExponentBox};

/// Result of scanning monomial pairs for `deg{f,g} − deg f − deg g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeShift {
    /// Largest shift seen; `None` when every bracket vanished.
    pub max_shift: Option<i64>,
    /// Every nonzero bracket was Adams-homogeneous with the same shift.
    pub homogeneous: bool,
    pub pairs: usize,
}

fn reduced_monomials(s: &dyn PoissonBracket, n: usize, bound: u32) -> Result<Vec<ExponentVector>> {
    let mut out = Vec::new();
    for e in monomials_up_to_degree(n, bound) {
        if e.is_zero() {
            continue;
        }
        let m = LaurentPoly::from_exponent(e.clone());
        if s.reduce(&m)? == m {
            out.push(e);
        }
    }
    Ok(out)
}

/// Scans all pairs of nonconstant monomials of degree at most `bound`.
pub fn bracket_degree_shift(s: &PoissonStructure, bound: u32, exec: Exec) -> Result<DegreeShift> {
    if !s.is_graded() {
        return Err(Error::NotGraded(format!(
            "{} structure is not Adams graded",
            s.kind()
        )));
    }
    let monos = reduced_monomials(s, s.arity(), bound)?;
    let pairs: Vec<(usize, usize)> = (0..monos.len())
        .flat_map(|i| (i + 1..monos.len()).map(move |j| (i, j)))
        .collect();
    let results = exec.map_slice(&pairs, |&(i, j)| -> Result<Option<(i64, bool)>> {
        let (a, b) = (&monos[i], &monos[j]);
        let br = s.bracket(
            &LaurentPoly::from_exponent(a.clone()),
            &LaurentPoly::from_exponent(b.clone()),
        )?;
        let Some(top) = br.max_degree() else {
            return Ok(None);
        };
        Ok(Some((top - a.degree() - b.degree(), br.is_homogeneous())))
    });
    let mut shifts = BTreeSet::new();
    let mut homogeneous = true;
    for r in results {
        if let Some((shift, homog)) = r? {
            shifts.insert(shift);
            homogeneous &= homog;
        }
    }
    Ok(DegreeShift {
        max_shift: shifts.iter().next_back().copied(),
        homogeneous: homogeneous && shifts.len() <= 1,
        pairs: pairs.len(),
    })
}

/// `ν(Σ c_e x^e) = min_e w·e`, with `ν(0) = ∞` (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightValuation {
    pub weights: Vec<i64>,
}

impl WeightValuation {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightValuation { weights }
    }

    /// `ν = −(Adams degree)`.
    pub fn negative_adams(n: usize) -> Self {
        WeightValuation {
            weights: vec![-1; n],
        }
    }

    pub fn trivial(n: usize) -> Self {
        WeightValuation {
            weights: vec![0; n],
        }
    }

    pub fn monomial_value(&self, e: &ExponentVector) -> i64 {
        self.weights
            .iter()
            .zip(e.as_slice())
            .map(|(w, &k)| w * k as i64)
            .sum()
    }

    pub fn value(&self, f: &LaurentPoly) -> Option<i64> {
        f.terms().map(|(e, _)| self.monomial_value(e)).min()
    }
}

fn add_values(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

/// `a >= b` on `Z ∪ {∞}`.
fn at_least(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationFailure {
    /// Axiom number, 1 to 5.
    pub axiom: u8,
    pub operands: Vec<LaurentPoly>,
    /// The two sides of the violated (in)equality; `None` is `∞`.
    pub left: Option<i64>,
    pub right: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationReport {
    pub monomial_pairs: usize,
    pub trials: usize,
    pub failure: Option<ValuationFailure>,
}

impl ValuationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn pair_axioms(
    nu: &WeightValuation,
    s: &dyn PoissonBracket,
    w: i64,
    a: &LaurentPoly,
    b: &LaurentPoly,
) -> Result<Option<ValuationFailure>> {
    let (va, vb) = (nu.value(a), nu.value(b));
    for (x, v) in [(a, va), (b, vb)] {
        if v.is_none() != x.is_zero() {
            return Ok(Some(ValuationFailure {
                axiom: 1,
                operands: vec![x.clone()],
                left: v,
                right: None,
            }));
        }
    }
    let fail = |axiom, left, right| {
        Some(ValuationFailure {
            axiom,
            operands: vec![a.clone(), b.clone()],
            left,
            right,
        })
    };
    let product = nu.value(&s.reduce(&a.mul(b)?)?);
    if product != add_values(va, vb) {
        return Ok(fail(3, product, add_values(va, vb)));
    }
    let sum = nu.value(&a.add(b)?);
    let floor = match (va, vb) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    };
    if !at_least(sum, floor) {
        return Ok(fail(4, sum, floor));
    }
    let br = nu.value(&s.bracket(a, b)?);
    let target = add_values(va, vb).map(|v| v - w);
    if !at_least(br, target) {
        return Ok(fail(5, br, target));
    }
    Ok(None)
}

/// Checks axioms (1)–(5) of a `w`-valuation: exhaustively on pairs of
/// monomials of degree at most `cfg.degree_bound` (ascending degree, so the
/// first witness is the simplest), then on random pairs.
pub fn check_w_valuation(
    nu: &WeightValuation,
    s: &dyn PoissonBracket,
    w: i64,
    cfg: &TrialConfig,
    exec: Exec,
) -> Result<ValuationReport> {
    let n = s.arity();
    if nu.weights.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: nu.weights.len(),
        });
    }
    // axiom (2): nonzero constants have value 0
    for c in [Scalar::one(), Scalar::ratio(-7, 3)] {
        let k = LaurentPoly::constant(n, c);
        if nu.value(&k) != Some(0) {
            return Ok(ValuationReport {
                monomial_pairs: 0,
                trials: 0,
                failure: Some(ValuationFailure {
                    axiom: 2,
                    operands: vec![k.clone()],
                    left: nu.value(&k),
                    right: Some(0),
                }),
            });
        }
    }
    let monos: Vec<LaurentPoly> = reduced_monomials(s, n, cfg.degree_bound)?
        .into_iter()
        .map(LaurentPoly::from_exponent)
        .collect();
    let pairs: Vec<(usize, usize)> = (0..monos.len())
        .flat_map(|i| (i..monos.len()).map(move |j| (i, j)))
        .collect();
    let found = exec.find_first(pairs.len(), |k| {
        let (i, j) = pairs[k];
        pair_axioms(nu, s, w, &monos[i], &monos[j]).transpose()
    });
    if let Some(r) = found {
        return Ok(ValuationReport {
            monomial_pairs: pairs.len(),
            trials: 0,
            failure: Some(r?),
        });
    }
    let sampler = PolySampler {
        negative: (0..n).map(|v| s.allows_negative(v)).collect(),
        degree_bound: cfg.degree_bound,
        max_terms: 4,
    };
    let found = exec.find_first(cfg.trials, |t| {
        let run = || -> Result<Option<ValuationFailure>> {
            let mut rng = trial_rng(cfg.seed, t);
            let a = s.reduce(&sampler.sample(&mut rng))?;
            let b = s.reduce(&sampler.sample(&mut rng))?;
            pair_axioms(nu, s, w, &a, &b)
        };
        run().transpose()
    });
    Ok(ValuationReport {
        monomial_pairs: pairs.len(),
        trials: cfg.trials,
        failure: found.transpose()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCounterexample {
    pub trial: usize,
    pub f: LaurentPoly,
    pub g: LaurentPoly,
    /// Top form of the bracket in `P_{Ω−ξ}`.
    pub quotient_top: LaurentPoly,
    /// `{T f, T g}` in `P_Ω`.
    pub graded: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCheckReport {
    pub trials: usize,
    /// Trials in which the graded bracket vanished and the degree drop was
    /// checked instead.
    pub degree_drops: usize,
    pub counterexample: Option<GradedCounterexample>,
}

impl GradedCheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// One comparison of the associated graded of `P_{Ω−ξ}` (filtered by Adams
/// degree) with `P_Ω`. Returns `(agrees, degree_drop_case, top, graded)`.
pub fn compare_graded_bracket(
    quotient: &PotentialQuotient,
    graded: &PotentialQuotient,
    f: &LaurentPoly,
    g: &LaurentPoly,
) -> Result<(bool, bool, LaurentPoly, LaurentPoly)> {
    let q = quotient.bracket(f, g)?;
    let top = q.top_form();
    let tf = f.top_form();
    let tg = g.top_form();
    let gr = graded.bracket(&tf, &tg)?;
    if !gr.is_zero() {
        return Ok((top == gr, false, top, gr));
    }
    let d = quotient.potential().degree();
    let ceiling = tf.max_degree().unwrap_or(0) + tg.max_degree().unwrap_or(0) + d - 3;
    let dropped = q.max_degree().is_none_or(|m| m < ceiling);
    Ok((dropped, true, top, gr))
}

/// Checks `gr P_{Ω−ξ} ≅ P_Ω` on random reduced representatives.
pub fn associated_graded_bracket_check(
    omega: &LaurentPoly,
    xi: &BigRational,
    order: &MonomialOrder,
    cfg: &TrialConfig,
    exec: Exec,
) -> Result<GradedCheckReport> {
    if order.kind == OrderKind::Lex {
        return Err(Error::InvalidStructure(
            "the associated graded check needs a degree-compatible order".into(),
        ));
    }
    let quotient = PotentialQuotient::new(omega.clone(), xi.clone(), order.clone())?;
    let graded = PotentialQuotient::new(omega.clone(), BigRational::zero(), order.clone())?;
    let sampler = PolySampler {
        negative: vec![false; 3],
        degree_bound: cfg.degree_bound,
        max_terms: 4,
    };
    let outcomes = exec.map(
        cfg.trials,
        |t| -> Result<(bool, Option<GradedCounterexample>)> {
            let mut rng = trial_rng(cfg.seed, t);
            let f = quotient.normal_form(&sampler.sample(&mut rng))?;
            let g = quotient.normal_form(&sampler.sample(&mut rng))?;
            let (ok, drop, top, gr) = compare_graded_bracket(&quotient, &graded, &f, &g)?;
            let cx = (!ok).then_some(GradedCounterexample {
                trial: t,
                f,
                g,
                quotient_top: top,
                graded: gr,
            });
            Ok((drop, cx))
        },
    );
    let mut report = GradedCheckReport {
        trials: cfg.trials,
        degree_drops: 0,
        counterexample: None,
    };
    for o in outcomes {
        let (drop, cx) = o?;
        report.degree_drops += drop as usize;
        if report.counterexample.is_none() {
            report.counterexample = cx;
        }
    }
    Ok(report)
}

/// `A(d) = k ⊕ A_{≥d}`, optionally enlarged by `k ζ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraAd {
    arity: usize,
    threshold: i64,
    zeta: Option<LaurentPoly>,
}

impl SubalgebraAd {
    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn zeta(&self) -> Option<&LaurentPoly> {
        self.zeta.as_ref()
    }

    /// Writes `f = c + t ζ + (terms of degree ≥ d)` if possible and returns
    /// `(c, t)`.
    pub fn decompose(&self, f: &LaurentPoly) -> Result<Option<(Scalar, Scalar)>> {
        if f.nvars() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: f.nvars(),
            });
        }
        if f.has_negative_exponents() {
            return Ok(None);
        }
        let c = f.coeff(&ExponentVector::zero(self.arity));
        let mut rest = f.sub(&LaurentPoly::constant(self.arity, c.clone()))?;
        let mut t = Scalar::zero();
        if let Some(zeta) = &self.zeta {
            let (e, zc) = zeta.terms().next_back().expect("nonzero zeta");
            t = rest
                .coeff(e)
                .div_rational(zc.as_rational().expect("rational zeta"))?;
            rest = rest.sub(&zeta.scale(&t)?)?;
        }
        let inside = rest.min_degree().is_none_or(|m| m >= self.threshold);
        Ok(inside.then_some((c, t)))
    }

    pub fn contains(&self, f: &LaurentPoly) -> Result<bool> {
        Ok(self.decompose(f)?.is_some())
    }
}

/// Builds `A(d)` or `A(d, ζ)`, checking that `ζ` has components only in
/// degrees `2..d` and that `ζ² ∈ A(d)`.
pub fn construct_adzeta(
    s: &PoissonStructure,
    d: i64,
    zeta: Option<&LaurentPoly>,
) -> Result<SubalgebraAd> {
    let n = s.arity();
    let min_d = if zeta.is_some() { 4 } else { 2 };
    if d < min_d {
        return Err(Error::DegreeTooSmall(d));
    }
    let Some(zeta) = zeta else {
        return Ok(SubalgebraAd {
            arity: n,
            threshold: d,
            zeta: None,
        });
    };
    if zeta.nvars() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: zeta.nvars(),
        });
    }
    if zeta.is_zero() {
        return Err(Error::DegreeViolation("ζ must be nonzero".into()));
    }
    if !zeta.is_rational() {
        return Err(Error::DegreeViolation(
            "ζ must have rational coefficients".into(),
        ));
    }
    if let Some(v) = zeta.first_negative_variable() {
        return Err(Error::NegativeExponent { var: v });
    }
    for &k in zeta.adams_components().keys() {
        if k < 2 || k > d - 1 {
            return Err(Error::DegreeViolation(format!(
                "ζ has a component of degree {k}, outside 2..={}",
                d - 1
            )));
        }
    }
    let square = zeta.mul(zeta)?;
    if let Some((&k, comp)) = square
        .adams_components()
        .iter()
        .find(|(&k, _)| (1..d).contains(&k))
    {
        let (e, c) = comp.terms().next().expect("nonzero component");
        let witness = VarContext::new(s.var_names(), vec![])
            .render(&LaurentPoly::monomial(e.clone(), c.clone()));
        return Err(Error::ZetaSquareEscapes { degree: k, witness });
    }
    Ok(SubalgebraAd {
        arity: n,
        threshold: d,
        zeta: Some(zeta.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdClosureCounterexample {
    pub trial: usize,
    pub f: LaurentPoly,
    pub g: LaurentPoly,
    pub bracket: LaurentPoly,
    /// Lowest degree present in the bracket.
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdClosureReport {
    pub trials: usize,
    pub counterexample: Option<AdClosureCounterexample>,
}

impl AdClosureReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `{A_{≥d}, A_{≥d}} ⊆ A_{≥2d−2}` on random homogeneous elements of
/// degrees in `[d, cfg.degree_bound]`.
pub fn check_ad_closure(
    s: &PoissonStructure,
    d: i64,
    cfg: &TrialConfig,
    exec: Exec,
) -> Result<AdClosureReport> {
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    if !s.is_polynomial() {
        return Err(Error::InvalidStructure(format!(
            "{} structure is not polynomial",
            s.kind()
        )));
    }
    let top = cfg.degree_bound as i64;
    if top < d {
        return Err(Error::DegreeViolation(format!(
            "degree bound {top} is below d = {d}"
        )));
    }
    let sampler = PolySampler::polynomial(s.arity(), cfg.degree_bound);
    let found = exec.find_first(cfg.trials, |t| {
        let run = || -> Result<Option<AdClosureCounterexample>> {
            let mut rng = trial_rng(cfg.seed, t);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rand::Rng::gen_range(rng, d..=top) as u32;
                s.reduce(&sampler.sample_homogeneous(rng, k))
            };
            let f = draw(&mut rng)?;
            let g = draw(&mut rng)?;
            let bracket = s.bracket(&f, &g)?;
            Ok(match bracket.min_degree() {
                Some(m) if m < 2 * d - 2 => Some(AdClosureCounterexample {
                    trial: t,
                    f,
                    g,
                    bracket,
                    degree: m,
                }),
                _ => None,
            })
        };
        run().transpose()
    });
    Ok(AdClosureReport {
        trials: cfg.trials,
        counterexample: found.transpose()?,
    })
}

#[cfg(test)]
mod tests;
