//! Buchberger's algorithm over Q and quotient-ring dimension counting.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{grevlex, ExponentVector, LaurentPoly, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
    Grlex,
}

/// A monomial order on nonnegative exponent vectors.
///
/// `precedence[0]` names the largest variable, `precedence[1]` the next, and
/// so on; an empty precedence means `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub precedence: Vec<usize>,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::grevlex()
    }
}

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::Grevlex,
            precedence: Vec::new(),
        }
    }

    pub fn lex() -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            precedence: Vec::new(),
        }
    }

    pub fn grlex() -> Self {
        MonomialOrder {
            kind: OrderKind::Grlex,
            precedence: Vec::new(),
        }
    }

    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self> {
        let mut sorted = precedence.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::InvalidStructure(format!(
                "variable precedence {precedence:?} is not a permutation"
            )));
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "grevlex" => Ok(MonomialOrder::grevlex()),
            "lex" => Ok(MonomialOrder::lex()),
            "grlex" => Ok(MonomialOrder::grlex()),
            other => Err(Error::InvalidStructure(format!(
                "unknown monomial order {other:?}"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
        }
    }

    pub fn check_arity(&self, n: usize) -> Result<()> {
        if !self.precedence.is_empty() && self.precedence.len() != n {
            return Err(Error::ArityMismatch {
                expected: self.precedence.len(),
                found: n,
            });
        }
        Ok(())
    }

    fn permuted(&self, a: &[i32]) -> Vec<i32> {
        self.precedence.iter().map(|&i| a[i]).collect()
    }

    pub fn cmp(&self, a: &[i32], b: &[i32]) -> Ordering {
        if !self.precedence.is_empty() {
            let (pa, pb) = (self.permuted(a), self.permuted(b));
            return self.cmp_identity(&pa, &pb);
        }
        self.cmp_identity(a, b)
    }

    fn cmp_identity(&self, a: &[i32], b: &[i32]) -> Ordering {
        match self.kind {
            OrderKind::Grevlex => grevlex(a, b),
            OrderKind::Lex => a.cmp(b),
            OrderKind::Grlex => {
                let da: i64 = a.iter().map(|&e| e as i64).sum();
                let db: i64 = b.iter().map(|&e| e as i64).sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            }
        }
    }

    /// Leading term of `p` under this order.
    pub fn leading_term<'a>(&self, p: &'a LaurentPoly) -> Option<(&'a ExponentVector, &'a Scalar)> {
        p.terms()
            .max_by(|(a, _), (b, _)| self.cmp(a.as_slice(), b.as_slice()))
    }
}

/// Guards keeping runtimes predictable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerLimits {
    pub max_arity: usize,
    pub max_degree: i64,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_arity: 8,
            max_degree: 12,
        }
    }
}

/// Reduced Gröbner basis: monic, inter-reduced, sorted by descending
/// leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    generators: Vec<LaurentPoly>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[LaurentPoly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn leading_monomials(&self) -> Vec<ExponentVector> {
        self.generators
            .iter()
            .map(|g| {
                self.order
                    .leading_term(g)
                    .expect("nonzero generator")
                    .0
                    .clone()
            })
            .collect()
    }
}

type Exp = Box<[i32]>;

/// Integer polynomial with terms in ascending order (leading term last).
#[derive(Debug, Clone, PartialEq, Eq)]
struct IPoly {
    terms: Vec<(Exp, BigInt)>,
}

impl IPoly {
    fn lead(&self) -> &(Exp, BigInt) {
        self.terms.last().expect("nonzero polynomial")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_primitive(&mut self) {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return;
        }
        if self.lead().1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &g;
            }
        }
    }
}

fn divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_sub(a: &[i32], b: &[i32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_lcm(a: &[i32], b: &[i32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// `a * p - b * x^shift * q`, merged in ascending order.
fn combine(
    order: &MonomialOrder,
    p: &[(Exp, BigInt)],
    a: &BigInt,
    q: &[(Exp, BigInt)],
    b: &BigInt,
    shift: &[i32],
) -> Vec<(Exp, BigInt)> {
    let shifted: Vec<(Exp, BigInt)> = q
        .iter()
        .map(|(e, c)| (e.iter().zip(shift).map(|(x, y)| x + y).collect(), c * b))
        .collect();
    let mut out = Vec::with_capacity(p.len() + shifted.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < shifted.len() {
        let ord = match (p.get(i), shifted.get(j)) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Less => {
                out.push((p[i].0.clone(), &p[i].1 * a));
                i += 1;
            }
            Ordering::Greater => {
                out.push((shifted[j].0.clone(), -&shifted[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let c = &p[i].1 * a - &shifted[j].1;
                if !c.is_zero() {
                    out.push((p[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full fraction-free reduction; the result is primitive with positive lead.
fn reduce(order: &MonomialOrder, p: &IPoly, basis: &[&IPoly]) -> IPoly {
    let mut work = p.terms.clone();
    let mut rem: Vec<(Exp, BigInt)> = Vec::new();
    while let Some((m, c)) = work.last() {
        let divisor = basis.iter().find(|g| divides(&g.lead().0, m));
        match divisor {
            Some(g) => {
                let (lm, lc) = g.lead();
                let gcd = c.gcd(lc);
                let a = lc / &gcd;
                let b = c / &gcd;
                let shift = exp_sub(m, lm);
                work = combine(order, &work, &a, &g.terms, &b, &shift);
                if !a.is_one() {
                    for (_, r) in &mut rem {
                        *r *= &a;
                    }
                    let mut g = BigInt::zero();
                    for (_, x) in rem.iter().chain(work.iter()) {
                        g = g.gcd(x);
                        if g.is_one() {
                            break;
                        }
                    }
                    if !g.is_zero() && !g.is_one() {
                        for (_, x) in rem.iter_mut().chain(work.iter_mut()) {
                            *x /= &g;
                        }
                    }
                }
            }
            None => rem.push(work.pop().expect("nonempty")),
        }
    }
    rem.reverse();
    let mut out = IPoly { terms: rem };
    if !out.is_zero() {
        out.make_primitive();
    }
    out
}

fn s_poly(order: &MonomialOrder, f: &IPoly, g: &IPoly) -> IPoly {
    let (mf, cf) = f.lead();
    let (mg, cg) = g.lead();
    let l = exp_lcm(mf, mg);
    let gcd = cf.gcd(cg);
    let a = cg / &gcd;
    let b = cf / &gcd;
    let sf = exp_sub(&l, mf);
    let sg = exp_sub(&l, mg);
    let left: Vec<(Exp, BigInt)> = f
        .terms
        .iter()
        .map(|(e, c)| {
            (
                e.iter().zip(sf.iter()).map(|(x, y)| x + y).collect(),
                c.clone(),
            )
        })
        .collect();
    let mut out = IPoly {
        terms: combine(order, &left, &a, &g.terms, &b, &sg),
    };
    if !out.is_zero() {
        out.make_primitive();
    }
    out
}

fn to_ipoly(order: &MonomialOrder, f: &LaurentPoly) -> Result<IPoly> {
    let rational = f.rational_terms()?;
    let mut den = BigInt::one();
    for (_, c) in &rational {
        den = den.lcm(c.denom());
    }
    let mut terms: Vec<(Exp, BigInt)> = rational
        .into_iter()
        .map(|(e, c)| {
            (
                e.as_slice().into(),
                (c * BigRational::from_integer(den.clone())).to_integer(),
            )
        })
        .collect();
    terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
    let mut p = IPoly { terms };
    if !p.is_zero() {
        p.make_primitive();
    }
    Ok(p)
}

fn to_monic(nvars: usize, p: &IPoly) -> LaurentPoly {
    let lc = BigRational::from_integer(p.lead().1.clone());
    LaurentPoly::from_terms(
        nvars,
        p.terms.iter().map(|(e, c)| {
            (
                ExponentVector::new(e.to_vec()),
                Scalar::from(BigRational::from_integer(c.clone()) / &lc),
            )
        }),
    )
    .expect("consistent arity")
}

fn validate_inputs(
    gens: &[LaurentPoly],
    order: &MonomialOrder,
    limits: &GroebnerLimits,
) -> Result<usize> {
    let nvars = gens
        .first()
        .map(LaurentPoly::nvars)
        .ok_or(Error::ZeroIdeal)?;
    if nvars > limits.max_arity {
        return Err(Error::LimitExceeded(format!(
            "arity {nvars} > {}",
            limits.max_arity
        )));
    }
    order.check_arity(nvars)?;
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        if let Some(v) = g.first_negative_variable() {
            return Err(Error::NegativeExponent { var: v });
        }
        if let Some(d) = g.max_degree() {
            if d > limits.max_degree {
                return Err(Error::LimitExceeded(format!(
                    "degree {d} > {}",
                    limits.max_degree
                )));
            }
        }
    }
    Ok(nvars)
}

pub fn groebner_basis(gens: &[LaurentPoly], order: &MonomialOrder) -> Result<GroebnerBasis> {
    groebner_basis_with_limits(gens, order, &GroebnerLimits::default())
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis_with_limits(
    gens: &[LaurentPoly],
    order: &MonomialOrder,
    limits: &GroebnerLimits,
) -> Result<GroebnerBasis> {
    let nvars = validate_inputs(gens, order, limits)?;
    let mut basis: Vec<IPoly> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    for g in gens {
        let p = to_ipoly(order, g)?;
        if p.is_zero() {
            continue;
        }
        let refs: Vec<&IPoly> = basis.iter().collect();
        let r = reduce(order, &p, &refs);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r);
            pending.extend((0..k).map(|i| (i, k)));
        }
    }
    if basis.is_empty() {
        return Err(Error::ZeroIdeal);
    }

    while !pending.is_empty() {
        // normal selection strategy: smallest lcm first
        let &(i, j) = pending
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                let l1 = exp_lcm(&basis[a].lead().0, &basis[b].lead().0);
                let l2 = exp_lcm(&basis[c].lead().0, &basis[d].lead().0);
                order.cmp(&l1, &l2).then((a, b).cmp(&(c, d)))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let (li, lj) = (&basis[i].lead().0, &basis[j].lead().0);
        if coprime(li, lj) {
            continue;
        }
        let l = exp_lcm(li, lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k].lead().0, &l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_poly(order, &basis[i], &basis[j]);
        let refs: Vec<&IPoly> = basis.iter().collect();
        let r = reduce(order, &s, &refs);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r);
            pending.extend((0..k).map(|a| (a, k)));
        }
    }

    // minimize
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let li = &basis[i].lead().0;
        let redundant = (0..basis.len()).any(|j| {
            j != i && {
                let lj = &basis[j].lead().0;
                divides(lj, li) && (lj != li || j < i)
            }
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<IPoly> = keep.into_iter().map(|i| basis[i].clone()).collect();

    // inter-reduce
    let mut reduced: Vec<IPoly> = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<&IPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h)
            .collect();
        let (lm, lc) = g.lead().clone();
        let tail = IPoly {
            terms: g.terms[..g.terms.len() - 1].to_vec(),
        };
        // reduce the tail with the lead held fixed: scale lead alongside
        let mut work = tail.terms;
        let mut lead_coeff = lc;
        let mut rem: Vec<(Exp, BigInt)> = Vec::new();
        while let Some((m, c)) = work.last() {
            match others.iter().find(|h| divides(&h.lead().0, m)) {
                Some(h) => {
                    let (hm, hc) = h.lead();
                    let gcd = c.gcd(hc);
                    let a = hc / &gcd;
                    let b = c / &gcd;
                    let shift = exp_sub(m, hm);
                    work = combine(order, &work, &a, &h.terms, &b, &shift);
                    for (_, r) in &mut rem {
                        *r *= &a;
                    }
                    lead_coeff *= &a;
                }
                None => rem.push(work.pop().expect("nonempty")),
            }
        }
        rem.reverse();
        rem.push((lm, lead_coeff));
        let mut p = IPoly { terms: rem };
        p.make_primitive();
        reduced.push(p);
    }
    reduced.sort_by(|a, b| order.cmp(&b.lead().0, &a.lead().0));

    let gb = GroebnerBasis {
        nvars,
        generators: reduced.iter().map(|p| to_monic(nvars, p)).collect(),
        order: order.clone(),
    };
    if !satisfies_buchberger_criterion(&gb)? {
        return Err(Error::Internal(
            "Buchberger criterion fails on the computed basis".into(),
        ));
    }
    Ok(gb)
}

/// Every S-polynomial of the basis reduces to zero.
pub fn satisfies_buchberger_criterion(gb: &GroebnerBasis) -> Result<bool> {
    let polys: Vec<IPoly> = gb
        .generators
        .iter()
        .map(|g| to_ipoly(&gb.order, g))
        .collect::<Result<_>>()?;
    let refs: Vec<&IPoly> = polys.iter().collect();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if coprime(&polys[i].lead().0, &polys[j].lead().0) {
                continue;
            }
            let s = s_poly(&gb.order, &polys[i], &polys[j]);
            if !reduce(&gb.order, &s, &refs).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unique fully reduced remainder of `f` modulo the basis.
pub fn normal_form(f: &LaurentPoly, gb: &GroebnerBasis) -> Result<LaurentPoly> {
    if f.nvars() != gb.nvars {
        return Err(Error::ArityMismatch {
            expected: gb.nvars,
            found: f.nvars(),
        });
    }
    if let Some(v) = f.first_negative_variable() {
        return Err(Error::NegativeExponent { var: v });
    }
    let order = &gb.order;
    let basis: Vec<Vec<(Exp, BigRational)>> = gb
        .generators
        .iter()
        .map(|g| sorted_rational(order, g))
        .collect::<Result<_>>()?;
    let mut work = sorted_rational(order, f)?;
    let mut rem: Vec<(Exp, BigRational)> = Vec::new();
    while let Some((m, c)) = work.last() {
        match basis.iter().find(|g| divides(&g.last().unwrap().0, m)) {
            Some(g) => {
                let (lm, lc) = g.last().unwrap();
                let factor = c / lc;
                let shift = exp_sub(m, lm);
                work = subtract_multiple(order, &work, &factor, g, &shift);
            }
            None => rem.push(work.pop().expect("nonempty")),
        }
    }
    LaurentPoly::from_terms(
        f.nvars(),
        rem.into_iter()
            .map(|(e, c)| (ExponentVector::new(e.to_vec()), Scalar::from(c))),
    )
}

fn sorted_rational(order: &MonomialOrder, f: &LaurentPoly) -> Result<Vec<(Exp, BigRational)>> {
    let mut terms: Vec<(Exp, BigRational)> = f
        .rational_terms()?
        .into_iter()
        .map(|(e, c)| (e.as_slice().into(), c))
        .collect();
    terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
    Ok(terms)
}

fn subtract_multiple(
    order: &MonomialOrder,
    p: &[(Exp, BigRational)],
    k: &BigRational,
    q: &[(Exp, BigRational)],
    shift: &[i32],
) -> Vec<(Exp, BigRational)> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let shifted: Vec<(Exp, BigRational)> = q
        .iter()
        .map(|(e, c)| (e.iter().zip(shift).map(|(x, y)| x + y).collect(), c * k))
        .collect();
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < shifted.len() {
        let ord = match (p.get(i), shifted.get(j)) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((shifted[j].0.clone(), -&shifted[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let c = &p[i].1 - &shifted[j].1;
                if !c.is_zero() {
                    out.push((p[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite(u64),
    Infinite,
}

/// Largest box of exponents `quotient_dimension` will enumerate.
pub const MAX_STANDARD_BOX: u64 = 50_000_000;

/// Standard monomials (those divisible by no leading monomial), when there
/// are finitely many.
pub fn standard_monomials(gb: &GroebnerBasis) -> Result<Option<Vec<ExponentVector>>> {
    let lms = gb.leading_monomials();
    let n = gb.nvars;
    // the unit ideal has no standard monomials
    if lms.iter().any(ExponentVector::is_zero) {
        return Ok(Some(Vec::new()));
    }
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let pure = lms
            .iter()
            .filter(|m| (0..n).all(|k| k == i || m.get(k) == 0) && m.get(i) > 0)
            .map(|m| m.get(i))
            .min();
        match pure {
            Some(a) => bounds.push(a),
            None => return Ok(None),
        }
    }
    let size: u64 = bounds.iter().map(|&b| b as u64).product();
    if size > MAX_STANDARD_BOX {
        return Err(Error::LimitExceeded(format!(
            "standard-monomial box of size {size}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = vec![0i32; n];
    loop {
        if !lms.iter().any(|m| divides(m.as_slice(), &cur)) {
            out.push(ExponentVector::new(cur.clone()));
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(Some(out));
            }
            cur[k] += 1;
            if cur[k] < bounds[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

pub fn quotient_dimension(gb: &GroebnerBasis) -> Result<QuotientDimension> {
    Ok(match standard_monomials(gb)? {
        Some(m) => QuotientDimension::Finite(m.len() as u64),
        None => QuotientDimension::Infinite,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub isolated: bool,
    /// Dimension of the Jacobian ring when finite.
    pub dimension: Option<u64>,
    pub basis: Option<GroebnerBasis>,
}

/// Decides whether a homogeneous ternary form has an isolated singularity
/// at the origin, via the Gröbner basis of its Jacobian ideal.
pub fn is_isolated_singularity(omega: &LaurentPoly) -> Result<SingularityReport> {
    is_isolated_singularity_with(omega, &MonomialOrder::grevlex())
}

pub fn is_isolated_singularity_with(
    omega: &LaurentPoly,
    order: &MonomialOrder,
) -> Result<SingularityReport> {
    if omega.nvars() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            found: omega.nvars(),
        });
    }
    if let Some(v) = omega.first_negative_variable() {
        return Err(Error::NegativeExponent { var: v });
    }
    if omega.is_zero() || !omega.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = omega.max_degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeViolation(format!("potential degree {d} < 2")));
    }
    let partials: Vec<LaurentPoly> = (0..3)
        .map(|i| omega.partial_derivative(i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    if partials.is_empty() {
        return Ok(SingularityReport {
            isolated: false,
            dimension: None,
            basis: None,
        });
    }
    let gb = groebner_basis(&partials, order)?;
    let dim = quotient_dimension(&gb)?;
    Ok(match dim {
        QuotientDimension::Finite(k) => SingularityReport {
            isolated: true,
            dimension: Some(k),
            basis: Some(gb),
        },
        QuotientDimension::Infinite => SingularityReport {
            isolated: false,
            dimension: None,
            basis: Some(gb),
        },
    })
}
