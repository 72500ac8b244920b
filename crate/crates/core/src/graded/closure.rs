use crate::bracket::PoissonStructure;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{Echelon, MonomialIndex};
use crate::poly::{ExponentVector, LaurentPoly};

/// Per-variable exponent bounds, optionally with a cap on total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentBox {
    pub lower: Vec<i32>,
    pub upper: Vec<i32>,
    pub max_degree: Option<i64>,
}

impl ExponentBox {
    pub fn new(lower: Vec<i32>, upper: Vec<i32>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch(
                "box bounds differ in length".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::DimensionMismatch("empty exponent box".into()));
        }
        Ok(ExponentBox {
            lower,
            upper,
            max_degree: None,
        })
    }

    /// `0 <= e_i <= k` for every variable.
    pub fn cube(n: usize, k: i32) -> Self {
        ExponentBox {
            lower: vec![0; n],
            upper: vec![k; n],
            max_degree: None,
        }
    }

    pub fn with_max_degree(mut self, d: i64) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn contains_exponent(&self, e: &ExponentVector) -> bool {
        let s = e.as_slice();
        s.len() == self.lower.len()
            && s.iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((x, l), u)| l <= x && x <= u)
            && self.max_degree.is_none_or(|d| e.degree() <= d)
    }

    /// Every term lies in the box.
    pub fn contains(&self, f: &LaurentPoly) -> bool {
        f.terms().all(|(e, _)| self.contains_exponent(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    /// Reduced echelon basis: columns ordered by descending monomial, each
    /// element monic in its leading monomial.
    pub basis: Vec<LaurentPoly>,
    pub rounds: usize,
    /// Whether the last round added nothing.
    pub fixpoint: bool,
}

impl ClosureResult {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &LaurentPoly) -> bool {
        let nvars = f.nvars();
        let mut index = MonomialIndex::new(nvars);
        let mut span = Echelon::default();
        for b in &self.basis {
            if let Some(row) = index.coordinates(b) {
                span.insert(row);
            }
        }
        match index.coordinates(f) {
            Some(row) => span.contains(&row),
            None => false,
        }
    }
}

fn canonical_basis(nvars: usize, elements: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let mut monomials: Vec<ExponentVector> = elements
        .iter()
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect();
    monomials.sort_by(|a, b| b.cmp(a));
    monomials.dedup();
    let mut index = MonomialIndex::new(nvars);
    for m in &monomials {
        index.get_or_insert(m);
    }
    let mut span = Echelon::default();
    for p in elements {
        span.insert(index.coordinates(p).expect("rational elements"));
    }
    span.rows()
        .iter()
        .map(|r| index.to_poly(r.iter().map(|(&i, c)| (i, c.clone()))))
        .collect()
}

/// Span-closure of `seeds` under products and brackets, keeping only
/// elements all of whose terms lie in `bounds`. Stops at a fixpoint or
/// after `max_rounds`.
pub fn bounded_poisson_closure(
    s: &PoissonStructure,
    seeds: &[LaurentPoly],
    bounds: &ExponentBox,
    max_rounds: usize,
    exec: Exec,
) -> Result<ClosureResult> {
    let n = s.arity();
    if bounds.lower.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: bounds.lower.len(),
        });
    }
    if !s.parameters().is_empty() {
        return Err(Error::InvalidStructure(
            "closure needs rational structure constants".into(),
        ));
    }
    let mut index = MonomialIndex::new(n);
    let mut span = Echelon::default();
    let mut elements: Vec<LaurentPoly> = Vec::new();
    let mut admit = |p: LaurentPoly, elements: &mut Vec<LaurentPoly>| -> Result<bool> {
        if p.is_zero() || !bounds.contains(&p) {
            return Ok(false);
        }
        let row = index
            .coordinates(&p)
            .ok_or_else(|| Error::InvalidStructure("closure elements must be rational".into()))?;
        if span.insert(row) {
            elements.push(p);
            return Ok(true);
        }
        Ok(false)
    };
    for seed in seeds {
        let r = s.reduce(seed)?;
        admit(r, &mut elements)?;
    }
    let mut fresh_from = 0;
    let mut rounds = 0;
    let mut fixpoint = false;
    while rounds < max_rounds {
        rounds += 1;
        let len = elements.len();
        // pairs touching at least one element added in the previous round
        let pairs: Vec<(usize, usize)> = (0..len)
            .flat_map(|i| (i.max(fresh_from)..len).map(move |j| (i, j)))
            .collect();
        let snapshot = &elements;
        let candidates = exec.map_slice(&pairs, |&(i, j)| -> Result<[LaurentPoly; 2]> {
            let (a, b) = (&snapshot[i], &snapshot[j]);
            Ok([s.reduce(&a.mul(b)?)?, s.bracket(a, b)?])
        });
        let mut next = elements.clone();
        for c in candidates {
            for p in c? {
                admit(p, &mut next)?;
            }
        }
        fresh_from = len;
        let grew = next.len() > len;
        elements = next;
        if !grew {
            fixpoint = true;
            break;
        }
    }
    Ok(ClosureResult {
        basis: canonical_basis(n, &elements),
        rounds,
        fixpoint,
    })
}
