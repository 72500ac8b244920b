use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::Result;
use crate::exec::Exec;
use crate::poly::LaurentPoly;
use crate::random::{small_rational, trial_rng, PolySampler};

use super::{PoissonBracket, PoissonStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Antisymmetry,
    Bilinearity,
    Leibniz,
    Jacobi,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Bilinearity => "bilinearity",
            Axiom::Leibniz => "leibniz",
            Axiom::Jacobi => "jacobi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub degree_bound: u32,
    pub trials: usize,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            degree_bound: 4,
            trials: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCounterexample {
    pub axiom: Axiom,
    pub trial: usize,
    /// `f, g, h` of the failing trial.
    pub operands: Vec<LaurentPoly>,
    /// The nonzero left-hand side minus right-hand side.
    pub defect: LaurentPoly,
    /// Parameter values used for the trial, if the structure has any.
    pub specialization: BTreeMap<String, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub trials: usize,
    pub counterexample: Option<AxiomCounterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn sampler_for(b: &dyn PoissonBracket, degree_bound: u32) -> PolySampler {
    PolySampler {
        negative: (0..b.arity()).map(|v| b.allows_negative(v)).collect(),
        degree_bound,
        max_terms: 3,
    }
}

/// Checks the four axioms on one random triple; `Some` on failure.
fn check_triple(
    b: &dyn PoissonBracket,
    f: &LaurentPoly,
    g: &LaurentPoly,
    h: &LaurentPoly,
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<Option<(Axiom, LaurentPoly)>> {
    let fg = b.bracket(f, g)?;
    let anti = fg.add(&b.bracket(g, f)?)?;
    if !anti.is_zero() {
        return Ok(Some((Axiom::Antisymmetry, anti)));
    }

    let combo = f.scale_rational(alpha).add(&g.scale_rational(beta))?;
    let fh = b.bracket(f, h)?;
    let gh = b.bracket(g, h)?;
    let expected = fh.scale_rational(alpha).add(&gh.scale_rational(beta))?;
    let left = b.bracket(&combo, h)?.sub(&expected)?;
    if !left.is_zero() {
        return Ok(Some((Axiom::Bilinearity, left)));
    }
    let right = b.bracket(h, &combo)?.add(&expected)?;
    if !right.is_zero() {
        return Ok(Some((Axiom::Bilinearity, right)));
    }

    let product = b.reduce(&g.mul(h)?)?;
    let expanded = b.reduce(&fg.mul(h)?.add(&g.mul(&fh)?)?)?;
    let leibniz = b.bracket(f, &product)?.sub(&expanded)?;
    if !leibniz.is_zero() {
        return Ok(Some((Axiom::Leibniz, leibniz)));
    }

    let hf = fh.neg();
    let jacobi = b
        .bracket(f, &gh)?
        .add(&b.bracket(g, &hf)?)?
        .add(&b.bracket(h, &fg)?)?;
    if !jacobi.is_zero() {
        return Ok(Some((Axiom::Jacobi, jacobi)));
    }
    Ok(None)
}

fn draw(
    b: &dyn PoissonBracket,
    sampler: &PolySampler,
    rng: &mut impl rand::Rng,
) -> Result<(Vec<LaurentPoly>, BigRational, BigRational)> {
    let ops = (0..3)
        .map(|_| b.reduce(&sampler.sample(rng)))
        .collect::<Result<Vec<_>>>()?;
    Ok((ops, small_rational(rng), small_rational(rng)))
}

/// Antisymmetry, bilinearity, Leibniz and Jacobi on random triples; reports
/// the counterexample of the lowest failing trial.
pub fn verify_bracket_axioms(
    b: &dyn PoissonBracket,
    cfg: &TrialConfig,
    exec: Exec,
) -> Result<AxiomReport> {
    let sampler = sampler_for(b, cfg.degree_bound);
    let found = exec.find_first(cfg.trials, |t| {
        let run = || -> Result<Option<AxiomCounterexample>> {
            let mut rng = trial_rng(cfg.seed, t);
            let (ops, alpha, beta) = draw(b, &sampler, &mut rng)?;
            Ok(
                check_triple(b, &ops[0], &ops[1], &ops[2], &alpha, &beta)?.map(
                    |(axiom, defect)| AxiomCounterexample {
                        axiom,
                        trial: t,
                        operands: ops,
                        defect,
                        specialization: BTreeMap::new(),
                    },
                ),
            )
        };
        run().transpose()
    });
    Ok(AxiomReport {
        trials: cfg.trials,
        counterexample: found.transpose()?,
    })
}

/// As [`verify_bracket_axioms`]; structures with formal parameters are
/// specialized to fresh random rationals on every trial, since the Jacobi
/// identity is quadratic in the structure constants.
pub fn verify_poisson_axioms(
    s: &PoissonStructure,
    cfg: &TrialConfig,
    exec: Exec,
) -> Result<AxiomReport> {
    let params = s.parameters();
    if params.is_empty() {
        return verify_bracket_axioms(s, cfg, exec);
    }
    let found = exec.find_first(cfg.trials, |t| {
        let run = || -> Result<Option<AxiomCounterexample>> {
            let mut rng = trial_rng(cfg.seed, t);
            let values: BTreeMap<String, BigRational> = params
                .iter()
                .map(|p| (p.clone(), small_rational(&mut rng)))
                .collect();
            let special = s.specialize(&values)?;
            let sampler = sampler_for(&special, cfg.degree_bound);
            let (ops, alpha, beta) = draw(&special, &sampler, &mut rng)?;
            Ok(
                check_triple(&special, &ops[0], &ops[1], &ops[2], &alpha, &beta)?.map(
                    |(axiom, defect)| AxiomCounterexample {
                        axiom,
                        trial: t,
                        operands: ops,
                        defect,
                        specialization: values.clone(),
                    },
                ),
            )
        };
        run().transpose()
    });
    Ok(AxiomReport {
        trials: cfg.trials,
        counterexample: found.transpose()?,
    })
}
