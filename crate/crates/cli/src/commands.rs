//! Dispatch from descriptors to library operations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use poisson_forge::analysis::{is_poisson_simple_torus, monomial_center_basis, truncated_center};
use poisson_forge::bracket::{
    verify_poisson_axioms, PoissonStructure, SkewParamMatrix, TrialConfig,
};
use poisson_forge::graded::{
    associated_graded_bracket_check, bounded_poisson_closure, bracket_degree_shift,
    check_ad_closure, check_w_valuation, construct_adzeta, ExponentBox, WeightValuation,
};
use poisson_forge::groebner::{is_isolated_singularity_with, MonomialOrder};
use poisson_forge::lattice::IntMatrix;
use poisson_forge::morphism::{
    aut_bound, check_poisson_morphism, classify_torus_endo, exhaustive_dixmier_search,
    scaled_presentation_assert, simple_torus_dixmier_assert, DixmierAssertion, EndoClassification,
    GeneratorIdentity, MonomialMap, MorphismCheck, PolyMap, PresentationAssertion,
};
use poisson_forge::poly::{render_latex, ExponentVector, LaurentPoly, VarContext};
use poisson_forge::{Error, Exec};

use crate::descriptor::{operands, parse_order, Command, ProblemDescriptor, StructureDescriptor};
use crate::{CliError, Report, Status};

/// One invocation is single-threaded; the parallel path gives identical
/// results and is left to library callers.
const EXEC: Exec = Exec::Sequential;

/// Largest exhaustive Dixmier search accepted from the command line.
const MAX_SEARCH: u64 = 5_000_000;

pub fn run(d: &ProblemDescriptor) -> Result<Report, CliError> {
    let ctx = Context::new(d)?;
    let ops = d.operands.as_ref();
    match d.command {
        Command::Bracket => bracket(&ctx, operands(ops)?),
        Command::Simple => simple(&ctx, operands(ops)?),
        Command::Center => center(&ctx, operands(ops)?),
        Command::MorphismCheck => morphism_check(&ctx, operands(ops)?),
        Command::Classify => classify(&ctx, operands(ops)?),
        Command::DixmierAssert => dixmier_assert(&ctx, operands(ops)?),
        Command::Singular => singular(&ctx, operands(ops)?),
        Command::Grading => grading(&ctx, operands(ops)?),
        Command::Valuation => valuation(&ctx, operands(ops)?),
        Command::AdClosure => ad_closure(&ctx, operands(ops)?),
        Command::Closure => closure(&ctx, operands(ops)?),
        Command::GrCheck => gr_check(&ctx, operands(ops)?),
        Command::AutBound => aut_bound_cmd(&ctx, operands(ops)?),
    }
}

struct Context {
    structure: Option<PoissonStructure>,
    cfg: TrialConfig,
    order: MonomialOrder,
}

impl Context {
    fn new(d: &ProblemDescriptor) -> Result<Self, CliError> {
        let defaults = TrialConfig::default();
        let cfg = TrialConfig {
            degree_bound: d.options.degree_bound.unwrap_or(defaults.degree_bound),
            trials: d.options.trials.unwrap_or(defaults.trials),
            seed: d.options.seed.unwrap_or(defaults.seed),
        };
        let order = match &d.options.order {
            Some(o) => parse_order(o)?,
            None => MonomialOrder::grevlex(),
        };
        let structure = d.structure.as_ref().map(|s| s.build(&order)).transpose()?;
        Ok(Context {
            structure,
            cfg,
            order,
        })
    }

    fn structure(&self) -> Result<&PoissonStructure, CliError> {
        self.structure
            .as_ref()
            .ok_or_else(|| CliError::input("this command requires a structure"))
    }

    fn vars(&self) -> Result<VarContext, CliError> {
        Ok(self.structure()?.var_context())
    }

    fn parse(&self, field: &str, src: &str) -> Result<LaurentPoly, CliError> {
        parse_in(&self.vars()?, field, src)
    }

    fn render(&self, p: &LaurentPoly) -> String {
        match &self.structure {
            Some(s) => s.var_context().render(p),
            None => VarContext::indexed(p.nvars()).render(p),
        }
    }

    fn latex(&self, p: &LaurentPoly) -> String {
        match &self.structure {
            Some(s) => render_latex(p, &s.var_names()),
            None => render_latex(p, &VarContext::indexed(p.nvars()).vars),
        }
    }

    fn monomial(&self, e: &ExponentVector) -> String {
        self.render(&LaurentPoly::from_exponent(e.clone()))
    }

    fn trial_fields(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("degree_bound".into(), json!(self.cfg.degree_bound));
        m.insert("trials".into(), json!(self.cfg.trials));
        m.insert("seed".into(), json!(self.cfg.seed));
        m
    }
}

fn parse_in(vars: &VarContext, field: &str, src: &str) -> Result<LaurentPoly, CliError> {
    vars.parse(src)
        .map_err(|e| CliError::input(format!("operands.{field}: {e}")))
}

fn int_value(k: &BigInt) -> Value {
    match k.to_i64() {
        Some(v) => json!(v),
        None => json!(k.to_string()),
    }
}

fn valuation_value(v: Option<i64>) -> Value {
    match v {
        Some(v) => json!(v),
        None => json!("inf"),
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn not_applicable(reason: impl Into<String>) -> Result<Report, CliError> {
    Ok(Report::new(Status::NotApplicable, json!({})).with_diagnostic(reason))
}

fn verdict(passed: bool) -> Status {
    if passed {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn torus_lambda(s: &PoissonStructure) -> Option<&SkewParamMatrix> {
    match s {
        PoissonStructure::Torus(l) => Some(l),
        _ => None,
    }
}

fn identity_json(ctx: &Context, id: &GeneratorIdentity) -> Value {
    json!({
        "pair": [id.i + 1, id.j + 1],
        "lhs": ctx.render(&id.lhs),
        "rhs": ctx.render(&id.rhs),
        "lhs_latex": ctx.latex(&id.lhs),
        "rhs_latex": ctx.latex(&id.rhs),
        "holds": id.holds(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoOperands {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketOperands {
    f: Option<String>,
    g: Option<String>,
}

/// `{f, g}`, or the axiom suite on random operands when none are given.
fn bracket(ctx: &Context, ops: BracketOperands) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    let (f, g) = match (&ops.f, &ops.g) {
        (Some(f), Some(g)) => (f, g),
        (None, None) => return axiom_suite(ctx, s),
        _ => return Err(CliError::input("operands: give both f and g, or neither")),
    };
    let mut diagnostics = Vec::new();
    let mut reduced = |name: &str, src: &str| -> Result<LaurentPoly, CliError> {
        let p = ctx.parse(name, src)?;
        let r = s.reduce(&p)?;
        if r != p {
            diagnostics.push(format!("{name} replaced by its normal form"));
        }
        Ok(r)
    };
    let (f, g) = (reduced("f", f)?, reduced("g", g)?);
    let b = s.bracket(&f, &g)?;
    let mut report = Report::new(
        Status::Value,
        json!({
            "f": ctx.render(&f),
            "g": ctx.render(&g),
            "bracket": ctx.render(&b),
            "latex": ctx.latex(&b),
        }),
    );
    report.diagnostics = diagnostics;
    Ok(report)
}

fn axiom_suite(ctx: &Context, s: &PoissonStructure) -> Result<Report, CliError> {
    let r = verify_poisson_axioms(s, &ctx.cfg, EXEC)?;
    let mut payload = ctx.trial_fields();
    if let Some(cx) = &r.counterexample {
        let spec: BTreeMap<&str, String> = cx
            .specialization
            .iter()
            .map(|(k, v)| (k.as_str(), rational_text(v)))
            .collect();
        payload.insert(
            "counterexample".into(),
            json!({
                "axiom": cx.axiom.to_string(),
                "trial": cx.trial,
                "operands": cx.operands.iter().map(|p| ctx.render(p)).collect::<Vec<_>>(),
                "defect": ctx.render(&cx.defect),
                "specialization": spec,
            }),
        );
    }
    Ok(Report::new(verdict(r.passed()), Value::Object(payload)))
}

fn simple(ctx: &Context, _: NoOperands) -> Result<Report, CliError> {
    let Some(lambda) = torus_lambda(ctx.structure()?) else {
        return not_applicable("Poisson simplicity is decided for tori only");
    };
    let r = is_poisson_simple_torus(lambda);
    Ok(Report::new(
        verdict(r.simple),
        json!({
            "simple": r.simple,
            "method": r.method.name(),
            "witness": r.witness.as_ref().map(|e| ctx.monomial(e)),
        }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterOperands {
    degree: Option<u32>,
}

fn center(ctx: &Context, ops: CenterOperands) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    if let Some(lambda) = torus_lambda(s) {
        let basis = monomial_center_basis(lambda);
        return Ok(Report::new(
            Status::Value,
            json!({
                "rank": basis.len(),
                "monomial_basis": basis.iter().map(|e| ctx.monomial(e)).collect::<Vec<_>>(),
            }),
        ));
    }
    if !s.is_polynomial() {
        return not_applicable(format!(
            "no center computation for the {} structure",
            s.kind()
        ));
    }
    let degree = ops.degree.unwrap_or(ctx.cfg.degree_bound);
    let basis = truncated_center(s, degree, EXEC)?;
    Ok(Report::new(
        Status::Value,
        json!({
            "degree": degree,
            "dimension": basis.len(),
            "basis": basis.iter().map(|p| ctx.render(p)).collect::<Vec<_>>(),
        }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismOperands {
    images: Vec<String>,
    #[serde(default)]
    target: Option<StructureDescriptor>,
}

fn morphism_check(ctx: &Context, ops: MorphismOperands) -> Result<Report, CliError> {
    let src = ctx.structure()?;
    let tgt = match &ops.target {
        Some(t) => t.build(&ctx.order)?,
        None => src.clone(),
    };
    let vars = tgt.var_context();
    let images = ops
        .images
        .iter()
        .enumerate()
        .map(|(k, img)| parse_in(&vars, &format!("images[{k}]"), img))
        .collect::<Result<Vec<_>, _>>()?;
    let map = PolyMap::new(images)?;
    let tctx = Context {
        structure: Some(tgt.clone()),
        cfg: ctx.cfg,
        order: ctx.order.clone(),
    };
    Ok(match check_poisson_morphism(src, &tgt, &map)? {
        MorphismCheck::Pass(ids) => Report::new(
            Status::Pass,
            json!({ "identities": ids.iter().map(|id| identity_json(&tctx, id)).collect::<Vec<_>>() }),
        ),
        MorphismCheck::Fail(id) => Report::new(
            Status::Fail,
            json!({ "failure": identity_json(&tctx, &id) }),
        ),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialImages {
    images: Vec<String>,
}

fn monomial_map(ctx: &Context, images: &[String]) -> Result<MonomialMap, CliError> {
    let mut columns = Vec::new();
    let mut coefficients = Vec::new();
    for (k, src) in images.iter().enumerate() {
        let p = ctx.parse(&format!("images[{k}]"), src)?;
        let (e, c) = p.as_unit_monomial().ok_or_else(|| {
            CliError::input(format!(
                "operands.images[{k}]: {src:?} is not a single monomial"
            ))
        })?;
        columns.push(e.as_slice().to_vec());
        coefficients.push(c.clone());
    }
    let b = IntMatrix::from_columns(&columns)?;
    Ok(MonomialMap::new(b, coefficients)?)
}

fn classify(ctx: &Context, ops: MonomialImages) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    let Some(lambda) = torus_lambda(s) else {
        return not_applicable("monomial endomorphisms are classified on tori only");
    };
    let map = monomial_map(ctx, &ops.images)?;
    let class = classify_torus_endo(lambda, &map)?;
    let mut payload = Map::new();
    payload.insert("class".into(), json!(class.name()));
    match &class {
        EndoClassification::NotPoisson { pair, lhs, rhs } => {
            payload.insert("pair".into(), json!([pair.0 + 1, pair.1 + 1]));
            payload.insert("lhs".into(), json!(ctx.render(lhs)));
            payload.insert("rhs".into(), json!(ctx.render(rhs)));
        }
        EndoClassification::NotInjective => {
            payload.insert("det".into(), json!(0));
        }
        EndoClassification::Automorphism { inverse } => {
            let imgs: Vec<String> = (0..inverse.n())
                .map(|i| ctx.render(&inverse.image(i)))
                .collect();
            payload.insert("inverse".into(), json!(imgs));
        }
        EndoClassification::InjectiveNotSurjective { index, missing } => {
            payload.insert("index".into(), int_value(index));
            payload.insert("missing".into(), json!(ctx.monomial(missing)));
        }
    }
    if let MorphismCheck::Pass(ids) = check_poisson_morphism(s, s, &map.to_poly_map())? {
        payload.insert(
            "identities".into(),
            json!(ids
                .iter()
                .map(|id| identity_json(ctx, id))
                .collect::<Vec<_>>()),
        );
    }
    Ok(Report::new(Status::Value, Value::Object(payload)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DixmierOperands {
    images: Option<Vec<String>>,
    bound: Option<i64>,
    presentation: Option<PresentationOperands>,
}

/// `g` row by row, `p` the positive scale factors.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationOperands {
    g: Vec<Vec<i64>>,
    p: Vec<i64>,
}

fn dixmier_assert(ctx: &Context, ops: DixmierOperands) -> Result<Report, CliError> {
    let Some(lambda) = torus_lambda(ctx.structure()?) else {
        return not_applicable("the Dixmier assertion concerns tori only");
    };
    match (&ops.images, ops.bound, &ops.presentation) {
        (None, None, Some(pres)) => {
            let g = IntMatrix::from_rows(&pres.g)?;
            let p: Vec<BigInt> = pres.p.iter().map(|&k| BigInt::from(k)).collect();
            match scaled_presentation_assert(lambda, &g, &p) {
                Ok(PresentationAssertion::Holds) => {
                    Ok(Report::new(Status::Pass, json!({ "p": pres.p })))
                }
                Ok(PresentationAssertion::NotApplicable { reason }) => not_applicable(reason),
                Err(Error::AssertionFailure(msg)) => {
                    Ok(Report::new(Status::Fail, json!({ "message": msg })))
                }
                Err(e) => Err(e.into()),
            }
        }
        (Some(images), None, None) => {
            let map = monomial_map(ctx, images)?;
            match simple_torus_dixmier_assert(lambda, map.exponents()) {
                Ok(DixmierAssertion::Holds { det }) => {
                    Ok(Report::new(Status::Pass, json!({ "det": int_value(&det) })))
                }
                Ok(DixmierAssertion::NotApplicable { reason }) => not_applicable(reason),
                Err(Error::AssertionFailure(msg)) => {
                    Ok(Report::new(Status::Fail, json!({ "message": msg })))
                }
                Err(e) => Err(e.into()),
            }
        }
        (None, Some(bound), None) => {
            if !is_poisson_simple_torus(lambda).simple {
                return not_applicable("torus is not Poisson simple");
            }
            if bound < 0 {
                return Err(CliError::input("operands.bound must be nonnegative"));
            }
            let n = lambda.n() as u32;
            let total = (2 * bound as u64 + 1).checked_pow(n * n);
            if total.is_none_or(|t| t > MAX_SEARCH) {
                return Err(CliError::input(format!(
                    "search over more than {MAX_SEARCH} matrices"
                )));
            }
            let r = exhaustive_dixmier_search(lambda, bound, EXEC)?;
            let failures: Vec<Vec<Vec<Value>>> = r
                .failures
                .iter()
                .map(|m| {
                    m.to_rows()
                        .iter()
                        .map(|row| row.iter().map(int_value).collect())
                        .collect()
                })
                .collect();
            Ok(Report::new(
                verdict(failures.is_empty()),
                json!({
                    "bound": bound,
                    "examined": r.examined,
                    "compatible": r.compatible,
                    "failures": failures,
                }),
            ))
        }
        _ => Err(CliError::input(
            "operands: give exactly one of images, bound or presentation",
        )),
    }
}

fn potential_omega(s: &PoissonStructure) -> Option<&LaurentPoly> {
    match s {
        PoissonStructure::PotentialAffine(p) => Some(p.omega()),
        PoissonStructure::PotentialQuotient(q) => Some(q.potential().omega()),
        _ => None,
    }
}

fn singular(ctx: &Context, _: NoOperands) -> Result<Report, CliError> {
    let Some(omega) = potential_omega(ctx.structure()?) else {
        return not_applicable("isolated singularity is decided for potentials only");
    };
    let r = is_isolated_singularity_with(omega, &ctx.order)?;
    Ok(Report::new(
        verdict(r.isolated),
        json!({
            "isolated": r.isolated,
            "dimension": r.dimension,
            "order": ctx.order.name(),
        }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradingOperands {
    bound: Option<u32>,
}

fn grading(ctx: &Context, ops: GradingOperands) -> Result<Report, CliError> {
    let bound = ops.bound.unwrap_or(ctx.cfg.degree_bound);
    match bracket_degree_shift(ctx.structure()?, bound, EXEC) {
        Ok(r) => Ok(Report::new(
            Status::Value,
            json!({
                "bound": bound,
                "max_shift": r.max_shift,
                "homogeneous": r.homogeneous,
                "pairs": r.pairs,
            }),
        )),
        Err(Error::NotGraded(msg)) => not_applicable(msg),
        Err(e) => Err(e.into()),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValuationOperands {
    w: i64,
    weights: Option<Vec<i64>>,
}

fn valuation(ctx: &Context, ops: ValuationOperands) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    let nu = match ops.weights {
        Some(w) => WeightValuation::new(w),
        None => WeightValuation::negative_adams(s.arity()),
    };
    let r = check_w_valuation(&nu, s, ops.w, &ctx.cfg, EXEC)?;
    let mut payload = ctx.trial_fields();
    payload.insert("w".into(), json!(ops.w));
    payload.insert("weights".into(), json!(nu.weights));
    payload.insert("monomial_pairs".into(), json!(r.monomial_pairs));
    if let Some(f) = &r.failure {
        payload.insert(
            "failure".into(),
            json!({
                "axiom": f.axiom,
                "operands": f.operands.iter().map(|p| ctx.render(p)).collect::<Vec<_>>(),
                "left": valuation_value(f.left),
                "right": valuation_value(f.right),
            }),
        );
    }
    Ok(Report::new(verdict(r.passed()), Value::Object(payload)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdOperands {
    d: i64,
    zeta: Option<String>,
}

fn ad_closure(ctx: &Context, ops: AdOperands) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    if let Some(src) = &ops.zeta {
        let zeta = ctx.parse("zeta", src)?;
        let mut payload = Map::new();
        payload.insert("d".into(), json!(ops.d));
        payload.insert("zeta".into(), json!(ctx.render(&zeta)));
        return match construct_adzeta(s, ops.d, Some(&zeta)) {
            Ok(_) => Ok(Report::new(Status::Pass, Value::Object(payload))),
            Err(Error::ZetaSquareEscapes { degree, witness }) => {
                payload.insert("degree".into(), json!(degree));
                payload.insert("witness".into(), json!(witness));
                Ok(Report::new(Status::Fail, Value::Object(payload)))
            }
            Err(Error::DegreeViolation(msg)) => {
                Ok(Report::new(Status::Fail, Value::Object(payload)).with_diagnostic(msg))
            }
            Err(e) => Err(e.into()),
        };
    }
    let r = check_ad_closure(s, ops.d, &ctx.cfg, EXEC)?;
    let mut payload = ctx.trial_fields();
    payload.insert("d".into(), json!(ops.d));
    if let Some(cx) = &r.counterexample {
        payload.insert(
            "counterexample".into(),
            json!({
                "trial": cx.trial,
                "f": ctx.render(&cx.f),
                "g": ctx.render(&cx.g),
                "bracket": ctx.render(&cx.bracket),
                "degree": cx.degree,
            }),
        );
    }
    Ok(Report::new(verdict(r.passed()), Value::Object(payload)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosureOperands {
    seeds: Vec<String>,
    lower: Vec<i32>,
    upper: Vec<i32>,
    max_degree: Option<i64>,
    #[serde(default = "default_rounds")]
    max_rounds: usize,
}

fn default_rounds() -> usize {
    8
}

fn closure(ctx: &Context, ops: ClosureOperands) -> Result<Report, CliError> {
    let s = ctx.structure()?;
    let seeds = ops
        .seeds
        .iter()
        .enumerate()
        .map(|(k, src)| ctx.parse(&format!("seeds[{k}]"), src))
        .collect::<Result<Vec<_>, _>>()?;
    let mut bounds = ExponentBox::new(ops.lower, ops.upper)?;
    if let Some(d) = ops.max_degree {
        bounds = bounds.with_max_degree(d);
    }
    let r = bounded_poisson_closure(s, &seeds, &bounds, ops.max_rounds, EXEC)?;
    let mut report = Report::new(
        Status::Value,
        json!({
            "dimension": r.dimension(),
            "rounds": r.rounds,
            "fixpoint": r.fixpoint,
            "basis": r.basis.iter().map(|p| ctx.render(p)).collect::<Vec<_>>(),
        }),
    );
    if !r.fixpoint {
        report = report.with_diagnostic("round limit reached before a fixpoint");
    }
    Ok(report)
}

fn gr_check(ctx: &Context, _: NoOperands) -> Result<Report, CliError> {
    let PoissonStructure::PotentialQuotient(q) = ctx.structure()? else {
        return not_applicable("the associated graded check applies to potential quotients");
    };
    let r =
        associated_graded_bracket_check(q.potential().omega(), q.xi(), q.order(), &ctx.cfg, EXEC)?;
    let mut payload = ctx.trial_fields();
    payload.insert("degree_drops".into(), json!(r.degree_drops));
    if let Some(cx) = &r.counterexample {
        payload.insert(
            "counterexample".into(),
            json!({
                "trial": cx.trial,
                "f": ctx.render(&cx.f),
                "g": ctx.render(&cx.g),
                "quotient_top": ctx.render(&cx.quotient_top),
                "graded": ctx.render(&cx.graded),
            }),
        );
    }
    Ok(Report::new(verdict(r.passed()), Value::Object(payload)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutBoundOperands {
    d: Option<i64>,
}

fn aut_bound_cmd(ctx: &Context, ops: AutBoundOperands) -> Result<Report, CliError> {
    let d = match (ops.d, ctx.structure.as_ref().and_then(potential_omega)) {
        (Some(d), _) => d,
        (None, Some(omega)) => omega.max_degree().unwrap_or(0),
        (None, None) => {
            return Err(CliError::input(
                "operands.d is required without a potential structure",
            ))
        }
    };
    let value = aut_bound(d)?;
    Ok(Report::new(
        Status::Value,
        json!({ "d": d, "value": int_value(&value) }),
    ))
}
