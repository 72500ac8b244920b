//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use poisson_forge::analysis::{
    central_monomials_in_box, is_poisson_simple_torus, satisfies_centrality_equations,
};
use poisson_forge::bracket::{
    verify_poisson_axioms, PoissonStructure, SkewParamMatrix, TrialConfig,
};
use poisson_forge::graded::{
    associated_graded_bracket_check, bracket_degree_shift, check_ad_closure, check_w_valuation,
    construct_adzeta, WeightValuation,
};
use poisson_forge::groebner::{is_isolated_singularity, MonomialOrder};
use poisson_forge::lattice::IntMatrix;
use poisson_forge::morphism::{
    aut_bound, check_poisson_morphism, classify_torus_endo, exhaustive_dixmier_search,
    injectivity_certificate, monomial_compat, simple_torus_dixmier_assert, EndoClassification,
    Injectivity, MonomialMap, MorphismCheck, PolyMap,
};
use poisson_forge::poly::{
    monomials_of_degree, render_latex, ExponentVector, LaurentPoly, Scalar, VarContext,
};
use poisson_forge::random::trial_rng;
use poisson_forge::{Error, Exec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: poisson_forge::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn xyz(src: &str) -> LaurentPoly {
    VarContext::named(&["x", "y", "z"]).parse(src).unwrap()
}

fn rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn all_ones(n: usize) -> SkewParamMatrix {
    SkewParamMatrix::from_upper(n, |_, _| Scalar::one())
}

fn int_skew(rows: &[Vec<i64>]) -> SkewParamMatrix {
    SkewParamMatrix::from_int(&IntMatrix::from_rows(rows).unwrap()).unwrap()
}

/// Cofactor expansion over `i64`, independent of the library's lattice code.
fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i64(&minor)
        })
        .sum()
}

fn mul2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn sl2_word(rng: &mut impl Rng) -> [[i64; 2]; 2] {
    let (u, l) = ([[1, 1], [0, 1]], [[1, 0], [1, 1]]);
    let len = rng.gen_range(0..=6);
    (0..len).fold([[1, 0], [0, 1]], |acc, _| {
        mul2(acc, if rng.gen_bool(0.5) { u } else { l })
    })
}

fn to_matrix(m: [[i64; 2]; 2]) -> IntMatrix {
    IntMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]).unwrap()
}

fn monomial_endomorphism_of_all_ones_torus() -> Outcome {
    let lambda = all_ones(3);
    let b = IntMatrix::from_columns(&[vec![3, -2, 2], vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
    let map = lib(MonomialMap::from_exponents(b))?;
    let s = lib(PoissonStructure::torus(lambda.clone()))?;
    let MorphismCheck::Pass(ids) = lib(check_poisson_morphism(&s, &s, &map.to_poly_map()))? else {
        return Err("map is not Poisson".into());
    };
    let names = s.var_names();
    let rendered: Vec<String> = ids
        .iter()
        .flat_map(|id| [render_latex(&id.lhs, &names), render_latex(&id.rhs, &names)])
        .collect();
    check(rendered.iter().any(|r| r == "x_1^4 x_2^{-2} x_3^3"), || {
        format!("identities {rendered:?}")
    })?;
    match lib(classify_torus_endo(&lambda, &map))? {
        EndoClassification::InjectiveNotSurjective { index, missing } => {
            check(index == BigInt::from(2), || format!("index {index}"))?;
            check(missing == ExponentVector::unit(3, 1), || {
                format!("missing {missing:?}")
            })?;
        }
        other => return Err(format!("classified as {}", other.name())),
    }
    let lines: Vec<String> = ids
        .iter()
        .map(|id| {
            format!(
                "{{x{},x{}}}: {}",
                id.i + 1,
                id.j + 1,
                render_latex(&id.lhs, &names)
            )
        })
        .collect();
    Ok(format!(
        "injective_not_surjective, index 2, missing x2; {}",
        lines.join("; ")
    ))
}

fn plane_torus_automorphisms() -> Outcome {
    let lambda = all_ones(2);
    let mut rng = trial_rng(2024, 0);
    for k in 0..200 {
        let m = sl2_word(&mut rng);
        check(m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1, || {
            format!("word {k} left SL2")
        })?;
        let coefficients = vec![
            rat(rng.gen_range(1..4)),
            BigRational::new(BigInt::from(-1), BigInt::from(rng.gen_range(1..4))),
        ];
        let map = lib(MonomialMap::new(to_matrix(m), coefficients))?;
        let EndoClassification::Automorphism { inverse } = lib(classify_torus_endo(&lambda, &map))?
        else {
            return Err(format!("{m:?} not classified as an automorphism"));
        };
        let (fwd, back) = (map.to_poly_map(), inverse.to_poly_map());
        check(lib(fwd.compose(&back))? == PolyMap::identity(2), || {
            format!("{m:?}: map∘inverse ≠ id")
        })?;
    }
    let mut rng = trial_rng(2024, 1);
    for k in 0..200 {
        let m = mul2(
            mul2(sl2_word(&mut rng), [[2, 0], [0, 1]]),
            sl2_word(&mut rng),
        );
        check(m[0][0] * m[1][1] - m[0][1] * m[1][0] == 2, || {
            format!("det-2 sample {k} has wrong determinant")
        })?;
        check(
            lib(monomial_compat(&lambda, &to_matrix(m)))?.is_some(),
            || format!("{m:?} passed compatibility"),
        )?;
    }
    Ok(
        "200 SL2 words are automorphisms with exact inverses; 200 det-2 matrices incompatible"
            .into(),
    )
}

fn random_skew(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let upper: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j > i { rng.gen_range(-2..=2) } else { 0 })
                .collect()
        })
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| upper[i][j] - upper[j][i]).collect())
        .collect()
}

fn simplicity_cross_validation() -> Outcome {
    let mut rng = trial_rng(7, 0);
    let (mut simple_count, mut stacked) = (0, 0);
    for k in 0..500 {
        let n = if k % 2 == 0 { 3 } else { 4 };
        let m1 = random_skew(&mut rng, n);
        let family = k % 3;
        let lambda = match family {
            0 => int_skew(&m1),
            1 => SkewParamMatrix::from_upper(n, |i, j| {
                Scalar::param("q").mul_rational(&rat(m1[i][j]))
            }),
            _ => {
                let m2 = random_skew(&mut rng, n);
                SkewParamMatrix::from_upper(n, |i, j| {
                    Scalar::param("q")
                        .mul_rational(&rat(m1[i][j]))
                        .add(&Scalar::param("p").mul_rational(&rat(m2[i][j])))
                })
            }
        };
        let report = is_poisson_simple_torus(&lambda);
        if family < 2 {
            let det_says = det_i64(&m1) != 0;
            check(report.simple == det_says, || {
                format!("instance {k}: verdict {} vs det {det_says}", report.simple)
            })?;
        } else {
            stacked += 1;
        }
        let central = central_monomials_in_box(&lambda, 3, Exec::Parallel);
        if report.simple {
            simple_count += 1;
            check(central.is_empty(), || {
                format!("instance {k}: simple but x^{:?} is central", central[0])
            })?;
        } else {
            let w = report
                .witness
                .clone()
                .ok_or(format!("instance {k}: no witness"))?;
            check(
                !w.is_zero() && satisfies_centrality_equations(&lambda, &w),
                || format!("instance {k}: bad witness"),
            )?;
            // independent evaluation of Σ_i a_i λ_ij on each column
            let ok = (0..n).all(|j| {
                (0..n)
                    .fold(Scalar::zero(), |acc, i| {
                        acc.add(&lambda.get(i, j).mul_rational(&rat(w.get(i) as i64)))
                    })
                    .is_zero()
            });
            check(ok, || {
                format!("instance {k}: witness fails a centrality equation")
            })?;
        }
    }
    Ok(format!("500 instances ({simple_count} simple, {stacked} two-parameter) agree with det and box search"))
}

fn random_quartic(seed: u64) -> LaurentPoly {
    let mut rng = trial_rng(seed, 0);
    let terms: Vec<_> = monomials_of_degree(3, 4)
        .into_iter()
        .map(|e| (e, Scalar::from(rng.gen_range(-3i64..=3))))
        .collect();
    LaurentPoly::from_terms(3, terms).unwrap()
}

fn axiom_suite() -> Outcome {
    let mut rng = trial_rng(11, 0);
    let upper: Vec<Scalar> = (0..3)
        .map(|_| Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        .collect();
    let random3 = SkewParamMatrix::from_upper(3, |i, j| upper[i + j - 1].clone());
    let structures: Vec<(&str, PoissonStructure)> = vec![
        (
            "torus all-ones",
            PoissonStructure::torus(all_ones(3)).unwrap(),
        ),
        ("torus random", PoissonStructure::torus(random3).unwrap()),
        (
            "skew-poly",
            PoissonStructure::skew_poly(all_ones(3)).unwrap(),
        ),
        (
            "potential cubic",
            PoissonStructure::potential(xyz("x^3 + y^3 + z^3")).unwrap(),
        ),
        (
            "potential quintic",
            PoissonStructure::potential(xyz("x^5 + y^5 + z^5")).unwrap(),
        ),
        (
            "potential random quartic",
            PoissonStructure::potential(random_quartic(5)).unwrap(),
        ),
        ("weyl 2", PoissonStructure::weyl(2).unwrap()),
        (
            "weyl 1 ⊗ torus 2",
            PoissonStructure::tensor(vec![
                PoissonStructure::weyl(1).unwrap(),
                PoissonStructure::torus(all_ones(2)).unwrap(),
            ])
            .unwrap(),
        ),
        (
            "quintic quotient xi=1",
            PoissonStructure::potential_quotient(
                xyz("x^5 + y^5 + z^5"),
                rat(1),
                MonomialOrder::grevlex(),
            )
            .unwrap(),
        ),
    ];
    let cfg = TrialConfig {
        degree_bound: 4,
        trials: 100,
        seed: 0,
    };
    for (name, s) in &structures {
        let r = lib(verify_poisson_axioms(s, &cfg, Exec::Parallel))?;
        if let Some(cx) = r.counterexample {
            return Err(format!("{name}: {} fails at trial {}", cx.axiom, cx.trial));
        }
    }
    Ok(format!(
        "{} structures x 100 trials, degree bound 4",
        structures.len()
    ))
}

fn weyl_laurent_bracket() -> Outcome {
    let laurent = lib(PoissonStructure::weyl_laurent_x(1))?;
    let ctx = laurent.var_context();
    let (f, g) = (ctx.parse("x^2").unwrap(), ctx.parse("1/2*x^-1*y").unwrap());
    let b = lib(laurent.bracket(&f, &g))?;
    check(b.is_one(), || format!("bracket is {}", ctx.render(&b)))?;
    let map = lib(PolyMap::new(vec![f, g]))?;
    let w = lib(PoissonStructure::weyl(1))?;
    check(
        lib(check_poisson_morphism(&w, &laurent, &map))?.passed(),
        || "map is not Poisson".into(),
    )?;
    match lib(injectivity_certificate(&map))? {
        Injectivity::Certified { jacobian } if jacobian.is_one() => {
            Ok("bracket = 1, Jacobian = 1, certified".into())
        }
        other => Err(format!("certificate {other:?}")),
    }
}

fn isolated_singularities() -> Outcome {
    let expect = |src: &str, isolated: bool, dim: Option<u64>| -> Result<(), String> {
        let r = lib(is_isolated_singularity(&xyz(src)))?;
        check(r.isolated == isolated && r.dimension == dim, || {
            format!("{src}: {:?} {:?}", r.isolated, r.dimension)
        })
    };
    expect("x^5 + y^5 + z^5", true, Some(64))?;
    expect("x^2*y", false, None)?;
    expect("x^4 + y^4 + z^4", true, Some(27))?;
    let mut isolated = 0;
    for seed in 0..10 {
        let mut rng = trial_rng(99, seed);
        let terms: Vec<_> = monomials_of_degree(3, 5)
            .into_iter()
            .map(|e| (e, Scalar::from(rng.gen_range(-3i64..=3))))
            .collect();
        let omega = LaurentPoly::from_terms(3, terms).unwrap();
        let r = lib(is_isolated_singularity(&omega))?;
        if r.isolated {
            check(r.dimension == Some(64), || {
                format!("generic quintic {seed} has dimension {:?}", r.dimension)
            })?;
            isolated += 1;
        }
    }
    check(isolated >= 9, || {
        format!("only {isolated}/10 random quintics isolated")
    })?;
    Ok(format!(
        "64, non-isolated, 27; {isolated}/10 random quintics isolated"
    ))
}

fn grading_and_valuation() -> Outcome {
    let nu = WeightValuation::negative_adams(3);
    let cfg = TrialConfig {
        degree_bound: 3,
        trials: 100,
        seed: 0,
    };
    for d in 3..=6i64 {
        let s = lib(PoissonStructure::potential(xyz(&format!(
            "x^{d} + y^{d} + z^{d}"
        ))))?;
        let shift = lib(bracket_degree_shift(&s, 2, Exec::Parallel))?;
        check(shift.max_shift == Some(d - 3) && shift.homogeneous, || {
            format!("deg {d}: shift {shift:?}")
        })?;
        let pass = lib(check_w_valuation(&nu, &s, d - 3, &cfg, Exec::Parallel))?;
        check(pass.passed(), || {
            format!("deg {d}: fails at w = d − 3: {:?}", pass.failure)
        })?;
        let fail = lib(check_w_valuation(&nu, &s, d - 4, &cfg, Exec::Parallel))?;
        let f = fail
            .failure
            .ok_or(format!("deg {d}: passes at w = d − 4"))?;
        check(
            f.axiom == 5 && f.operands == vec![xyz("x"), xyz("y")],
            || format!("deg {d}: witness {f:?}"),
        )?;
    }
    Ok("shift = deg − 3 and axiom (5) fails at (x, y) for degrees 3..6".into())
}

fn associated_graded() -> Outcome {
    let cfg = TrialConfig {
        degree_bound: 6,
        trials: 100,
        seed: 0,
    };
    let mut drops = Vec::new();
    for xi in [1, 0] {
        let r = lib(associated_graded_bracket_check(
            &xyz("x^5 + y^5 + z^5"),
            &rat(xi),
            &MonomialOrder::grevlex(),
            &cfg,
            Exec::Parallel,
        ))?;
        check(r.passed(), || format!("xi = {xi}: {:?}", r.counterexample))?;
        drops.push(r.degree_drops);
    }
    Ok(format!(
        "xi = 1 and xi = 0 pass 100 trials ({drops:?} vanishing top forms)"
    ))
}

fn zeta(d: i64) -> LaurentPoly {
    xyz(&format!(
        "x^{} + y^{} + y^{} + z^{} + z^{} + x^{} + x^{} + y^{}",
        d - 1,
        d - 1,
        d - 2,
        d - 2,
        d - 3,
        d - 3,
        d - 4,
        d - 4
    ))
}

fn cofinite_subalgebras() -> Outcome {
    let cfg = TrialConfig {
        degree_bound: 6,
        trials: 100,
        seed: 0,
    };
    for s in [
        PoissonStructure::weyl(1).unwrap(),
        PoissonStructure::skew_poly(all_ones(3)).unwrap(),
    ] {
        for d in 2..=4 {
            let r = lib(check_ad_closure(&s, d, &cfg, Exec::Parallel))?;
            check(r.passed(), || {
                format!("{} d = {d}: {:?}", s.kind(), r.counterexample)
            })?;
        }
    }
    let s = lib(PoissonStructure::potential(xyz("x^5 + y^5 + z^5")))?;
    for d in 8..=10 {
        lib(construct_adzeta(&s, d, Some(&zeta(d))))?;
    }
    match construct_adzeta(&s, 7, Some(&zeta(7))) {
        Err(Error::ZetaSquareEscapes { degree: 6, witness }) => Ok(format!(
            "closure holds; zeta accepted for d = 8..10; d = 7 rejected by {witness}"
        )),
        other => Err(format!("d = 7: {other:?}")),
    }
}

fn dixmier_on_simple_plane_torus() -> Outcome {
    let lambda = all_ones(2);
    let r = lib(exhaustive_dixmier_search(&lambda, 2, Exec::Parallel))?;
    // oracle: for λ12 = 1 compatibility reads det B = 1
    let mut det_one = 0;
    let mut failures = 0;
    for k in 0..625usize {
        let e: Vec<i64> = (0..4)
            .map(|i| ((k / 5usize.pow(i)) % 5) as i64 - 2)
            .collect();
        let m = vec![vec![e[0], e[1]], vec![e[2], e[3]]];
        let det = det_i64(&m);
        det_one += (det == 1) as usize;
        if let Err(Error::AssertionFailure(_)) =
            simple_torus_dixmier_assert(&lambda, &IntMatrix::from_rows(&m).unwrap())
        {
            failures += 1;
        }
    }
    check(
        r.examined == 625 && r.failures.is_empty() && failures == 0,
        || format!("{r:?}"),
    )?;
    check(r.compatible == det_one, || {
        format!("{} compatible, oracle {det_one}", r.compatible)
    })?;
    Ok(format!(
        "625 matrices, {det_one} compatible, all unimodular, 0 assertion failures"
    ))
}

fn automorphism_bounds() -> Outcome {
    let (a, b) = (lib(aut_bound(5))?, lib(aut_bound(6))?);
    check(a == BigInt::from(840) && b == BigInt::from(2268), || {
        format!("{a}, {b}")
    })?;
    Ok("840, 2268".into())
}

fn cli_determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let codes: BTreeMap<String, i32> =
        serde_json::from_str(&fs::read_to_string(dir.join("exit_codes.json")).unwrap()).unwrap();
    let mut commands = std::collections::BTreeSet::new();
    let mut count = 0;
    for entry in fs::read_dir(dir.join("fixtures")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        if codes.get(&name) != Some(&2) {
            commands.insert(v["command"].as_str().unwrap_or_default().to_string());
        }
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_poisson-forge"))
                .arg(&path)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        check(a.stdout == b.stdout && a.stderr == b.stderr, || {
            format!("{name}: output differs between runs")
        })?;
        let code = a.status.code().unwrap_or(-1);
        check(Some(&code) == codes.get(&name), || {
            format!("{name}: exit {code}, expected {:?}", codes.get(&name))
        })?;
        count += 1;
    }
    check(count >= 25 && commands.len() >= 13, || {
        format!("{count} fixtures, {} commands", commands.len())
    })?;
    Ok(format!(
        "{count} fixtures over {} commands, byte-identical, exit codes honored",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "monomial endomorphism of the all-ones torus",
            monomial_endomorphism_of_all_ones_torus,
        ),
        (
            "plane torus automorphisms and det-2 maps",
            plane_torus_automorphisms,
        ),
        (
            "torus simplicity cross-validation",
            simplicity_cross_validation,
        ),
        ("bracket axiom suite", axiom_suite),
        ("Laurent Weyl bracket and injectivity", weyl_laurent_bracket),
        ("isolated singularities", isolated_singularities),
        ("grading and valuation shift", grading_and_valuation),
        ("associated graded of quintic quotients", associated_graded),
        (
            "cofinite subalgebras A(d) and A(d, zeta)",
            cofinite_subalgebras,
        ),
        (
            "unimodularity on the simple plane torus",
            dixmier_on_simple_plane_torus,
        ),
        ("automorphism group bounds", automorphism_bounds),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
