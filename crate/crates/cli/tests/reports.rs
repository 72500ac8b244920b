use poisson_forge::poly::VarContext;
use poisson_forge_cli::{parse_descriptor, run_str, Options, Status};
use serde_json::Value;

fn run(src: &str) -> (Value, i32) {
    let out = run_str(src, &Options::default());
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

#[test]
fn classify_reports_index_and_missing_generator() {
    let (v, code) = run(r#"{"command":"classify",
        "structure":{"kind":"torus","n":3,"lambda":[[0,1,1],[-1,0,1],[-1,-1,0]]},
        "operands":{"images":["x1^3*x2^-2*x3^2","x1*x3","x3"]}}"#);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "value");
    assert_eq!(v["payload"]["class"], "injective_not_surjective");
    assert_eq!(v["payload"]["index"], 2);
    assert_eq!(v["payload"]["missing"], "x2");
    assert_eq!(
        v["payload"]["identities"][0]["lhs_latex"],
        "x_1^4 x_2^{-2} x_3^3"
    );
}

#[test]
fn singular_and_aut_bound_values() {
    let (v, code) =
        run(r#"{"command":"singular","structure":{"kind":"potential","omega":"x^5+y^5+z^5"}}"#);
    assert_eq!(
        (
            code,
            v["payload"]["isolated"].as_bool(),
            v["payload"]["dimension"].as_u64()
        ),
        (0, Some(true), Some(64))
    );
    let (v, _) = run(r#"{"command":"aut-bound","operands":{"d":5}}"#);
    assert_eq!(v["payload"]["value"], 840);
}

#[test]
fn structure_schema() {
    let ok = r#"{"command":"simple","structure":{"kind":"torus","n":3,"lambda":[[0,1,1],[-1,0,1],[-1,-1,0]]}}"#;
    assert!(parse_descriptor(ok).is_ok());
    let bad_kind = r#"{"command":"simple","structure":{"kind":"sphere","n":2}}"#;
    assert!(parse_descriptor(bad_kind).is_err());
    let extra = r#"{"command":"simple","structure":{"kind":"weyl","n":1,"colour":"red"}}"#;
    assert!(parse_descriptor(extra).is_err());
    let nested = r#"{"command":"singular","structure":{"kind":"potential","omega":"x^3"},"options":{"seed":"one"}}"#;
    let err = parse_descriptor(nested).unwrap_err();
    assert!(err.message.contains("options.seed"), "{}", err.message);
    let out = run_str(
        r#"{"command":"closure","structure":{"kind":"weyl","n":1},"operands":{"seeds":["x"],"lower":[0,0],"upper":[1]}}"#,
        &Options::default(),
    );
    assert_eq!(out.code, 2);
    let out = run_str(
        r#"{"command":"singular","structure":{"kind":"potential","omega":"x^3"},"operands":{"x":1}}"#,
        &Options::default(),
    );
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("operands"), "{}", out.stderr);
}

#[test]
fn parametric_entries() {
    let (v, code) = run(r#"{"command":"bracket",
        "structure":{"kind":"torus","n":2,"lambda":[[0,"2*q - 1/3"],["-2*q + 1/3",0]],"params":["q"]},
        "operands":{"f":"x1^2","g":"x2"}}"#);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["bracket"], "(-2/3 + 4*q)*x1^2*x2");
}

#[test]
fn polynomial_payloads_reparse() {
    let cases = [
        (
            r#"{"kind":"potential","omega":"x^4 + x*y^2*z + z^4"}"#,
            "x^2*y - 3/2*z",
            "y*z^-0 + 7",
        ),
        (r#"{"kind":"weyl","n":2}"#, "x1^2*y2 - y1", "1/5*x2*y1^3"),
        (
            r#"{"kind":"torus","n":3,"lambda":[[0,1,-2],[-1,0,3],[2,-3,0]]}"#,
            "x1^-2*x3 + x2",
            "3*x1*x2^-1",
        ),
    ];
    for (structure, f, g) in cases {
        let src = format!(
            r#"{{"command":"bracket","structure":{structure},"operands":{{"f":"{f}","g":"{g}"}}}}"#
        );
        let (v, _) = run(&src);
        let d = parse_descriptor(&src).unwrap();
        let s = d
            .structure
            .unwrap()
            .build(&poisson_forge::groebner::MonomialOrder::grevlex())
            .unwrap();
        let ctx: VarContext = s.var_context();
        for key in ["f", "g", "bracket"] {
            let text = v["payload"][key].as_str().unwrap();
            let p = ctx.parse(text).unwrap();
            assert_eq!(ctx.render(&p), text);
        }
    }
}

#[test]
fn status_serializes_in_kebab_case() {
    assert_eq!(
        serde_json::to_string(&Status::NotApplicable).unwrap(),
        "\"not-applicable\""
    );
}
