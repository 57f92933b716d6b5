use prodring_core::expr::NestedProd;
use prodring_core::{parse, Raw};
use std::process::{Command, Output};

const RATE: &str = "Prod(k,1,n-1, 1/36 * Prod(i,1,k-1,(i+1)*(i+2)/(4*(2*i+3)^2))) * 1/2";
const RUNNING: &str = "Prod(k,1,n, (24*k+1)/(-sqrt(3)) * Prod(j,3,k, (-2*(j^3-3*j+2))/(5*(j^2-j-2))))";

fn prodring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodring")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_alternating_sign() {
    let o = prodring(&["eval", "--from", "0", "--to", "5", "Prod(k,1,n,-1)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).split_whitespace().collect::<Vec<_>>(), ["1", "-1", "1", "-1", "1", "-1"]);
}

#[test]
fn eval_marks_poles() {
    let o = prodring(&["eval", "--from", "1", "--to", "3", "1/(n-2)"]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["-1", "pole", "1"]);
}

#[test]
fn zerotest_identical_products() {
    let o = prodring(&["zerotest", "(Prod(k,1,n,2)) - (Prod(k,1,n,2))"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "ZERO for all n >= 0");
    let o = prodring(&["zerotest", "Prod(k,1,n,2) - Prod(k,1,n,3)"]);
    assert!(stdout(&o).starts_with("NONZERO"));
}

#[test]
fn reduce_prints_a_reparsable_expression() {
    let o = prodring(&["reduce", RATE]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("oracle check passed"));
    let expr = out.lines().find(|l| l.starts_with("((") || l.starts_with("Prod")).unwrap();
    let back = parse(expr).unwrap();
    let input = parse(RATE).unwrap();
    for n in 1..15 {
        assert_eq!(input.raw.eval(n).unwrap(), back.raw.eval(n).unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(prodring(&["reduce", "Prod(k,1,n,"]).status.code(), Some(2));
    assert_eq!(prodring(&["reduce", "Prod(k,0,n,1/k)"]).status.code(), Some(2));
    assert_eq!(prodring(&["reduce", "Prod(k,1,n,(3+4*zeta(4))/5)"]).status.code(), Some(3));
    assert_ne!(prodring(&["reduce", "--precision", "32", "Prod(k,1,n,2)"]).status.code(), Some(0));
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("prodring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("a.txt");
    std::fs::write(&f, "Prod(k,1,n,-1)\n").unwrap();
    let o = prodring(&["eval", "--from", "1", "--to", "2", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).split_whitespace().collect::<Vec<_>>(), ["-1", "1"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

/// Rebuilds the expression text from the JSON schema alone.
fn from_json(v: &serde_json::Value) -> String {
    let zeta = v["zeta_order"].as_u64().unwrap();
    let mut prods = std::collections::BTreeMap::new();
    for p in v["products"].as_array().unwrap() {
        let depth = p["depth"].as_u64().unwrap() as usize;
        let lower = p["lower"].as_i64().unwrap();
        let base = parse(p["base"].as_str().unwrap().replace('x', "n").as_str()).unwrap().ast;
        let base = if base.terms.is_empty() { prodring_core::RatFun::zero() } else { base.terms[0].coeff.clone() };
        let np = NestedProd::factored(vec![lower; depth], base).unwrap();
        prods.insert(p["id"].as_str().unwrap().to_string(), np.to_text("n"));
    }
    if zeta > 0 {
        prods.insert("zeta".into(), format!("Prod(k,1,n,zeta({zeta}))"));
    }
    let terms: Vec<String> = v["expression"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let mut s = format!("({})", t["coeff"].as_str().unwrap());
            for (id, e) in t["exponents"].as_object().unwrap() {
                s.push_str(&format!("*({})^({})", prods[id], e.as_i64().unwrap()));
            }
            s
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[test]
fn json_reconstructs_an_equal_expression() {
    for input in [RATE, RUNNING, "sqrt(3)*Prod(k,1,n,-1) + 2*Prod(k,1,n,Prod(j,1,k,-1))"] {
        let o = prodring(&["reduce", "--json", input]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let delta = v["delta"].as_i64().unwrap();
        let rebuilt = from_json(&v);
        let diff = Raw::sub(parse(input).unwrap().raw, parse(&rebuilt).unwrap().raw);
        for n in delta..delta + 12 {
            assert!(diff.eval(n).unwrap().is_zero(), "{rebuilt} at {n}");
        }
    }
}

#[test]
fn indep_reports_consistency() {
    let o = prodring(&["indep", "--n-max", "20", "Prod(k,1,n,2)*Prod(k,1,n,k+1)"]);
    assert!(stdout(&o).starts_with("consistent with independence"));
}
