//! Text and JSON rendering of reduction results.

use prodring_core::pipeline::{OutTerm, RpeResult};
use prodring_core::{CycNum, RatFun};
use serde::Serialize;
use std::collections::BTreeMap;

pub fn num_text(c: &CycNum) -> String {
    RatFun::constant(c.clone()).to_text("n", false)
}

#[derive(Serialize)]
struct JsonProduct {
    id: String,
    depth: usize,
    lower: i64,
    base: String,
}

#[derive(Serialize)]
struct JsonTerm {
    coeff: String,
    exponents: BTreeMap<String, i64>,
}

#[derive(Serialize)]
struct JsonResult {
    delta: i64,
    field_conductor: u64,
    zeta_order: u64,
    products: Vec<JsonProduct>,
    expression: Vec<JsonTerm>,
}

fn term_exponents(r: &RpeResult, t: &OutTerm) -> BTreeMap<String, i64> {
    let mut m: BTreeMap<String, i64> = t.exps.iter().map(|&(i, e)| (r.products[i].id.clone(), e)).collect();
    if t.zeta != 0 {
        m.insert("zeta".into(), t.zeta);
    }
    m
}

pub fn reduce_json(r: &RpeResult) -> String {
    let j = JsonResult {
        delta: r.delta,
        field_conductor: r.field.conductor(),
        zeta_order: r.zeta_order,
        products: r
            .products
            .iter()
            .map(|p| JsonProduct { id: p.id.clone(), depth: p.depth, lower: p.lower, base: p.base.to_text("x", false) })
            .collect(),
        expression: r
            .terms
            .iter()
            .map(|t| JsonTerm { coeff: t.coeff.to_text("n", false), exponents: term_exponents(r, t) })
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

/// One term with product names, `Z` standing for `zeta^n`.
fn short_term(r: &RpeResult, t: &OutTerm) -> String {
    let mut parts = Vec::new();
    if !t.coeff.is_one() || (t.zeta == 0 && t.exps.is_empty()) {
        parts.push(t.coeff.to_text("n", true));
    }
    if t.zeta != 0 {
        parts.push(if t.zeta == 1 { "Z".into() } else { format!("Z^{}", t.zeta) });
    }
    for &(i, e) in &t.exps {
        let id = &r.products[i].id;
        parts.push(if e == 1 { id.clone() } else if e < 0 { format!("{id}^({e})") } else { format!("{id}^{e}") });
    }
    parts.join("*")
}

pub fn reduce_text(r: &RpeResult, checked: usize) -> String {
    let mut out = Vec::new();
    out.push(format!("valid for n >= {}, constants in Q(zeta_{})", r.delta, r.field.conductor()));
    if r.zeta_order > 0 {
        out.push(format!("  Z  = zeta({})^n", r.zeta_order));
    }
    for p in &r.products {
        out.push(format!("  {} = {}", p.id, p.prod.to_text("n")));
    }
    let body = if r.terms.is_empty() {
        "0".to_string()
    } else {
        r.terms.iter().map(|t| short_term(r, t)).collect::<Vec<_>>().join(" + ")
    };
    out.push(format!("A(n) = {body}"));
    out.push(String::new());
    out.push(r.to_text());
    out.push(String::new());
    out.push(format!("oracle check passed for n = {}..{}", r.delta, r.delta + checked as i64 - 1));
    out.join("\n")
}
