mod support;

use prodring_core::pipeline::{check_result, independence_report, structural_checks, Independence};
use prodring_core::{parse, reduce, zero_test, GoOptions, Raw};

#[test]
fn reductions_agree_with_literal_evaluation() {
    let opts = GoOptions::default();
    for text in support::golden() {
        let p = parse(&text).unwrap();
        let r = reduce(&p.ast, &opts).unwrap();
        assert_eq!(check_result(&p.raw, &r, 31).unwrap(), None, "{text}");
        structural_checks(&r, &opts).unwrap();
    }
}

#[test]
fn input_minus_its_reduction_is_zero() {
    let opts = GoOptions::default();
    for text in support::golden() {
        let p = parse(&text).unwrap();
        let r = reduce(&p.ast, &opts).unwrap();
        let diff = format!("{text} - ({})", r.to_text());
        let d = parse(&diff).unwrap();
        assert_eq!(zero_test(&d.ast, &opts).unwrap(), Some(r.delta), "{diff}");
        let raw = Raw::sub(p.raw.clone(), parse(&r.to_text()).unwrap().raw);
        for n in r.delta..r.delta + 10 {
            assert!(raw.eval(n).unwrap().is_zero());
        }
    }
}

#[test]
fn distinct_geometric_products_are_not_zero() {
    let p = parse("Prod(k,1,n,2) - Prod(k,1,n,3)").unwrap();
    assert_eq!(zero_test(&p.ast, &GoOptions::default()).unwrap(), None);
}

#[test]
fn output_products_have_no_small_relation() {
    let p = parse(support::RUNNING).unwrap();
    let r = reduce(&p.ast, &GoOptions::default()).unwrap();
    assert!(matches!(independence_report(&r, 24, 2), Independence::Consistent { products: 8, .. }));
}
