//! Expressions in nested hypergeometric products: parsing, normal form,
//! printing and a literal sequence oracle.

mod ast;
mod normalize;
mod parse;
mod raw;

pub use ast::{NestedProd, ProdExprAst, Term};
#[allow(unused_imports)]
pub(crate) use ast::{power_text, var_name};
pub use raw::{is_pole, Oracle, ProdNode, Raw};

use crate::error::Result;

/// A parsed input: the tree as written (for the oracle) and its normal form.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub raw: Raw,
    pub ast: ProdExprAst,
}

pub fn parse(text: &str) -> Result<Parsed> {
    let raw = parse::parse_raw(text)?;
    let ast = normalize::normalize(&raw)?;
    Ok(Parsed { raw, ast })
}

pub fn parse_raw(text: &str) -> Result<Raw> {
    parse::parse_raw(text)
}
