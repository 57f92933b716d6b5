//! Exact reduction of nested hypergeometric product expressions.
//!
//! Input expressions are sums of rational-function coefficients times
//! integer powers of nested products over `Q(zeta_N)(x)`.  The pipeline
//! rewrites them in terms of one root-of-unity power `zeta^n` and a set of
//! algebraically independent nested products, which makes zero recognition
//! a purely syntactic check.
//!
//! The crate is `no_std` (it needs `alloc`).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod expr;
pub mod georing;
pub mod hyperring;
pub mod lattice;
pub mod pipeline;
pub mod preprocess;
pub mod tower;
pub mod upoly;

pub use arith::{BigRat, CycField, CycNum};
pub use error::{Error, Result};




pub use expr::{parse, NestedProd, Parsed, ProdExprAst, Raw, Term};
pub use georing::GoOptions;
pub use pipeline::{reduce, zero_test, RpeResult};
pub use upoly::{Poly, RatFun};
