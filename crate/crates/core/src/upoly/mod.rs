//! Univariate polynomials and rational functions over `Q(zeta_N)`.

mod factor;
mod modp;
mod poly;
mod ratfun;
mod roots;

pub use factor::{factor_poly, factor_rational, factorize, squarefree, Factorization};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use roots::{integer_roots, resultant, resultant_shift, z_function};

use core::cmp::Ordering;

/// Canonical order on polynomials: degree first, then coefficients.
pub fn canonical_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.cmp(b))
}
