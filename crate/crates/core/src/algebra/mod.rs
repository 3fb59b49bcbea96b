//! Exact arithmetic: multi-indices, rationals, sparse polynomials and
//! truncated multivariate power series.

mod index;
pub mod linalg;
mod poly;
mod rational;
mod series;

pub use index::{binomial, factorial, falling, MultiIndex};
pub use poly::{Degree, JsonTerm, MPoly};
pub use rational::{format_rational, frac, from_bigint, int, parse_rational, pow as rational_pow, Rational};
pub use series::{exponential_coefficients, SeriesSystem, TruncatedSeries};

use crate::error::Result;

/// `p(x + v)`.
pub fn mpoly_translate(p: &MPoly, v: &[Rational]) -> Result<MPoly> {
    p.translate(v)
}

/// Exact value of `p` at `v`.
pub fn mpoly_eval(p: &MPoly, v: &[Rational]) -> Result<Rational> {
    p.eval(v)
}

/// `r` with `p = q·r`, or `NonExactDivision`.
pub fn mpoly_exact_divide(p: &MPoly, q: &MPoly) -> Result<MPoly> {
    p.exact_divide(q)
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.product(b)
}

pub fn series_exp(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.exp()
}

pub fn series_reciprocal(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.reciprocal()
}

pub fn series_compose(a: &TruncatedSeries, s: &SeriesSystem) -> Result<TruncatedSeries> {
    a.compose(s)
}

pub fn system_comp_inverse(f: &SeriesSystem) -> Result<SeriesSystem> {
    f.compositional_inverse()
}
