//! Basic sequences of delta systems and the identities they satisfy.

mod basic;
mod checks;
mod polyseries;

pub use basic::{
    basic_from_generating_function, basic_generating_function, basic_multivariate, basic_separable, basic_univariate,
    BasicSequence, PolyTable,
};
pub use checks::{appell_verify, binomial_identity_check, verify_basic_properties, AppellReport, BasicReport};
pub use polyseries::PolySeries;
