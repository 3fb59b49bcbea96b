pub mod abel;
pub mod algebra;
pub mod error;
pub mod goncarov;
pub mod operators;
pub mod report;
pub mod sequences;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/goncarov.md")]
    mod goncarov {}
    #[doc = include_str!("../../../book/src/abel.md")]
    mod abel {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
