//! Outcomes of the exact verification suites.

use std::fmt;

use serde::Serialize;

use crate::algebra::MultiIndex;

/// Where an identity first failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: MultiIndex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<MultiIndex>,
    pub detail: String,
}

/// Result of checking one identity over a finite range of indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail(Witness),
}

impl Outcome {
    pub fn fail(n: &MultiIndex, detail: impl Into<String>) -> Outcome {
        Outcome::Fail(Witness { n: n.clone(), k: None, detail: detail.into() })
    }

    pub fn fail_pair(k: &MultiIndex, n: &MultiIndex, detail: impl Into<String>) -> Outcome {
        Outcome::Fail(Witness { n: n.clone(), k: Some(k.clone()), detail: detail.into() })
    }

    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Pass => None,
            Outcome::Fail(w) => Some(w),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => f.write_str("pass"),
            Outcome::Fail(Witness { n, k: None, detail }) => write!(f, "fail at n={n}: {detail}"),
            Outcome::Fail(Witness { n, k: Some(k), detail }) => write!(f, "fail at k={k}, n={n}: {detail}"),
        }
    }
}
