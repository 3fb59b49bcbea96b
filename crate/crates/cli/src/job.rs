//! Job descriptions read from JSON, and their validated form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use umbral::algebra::{parse_rational, MultiIndex, Rational};
use umbral::goncarov::{GridSpec, InterpolationGrid, LowerSet};
use umbral::operators::{make_system, DeltaSystem, OperatorSpec};

use crate::render::Format;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Basic,
    Goncarov,
    Abel,
    Solve,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Biorthogonality,
    Binomial,
    Appell,
    Basic,
}

/// An interpolation datum `b_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSpec {
    pub k: MultiIndex,
    pub b: String,
}

/// One batch computation or verification run.
///
/// ```json
/// {
///   "dim": 2,
///   "system": [{"preset": "derivative", "axis": 0}, {"preset": "derivative", "axis": 1}],
///   "grid": {"kind": "linear", "A": [["1", "0"], ["0", "1"]]},
///   "target": "abel",
///   "indices": [[1, 1]]
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub dim: usize,
    pub system: Vec<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub target: Target,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    /// Explicit indices; when absent, every `n` with `|n| ≤ max_degree`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<MultiIndex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_set: Option<Vec<MultiIndex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<ValueSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Truncation order of the series in the Appell suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub crosscheck: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub explain: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub max_degree: Option<u32>,
    pub order: Option<usize>,
    pub no_crosscheck: bool,
    pub explain: bool,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("job spec: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.format.is_some() {
            self.format = o.format;
        }
        if o.max_degree.is_some() {
            self.max_degree = o.max_degree;
            self.indices = None;
        }
        if o.order.is_some() {
            self.order = o.order;
        }
        if o.no_crosscheck {
            self.crosscheck = false;
        }
        if o.explain {
            self.explain = true;
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    /// Parses every part of the job and checks that the pieces fit together.
    pub fn validate(&self) -> Result<Job, CliError> {
        if self.dim == 0 {
            return Err(CliError::Invalid("dim must be at least 1".into()));
        }
        if self.system.len() != self.dim {
            return Err(CliError::Invalid(format!(
                "system has {} operators but dim is {}",
                self.system.len(),
                self.dim
            )));
        }
        let system = make_system(self.dim, &self.system)?;
        let grid = self.grid.as_ref().map(|g| g.build(self.dim)).transpose()?;
        let indices = match (&self.indices, self.max_degree) {
            (Some(list), _) => {
                for n in list {
                    if n.dim() != self.dim {
                        return Err(CliError::Invalid(format!("index {n} does not have {} entries", self.dim)));
                    }
                }
                list.clone()
            }
            (None, Some(m)) => MultiIndex::up_to_total(self.dim, m),
            (None, None) => Vec::new(),
        };
        let lower_set = self.lower_set.as_ref().map(|s| LowerSet::new(self.dim, s.iter().cloned())).transpose()?;
        let mut values = BTreeMap::new();
        for v in self.values.iter().flatten() {
            if v.k.dim() != self.dim {
                return Err(CliError::Invalid(format!("value index {} does not have {} entries", v.k, self.dim)));
            }
            if values.insert(v.k.clone(), parse_rational(&v.b)?).is_some() {
                return Err(CliError::Invalid(format!("value at {} given twice", v.k)));
            }
        }

        let need_grid = !matches!(self.target, Target::Basic)
            && !matches!((self.target, self.suite), (Target::Verify, Some(Suite::Basic)));
        if need_grid && grid.is_none() {
            return Err(CliError::Invalid(format!("target {:?} needs a grid", self.target)));
        }
        match self.target {
            Target::Basic | Target::Goncarov | Target::Abel if indices.is_empty() => {
                return Err(CliError::Invalid("give indices or max_degree".into()));
            }
            Target::Solve if lower_set.is_none() => {
                return Err(CliError::Invalid("target solve needs a lower_set".into()));
            }
            Target::Verify if self.suite.is_none() => {
                return Err(CliError::Invalid("target verify needs a suite".into()));
            }
            _ => {}
        }
        Ok(Job { spec: self.clone(), system, grid, indices, lower_set, values })
    }
}

/// A validated job: everything parsed, dimensions consistent.
#[derive(Debug)]
pub struct Job {
    pub spec: JobSpec,
    pub system: DeltaSystem,
    pub grid: Option<InterpolationGrid>,
    pub indices: Vec<MultiIndex>,
    pub lower_set: Option<LowerSet>,
    pub values: BTreeMap<MultiIndex, Rational>,
}

impl Job {
    pub fn grid(&self) -> &InterpolationGrid {
        self.grid.as_ref().expect("validated jobs that need a grid have one")
    }

    pub fn max_degree(&self, default: u32) -> u32 {
        self.spec.max_degree.unwrap_or(default)
    }
}
