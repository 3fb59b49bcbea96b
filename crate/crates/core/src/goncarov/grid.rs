use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, parse_rational, MultiIndex, Rational};
use crate::error::{check_dim, Error, Result};

/// The grid `z_k = A·k`, with `k` read as a column vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGrid {
    a: Vec<Vec<Rational>>,
}

impl LinearGrid {
    pub fn new(a: Vec<Vec<Rational>>) -> Result<LinearGrid> {
        let dim = a.len();
        if dim == 0 {
            return Err(Error::BadParams("grid matrix must be nonempty".into()));
        }
        for row in &a {
            check_dim(dim, row.len())?;
        }
        Ok(LinearGrid { a })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<LinearGrid> {
        LinearGrid::new(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn zero(dim: usize) -> LinearGrid {
        LinearGrid { a: vec![vec![Rational::zero(); dim]; dim] }
    }

    pub fn identity(dim: usize) -> LinearGrid {
        let mut g = LinearGrid::zero(dim);
        for i in 0..dim {
            g.a[i][i] = int(1);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.a
    }

    /// `a_{ij}`
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.a[i][j]
    }

    /// The column `t_i = A·e_i`.
    pub fn column(&self, i: usize) -> Vec<Rational> {
        self.a.iter().map(|row| row[i].clone()).collect()
    }

    /// `z_k = A·k`
    pub fn node(&self, k: &MultiIndex) -> Vec<Rational> {
        self.a
            .iter()
            .map(|row| row.iter().zip(k.entries()).map(|(a, &kj)| a * Rational::from_integer(kj.into())).sum())
            .collect()
    }
}

/// A node `z_k ∈ ℚ^d` for each multi-index of some lower set.
///
/// Nodes may repeat. A table may sit on top of another grid, overriding
/// some of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterpolationGrid {
    Linear(LinearGrid),
    /// `z_k = v + A·k`
    Affine {
        offset: Vec<Rational>,
        linear: LinearGrid,
    },
    Table {
        dim: usize,
        nodes: BTreeMap<MultiIndex, Vec<Rational>>,
        base: Option<Box<InterpolationGrid>>,
    },
}

impl InterpolationGrid {
    /// The grid with every node at the origin.
    pub fn zero(dim: usize) -> InterpolationGrid {
        InterpolationGrid::Linear(LinearGrid::zero(dim))
    }

    pub fn table(dim: usize, nodes: BTreeMap<MultiIndex, Vec<Rational>>) -> Result<InterpolationGrid> {
        for (k, z) in &nodes {
            check_dim(dim, k.dim())?;
            check_dim(dim, z.len())?;
        }
        Ok(InterpolationGrid::Table { dim, nodes, base: None })
    }

    pub fn dim(&self) -> usize {
        match self {
            InterpolationGrid::Linear(g) | InterpolationGrid::Affine { linear: g, .. } => g.dim(),
            InterpolationGrid::Table { dim, .. } => *dim,
        }
    }

    /// `z_k`
    pub fn node(&self, k: &MultiIndex) -> Result<Vec<Rational>> {
        check_dim(self.dim(), k.dim())?;
        match self {
            InterpolationGrid::Linear(g) => Ok(g.node(k)),
            InterpolationGrid::Affine { offset, linear } => {
                Ok(linear.node(k).into_iter().zip(offset).map(|(z, v)| z + v).collect())
            }
            InterpolationGrid::Table { nodes, base, .. } => match (nodes.get(k), base) {
                (Some(z), _) => Ok(z.clone()),
                (None, Some(b)) => b.node(k),
                (None, None) => Err(Error::MissingNode(k.clone())),
            },
        }
    }

    /// This grid with `z_k` replaced.
    pub fn with_node(&self, k: MultiIndex, z: Vec<Rational>) -> Result<InterpolationGrid> {
        check_dim(self.dim(), k.dim())?;
        check_dim(self.dim(), z.len())?;
        Ok(match self {
            InterpolationGrid::Table { dim, nodes, base } => {
                let mut nodes = nodes.clone();
                nodes.insert(k, z);
                InterpolationGrid::Table { dim: *dim, nodes, base: base.clone() }
            }
            other => InterpolationGrid::Table {
                dim: other.dim(),
                nodes: [(k, z)].into(),
                base: Some(Box::new(other.clone())),
            },
        })
    }

    /// The grid `Z + v`.
    pub fn translated(&self, v: &[Rational]) -> Result<InterpolationGrid> {
        check_dim(self.dim(), v.len())?;
        let add = |z: &[Rational]| z.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>();
        Ok(match self {
            InterpolationGrid::Linear(g) => InterpolationGrid::Affine { offset: v.to_vec(), linear: g.clone() },
            InterpolationGrid::Affine { offset, linear } => {
                InterpolationGrid::Affine { offset: add(offset), linear: linear.clone() }
            }
            InterpolationGrid::Table { dim, nodes, base } => InterpolationGrid::Table {
                dim: *dim,
                nodes: nodes.iter().map(|(k, z)| (k.clone(), add(z))).collect(),
                base: base.as_ref().map(|b| b.translated(v).map(Box::new)).transpose()?,
            },
        })
    }

    /// The nodes `z_k` for every `k` in `indices`.
    pub fn materialize(&self, indices: &[MultiIndex]) -> Result<BTreeMap<MultiIndex, Vec<Rational>>> {
        indices.iter().map(|k| Ok((k.clone(), self.node(k)?))).collect()
    }
}

impl From<LinearGrid> for InterpolationGrid {
    fn from(g: LinearGrid) -> Self {
        InterpolationGrid::Linear(g)
    }
}

/// JSON description of a grid; rationals are strings `"p/q"`.
///
/// ```json
/// {"kind": "linear", "A": [["1", "0"], ["0", "1"]]}
/// {"kind": "affine", "v": ["1/2", "0"], "A": [["1", "0"], ["0", "1"]]}
/// {"kind": "table", "nodes": [{"k": [0, 0], "z": ["0", "0"]}]}
/// ```
///
/// A table may name a `base` grid supplying the nodes it does not list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    Linear {
        #[serde(rename = "A")]
        a: Vec<Vec<String>>,
    },
    Affine {
        v: Vec<String>,
        #[serde(rename = "A")]
        a: Vec<Vec<String>>,
    },
    Table {
        nodes: Vec<NodeSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<GridSpec>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub k: MultiIndex,
    pub z: Vec<String>,
}

fn parse_matrix(a: &[Vec<String>]) -> Result<LinearGrid> {
    LinearGrid::new(
        a.iter().map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
    )
}

impl GridSpec {
    pub fn build(&self, dim: usize) -> Result<InterpolationGrid> {
        let grid = match self {
            GridSpec::Linear { a } => InterpolationGrid::Linear(parse_matrix(a)?),
            GridSpec::Affine { v, a } => {
                let offset = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                let linear = parse_matrix(a)?;
                check_dim(linear.dim(), offset.len())?;
                InterpolationGrid::Affine { offset, linear }
            }
            GridSpec::Table { nodes, base } => {
                let mut map = BTreeMap::new();
                for n in nodes {
                    let z = n.z.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                    if map.insert(n.k.clone(), z).is_some() {
                        return Err(Error::BadParams(format!("node {} listed twice", n.k)));
                    }
                }
                let mut grid = InterpolationGrid::table(dim, map)?;
                if let (InterpolationGrid::Table { base: slot, .. }, Some(b)) = (&mut grid, base) {
                    *slot = Some(Box::new(b.build(dim)?));
                }
                grid
            }
        };
        check_dim(dim, grid.dim())?;
        Ok(grid)
    }
}
