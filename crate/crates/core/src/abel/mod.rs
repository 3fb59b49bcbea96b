//! Delta Abel polynomials: Gončarov polynomials on linear grids `z_k = A·k`.
//!
//! For a separable system `d_i = D_i L_i` two closed forms are available:
//!
//! ```text
//! t_n = det(B + C) · Π_i p^{(i)}_{n_i}(x_i − z_{n,i}) / (x_i − z_{n,i})
//! t_n = det(F + G) · (Π_i L_i^{−n_i−1}) (Π_i E_{t_i}^{−n_i}) x^n
//! ```
//!
//! with `B = diag(x_i − z_{n,i})`, `C_{ij} = z_{n_i e_i, j}`,
//! `F = diag((d_i)'_{x_i})` and `G_{ij} = a_{ij} d_i`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{linalg, MPoly, MultiIndex, Rational};
use crate::error::{check_dim, Result};
use crate::goncarov::{GoncarovTable, InterpolationGrid};
use crate::operators::{DeltaSystem, SeparableSystem, ShiftInvariantOp};
use crate::report::Outcome;
use crate::sequences::{basic_univariate, binomial_identity_check};

pub use crate::goncarov::LinearGrid;

/// The matrices entering both closed forms for one index `n`.
#[derive(Clone, Debug)]
pub struct AbelMatrices {
    pub n: MultiIndex,
    /// `z_n`
    pub node: Vec<Rational>,
    /// Diagonal of `B`: `x_i − z_{n,i}`.
    pub b: Vec<MPoly>,
    /// `C_{ij} = z_{n_i e_i, j} = n_i a_{ji}`
    pub c: Vec<Vec<Rational>>,
    /// Diagonal of `F`: `(d_i)'_{x_i}`.
    pub f: Vec<ShiftInvariantOp>,
    /// `G_{ij} = a_{ij} d_i`
    pub g: Vec<Vec<ShiftInvariantOp>>,
}

impl AbelMatrices {
    pub fn new(s: &SeparableSystem, a: &LinearGrid, n: &MultiIndex) -> Result<AbelMatrices> {
        let dim = s.dim();
        check_dim(dim, a.dim())?;
        check_dim(dim, n.dim())?;
        let node = a.node(n);
        let b = (0..dim).map(|i| &MPoly::var(dim, i) - &MPoly::constant(dim, node[i].clone())).collect();
        let c = (0..dim).map(|i| a.node(&MultiIndex::zero(dim).with(i, n.get(i)))).collect();
        let f = (0..dim).map(|i| s.op(i).pincherle(i)).collect();
        let g = (0..dim).map(|i| (0..dim).map(|j| s.op(i).scale(a.entry(i, j).clone())).collect()).collect();
        Ok(AbelMatrices { n: n.clone(), node, b, c, f, g })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `B + C` with polynomial entries.
    pub fn b_plus_c(&self) -> Vec<Vec<MPoly>> {
        let dim = self.dim();
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let c = MPoly::constant(dim, self.c[i][j].clone());
                        if i == j {
                            &self.b[i] + &c
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `det(B + C)` as a signed permutation sum.
    pub fn det_b_plus_c(&self) -> MPoly {
        let m = self.b_plus_c();
        let mut det = MPoly::zero(self.dim());
        for (perm, sign) in linalg::permutations(self.dim()) {
            let mut term = MPoly::constant(self.dim(), Rational::from_integer(sign.into()));
            for (i, &j) in perm.iter().enumerate() {
                if m[i][j].is_zero() {
                    term = MPoly::zero(self.dim());
                    break;
                }
                term = &term * &m[i][j];
            }
            det = &det + &term;
        }
        det
    }

    /// `(F + G)_{ij}`
    pub fn operator_entry(&self, i: usize, j: usize) -> Result<ShiftInvariantOp> {
        if i == j {
            self.f[i].add(&self.g[i][i])
        } else {
            Ok(self.g[i][j].clone())
        }
    }
}

/// `t_n` from the determinant `det(B + C)` and the univariate basic
/// polynomials.
///
/// An axis with `n_i = 0` contributes `1/(x_i − z_{n,i})`; the product of
/// these factors is divided out of `det(B + C)` exactly, since row `i` of
/// `C` vanishes.
pub fn abel_closed(s: &SeparableSystem, a: &LinearGrid, n: &MultiIndex) -> Result<MPoly> {
    let m = AbelMatrices::new(s, a, n)?;
    let minus_node: Vec<Rational> = m.node.iter().map(|c| -c).collect();
    let mut out = m.det_b_plus_c();
    let mut divisor = MPoly::one(s.dim());
    for i in 0..s.dim() {
        if n.get(i) == 0 {
            divisor = &divisor * &m.b[i];
        } else {
            let p = basic_univariate(s, i, n.get(i))?.translate(&minus_node)?;
            out = &out * &p.exact_divide(&m.b[i])?;
        }
    }
    out.exact_divide(&divisor)
}

/// `t_n` by operator application alone: the shifts and inverse factors act
/// on `x^n`, then each of the `d!` permutation products of `F + G` acts on
/// the result.
pub fn abel_operator_form(s: &SeparableSystem, a: &LinearGrid, n: &MultiIndex) -> Result<MPoly> {
    let m = AbelMatrices::new(s, a, n)?;
    let dim = s.dim();
    let minus_node: Vec<Rational> = m.node.iter().map(|c| -c).collect();
    let mut q = MPoly::monomial(n.clone(), Rational::from_integer(1.into())).translate(&minus_node)?;
    for i in 0..dim {
        q = s.factor(i).inverse()?.power(n.get(i) + 1).apply(&q)?;
    }
    let entries: Vec<Vec<ShiftInvariantOp>> =
        (0..dim).map(|i| (0..dim).map(|j| m.operator_entry(i, j)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let mut out = MPoly::zero(dim);
    for (perm, sign) in linalg::permutations(dim) {
        if perm.iter().enumerate().any(|(i, &j)| i != j && a.entry(i, j).is_zero()) {
            continue;
        }
        let mut r = q.clone();
        for (i, &j) in perm.iter().enumerate() {
            r = entries[i][j].apply(&r)?;
        }
        out = &out + &r.scale(&Rational::from_integer(sign.into()));
    }
    Ok(out)
}

/// `t_n(x; v + A·ℕ^d) = t_n(x − v; A·ℕ^d)`.
pub fn abel_affine(s: &SeparableSystem, offset: &[Rational], a: &LinearGrid, n: &MultiIndex) -> Result<MPoly> {
    check_dim(s.dim(), offset.len())?;
    let minus: Vec<Rational> = offset.iter().map(|c| -c).collect();
    abel_closed(s, a, n)?.translate(&minus)
}

/// `(d₁ E_{t₁}, …, d_d E_{t_d})` with `t_i` the columns of `A`. Its basic
/// sequence is the Abel family of `(s, A)`.
pub fn shifted_basic_system(s: &DeltaSystem, a: &LinearGrid) -> Result<DeltaSystem> {
    check_dim(s.dim(), a.dim())?;
    let columns: Vec<Vec<Rational>> = (0..s.dim()).map(|i| a.column(i)).collect();
    s.shifted(&columns)
}

/// Whether a Gončarov family is of binomial type, decided two ways up to a
/// finite degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialVerdict {
    pub maxdeg: u32,
    /// `z_0 = 0` and `z_k = A·k` with `A` read off `z_{e_1}, …, z_{e_d}`.
    pub geometric: Outcome,
    /// The binomial identity on the table `t_n`, `|n| ≤ maxdeg`.
    pub algebraic: Outcome,
    #[serde(serialize_with = "serialize_matrix")]
    pub fitted: Vec<Vec<Rational>>,
}

fn serialize_matrix<S: serde::Serializer>(m: &[Vec<Rational>], ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl BinomialVerdict {
    /// Both checks passed; certified only up to `maxdeg`.
    pub fn binomial_type(&self) -> bool {
        self.geometric.passed() && self.algebraic.passed()
    }
}

pub fn binomial_type_classify(s: &DeltaSystem, z: &InterpolationGrid, maxdeg: u32) -> Result<BinomialVerdict> {
    let dim = s.dim();
    check_dim(dim, z.dim())?;
    let mut fitted = vec![vec![Rational::zero(); dim]; dim];
    if maxdeg >= 1 {
        for j in 0..dim {
            let col = z.node(&MultiIndex::unit(dim, j))?;
            for (i, v) in col.into_iter().enumerate() {
                fitted[i][j] = v;
            }
        }
    }
    let linear = LinearGrid::new(fitted.clone())?;
    let mut geometric = Outcome::Pass;
    for k in MultiIndex::up_to_total(dim, maxdeg) {
        let zk = z.node(&k)?;
        if zk != linear.node(&k) {
            let detail = if k.is_zero() { "z_0 is not the origin" } else { "node is off the fitted linear grid" };
            geometric = Outcome::fail(&k, detail);
            break;
        }
    }
    let table = GoncarovTable::new(s.clone(), z.clone())?.table(maxdeg, 1)?;
    let algebraic = binomial_identity_check(&table, maxdeg);
    Ok(BinomialVerdict { maxdeg, geometric, algebraic, fitted })
}
