use std::ops::Deref;

use num_traits::Zero;

use super::indicator::{Indicator, OrderBound};
use super::op::{ShiftInvariantOp, DEFAULT_PROBE_ORDER};
use super::presets::{delta_from_ell, ell_backward, ell_derivative, ell_forward};
use crate::algebra::{linalg, MPoly, Rational, SeriesSystem};
use crate::error::{check_dim, Error, Result};

/// `d` shift-invariant operators whose indicators vanish at the origin and
/// have an invertible linear part `J_f`.
#[derive(Clone, Debug)]
pub struct DeltaSystem {
    ops: Vec<ShiftInvariantOp>,
    jacobian: Vec<Vec<Rational>>,
    det: Rational,
    ells: Option<Vec<Indicator>>,
}

/// Per-axis outcome of [`DeltaSystem::check_strict`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strictness {
    pub per_axis: Vec<bool>,
    pub strict: bool,
    /// `None` when every coefficient is accounted for; `Some(n)` when the
    /// verdict rests on coefficients up to total degree `n` only.
    pub certified_to: Option<usize>,
}

impl DeltaSystem {
    /// Validates `ops` as a system of delta operators.
    pub fn new(ops: Vec<ShiftInvariantOp>) -> Result<DeltaSystem> {
        let dim = ops.len();
        if dim == 0 {
            return Err(Error::BadParams("a delta system needs at least one operator".into()));
        }
        for op in &ops {
            check_dim(dim, op.dim())?;
        }
        let mut jacobian = Vec::with_capacity(dim);
        for (i, op) in ops.iter().enumerate() {
            let s = op.indicator().series(1)?;
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { component: i });
            }
            jacobian.push((0..dim).map(|j| s.linear_coefficient(j)).collect::<Result<Vec<_>>>()?);
        }
        let det = linalg::determinant(&jacobian);
        if det.is_zero() {
            return Err(Error::SingularJacobian);
        }
        Ok(DeltaSystem { ops, jacobian, det, ells: None })
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[ShiftInvariantOp] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &ShiftInvariantOp {
        &self.ops[i]
    }

    pub fn indicators(&self) -> Vec<Indicator> {
        self.ops.iter().map(|op| op.indicator().clone()).collect()
    }

    /// `J_f[i][j]`: the coefficient of `x_j` in indicator `i`.
    pub fn jacobian(&self) -> &[Vec<Rational>] {
        &self.jacobian
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    /// The indicators truncated to `order`, as a series system.
    pub fn indicator_system(&self, order: usize) -> Result<SeriesSystem> {
        SeriesSystem::new(self.ops.iter().map(|op| op.indicator().series(order)).collect::<Result<_>>()?)
    }

    /// The largest order at which every indicator is known.
    pub fn available_order(&self) -> OrderBound {
        self.ops.iter().map(ShiftInvariantOp::available_order).fold(OrderBound::Unbounded, |acc, b| match (acc, b) {
            (OrderBound::Empty, _) | (_, OrderBound::Empty) => OrderBound::Empty,
            (OrderBound::Unbounded, o) | (o, OrderBound::Unbounded) => o,
            (OrderBound::Finite(a), OrderBound::Finite(b)) => OrderBound::Finite(a.min(b)),
        })
    }

    /// `d^k p = d₁^{k₁} ⋯ d_d^{k_d} p`.
    pub fn apply_power(&self, k: &crate::algebra::MultiIndex, p: &MPoly) -> Result<MPoly> {
        let mut out = p.clone();
        for (i, &ki) in k.entries().iter().enumerate() {
            out = self.ops[i].apply_n(&out, ki)?;
        }
        Ok(out)
    }

    /// Tests whether indicator `i` is `x_i · g_i(x)` with `g_i(0) ≠ 0`.
    ///
    /// A factor visible in the construction settles an axis for every order.
    /// Otherwise the known coefficients are scanned, up to the available
    /// order or `probe` for closed forms, and the verdict is certified only
    /// that far.
    pub fn check_strict_with(&self, probe: usize) -> Result<Strictness> {
        let mut per_axis = Vec::with_capacity(self.dim());
        let mut certified_to: Option<usize> = None;
        for (i, op) in self.ops.iter().enumerate() {
            let diag = !self.jacobian[i][i].is_zero();
            let ind = op.indicator();
            if ind.has_factor(i) && ind.available_order() == OrderBound::Unbounded {
                per_axis.push(diag);
                continue;
            }
            let Some(order) = ind.available_order().probe(probe) else {
                per_axis.push(false);
                continue;
            };
            let s = ind.series(order)?;
            let ok = diag && s.terms().all(|(e, _)| e.get(i) > 0);
            if ok {
                certified_to = Some(certified_to.map_or(order, |c| c.min(order)));
            }
            per_axis.push(ok);
        }
        let strict = per_axis.iter().all(|&b| b);
        Ok(Strictness { per_axis, strict, certified_to: if strict { certified_to } else { None } })
    }

    pub fn check_strict(&self) -> Result<Strictness> {
        self.check_strict_with(DEFAULT_PROBE_ORDER)
    }

    /// The system `(d₁ E_{v₁}, …, d_d E_{v_d})`.
    pub fn shifted(&self, shifts: &[Vec<Rational>]) -> Result<DeltaSystem> {
        check_dim(self.dim(), shifts.len())?;
        let ops = self
            .ops
            .iter()
            .zip(shifts)
            .map(|(op, v)| {
                check_dim(self.dim(), v.len())?;
                op.compose(&ShiftInvariantOp::shift(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        DeltaSystem::new(ops)
    }

    pub fn as_separable(&self) -> Option<SeparableSystem> {
        self.ells.as_ref().map(|_| SeparableSystem { system: self.clone() })
    }

    pub fn is_separable(&self) -> bool {
        self.ells.is_some()
    }
}

/// Validates a list of indicators as a system of delta operators.
pub fn validate_system(indicators: Vec<Indicator>) -> Result<DeltaSystem> {
    DeltaSystem::new(indicators.into_iter().map(ShiftInvariantOp::new).collect())
}

/// A delta system with `d_i = D_i L_i`, where `L_i` has indicator `ℓ_i`
/// depending on `x_i` alone and `ℓ_i(0) ≠ 0`.
#[derive(Clone, Debug)]
pub struct SeparableSystem {
    system: DeltaSystem,
}

impl SeparableSystem {
    pub fn new(ells: Vec<Indicator>) -> Result<SeparableSystem> {
        let dim = ells.len();
        let mut ops = Vec::with_capacity(dim);
        for (i, ell) in ells.iter().enumerate() {
            check_dim(dim, ell.dim())?;
            if ell.support_axes().iter().any(|&a| a != i) {
                return Err(Error::BadParams(format!("factor {i} must depend on axis {i} only")));
            }
            if ell.series(0)?.constant_term().is_zero() {
                return Err(Error::BadParams(format!("factor {i} must have a nonzero constant term")));
            }
            let label = format!("D{i}*{}", ell.label());
            ops.push(delta_from_ell(dim, i, ell.clone(), label));
        }
        let mut system = DeltaSystem::new(ops)?;
        system.ells = Some(ells);
        Ok(SeparableSystem { system })
    }

    /// `(D₁, …, D_d)`
    pub fn derivatives(dim: usize) -> SeparableSystem {
        let sys = SeparableSystem::new((0..dim).map(|_| ell_derivative(dim)).collect()).expect("valid system");
        sys.relabel(|i| format!("D{i}"))
    }

    /// `(Δ₁, …, Δ_d)`
    pub fn forward_differences(dim: usize) -> SeparableSystem {
        let sys = SeparableSystem::new((0..dim).map(|i| ell_forward(dim, i)).collect()).expect("valid system");
        sys.relabel(|i| format!("forward_diff(x{i})"))
    }

    /// `(∇₁, …, ∇_d)`
    pub fn backward_differences(dim: usize) -> SeparableSystem {
        let sys = SeparableSystem::new((0..dim).map(|i| ell_backward(dim, i)).collect()).expect("valid system");
        sys.relabel(|i| format!("backward_diff(x{i})"))
    }

    fn relabel(mut self, label: impl Fn(usize) -> String) -> SeparableSystem {
        for (i, op) in self.system.ops.iter_mut().enumerate() {
            *op = ShiftInvariantOp::new(op.indicator().clone().labeled(label(i)));
        }
        self
    }

    /// `ℓ_i`
    pub fn ell(&self, i: usize) -> &Indicator {
        &self.system.ells.as_ref().expect("separable system keeps its factors")[i]
    }

    /// `L_i`
    pub fn factor(&self, i: usize) -> ShiftInvariantOp {
        ShiftInvariantOp::new(self.ell(i).clone())
    }

    pub fn system(&self) -> &DeltaSystem {
        &self.system
    }

    pub fn into_system(self) -> DeltaSystem {
        self.system
    }
}

impl Deref for SeparableSystem {
    type Target = DeltaSystem;

    fn deref(&self) -> &DeltaSystem {
        &self.system
    }
}
