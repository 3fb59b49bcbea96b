use std::fmt;

use num_traits::{One, Zero};

use super::indicator::{Indicator, OrderBound};
use crate::algebra::{falling, from_bigint, MPoly, Rational, TruncatedSeries};
use crate::error::{check_dim, Error, Result};

/// Probe order used to compare operators whose indicators are closed forms.
pub const DEFAULT_PROBE_ORDER: usize = 16;

/// A shift-invariant linear operator on `ℚ[x₁, …, x_d]`, represented by its
/// indicator: `L = Σ_n a_n D^n`.
#[derive(Clone)]
pub struct ShiftInvariantOp {
    indicator: Indicator,
}

impl ShiftInvariantOp {
    pub fn new(indicator: Indicator) -> Self {
        ShiftInvariantOp { indicator }
    }

    pub fn identity(dim: usize) -> Self {
        ShiftInvariantOp::new(Indicator::constant(dim, Rational::one()).labeled("I"))
    }

    pub fn zero(dim: usize) -> Self {
        ShiftInvariantOp::new(Indicator::constant(dim, Rational::zero()).labeled("0"))
    }

    /// `D_axis`
    pub fn derivative(dim: usize, axis: usize) -> Self {
        ShiftInvariantOp::new(Indicator::variable(dim, axis).labeled(format!("D{axis}")))
    }

    /// `E_v : p(x) ↦ p(x + v)`
    pub fn shift(v: Vec<Rational>) -> Self {
        let label = format!("E({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        ShiftInvariantOp::new(Indicator::exp(v).labeled(label))
    }

    pub fn indicator(&self) -> &Indicator {
        &self.indicator
    }

    pub fn dim(&self) -> usize {
        self.indicator.dim()
    }

    pub fn label(&self) -> &str {
        self.indicator.label()
    }

    /// `Σ_n a_n D^n p`. Only coefficients with `|n| ≤ deg p` are touched, so
    /// the sum is finite and exact. Shifts go through direct substitution.
    pub fn apply(&self, p: &MPoly) -> Result<MPoly> {
        check_dim(self.dim(), p.dim())?;
        let Some(deg) = p.degree().finite() else {
            return Ok(MPoly::zero(p.dim()));
        };
        if let Some(v) = self.indicator.as_shift() {
            return p.translate(v);
        }
        let series = self.indicator.series(deg as usize)?;
        Ok(apply_series(&series, p))
    }

    /// Applies `self` `k` times.
    pub fn apply_n(&self, p: &MPoly, k: u32) -> Result<MPoly> {
        let mut out = p.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = self.apply(&out)?;
        }
        Ok(out)
    }

    /// `self ∘ other`. Shift-invariant operators commute, so the order of the
    /// factors is immaterial.
    pub fn compose(&self, other: &ShiftInvariantOp) -> Result<ShiftInvariantOp> {
        Ok(ShiftInvariantOp::new(Indicator::product(vec![self.indicator.clone(), other.indicator.clone()])?))
    }

    pub fn add(&self, other: &ShiftInvariantOp) -> Result<ShiftInvariantOp> {
        Ok(ShiftInvariantOp::new(Indicator::sum(vec![self.indicator.clone(), other.indicator.clone()])?))
    }

    pub fn sub(&self, other: &ShiftInvariantOp) -> Result<ShiftInvariantOp> {
        self.add(&other.scale(-Rational::one()))
    }

    pub fn scale(&self, c: Rational) -> ShiftInvariantOp {
        ShiftInvariantOp::new(self.indicator.scaled(c))
    }

    pub fn power(&self, k: u32) -> ShiftInvariantOp {
        ShiftInvariantOp::new(self.indicator.power(k))
    }

    /// The Pincherle derivative `L'_{x_axis} : p ↦ L(x_axis·p) − x_axis·L(p)`,
    /// whose indicator is `∂f/∂x_axis`.
    pub fn pincherle(&self, axis: usize) -> ShiftInvariantOp {
        ShiftInvariantOp::new(self.indicator.partial(axis))
    }

    /// `L⁻¹`, with the reciprocal indicator. Shifts invert to opposite shifts.
    pub fn inverse(&self) -> Result<ShiftInvariantOp> {
        if let Some(v) = self.indicator.as_shift() {
            return Ok(ShiftInvariantOp::shift(v.iter().map(|c| -c).collect()));
        }
        let c0 = self.indicator.series(0)?.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(ShiftInvariantOp::new(self.indicator.reciprocal()))
    }

    /// Extensional equality of indicators up to the smaller available order;
    /// closed forms are compared up to `probe`.
    pub fn equals_up_to(&self, other: &ShiftInvariantOp, probe: usize) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        let order =
            match (self.indicator.available_order().probe(probe), other.indicator.available_order().probe(probe)) {
                (Some(a), Some(b)) => a.min(b),
                _ => return Ok(true),
            };
        Ok(self.indicator.series(order)? == other.indicator.series(order)?)
    }

    pub fn available_order(&self) -> OrderBound {
        self.indicator.available_order()
    }
}

impl PartialEq for ShiftInvariantOp {
    fn eq(&self, other: &Self) -> bool {
        self.equals_up_to(other, DEFAULT_PROBE_ORDER).unwrap_or(false)
    }
}

impl fmt::Debug for ShiftInvariantOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Op({})", self.label())
    }
}

/// `Σ_a c_a D^a p` for a known indicator expansion.
pub(crate) fn apply_series(series: &TruncatedSeries, p: &MPoly) -> MPoly {
    let mut out = MPoly::zero(p.dim());
    for (a, ca) in series.terms() {
        for (e, c) in p.terms() {
            if let Some(rest) = e.checked_sub(a) {
                let f: num_bigint::BigInt = e.entries().iter().zip(a.entries()).map(|(&n, &k)| falling(n, k)).product();
                out.add_term(rest, ca * c * from_bigint(f));
            }
        }
    }
    out
}
