//! Named operators and their JSON descriptions.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::indicator::Indicator;
use super::op::ShiftInvariantOp;
use super::system::{DeltaSystem, SeparableSystem};
use crate::algebra::{parse_rational, JsonTerm, MPoly, MultiIndex, Rational, TruncatedSeries};
use crate::error::{Error, Result};

/// `ℓ ≡ 1`, so that `D_axis · L = D_axis`.
pub fn ell_derivative(dim: usize) -> Indicator {
    Indicator::constant(dim, Rational::one())
}

/// `(e^{x_axis} − 1)/x_axis`, the Bernoulli operator `p ↦ ∫ₓ^{x+1} p`.
pub fn ell_forward(dim: usize, axis: usize) -> Indicator {
    Indicator::exp_quotient(dim, axis, Rational::one()).expect("step is nonzero")
}

/// `(1 − e^{−x_axis})/x_axis`.
pub fn ell_backward(dim: usize, axis: usize) -> Indicator {
    Indicator::exp_quotient(dim, axis, -Rational::one()).expect("step is nonzero")
}

/// `D_axis · L` for a factor `ℓ` depending on `x_axis` alone.
pub fn delta_from_ell(dim: usize, axis: usize, ell: Indicator, label: String) -> ShiftInvariantOp {
    let ind = Indicator::product(vec![Indicator::variable(dim, axis), ell]).expect("dimensions agree");
    ShiftInvariantOp::new(ind.labeled(label))
}

pub fn derivative(dim: usize, axis: usize) -> ShiftInvariantOp {
    ShiftInvariantOp::derivative(dim, axis)
}

/// `Δ = E_{e_axis} − I`
pub fn forward_difference(dim: usize, axis: usize) -> ShiftInvariantOp {
    delta_from_ell(dim, axis, ell_forward(dim, axis), format!("forward_diff(x{axis})"))
}

/// `∇ = I − E_{−e_axis}`
pub fn backward_difference(dim: usize, axis: usize) -> ShiftInvariantOp {
    delta_from_ell(dim, axis, ell_backward(dim, axis), format!("backward_diff(x{axis})"))
}

/// An operator given as JSON.
///
/// ```json
/// {"preset": "forward_diff", "axis": 0}
/// {"preset": "shift", "v": ["1", "-1/2"]}
/// {"custom_L": {"axis": 1, "coeffs": ["1", "-1/2"], "order": 6}}
/// {"sum": [{"preset": "derivative", "axis": 0}, {"preset": "derivative", "axis": 1}]}
/// ```
///
/// Axes count from 0. A `custom_L` factor is known up to `order`, which
/// defaults to the number of coefficients minus one; missing coefficients
/// below `order` are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Preset {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<String>>,
    },
    Custom {
        #[serde(rename = "custom_L")]
        custom_l: CustomL,
    },
    Sum {
        sum: Vec<OperatorSpec>,
    },
    Compose {
        compose: Vec<OperatorSpec>,
    },
    Scale {
        scale: String,
        op: Box<OperatorSpec>,
    },
    Series {
        series: ExplicitSeries,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomL {
    pub axis: usize,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSeries {
    pub order: usize,
    pub terms: Vec<JsonTerm>,
}

fn check_axis(dim: usize, axis: usize) -> Result<()> {
    if axis >= dim {
        return Err(Error::BadParams(format!("axis {axis} out of range for dimension {dim}")));
    }
    Ok(())
}

fn rationals(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rational(s)).collect()
}

impl OperatorSpec {
    pub fn derivative(axis: usize) -> Self {
        OperatorSpec::Preset { preset: "derivative".into(), axis: Some(axis), v: None }
    }

    pub fn forward_diff(axis: usize) -> Self {
        OperatorSpec::Preset { preset: "forward_diff".into(), axis: Some(axis), v: None }
    }

    pub fn backward_diff(axis: usize) -> Self {
        OperatorSpec::Preset { preset: "backward_diff".into(), axis: Some(axis), v: None }
    }

    /// The axis and factor `ℓ` when this spec is of the form `D_axis · L`
    /// with `L` acting on `x_axis` only.
    pub fn separable_factor(&self, dim: usize) -> Result<Option<(usize, Indicator)>> {
        Ok(match self {
            OperatorSpec::Preset { preset, axis: Some(axis), .. } => {
                check_axis(dim, *axis)?;
                match preset.as_str() {
                    "derivative" => Some((*axis, ell_derivative(dim))),
                    "forward_diff" => Some((*axis, ell_forward(dim, *axis))),
                    "backward_diff" => Some((*axis, ell_backward(dim, *axis))),
                    _ => None,
                }
            }
            OperatorSpec::Custom { custom_l } => Some((custom_l.axis, custom_ell(dim, custom_l)?)),
            _ => None,
        })
    }
}

fn custom_ell(dim: usize, c: &CustomL) -> Result<Indicator> {
    check_axis(dim, c.axis)?;
    let coeffs = rationals(&c.coeffs)?;
    if coeffs.first().is_none_or(Zero::is_zero) {
        return Err(Error::BadParams("custom_L needs a nonzero constant coefficient".into()));
    }
    let order = c.order.unwrap_or(coeffs.len() - 1);
    if order + 1 < coeffs.len() {
        return Err(Error::BadParams(format!(
            "custom_L lists {} coefficients but declares order {order}",
            coeffs.len()
        )));
    }
    let terms = coeffs.into_iter().enumerate().map(|(k, coef)| (MultiIndex::zero(dim).with(c.axis, k as u32), coef));
    Ok(Indicator::explicit(TruncatedSeries::from_terms(dim, order, terms)?))
}

/// Builds the operator described by `spec` in dimension `dim`.
pub fn make_preset(dim: usize, spec: &OperatorSpec) -> Result<ShiftInvariantOp> {
    match spec {
        OperatorSpec::Preset { preset, axis, v } => {
            let need_axis = || -> Result<usize> {
                let axis = axis.ok_or_else(|| Error::BadParams(format!("preset {preset} needs an axis")))?;
                check_axis(dim, axis)?;
                Ok(axis)
            };
            match preset.as_str() {
                "derivative" => Ok(derivative(dim, need_axis()?)),
                "forward_diff" => Ok(forward_difference(dim, need_axis()?)),
                "backward_diff" => Ok(backward_difference(dim, need_axis()?)),
                "shift" => {
                    let v = v.as_ref().ok_or_else(|| Error::BadParams("preset shift needs v".into()))?;
                    let v = rationals(v)?;
                    if v.len() != dim {
                        return Err(Error::BadParams(format!("shift vector has length {}, expected {dim}", v.len())));
                    }
                    Ok(ShiftInvariantOp::shift(v))
                }
                "identity" => Ok(ShiftInvariantOp::identity(dim)),
                other => Err(Error::BadParams(format!("unknown preset {other:?}"))),
            }
        }
        OperatorSpec::Custom { custom_l } => {
            let ell = custom_ell(dim, custom_l)?;
            Ok(delta_from_ell(dim, custom_l.axis, ell, format!("custom_L(x{})", custom_l.axis)))
        }
        OperatorSpec::Sum { sum } => {
            let parts = sum.iter().map(|s| make_preset(dim, s).map(|op| op.indicator().clone()));
            Ok(ShiftInvariantOp::new(Indicator::sum(parts.collect::<Result<_>>()?)?))
        }
        OperatorSpec::Compose { compose } => {
            let parts = compose.iter().map(|s| make_preset(dim, s).map(|op| op.indicator().clone()));
            Ok(ShiftInvariantOp::new(Indicator::product(parts.collect::<Result<_>>()?)?))
        }
        OperatorSpec::Scale { scale, op } => Ok(make_preset(dim, op)?.scale(parse_rational(scale)?)),
        OperatorSpec::Series { series } => {
            let poly = MPoly::from_json_terms(dim, &series.terms)?;
            if let Some(d) = poly.degree().finite() {
                if d as usize > series.order {
                    return Err(Error::BadParams(format!(
                        "series term of degree {d} exceeds declared order {}",
                        series.order
                    )));
                }
            }
            Ok(ShiftInvariantOp::new(Indicator::explicit(TruncatedSeries::from_poly(&poly, series.order))))
        }
    }
}

/// Builds a delta system from one spec per axis. When spec `i` is
/// `D_i · L_i` with `L_i` acting on `x_i`, the result remembers the
/// factors and converts to a [`SeparableSystem`].
pub fn make_system(dim: usize, specs: &[OperatorSpec]) -> Result<DeltaSystem> {
    if specs.len() != dim {
        return Err(Error::BadParams(format!("expected {dim} operators, found {}", specs.len())));
    }
    let mut ells = Vec::with_capacity(dim);
    for (i, spec) in specs.iter().enumerate() {
        match spec.separable_factor(dim)? {
            Some((axis, ell)) if axis == i => ells.push(ell),
            _ => break,
        }
    }
    if ells.len() == dim {
        return Ok(SeparableSystem::new(ells)?.into_system());
    }
    let ops = specs.iter().map(|s| make_preset(dim, s)).collect::<Result<Vec<_>>>()?;
    DeltaSystem::new(ops)
}
