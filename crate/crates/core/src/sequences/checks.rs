use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{from_bigint, MPoly, MultiIndex, Rational, TruncatedSeries};
use crate::error::{check_dim, Result};
use crate::goncarov::InterpolationGrid;
use crate::operators::DeltaSystem;
use crate::report::Outcome;

use super::basic::PolyTable;
use super::polyseries::PolySeries;

/// One outcome per defining property of a basic sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicReport {
    /// `p_0 = 1` and `deg p_n = |n|`
    pub normalization: Outcome,
    /// `p_n(0) = 0` for `|n| ≥ 1`
    pub vanishing: Outcome,
    /// `d_i p_n = n_i p_{n−e_i}`
    pub lowering: Outcome,
}

impl BasicReport {
    pub fn passed(&self) -> bool {
        self.normalization.passed() && self.vanishing.passed() && self.lowering.passed()
    }
}

/// Checks the three defining properties of a basic sequence on every entry
/// with `|n| ≤ maxdeg`, reporting the first failing index of each.
pub fn verify_basic_properties(s: &DeltaSystem, table: &PolyTable, maxdeg: u32) -> Result<BasicReport> {
    let dim = s.dim();
    let origin = vec![Rational::zero(); dim];
    let mut normalization = None;
    let mut vanishing = None;
    let mut lowering = None;
    for n in MultiIndex::up_to_total(dim, maxdeg) {
        let Some(p) = table.get(&n) else {
            let missing = Outcome::fail(&n, "entry missing from table");
            normalization.get_or_insert(missing.clone());
            vanishing.get_or_insert(missing.clone());
            lowering.get_or_insert(missing);
            continue;
        };
        if normalization.is_none() {
            if n.is_zero() && p != &MPoly::one(dim) {
                normalization = Some(Outcome::fail(&n, "p_0 is not 1"));
            } else if p.degree().finite() != Some(n.total()) {
                normalization = Some(Outcome::fail(&n, format!("degree is {:?}", p.degree())));
            }
        }
        if vanishing.is_none() && !n.is_zero() {
            let v = p.eval(&origin)?;
            if !v.is_zero() {
                vanishing = Some(Outcome::fail(&n, format!("value at the origin is {v}")));
            }
        }
        if lowering.is_none() {
            for (i, op) in s.ops().iter().enumerate() {
                let image = op.apply(p)?;
                let expected = match n.decrement(i) {
                    None => MPoly::zero(dim),
                    Some(m) => match table.get(&m) {
                        Some(q) => q.scale(&Rational::from_integer(n.get(i).into())),
                        None => {
                            lowering = Some(Outcome::fail(&m, "entry missing from table"));
                            break;
                        }
                    },
                };
                if image != expected {
                    lowering = Some(Outcome::fail(&n, format!("operator {i} does not lower the index")));
                    break;
                }
            }
        }
    }
    Ok(BasicReport {
        normalization: normalization.unwrap_or(Outcome::Pass),
        vanishing: vanishing.unwrap_or(Outcome::Pass),
        lowering: lowering.unwrap_or(Outcome::Pass),
    })
}

/// Checks `p_n(x + y) = Σ_{k ≤ n} C(n, k) p_k(x) p_{n−k}(y)` as a polynomial
/// identity in `2d` variables for every `|n| ≤ maxdeg`.
pub fn binomial_identity_check(table: &PolyTable, maxdeg: u32) -> Outcome {
    let Some(dim) = table.keys().next().map(MultiIndex::dim) else {
        return Outcome::Pass;
    };
    let sums: Vec<MPoly> = (0..dim).map(|i| &MPoly::var(2 * dim, i) + &MPoly::var(2 * dim, dim + i)).collect();
    for n in MultiIndex::up_to_total(dim, maxdeg) {
        let Some(pn) = table.get(&n) else {
            return Outcome::fail(&n, "entry missing from table");
        };
        let lhs = pn.substitute(&sums).expect("dimensions agree");
        let mut rhs = MPoly::zero(2 * dim);
        for k in n.box_below() {
            let rest = n.checked_sub(&k).expect("k lies below n");
            let (Some(pk), Some(pr)) = (table.get(&k), table.get(&rest)) else {
                return Outcome::fail(&n, "entry missing from table");
            };
            let term = &pk.embed(2 * dim, 0) * &pr.embed(2 * dim, dim);
            rhs = &rhs + &term.scale(&from_bigint(n.binomial(&k)));
        }
        if lhs != rhs {
            return Outcome::fail(&n, "binomial identity does not hold");
        }
    }
    Outcome::Pass
}

/// Both generating-function identities satisfied by a Gončarov table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppellReport {
    pub order: usize,
    /// `e^{x·y} = Σ_k t_k(x)/k! · f(y)^k · e^{z_k·y}`
    pub alternate: Outcome,
    /// `e^{x·g(y)} = Σ_k t_k(x)/k! · y^k · e^{z_k·g(y)}`, when `g` is computable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_form: Option<Outcome>,
}

impl AppellReport {
    pub fn passed(&self) -> bool {
        self.alternate.passed() && self.delta_form.as_ref().is_none_or(Outcome::passed)
    }
}

fn exp_of_linear(dim: usize, order: usize, z: &[Rational], g: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let mut a = TruncatedSeries::zero(dim, order);
    for (zi, gi) in z.iter().zip(g) {
        if !zi.is_zero() {
            a = a.sum(&gi.scale(zi))?;
        }
    }
    a.exp()
}

fn compare(lhs: &PolySeries, rhs: &PolySeries) -> Result<Outcome> {
    Ok(match lhs.first_difference(rhs)? {
        None => Outcome::Pass,
        Some(e) => Outcome::fail(&e, format!("coefficients of y^{e} differ")),
    })
}

/// Builds both sides of the Appell relations as series in `y` to total
/// order `order` and compares them coefficient by coefficient. The witness
/// index is the exponent of `y` where they first differ.
pub fn appell_verify(s: &DeltaSystem, grid: &InterpolationGrid, t: &PolyTable, order: usize) -> Result<AppellReport> {
    let dim = s.dim();
    check_dim(dim, grid.dim())?;
    let f = s.indicator_system(order)?;
    let ks = MultiIndex::up_to_total(dim, order as u32);
    for k in &ks {
        if !t.contains_key(k) {
            let missing = Outcome::fail(k, "entry missing from table");
            return Ok(AppellReport { order, alternate: missing, delta_form: None });
        }
    }
    let identity: Vec<TruncatedSeries> = (0..dim).map(|i| TruncatedSeries::var(dim, order, i)).collect();

    let mut powers: Vec<Vec<TruncatedSeries>> =
        f.components().iter().map(|fi| vec![TruncatedSeries::one(dim, order), fi.clone()]).collect();
    let mut rhs = PolySeries::zero(dim, dim, order);
    for k in &ks {
        let mut weight = exp_of_linear(dim, order, &grid.node(k)?, &identity)?;
        for (i, &ki) in k.entries().iter().enumerate() {
            while powers[i].len() <= ki as usize {
                let next = powers[i].last().expect("nonempty").product(&powers[i][1])?;
                powers[i].push(next);
            }
            weight = weight.product(&powers[i][ki as usize])?;
        }
        let tk = t[k].scale(&from_bigint(k.factorial()).recip());
        rhs = rhs.sum(&PolySeries::from_series(dim, &weight).scale_poly(&tk)?)?;
    }
    let alternate = compare(&PolySeries::exp_dot(dim, order), &rhs)?;

    let delta_form = match f.compositional_inverse() {
        Err(_) => None,
        Ok(g) => {
            let lhs = PolySeries::dot(g.components())?.exp()?;
            let mut rhs = PolySeries::zero(dim, dim, order);
            for k in &ks {
                let weight = exp_of_linear(dim, order, &grid.node(k)?, g.components())?;
                let monomial =
                    TruncatedSeries::from_terms(dim, order, [(k.clone(), from_bigint(k.factorial()).recip())])?;
                let series = weight.product(&monomial)?;
                rhs = rhs.sum(&PolySeries::from_series(dim, &series).scale_poly(&t[k])?)?;
            }
            Some(compare(&lhs, &rhs)?)
        }
    };
    Ok(AppellReport { order, alternate, delta_form })
}
