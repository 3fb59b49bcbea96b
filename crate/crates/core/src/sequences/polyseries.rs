use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{MPoly, MultiIndex, Rational, TruncatedSeries};
use crate::error::{check_dim, Error, Result};

/// A truncated power series in `y₁, …, y_m` whose coefficients are
/// polynomials in `x₁, …, x_d`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolySeries {
    xdim: usize,
    ydim: usize,
    order: usize,
    terms: BTreeMap<MultiIndex, MPoly>,
}

impl PolySeries {
    pub fn zero(xdim: usize, ydim: usize, order: usize) -> Self {
        PolySeries { xdim, ydim, order, terms: BTreeMap::new() }
    }

    pub fn one(xdim: usize, ydim: usize, order: usize) -> Self {
        PolySeries::constant(ydim, order, MPoly::one(xdim))
    }

    /// `p(x) · y⁰`
    pub fn constant(ydim: usize, order: usize, p: MPoly) -> Self {
        let mut s = PolySeries::zero(p.dim(), ydim, order);
        s.add_term(MultiIndex::zero(ydim), p);
        s
    }

    /// A scalar series in `y`, each coefficient a constant polynomial.
    pub fn from_series(xdim: usize, s: &TruncatedSeries) -> Self {
        let mut out = PolySeries::zero(xdim, s.dim(), s.order());
        for (e, c) in s.terms() {
            out.add_term(e.clone(), MPoly::constant(xdim, c.clone()));
        }
        out
    }

    /// `Σ_i x_i · g_i(y)`
    pub fn dot(g: &[TruncatedSeries]) -> Result<Self> {
        let xdim = g.len();
        let ydim = g.first().map_or(0, TruncatedSeries::dim);
        let order = g.iter().map(TruncatedSeries::order).min().unwrap_or(0);
        let mut out = PolySeries::zero(xdim, ydim, order);
        for (i, gi) in g.iter().enumerate() {
            check_dim(ydim, gi.dim())?;
            for (e, c) in gi.truncate(order).terms() {
                out.add_term(e.clone(), MPoly::monomial(MultiIndex::unit(xdim, i), c.clone()));
            }
        }
        Ok(out)
    }

    /// `e^{x·y} = Σ_n x^n y^n / n!` with `x` and `y` of the same dimension.
    pub fn exp_dot(dim: usize, order: usize) -> Self {
        let mut out = PolySeries::zero(dim, dim, order);
        for n in MultiIndex::up_to_total(dim, order as u32) {
            let c = Rational::from_integer(n.factorial()).recip();
            out.add_term(n.clone(), MPoly::monomial(n, c));
        }
        out
    }

    pub fn xdim(&self) -> usize {
        self.xdim
    }

    pub fn ydim(&self) -> usize {
        self.ydim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MPoly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: MultiIndex, p: MPoly) {
        if e.total() as usize > self.order || p.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The coefficient of `y^e`.
    pub fn coefficient(&self, e: &MultiIndex) -> Result<MPoly> {
        check_dim(self.ydim, e.dim())?;
        if e.total() as usize > self.order {
            return Err(Error::InsufficientOrder { needed: e.total() as usize, available: self.order });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(|| MPoly::zero(self.xdim)))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        PolySeries {
            xdim: self.xdim,
            ydim: self.ydim,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total() as usize <= order)
                .map(|(e, p)| (e.clone(), p.clone()))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &PolySeries) -> Result<()> {
        check_dim(self.xdim, other.xdim)?;
        check_dim(self.ydim, other.ydim)
    }

    pub fn sum(&self, other: &PolySeries) -> Result<PolySeries> {
        self.check_compatible(other)?;
        let mut out = self.truncate(other.order);
        for (e, p) in &other.terms {
            out.add_term(e.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn product(&self, other: &PolySeries) -> Result<PolySeries> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut out = PolySeries::zero(self.xdim, self.ydim, order);
        for (ea, pa) in &self.terms {
            if ea.total() as usize > order {
                break;
            }
            for (eb, pb) in &other.terms {
                if (ea.total() + eb.total()) as usize > order {
                    break;
                }
                out.add_term(ea.add(eb), pa * pb);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `p(x)`.
    pub fn scale_poly(&self, p: &MPoly) -> Result<PolySeries> {
        check_dim(self.xdim, p.dim())?;
        let mut out = PolySeries::zero(self.xdim, self.ydim, self.order);
        for (e, q) in &self.terms {
            out.add_term(e.clone(), q * p);
        }
        Ok(out)
    }

    /// `Σ_j a^j / j!`; the `y⁰` coefficient must vanish.
    pub fn exp(&self) -> Result<PolySeries> {
        if self.terms.contains_key(&MultiIndex::zero(self.ydim)) {
            return Err(Error::NonzeroConstantTerm { component: 0 });
        }
        let mut out = PolySeries::one(self.xdim, self.ydim, self.order);
        let mut power = out.clone();
        for j in 1..=self.order {
            let inv = Rational::one() / Rational::from_integer(j.into());
            let raised = power.product(self)?;
            power = PolySeries::zero(self.xdim, self.ydim, self.order);
            for (e, p) in raised.terms {
                power.add_term(e, p.scale(&inv));
            }
            out = out.sum(&power)?;
        }
        Ok(out)
    }

    /// The first `y`-index, in graded-lex order, where the two series differ
    /// below their common order.
    pub fn first_difference(&self, other: &PolySeries) -> Result<Option<MultiIndex>> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let zero = MPoly::zero(self.xdim);
        let keys: std::collections::BTreeSet<&MultiIndex> =
            self.terms.keys().chain(other.terms.keys()).filter(|e| e.total() as usize <= order).collect();
        Ok(keys
            .into_iter()
            .find(|e| self.terms.get(*e).unwrap_or(&zero) != other.terms.get(*e).unwrap_or(&zero))
            .cloned())
    }
}

impl fmt::Debug for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, p) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({p:?})·y^{e}")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({})", self.order + 1)
    }
}
