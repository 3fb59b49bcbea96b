use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::index::{factorial, MultiIndex};
use super::linalg;
use super::poly::MPoly;
use super::rational::{from_bigint, Rational};
use crate::error::{check_dim, Error, Result};

/// Multivariate formal power series known up to total degree `order`.
///
/// Coefficients of total degree above `order` are unknown, not zero. Binary
/// operations yield the smaller of the two orders, and asking for an unknown
/// coefficient is an `InsufficientOrder` error.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    dim: usize,
    order: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl TruncatedSeries {
    pub fn zero(dim: usize, order: usize) -> Self {
        TruncatedSeries { dim, order, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize, order: usize) -> Self {
        TruncatedSeries::constant(dim, order, Rational::one())
    }

    pub fn constant(dim: usize, order: usize, c: Rational) -> Self {
        let mut s = TruncatedSeries::zero(dim, order);
        s.add_term(MultiIndex::zero(dim), c);
        s
    }

    pub fn var(dim: usize, order: usize, axis: usize) -> Self {
        let mut s = TruncatedSeries::zero(dim, order);
        s.add_term(MultiIndex::unit(dim, axis), Rational::one());
        s
    }

    /// Terms of total degree above `order` are dropped.
    pub fn from_terms<I>(dim: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut s = TruncatedSeries::zero(dim, order);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            s.add_term(e, c);
        }
        Ok(s)
    }

    /// A polynomial read as a series known to `order`.
    pub fn from_poly(p: &MPoly, order: usize) -> Self {
        let mut s = TruncatedSeries::zero(p.dim(), order);
        for (e, c) in p.terms() {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, e: MultiIndex, c: Rational) {
        if c.is_zero() || e.total() as usize > self.order {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, e: &MultiIndex) -> Result<Rational> {
        let needed = e.total() as usize;
        if needed > self.order {
            return Err(Error::InsufficientOrder { needed, available: self.order });
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&MultiIndex::zero(self.dim)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `x_axis`; requires order ≥ 1.
    pub fn linear_coefficient(&self, axis: usize) -> Result<Rational> {
        self.coefficient(&MultiIndex::unit(self.dim, axis))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let order = order.min(self.order);
        TruncatedSeries {
            dim: self.dim,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total() as usize <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The known part as a polynomial.
    pub fn to_poly(&self) -> MPoly {
        MPoly::from_terms(self.dim, self.terms.iter().map(|(e, c)| (e.clone(), c.clone()))).expect("dimensions agree")
    }

    /// Equality on the common known range `min(order)`.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        let o = self.order.min(other.order);
        self.dim == other.dim && self.truncate(o).terms == other.truncate(o).terms
    }

    pub fn sum(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.truncate(other.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn difference(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.sum(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.dim, self.order);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        out
    }

    /// Cauchy product truncated to `min(order)`.
    pub fn product(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_dim(self.dim, other.dim)?;
        let order = self.order.min(other.order);
        let a = Scaled::new(self, order);
        let b = Scaled::new(other, order);
        let mut acc: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            let da = ea.total() as usize;
            for (eb, cb) in &b.terms {
                if da + eb.total() as usize > order {
                    break;
                }
                *acc.entry(ea.add(eb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(TruncatedSeries::from_scaled(self.dim, order, acc, &a.denom * &b.denom))
    }

    fn from_scaled(dim: usize, order: usize, numerators: BTreeMap<MultiIndex, BigInt>, denom: BigInt) -> Self {
        let terms = numerators
            .into_iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(e, n)| (e, Rational::new(n, denom.clone())))
            .collect();
        TruncatedSeries { dim, order, terms }
    }

    pub fn pow(&self, k: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.dim, self.order);
        for _ in 0..k {
            acc = acc.product(self).expect("same dimension");
        }
        acc
    }

    /// `Σ_{j ≤ N} a^j / j!`; requires a zero constant term.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { component: 0 });
        }
        let mut total = TruncatedSeries::one(self.dim, self.order);
        let mut power = TruncatedSeries::one(self.dim, self.order);
        for j in 1..=self.order {
            power = power.product(self)?;
            if power.is_zero() {
                break;
            }
            total = total.sum(&power.scale(&Rational::new(1.into(), factorial(j as u32))))?;
        }
        Ok(total)
    }

    /// `1/a` up to the same order; requires a nonzero constant term.
    ///
    /// With `a = c(1 − u)` and `u(0) = 0`, `1/a = c⁻¹ Σ_{j ≤ N} u^j`.
    pub fn reciprocal(&self) -> Result<TruncatedSeries> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv_c = c.recip();
        let one = TruncatedSeries::one(self.dim, self.order);
        let u = one.difference(&self.scale(&inv_c))?;
        let mut total = one.clone();
        let mut power = one;
        for _ in 1..=self.order {
            power = power.product(&u)?;
            if power.is_zero() {
                break;
            }
            total = total.sum(&power)?;
        }
        Ok(total.scale(&inv_c))
    }

    /// `∂a/∂x_axis`, known to one order less.
    pub fn partial(&self, axis: usize) -> TruncatedSeries {
        let order = self.order.saturating_sub(1);
        let mut out = TruncatedSeries::zero(self.dim, order);
        for (e, c) in &self.terms {
            if let Some(rest) = e.decrement(axis) {
                out.add_term(rest, c * Rational::from_integer(e.get(axis).into()));
            }
        }
        out
    }

    /// `a(s₁, …, s_d)`, truncated to the smaller of the orders involved.
    ///
    /// Every `s_i` must have zero constant term.
    pub fn compose(&self, system: &SeriesSystem) -> Result<TruncatedSeries> {
        self.compose_with(system, &mut MonomialImages::new(system)?)
    }

    fn compose_with(&self, system: &SeriesSystem, images: &mut MonomialImages) -> Result<TruncatedSeries> {
        check_dim(self.dim, system.len())?;
        let order = self.order.min(images.order);
        let used: Vec<(&MultiIndex, &Rational)> =
            self.terms.iter().take_while(|(e, _)| e.total() as usize <= order).collect();
        let mut denom = BigInt::one();
        for (e, c) in &used {
            denom = denom.lcm(&(c.denom() * &images.get(system, e)?.denom));
        }
        let mut acc: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (e, c) in used {
            let image = images.get(system, e)?;
            let factor = c.numer() * (&denom / (c.denom() * &image.denom));
            for (m, v) in &image.terms {
                if m.total() as usize > order {
                    break;
                }
                *acc.entry(m.clone()).or_insert_with(BigInt::zero) += &factor * v;
            }
        }
        Ok(TruncatedSeries::from_scaled(system.dim(), order, acc, denom))
    }

    /// The same coefficients, claimed known up to `order`: any coefficient
    /// of degree above `self.order` is taken to be zero.
    fn padded(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries { dim: self.dim, order, terms: self.terms.clone() }
    }
}

/// A series written as integer numerators over one common denominator, so
/// that products accumulate without normalizing every coefficient.
struct Scaled {
    denom: BigInt,
    terms: Vec<(MultiIndex, BigInt)>,
}

impl Scaled {
    fn new(s: &TruncatedSeries, order: usize) -> Self {
        let known = || s.terms.iter().take_while(|(e, _)| e.total() as usize <= order);
        let denom = known().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms = known().map(|(e, c)| (e.clone(), c.numer() * (&denom / c.denom()))).collect();
        Scaled { denom, terms }
    }
}

/// `s^e = Π_i s_i^{e_i}` for a fixed inner system, each built from a
/// neighbour one degree lower and kept for reuse.
struct MonomialImages {
    order: usize,
    cache: BTreeMap<MultiIndex, (TruncatedSeries, Scaled)>,
}

impl MonomialImages {
    fn new(system: &SeriesSystem) -> Result<Self> {
        for (i, s) in system.components.iter().enumerate() {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { component: i });
            }
        }
        Ok(MonomialImages { order: system.order(), cache: BTreeMap::new() })
    }

    fn get(&mut self, system: &SeriesSystem, e: &MultiIndex) -> Result<&Scaled> {
        if !self.cache.contains_key(e) {
            let image = match (0..e.dim()).find(|&i| e.get(i) > 0) {
                None => TruncatedSeries::one(system.dim(), self.order),
                Some(i) => {
                    let lower = e.decrement(i).expect("positive entry");
                    self.get(system, &lower)?;
                    self.cache[&lower].0.product(&system.components[i])?
                }
            };
            let scaled = Scaled::new(&image, self.order);
            self.cache.insert(e.clone(), (image, scaled));
        }
        Ok(&self.cache[e].1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O({})", self.to_poly(), self.order + 1)
    }
}

/// `d` truncated series in `d` variables sharing one order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesSystem {
    components: Vec<TruncatedSeries>,
}

impl SeriesSystem {
    /// Components are truncated to their common minimum order.
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self> {
        let d = components.len();
        if d == 0 {
            return Err(Error::BadParams("a series system needs at least one component".into()));
        }
        for c in &components {
            check_dim(d, c.dim())?;
        }
        let order = components.iter().map(TruncatedSeries::order).min().unwrap();
        Ok(SeriesSystem { components: components.iter().map(|c| c.truncate(order)).collect() })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        SeriesSystem { components: (0..dim).map(|i| TruncatedSeries::var(dim, order, i)).collect() }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries {
        &self.components[i]
    }

    /// `J_{ij}` = coefficient of `x_j` in component `i`.
    pub fn jacobian(&self) -> Result<Vec<Vec<Rational>>> {
        self.components.iter().map(|c| (0..c.dim()).map(|j| c.linear_coefficient(j)).collect()).collect()
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    fn check_admissible(&self) -> Result<Vec<Vec<Rational>>> {
        for (i, c) in self.components.iter().enumerate() {
            if !c.constant_term().is_zero() {
                return Err(Error::NotAdmissible(format!("component {i} has a nonzero constant term")));
            }
        }
        let j = self.jacobian()?;
        if linalg::determinant(&j).is_zero() {
            return Err(Error::NotAdmissible("det J = 0".into()));
        }
        Ok(j)
    }

    /// Componentwise `(f ∘ g)_i = f_i(g₁, …, g_d)`.
    pub fn compose(&self, inner: &SeriesSystem) -> Result<SeriesSystem> {
        let mut images = MonomialImages::new(inner)?;
        SeriesSystem::new(
            self.components.iter().map(|c| c.compose_with(inner, &mut images)).collect::<Result<Vec<_>>>()?,
        )
    }

    /// The compositional inverse `g` with `f∘g = g∘f = id` to the same order.
    ///
    /// Writing `f = J·x + H(x)` with `H` of order ≥ 2, iterate
    /// `g ← J⁻¹(x − H(g))` starting from `g = J⁻¹x`. If `g` is right up to
    /// degree `k`, one pass makes it right up to degree `k + 1`, so each pass
    /// works only to that degree.
    pub fn compositional_inverse(&self) -> Result<SeriesSystem> {
        let j = self.check_admissible()?;
        let j_inv = linalg::inverse(&j).ok_or_else(|| Error::NotAdmissible("det J = 0".into()))?;
        let d = self.len();
        let order = self.order();
        let nonlinear: Vec<TruncatedSeries> = self
            .components
            .iter()
            .map(|c| {
                let mut h = TruncatedSeries::zero(d, order);
                for (e, v) in c.terms() {
                    if e.total() >= 2 {
                        h.add_term(e.clone(), v.clone());
                    }
                }
                h
            })
            .collect();
        let apply_inv = |rhs: &[TruncatedSeries], order: usize| -> Result<Vec<TruncatedSeries>> {
            (0..d)
                .map(|i| {
                    let mut acc = TruncatedSeries::zero(d, order);
                    for (k, r) in rhs.iter().enumerate() {
                        if !j_inv[i][k].is_zero() {
                            acc = acc.sum(&r.scale(&j_inv[i][k]))?;
                        }
                    }
                    Ok(acc)
                })
                .collect()
        };
        let identity = SeriesSystem::identity(d, order);
        let mut g = apply_inv(&identity.components, order.min(1))?;
        for k in 2..=order {
            let inner = SeriesSystem { components: g.iter().map(|c| c.padded(k)).collect() };
            let mut images = MonomialImages::new(&inner)?;
            let rhs: Vec<TruncatedSeries> = nonlinear
                .iter()
                .zip(&identity.components)
                .map(|(h, x)| x.truncate(k).difference(&h.truncate(k).compose_with(&inner, &mut images)?))
                .collect::<Result<_>>()?;
            g = apply_inv(&rhs, k)?;
        }
        Ok(SeriesSystem { components: g.into_iter().map(|c| c.padded(order)).collect() })
    }
}

/// `n!·[x^n] s` for every known coefficient, as exact rationals.
pub fn exponential_coefficients(s: &TruncatedSeries) -> BTreeMap<MultiIndex, Rational> {
    s.terms().map(|(e, c)| (e.clone(), c * from_bigint(e.factorial()))).collect()
}
