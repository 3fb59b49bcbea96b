use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::algebra::{factorial, MultiIndex, Rational, TruncatedSeries};
use crate::error::{Error, Result};

/// How far the coefficients of an indicator are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderBound {
    /// Closed form: every coefficient is available.
    Unbounded,
    /// Coefficients with `|n| ≤ N` are known.
    Finite(usize),
    /// Nothing is known (the derivative of an order-0 series).
    Empty,
}

impl OrderBound {
    pub fn covers(self, order: usize) -> bool {
        match self {
            OrderBound::Unbounded => true,
            OrderBound::Finite(n) => order <= n,
            OrderBound::Empty => false,
        }
    }

    fn min(self, other: OrderBound) -> OrderBound {
        use OrderBound::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Unbounded, o) | (o, Unbounded) => o,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
        }
    }

    fn lowered(self) -> OrderBound {
        match self {
            OrderBound::Finite(0) => OrderBound::Empty,
            OrderBound::Finite(n) => OrderBound::Finite(n - 1),
            other => other,
        }
    }

    /// A concrete order to probe: the bound itself, or `probe` if unbounded.
    pub fn probe(self, probe: usize) -> Option<usize> {
        match self {
            OrderBound::Unbounded => Some(probe),
            OrderBound::Finite(n) => Some(n.min(probe)),
            OrderBound::Empty => None,
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Explicit(TruncatedSeries),
    Constant(Rational),
    Variable(usize),
    /// `e^{v·x}`
    Exp(Vec<Rational>),
    /// `(e^{h·x_axis} − 1)/(h·x_axis)`
    ExpQuotient {
        axis: usize,
        step: Rational,
    },
    Sum(Vec<Indicator>),
    Product(Vec<Indicator>),
    Scale(Rational, Indicator),
    Partial(Indicator, usize),
    Reciprocal(Indicator),
    Power(Indicator, u32),
}

struct Node {
    dim: usize,
    kind: Kind,
    label: String,
    cache: Mutex<Option<TruncatedSeries>>,
}

/// The formal power series `f` with `L = f(D₁, …, D_d)`.
///
/// Closed forms answer any coefficient; explicit series answer up to their
/// declared order. The largest expansion computed so far is memoized behind
/// a mutex, so concurrent queries are safe and repeated queries agree.
#[derive(Clone)]
pub struct Indicator(Arc<Node>);

impl Indicator {
    fn build(dim: usize, kind: Kind, label: impl Into<String>) -> Indicator {
        Indicator(Arc::new(Node { dim, kind, label: label.into(), cache: Mutex::new(None) }))
    }

    /// An explicit series, known only up to its order.
    pub fn explicit(series: TruncatedSeries) -> Indicator {
        let label = format!("series(order {})", series.order());
        Indicator::build(series.dim(), Kind::Explicit(series), label)
    }

    pub fn constant(dim: usize, c: Rational) -> Indicator {
        let label = c.to_string();
        Indicator::build(dim, Kind::Constant(c), label)
    }

    pub fn variable(dim: usize, axis: usize) -> Indicator {
        Indicator::build(dim, Kind::Variable(axis), format!("x{axis}"))
    }

    /// `e^{v·x}`, the indicator of the shift `E_v`.
    pub fn exp(v: Vec<Rational>) -> Indicator {
        let label = format!("exp({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        Indicator::build(v.len(), Kind::Exp(v), label)
    }

    /// `(e^{h·x_axis} − 1)/(h·x_axis)`. With `h = 1` this is the Bernoulli
    /// operator `∫ₓ^{x+1}`; with `h = −1` its backward counterpart.
    pub fn exp_quotient(dim: usize, axis: usize, step: Rational) -> Result<Indicator> {
        if step.is_zero() {
            return Err(Error::BadParams("exp_quotient step must be nonzero".into()));
        }
        let label = format!("(exp({step}*x{axis})-1)/({step}*x{axis})");
        Ok(Indicator::build(dim, Kind::ExpQuotient { axis, step }, label))
    }

    pub fn sum(parts: Vec<Indicator>) -> Result<Indicator> {
        let dim = Self::common_dim(&parts)?;
        let label = parts.iter().map(|p| p.label().to_string()).collect::<Vec<_>>().join(" + ");
        Ok(Indicator::build(dim, Kind::Sum(parts), format!("({label})")))
    }

    pub fn product(parts: Vec<Indicator>) -> Result<Indicator> {
        let dim = Self::common_dim(&parts)?;
        let label = parts.iter().map(|p| p.label().to_string()).collect::<Vec<_>>().join("*");
        Ok(Indicator::build(dim, Kind::Product(parts), label))
    }

    pub fn scaled(&self, c: Rational) -> Indicator {
        let label = format!("{c}*{}", self.label());
        Indicator::build(self.dim(), Kind::Scale(c, self.clone()), label)
    }

    pub fn partial(&self, axis: usize) -> Indicator {
        let label = format!("d/dx{axis}[{}]", self.label());
        Indicator::build(self.dim(), Kind::Partial(self.clone(), axis), label)
    }

    pub fn reciprocal(&self) -> Indicator {
        let label = format!("1/{}", self.label());
        Indicator::build(self.dim(), Kind::Reciprocal(self.clone()), label)
    }

    pub fn power(&self, k: u32) -> Indicator {
        let label = format!("({})^{k}", self.label());
        Indicator::build(self.dim(), Kind::Power(self.clone(), k), label)
    }

    /// Replaces the provenance tag.
    pub fn labeled(self, label: impl Into<String>) -> Indicator {
        Indicator::build(self.dim(), self.0.kind.clone(), label)
    }

    fn common_dim(parts: &[Indicator]) -> Result<usize> {
        let first = parts.first().ok_or_else(|| Error::BadParams("empty operator combination".into()))?;
        for p in parts {
            crate::error::check_dim(first.dim(), p.dim())?;
        }
        Ok(first.dim())
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// The shift vector when this indicator is exactly `e^{v·x}`.
    pub fn as_shift(&self) -> Option<&[Rational]> {
        match &self.0.kind {
            Kind::Exp(v) => Some(v),
            _ => None,
        }
    }

    pub fn available_order(&self) -> OrderBound {
        match &self.0.kind {
            Kind::Explicit(s) => OrderBound::Finite(s.order()),
            Kind::Constant(_) | Kind::Variable(_) | Kind::Exp(_) | Kind::ExpQuotient { .. } => OrderBound::Unbounded,
            Kind::Sum(parts) | Kind::Product(parts) => {
                parts.iter().map(Indicator::available_order).fold(OrderBound::Unbounded, OrderBound::min)
            }
            Kind::Scale(_, i) | Kind::Reciprocal(i) | Kind::Power(i, _) => i.available_order(),
            Kind::Partial(i, _) => i.available_order().lowered(),
        }
    }

    /// Axes whose variables can occur in the series.
    pub fn support_axes(&self) -> BTreeSet<usize> {
        match &self.0.kind {
            Kind::Explicit(s) => s
                .terms()
                .flat_map(|(e, _)| {
                    e.entries().iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect::<Vec<_>>()
                })
                .collect(),
            Kind::Constant(_) => BTreeSet::new(),
            Kind::Variable(a) | Kind::ExpQuotient { axis: a, .. } => [*a].into(),
            Kind::Exp(v) => v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect(),
            Kind::Sum(parts) | Kind::Product(parts) => parts.iter().flat_map(Indicator::support_axes).collect(),
            Kind::Scale(_, i) | Kind::Partial(i, _) | Kind::Reciprocal(i) | Kind::Power(i, _) => i.support_axes(),
        }
    }

    /// Whether the series is structurally `x_axis · g(x)`, proven from its
    /// construction (explicit series: over the known range).
    pub fn has_factor(&self, axis: usize) -> bool {
        match &self.0.kind {
            Kind::Explicit(s) => s.terms().all(|(e, _)| e.get(axis) > 0),
            Kind::Constant(c) => c.is_zero(),
            Kind::Variable(a) => *a == axis,
            Kind::Exp(_) | Kind::ExpQuotient { .. } | Kind::Reciprocal(_) => false,
            Kind::Sum(parts) => parts.iter().all(|p| p.has_factor(axis)),
            Kind::Product(parts) => parts.iter().any(|p| p.has_factor(axis)),
            Kind::Scale(c, i) => c.is_zero() || i.has_factor(axis),
            Kind::Power(i, k) => *k > 0 && i.has_factor(axis),
            Kind::Partial(..) => false,
        }
    }

    /// Truncation to total degree `order`.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        let bound = self.available_order();
        if !bound.covers(order) {
            let available = match bound {
                OrderBound::Finite(n) => n,
                _ => 0,
            };
            return Err(Error::InsufficientOrder { needed: order, available });
        }
        let mut cache = self.0.cache.lock().expect("indicator cache poisoned");
        if let Some(s) = cache.as_ref() {
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
        }
        let s = self.compute(order)?;
        *cache = Some(s.clone());
        Ok(s)
    }

    pub fn coefficient(&self, e: &MultiIndex) -> Result<Rational> {
        self.series(e.total() as usize)?.coefficient(e)
    }

    fn compute(&self, order: usize) -> Result<TruncatedSeries> {
        let dim = self.dim();
        Ok(match &self.0.kind {
            Kind::Explicit(s) => s.truncate(order),
            Kind::Constant(c) => TruncatedSeries::constant(dim, order, c.clone()),
            Kind::Variable(a) => TruncatedSeries::var(dim, order, *a),
            Kind::Exp(v) => exp_series(v, order),
            Kind::ExpQuotient { axis, step } => {
                let mut terms = Vec::with_capacity(order + 1);
                let mut h_pow = Rational::one();
                for k in 0..=order as u32 {
                    let c = &h_pow / Rational::from_integer(factorial(k + 1));
                    terms.push((MultiIndex::zero(dim).with(*axis, k), c));
                    h_pow *= step;
                }
                TruncatedSeries::from_terms(dim, order, terms)?
            }
            Kind::Sum(parts) => {
                let mut acc = TruncatedSeries::zero(dim, order);
                for p in parts {
                    acc = acc.sum(&p.series(order)?)?;
                }
                acc
            }
            Kind::Product(parts) => {
                let mut acc = TruncatedSeries::one(dim, order);
                for p in parts {
                    acc = acc.product(&p.series(order)?)?;
                }
                acc
            }
            Kind::Scale(c, i) => i.series(order)?.scale(c),
            Kind::Partial(i, axis) => i.series(order + 1)?.partial(*axis),
            Kind::Reciprocal(i) => i.series(order)?.reciprocal()?,
            Kind::Power(i, k) => i.series(order)?.pow(*k),
        })
    }
}

/// `Σ_n v^n/n! x^n` up to `order`, enumerating only axes where `v ≠ 0`.
fn exp_series(v: &[Rational], order: usize) -> TruncatedSeries {
    let dim = v.len();
    let active: Vec<usize> = (0..dim).filter(|&i| !v[i].is_zero()).collect();
    let mut terms: Vec<(MultiIndex, Rational)> = vec![(MultiIndex::zero(dim), Rational::one())];
    for &axis in &active {
        let mut next = Vec::new();
        for (e, c) in &terms {
            let used = e.total() as usize;
            let mut coef = c.clone();
            next.push((e.clone(), coef.clone()));
            for k in 1..=(order - used) as u32 {
                coef = coef * &v[axis] / Rational::from_integer(k.into());
                next.push((e.with(axis, k), coef.clone()));
            }
        }
        terms = next;
    }
    TruncatedSeries::from_terms(dim, order, terms).expect("dimensions agree")
}

impl fmt::Debug for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Indicator({})", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn exp_coefficients() {
        let e = Indicator::exp(vec![int(2), int(0), frac(1, 2)]);
        assert_eq!(e.coefficient(&MultiIndex::from([2, 0, 1])).unwrap(), int(1));
        assert_eq!(e.coefficient(&MultiIndex::from([0, 1, 0])).unwrap(), int(0));
        assert_eq!(e.coefficient(&MultiIndex::from([3, 0, 0])).unwrap(), frac(4, 3));
    }

    #[test]
    fn bernoulli_quotient_times_x_is_forward_difference() {
        let l = Indicator::exp_quotient(1, 0, int(1)).unwrap();
        let delta = Indicator::product(vec![Indicator::variable(1, 0), l]).unwrap();
        let s = delta.series(5).unwrap();
        let want = Indicator::exp(vec![int(1)]).series(5).unwrap().difference(&TruncatedSeries::one(1, 5)).unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn explicit_series_fail_past_their_order() {
        let s = TruncatedSeries::var(2, 3, 0);
        let ind = Indicator::explicit(s);
        assert!(ind.series(3).is_ok());
        assert_eq!(ind.series(4), Err(Error::InsufficientOrder { needed: 4, available: 3 }));
        assert_eq!(ind.partial(0).available_order(), OrderBound::Finite(2));
        let tiny = Indicator::explicit(TruncatedSeries::one(1, 0));
        assert_eq!(tiny.partial(0).available_order(), OrderBound::Empty);
    }

    #[test]
    fn memoized_queries_agree() {
        let ind = Indicator::exp(vec![frac(1, 3), int(-2)]).reciprocal();
        let big = ind.series(8).unwrap();
        let small = ind.series(4).unwrap();
        assert_eq!(small, big.truncate(4));
        assert_eq!(ind.series(8).unwrap(), big);
    }

    #[test]
    fn concurrent_queries_agree() {
        let ind = Indicator::exp(vec![frac(1, 3), int(-2)]);
        let results: Vec<TruncatedSeries> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|k| {
                    let ind = ind.clone();
                    s.spawn(move || ind.series(4 + k % 3).unwrap().truncate(4))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn structural_factor() {
        let d = Indicator::variable(2, 0);
        let sum = Indicator::sum(vec![Indicator::variable(2, 0), Indicator::variable(2, 1)]).unwrap();
        assert!(d.has_factor(0));
        assert!(!d.has_factor(1));
        assert!(!sum.has_factor(0));
        let fwd = Indicator::product(vec![d, Indicator::exp_quotient(2, 0, int(1)).unwrap()]).unwrap();
        assert!(fwd.has_factor(0));
        assert_eq!(fwd.support_axes(), [0].into());
    }
}
