use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::index::{binomial, falling, MultiIndex};
use super::rational::{format_rational, from_bigint, parse_rational, Rational};
use crate::error::{check_dim, Error, Result};

/// Total degree of a polynomial. The zero polynomial has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Sparse multivariate polynomial over ℚ in `x₁, …, x_d`.
///
/// Terms are kept in a `BTreeMap` keyed by exponent, so iteration is ascending
/// graded-lex. No stored coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

/// One `{"exp": [...], "coef": "p/q"}` entry of the JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl MPoly {
    pub fn zero(dim: usize) -> Self {
        MPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        MPoly::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        MPoly::monomial(MultiIndex::zero(dim), c)
    }

    /// The coordinate function `x_axis`.
    pub fn var(dim: usize, axis: usize) -> Self {
        MPoly::monomial(MultiIndex::unit(dim, axis), Rational::one())
    }

    pub fn monomial(exp: MultiIndex, c: Rational) -> Self {
        let mut p = MPoly::zero(exp.dim());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from terms, merging repeated exponents.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = MPoly::zero(dim);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&MultiIndex::zero(self.dim))
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::NegInfinity,
            Some(e) => Degree::Finite(e.total()),
        }
    }

    /// Degree with respect to a single variable.
    pub fn degree_in(&self, axis: usize) -> Degree {
        self.terms.keys().map(|e| e.get(axis)).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, exp: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
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

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.dim);
        }
        MPoly { dim: self.dim, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂p/∂x_axis`
    pub fn partial(&self, axis: usize) -> MPoly {
        self.derivative(&MultiIndex::unit(self.dim, axis))
    }

    /// `D^a p` for a multi-index `a`.
    pub fn derivative(&self, a: &MultiIndex) -> MPoly {
        let mut out = MPoly::zero(self.dim);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(a) {
                let f: num_bigint::BigInt = e.entries().iter().zip(a.entries()).map(|(&n, &k)| falling(n, k)).product();
                out.add_term(rest, c * from_bigint(f));
            }
        }
        out
    }

    /// `p(x + v)`, by binomial expansion one variable at a time.
    pub fn translate(&self, v: &[Rational]) -> Result<MPoly> {
        check_dim(self.dim, v.len())?;
        let mut current = self.clone();
        for (axis, shift) in v.iter().enumerate() {
            if shift.is_zero() {
                continue;
            }
            let mut next = MPoly::zero(self.dim);
            for (e, c) in &current.terms {
                let top = e.get(axis);
                // (x + s)^top = Σ_j binom(top, j) s^(top−j) x^j
                let mut s_pow = Rational::one();
                for j in (0..=top).rev() {
                    let coef = c * &s_pow * from_bigint(binomial(top, j));
                    next.add_term(e.with(axis, j), coef);
                    s_pow *= shift;
                }
            }
            current = next;
        }
        Ok(current)
    }

    pub fn eval(&self, v: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, v.len())?;
        let max_deg: Vec<u32> = (0..self.dim).map(|i| self.degree_in(i).finite().unwrap_or(0)).collect();
        let powers: Vec<Vec<Rational>> = v
            .iter()
            .zip(&max_deg)
            .map(|(x, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                let mut acc = Rational::one();
                for _ in 0..=m {
                    row.push(acc.clone());
                    acc *= x;
                }
                row
            })
            .collect();
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.entries().iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes polynomials for the variables: `p(q₁, …, q_d)`.
    ///
    /// The images all share one dimension, which becomes the result's.
    pub fn substitute(&self, images: &[MPoly]) -> Result<MPoly> {
        check_dim(self.dim, images.len())?;
        let target = images.first().map_or(0, MPoly::dim);
        for q in images {
            check_dim(target, q.dim)?;
        }
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|q| vec![MPoly::one(target), q.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &k) in e.entries().iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    term = &term * &cache[i][k as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Views `p` as a polynomial in `new_dim` variables, its own variables
    /// occupying positions `offset..offset + dim`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> MPoly {
        assert!(offset + self.dim <= new_dim, "embedding does not fit");
        let mut out = MPoly::zero(new_dim);
        for (e, c) in &self.terms {
            let mut v = vec![0; new_dim];
            v[offset..offset + self.dim].copy_from_slice(e.entries());
            out.terms.insert(MultiIndex::new(v), c.clone());
        }
        out
    }

    /// Returns `r` with `self = q·r`, or `NonExactDivision`.
    ///
    /// Runs graded-lex leading-term division. With a monomial order,
    /// `LT(q·r) = LT(q)·LT(r)`, so a leading term of the running remainder
    /// that `LT(q)` does not divide already proves the division inexact.
    pub fn exact_divide(&self, q: &MPoly) -> Result<MPoly> {
        check_dim(self.dim, q.dim)?;
        let (lq_exp, lq_coef) = match q.leading_term() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::BadParams("division by the zero polynomial".into())),
        };
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.dim);
        while let Some((le, lc)) = rem.leading_term() {
            let Some(shift) = le.checked_sub(&lq_exp) else {
                return Err(Error::NonExactDivision);
            };
            let c = lc / &lq_coef;
            let step = MPoly::monomial(shift, c);
            rem = &rem - &(&step * q);
            quot = &quot + &step;
        }
        Ok(quot)
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms.iter().map(|(e, c)| JsonTerm { exp: e.entries().to_vec(), coef: format_rational(c) }).collect()
    }

    pub fn from_json_terms(dim: usize, terms: &[JsonTerm]) -> Result<MPoly> {
        let mut p = MPoly::zero(dim);
        for t in terms {
            check_dim(dim, t.exp.len())?;
            p.add_term(MultiIndex::new(t.exp.clone()), parse_rational(&t.coef)?);
        }
        Ok(p)
    }

    /// Canonical JSON: an array of terms in ascending graded-lex order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_terms()).expect("terms serialize")
    }

    /// Parses the canonical JSON form. The dimension is taken from the
    /// exponents; pass `dim` to fix it (needed for the empty, zero polynomial).
    pub fn from_json(value: &serde_json::Value, dim: Option<usize>) -> Result<MPoly> {
        let terms: Vec<JsonTerm> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = match (dim, terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.exp.len(),
            (None, None) => return Err(Error::Parse("cannot infer the dimension of an empty polynomial".into())),
        };
        MPoly::from_json_terms(dim, &terms)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*x^{}", format_rational(c), e)?;
        }
        Ok(())
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = MPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
