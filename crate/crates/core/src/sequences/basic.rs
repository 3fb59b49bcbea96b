use std::collections::BTreeMap;
use std::sync::{Mutex, RwLock};

use crate::algebra::{from_bigint, MPoly, MultiIndex};
use crate::error::Result;
use crate::operators::{DeltaSystem, SeparableSystem};

use super::polyseries::PolySeries;

/// Polynomials keyed by multi-index.
pub type PolyTable = BTreeMap<MultiIndex, MPoly>;

/// `p_n(x) = x_i L_i^{−n}(x_i^{n−1})` for `d_i = D_i L_i`, as a polynomial in
/// all `d` variables that depends on `x_i` only.
pub fn basic_univariate(s: &SeparableSystem, axis: usize, n: u32) -> Result<MPoly> {
    let dim = s.dim();
    if n == 0 {
        return Ok(MPoly::one(dim));
    }
    let x = MPoly::var(dim, axis);
    let inv = s.factor(axis).inverse()?.power(n);
    Ok(&x * &inv.apply(&x.pow(n - 1))?)
}

/// `Π_i p^{(i)}_{n_i}(x_i)` for a separable system.
pub fn basic_separable(s: &SeparableSystem, n: &MultiIndex) -> Result<MPoly> {
    let mut out = MPoly::one(s.dim());
    for (axis, &k) in n.entries().iter().enumerate() {
        out = &out * &basic_univariate(s, axis, k)?;
    }
    Ok(out)
}

/// `e^{x·g(y)}` to total order `order` in `y`, with `g` the compositional
/// inverse of the indicator system.
pub fn basic_generating_function(s: &DeltaSystem, order: usize) -> Result<PolySeries> {
    let g = s.indicator_system(order.max(1))?.compositional_inverse()?;
    Ok(PolySeries::dot(g.components())?.exp()?.truncate(order))
}

/// `p_n(x) = n! [y^n] e^{x·g(y)}`.
pub fn basic_from_generating_function(s: &DeltaSystem, n: &MultiIndex) -> Result<MPoly> {
    let gf = basic_generating_function(s, n.total() as usize)?;
    Ok(gf.coefficient(n)?.scale(&from_bigint(n.factorial())))
}

/// The basic polynomial `p_n` of `s`: the product formula for separable
/// systems, the generating function otherwise.
pub fn basic_multivariate(s: &DeltaSystem, n: &MultiIndex) -> Result<MPoly> {
    match s.as_separable() {
        Some(sep) => basic_separable(&sep, n),
        None => basic_from_generating_function(s, n),
    }
}

/// The basic sequence of a delta system, computed on demand and memoized.
///
/// Separable systems multiply univariate factors, each cached per axis and
/// degree. Other systems read coefficients off one generating function,
/// expanded once to the largest order requested so far.
#[derive(Debug)]
pub struct BasicSequence {
    system: DeltaSystem,
    separable: Option<SeparableSystem>,
    table: RwLock<PolyTable>,
    univariate: RwLock<BTreeMap<(usize, u32), MPoly>>,
    gf: Mutex<Option<PolySeries>>,
}

impl BasicSequence {
    pub fn new(system: DeltaSystem) -> Self {
        let separable = system.as_separable();
        BasicSequence {
            system,
            separable,
            table: RwLock::new(BTreeMap::new()),
            univariate: RwLock::new(BTreeMap::new()),
            gf: Mutex::new(None),
        }
    }

    pub fn system(&self) -> &DeltaSystem {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// `p_n`
    pub fn get(&self, n: &MultiIndex) -> Result<MPoly> {
        crate::error::check_dim(self.dim(), n.dim())?;
        if let Some(p) = self.table.read().expect("basic table poisoned").get(n) {
            return Ok(p.clone());
        }
        let p = match &self.separable {
            Some(sep) => {
                let mut out = MPoly::one(self.dim());
                for (axis, &k) in n.entries().iter().enumerate() {
                    out = &out * &self.univariate(sep, axis, k)?;
                }
                out
            }
            None => self.via_gf(n)?,
        };
        self.table.write().expect("basic table poisoned").entry(n.clone()).or_insert_with(|| p.clone());
        Ok(p)
    }

    fn univariate(&self, sep: &SeparableSystem, axis: usize, k: u32) -> Result<MPoly> {
        if let Some(p) = self.univariate.read().expect("basic table poisoned").get(&(axis, k)) {
            return Ok(p.clone());
        }
        let p = basic_univariate(sep, axis, k)?;
        self.univariate.write().expect("basic table poisoned").insert((axis, k), p.clone());
        Ok(p)
    }

    fn via_gf(&self, n: &MultiIndex) -> Result<MPoly> {
        let needed = n.total() as usize;
        let mut gf = self.gf.lock().expect("generating function poisoned");
        if gf.as_ref().is_none_or(|g| g.order() < needed) {
            *gf = Some(basic_generating_function(&self.system, needed)?);
        }
        let c = gf.as_ref().expect("just filled").coefficient(n)?;
        Ok(c.scale(&from_bigint(n.factorial())))
    }

    /// Computes every `p_n` with `|n| ≤ maxdeg`.
    pub fn populate(&self, maxdeg: u32) -> Result<()> {
        if self.separable.is_none() {
            self.via_gf(&MultiIndex::zero(self.dim()).with(0, maxdeg))?;
        }
        for n in MultiIndex::up_to_total(self.dim(), maxdeg) {
            self.get(&n)?;
        }
        Ok(())
    }

    /// The entries with `|n| ≤ maxdeg`, computing any that are missing.
    pub fn table(&self, maxdeg: u32) -> Result<PolyTable> {
        self.populate(maxdeg)?;
        let table = self.table.read().expect("basic table poisoned");
        Ok(table.range(..).filter(|(n, _)| n.total() <= maxdeg).map(|(n, p)| (n.clone(), p.clone())).collect())
    }
}
