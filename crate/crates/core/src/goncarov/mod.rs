//! Delta Gončarov polynomials on arbitrary interpolation grids.
//!
//! `t_n(x; Z)` is the unique polynomial spanned by `{p_k : k ≤ n}` with
//! `ε(z_k) d^k t_n = n! δ_{k,n}` for all `k ≤ n`. It is computed from the
//! triangular recurrence
//!
//! ```text
//! t_n = p_n − Σ_{k < n} C(n, k) p_{n−k}(z_k) t_k
//! ```
//!
//! in graded order, which needs only the nodes `z_k` with `k < n`.

mod grid;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;

pub use grid::{GridSpec, InterpolationGrid, LinearGrid, NodeSpec};

use crate::algebra::{from_bigint, MPoly, MultiIndex, Rational};
use crate::error::{check_dim, Error, Result};
use crate::operators::DeltaSystem;
use crate::report::Outcome;
use crate::sequences::{BasicSequence, PolyTable};

/// A finite downward-closed set of multi-indices, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerSet {
    dim: usize,
    indices: Vec<MultiIndex>,
}

impl LowerSet {
    /// Validates that `k ∈ S` whenever `k ≤ n ∈ S`.
    pub fn new(dim: usize, indices: impl IntoIterator<Item = MultiIndex>) -> Result<LowerSet> {
        let set: BTreeSet<MultiIndex> = indices.into_iter().collect();
        for n in &set {
            check_dim(dim, n.dim())?;
            for axis in 0..dim {
                if let Some(k) = n.decrement(axis) {
                    if !set.contains(&k) {
                        return Err(Error::NotLowerSet(n.clone(), k));
                    }
                }
            }
        }
        Ok(LowerSet { dim, indices: set.into_iter().collect() })
    }

    /// `{k : k ≤ n}`
    pub fn below(n: &MultiIndex) -> LowerSet {
        LowerSet { dim: n.dim(), indices: n.box_below() }
    }

    /// `{k : |k| ≤ maxdeg}`
    pub fn simplex(dim: usize, maxdeg: u32) -> LowerSet {
        LowerSet { dim, indices: MultiIndex::up_to_total(dim, maxdeg) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, k: &MultiIndex) -> bool {
        self.indices.binary_search(k).is_ok()
    }
}

/// The Gončarov polynomials of one system on one grid, memoized.
///
/// Entries are written one grade at a time, after every lower grade is
/// complete, so the entries of a grade can be computed in parallel.
#[derive(Debug)]
pub struct GoncarovTable {
    basic: Arc<BasicSequence>,
    grid: InterpolationGrid,
    entries: RwLock<PolyTable>,
}

impl GoncarovTable {
    pub fn new(system: DeltaSystem, grid: InterpolationGrid) -> Result<GoncarovTable> {
        GoncarovTable::with_basic(Arc::new(BasicSequence::new(system)), grid)
    }

    /// Shares an existing basic-sequence memo.
    pub fn with_basic(basic: Arc<BasicSequence>, grid: InterpolationGrid) -> Result<GoncarovTable> {
        check_dim(basic.dim(), grid.dim())?;
        Ok(GoncarovTable { basic, grid, entries: RwLock::new(BTreeMap::new()) })
    }

    pub fn system(&self) -> &DeltaSystem {
        self.basic.system()
    }

    pub fn basic(&self) -> &Arc<BasicSequence> {
        &self.basic
    }

    pub fn grid(&self) -> &InterpolationGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.basic.dim()
    }

    /// `t_n(x; Z)`
    pub fn get(&self, n: &MultiIndex) -> Result<MPoly> {
        if let Some(t) = self.entries.read().expect("table poisoned").get(n) {
            return Ok(t.clone());
        }
        self.populate(std::slice::from_ref(n), 1)?;
        Ok(self.entries.read().expect("table poisoned")[n].clone())
    }

    /// Computes `t_k` for every `k` below some target, grade by grade. With
    /// `jobs > 1` the entries of each grade are spread over that many threads.
    pub fn populate(&self, targets: &[MultiIndex], jobs: usize) -> Result<()> {
        let mut grades: BTreeMap<u32, Vec<MultiIndex>> = BTreeMap::new();
        {
            let have = self.entries.read().expect("table poisoned");
            let mut needed = BTreeSet::new();
            for n in targets {
                check_dim(self.dim(), n.dim())?;
                if !have.contains_key(n) {
                    needed.extend(n.box_below().into_iter().filter(|k| !have.contains_key(k)));
                }
            }
            for k in needed {
                grades.entry(k.total()).or_default().push(k);
            }
        }
        let Some(&top) = grades.keys().next_back() else {
            return Ok(());
        };
        if !self.basic.system().is_separable() {
            self.basic.populate(top)?;
        }
        let pool = if jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::BadParams(format!("cannot start {jobs} worker threads: {e}")))?,
            )
        } else {
            None
        };
        for grade in grades.into_values() {
            let computed: Vec<(MultiIndex, MPoly)> = match &pool {
                Some(pool) => {
                    pool.install(|| grade.par_iter().map(|n| Ok((n.clone(), self.compute(n)?))).collect::<Result<_>>())?
                }
                None => grade.iter().map(|n| Ok((n.clone(), self.compute(n)?))).collect::<Result<_>>()?,
            };
            self.entries.write().expect("table poisoned").extend(computed);
        }
        Ok(())
    }

    fn compute(&self, n: &MultiIndex) -> Result<MPoly> {
        let mut t = self.basic.get(n)?;
        let entries = self.entries.read().expect("table poisoned");
        for k in n.box_below() {
            if &k == n {
                continue;
            }
            let rest = n.checked_sub(&k).expect("k lies below n");
            let weight = self.basic.get(&rest)?.eval(&self.grid.node(&k)?)? * from_bigint(n.binomial(&k));
            if !weight.is_zero() {
                t = &t - &entries[&k].scale(&weight);
            }
        }
        Ok(t)
    }

    /// The entries with `|n| ≤ maxdeg`, computing any that are missing.
    pub fn table(&self, maxdeg: u32, jobs: usize) -> Result<PolyTable> {
        let targets = MultiIndex::with_total(self.dim(), maxdeg);
        self.populate(&targets, jobs)?;
        let entries = self.entries.read().expect("table poisoned");
        Ok(entries.iter().filter(|(n, _)| n.total() <= maxdeg).map(|(n, t)| (n.clone(), t.clone())).collect())
    }
}

/// `t_n(x; Z)` for the system `s` on the grid `z`.
pub fn goncarov_poly(s: &DeltaSystem, z: &InterpolationGrid, n: &MultiIndex) -> Result<MPoly> {
    GoncarovTable::new(s.clone(), z.clone())?.get(n)
}

/// `d^k p` for every `k ≤ n`, each obtained from a neighbour one step lower.
fn lowered_images(s: &DeltaSystem, p: &MPoly, n: &MultiIndex) -> Result<BTreeMap<MultiIndex, MPoly>> {
    let mut images: BTreeMap<MultiIndex, MPoly> = BTreeMap::new();
    for k in n.box_below() {
        let image = match (0..k.dim()).find(|&i| k.get(i) > 0) {
            None => p.clone(),
            Some(i) => {
                let prev = &images[&k.decrement(i).expect("positive entry")];
                s.op(i).apply(prev)?
            }
        };
        images.insert(k, image);
    }
    Ok(images)
}

/// Checks `ε(z_k) d^k t_n = n! δ_{k,n}` for every `k ≤ n` and `|n| ≤ maxdeg`.
/// Pairs are visited in graded-lex order of `n`, then of `k`.
pub fn biorthogonality_check(s: &DeltaSystem, z: &InterpolationGrid, t: &PolyTable, maxdeg: u32) -> Result<Outcome> {
    check_dim(s.dim(), z.dim())?;
    for n in MultiIndex::up_to_total(s.dim(), maxdeg) {
        let Some(tn) = t.get(&n) else {
            return Ok(Outcome::fail(&n, "entry missing from table"));
        };
        let images = lowered_images(s, tn, &n)?;
        for (k, image) in &images {
            let value = image.eval(&z.node(k)?)?;
            let expected = if k == &n { from_bigint(n.factorial()) } else { Rational::zero() };
            if value != expected {
                return Ok(Outcome::fail_pair(k, &n, format!("functional gives {value}, expected {expected}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// The unique `P` spanned by `{p_k : k ∈ S}` with `ε(z_k) d^k P = b_k` for
/// all `k ∈ S`, namely `Σ_k (b_k / k!) t_k`.
pub fn interpolation_solve(
    s: &DeltaSystem,
    z: &InterpolationGrid,
    set: &LowerSet,
    b: &BTreeMap<MultiIndex, Rational>,
) -> Result<MPoly> {
    if let Some(k) = b.keys().find(|k| !set.contains(k)) {
        return Err(Error::BadParams(format!("value given at {k}, which lies outside the lower set")));
    }
    let table = GoncarovTable::new(s.clone(), z.clone())?;
    table.populate(set.indices(), 1)?;
    let mut out = MPoly::zero(s.dim());
    for k in set.indices() {
        let bk = b.get(k).ok_or_else(|| Error::MissingValue(k.clone()))?;
        if !bk.is_zero() {
            out = &out + &table.get(k)?.scale(&(bk / from_bigint(k.factorial())));
        }
    }
    Ok(out)
}

/// The coefficients `c_k = ε(z_k) d^k P / k!` with `P = Σ_{k ∈ S} c_k t_k`.
///
/// `P` must lie in the span of `{p_k : k ∈ S}`; otherwise the first basic
/// index outside `S` carrying a nonzero coefficient is reported.
pub fn expand_in_goncarov(
    s: &DeltaSystem,
    z: &InterpolationGrid,
    p: &MPoly,
    set: &LowerSet,
) -> Result<BTreeMap<MultiIndex, Rational>> {
    check_dim(s.dim(), p.dim())?;
    check_dim(s.dim(), set.dim())?;
    let origin = vec![Rational::zero(); s.dim()];
    if let Some(deg) = p.degree().finite() {
        for k in MultiIndex::up_to_total(s.dim(), deg) {
            if set.contains(&k) {
                continue;
            }
            if !s.apply_power(&k, p)?.eval(&origin)?.is_zero() {
                return Err(Error::NotInSpan(k));
            }
        }
    }
    let mut out = BTreeMap::new();
    for k in set.indices() {
        let c = s.apply_power(k, p)?.eval(&z.node(k)?)? / from_bigint(k.factorial());
        out.insert(k.clone(), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};
    use crate::operators::SeparableSystem;

    fn one_dim_grid(nodes: &[i64]) -> InterpolationGrid {
        let map = nodes.iter().enumerate().map(|(k, &a)| (MultiIndex::from([k as u32]), vec![int(a)])).collect();
        InterpolationGrid::table(1, map).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let d1 = SeparableSystem::derivatives(1).into_system();
        let z = one_dim_grid(&[0, 1, 5]);
        assert_eq!(goncarov_poly(&d1, &z, &MultiIndex::from([0])).unwrap(), MPoly::one(1));
        let x = MPoly::var(1, 0);
        let want = &x.pow(2) - &x.scale(&int(2));
        assert_eq!(goncarov_poly(&d1, &z, &MultiIndex::from([2])).unwrap(), want);
        assert_eq!(
            goncarov_poly(&d1, &one_dim_grid(&[0]), &MultiIndex::from([2])),
            Err(Error::MissingNode(MultiIndex::from([1])))
        );
    }

    #[test]
    fn solve_example() {
        let d1 = SeparableSystem::derivatives(1).into_system();
        let z = one_dim_grid(&[0, 1, 7]);
        let set = LowerSet::simplex(1, 2);
        let b = [(0, 1), (1, 2), (2, 3)].iter().map(|&(k, v)| (MultiIndex::from([k]), int(v))).collect();
        let p = interpolation_solve(&d1, &z, &set, &b).unwrap();
        let x = MPoly::var(1, 0);
        let want = &(&MPoly::one(1) - &x) + &x.pow(2).scale(&frac(3, 2));
        assert_eq!(p, want);
    }

    #[test]
    fn lower_set_validation() {
        let ok = LowerSet::new(2, [[0, 0], [1, 0], [0, 1], [1, 1]].map(MultiIndex::from)).unwrap();
        assert_eq!(ok.len(), 4);
        assert_eq!(
            LowerSet::new(2, [[0, 0], [1, 1]].map(MultiIndex::from)),
            Err(Error::NotLowerSet(MultiIndex::from([1, 1]), MultiIndex::from([0, 1])))
        );
    }

    #[test]
    fn injected_fault_is_located() {
        let s = SeparableSystem::forward_differences(2).into_system();
        let z: InterpolationGrid = LinearGrid::from_integers(&[vec![1, 2], vec![0, -1]]).unwrap().into();
        let table = GoncarovTable::new(s.clone(), z.clone()).unwrap();
        let mut t = table.table(3, 1).unwrap();
        assert!(biorthogonality_check(&s, &z, &t, 3).unwrap().passed());
        let k = MultiIndex::from([1, 1]);
        let bumped = &t[&k] + &MPoly::one(2);
        t.insert(k.clone(), bumped);
        let out = biorthogonality_check(&s, &z, &t, 3).unwrap();
        let w = out.witness().unwrap();
        assert_eq!((w.k.clone(), w.n.clone()), (Some(MultiIndex::zero(2)), k));
    }

    #[test]
    fn parallel_population_matches_sequential() {
        let s = SeparableSystem::backward_differences(2).into_system();
        let z = InterpolationGrid::zero(2).with_node(MultiIndex::from([1, 0]), vec![frac(1, 3), int(2)]).unwrap();
        let a = GoncarovTable::new(s.clone(), z.clone()).unwrap().table(4, 1).unwrap();
        let b = GoncarovTable::new(s, z).unwrap().table(4, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn expansion_examples() {
        let s = SeparableSystem::forward_differences(2).into_system();
        let z = InterpolationGrid::zero(2).with_node(MultiIndex::from([0, 1]), vec![int(3), frac(-1, 2)]).unwrap();
        let set = LowerSet::simplex(2, 2);
        let one = expand_in_goncarov(&s, &z, &MPoly::one(2), &set).unwrap();
        assert!(one.iter().all(|(k, c)| *c == if k.is_zero() { int(1) } else { int(0) }));
        let p = MPoly::var(2, 0).pow(3);
        assert_eq!(expand_in_goncarov(&s, &z, &p, &set), Err(Error::NotInSpan(MultiIndex::from([3, 0]))));
    }
}
