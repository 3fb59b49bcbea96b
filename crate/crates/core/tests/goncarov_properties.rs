use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use umbral::abel::{abel_closed, abel_operator_form, AbelMatrices, LinearGrid};
use umbral::algebra::{frac, from_bigint, MPoly, MultiIndex, Rational};
use umbral::goncarov::{
    expand_in_goncarov, goncarov_poly, interpolation_solve, GoncarovTable, InterpolationGrid, LowerSet,
};
use umbral::operators::{DeltaSystem, SeparableSystem, ShiftInvariantOp};
use umbral::sequences::BasicSequence;

fn rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

fn system(dim: usize) -> impl Strategy<Value = DeltaSystem> {
    prop_oneof![
        Just(SeparableSystem::derivatives(dim).into_system()),
        Just(SeparableSystem::forward_differences(dim).into_system()),
        Just(SeparableSystem::backward_differences(dim).into_system()),
        Just(mixed(dim)),
    ]
}

/// `(D₁ + D₂, D₁ − D₂, …)`: admissible but not separable.
fn mixed(dim: usize) -> DeltaSystem {
    let d = |i| ShiftInvariantOp::derivative(dim, i);
    let mut ops: Vec<ShiftInvariantOp> = (0..dim).map(d).collect();
    if dim >= 2 {
        ops[0] = d(0).add(&d(1)).unwrap();
        ops[1] = d(0).sub(&d(1)).unwrap();
    }
    DeltaSystem::new(ops).unwrap()
}

fn table_grid(dim: usize, maxdeg: u32) -> impl Strategy<Value = InterpolationGrid> {
    let count = MultiIndex::up_to_total(dim, maxdeg).len();
    prop::collection::vec(prop::collection::vec(rational(), dim), count).prop_map(move |zs| {
        let nodes: BTreeMap<MultiIndex, Vec<Rational>> =
            MultiIndex::up_to_total(dim, maxdeg).into_iter().zip(zs).collect();
        InterpolationGrid::table(dim, nodes).unwrap()
    })
}

fn matrix(dim: usize) -> impl Strategy<Value = LinearGrid> {
    prop::collection::vec(prop::collection::vec(rational(), dim), dim).prop_map(|a| LinearGrid::new(a).unwrap())
}

fn index(dim: usize, maxdeg: u32) -> impl Strategy<Value = MultiIndex> {
    let all = MultiIndex::up_to_total(dim, maxdeg);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nodes_outside_the_box_do_not_matter(
        s in system(2),
        grid in table_grid(2, 4),
        n in index(2, 4),
        j in index(2, 4),
        z in prop::collection::vec(rational(), 2),
    ) {
        prop_assume!(!j.is_below(&n));
        let moved = grid.with_node(j, z).unwrap();
        prop_assert_eq!(goncarov_poly(&s, &grid, &n).unwrap(), goncarov_poly(&s, &moved, &n).unwrap());
    }

    #[test]
    fn translation_invariance(
        s in system(2),
        grid in table_grid(2, 4),
        n in index(2, 4),
        v in prop::collection::vec(rational(), 2),
    ) {
        let shifted = grid.translated(&v).unwrap();
        let moved = goncarov_poly(&s, &shifted, &n).unwrap().translate(&v).unwrap();
        prop_assert_eq!(moved, goncarov_poly(&s, &grid, &n).unwrap());
    }

    #[test]
    fn zero_grid_gives_the_basic_sequence(s in system(2), n in index(2, 5)) {
        let zero = InterpolationGrid::zero(2);
        prop_assert_eq!(goncarov_poly(&s, &zero, &n).unwrap(), BasicSequence::new(s).get(&n).unwrap());
    }

    #[test]
    fn solve_and_expand_round_trip(
        s in system(3),
        grid in table_grid(3, 3),
        coeffs in prop::collection::vec(rational(), 20),
    ) {
        let set = LowerSet::simplex(3, 3);
        let basic = BasicSequence::new(s.clone());
        let mut p = MPoly::zero(3);
        for (k, c) in set.indices().iter().zip(&coeffs) {
            p = &p + &basic.get(k).unwrap().scale(c);
        }
        let mut values = BTreeMap::new();
        for k in set.indices() {
            values.insert(k.clone(), s.apply_power(k, &p).unwrap().eval(&grid.node(k).unwrap()).unwrap());
        }
        prop_assert_eq!(interpolation_solve(&s, &grid, &set, &values).unwrap(), p.clone());

        let expansion = expand_in_goncarov(&s, &grid, &p, &set).unwrap();
        let table = GoncarovTable::new(s, grid).unwrap();
        let mut back = MPoly::zero(3);
        for (k, c) in &expansion {
            back = &back + &table.get(k).unwrap().scale(c);
        }
        prop_assert_eq!(back, p);
    }

    #[test]
    fn closed_operator_and_recurrence_agree(a in matrix(2), n in index(2, 5), kind in 0..3usize) {
        let s = match kind {
            0 => SeparableSystem::derivatives(2),
            1 => SeparableSystem::forward_differences(2),
            _ => SeparableSystem::backward_differences(2),
        };
        let closed = abel_closed(&s, &a, &n).unwrap();
        prop_assert_eq!(abel_operator_form(&s, &a, &n).unwrap(), closed.clone());
        prop_assert_eq!(goncarov_poly(s.system(), &a.clone().into(), &n).unwrap(), closed);
    }

    #[test]
    fn bivariate_determinant_specialization(a in matrix(2), m in 0..5u32, n in 0..5u32) {
        let s = SeparableSystem::derivatives(2);
        let det = AbelMatrices::new(&s, &a, &MultiIndex::from([m, n])).unwrap().det_b_plus_c();
        let x0n = a.node(&MultiIndex::from([0, n]))[0].clone();
        let ym0 = a.node(&MultiIndex::from([m, 0]))[1].clone();
        let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let c = |r: &Rational| MPoly::constant(2, r.clone());
        let want = &(&(&x - &c(&x0n)) * &(&y - &c(&ym0))) - &c(&(&x0n * &ym0));
        prop_assert_eq!(det, want);
    }
}

#[test]
fn parallel_population_matches_sequential() {
    let s = SeparableSystem::forward_differences(3).into_system();
    let a = LinearGrid::new(vec![
        vec![frac(1, 2), frac(-1, 1), frac(0, 1)],
        vec![frac(2, 3), frac(1, 1), frac(-3, 2)],
        vec![frac(0, 1), frac(1, 4), frac(2, 1)],
    ])
    .unwrap();
    let grid: InterpolationGrid = a.into();
    let sequential = GoncarovTable::new(s.clone(), grid.clone()).unwrap().table(4, 1).unwrap();
    let parallel = GoncarovTable::new(s, grid).unwrap().table(4, 4).unwrap();
    assert_eq!(sequential, parallel);
}

#[test]
fn interpolation_conditions_select_the_diagonal() {
    let s = mixed(2);
    let grid = InterpolationGrid::table(
        2,
        MultiIndex::up_to_total(2, 3)
            .into_iter()
            .map(|k| {
                let z = vec![frac(k.get(0) as i64 * 3 - 1, 2), frac(k.total() as i64, 3)];
                (k, z)
            })
            .collect(),
    )
    .unwrap();
    let table = GoncarovTable::new(s.clone(), grid.clone()).unwrap();
    for n in MultiIndex::up_to_total(2, 3) {
        let t = table.get(&n).unwrap();
        for k in n.box_below() {
            let v = s.apply_power(&k, &t).unwrap().eval(&grid.node(&k).unwrap()).unwrap();
            let want = if k == n { from_bigint(n.factorial()) } else { Rational::zero() };
            assert_eq!(v, want, "k = {k}, n = {n}");
        }
    }
}
