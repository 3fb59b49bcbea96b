use proptest::prelude::*;
use umbral::algebra::{frac, from_bigint, MPoly, MultiIndex, Rational};
use umbral::operators::presets::{backward_difference, forward_difference};
use umbral::operators::{SeparableSystem, ShiftInvariantOp};
use umbral::sequences::{
    basic_from_generating_function, basic_generating_function, basic_separable, basic_univariate, BasicSequence,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn poly(dim: usize, maxdeg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0..=maxdeg, dim), rational()), 0..=5)
        .prop_map(move |terms| MPoly::from_terms(dim, terms.into_iter().map(|(e, c)| (MultiIndex::new(e), c))).unwrap())
}

/// Shift-invariant operators on two variables, built from the presets and
/// closed under sums and products.
fn operator() -> impl Strategy<Value = ShiftInvariantOp> {
    let leaf = prop_oneof![
        (0..2usize).prop_map(|i| ShiftInvariantOp::derivative(2, i)),
        (0..2usize).prop_map(|i| forward_difference(2, i)),
        (0..2usize).prop_map(|i| backward_difference(2, i)),
        prop::collection::vec(rational(), 2).prop_map(ShiftInvariantOp::shift),
        Just(ShiftInvariantOp::identity(2)),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.compose(&b).unwrap()),
            (inner, rational()).prop_map(|(a, c)| a.scale(c)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_commute_with_translation(op in operator(), p in poly(2, 4), v in prop::collection::vec(rational(), 2)) {
        let lhs = op.apply(&p.translate(&v).unwrap()).unwrap();
        let rhs = op.apply(&p).unwrap().translate(&v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_invariant_operators_commute(a in operator(), b in operator(), p in poly(2, 4)) {
        let ab = a.apply(&b.apply(&p).unwrap()).unwrap();
        let ba = b.apply(&a.apply(&p).unwrap()).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(a.compose(&b).unwrap().apply(&p).unwrap(), ab);
    }

    #[test]
    fn pincherle_is_a_commutator(op in operator(), p in poly(2, 4), axis in 0..2usize) {
        let x = MPoly::var(2, axis);
        let want = &op.apply(&(&x * &p)).unwrap() - &(&x * &op.apply(&p).unwrap());
        prop_assert_eq!(op.pincherle(axis).apply(&p).unwrap(), want);
    }

    #[test]
    fn pincherle_product_rules(l in operator(), s in operator(), p in poly(2, 4)) {
        let dx = ShiftInvariantOp::derivative(2, 0);
        let lhs = l.compose(&dx).unwrap().pincherle(0).apply(&p).unwrap();
        let rhs = l.add(&l.pincherle(0).compose(&dx).unwrap()).unwrap().apply(&p).unwrap();
        prop_assert_eq!(lhs, rhs);

        let lhs = l.compose(&s).unwrap().pincherle(1).apply(&p).unwrap();
        let rhs = l.pincherle(1).compose(&s).unwrap().add(&l.compose(&s.pincherle(1)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs.apply(&p).unwrap());
    }

    #[test]
    fn inverses_undo_their_operator(v in prop::collection::vec(rational(), 2), p in poly(2, 4), axis in 0..2usize) {
        let shift = ShiftInvariantOp::shift(v);
        prop_assert_eq!(shift.inverse().unwrap().apply(&shift.apply(&p).unwrap()).unwrap(), p.clone());
        let l = SeparableSystem::forward_differences(2).factor(axis);
        prop_assert_eq!(l.inverse().unwrap().apply(&l.apply(&p).unwrap()).unwrap(), p);
    }
}

#[test]
fn separable_product_matches_generating_function_to_degree_eight() {
    for s in [
        SeparableSystem::derivatives(2),
        SeparableSystem::forward_differences(2),
        SeparableSystem::backward_differences(2),
    ] {
        let system = s.system().clone();
        let gf = basic_generating_function(&system, 8).unwrap();
        for n in MultiIndex::up_to_total(2, 8) {
            let product = basic_separable(&s, &n).unwrap();
            let direct = &basic_univariate(&s, 0, n.get(0)).unwrap() * &basic_univariate(&s, 1, n.get(1)).unwrap();
            assert_eq!(product, direct);
            let from_gf = gf.coefficient(&n).unwrap().scale(&from_bigint(n.factorial()));
            assert_eq!(from_gf, product, "n = {n}");
        }
        let n = MultiIndex::from([5, 3]);
        assert_eq!(basic_from_generating_function(&system, &n).unwrap(), basic_separable(&s, &n).unwrap());
        let table = BasicSequence::new(system).table(8).unwrap();
        assert_eq!(table.len(), 45);
    }
}
