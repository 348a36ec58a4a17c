use benney_core::numeric::{apply_group_transform, relative_l2, GridState};
use benney_core::operator::{embed_point_symmetry, lie_bracket, verify_jet, verify_restricted};
use benney_core::{generate_eta_row, CanonicalOperator, EtaMatrix, PointGeneratorId, Polynomial};
use proptest::prelude::*;

fn row(k: usize, n: usize) -> CanonicalOperator {
    CanonicalOperator::moment_only(generate_eta_row(k, n).unwrap().coords()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rows_satisfy_both_forms((k, n) in (0usize..5).prop_flat_map(|k| (Just(k), k + 1..14))) {
        let op = row(k, n);
        prop_assert!(verify_restricted(&op).unwrap().passed());
        let zero = Polynomial::zero();
        let lifted = embed_point_symmetry(op.coords(), &zero, &zero, n).unwrap();
        prop_assert!(verify_jet(&lifted).unwrap().passed());
    }

    #[test]
    fn prefix_stable(k in 0usize..4, short in 5usize..9, extra in 1usize..5) {
        let a = generate_eta_row(k, short).unwrap();
        let b = generate_eta_row(k, short + extra).unwrap();
        prop_assert_eq!(&b.coords()[..=short], &a.coords()[..]);
    }

    #[test]
    fn bracket_is_antisymmetric_and_closed(k1 in 0usize..5, k2 in 0usize..5) {
        let (a, b) = (row(k1, 10), row(k2, 10));
        let ab = lie_bracket(&a, &b).unwrap();
        let ba = lie_bracket(&b, &a).unwrap();
        let neg: Vec<Polynomial> = ba.coords().iter().map(|c| -c).collect();
        prop_assert_eq!(ab.coords(), &neg[..]);
        prop_assert!(verify_restricted(&ab).unwrap().passed());
    }

    #[test]
    fn entries_round_trip_through_text(k in 0usize..4, n in 5usize..12) {
        let m = benney_core::generate_eta_matrix(k, n).unwrap();
        let back = EtaMatrix::from_json(&m.to_json()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn translations_compose(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let s = GridState::gaussian_moments(2, 32, 1.0).unwrap();
        let ab = apply_group_transform(
            &apply_group_transform(&s, PointGeneratorId::X2, a).unwrap(),
            PointGeneratorId::X2,
            b,
        )
        .unwrap();
        let direct = apply_group_transform(&s, PointGeneratorId::X2, a + b).unwrap();
        prop_assert!(relative_l2(&direct, &ab) < 1e-12);
    }

    #[test]
    fn galilean_boosts_compose(a in -0.5f64..0.5, b in -0.5f64..0.5) {
        let s = GridState::gaussian_moments(3, 32, 1.0).unwrap();
        let ab = apply_group_transform(
            &apply_group_transform(&s, PointGeneratorId::X3, a).unwrap(),
            PointGeneratorId::X3,
            b,
        )
        .unwrap();
        let direct = apply_group_transform(&s, PointGeneratorId::X3, a + b).unwrap();
        prop_assert!(relative_l2(&direct, &ab) < 1e-12);
    }
}
