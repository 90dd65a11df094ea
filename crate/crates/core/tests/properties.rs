//! Algebraic laws of the exact geometry layer, point-group closure and the
//! vertex-set lattices.

mod common;

use polycomplex::geometry::{format_rational, parse_rational, Isometry, RationalVec3, SignedPermMatrix};
use proptest::prelude::*;

#[test]
fn signed_permutation_matrices() {
    common::signed_perm_laws().unwrap();
}

#[test]
fn isometries_on_a_grid() {
    common::isometry_laws().unwrap();
}

#[test]
fn closure_is_idempotent() {
    common::closure_laws().unwrap();
}

#[test]
fn lattices_agree_with_basis_spans() {
    common::lattice_laws().unwrap();
}

fn matrix() -> impl Strategy<Value = SignedPermMatrix> {
    (0..48usize).prop_map(|i| SignedPermMatrix::all()[i])
}

fn point() -> impl Strategy<Value = RationalVec3> {
    prop::array::uniform3(-40i64..=40).prop_map(RationalVec3::from_halves)
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (matrix(), point()).prop_map(|(m, t)| Isometry::new(m, t))
}

proptest! {
    #[test]
    fn composition_is_associative(a in isometry(), b in isometry(), c in isometry()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
    }

    #[test]
    fn composition_applies_left_first(a in isometry(), b in isometry(), v in point()) {
        prop_assert_eq!(a.then(&b).apply(v), b.apply(a.apply(v)));
    }

    #[test]
    fn inverse_undoes(a in isometry(), v in point()) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.inverse().apply(a.apply(v)), v);
    }

    #[test]
    fn conjugation_preserves_order(a in isometry(), g in isometry()) {
        prop_assert_eq!(a.conjugate_by(&g).order(), a.order());
    }

    #[test]
    fn involutions_square_to_identity(a in isometry()) {
        prop_assert_eq!(a.is_involution(), !a.is_identity() && a.power(2).is_identity());
    }

    #[test]
    fn point_reflections_fix_their_centre(w in point()) {
        let r = Isometry::point_reflection(w);
        prop_assert!(r.is_involution());
        if let Some(c) = w.midpoint(&RationalVec3::ZERO) {
            prop_assert_eq!(r.apply(c), c);
        }
    }

    #[test]
    fn isometry_text_and_json_round_trip(a in isometry()) {
        prop_assert_eq!(a.to_string().parse::<Isometry>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Isometry>(&json).unwrap(), a);
    }

    #[test]
    fn vector_json_round_trips(v in point()) {
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<RationalVec3>(&json).unwrap(), v);
    }

    #[test]
    fn rationals_round_trip(h in -400i64..=400) {
        let r = RationalVec3::from_halves([h, 0, 0]).coord(0);
        prop_assert_eq!(parse_rational(&format_rational(r)).unwrap(), r);
    }
}
