use aperiodica::delone::li_indistinguishable;
use aperiodica::geometry::{difference_set, samples, Isometry, Patch, PointSet, Tile, TilingSystem};
use aperiodica::io::PatchDocument;
use aperiodica::symmetry::{lattice_intersect, LatticeZ2Q};
use aperiodica::{CycloNumber, Rational};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = u8> {
    prop_oneof![Just(4u8), Just(5u8), Just(8u8)]
}

fn element(n: u8) -> impl Strategy<Value = CycloNumber> {
    let d = aperiodica::cyclo::degree(n).unwrap();
    prop::collection::vec((-6i64..=6, 1i64..=4), d)
        .prop_map(move |c| {
            let q: Vec<Rational> = c.into_iter().map(|(a, b)| Rational::new(a, b)).collect();
            CycloNumber::from_coeffs(n, &q).unwrap()
        })
}

fn isometry(n: u8) -> impl Strategy<Value = Isometry> {
    (0i64..2 * n as i64, any::<bool>(), element(n))
        .prop_map(move |(k, r, t)| Isometry::new(CycloNumber::zeta_pow(n, k), r, t).unwrap())
}

fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in field().prop_flat_map(|n| (element(n), element(n), element(n)))) {
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a.conj().conj(), a);
        prop_assert_eq!((a * b).conj(), a.conj() * b.conj());
        prop_assert!(close((a * b).embed(), a.embed() * b.embed()));
        if !a.is_zero() {
            prop_assert_eq!(a * a.inverse().unwrap(), CycloNumber::one(a.index()));
            prop_assert!(a.field_norm() != Rational::from_integer(0));
        }
    }

    #[test]
    fn isometry_group_laws((g, h, x) in field().prop_flat_map(|n| (isometry(n), isometry(n), element(n)))) {
        prop_assert!(g.compose(&g.inverse()).is_identity());
        prop_assert!(g.inverse().compose(&g).is_identity());
        prop_assert_eq!(g.compose(&h).apply(&x), g.apply(&h.apply(&x)));
        prop_assert_eq!(g.compose(&h).inverse(), h.inverse().compose(&g.inverse()));
    }

    #[test]
    fn difference_set_is_symmetric(removed in prop::collection::vec(-8i64..=8, 0..5), offset in 0i64..4) {
        let s = samples::z_with_defects(10.0, Rational::new(offset, 4), &removed);
        let d = difference_set(&s, 4.0).unwrap();
        for v in &d {
            prop_assert!(d.binary_search(&(-*v)).is_ok());
        }
    }

    #[test]
    fn li_reflexive_and_symmetric(ra in prop::collection::vec(-12i64..=12, 0..3), rb in prop::collection::vec(-12i64..=12, 0..3)) {
        let a = samples::z_with_defects(16.0, Rational::from_integer(0), &ra);
        let b = samples::z_with_defects(16.0, Rational::from_integer(0), &rb);
        prop_assert!(li_indistinguishable(&a, &a, 2.0).unwrap().indistinguishable);
        let ab = li_indistinguishable(&a, &b, 2.0).unwrap().indistinguishable;
        let ba = li_indistinguishable(&b, &a, 2.0).unwrap().indistinguishable;
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn intersection_index_matches_covolume(g in lattice(), h in lattice()) {
        let gh = lattice_intersect(&g, &h).unwrap();
        let hg = lattice_intersect(&h, &g).unwrap();
        let abs = |q: Rational| if q < Rational::from_integer(0) { -q } else { q };
        let lhs = abs(g.det()) * Rational::from_integer(gh.index_in_g as i64);
        let rhs = abs(h.det()) * Rational::from_integer(hg.index_in_g as i64);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(lhs, abs(gh.sublattice.det()));
    }

    #[test]
    fn document_round_trip(p in patch()) {
        let doc = PatchDocument::from_patch(&p);
        let text = doc.to_json();
        let back = PatchDocument::from_json(&text).unwrap();
        prop_assert_eq!(back.to_patch().unwrap(), p);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn point_document_round_trip(pts in prop::collection::vec(element(8), 0..20)) {
        let s = PointSet::new(8, 2, pts, 37.25).unwrap();
        let back = PatchDocument::from_json(&PatchDocument::from_point_set(&s).to_json()).unwrap();
        prop_assert_eq!(back.point_set().unwrap(), s);
    }
}

fn lattice() -> impl Strategy<Value = LatticeZ2Q> {
    let q = || (-5i64..=5, 1i64..=3).prop_map(|(a, b)| Rational::new(a, b));
    ([q(), q()], [q(), q()])
        .prop_filter("nondegenerate", |(a, b)| a[0] * b[1] - a[1] * b[0] != Rational::from_integer(0))
        .prop_map(|(a, b)| LatticeZ2Q::new(a, b).unwrap())
}

fn patch() -> impl Strategy<Value = Patch> {
    prop_oneof![
        Just(TilingSystem::AmmannBeenker),
        Just(TilingSystem::Penrose),
        Just(TilingSystem::Pinwheel)
    ]
    .prop_flat_map(|sys| {
        let n = sys.field();
        let protos = sys.prototiles().len();
        let tile = (0..protos, isometry(n), prop::collection::vec(0u8..3, 4)).prop_map(move |(i, g, flips)| {
            let proto = sys.prototiles()[i];
            let decorations = proto
                .standard_decorations()
                .into_iter()
                .zip(flips.iter().cycle())
                .map(|(d, f)| match f {
                    0 => d,
                    1 => d.map(|a| a.reversed()),
                    _ => None,
                })
                .collect();
            Tile::with_decorations(proto, g, decorations)
        });
        prop::collection::vec(tile, 0..12).prop_map(move |tiles| Patch::new(sys, tiles).unwrap())
    })
}
