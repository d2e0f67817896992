use localp2::rational::{self, Rational};
use localp2::{Series, Var};
use proptest::prelude::*;

const ORDER: i64 = 8;

fn rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| rational::q(n, d))
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(rat(), ORDER as usize).prop_map(|c| Series::from_coeffs(Var::Y, c))
}

/// Valuation exactly `val`: nonzero leading coefficient.
fn laurent(val: i64) -> impl Strategy<Value = Series> {
    (rat().prop_filter("nonzero", |c| *c != Rational::from_integer(0.into())), prop::collection::vec(rat(), 6))
        .prop_map(move |(lead, rest)| Series::laurent(Var::S, val, std::iter::once(lead).chain(rest).collect()))
}

/// `y·(unit)`, invertible under composition.
fn tangent() -> impl Strategy<Value = Series> {
    (rat().prop_filter("nonzero", |c| *c != Rational::from_integer(0.into())), prop::collection::vec(rat(), 6))
        .prop_map(|(lead, rest)| Series::laurent(Var::Y, 1, std::iter::once(lead).chain(rest).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        let ab = a.checked_add(&b).unwrap();
        prop_assert!(ab.checked_add(&c).unwrap().agrees_with(&a.checked_add(&b.checked_add(&c).unwrap()).unwrap()));
        prop_assert!(a.checked_mul(&b).unwrap().agrees_with(&b.checked_mul(&a).unwrap()));
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        let abc = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        prop_assert!(abc.agrees_with(&a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()));
    }

    #[test]
    fn leibniz(a in series(), b in series()) {
        let ab = a.checked_mul(&b).unwrap();
        for d in [Series::derive, Series::theta] {
            let lhs = d(&ab).unwrap();
            let rhs = d(&a).unwrap().checked_mul(&b).unwrap().checked_add(&a.checked_mul(&d(&b).unwrap()).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn reverse_is_compositional_inverse(f in tangent()) {
        let g = f.reverse().unwrap();
        let id = Series::identity(Var::Y, f.order());
        prop_assert!(f.compose(&g).unwrap().agrees_with(&id));
        prop_assert!(g.compose(&f).unwrap().agrees_with(&id));
    }

    #[test]
    fn exp_log_round_trip(f in tangent()) {
        prop_assert!(f.exp().unwrap().log().unwrap().agrees_with(&f));
    }

    #[test]
    fn laurent_valuation(v1 in -4i64..4, v2 in -4i64..4, a in laurent(0), b in laurent(0)) {
        let a = a.shift(v1);
        let b = b.shift(v2);
        prop_assert_eq!(a.valuation(), v1);
        let p = a.checked_mul(&b).unwrap();
        prop_assert_eq!(p.valuation(), v1 + v2);
        prop_assert_eq!(p.relative_order(), a.relative_order().min(b.relative_order()));
        let one = a.checked_mul(&a.inverse().unwrap()).unwrap();
        prop_assert!(one.agrees_with(&Series::one(Var::S, one.order())));
    }

    #[test]
    fn record_round_trip(a in laurent(-3)) {
        let json = serde_json::to_string(&a).unwrap();
        let back: Series = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn canonical_rational_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let r = rational::q(n, d);
        prop_assert_eq!(rational::parse(&rational::to_canonical(&r)).unwrap(), r);
    }
}

#[test]
fn mismatched_variables_are_rejected() {
    let a = Series::from_ints(Var::Y, &[1, 2]);
    let b = Series::from_ints(Var::S, &[1, 2]);
    assert!(a.checked_add(&b).is_err());
    assert!(a.checked_mul(&b).is_err());
}
