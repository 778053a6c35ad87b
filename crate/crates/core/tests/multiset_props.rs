use mwmso::structures::{PvStructure, RatioStructure, ValuationStructure, Weight};
use mwmso::{lift_val, FiniteMultiset};
use num_bigint::BigUint;
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = Weight> {
    (-3i64..=3, 0i64..=3).prop_map(|(r, c)| Weight::from_ints(&[r, c]))
}

fn multiset() -> impl Strategy<Value = FiniteMultiset<Weight>> {
    prop::collection::vec((weight(), 1u32..=4), 0..=4).prop_map(FiniteMultiset::from_counts)
}

fn prod(a: &Weight, b: &Weight) -> Weight {
    RatioStructure.prod(a, b)
}

fn val(xs: &[Weight]) -> Weight {
    RatioStructure.val(xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn union_is_a_commutative_monoid(x in multiset(), y in multiset(), z in multiset()) {
        prop_assert_eq!(x.union(&y).union(&z), x.union(&y.union(&z)));
        prop_assert_eq!(x.union(&y), y.union(&x));
        prop_assert_eq!(x.union(&FiniteMultiset::empty()), x);
    }

    #[test]
    fn cauchy_unit_and_zero(x in multiset()) {
        let unit = FiniteMultiset::singleton(RatioStructure.unit());
        prop_assert_eq!(unit.cauchy_product(&x, prod), x.clone());
        prop_assert_eq!(x.cauchy_product(&unit, prod), x.clone());
        prop_assert!(FiniteMultiset::empty().cauchy_product(&x, prod).is_empty());
        prop_assert!(x.cauchy_product(&FiniteMultiset::empty(), prod).is_empty());
    }

    #[test]
    fn cauchy_distributes_over_union(x in multiset(), y in multiset(), z in multiset()) {
        prop_assert_eq!(
            x.cauchy_product(&y.union(&z), prod),
            x.cauchy_product(&y, prod).union(&x.cauchy_product(&z, prod))
        );
        prop_assert_eq!(
            y.union(&z).cauchy_product(&x, prod),
            y.cauchy_product(&x, prod).union(&z.cauchy_product(&x, prod))
        );
    }

    #[test]
    fn cauchy_counts_multiply(x in multiset(), y in multiset()) {
        prop_assert_eq!(x.cauchy_product(&y, prod).total_count(), x.total_count() * y.total_count());
    }

    #[test]
    fn lift_val_on_singletons(ms in prop::collection::vec(weight(), 1..=5)) {
        let singles: Vec<_> = ms.iter().cloned().map(FiniteMultiset::singleton).collect();
        prop_assert_eq!(lift_val(&singles, val), FiniteMultiset::singleton(val(&ms)));
    }

    #[test]
    fn lift_val_absorbs_empty(rs in prop::collection::vec(multiset(), 1..=4), at in 0usize..4) {
        let mut rs = rs;
        let at = at % rs.len();
        rs[at] = FiniteMultiset::empty();
        prop_assert!(lift_val(&rs, val).is_empty());
    }

    #[test]
    fn lift_val_counts_tuples(rs in prop::collection::vec(multiset(), 1..=3)) {
        let expect: BigUint = rs.iter().map(|r| r.total_count()).product();
        prop_assert_eq!(lift_val(&rs, val).total_count(), expect);
    }
}
