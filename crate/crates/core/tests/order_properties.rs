mod common;

use ctxdom::order::{validate_poset, MeasurementMap, PosetSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_poset(max: usize) -> impl Strategy<Value = ctxdom::order::FiniteDomain> {
    (1..=max, any::<u64>(), 0.05f64..0.7).prop_map(|(n, seed, density)| {
        common::random_poset(&mut ChaCha8Rng::seed_from_u64(seed), n, density)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_satisfies_poset_axioms(d in arb_poset(10)) {
        prop_assert!(common::poset_axioms_hold(&d));
    }

    #[test]
    fn finite_posets_are_dcpos(d in arb_poset(10)) {
        prop_assert!(d.is_dcpo().unwrap());
    }

    #[test]
    fn way_below_coincides_with_order(d in arb_poset(10)) {
        let table = d.way_below_table().unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                prop_assert_eq!(w, d.leq_at(i, j));
            }
        }
        // spot-check the single-pair entry point against the table
        let (x, y) = (d.name(0), d.name(d.len() - 1));
        prop_assert_eq!(d.way_below(x, y).unwrap(), d.leq(x, y).unwrap());
    }

    #[test]
    fn approximation_is_context_independent(d in arb_poset(8)) {
        let r = d.approximation_transitivity_check().unwrap();
        prop_assert!(r.pass, "counterexamples: {:?}", r.counterexamples);
    }

    #[test]
    fn up_down_duality(d in arb_poset(10)) {
        for x in d.elements() {
            for y in d.elements() {
                let up = d.upset(x).unwrap().contains(y.as_str());
                let down = d.downset(y).unwrap().contains(x.as_str());
                prop_assert_eq!(up, down);
            }
            prop_assert!(d.upset(x).unwrap().contains(x.as_str()));
        }
    }

    #[test]
    fn maximal_elements_have_singleton_upsets(d in arb_poset(10)) {
        let max = d.maximal_elements();
        prop_assert!(!max.is_empty());
        for x in d.elements() {
            prop_assert_eq!(max.contains(x.as_str()), d.upset(x).unwrap().len() == 1);
        }
    }

    #[test]
    fn directed_sets_with_a_top_have_it_as_supremum(d in arb_poset(8), pick in any::<u16>()) {
        // the downset of any element is directed and its supremum is that element
        let x = d.name(pick as usize % d.len()).to_string();
        let down: Vec<&str> = d.downset(&x).unwrap().into_iter().collect();
        prop_assert!(d.is_directed(&down).unwrap());
        prop_assert_eq!(d.supremum(&down).unwrap(), Some(x.as_str()));
    }

    #[test]
    fn orthogonality_is_symmetric(d in arb_poset(8), contents in prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..2.0], 8)) {
        let m = MeasurementMap::new(d.clone(), d.elements().iter().zip(contents)).unwrap();
        for x in d.elements() {
            for y in d.elements() {
                prop_assert_eq!(m.orthogonal(x, y).unwrap(), m.orthogonal(y, x).unwrap());
            }
        }
    }
}

#[test]
fn content_above_tolerance_breaks_orthogonality() {
    let d = validate_poset(PosetSpec::new(["x", "y", "t"], [("x", "t"), ("y", "t")])).unwrap();
    let tiny = MeasurementMap::new(d.clone(), [("x", 1.0), ("y", 1.0), ("t", 1e-13)]).unwrap();
    assert!(tiny.orthogonal("x", "y").unwrap());
    let small = MeasurementMap::new(d, [("x", 1.0), ("y", 1.0), ("t", 1e-11)]).unwrap();
    assert!(!small.orthogonal("x", "y").unwrap());
}
