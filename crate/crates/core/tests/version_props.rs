//! Property tests for the version ordering: total-order axioms over
//! generated version strings, and numeric agreement on dotted numerics.

use std::cmp::Ordering;

use proptest::prelude::*;

use depgraph::version::{compare_versions, VersionKey};

fn segment() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..40).prop_map(|n| n.to_string()),
        prop_oneof![
            Just("alpha"),
            Just("beta"),
            Just("milestone"),
            Just("rc"),
            Just("cr"),
            Just("snapshot"),
            Just("ga"),
            Just("final"),
            Just("release"),
            Just("sp"),
            Just("SNAPSHOT"),
            Just("Alpha"),
        ]
        .prop_map(String::from),
        // short unknown qualifiers and mixed runs
        "[a-c]{1,3}",
        "[0-9]{1,2}[a-c]{1,2}",
    ]
}

fn version_string() -> impl Strategy<Value = String> {
    (
        segment(),
        prop::collection::vec((prop_oneof![Just("."), Just("-")], segment()), 0..5),
    )
        .prop_map(|(head, tail)| {
            let mut s = head;
            for (sep, seg) in tail {
                s.push_str(sep);
                s.push_str(&seg);
            }
            s
        })
}

fn key(s: &str) -> VersionKey {
    VersionKey::parse(s).unwrap()
}

proptest! {
    #[test]
    fn reflexive(a in version_string()) {
        prop_assert_eq!(compare_versions(&key(&a), &key(&a)), Ordering::Equal);
    }

    #[test]
    fn antisymmetric(a in version_string(), b in version_string()) {
        let ka = key(&a);
        let kb = key(&b);
        prop_assert_eq!(compare_versions(&ka, &kb), compare_versions(&kb, &ka).reverse());
    }

    #[test]
    fn transitive(a in version_string(), b in version_string(), c in version_string()) {
        let mut keys = [key(&a), key(&b), key(&c)];
        keys.sort();
        // sorted order must be internally consistent
        prop_assert_ne!(compare_versions(&keys[0], &keys[1]), Ordering::Greater);
        prop_assert_ne!(compare_versions(&keys[1], &keys[2]), Ordering::Greater);
        prop_assert_ne!(compare_versions(&keys[0], &keys[2]), Ordering::Greater);
    }

    #[test]
    fn equal_raws_give_equal_keys(a in version_string()) {
        let k1 = key(&a);
        let k2 = key(&a);
        prop_assert_eq!(k1.tokens(), k2.tokens());
        prop_assert_eq!(k1.canonical(), k2.canonical());
    }

    #[test]
    fn numeric_dotted_versions_order_numerically(
        xs in prop::collection::vec(0u64..1000, 1..5),
        ys in prop::collection::vec(0u64..1000, 1..5),
    ) {
        let render = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(".");
        // zero-padded lexicographic comparison of the integer tuples
        let len = xs.len().max(ys.len());
        let mut oracle = Ordering::Equal;
        for i in 0..len {
            let x = xs.get(i).copied().unwrap_or(0);
            let y = ys.get(i).copied().unwrap_or(0);
            if x != y {
                oracle = x.cmp(&y);
                break;
            }
        }
        prop_assert_eq!(
            compare_versions(&key(&render(&xs)), &key(&render(&ys))),
            oracle
        );
    }
}

#[test]
fn explicit_transitivity_triples() {
    // The degenerate corner where zero meets qualifiers on both sides.
    for (a, b, c) in [
        ("0.alpha", "0", "ga-sp"),
        ("1.0-alpha", "1", "1.sp"),
        ("1.0.0", "1-ga", "1-sp"),
    ] {
        let (ka, kb, kc) = (key(a), key(b), key(c));
        let ab = compare_versions(&ka, &kb);
        let bc = compare_versions(&kb, &kc);
        let ac = compare_versions(&ka, &kc);
        if ab != Ordering::Greater && bc != Ordering::Greater {
            assert_ne!(ac, Ordering::Greater, "{a} {b} {c}");
        }
    }
}
