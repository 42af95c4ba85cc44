use std::cmp::Ordering;

use triset::bounds::*;

#[test]
fn chain_holds_for_small_n() {
    let s = Settings::default();
    for n in [2, 3, 4] {
        for st in verify_chain(n, &s).unwrap() {
            assert!(st.verdict.holds(), "n={n} {}: {}", st.label, st.verdict);
        }
    }
}

#[test]
fn report_against_towers() {
    let rows = section4_report(&Settings::default()).unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert!(r.verdict.holds(), "{}: {}", r.label, r.verdict);
    }
}

#[test]
fn towers_order() {
    let a = tower(&[2, 2, 2, 2], BoundExpr::int(18));
    let b = tower(&[2, 2, 2, 2, 2], BoundExpr::int(96));
    assert_eq!(compare(&a, &b).unwrap(), Ordering::Less);
    assert_eq!(compare(&b, &a).unwrap(), Ordering::Greater);
    assert_eq!(compare(&a, &a.clone()).unwrap(), Ordering::Equal);
}
