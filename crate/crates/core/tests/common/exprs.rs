//! Random bound expressions whose values stay within exact reach.

use num_bigint::BigInt;
use proptest::prelude::*;

use triset::bounds::{BoundExpr, Settings};

pub type B = BoundExpr;

/// Comparator settings that skip the exact shortcut, so the symbolic path
/// is what gets tested.
pub fn symbolic() -> Settings {
    Settings {
        exact_first: false,
        ..Settings::default()
    }
}

fn leaf() -> impl Strategy<Value = B> {
    prop_oneof![
        3 => (0i64..=20).prop_map(B::int),
        2 => any::<u64>().prop_map(|v| B::big(BigInt::from(v))),
        1 => (1u32..=64).prop_map(|k| B::big(BigInt::from(1u8) << k)),
        1 => (1i64..=12, 1i64..=4).prop_map(|(p, q)| B::rat(p, q)),
    ]
}

/// Base shapes that keep powers small enough to evaluate.
fn small() -> impl Strategy<Value = B> {
    leaf().prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| B::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

pub fn expr() -> impl Strategy<Value = B> {
    let special = prop_oneof![
        (0i64..=40, 0i64..=40).prop_map(|(n, k)| B::binom(B::int(n), B::int(k))),
        (0i64..=60).prop_map(|m| B::central_binom_max(B::int(m))),
        (0i64..=50, 0i64..=50, 1i64..=12).prop_map(|(u, v, s)| B::surd(u.into(), v.into(), (s * s).into())),
        (prop::sample::select(vec![2i64, 8, 18, 32]), 1u32..=8).prop_map(|(a, k)| B::schur(B::int(a), k)),
        (small(), 0i64..=8).prop_map(|(b, e)| b.pow(B::int(e))),
        (small(), 1i64..=3).prop_map(|(b, e)| b.pow(B::int(2)).pow(B::rat(2 * e + 1, 2))),
    ];
    prop_oneof![2 => small(), 3 => special].prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0i64..=3).prop_map(|(a, e)| a.pow(B::int(e))),
            prop::collection::vec(inner.clone(), 1..=3).prop_map(B::max),
            (inner.clone(), inner)
                .prop_map(|(a, b)| { B::Sub(Box::new(B::Add(Box::new(a), Box::new(b.clone()))), Box::new(b)) }),
        ]
    })
}

/// A pair where the second side is often equal or adjacent to the first.
pub fn pair() -> impl Strategy<Value = (B, B)> {
    prop_oneof![
        2 => (expr(), expr()),
        1 => expr().prop_map(|a| (a.clone(), B::Add(Box::new(a), B::int(1).into()))),
        1 => (expr(), expr()).prop_map(|(a, b)| (
            B::Mul(Box::new(a.clone()), Box::new(b.clone())),
            B::Mul(Box::new(b), Box::new(a)),
        )),
        1 => (small(), 1i64..=5, 1i64..=5).prop_map(|(x, p, q)| (
            B::Mul(Box::new(x.clone().pow(B::int(p))), Box::new(x.clone().pow(B::int(q)))),
            x.pow(B::int(p + q)),
        )),
    ]
}
