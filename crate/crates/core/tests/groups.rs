use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triset::groups::{
    is_normal, is_subgroup, matrix_order, preimage_intersection, proto_check, random_invertible, random_rational,
    representation_admits, unipotent_group_equations, GroupCatalogEntry, OneParameterUnipotent, RationalHomomorphism,
    SubgroupPresentation,
};
use triset::poly::parse_polynomial;

use GroupCatalogEntry::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn det2(g: &[BigRational]) -> BigRational {
    &g[0] * &g[3] - &g[1] * &g[2]
}

fn nonzero(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let x = random_rational(rng, 7);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A generic element of a 2x2 catalog group, built from its shape.
fn sample(g: GroupCatalogEntry, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let z = BigRational::zero;
    let o = BigRational::one;
    match g {
        GL(2) => random_invertible(rng, 2),
        SL(2) => {
            let mut m = random_invertible(rng, 2);
            let d = det2(&m);
            m[0] = &m[0] / &d;
            m[1] = &m[1] / &d;
            m
        }
        DiagonalTorus(2) => vec![nonzero(rng), z(), z(), nonzero(rng)],
        Borel(2) => vec![nonzero(rng), random_rational(rng, 7), z(), nonzero(rng)],
        UnipotentUpper(2) => vec![o(), nonzero(rng), z(), o()],
        Trivial(2) => vec![o(), z(), z(), o()],
        other => panic!("no sampler for {other}"),
    }
}

const GL2_FAMILY: [GroupCatalogEntry; 6] = [GL(2), SL(2), DiagonalTorus(2), Borel(2), UnipotentUpper(2), Trivial(2)];

#[test]
fn determinant_preimage_matches_sl2_on_samples() {
    let gl2 = SubgroupPresentation::general_linear(2).unwrap();
    let o1 = matrix_order("x", 1).unwrap();
    let one = SubgroupPresentation::new(1, vec![parse_polynomial("x11 - 1", &o1).unwrap()]).unwrap();
    let tau = RationalHomomorphism::determinant(2).unwrap();
    let r = preimage_intersection(&gl2, &one, &tau).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut inside, mut outside) = (0, 0);
    for k in 0..100 {
        let mut g = sample(SL(2), &mut rng);
        if k % 2 == 1 {
            // Scale a row by something other than 1 to leave SL(2).
            let s = loop {
                let s = nonzero(&mut rng);
                if s != q(1) {
                    break s;
                }
            };
            g[0] = &g[0] * &s;
            g[1] = &g[1] * &s;
        }
        let expected = det2(&g) == q(1);
        if expected {
            inside += 1;
        } else {
            outside += 1;
        }
        assert_eq!(representation_admits(&r, &g, 2).unwrap(), expected, "{g:?}");
    }
    assert_eq!((inside, outside), (50, 50));
}

#[test]
fn unipotent_closure_of_nilpotent_generator() {
    let u = OneParameterUnipotent::from_ints(2, &[0, 1, 0, 0]).unwrap();
    let r = unipotent_group_equations(&[u]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = vec![q(1), random_rational(&mut rng, 20), q(0), q(1)];
        assert!(representation_admits(&r, &g, 2).unwrap(), "{g:?}");
    }
    let mut rejected = 0;
    while rejected < 100 {
        let g = random_invertible(&mut rng, 2);
        let member = g[0] == q(1) && g[2].is_zero() && g[3] == q(1);
        if member {
            continue;
        }
        assert!(!representation_admits(&r, &g, 2).unwrap(), "{g:?}");
        rejected += 1;
    }
    // Near misses: one defining condition broken at a time.
    for g in [[2, 3, 0, 1], [1, 3, 1, 1], [1, 3, 0, -1]] {
        let g: Vec<BigRational> = g.iter().map(|&v| q(v)).collect();
        assert!(!representation_admits(&r, &g, 2).unwrap());
    }
}

#[test]
fn eight_proto_verdicts() {
    use triset::groups::Clause::*;
    let cases = [
        (Scalars, FiniteCyclic(3), None),
        (GL(2), SL(2), None),
        (SL(2), SL(2), None),
        (GL(2), UnipotentUpper(2), Some(KernelInComponent)),
        (SL(2), UnipotentUpper(2), Some(KernelInComponent)),
        (GL(2), Borel(2), Some(KernelInComponent)),
        (SL(2), Borel(2), Some(Contains)),
        (FiniteCyclic(3), FiniteCyclic(3), None),
    ];
    for (h, g, want) in cases {
        let v = proto_check(h, g).unwrap();
        assert_eq!(v.failed, want, "{h} / {g}: {:?}", v.trace);
        assert!(!v.trace.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn containment_table_agrees_with_equations(
        a in prop::sample::select(GL2_FAMILY.to_vec()),
        b in prop::sample::select(GL2_FAMILY.to_vec()),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pb = b.presentation().unwrap();
        let contained = is_subgroup(a, b).unwrap();
        // A generic element of `a` lies in `b` exactly when `a ⊆ b`; a few
        // draws guard against an unlucky special element.
        let hits = (0..4).filter(|_| pb.contains_matrix(&sample(a, &mut rng)).unwrap()).count();
        if contained {
            prop_assert_eq!(hits, 4);
        } else {
            prop_assert!(hits < 4, "{} in {}", a, b);
        }
    }

    #[test]
    fn catalog_relations_are_consistent(
        a in prop::sample::select(GL2_FAMILY.to_vec()),
        b in prop::sample::select(GL2_FAMILY.to_vec()),
        c in prop::sample::select(GL2_FAMILY.to_vec()),
    ) {
        prop_assert!(is_subgroup(a, a).unwrap());
        if is_normal(a, b).unwrap() {
            prop_assert!(is_subgroup(a, b).unwrap());
        }
        if is_subgroup(a, b).unwrap() && is_subgroup(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        if is_subgroup(a, b).unwrap() && is_subgroup(b, c).unwrap() {
            prop_assert!(is_subgroup(a, c).unwrap());
        }
        let v = proto_check(a, b).unwrap();
        if v.passes() {
            prop_assert!(is_subgroup(b, a).unwrap());
        }
    }

    #[test]
    fn identity_preimage_is_intersection(
        a in prop::sample::select(GL2_FAMILY.to_vec()),
        b in prop::sample::select(GL2_FAMILY.to_vec()),
        seed in any::<u64>(),
    ) {
        let (pa, pb) = (a.presentation().unwrap(), b.presentation().unwrap());
        let tau = RationalHomomorphism::identity(2).unwrap();
        let r = preimage_intersection(&pa, &pb, &tau).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..6 {
            let g = if rng.gen_bool(0.5) { sample(a, &mut rng) } else { sample(b, &mut rng) };
            let expected = pa.contains_matrix(&g).unwrap() && pb.contains_matrix(&g).unwrap();
            prop_assert_eq!(representation_admits(&r, &g, 2).unwrap(), expected);
        }
    }
}
