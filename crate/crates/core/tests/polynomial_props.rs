use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;

use triset::poly::{prem, pseudo_divide, rat, Polynomial, VariableOrder};
use triset::triangular::{restrict, TriangularSet};

fn order3() -> Arc<VariableOrder> {
    VariableOrder::new(&["x", "y", "z"]).unwrap()
}

type Terms = Vec<(i32, [u32; 3])>;

/// Terms with exponents bounded per variable and total degree at most `deg`.
fn terms(max_vars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (-9i32..=9, [0..=deg, 0..=deg, 0..=deg]).prop_map(move |(c, mut e)| {
            for (i, x) in e.iter_mut().enumerate() {
                if i >= max_vars {
                    *x = 0;
                }
            }
            while e.iter().sum::<u32>() > deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (c, e)
        }),
        0..=max_terms,
    )
}

fn build(order: &Arc<VariableOrder>, t: &Terms) -> Polynomial {
    Polynomial::from_terms(order, t.iter().map(|(c, e)| (e.to_vec(), rat(*c as i64))))
}

fn poly(deg: u32) -> impl Strategy<Value = Polynomial> {
    terms(3, deg, 6).prop_map(|t| build(&order3(), &t))
}

/// A triangular set whose member of class `c` is `init * x_c^k + tail`, with
/// `init` and `tail` in lower variables only.
fn triangular() -> impl Strategy<Value = Vec<Polynomial>> {
    let member = |c: usize| {
        (prop::bool::ANY, 1u32..=3, terms(c, 2, 3), terms(c + 1, 2, 3), 1i32..=5).prop_map(
            move |(keep, k, init, tail, lead)| {
                let o = order3();
                let mut init = build(&o, &init);
                if init.is_zero() {
                    init = Polynomial::from_int(&o, lead as i64);
                }
                let mut tail = build(&o, &tail);
                // The tail must stay strictly below degree k in x_c.
                while tail.degree_in(c) >= k {
                    tail = tail.coeff_in(c, 0);
                }
                keep.then(|| &(&init * &Polynomial::var_pow(&o, c, k)) + &tail)
            },
        )
    };
    (member(0), member(1), member(2)).prop_map(|(a, b, c)| [a, b, c].into_iter().flatten().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pseudo_division_identity(f in poly(5), g in triangular()) {
        let d = pseudo_divide(&f, &g).unwrap();
        prop_assert!(d.identity_holds(&f, &g));
        for m in &g {
            let c = m.class().unwrap();
            prop_assert!(d.remainder.degree_in(c) < m.degree_in(c));
        }
        prop_assert_eq!(&d.remainder, &prem(&f, &g).unwrap());
        prop_assert_eq!(prem(&d.remainder, &g).unwrap(), d.remainder);
    }

    #[test]
    fn ring_axioms(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&order3()), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(3), b in poly(3), p in [-20i64..20, -20i64..20, 1i64..20]) {
        let pt: Vec<BigRational> = vec![rat(p[0]), rat(p[1]), rat(p[0]) / rat(p[2])];
        let ev = |f: &Polynomial| f.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn restriction_preserves_low_membership(g in triangular(), t in terms(3, 3, 5), r in 1usize..=3) {
        let o = order3();
        let set = TriangularSet::new(&o, g).unwrap();
        let low = restrict(&set, r).unwrap();
        // Multiplying by a member of class below r makes some queries members.
        let mut p = build(&o, &t);
        for x in r..3 {
            p = p.coeff_in(x, 0);
        }
        if let Some(m) = set.members().iter().find(|m| m.class().unwrap() < r) {
            if t.len() % 2 == 0 {
                p = &p * m;
            }
        }
        prop_assert_eq!(set.contains(&p).unwrap(), low.contains(&p).unwrap());
        prop_assert!(triset::triangular::is_triangular(low.members()));
    }

    #[test]
    fn product_membership_is_conjunction(a in triangular(), b in triangular(), f in poly(3)) {
        use triset::triangular::TriangularRepresentation;
        let o = order3();
        let ra = TriangularRepresentation::from_sets(&o, vec![TriangularSet::new(&o, a.clone()).unwrap()]).unwrap();
        let rb = TriangularRepresentation::from_sets(&o, vec![TriangularSet::new(&o, b.clone()).unwrap()]).unwrap();
        let both = ra.product(&rb).unwrap();
        let f = match a.first() {
            Some(m) if f.num_terms() % 2 == 0 => &f * m,
            _ => f,
        };
        prop_assert_eq!(both.contains(&f).unwrap(), ra.contains(&f).unwrap() && rb.contains(&f).unwrap());
    }
}
