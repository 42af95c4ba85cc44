mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triset::decompose::{
    decompose, degree_audit, membership_radical, oracle_membership, oracle_zeros, DecompositionTask,
};
use triset::triangular::{representation_restrict, TriangularRepresentation};

use common::{corpus, query_panel, random_poly, vanishes_on};

#[test]
fn corpus_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in corpus() {
        let r = decompose(&DecompositionTask::new(&s.order, s.generators.clone()).unwrap()).unwrap();
        let zeros = oracle_zeros(&s.generators, &s.order).unwrap();
        for f in query_panel(&mut rng, &s, &zeros, 200) {
            let ours = membership_radical(&f, &r).unwrap();
            let theirs = oracle_membership(&f, &s.generators, &s.order).unwrap();
            assert_eq!(ours, theirs, "{}: {f}", s.name);
            assert_eq!(theirs, vanishes_on(&f, &zeros));
        }
        let audit = degree_audit(&r, s.order.len().max(2) as u32, 4).unwrap();
        assert!(audit.within, "{}: {audit}", s.name);
    }
}

#[test]
fn panel_is_not_one_sided() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut yes, mut no) = (0, 0);
    for s in corpus() {
        let zeros = oracle_zeros(&s.generators, &s.order).unwrap();
        for f in query_panel(&mut rng, &s, &zeros, 200) {
            if vanishes_on(&f, &zeros) {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(yes > 1000 && no > 1000, "{yes} members, {no} non-members");
}

#[test]
fn restriction_commutes_with_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for s in corpus() {
        let full = decompose(&DecompositionTask::new(&s.order, s.generators.clone()).unwrap()).unwrap();
        let zeros = oracle_zeros(&s.generators, &s.order).unwrap();
        for r in 1..=s.order.len() {
            let low = representation_restrict(&full, r).unwrap();
            for i in 0..100 {
                let f = if i % 2 == 0 {
                    random_poly(&mut rng, &s.order, r, 3, 3)
                } else {
                    // Vanishing products in the first variable keep half the queries members.
                    let mut vals: Vec<_> = zeros.iter().map(|z| z[0].clone()).collect();
                    vals.sort();
                    vals.dedup();
                    vals.iter().fold(triset::poly::Polynomial::one(&s.order), |acc, c| {
                        &acc * &(&triset::poly::Polynomial::var(&s.order, 0)
                            - &triset::poly::Polynomial::constant(&s.order, c.clone()))
                    })
                };
                assert_eq!(
                    low.contains(&f).unwrap(),
                    full.contains(&f).unwrap(),
                    "{} r={r}: {f}",
                    s.name
                );
            }
        }
    }
}

#[test]
fn redecomposing_components_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for s in corpus() {
        let r = decompose(&DecompositionTask::new(&s.order, s.generators.clone()).unwrap()).unwrap();
        let mut pieces = TriangularRepresentation::unit(&s.order);
        let mut first = true;
        for c in r.components() {
            let task =
                DecompositionTask::with_inequations(&s.order, c.set.members().to_vec(), c.inequations.clone()).unwrap();
            let again = decompose(&task).unwrap();
            pieces = if first { again } else { pieces.product(&again).unwrap() };
            first = false;
        }
        let zeros = oracle_zeros(&s.generators, &s.order).unwrap();
        for f in query_panel(&mut rng, &s, &zeros, 50) {
            assert_eq!(pieces.contains(&f).unwrap(), r.contains(&f).unwrap(), "{}: {f}", s.name);
        }
    }
}

#[test]
fn oracle_rejects_positive_dimension() {
    let o = triset::poly::VariableOrder::new(&["x", "y"]).unwrap();
    let g = vec![triset::poly::parse_polynomial("x*y", &o).unwrap()];
    assert!(matches!(
        oracle_zeros(&g, &o),
        Err(triset::Error::OracleInapplicable(_))
    ));
}
