#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use triset::poly::{parse_polynomial, Polynomial, VariableOrder};

pub struct System {
    pub name: &'static str,
    pub order: Arc<VariableOrder>,
    pub generators: Vec<Polynomial>,
}

fn system(name: &'static str, vars: &[&str], gens: &[&str]) -> System {
    let order = VariableOrder::new(vars).unwrap();
    let generators = gens.iter().map(|g| parse_polynomial(g, &order).unwrap()).collect();
    System {
        name,
        order,
        generators,
    }
}

/// Zero-dimensional systems with rational zeros, at most 3 variables and
/// degree at most 4. Several have multiple roots, vanishing initials or
/// need splitting.
pub fn corpus() -> Vec<System> {
    vec![
        system("line-point", &["x", "y"], &["x^2 - 1", "y - x"]),
        system("two-roots", &["x"], &["x^2 - 3*x + 2"]),
        system("quartic", &["x"], &["x^4 - 5*x^2 + 4"]),
        system("double-root", &["x"], &["x^3 - 2*x^2 + x"]),
        system("circle-line", &["x", "y"], &["x^2 + y^2 - 25", "x - y + 1"]),
        system("hyperbola", &["x", "y"], &["x*y - 2", "x + y - 3"]),
        system("vanishing-initial", &["x", "y"], &["x*y - x", "x^2 - x", "y^2 - y"]),
        system("grid", &["x", "y"], &["x^2 - 1", "y^2 - 4"]),
        system("embedded", &["x", "y"], &["x^2", "x*y", "y^2 - y"]),
        system("cusp-point", &["x", "y"], &["y^2 - x^3", "x^2 - x*y"]),
        system("parabola-chord", &["x", "y"], &["y - x^2", "x*y - y"]),
        system("tangent", &["x", "y"], &["y - x^2", "y"]),
        system("shifted", &["x", "y"], &["(x - 1/2)^2", "y^2 - x*y"]),
        system("four-points", &["x", "y"], &["x^2 - x", "y^2 - 3*y + 2"]),
        system("cube", &["x", "y", "z"], &["x^2 - x", "y^2 - y", "z^2 - z"]),
        system("chain3", &["x", "y", "z"], &["x^2 - 4", "y - x^2 + 1", "z*y - 6"]),
        system(
            "sym3",
            &["x", "y", "z"],
            &["x + y + z - 6", "x*y + y*z + z*x - 11", "x*y*z - 6"],
        ),
        system("triple-zero", &["x", "y", "z"], &["x^3", "y^2 - x", "z - y"]),
        system("mixed3", &["x", "y", "z"], &["x*z - y", "y^2 - 1", "z^2 - 4"]),
        system("split-initials", &["x", "y", "z"], &["x*y - 1", "x^2 - 1", "x*z^2 - z"]),
        system("quartic-fiber", &["x", "y"], &["x^2 - 1", "y^4 - x*y^3 - y^2 + x*y"]),
        system("inconsistent", &["x", "y"], &["x - 1", "x*y - y - 1"]),
        system("degree4-plane", &["x", "y", "z"], &["x^4 - x^2", "y - x", "z^2 - y^2"]),
        system("linear3", &["x", "y", "z"], &["x + y - 3", "y + z - 5", "x + z - 4"]),
    ]
}

pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let d = rng.gen_range(1..=3);
    BigRational::new(rng.gen_range(-bound..=bound).into(), d.into())
}

/// A random polynomial of total degree at most `deg` in the first `r`
/// variables of `order`.
pub fn random_poly(rng: &mut ChaCha8Rng, order: &Arc<VariableOrder>, r: usize, deg: u32, terms: usize) -> Polynomial {
    let mut f = Polynomial::zero(order);
    for _ in 0..terms {
        let mut m = Polynomial::constant(order, random_rational(rng, 5));
        let mut left = rng.gen_range(0..=deg);
        while left > 0 && r > 0 {
            let v = rng.gen_range(0..r);
            m = &m * &Polynomial::var(order, v);
            left -= 1;
        }
        f = &f + &m;
    }
    f
}

/// Query panel of `size` polynomials of degree at most 4, roughly a quarter
/// each of ideal combinations, zero-set products, near misses and random
/// polynomials.
pub fn query_panel(rng: &mut ChaCha8Rng, s: &System, zeros: &[Vec<BigRational>], size: usize) -> Vec<Polynomial> {
    let n = s.order.len();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let kind = out.len() % 4;
        let f = match kind {
            0 => {
                let mut f = Polynomial::zero(&s.order);
                for g in &s.generators {
                    let room = 4u32.saturating_sub(g.total_degree());
                    f = &f + &(g * &random_poly(rng, &s.order, n, room, 2));
                }
                f
            }
            1 | 2 => {
                // Product of one vanishing factor per distinct zero value of a
                // coordinate; dropping a factor usually breaks membership.
                let v = rng.gen_range(0..n);
                let mut values: Vec<BigRational> = zeros.iter().map(|z| z[v].clone()).collect();
                values.sort();
                values.dedup();
                if values.len() > 4 || values.is_empty() {
                    random_poly(rng, &s.order, n, 4, 4)
                } else {
                    let skip = if kind == 2 {
                        Some(rng.gen_range(0..values.len()))
                    } else {
                        None
                    };
                    let mut f = Polynomial::one(&s.order);
                    for (i, c) in values.iter().enumerate() {
                        if Some(i) != skip {
                            f = &f * &(&Polynomial::var(&s.order, v) - &Polynomial::constant(&s.order, c.clone()));
                        }
                    }
                    f
                }
            }
            _ => random_poly(rng, &s.order, n, 4, 3),
        };
        if f.total_degree() <= 4 {
            out.push(f);
        }
    }
    out
}

pub fn vanishes_on(f: &Polynomial, zeros: &[Vec<BigRational>]) -> bool {
    zeros.iter().all(|z| f.evaluate(z).unwrap().is_zero())
}
pub mod exprs;
