use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{matrix_order, move_representation, random_rational};
use crate::decompose::{decompose, DecompositionTask};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, VariableOrder};
use crate::triangular::TriangularRepresentation;

/// `M` with `M^n = 0`; generates `x ↦ exp(xM)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParameterUnipotent {
    n: usize,
    m: Vec<BigRational>,
}

pub(super) fn mat_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += &a[i * n + k] * &b[k * n + j];
            }
        }
    }
    out
}

impl OneParameterUnipotent {
    /// Row-major entries; fails unless `M` is square and nilpotent.
    pub fn new(n: usize, m: Vec<BigRational>) -> Result<Self> {
        if n == 0 || m.len() != n * n {
            return Err(Error::Structure(format!(
                "expected {} entries for a {n}x{n} matrix",
                n * n
            )));
        }
        let mut p = m.clone();
        for _ in 1..n {
            p = mat_mul(&p, &m, n);
        }
        if p.iter().any(|x| !x.is_zero()) {
            return Err(Error::Domain("generator is not nilpotent".into()));
        }
        Ok(OneParameterUnipotent { n, m })
    }

    pub fn from_ints(n: usize, m: &[i64]) -> Result<Self> {
        Self::new(n, m.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[BigRational] {
        &self.m
    }

    /// `exp(tM)` evaluated at a rational `t`.
    pub fn at(&self, t: &BigRational) -> Vec<BigRational> {
        let order = VariableOrder::new(&["x"]).expect("valid order");
        self.entries_in(&order, 0)
            .iter()
            .map(|p| p.evaluate(std::slice::from_ref(t)).expect("one coordinate"))
            .collect()
    }

    /// `Σ_{k<n} M^k x^k / k!` with `x` the variable `param` of `order`.
    fn entries_in(&self, order: &Arc<VariableOrder>, param: usize) -> Vec<Polynomial> {
        let n = self.n;
        let mut out: Vec<Polynomial> = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Polynomial::one(order)
                } else {
                    Polynomial::zero(order)
                }
            })
            .collect();
        let mut power = self.m.clone();
        let mut fact = BigInt::one();
        for k in 1..n as u32 {
            fact *= k;
            let xk = Polynomial::var_pow(order, param, k);
            for (e, c) in out.iter_mut().zip(&power) {
                if !c.is_zero() {
                    let coeff = c / BigRational::from_integer(fact.clone());
                    *e = &*e + &xk.scale(&coeff);
                }
            }
            power = mat_mul(&power, &self.m, n);
        }
        out
    }
}

/// The parametric matrix `I + Mx + M²x²/2! + …` over the single variable `x`.
pub fn one_param_subgroup(u: &OneParameterUnipotent) -> Result<Vec<Polynomial>> {
    let order = VariableOrder::new(&["x"])?;
    Ok(u.entries_in(&order, 0))
}

fn poly_mat_mul(a: &[Polynomial], b: &[Polynomial], n: usize) -> Vec<Polynomial> {
    let order = a[0].order().clone();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Polynomial::zero(&order);
            for k in 0..n {
                let (x, y) = (&a[i * n + k], &b[k * n + j]);
                if !x.is_zero() && !y.is_zero() {
                    s = &s + &(x * y);
                }
            }
            out.push(s);
        }
    }
    out
}

/// Rank of a rational matrix with `rows × cols` entries.
#[allow(clippy::needless_range_loop)]
fn rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let mut r = 0;
    let cols = a.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Picks the factor sequence: generators are cycled and a factor is kept
/// only if it raises the generic rank of the product map; stops after a
/// full cycle without growth or at `2n²` factors.
fn factor_sequence(gens: &[OneParameterUnipotent], n: usize) -> Result<Vec<usize>> {
    let cap = 2 * n * n;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = 0;
    let mut idle = 0;
    let mut g = 0;
    while idle < gens.len() && chosen.len() < cap {
        let mut trial = chosen.clone();
        trial.push(g);
        let r = jacobian_rank(gens, &trial, n, &mut rng)?;
        if r > current {
            current = r;
            chosen = trial;
            idle = 0;
        } else {
            idle += 1;
        }
        g = (g + 1) % gens.len();
    }
    Ok(chosen)
}

fn jacobian_rank(gens: &[OneParameterUnipotent], seq: &[usize], n: usize, rng: &mut ChaCha8Rng) -> Result<usize> {
    let names: Vec<String> = (1..=seq.len()).map(|i| format!("t{i}")).collect();
    let order = VariableOrder::new(&names)?;
    let prod = seq
        .iter()
        .enumerate()
        .map(|(i, &g)| gens[g].entries_in(&order, i))
        .reduce(|a, b| poly_mat_mul(&a, &b, n))
        .expect("non-empty sequence");
    let point: Vec<BigRational> = (0..seq.len()).map(|_| random_rational(rng, 50)).collect();
    let rows = prod
        .iter()
        .map(|p| {
            (0..seq.len())
                .map(|v| p.derivative(v).evaluate(&point))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rank(rows))
}

/// Zariski closure of the product of the one-parameter subgroups, as a
/// representation over `y11, …, ynn`.
///
/// The matrix entries are ordered below the parameters so the elimination
/// is a restriction to the leading block.
pub fn unipotent_group_equations(gens: &[OneParameterUnipotent]) -> Result<TriangularRepresentation> {
    let n = gens
        .first()
        .map(OneParameterUnipotent::n)
        .ok_or_else(|| Error::Precondition("at least one generator is required".into()))?;
    if gens.iter().any(|g| g.n != n) {
        return Err(Error::Precondition("generators have different sizes".into()));
    }
    let seq = factor_sequence(gens, n)?;
    let target = matrix_order("y", n)?;
    let mut names: Vec<String> = target.names().to_vec();
    names.extend((1..=seq.len()).map(|i| format!("t{i}")));
    let order = VariableOrder::new(&names)?;
    let nn = n * n;
    let prod = if seq.is_empty() {
        (0..nn)
            .map(|k| {
                if k / n == k % n {
                    Polynomial::one(&order)
                } else {
                    Polynomial::zero(&order)
                }
            })
            .collect()
    } else {
        seq.iter()
            .enumerate()
            .map(|(i, &g)| gens[g].entries_in(&order, nn + i))
            .reduce(|a, b| poly_mat_mul(&a, &b, n))
            .expect("non-empty sequence")
    };
    let generators: Vec<Polynomial> = prod
        .iter()
        .enumerate()
        .map(|(k, p)| &Polynomial::var(&order, k) - p)
        .collect();
    let r = decompose(&DecompositionTask::new(&order, generators)?)?;
    move_representation(&r.restrict(nn)?, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::det;

    #[test]
    fn exponentials() {
        let u = OneParameterUnipotent::from_ints(3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]).unwrap();
        let m = one_param_subgroup(&u).unwrap();
        let shown: Vec<String> = m.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown[1], "x");
        assert_eq!(shown[2], "1/2*x^2");
        assert!(det(&m, 3).is_one());
        assert!(OneParameterUnipotent::from_ints(2, &[1, 0, 0, 0]).is_err());
    }

    #[test]
    fn upper_unitriangular() {
        let u = OneParameterUnipotent::from_ints(2, &[0, 1, 0, 0]).unwrap();
        let r = unipotent_group_equations(&[u]).unwrap();
        let y = r.order().clone();
        for (s, expect) in [("y11 - 1", true), ("y21", true), ("y22 - 1", true), ("y12", false)] {
            let p = crate::poly::parse_polynomial(s, &y).unwrap();
            assert_eq!(r.contains(&p).unwrap(), expect, "{s}");
        }
    }

    #[test]
    fn two_generators_fill_special_linear() {
        let u = OneParameterUnipotent::from_ints(2, &[0, 1, 0, 0]).unwrap();
        let l = OneParameterUnipotent::from_ints(2, &[0, 0, 1, 0]).unwrap();
        let r = unipotent_group_equations(&[u, l]).unwrap();
        let y = r.order().clone();
        let d = crate::poly::parse_polynomial("y11*y22 - y12*y21 - 1", &y).unwrap();
        assert!(r.contains(&d).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = crate::groups::random_special(&mut rng, 2);
            assert!(crate::groups::representation_admits(&r, &g, 2).unwrap());
        }
    }
}
