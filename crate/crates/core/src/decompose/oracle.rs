//! Independent zero-set oracle for zero-dimensional systems whose complex
//! zeros are all rational. Elimination uses Sylvester resultants; roots are
//! found with the rational root theorem. Nothing here touches pseudo
//! remainders or triangular sets.

use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{pseudo_divide_by, Polynomial, VariableOrder};

fn inapplicable<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::OracleInapplicable(msg.into()))
}

/// Determinant by fraction-free Gaussian elimination.
fn bareiss(mut m: Vec<Vec<Polynomial>>, order: &Arc<VariableOrder>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(order);
    }
    let mut sign = false;
    let mut prev = Polynomial::one(order);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Polynomial::zero(order),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Sylvester resultant of `f` and `g` with respect to variable `v`.
pub fn resultant(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let order = f.order().clone();
    let (m, n) = (f.degree_in(v) as usize, g.degree_in(v) as usize);
    if m == 0 && n == 0 {
        return Polynomial::one(&order);
    }
    if m == 0 {
        return f.pow(n as u32);
    }
    if n == 0 {
        return g.pow(m as u32);
    }
    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    let size = m + n;
    let mut rows = vec![vec![Polynomial::zero(&order); size]; size];
    for (i, row) in rows.iter_mut().enumerate().take(n) {
        for (k, c) in fc.iter().enumerate() {
            row[i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().enumerate() {
            rows[n + i][i + n - k] = c.clone();
        }
    }
    bareiss(rows, &order)
}

fn univariate_gcd(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r, _) = pseudo_divide_by(&a, &b, v);
        a = b;
        b = r.primitive_integer();
    }
    a.primitive_integer()
}

fn small_factors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    let mut primes = Vec::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= n && p < limit {
        if (&n % &p).is_zero() {
            primes.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1u32;
    }
    if n > BigInt::one() {
        if &limit * &limit < n {
            return None;
        }
        primes.push(n);
    }
    Some(primes)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let mut divs = vec![BigInt::one()];
    for p in small_factors(&n)? {
        let mut m = n.clone();
        let mut k = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return None;
        }
    }
    Some(divs)
}

/// Distinct rational roots of the univariate `p` in `v`, or `None` when `p`
/// has a non-rational root.
fn rational_roots(p: &Polynomial, v: usize) -> Result<Option<Vec<BigRational>>> {
    let order = p.order().clone();
    let sf = {
        let d = p.derivative(v);
        let g = univariate_gcd(p, &d, v);
        let (q, _, _) = pseudo_divide_by(p, &g, v);
        q.primitive_integer()
    };
    let mut rest = sf;
    let mut roots = Vec::new();
    let x = Polynomial::var(&order, v);
    if rest.substitute(v, &BigRational::zero()).is_zero() {
        roots.push(BigRational::zero());
        rest = rest.div_exact(&x).expect("zero root");
    }
    if rest.degree_in(v) > 0 {
        let coeffs = rest.coefficients_in(v);
        let int = |c: &Polynomial| -> BigInt { c.constant_value().expect("univariate").to_integer() };
        let a0 = int(&coeffs[0]);
        let an = int(coeffs.last().expect("non-empty"));
        let (num, den) = match (divisors(&a0), divisors(&an)) {
            (Some(a), Some(b)) => (a, b),
            _ => return inapplicable("coefficients too large to enumerate rational roots"),
        };
        'outer: for q in &den {
            for p_ in &num {
                if !p_.gcd(q).is_one() {
                    continue;
                }
                for s in [Sign::Plus, Sign::Minus] {
                    let r = BigRational::new(BigInt::from_biguint(s, p_.magnitude().clone()), q.clone());
                    if rest.substitute(v, &r).is_zero() {
                        let lin = &Polynomial::constant(&order, r.clone()) - &x;
                        let lin = -&lin;
                        rest = rest.div_exact(&lin).expect("root divides");
                        roots.push(r);
                        if rest.degree_in(v) == 0 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    if rest.degree_in(v) > 0 {
        return Ok(None);
    }
    roots.sort();
    Ok(Some(roots))
}

/// Eliminates `v` from `polys`, keeping members free of `v` and adding
/// resultants of pairs and of random combinations.
fn eliminate(polys: &[Polynomial], v: usize, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    let (with, without): (Vec<_>, Vec<_>) = polys.iter().cloned().partition(|p| p.degree_in(v) > 0);
    let mut out = without;
    if with.is_empty() {
        return out;
    }
    let mut sorted = with.clone();
    sorted.sort_by_key(|p| (p.degree_in(v), p.total_degree(), p.num_terms()));
    let pivot = &sorted[0];
    let mut partners: Vec<Polynomial> = sorted[1..].to_vec();
    if with.len() > 1 {
        for _ in 0..2 {
            let mut comb = Polynomial::zero(pivot.order());
            for p in &with {
                let c: i64 = rng.gen_range(1..=9);
                comb = &comb + &p.scale(&BigRational::from_integer(c.into()));
            }
            partners.push(comb);
        }
    }
    for g in &partners {
        let r = resultant(pivot, g, v).primitive_integer();
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn solve(polys: Vec<Polynomial>, vars: &[usize], rng: &mut ChaCha8Rng) -> Result<Vec<Vec<(usize, BigRational)>>> {
    let polys: Vec<Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.iter().any(|p| p.is_constant()) {
        return Ok(Vec::new());
    }
    let Some((&v0, rest)) = vars.split_first() else {
        return Ok(vec![Vec::new()]);
    };
    if polys.is_empty() {
        return inapplicable("positive-dimensional zero set");
    }
    let mut elim = polys.clone();
    for &v in rest.iter().rev() {
        elim = eliminate(&elim, v, rng);
        if elim.iter().any(Polynomial::is_constant) {
            return Ok(Vec::new());
        }
    }
    let univ: Vec<&Polynomial> = elim.iter().filter(|p| p.degree_in(v0) > 0).collect();
    let mut e = match univ.first() {
        Some(p) => (*p).clone(),
        None => return inapplicable("no eliminant found"),
    };
    for p in &univ[1..] {
        e = univariate_gcd(&e, p, v0);
    }
    if e.degree_in(v0) == 0 {
        return Ok(Vec::new());
    }
    let roots = match rational_roots(&e, v0)? {
        Some(r) => r,
        None => return inapplicable("eliminant has non-rational roots"),
    };
    let mut out = Vec::new();
    for r in roots {
        let sub: Vec<Polynomial> = polys.iter().map(|p| p.substitute(v0, &r)).collect();
        if sub.iter().all(Polynomial::is_zero) && !rest.is_empty() {
            return inapplicable("positive-dimensional fiber");
        }
        for mut z in solve(sub, rest, rng)? {
            z.insert(0, (v0, r.clone()));
            out.push(z);
        }
    }
    Ok(out)
}

/// All common zeros of `generators`, sorted. Errors with
/// [`Error::OracleInapplicable`] unless the zero set is finite and rational.
pub fn oracle_zeros(generators: &[Polynomial], order: &Arc<VariableOrder>) -> Result<Vec<Vec<BigRational>>> {
    for g in generators {
        if !crate::poly::same_order(order, g.order()) {
            return Err(Error::Structure("generator uses a different variable order".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let vars: Vec<usize> = (0..order.len()).collect();
    let polys: Vec<Polynomial> = generators.iter().map(|g| g.primitive_integer()).collect();
    let mut zeros: Vec<Vec<BigRational>> = solve(polys, &vars, &mut rng)?
        .into_iter()
        .map(|z| z.into_iter().map(|(_, r)| r).collect())
        .collect();
    for z in &zeros {
        for g in generators {
            debug_assert!(g.evaluate(z).map(|x| x.is_zero()).unwrap_or(false));
        }
    }
    zeros.sort();
    zeros.dedup();
    Ok(zeros)
}

/// Whether `f` vanishes on every common zero of `generators`.
pub fn oracle_membership(f: &Polynomial, generators: &[Polynomial], order: &Arc<VariableOrder>) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let zeros = oracle_zeros(generators, order)?;
    for z in &zeros {
        if !f.evaluate(z)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    #[test]
    fn resultant_of_lines_and_circle() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let r = resultant(&p("x^2 + y^2 - 1"), &p("y - x"), 1);
        assert_eq!(r.primitive_integer(), p("2*x^2 - 1"));
        let r = resultant(&p("y^2 - 2"), &p("y^2 - 3"), 1);
        assert_eq!(r, p("1"));
    }

    #[test]
    fn documented_examples() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let sys = vec![p("x^2-1"), p("y-x")];
        assert_eq!(
            oracle_zeros(&sys, &o).unwrap(),
            vec![vec![rat(-1), rat(-1)], vec![rat(1), rat(1)]]
        );
        assert!(oracle_membership(&p("y^2-1"), &sys, &o).unwrap());
        assert!(!oracle_membership(&p("y-1"), &sys, &o).unwrap());
        let o1 = VariableOrder::new(&["x"]).unwrap();
        let x = parse_polynomial("x", &o1).unwrap();
        assert!(oracle_membership(&Polynomial::zero(&o1), &[x], &o1).unwrap());
    }

    #[test]
    fn refuses_outside_scope() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert!(matches!(
            oracle_zeros(&[p("x^2-2"), p("y")], &o),
            Err(Error::OracleInapplicable(_))
        ));
        assert!(matches!(
            oracle_zeros(&[p("x*y")], &o),
            Err(Error::OracleInapplicable(_))
        ));
        assert_eq!(
            oracle_zeros(&[p("x"), p("x-1")], &o).unwrap(),
            Vec::<Vec<BigRational>>::new()
        );
    }
}
