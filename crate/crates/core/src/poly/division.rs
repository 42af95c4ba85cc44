//! Pseudo-division by a single polynomial and by a triangular set.

use super::Polynomial;
use crate::error::{Error, Result};

/// Quotients, remainder and initial exponents of a pseudo-division by a
/// triangular set `G = [g_1, ..., g_m]`, satisfying
/// `lc(g_1)^a_1 ... lc(g_m)^a_m * f = sum q_i g_i + remainder`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoDivisionResult {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
    pub initial_exponents: Vec<u32>,
}

impl PseudoDivisionResult {
    /// Re-expands both sides of the defining identity and compares them.
    pub fn identity_holds(&self, f: &Polynomial, set: &[Polynomial]) -> bool {
        let mut lhs = f.clone();
        for (g, &a) in set.iter().zip(&self.initial_exponents) {
            if a > 0 {
                let lc = match g.initial() {
                    Ok(lc) => lc,
                    Err(_) => return false,
                };
                lhs = &lhs * &lc.pow(a);
            }
        }
        let mut rhs = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(set) {
            rhs = &rhs + &(q * g);
        }
        lhs == rhs
    }
}

/// Pseudo-divides `f` by `g` with respect to variable `v`.
///
/// Returns `(q, r, a)` with `lc_v(g)^a * f = q*g + r` and `deg_v r < deg_v g`.
/// When the leading coefficient is a constant, ordinary division is used and
/// `a = 0`.
pub fn pseudo_divide_by(f: &Polynomial, g: &Polynomial, v: usize) -> (Polynomial, Polynomial, u32) {
    let d = g.degree_in(v);
    let lc = g.lc_in(v);
    let order = f.order().clone();
    let mut q = Polynomial::zero(&order);
    let mut r = f.clone();
    if let Some(c) = lc.constant_value() {
        let inv = c.recip();
        while !r.is_zero() && r.degree_in(v) >= d {
            let e = r.degree_in(v);
            let t = r.coeff_in(v, e).scale(&inv).shift(v, e - d);
            r = &r - &(&t * g);
            q = &q + &t;
        }
        return (q, r, 0);
    }
    let mut alpha = 0;
    while !r.is_zero() && r.degree_in(v) >= d {
        let e = r.degree_in(v);
        let t = r.coeff_in(v, e).shift(v, e - d);
        r = &(&lc * &r) - &(&t * g);
        q = &(&lc * &q) + &t;
        alpha += 1;
    }
    (q, r, alpha)
}

fn check_triangular(set: &[Polynomial], f: &Polynomial) -> Result<()> {
    let mut last: Option<usize> = None;
    for g in set {
        f.check_order(g)?;
        let c = g
            .class()
            .ok_or_else(|| Error::Structure("triangular set contains a constant".into()))?;
        if let Some(l) = last {
            if c <= l {
                return Err(Error::Structure(
                    "classes of the divisor set do not strictly increase".into(),
                ));
            }
        }
        last = Some(c);
    }
    Ok(())
}

/// Full pseudo-division by a triangular set, reducing by the member of
/// highest class first.
pub fn pseudo_divide(f: &Polynomial, set: &[Polynomial]) -> Result<PseudoDivisionResult> {
    check_triangular(set, f)?;
    let order = f.order().clone();
    let m = set.len();
    let mut quotients = vec![Polynomial::zero(&order); m];
    let mut exps = vec![0u32; m];
    let mut r = f.clone();
    for i in (0..m).rev() {
        let g = &set[i];
        let v = g.class().expect("checked above");
        let (q, rem, a) = pseudo_divide_by(&r, g, v);
        if a > 0 {
            let factor = g.initial()?.pow(a);
            for qj in quotients.iter_mut().skip(i + 1) {
                *qj = &*qj * &factor;
            }
        }
        quotients[i] = q;
        exps[i] = a;
        r = rem;
    }
    let result = PseudoDivisionResult {
        quotients,
        remainder: r,
        initial_exponents: exps,
    };
    debug_assert!(result.identity_holds(f, set), "pseudo-division identity failed");
    Ok(result)
}

/// Pseudo-remainder of `f` by the triangular set `set`.
pub fn prem(f: &Polynomial, set: &[Polynomial]) -> Result<Polynomial> {
    check_triangular(set, f)?;
    let mut r = f.clone();
    for g in set.iter().rev() {
        if r.is_zero() {
            break;
        }
        let v = g.class().expect("checked above");
        if r.degree_in(v) < g.degree_in(v) {
            continue;
        }
        r = pseudo_divide_by(&r, g, v).1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VariableOrder};

    fn setup() -> std::sync::Arc<VariableOrder> {
        VariableOrder::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn rep_counterexamples() {
        let o = setup();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert!(prem(&p("y"), &[p("x*y")]).unwrap().is_zero());
        assert!(prem(&p("y+1"), &[p("x"), p("x*y")]).unwrap().is_zero());
        assert_eq!(prem(&p("-1"), &[p("x"), p("x*y")]).unwrap(), p("-1"));
        assert_eq!(prem(&p("x^2 + y"), &[]).unwrap(), p("x^2 + y"));
    }

    #[test]
    fn pseudo_division_examples() {
        let o = setup();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let r = pseudo_divide(&p("y"), &[p("x*y")]).unwrap();
        assert_eq!(r.quotients, vec![p("1")]);
        assert!(r.remainder.is_zero());
        assert_eq!(r.initial_exponents, vec![1]);

        let r = pseudo_divide(&p("x^3"), &[p("x^2 - 1")]).unwrap();
        assert_eq!(r.quotients, vec![p("x")]);
        assert_eq!(r.remainder, p("x"));
        assert!(r.identity_holds(&p("x^3"), &[p("x^2-1")]));

        let r = pseudo_divide(&p("5"), &[p("x"), p("x*y")]).unwrap();
        assert_eq!(r.remainder, p("5"));
    }

    #[test]
    fn non_triangular_divisor_rejected() {
        let o = setup();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert!(matches!(prem(&p("y"), &[p("x*y"), p("x")]), Err(Error::Structure(_))));
        assert!(matches!(prem(&p("y"), &[p("3")]), Err(Error::Structure(_))));
    }
}
