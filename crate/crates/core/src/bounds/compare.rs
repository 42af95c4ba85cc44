//! Total, deterministic comparison of bound expressions.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;

use super::exact::{eval_exact, DEFAULT_DIGIT_LIMIT};
use super::mag::Mag;
use super::nf::{Calc, Sum};
use super::BoundExpr;
use crate::{Error, Result};

/// Comparator configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Largest decimal digit count evaluated exactly.
    pub digit_limit: u64,
    /// Number of logarithm levels the comparator may descend.
    pub depth: u32,
    /// Try exact evaluation before the symbolic path.
    pub exact_first: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            digit_limit: DEFAULT_DIGIT_LIMIT,
            depth: 8,
            exact_first: true,
        }
    }
}

/// Iterated-logarithm enclosure: the value lies in `[T_depth(lo), T_depth(hi)]`
/// where `T_0(x) = x` and `T_{k+1}(x) = 2^{T_k(x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogProfile {
    pub depth: u32,
    pub lo: BigRational,
    pub hi: BigRational,
}

fn profile_of(m: &Mag) -> LogProfile {
    let (depth, lo, hi) = m.profile();
    let conv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    LogProfile {
        depth,
        lo: conv(lo),
        hi: conv(hi),
    }
}

/// Rigorous iterated-log enclosure of a non-negative expression.
pub fn log_profile(e: &BoundExpr) -> Result<LogProfile> {
    let calc = Calc::new();
    let s = calc.from_expr(e, &check_sub(Settings::default()))?;
    Ok(profile_of(&calc.mag(&s)))
}

pub fn compare(a: &BoundExpr, b: &BoundExpr) -> Result<Ordering> {
    compare_with(a, b, &Settings::default())
}

pub fn compare_with(a: &BoundExpr, b: &BoundExpr, settings: &Settings) -> Result<Ordering> {
    if settings.exact_first {
        if let Some(x) = eval_exact(a, settings.digit_limit)? {
            if let Some(y) = eval_exact(b, settings.digit_limit)? {
                return Ok(x.cmp(&y));
            }
        }
    }
    let calc = Calc::new();
    let check = check_sub(*settings);
    let x = calc.from_expr(a, &check)?;
    let y = calc.from_expr(b, &check)?;
    calc.compare_nf(&x, &y, settings.depth)
}

fn check_sub(settings: Settings) -> impl Fn(&Calc, &Sum, &Sum) -> Result<()> {
    move |calc: &Calc, x: &Sum, y: &Sum| {
        if calc.compare_nf(x, y, settings.depth)? == Ordering::Less {
            Err(Error::Domain(
                "subtraction obligation violated: left side is smaller".into(),
            ))
        } else {
            Ok(())
        }
    }
}

fn undecided() -> Error {
    Error::Undecided("expressions not separated by iterated-logarithm refinement".into())
}

impl Calc {
    pub(crate) fn compare_nf(&self, a: &Sum, b: &Sum, depth: u32) -> Result<Ordering> {
        if a == b {
            return Ok(Ordering::Equal);
        }
        if let (Some(x), Some(y)) = (a.as_constant(), b.as_constant()) {
            return Ok(x.cmp(&y));
        }
        let (ma, mb) = (self.mag(a), self.mag(b));
        if ma.lt(&mb) {
            return Ok(Ordering::Less);
        }
        if mb.lt(&ma) {
            return Ok(Ordering::Greater);
        }
        let (p, n) = a.sub(b).split();
        if p != *a || n != *b {
            return self.compare_nf(&p, &n, depth);
        }
        if depth == 0 || ma.lo.sign() <= 0 || mb.lo.sign() <= 0 {
            return Err(undecided());
        }
        let (la, ea) = self.lf(a)?;
        let (lb, eb) = self.lf(b)?;
        let err = ea.add(eb.neg());
        let (p, n) = la.sub(&lb).split();
        let d = self.mag(&p).sub(self.mag(&n)).add(err.to_mag());
        if d.lo.sign() > 0 {
            return Ok(Ordering::Greater);
        }
        if d.hi.sign() < 0 {
            return Ok(Ordering::Less);
        }
        if err.is_zero() {
            return self.compare_nf(&p, &n, depth - 1);
        }
        // log a − log b lies in [P − N + err.lo, P − N + err.hi].
        let shifted = |c: f64| -> Result<(Sum, Sum)> {
            let c = BigRational::from_float(c).ok_or_else(undecided)?;
            let k = Sum::constant(c.clone());
            Ok(if c >= BigRational::zero() {
                (p.add(&k), n.clone())
            } else {
                (p.clone(), n.sub(&k))
            })
        };
        let (hp, hn) = shifted(err.hi)?;
        match self.compare_nf(&hp, &hn, depth - 1) {
            Ok(Ordering::Less) => return Ok(Ordering::Less),
            Ok(_) | Err(Error::Undecided(_)) => {}
            Err(e) => return Err(e),
        }
        let (lp, ln) = shifted(err.lo)?;
        match self.compare_nf(&lp, &ln, depth - 1) {
            Ok(Ordering::Greater) => Ok(Ordering::Greater),
            Ok(_) | Err(Error::Undecided(_)) => Err(undecided()),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::tower;

    fn symbolic() -> Settings {
        Settings {
            exact_first: false,
            ..Settings::default()
        }
    }

    #[test]
    fn spec_examples() {
        let a = tower(&[2, 2, 2, 2], BoundExpr::int(18));
        let b = tower(&[2, 2, 2, 2, 2], BoundExpr::int(96));
        assert_eq!(compare(&a, &b).unwrap(), Ordering::Less);
        let p = BoundExpr::int(2).pow(BoundExpr::int(10));
        assert_eq!(compare(&p, &BoundExpr::int(1024)).unwrap(), Ordering::Equal);
        assert_eq!(
            compare_with(&p, &BoundExpr::int(1024), &symbolic()).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn near_ties_between_towers() {
        let x = BoundExpr::int(2).pow(BoundExpr::int(200_000));
        let a = BoundExpr::int(2).pow(x.clone()) + BoundExpr::int(1);
        let b = BoundExpr::int(2).pow(x.clone());
        assert_eq!(compare(&a, &b).unwrap(), Ordering::Greater);
        let m = BoundExpr::central_binom_max(x.clone());
        let up = BoundExpr::int(2).pow(x);
        assert_eq!(compare(&m, &up).unwrap(), Ordering::Less);
    }

    #[test]
    fn profiles() {
        let t = tower(&[2, 2, 2], BoundExpr::int(5000));
        let p = log_profile(&t).unwrap();
        assert!(p.depth >= 2 && p.lo <= p.hi);
    }
}
