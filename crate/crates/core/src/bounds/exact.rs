//! Exact big-integer evaluation of bound expressions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BoundExpr;
use crate::{Error, Result};

pub const DEFAULT_DIGIT_LIMIT: u64 = 1_000_000;

/// Number of decimal digits of `n` (1 for zero).
pub fn digit_count(n: &BigUint) -> u64 {
    if n.is_zero() {
        return 1;
    }
    let est = ((n.bits() - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64;
    // est = floor(log10) or one less.
    let p = BigUint::from(10u32).pow(est as u32 + 1);
    if *n >= p {
        est + 2
    } else {
        est + 1
    }
}

/// `(√m + 1)^k − (√m − 1)^k = u + v·√m`.
pub fn surd_expand(m: &BigInt, k: u32) -> (BigInt, BigInt) {
    let mut u = BigInt::zero();
    let mut v = BigInt::zero();
    let mut c = BigInt::one();
    for j in 0..=k {
        if j > 0 {
            c = c * BigInt::from(k - j + 1) / BigInt::from(j);
        }
        if j % 2 == 1 {
            let p = k - j;
            if p.is_multiple_of(2) {
                u += 2 * &c * num_traits::pow(m.clone(), (p / 2) as usize);
            } else {
                v += 2 * &c * num_traits::pow(m.clone(), (p / 2) as usize);
            }
        }
    }
    (u, v)
}

fn exact_sqrt(m: &BigInt) -> Option<BigInt> {
    if m.is_negative() {
        return None;
    }
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

fn ceil_sqrt(m: &BigInt) -> BigInt {
    let r = m.sqrt();
    if &r * &r == *m {
        r
    } else {
        r + 1
    }
}

struct Eval {
    limit_bits: u64,
}

// Ratio arithmetic always reduces via a binary gcd, which dominates on
// huge integers; keep integer operands on the integer path.
fn rmul(a: BigRational, b: BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.to_integer() * b.to_integer())
    } else {
        a * b
    }
}

fn radd(a: BigRational, b: BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.to_integer() + b.to_integer())
    } else {
        a + b
    }
}

fn rpow(b: BigRational, p: u64) -> BigRational {
    let (n, d) = b.into_raw();
    // Powers of coprime parts stay coprime.
    BigRational::new_raw(num_traits::pow(n, p as usize), num_traits::pow(d, p as usize))
}

fn rbits(r: &BigRational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

impl Eval {
    fn fits(&self, r: BigRational) -> Option<BigRational> {
        (rbits(&r) <= self.limit_bits).then_some(r)
    }

    fn int(&self, e: &BoundExpr) -> Result<Option<BigInt>> {
        Ok(self.eval(e)?.and_then(|r| r.is_integer().then(|| r.to_integer())))
    }

    fn eval(&self, e: &BoundExpr) -> Result<Option<BigRational>> {
        use BoundExpr::*;
        Ok(match e {
            Const(c) => self.fits(c.clone()),
            E => None,
            Add(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Some(a), Some(b)) => self.fits(radd(a, b)),
                _ => None,
            },
            Sub(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Some(a), Some(b)) => {
                    if a < b {
                        return Err(Error::Domain(
                            "subtraction obligation violated: left side is smaller".into(),
                        ));
                    }
                    if a.is_integer() && b.is_integer() {
                        Some(BigRational::from_integer(a.to_integer() - b.to_integer()))
                    } else {
                        Some(a - b)
                    }
                }
                _ => None,
            },
            Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Some(a), Some(b)) => self.fits(rmul(a, b)),
                _ => None,
            },
            Pow(b, x) => match (self.eval(b)?, self.eval(x)?) {
                (Some(b), Some(x)) => self.pow(b, x)?,
                (Some(b), None) if b.is_one() => Some(b),
                _ => None,
            },
            Binom(n, k) => match (self.int(n)?, self.int(k)?) {
                (Some(n), Some(k)) => self.binom(&n, &k).map(BigRational::from_integer),
                _ => None,
            },
            CentralBinomMax(m) => match self.int(m)? {
                Some(m) => {
                    let half = &m / 2;
                    self.binom(&m, &half).map(BigRational::from_integer)
                }
                None => None,
            },
            Surd { .. } | SchurJ { .. } => match self.surd(e)? {
                Some((u, v, m)) => {
                    if v.is_zero() {
                        self.fits(BigRational::from_integer(u))
                    } else {
                        exact_sqrt(&m).and_then(|r| self.fits(BigRational::from_integer(u + v * r)))
                    }
                }
                None => None,
            },
            Max(items) => {
                let mut best: Option<BigRational> = None;
                for it in items {
                    match self.eval(it)? {
                        Some(v) => {
                            if best.as_ref().is_none_or(|b| v > *b) {
                                best = Some(v);
                            }
                        }
                        None => return Ok(None),
                    }
                }
                best
            }
            Ceil(a) => match a.as_ref() {
                Surd { .. } | SchurJ { .. } => match self.surd(a)? {
                    Some((u, v, m)) => self.fits(BigRational::from_integer(u + ceil_sqrt(&(&v * &v * m)))),
                    None => None,
                },
                _ => self.eval(a)?.map(|r| r.ceil()),
            },
        })
    }

    /// Integer triple `(u, v, m)` with value `u + v·√m`, `v ≥ 0`.
    fn surd(&self, e: &BoundExpr) -> Result<Option<(BigInt, BigInt, BigInt)>> {
        match e {
            BoundExpr::Surd { u, v, m } => {
                if u.is_negative() || v.is_negative() || m.is_negative() {
                    return Err(Error::Domain("surd parts must be non-negative".into()));
                }
                Ok(Some((u.clone(), v.clone(), m.clone())))
            }
            BoundExpr::SchurJ { arg, exp } => {
                let Some(a) = self.int(arg)? else {
                    return Ok(None);
                };
                let m: BigInt = a * 8;
                let est = (*exp as u64) * (m.bits() / 2 + 2);
                if est > self.limit_bits + 64 {
                    return Ok(None);
                }
                let (u, v) = surd_expand(&m, *exp);
                Ok(Some((u, v, m)))
            }
            _ => Ok(None),
        }
    }

    fn pow(&self, b: BigRational, x: BigRational) -> Result<Option<BigRational>> {
        if b.is_negative() {
            return Err(Error::Domain("power of a negative base".into()));
        }
        if b.is_zero() {
            if x.is_positive() {
                return Ok(Some(b));
            }
            return Err(Error::Domain("zero raised to a non-positive power".into()));
        }
        if b.is_one() || x.is_zero() {
            return Ok(Some(BigRational::one()));
        }
        let q = x.denom().to_u32();
        let Some(q) = q else { return Ok(None) };
        let b = if q > 1 {
            let (n, d) = (b.numer().nth_root(q), b.denom().nth_root(q));
            if num_traits::pow(n.clone(), q as usize) != *b.numer()
                || num_traits::pow(d.clone(), q as usize) != *b.denom()
            {
                return Ok(None);
            }
            BigRational::new(n, d)
        } else {
            b
        };
        let Some(p) = x.numer().abs().to_u64() else {
            return Ok(None);
        };
        let est = p.saturating_mul((rbits(&b) - 1).max(1));
        if est > self.limit_bits + 64 {
            return Ok(None);
        }
        let v = rpow(b, p);
        let v = if x.is_negative() { v.recip() } else { v };
        Ok(self.fits(v))
    }

    fn binom(&self, n: &BigInt, k: &BigInt) -> Option<BigInt> {
        if k.is_negative() || k > n {
            return Some(BigInt::zero());
        }
        let k = k.clone().min(n - k);
        let kb = k.bits();
        if kb > 0 {
            // C(n, k) ≥ (n/k)^k.
            let lower = (n.bits().saturating_sub(kb + 1) as f64) * k.to_f64().unwrap_or(f64::INFINITY);
            if lower > (self.limit_bits + 64) as f64 {
                return None;
            }
        }
        if let (Some(nf), Some(kf)) = (n.to_f64().filter(|x| x.is_finite()), k.to_f64()) {
            if kf > 0.0 {
                // log2 C(n, k) ≤ n·H(k/n).
                let p = kf / nf;
                let h = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
                if nf * h > (self.limit_bits + 64) as f64 {
                    return None;
                }
            }
        }
        let k = k.to_u64()?;
        let mut c = BigInt::one();
        for i in 0..k {
            c = c * (n - BigInt::from(i)) / BigInt::from(i + 1);
        }
        Some(c)
    }
}

/// Exact integer value when it has at most `digit_limit` decimal digits.
pub fn eval_exact(e: &BoundExpr, digit_limit: u64) -> Result<Option<BigInt>> {
    let limit_bits = (digit_limit as f64 / std::f64::consts::LOG10_2).ceil() as u64 + 4;
    let ev = Eval { limit_bits };
    let Some(r) = ev.eval(e)? else {
        return Ok(None);
    };
    if !r.is_integer() {
        return Ok(None);
    }
    let n = r.to_integer();
    let digits = digit_count(&n.magnitude().clone());
    Ok((digits <= digit_limit).then_some(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let j = BoundExpr::schur(BoundExpr::int(2), 8);
        assert_eq!(eval_exact(&j, DEFAULT_DIGIT_LIMIT).unwrap(), Some(BigInt::from(384064)));
        let p = BoundExpr::int(2).pow(BoundExpr::int(10));
        assert_eq!(eval_exact(&p, DEFAULT_DIGIT_LIMIT).unwrap(), Some(BigInt::from(1024)));
        let big = BoundExpr::int(2).pow(BoundExpr::int(2).pow(BoundExpr::int(64)));
        assert_eq!(eval_exact(&big, DEFAULT_DIGIT_LIMIT).unwrap(), None);
    }

    #[test]
    fn surds() {
        let (u, v) = surd_expand(&BigInt::from(16), 8);
        assert_eq!(u + v * 4, BigInt::from(384064));
        let (u, v) = surd_expand(&BigInt::from(24), 18);
        assert!(u.is_zero() && v.is_positive());
        let c = BoundExpr::schur(BoundExpr::int(3), 18).ceil();
        let got = eval_exact(&c, DEFAULT_DIGIT_LIMIT).unwrap().unwrap();
        let f = (24f64.sqrt() + 1.0).powi(18) - (24f64.sqrt() - 1.0).powi(18);
        assert!((got.to_f64().unwrap() / f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn guarded_subtraction() {
        let bad = BoundExpr::int(3) - BoundExpr::int(5);
        assert!(eval_exact(&bad, 100).is_err());
        let half = BoundExpr::int(9).pow(BoundExpr::rat(1, 2));
        assert_eq!(eval_exact(&half, 100).unwrap(), Some(BigInt::from(3)));
        let irr = BoundExpr::int(8).pow(BoundExpr::rat(1, 2));
        assert_eq!(eval_exact(&irr, 100).unwrap(), None);
    }

    #[test]
    fn digits() {
        assert_eq!(digit_count(&BigUint::from(999u32)), 3);
        assert_eq!(digit_count(&BigUint::from(1000u32)), 4);
        assert_eq!(digit_count(&BigUint::from(1u32)), 1);
    }
}
