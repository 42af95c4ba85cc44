//! Symbolic bound expressions over astronomically large integers, exact
//! evaluation when feasible and a rigorous comparator otherwise.

mod compare;
mod exact;
mod formulas;
pub mod mag;
mod nf;

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub use compare::{compare, compare_with, log_profile, LogProfile, Settings};
pub use exact::{digit_count, eval_exact, surd_expand, DEFAULT_DIGIT_LIMIT};
pub use formulas::{
    bound_D, bound_d1, bound_d2, bound_d3, bound_dbar, dstar_nstar, feng_bounds, feng_comparison, schur_j,
    section4_report, tower, verify_chain, ChainStep, Relation, ReportRow, Verdict,
};

/// Expression tree denoting a non-negative real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundExpr {
    Const(BigRational),
    /// Euler's number, handled as the interval `[2.718281, 2.718282]`.
    E,
    Add(Box<BoundExpr>, Box<BoundExpr>),
    /// Guarded subtraction; evaluation fails when the left side is smaller.
    Sub(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Pow(Box<BoundExpr>, Box<BoundExpr>),
    Binom(Box<BoundExpr>, Box<BoundExpr>),
    /// `max_i C(M, i) = C(M, floor(M/2))`.
    CentralBinomMax(Box<BoundExpr>),
    /// `u + v·√m`.
    Surd {
        u: BigInt,
        v: BigInt,
        m: BigInt,
    },
    /// `(√(8a) + 1)^k − (√(8a) − 1)^k`.
    SchurJ {
        arg: Box<BoundExpr>,
        exp: u32,
    },
    Max(Vec<BoundExpr>),
    Ceil(Box<BoundExpr>),
}

impl BoundExpr {
    pub fn int(i: i64) -> BoundExpr {
        assert!(i >= 0, "bound constants are non-negative");
        BoundExpr::Const(BigRational::from_integer(i.into()))
    }

    pub fn big(i: BigInt) -> BoundExpr {
        assert!(!i.is_negative(), "bound constants are non-negative");
        BoundExpr::Const(BigRational::from_integer(i))
    }

    pub fn rat(p: i64, q: i64) -> BoundExpr {
        let r = BigRational::new(p.into(), q.into());
        assert!(!r.is_negative(), "bound constants are non-negative");
        BoundExpr::Const(r)
    }

    pub fn e() -> BoundExpr {
        BoundExpr::E
    }

    pub fn pow(self, exp: BoundExpr) -> BoundExpr {
        BoundExpr::Pow(Box::new(self), Box::new(exp))
    }

    pub fn binom(n: BoundExpr, k: BoundExpr) -> BoundExpr {
        BoundExpr::Binom(Box::new(n), Box::new(k))
    }

    pub fn central_binom_max(m: BoundExpr) -> BoundExpr {
        BoundExpr::CentralBinomMax(Box::new(m))
    }

    pub fn surd(u: BigInt, v: BigInt, m: BigInt) -> BoundExpr {
        BoundExpr::Surd { u, v, m }
    }

    pub fn schur(arg: BoundExpr, exp: u32) -> BoundExpr {
        BoundExpr::SchurJ {
            arg: Box::new(arg),
            exp,
        }
    }

    pub fn max(items: Vec<BoundExpr>) -> BoundExpr {
        BoundExpr::Max(items)
    }

    pub fn ceil(self) -> BoundExpr {
        BoundExpr::Ceil(Box::new(self))
    }

    fn precedence(&self) -> u8 {
        match self {
            BoundExpr::Add(..) | BoundExpr::Sub(..) => 1,
            BoundExpr::Mul(..) => 2,
            BoundExpr::Const(c) if !c.is_integer() => 2,
            BoundExpr::Surd { .. } => 1,
            BoundExpr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            BoundExpr::Const(c) => fmt_const(c, f),
            BoundExpr::E => write!(f, "e"),
            BoundExpr::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            BoundExpr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            BoundExpr::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "*")?;
                b.fmt_at(f, 3)
            }
            BoundExpr::Pow(a, b) => {
                a.fmt_at(f, 4)?;
                write!(f, "^")?;
                b.fmt_at(f, 3)
            }
            BoundExpr::Binom(n, k) => write!(f, "C({n}, {k})"),
            BoundExpr::CentralBinomMax(m) => write!(f, "maxC({m})"),
            BoundExpr::Surd { u, v, m } => write!(f, "{u} + {v}*sqrt({m})"),
            BoundExpr::SchurJ { arg, exp } => write!(f, "J({arg}; {exp})"),
            BoundExpr::Max(items) => {
                write!(f, "max(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, ")")
            }
            BoundExpr::Ceil(a) => write!(f, "ceil({a})"),
        }
    }
}

fn fmt_const(c: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let show = |n: &BigInt, f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if n.bits() <= 64 {
            return write!(f, "{n}");
        }
        let tz = n.trailing_zeros().unwrap_or(0);
        let odd: BigInt = n >> tz;
        if odd.is_one() {
            write!(f, "2^{tz}")
        } else if odd.bits() <= 64 {
            write!(f, "{odd}*2^{tz}")
        } else {
            let digits = digit_count(&odd.abs().to_biguint().unwrap());
            write!(f, "<{digits} digits>")?;
            if tz > 0 {
                write!(f, "*2^{tz}")?;
            }
            Ok(())
        }
    };
    if c.is_integer() {
        show(c.numer(), f)
    } else if let (Some(p), Some(q)) = (c.numer().to_i64(), c.denom().to_i64()) {
        if q == 2 || q == 4 || q == 8 || q == 10 {
            write!(f, "{}", p as f64 / q as f64)
        } else {
            write!(f, "{p}/{q}")
        }
    } else {
        show(c.numer(), f)?;
        write!(f, "/")?;
        show(c.denom(), f)
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl ops::Add for BoundExpr {
    type Output = BoundExpr;
    fn add(self, o: BoundExpr) -> BoundExpr {
        BoundExpr::Add(Box::new(self), Box::new(o))
    }
}

impl ops::Sub for BoundExpr {
    type Output = BoundExpr;
    fn sub(self, o: BoundExpr) -> BoundExpr {
        BoundExpr::Sub(Box::new(self), Box::new(o))
    }
}

impl ops::Mul for BoundExpr {
    type Output = BoundExpr;
    fn mul(self, o: BoundExpr) -> BoundExpr {
        BoundExpr::Mul(Box::new(self), Box::new(o))
    }
}

impl From<i64> for BoundExpr {
    fn from(i: i64) -> BoundExpr {
        BoundExpr::int(i)
    }
}
