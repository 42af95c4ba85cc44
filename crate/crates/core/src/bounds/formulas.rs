//! Degree bound formulas, their published inequality chain and the
//! comparison against the earlier tower bounds.

use std::cmp::Ordering;
use std::fmt;

use super::compare::{compare_with, Settings};
use super::BoundExpr;
use crate::{Error, Result};

type B = BoundExpr;

fn c(i: i64) -> B {
    B::int(i)
}

fn check_n(n: u32) -> Result<i64> {
    if n <= 1 {
        return Err(Error::Precondition(format!("bounds need n > 1, got {n}")));
    }
    Ok(n as i64)
}

/// `bases[0]^(bases[1]^(...^top))`.
pub fn tower(bases: &[i64], top: BoundExpr) -> BoundExpr {
    bases.iter().rev().fold(top, |acc, &b| c(b).pow(acc))
}

/// `3n²·(2n²(n−1))^{148.5n⁶}`.
#[allow(non_snake_case)]
pub fn bound_D(n: u32) -> Result<BoundExpr> {
    let n = check_n(n)?;
    Ok(c(3 * n * n) * c(2 * n * n * (n - 1)).pow(B::rat(297 * n.pow(6), 2)))
}

fn binom_n2_d(n: i64, d: &B) -> B {
    B::binom(c(n * n) + d.clone(), d.clone())
}

/// `max_i C(C(n²+D, D), i)²`.
pub fn bound_d1(n: u32) -> Result<BoundExpr> {
    let d = bound_D(n)?;
    Ok(B::central_binom_max(binom_n2_d(n as i64, &d)).pow(c(2)))
}

/// `d₁·D·C(n²+D, D)`.
pub fn bound_d2(n: u32) -> Result<BoundExpr> {
    let d = bound_D(n)?;
    Ok(bound_d1(n)? * d.clone() * binom_n2_d(n as i64, &d))
}

fn d1_sq_plus_one(n: u32) -> Result<B> {
    Ok(bound_d1(n)?.pow(c(2)) + c(1))
}

/// `n·(d₂·(d₁²+1)·max_i C(d₁²+1, i)²)^{5.5n³}`.
pub fn bound_d3(n: u32) -> Result<BoundExpr> {
    let nn = check_n(n)?;
    let m = d1_sq_plus_one(n)?;
    let inner = bound_d2(n)? * m.clone() * B::central_binom_max(m).pow(c(2));
    Ok(c(nn) * inner.pow(B::rat(11 * nn.pow(3), 2)))
}

/// `⌈J(max_i C(d₁²+1, i)²)⌉` with the Schur exponent `2n²`.
pub fn bound_dbar(n: u32) -> Result<BoundExpr> {
    let nn = check_n(n)?;
    let m = d1_sq_plus_one(n)?;
    Ok(B::schur(B::central_binom_max(m).pow(c(2)), (2 * nn * nn) as u32).ceil())
}

/// Schur's bound `(√(8n)+1)^{2n²} − (√(8n)−1)^{2n²}`.
pub fn schur_j(n: u32) -> BoundExpr {
    B::schur(c(n as i64), 2 * n * n)
}

/// `(d*, n*)` with `d* = max_i C(C(n²+d, d), i)²` and `n* = d*·d·C(n²+d, d)`.
pub fn dstar_nstar(n: u32, d: u32) -> Result<(BoundExpr, BoundExpr)> {
    let n = check_n(n)?;
    if d == 0 {
        return Err(Error::Precondition("degree d must be at least 1".into()));
    }
    let d = c(d as i64);
    let cb = binom_n2_d(n, &d);
    let dstar = B::central_binom_max(cb.clone()).pow(c(2));
    let nstar = dstar.clone() * d * cb;
    Ok((dstar, nstar))
}

/// The earlier tower bounds `(d̃, I(n))`.
pub fn feng_bounds(n: u32) -> Result<(BoundExpr, BoundExpr)> {
    let n = check_n(n)?;
    let dt = tower(&[32, 2, 2, 2, 2 * n, 2], c(24 * n * n));
    let i = tower(&[4, 2, 2, 2 * n, 2], c(12 * n * n));
    Ok((dt, i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The comparator proved the opposite; carries the observed ordering.
    Fails(Ordering),
    Undecided(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails(o) => write!(
                f,
                "FAILS ({})",
                match o {
                    Ordering::Less => "lhs < rhs",
                    Ordering::Equal => "lhs = rhs",
                    Ordering::Greater => "lhs > rhs",
                }
            ),
            Verdict::Undecided(m) => write!(f, "undecided: {m}"),
        }
    }
}

/// One checked inequality.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub label: String,
    pub lhs: BoundExpr,
    pub rhs: BoundExpr,
    pub relation: Relation,
    pub observed: Option<Ordering>,
    pub verdict: Verdict,
}

pub type ReportRow = ChainStep;

fn check(label: &str, lhs: B, relation: Relation, rhs: B, settings: &Settings) -> Result<ChainStep> {
    let (observed, verdict) = match compare_with(&lhs, &rhs, settings) {
        Ok(o) => {
            let ok = match relation {
                Relation::Lt => o == Ordering::Less,
                Relation::Le => o != Ordering::Greater,
                Relation::Eq => o == Ordering::Equal,
            };
            (Some(o), if ok { Verdict::Holds } else { Verdict::Fails(o) })
        }
        Err(Error::Undecided(m)) => (None, Verdict::Undecided(m)),
        Err(e) => return Err(e),
    };
    Ok(ChainStep {
        label: label.to_string(),
        lhs,
        rhs,
        relation,
        observed,
        verdict,
    })
}

fn run(steps: Vec<(&str, B, Relation, B)>, settings: &Settings) -> Result<Vec<ChainStep>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = steps
            .into_iter()
            .map(|(l, a, r, b)| s.spawn(move || check(l, a, r, b, settings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain step panicked"))
            .collect()
    })
}

/// Checks every step of the displayed chain bounding `D`, `d₁`, `d₂`, `d₃`
/// and `d̄` for the given `n`.
pub fn verify_chain(n: u32, settings: &Settings) -> Result<Vec<ChainStep>> {
    use Relation::*;
    let nn = check_n(n)?;
    let n2 = nn * nn;
    let n3 = n2 * nn;
    let a = || c(2 * n3);
    let y6 = || a().pow(B::rat(297 * n3 * n3, 2));
    let y8 = || a().pow(B::rat(297 * n2 * n3 * n3, 2));
    let x = || a().pow(c(149 * n2 * n3 * n3));
    let d = bound_D(n)?;
    let m = || binom_n2_d(nn, &d);
    let e = B::e;
    let ex = || B::rat(11 * n3, 2);
    let q = || c(16).pow(x());
    let y149 = || a().pow(c(149 * n2 * n3 * n3 + 149 * n3 * n3));
    let y1485 = || a().pow(B::rat(297 * n2 * n3 * n3 + 297 * n3 * n3, 2));
    let stirling = (e() * (c(n2) + d.clone()) * B::rat(1, n2)).pow(c(n2));
    let sum3 = (e() + c(3) * e() * y6()).pow(c(n2));
    let r18 = || c(18).pow(c(n2)) * y8();
    let two_pow_sq = |t: B| c(2).pow(t).pow(c(2));
    let d1 = bound_d1(n)?;
    let four_x = || c(4).pow(x());
    let wrap = |inner: B| c(nn) * inner.pow(ex());
    let tail = || four_x() * (q() + c(1)) * c(4).pow(q() + c(1));
    let l1 = wrap(c(3 * n2) * c(18).pow(c(n2)) * y1485() * tail());
    let l2 = wrap(y149() * tail());
    let l3 = wrap(c(2) * y149() * four_x() * q() * c(4).pow(q() + c(1)));
    let l4 = wrap(c(8) * y149() * four_x() * q() * c(4).pow(q()));
    let l5 = wrap(c(8).pow(q()));
    let l6 = c(nn) * c(8).pow(ex() * q());
    let k = (2 * n2) as u32;
    let eight_x = || c(8).pow(x());
    let j1 = B::schur(c(4).pow(d1.clone().pow(c(2)) + c(1)), k);
    let j2 = B::schur(c(4).pow(eight_x() + c(1)), k);
    let j3 = (c(2) * c(32).pow(B::rat(1, 2)) * c(2).pow(eight_x())).pow(c(2 * n2));
    let j4 = c(2).pow(c(10 * n2)) * c(4).pow(c(n2) * eight_x());
    let steps = vec![
        ("D <= 3n^2 (2n^3)^(148.5n^6)", d.clone(), Le, c(3 * n2) * y6()),
        (
            "C(n^2+D, n^2) <= (e(n^2+D)/n^2)^(n^2)",
            B::binom(c(n2) + d.clone(), c(n2)),
            Le,
            stirling.clone(),
        ),
        (
            "(e(n^2+D)/n^2)^(n^2) <= (e + 3e(2n^3)^(148.5n^6))^(n^2)",
            stirling,
            Le,
            sum3.clone(),
        ),
        (
            "(e + 3e(2n^3)^(148.5n^6))^(n^2) <= 18^(n^2) (2n^3)^(148.5n^8)",
            sum3,
            Le,
            r18(),
        ),
        ("d1 <= (2^C(n^2+D, D))^2", d1.clone(), Le, two_pow_sq(m())),
        (
            "(2^C(n^2+D, D))^2 <= (2^(18^(n^2) (2n^3)^(148.5n^8)))^2",
            two_pow_sq(m()),
            Le,
            two_pow_sq(r18()),
        ),
        (
            "(2^(18^(n^2) (2n^3)^(148.5n^8)))^2 <= (2^X)^2",
            two_pow_sq(r18()),
            Le,
            two_pow_sq(x()),
        ),
        ("(2^X)^2 <= 4^X", two_pow_sq(x()), Le, four_x()),
        (
            "d2 <= 4^X 3n^2 (2n^3)^(148.5n^6) 18^(n^2) (2n^3)^(148.5n^8)",
            bound_d2(n)?,
            Le,
            four_x() * c(3 * n2) * y6() * r18(),
        ),
        (
            "4^X 3n^2 (2n^3)^(148.5n^6) 18^(n^2) (2n^3)^(148.5n^8) = 3n^2 18^(n^2) 4^X (2n^3)^(148.5n^8+148.5n^6)",
            four_x() * c(3 * n2) * y6() * r18(),
            Eq,
            c(3 * n2) * c(18).pow(c(n2)) * four_x() * y1485(),
        ),
        ("d3 <= L1", bound_d3(n)?, Le, l1.clone()),
        ("L1 <= L2", l1, Le, l2.clone()),
        ("L2 <= L3", l2, Le, l3.clone()),
        ("L3 <= L4", l3, Le, l4.clone()),
        ("L4 <= n (8^(16^X))^(5.5n^3)", l4, Le, l5.clone()),
        ("n (8^(16^X))^(5.5n^3) = n 8^(5.5n^3 16^X)", l5, Eq, l6),
        ("dbar <= J(4^(d1^2+1))", bound_dbar(n)?, Le, j1.clone()),
        (
            "J(4^(d1^2+1)) <= (sqrt(32) 2^(8^X) + 1)^(2n^2) - (sqrt(32) 2^(8^X) - 1)^(2n^2)",
            j1,
            Le,
            j2.clone(),
        ),
        (
            "(sqrt(32) 2^(8^X) + 1)^(2n^2) - (...)^(2n^2) <= (2 sqrt(32) 2^(8^X))^(2n^2)",
            j2,
            Le,
            j3.clone(),
        ),
        ("(2 sqrt(32) 2^(8^X))^(2n^2) <= 2^(10n^2) 4^(n^2 8^X)", j3, Le, j4),
    ];
    run(steps, settings)
}

/// The comparison of this section's bounds with the earlier towers at `n = 2`.
pub fn section4_report(settings: &Settings) -> Result<Vec<ReportRow>> {
    use Relation::*;
    let t4 = || tower(&[2, 2, 2, 2], c(18));
    let (dt, i) = feng_bounds(2)?;
    let rows = vec![
        ("dbar(2) <= 2^2^2^2^18", bound_dbar(2)?, Le, t4()),
        ("d3(2) <= 2^2^2^2^18", bound_d3(2)?, Le, t4()),
        ("I(2) <= 2^2^2^2^2^96", i.clone(), Le, tower(&[2, 2, 2, 2, 2], c(96))),
        (
            "dtilde(2) <= 2^2^2^2^2^2^194",
            dt.clone(),
            Le,
            tower(&[2, 2, 2, 2, 2, 2], c(194)),
        ),
        ("d3(2) < dtilde(2)", bound_d3(2)?, Lt, dt),
        ("dbar(2) < I(2)", bound_dbar(2)?, Lt, i),
    ];
    run(rows, settings)
}

/// `d₃(n) < d̃(n)` and `d̄(n) < I(n)` for any `n ≥ 2`.
pub fn feng_comparison(n: u32, settings: &Settings) -> Result<Vec<ReportRow>> {
    let (dt, i) = feng_bounds(n)?;
    let rows = vec![
        ("d3(n) < dtilde(n)", bound_d3(n)?, Relation::Lt, dt),
        ("dbar(n) < I(n)", bound_dbar(n)?, Relation::Lt, i),
    ];
    run(rows, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::eval_exact;
    use num_bigint::BigInt;

    #[test]
    fn small_values() {
        let (ds, ns) = dstar_nstar(2, 1).unwrap();
        assert_eq!(eval_exact(&ds, 100).unwrap(), Some(BigInt::from(100)));
        assert_eq!(eval_exact(&ns, 100).unwrap(), Some(BigInt::from(500)));
        assert!(dstar_nstar(2, 0).is_err());
        assert!(bound_D(1).is_err());
        let d = eval_exact(&bound_D(2).unwrap(), 1_000_000).unwrap().unwrap();
        assert_eq!(d, BigInt::from(12) << 28512);
        assert_eq!(eval_exact(&schur_j(2), 100).unwrap(), Some(BigInt::from(384064)));
    }
}
