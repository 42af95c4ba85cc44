//! Rigorous interval arithmetic on exponent towers.
//!
//! A [`Point`] is `±T_h(m)` with `T_0(m) = m` and `T_{h+1}(m) = 2^{T_h(m)}`.
//! Every operation takes a rounding direction and returns a point on the
//! requested side of the true result, so a [`Mag`] built from a lower and an
//! upper point always encloses the exact value.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

const LOWER: f64 = 1005.0;
const RAISE: f64 = 1.0e304;
const TINY_EXP: f64 = -999.0;

fn nudge(x: f64, dir: Dir, steps: u32) -> f64 {
    if x.is_nan() {
        return match dir {
            Dir::Down => f64::NEG_INFINITY,
            Dir::Up => f64::INFINITY,
        };
    }
    let mut y = x;
    for _ in 0..steps {
        y = match dir {
            Dir::Down => y.next_down(),
            Dir::Up => y.next_up(),
        };
    }
    if x.is_infinite() {
        x
    } else {
        y
    }
}

fn exp2r(x: f64, dir: Dir) -> f64 {
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let r = nudge(x.exp2(), dir, 3);
    if dir == Dir::Down {
        r.max(0.0)
    } else {
        r
    }
}

fn log2r(x: f64, dir: Dir) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    nudge(x.log2(), dir, 3)
}

/// Signed tower point `±T_h(m)`; at level 0, `m = |value|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    neg: bool,
    h: u32,
    m: f64,
}

// Interval operations carry rounding semantics, so they stay named methods.
#[allow(clippy::should_implement_trait)]
impl Point {
    pub const ZERO: Point = Point {
        neg: false,
        h: 0,
        m: 0.0,
    };
    pub const INF: Point = Point {
        neg: false,
        h: 0,
        m: f64::INFINITY,
    };
    pub const NEG_INF: Point = Point {
        neg: true,
        h: 0,
        m: f64::INFINITY,
    };

    /// A point on the `dir` side of `x`; exact when `x` is representable.
    pub fn from_f64(x: f64, dir: Dir) -> Point {
        Point {
            neg: x < 0.0,
            h: 0,
            m: x.abs(),
        }
        .normalize(dir)
    }

    /// `T_h(m)` for `m` a positive tower argument.
    pub fn tower(h: u32, m: f64, dir: Dir) -> Point {
        Point { neg: false, h, m }.normalize(dir)
    }

    pub fn level(&self) -> u32 {
        self.h
    }

    pub fn top(&self) -> f64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.m == 0.0
    }

    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.neg {
            -1
        } else {
            1
        }
    }

    /// Value as `f64` when the point sits at level 0.
    pub fn as_f64(&self) -> Option<f64> {
        if self.h == 0 {
            Some(if self.neg { -self.m } else { self.m })
        } else {
            None
        }
    }

    fn mag_dir(&self, dir: Dir) -> Dir {
        if self.neg {
            dir.flip()
        } else {
            dir
        }
    }

    fn normalize(mut self, dir: Dir) -> Point {
        let md = self.mag_dir(dir);
        loop {
            if self.h >= 1 && self.m <= LOWER {
                self.m = exp2r(self.m, md);
                self.h -= 1;
                continue;
            }
            if self.m > RAISE && self.m.is_finite() {
                self.m = log2r(self.m, md);
                self.h += 1;
                continue;
            }
            break;
        }
        if self.h == 0 && self.m == 0.0 {
            self.neg = false;
        }
        self
    }

    pub fn neg(self) -> Point {
        if self.is_zero() {
            self
        } else {
            Point { neg: !self.neg, ..self }
        }
    }

    fn abs(self) -> Point {
        Point { neg: false, ..self }
    }

    /// Raises a positive magnitude to level `h`, rounding in `dir`.
    fn raised(self, h: u32, dir: Dir) -> f64 {
        let mut m = self.m;
        for _ in self.h..h {
            m = log2r(m, dir);
        }
        m
    }

    fn cmp_mag(a: Point, b: Point) -> Option<Ordering> {
        match a.h.cmp(&b.h) {
            Ordering::Equal => a.m.partial_cmp(&b.m),
            Ordering::Less => {
                let (lo, hi) = (a.raised(b.h, Dir::Down), a.raised(b.h, Dir::Up));
                if hi < b.m {
                    Some(Ordering::Less)
                } else if lo > b.m {
                    Some(Ordering::Greater)
                } else if lo == hi && lo == b.m {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
            Ordering::Greater => Self::cmp_mag(b, a).map(Ordering::reverse),
        }
    }

    /// Certain comparison of the represented values; `None` when rounding
    /// hides the answer.
    pub fn cmp_value(a: Point, b: Point) -> Option<Ordering> {
        let (sa, sb) = (a.sign(), b.sign());
        if sa != sb {
            return Some(sa.cmp(&sb));
        }
        match sa {
            0 => Some(Ordering::Equal),
            1 => Self::cmp_mag(a, b),
            _ => Self::cmp_mag(a.abs(), b.abs()).map(Ordering::reverse),
        }
    }

    /// A point that is `≤` both arguments (`Down`) or `≥` both (`Up`).
    fn extreme(a: Point, b: Point, dir: Dir) -> Point {
        match (Self::cmp_value(a, b), dir) {
            (Some(Ordering::Less | Ordering::Equal), Dir::Down) => a,
            (Some(Ordering::Greater), Dir::Down) => b,
            (Some(Ordering::Less), Dir::Up) => b,
            (Some(Ordering::Greater | Ordering::Equal), Dir::Up) => a,
            (None, _) => {
                if a.sign() != b.sign() || a.sign() == 0 {
                    return if dir == Dir::Down { Point::NEG_INF } else { Point::INF };
                }
                let h = a.h.max(b.h);
                let md = a.mag_dir(dir);
                let m = a.raised(h, md).max(b.raised(h, md));
                let m = if (dir == Dir::Down) == a.neg {
                    m
                } else {
                    a.raised(h, md).min(b.raised(h, md))
                };
                Point { neg: a.neg, h, m }.normalize(dir)
            }
        }
    }

    pub fn exp2(self, dir: Dir) -> Point {
        if self.sign() >= 0 {
            if self.h == 0 {
                if self.m <= LOWER {
                    return Point::from_f64(exp2r(self.m, dir), dir);
                }
                return Point::tower(1, self.m, dir);
            }
            return Point::tower(self.h + 1, self.m, dir);
        }
        if self.h == 0 && self.m <= -TINY_EXP {
            return Point::from_f64(exp2r(-self.m, dir), dir);
        }
        match dir {
            Dir::Down => Point::ZERO,
            Dir::Up => Point::from_f64(TINY_EXP.exp2(), Dir::Up),
        }
    }

    pub fn log2(self, dir: Dir) -> Point {
        if self.sign() <= 0 {
            return Point::NEG_INF;
        }
        if self.h == 0 {
            return Point::from_f64(log2r(self.m, dir), dir);
        }
        Point {
            neg: false,
            h: self.h - 1,
            m: self.m,
        }
        .normalize(dir)
    }

    pub fn add(a: Point, b: Point, dir: Dir) -> Point {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (ai, bi) = (a.h == 0 && a.m.is_infinite(), b.h == 0 && b.m.is_infinite());
        if ai || bi {
            if ai && bi && a.neg != b.neg {
                return if dir == Dir::Down { Point::NEG_INF } else { Point::INF };
            }
            return if ai { a } else { b };
        }
        if a.h == 0 && b.h == 0 {
            let s = a.as_f64().unwrap() + b.as_f64().unwrap();
            return Point::from_f64(nudge(s, dir, 1), dir);
        }
        match (a.neg, b.neg) {
            (false, false) => Self::add_pos(a, b, dir),
            (true, true) => Self::add_pos(a.abs(), b.abs(), dir.flip()).neg(),
            (false, true) => Self::sub_pos(a, b.abs(), dir),
            (true, false) => Self::sub_pos(b, a.abs(), dir),
        }
    }

    fn add_pos(a: Point, b: Point, dir: Dir) -> Point {
        let (mut big, mut small) = match Self::cmp_mag(a, b) {
            Some(Ordering::Less) => (b, a),
            _ => (a, b),
        };
        if big.h == 0 {
            std::mem::swap(&mut big, &mut small);
        }
        let lb = big.log2(dir);
        let ls = small.log2(dir);
        let d = Point::add(ls, lb.neg(), dir);
        let delta = log2_one_plus_exp2(d, dir);
        Point::add(lb, delta, dir).exp2(dir)
    }

    /// `p - q` for non-negative `p`, `q`.
    fn sub_pos(p: Point, q: Point, dir: Dir) -> Point {
        match Self::cmp_mag(p, q) {
            Some(Ordering::Equal) => Point::ZERO,
            Some(Ordering::Greater) => {
                let lp = p.log2(dir);
                let lq = q.log2(dir.flip());
                let d = Point::add(lq, lp.neg(), dir.flip());
                match log2_one_minus_exp2(d, dir) {
                    Some(delta) => Point::add(lp, delta, dir).exp2(dir),
                    None => Point::ZERO,
                }
            }
            Some(Ordering::Less) => Self::sub_pos(q, p, dir.flip()).neg(),
            None => match dir {
                Dir::Down => q.neg(),
                Dir::Up => p,
            },
        }
    }

    pub fn mul(a: Point, b: Point, dir: Dir) -> Point {
        if a.is_zero() || b.is_zero() {
            return Point::ZERO;
        }
        let neg = a.neg != b.neg;
        let md = if neg { dir.flip() } else { dir };
        let mag = if a.h == 0 && b.h == 0 && (a.m * b.m).is_finite() {
            Point::from_f64(nudge(a.m * b.m, md, 1), md)
        } else {
            let s = Point::add(a.abs().log2(md), b.abs().log2(md), md);
            s.exp2(md)
        };
        if neg {
            mag.neg()
        } else {
            mag
        }
    }
}

/// `log2(1 + 2^d)` rounded in `dir`.
fn log2_one_plus_exp2(d: Point, dir: Dir) -> Point {
    match d.as_f64() {
        Some(x) if x <= TINY_EXP - 1.0 => match dir {
            Dir::Down => Point::ZERO,
            Dir::Up => Point::from_f64((TINY_EXP + 1.0).exp2(), Dir::Up),
        },
        Some(x) if x <= 0.0 => {
            let r = exp2r(x, dir);
            let v = nudge(r.ln_1p() / LN_2, dir, 3);
            Point::from_f64(if dir == Dir::Down { v.max(0.0) } else { v }, dir)
        }
        Some(x) => {
            let v = x + exp2r(-x, dir).ln_1p() / LN_2;
            Point::from_f64(nudge(v, dir, 3), dir)
        }
        None if d.neg => log2_one_plus_exp2(Point::from_f64(2.0 * TINY_EXP, dir), dir),
        None => match dir {
            Dir::Down => d,
            Dir::Up => Point::add(d, Point::from_f64((TINY_EXP + 1.0).exp2(), Dir::Up), Dir::Up),
        },
    }
}

/// `log2(1 - 2^d)` for `d < 0`, rounded in `dir`; `None` when the bound
/// degenerates (only possible for `Down`, meaning "no positive lower bound").
fn log2_one_minus_exp2(d: Point, dir: Dir) -> Option<Point> {
    if d.sign() >= 0 {
        return match dir {
            Dir::Down => None,
            Dir::Up => Some(Point::ZERO),
        };
    }
    match d.as_f64() {
        Some(x) if x > TINY_EXP - 1.0 => {
            let r = exp2r(x, dir.flip());
            if r >= 1.0 {
                return match dir {
                    Dir::Down => None,
                    Dir::Up => Some(Point::ZERO),
                };
            }
            let v = nudge((-r).ln_1p() / LN_2, dir, 3);
            Some(Point::from_f64(if dir == Dir::Up { v.min(0.0) } else { v }, dir))
        }
        _ => Some(match dir {
            Dir::Down => Point::from_f64(-(TINY_EXP + 2.0).exp2(), Dir::Down),
            Dir::Up => Point::ZERO,
        }),
    }
}

fn log2_bigint(n: &BigInt) -> (f64, f64) {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 1000 {
        let f = n.to_f64().unwrap_or(f64::INFINITY);
        // `to_f64` is within one ulp; widen before the logarithm.
        return (
            log2r(nudge(f, Dir::Down, 2), Dir::Down),
            log2r(nudge(f, Dir::Up, 2), Dir::Up),
        );
    }
    let shift = bits - 64;
    let top: BigInt = &n >> shift;
    let t = top.to_u64().expect("64 bits") as f64;
    let lo = nudge(log2r(nudge(t, Dir::Down, 1), Dir::Down) + shift as f64, Dir::Down, 2);
    let hi = nudge(log2r(nudge(t + 1.0, Dir::Up, 1), Dir::Up) + shift as f64, Dir::Up, 2);
    (lo, hi)
}

/// Closed interval `[lo, hi]` of tower points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    pub lo: Point,
    pub hi: Point,
}

#[allow(clippy::should_implement_trait)]
impl Mag {
    pub const ZERO: Mag = Mag {
        lo: Point::ZERO,
        hi: Point::ZERO,
    };

    pub fn new(lo: Point, hi: Point) -> Mag {
        Mag { lo, hi }
    }

    pub fn from_f64_interval(lo: f64, hi: f64) -> Mag {
        Mag {
            lo: Point::from_f64(lo, Dir::Down),
            hi: Point::from_f64(hi, Dir::Up),
        }
    }

    pub fn exact_f64(x: f64) -> Mag {
        Self::from_f64_interval(x, x)
    }

    pub fn from_rational(r: &BigRational) -> Mag {
        if r.is_zero() {
            return Mag::ZERO;
        }
        let bits = r.numer().bits().max(r.denom().bits());
        if bits <= 900 {
            let f = r.to_f64().unwrap_or(0.0);
            return Self::from_f64_interval(nudge(f, Dir::Down, 2), nudge(f, Dir::Up, 2));
        }
        let (nl, nh) = log2_bigint(r.numer());
        let (dl, dh) = log2_bigint(r.denom());
        let l = Mag::from_f64_interval(nudge(nl - dh, Dir::Down, 1), nudge(nh - dl, Dir::Up, 1));
        let m = l.exp2();
        if r.is_negative() {
            m.neg()
        } else {
            m
        }
    }

    pub fn from_bigint(n: &BigInt) -> Mag {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn neg(self) -> Mag {
        Mag {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(self, o: Mag) -> Mag {
        Mag {
            lo: Point::add(self.lo, o.lo, Dir::Down),
            hi: Point::add(self.hi, o.hi, Dir::Up),
        }
    }

    pub fn sub(self, o: Mag) -> Mag {
        self.add(o.neg())
    }

    /// Intersects with `[0, ∞)`; for quantities known to be non-negative.
    pub fn clamp_nonneg(self) -> Mag {
        let lo = if self.lo.sign() < 0 { Point::ZERO } else { self.lo };
        let hi = if self.hi.sign() < 0 { Point::ZERO } else { self.hi };
        Mag { lo, hi }
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.lo.sign() >= 0 && o.lo.sign() >= 0 {
            return Mag {
                lo: Point::mul(self.lo, o.lo, Dir::Down),
                hi: Point::mul(self.hi, o.hi, Dir::Up),
            };
        }
        let cands = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)];
        let mut lo = Point::mul(cands[0].0, cands[0].1, Dir::Down);
        let mut hi = Point::mul(cands[0].0, cands[0].1, Dir::Up);
        for &(a, b) in &cands[1..] {
            lo = Point::extreme(lo, Point::mul(a, b, Dir::Down), Dir::Down);
            hi = Point::extreme(hi, Point::mul(a, b, Dir::Up), Dir::Up);
        }
        Mag { lo, hi }
    }

    pub fn exp2(self) -> Mag {
        Mag {
            lo: self.lo.exp2(Dir::Down),
            hi: self.hi.exp2(Dir::Up),
        }
    }

    /// Logarithm of a non-negative interval.
    pub fn log2(self) -> Mag {
        Mag {
            lo: self.lo.log2(Dir::Down),
            hi: if self.hi.sign() <= 0 {
                Point::NEG_INF
            } else {
                self.hi.log2(Dir::Up)
            },
        }
    }

    /// `self^e` for a non-negative base.
    pub fn pow(self, e: Mag) -> Mag {
        if e.lo.is_zero() && e.hi.is_zero() {
            return Mag::exact_f64(1.0);
        }
        if self.hi.is_zero() {
            return Mag::ZERO;
        }
        e.mul(self.clamp_nonneg().log2()).exp2()
    }

    pub fn recip(self) -> Mag {
        self.pow(Mag::exact_f64(-1.0))
    }

    pub fn div(self, o: Mag) -> Mag {
        self.mul(o.recip())
    }

    pub fn max(self, o: Mag) -> Mag {
        Mag {
            lo: self.lo,
            hi: Point::extreme(self.hi, o.hi, Dir::Up),
        }
    }

    pub fn sqrt(self) -> Mag {
        self.pow(Mag::exact_f64(0.5))
    }

    /// Certainly `self < o`.
    pub fn lt(&self, o: &Mag) -> bool {
        Point::cmp_value(self.hi, o.lo) == Some(Ordering::Less)
    }

    /// Upper bound as an `f64` (infinite when the bound is a tower).
    pub fn hi_f64(&self) -> f64 {
        self.hi
            .as_f64()
            .unwrap_or(if self.hi.neg { f64::NEG_INFINITY } else { f64::INFINITY })
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo
            .as_f64()
            .unwrap_or(if self.lo.neg { f64::NEG_INFINITY } else { f64::INFINITY })
    }

    /// Common tower level of both endpoints with the enclosing tops there.
    pub fn profile(&self) -> (u32, f64, f64) {
        let h = self.lo.h.max(self.hi.h);
        let top = |p: Point, dir: Dir| -> f64 {
            if p.sign() > 0 {
                p.raised(h, dir)
            } else if h == 0 {
                p.as_f64().unwrap_or(0.0)
            } else {
                f64::NEG_INFINITY
            }
        };
        (h, top(self.lo, Dir::Down), top(self.hi, Dir::Up))
    }

    /// Upper bound on the number of decimal digits of the value.
    pub fn digits_upper(&self) -> f64 {
        let l = self.clamp_nonneg().log2();
        let h = l.hi_f64();
        if h.is_finite() {
            (h.max(0.0) / std::f64::consts::LOG2_10).ceil() + 1.0
        } else {
            f64::INFINITY
        }
    }
}
