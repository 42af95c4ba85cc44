//! Canonical sums of products of atom powers, with rigorous magnitudes and
//! logarithmic forms used by the comparator.

use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::LN_2;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::exact::surd_expand;
use super::mag::{Mag, Point};
use super::BoundExpr;
use crate::{Error, Result};

/// Prime powers up to this many bits live in the coefficient.
const FOLD_BITS: u64 = 65_536;
/// Constant binomials and surds up to this many bits are evaluated.
const CONST_BITS: u64 = 1 << 18;
const CBM_FOLD: u64 = 1 << 16;
const SMALL_K: u64 = 64;
const TRIAL_LIMIT: u32 = 1000;
/// `½·log2(π/2)` rounded towards zero.
const HALF_LOG2_HALF_PI: f64 = 0.3257;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    /// An integer base > 1 with no factor below the trial limit other than
    /// itself (a small prime or an unfactored residual).
    Prime(BigUint),
    E,
    LogP(BigUint),
    LogE,
    /// A multi-term sum treated as a single base.
    Group(Sum),
    Binom(Sum, u32),
    BinomGen(Sum, Sum),
    Cbm(Sum),
    Schur(Sum, u32),
    Ceil(Sum),
    Max(Vec<Sum>),
    /// Opaque `log2` of a positive sum.
    Log(Sum),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Term(pub BTreeMap<Atom, Sum>);

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Sum(pub BTreeMap<Term, BigRational>);

/// Outward-rounded `f64` interval for logarithmic error terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Ival {
    pub lo: f64,
    pub hi: f64,
}

impl Ival {
    pub const ZERO: Ival = Ival { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Ival {
        Ival { lo, hi }
    }

    pub fn is_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn add(self, o: Ival) -> Ival {
        if o.is_zero() {
            return self;
        }
        if self.is_zero() {
            return o;
        }
        Ival::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn neg(self) -> Ival {
        Ival::new(-self.hi, -self.lo)
    }

    pub fn scale(self, q: &BigRational) -> Ival {
        if self.is_zero() || q.is_zero() {
            return Ival::ZERO;
        }
        let (ql, qh) = rat_bounds(q);
        let c = [self.lo * ql, self.lo * qh, self.hi * ql, self.hi * qh];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ival::new(lo.next_down(), hi.next_up())
    }

    pub fn to_mag(self) -> Mag {
        Mag::from_f64_interval(self.lo, self.hi)
    }
}

fn rat_bounds(q: &BigRational) -> (f64, f64) {
    let f = q.to_f64().unwrap_or(f64::NAN);
    if BigRational::from_float(f).as_ref() == Some(q) {
        (f, f)
    } else {
        (f.next_down().next_down(), f.next_up().next_up())
    }
}

fn log2_1p(x: f64, up: bool) -> f64 {
    let v = x.ln_1p() / LN_2;
    if up {
        v.next_up().next_up().next_up()
    } else {
        v.next_down().next_down().next_down()
    }
}

fn small_primes() -> &'static [u32] {
    static P: OnceLock<Vec<u32>> = OnceLock::new();
    P.get_or_init(|| {
        let mut out = Vec::new();
        for n in 2..=TRIAL_LIMIT {
            if out.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0) {
                out.push(n);
            }
        }
        out
    })
}

fn perfect_power(n: &BigUint) -> (BigUint, u64) {
    let max_k = (n.bits() / 9).min(64);
    for k in (2..=max_k).rev() {
        let r = n.nth_root(k as u32);
        if num_traits::pow(r.clone(), k as usize) == *n {
            let (b, j) = perfect_power(&r);
            return (b, j * k);
        }
    }
    (n.clone(), 1)
}

/// Trial factorization with a perfect-power reduced residual.
fn factor(n: &BigUint) -> Vec<(BigUint, u64)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        if n.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        let mut v = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        if v > 0 {
            out.push((pb, v));
        }
    }
    if n > BigUint::one() {
        out.push(perfect_power(&n));
    }
    out
}

fn valuation(n: &BigInt, p: &BigUint) -> u64 {
    if n.is_zero() {
        return 0;
    }
    if *p == BigUint::from(2u32) {
        return n.trailing_zeros().unwrap_or(0);
    }
    let pb = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

fn rpow(p: &BigUint, k: i64) -> BigRational {
    let v = BigRational::from_integer(num_traits::pow(BigInt::from(p.clone()), k.unsigned_abs() as usize));
    if k < 0 {
        v.recip()
    } else {
        v
    }
}

/// `c^e` as a coefficient times prime atoms.
fn const_pow(c: &BigRational, e: &Sum) -> Result<(BigRational, Vec<(Atom, Sum)>)> {
    if c.is_zero() {
        return match e.as_constant() {
            Some(q) if !q.is_positive() => Err(Error::Domain("zero raised to a non-positive power".into())),
            _ => Ok((BigRational::zero(), vec![])),
        };
    }
    if c.is_negative() {
        return match e.as_constant() {
            Some(q) if q.is_integer() => {
                let (k, at) = const_pow(&-c, e)?;
                Ok((if q.to_integer().is_odd() { -k } else { k }, at))
            }
            _ => Err(Error::Domain("non-integer power of a negative number".into())),
        };
    }
    let mut atoms = Vec::new();
    for (p, v) in factor(&c.numer().magnitude().clone()) {
        atoms.push((Atom::Prime(p), e.mul(&Sum::int(v as i64))?));
    }
    for (p, v) in factor(&c.denom().magnitude().clone()) {
        atoms.push((Atom::Prime(p), e.mul(&Sum::int(-(v as i64)))?));
    }
    Ok((BigRational::one(), atoms))
}

fn fold_primes(c: &mut BigRational, map: &mut BTreeMap<Atom, Sum>) {
    let mut folded = Vec::new();
    for (a, e) in map.iter() {
        if let (Atom::Prime(p), Some(q)) = (a, e.as_constant()) {
            if q.is_integer() {
                if let Some(k) = q.to_integer().to_i64() {
                    if k.unsigned_abs().saturating_mul(p.bits()) <= FOLD_BITS {
                        *c *= rpow(p, k);
                        folded.push(a.clone());
                    }
                }
            }
        }
    }
    for a in folded {
        map.remove(&a);
    }
}

fn add_exponent(map: &mut BTreeMap<Atom, Sum>, a: Atom, e: &Sum) {
    match map.entry(a) {
        Entry::Vacant(v) => {
            v.insert(e.clone());
        }
        Entry::Occupied(mut o) => {
            let s = o.get().add(e);
            *o.get_mut() = s;
        }
    }
}

fn normalize_term(mut c: BigRational, atoms: Vec<(Atom, Sum)>) -> Result<(BigRational, Term)> {
    let mut map: BTreeMap<Atom, Sum> = BTreeMap::new();
    let mut work = atoms;
    while let Some((a, e)) = work.pop() {
        if e.is_zero() || c.is_zero() {
            continue;
        }
        if let Atom::Group(g) = &a {
            if let Some(k) = g.as_constant() {
                let (cc, at) = const_pow(&k, &e)?;
                c *= cc;
                work.extend(at);
                continue;
            }
            if let Some((t, k)) = g.single() {
                let (cc, at) = const_pow(k, &e)?;
                c *= cc;
                work.extend(at);
                for (a2, e2) in &t.0 {
                    work.push((a2.clone(), e2.mul(&e)?));
                }
                continue;
            }
        }
        add_exponent(&mut map, a, &e);
    }
    if c.is_zero() {
        return Ok((c, Term::default()));
    }
    map.retain(|_, e| !e.is_zero());
    fold_primes(&mut c, &mut map);
    // Canonical split of each prime power between coefficient and atom: the
    // coefficient carries p^K, K = v_p(c) + floor(constant part of the atom
    // exponent), unless p^K is too large, in which case the atom carries all.
    let two = BigUint::from(2u32);
    let mut primes: Vec<BigUint> = map
        .keys()
        .filter_map(|a| match a {
            Atom::Prime(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    let v2 = valuation(c.numer(), &two) as i64 - valuation(c.denom(), &two) as i64;
    if v2.unsigned_abs() > FOLD_BITS && !primes.contains(&two) {
        primes.push(two);
    }
    for p in primes {
        let atom = Atom::Prime(p.clone());
        let v = valuation(c.numer(), &p) as i64 - valuation(c.denom(), &p) as i64;
        let e = map.remove(&atom).unwrap_or_default();
        let c0 = e.0.get(&Term::default()).cloned().unwrap_or_else(BigRational::zero);
        let fl = c0.floor();
        let k = fl.to_integer().to_i64().and_then(|f| f.checked_add(v));
        let e = match k {
            Some(k) if k.unsigned_abs().saturating_mul(p.bits()) <= FOLD_BITS => {
                c *= rpow(&p, k - v);
                e.sub(&Sum::constant(fl))
            }
            _ => {
                c *= rpow(&p, -v);
                e.add(&Sum::int(v))
            }
        };
        if !e.is_zero() {
            map.insert(atom, e);
        }
    }
    fold_primes(&mut c, &mut map);
    Ok((c, Term(map)))
}

/// Terms whose prime powers may sit on either side of the coefficient/atom
/// split; these need the like-term scan in [`Sum::push`].
fn needs_shape_scan(t: &Term, c: &BigRational) -> bool {
    c.numer().bits().max(c.denom().bits()) > FOLD_BITS / 2
        || t.0
            .iter()
            .any(|(a, e)| matches!(a, Atom::Prime(_)) && e.0.contains_key(&Term::default()))
}

/// The term with the constant part of every prime exponent removed.
fn shape_of(t: &Term) -> Term {
    let mut m = BTreeMap::new();
    for (a, e) in &t.0 {
        if let Atom::Prime(_) = a {
            let mut e = e.clone();
            e.0.remove(&Term::default());
            if !e.is_zero() {
                m.insert(a.clone(), e);
            }
        } else {
            m.insert(a.clone(), e.clone());
        }
    }
    Term(m)
}

fn prime_constant(t: &Term, p: &Atom) -> BigRational {
    t.0.get(p)
        .and_then(|e| e.0.get(&Term::default()).cloned())
        .unwrap_or_else(BigRational::zero)
}

/// Combines `c1·t1 + c2·t2` when both have the same shape and their prime
/// exponents differ by small integers; `None` otherwise.
fn merge_twins(shape: &Term, t1: &Term, c1: &BigRational, t2: &Term, c2: &BigRational) -> Option<(Term, BigRational)> {
    let mut primes: Vec<Atom> =
        t1.0.keys()
            .chain(t2.0.keys())
            .filter(|a| matches!(a, Atom::Prime(_)))
            .cloned()
            .collect();
    primes.sort();
    primes.dedup();
    let (mut k1, mut k2) = (c1.clone(), c2.clone());
    let mut atoms: Vec<(Atom, Sum)> = shape.0.iter().map(|(a, e)| (a.clone(), e.clone())).collect();
    for a in primes {
        let Atom::Prime(p) = &a else { unreachable!() };
        let (e1, e2) = (prime_constant(t1, &a), prime_constant(t2, &a));
        let d = &e1 - &e2;
        if !d.is_integer() {
            return None;
        }
        let d = d.to_integer().to_i64()?;
        if d.unsigned_abs().saturating_mul(p.bits()) > FOLD_BITS {
            return None;
        }
        let lo = if d >= 0 { e2 } else { e1 };
        if d >= 0 {
            k1 *= rpow(p, d);
        } else {
            k2 *= rpow(p, -d);
        }
        atoms.push((a, Sum::constant(lo)));
    }
    let (c, t) = normalize_term(k1 + k2, atoms).ok()?;
    Some((t, c))
}

impl Sum {
    pub fn zero() -> Sum {
        Sum::default()
    }

    pub fn constant(c: BigRational) -> Sum {
        let mut s = Sum::zero();
        s.push(Term::default(), c);
        s
    }

    pub fn int(i: i64) -> Sum {
        Sum::constant(BigRational::from_integer(i.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (t, c) = self.0.iter().next().unwrap();
                t.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn single(&self) -> Option<(&Term, &BigRational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    fn push(&mut self, t: Term, c: BigRational) {
        if c.is_zero() {
            return;
        }
        if !self.0.contains_key(&t) && needs_shape_scan(&t, &c) {
            let shape = shape_of(&t);
            let twin = self
                .0
                .iter()
                .find(|(u, _)| shape_of(u) == shape)
                .and_then(|(u, d)| merge_twins(&shape, &t, &c, u, d).map(|m| (u.clone(), m)));
            if let Some((u, (mt, mc))) = twin {
                self.0.remove(&u);
                self.push(mt, mc);
                return;
            }
        }
        match self.0.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Sum) -> Sum {
        let mut s = self.clone();
        for (t, c) in &o.0 {
            s.push(t.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Sum {
        Sum(self.0.iter().map(|(t, c)| (t.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &Sum) -> Sum {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Sum) -> Result<Sum> {
        if let Some(k) = o.as_constant() {
            if k.is_one() {
                return Ok(self.clone());
            }
        }
        if let Some(k) = self.as_constant() {
            if k.is_one() {
                return Ok(o.clone());
            }
        }
        let mut s = Sum::zero();
        for (t1, c1) in &self.0 {
            for (t2, c2) in &o.0 {
                let mut atoms: Vec<(Atom, Sum)> = t1.0.iter().map(|(a, e)| (a.clone(), e.clone())).collect();
                atoms.extend(t2.0.iter().map(|(a, e)| (a.clone(), e.clone())));
                let (c, t) = normalize_term(c1 * c2, atoms)?;
                s.push(t, c);
            }
        }
        Ok(s)
    }

    pub fn scale(&self, q: &BigRational) -> Result<Sum> {
        self.mul(&Sum::constant(q.clone()))
    }

    pub fn from_atoms(c: BigRational, atoms: Vec<(Atom, Sum)>) -> Result<Sum> {
        let (c, t) = normalize_term(c, atoms)?;
        let mut s = Sum::zero();
        s.push(t, c);
        Ok(s)
    }

    pub fn atom(a: Atom) -> Result<Sum> {
        Sum::from_atoms(BigRational::one(), vec![(a, Sum::int(1))])
    }

    fn term(t: &Term, c: &BigRational) -> Sum {
        let mut s = Sum::zero();
        s.push(t.clone(), c.clone());
        s
    }

    /// Splits into the positive part and the negated negative part.
    pub fn split(&self) -> (Sum, Sum) {
        let mut p = Sum::zero();
        let mut n = Sum::zero();
        for (t, c) in &self.0 {
            if c.is_positive() {
                p.push(t.clone(), c.clone());
            } else {
                n.push(t.clone(), -c);
            }
        }
        (p, n)
    }
}

fn recip_term(t: &Term, c: &BigRational) -> Result<Sum> {
    Sum::from_atoms(c.recip(), t.0.iter().map(|(a, e)| (a.clone(), e.neg())).collect())
}

fn schur_err(s: &Mag, k: u32) -> Option<Ival> {
    let k1 = (k.max(1) - 1) as f64;
    let slo = s.lo_f64();
    if slo >= 2f64.powi(500) {
        let t = k1 * 2f64.powi(-499);
        return Some(Ival::new(-t, t));
    }
    if slo > 1.0 {
        let r = (1.0 / slo).next_up();
        let lo = (k1 * log2_1p(-r, false)).next_down();
        let hi = (k1 * log2_1p(r, true)).next_up();
        return Some(Ival::new(lo, hi));
    }
    None
}

// A rigorous enclosure of e, not an approximation of it.
#[allow(clippy::approx_constant)]
fn e_mag() -> Mag {
    Mag::from_f64_interval(2.718281, 2.718282)
}

fn small_int(s: &Sum) -> Option<u64> {
    let q = s.as_constant()?;
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u64()
    } else {
        None
    }
}

/// Normalization, magnitude and log-form engine.
pub(crate) struct Calc {
    mag_cache: RefCell<HashMap<Atom, Mag>>,
    lf_cache: RefCell<HashMap<Sum, (Sum, Ival)>>,
}

impl Calc {
    pub fn new() -> Calc {
        Calc {
            mag_cache: RefCell::new(HashMap::new()),
            lf_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn mag(&self, s: &Sum) -> Mag {
        let mut m = Mag::ZERO;
        for (t, c) in &s.0 {
            m = m.add(self.mag_term(t, c));
        }
        m
    }

    fn mag_term(&self, t: &Term, c: &BigRational) -> Mag {
        let mut m = Mag::from_rational(c);
        for (a, e) in &t.0 {
            let base = self.mag_atom(a);
            let f = if base.lo.sign() >= 0 {
                base.pow(self.mag(e))
            } else {
                // Logarithm atoms can be negative; only small integer powers
                // keep a usable enclosure.
                match small_int(e) {
                    Some(k) if k <= SMALL_K => (0..k).fold(Mag::exact_f64(1.0), |acc, _| acc.mul(base)),
                    _ => Mag::new(Point::NEG_INF, Point::INF),
                }
            };
            m = m.mul(f);
        }
        m
    }

    fn mag_atom(&self, a: &Atom) -> Mag {
        if let Some(m) = self.mag_cache.borrow().get(a) {
            return *m;
        }
        let m = self.mag_atom_uncached(a);
        self.mag_cache.borrow_mut().insert(a.clone(), m);
        m
    }

    fn mag_atom_uncached(&self, a: &Atom) -> Mag {
        let one = Mag::exact_f64(1.0);
        match a {
            Atom::Prime(p) => Mag::from_bigint(&BigInt::from(p.clone())),
            Atom::E => e_mag(),
            Atom::LogP(p) => Mag::from_bigint(&BigInt::from(p.clone())).log2(),
            Atom::LogE => e_mag().log2(),
            Atom::Group(g) => self.mag(g).clamp_nonneg(),
            Atom::Binom(n, k) => {
                let mn = self.mag(n);
                let mut m = one;
                let mut fact = BigInt::one();
                for i in 0..*k {
                    m = m.mul(mn.sub(Mag::exact_f64(i as f64)).clamp_nonneg());
                    fact *= i + 1;
                }
                m.mul(Mag::from_rational(&BigRational::new(BigInt::one(), fact)))
            }
            Atom::BinomGen(n, _) => Mag::new(Point::ZERO, self.mag(n).exp2().hi),
            Atom::Cbm(m) => {
                let mm = self.mag(m);
                let off = Mag::from_f64_interval(-1.0, -HALF_LOG2_HALF_PI);
                mm.sub(mm.log2().mul(Mag::exact_f64(0.5))).add(off).exp2()
            }
            Atom::Schur(arg, k) => {
                let ma = self.mag(arg);
                let s = ma.mul(Mag::exact_f64(8.0)).sqrt();
                match schur_err(&s, *k) {
                    Some(err) => {
                        let k1 = Mag::exact_f64((*k - 1) as f64);
                        Mag::exact_f64(2.0 * *k as f64)
                            .log2()
                            .add(k1.mul(s.log2()))
                            .add(err.to_mag())
                            .exp2()
                    }
                    None => Mag::new(Point::ZERO, s.add(one).pow(Mag::exact_f64(*k as f64)).hi),
                }
            }
            Atom::Ceil(s) => self.mag(s).add(Mag::from_f64_interval(0.0, 1.0)),
            Atom::Max(items) => {
                let mut it = items.iter().map(|s| self.mag(s));
                let first = it.next().unwrap_or(Mag::ZERO);
                it.fold(first, Mag::max)
            }
            Atom::Log(s) => self.mag(s).log2(),
        }
    }

    /// The positive term of largest magnitude.
    fn dominant(&self, s: &Sum) -> Option<(Term, BigRational)> {
        let mut best: Option<(Term, BigRational, Mag)> = None;
        for (t, c) in &s.0 {
            if !c.is_positive() {
                continue;
            }
            let m = self.mag_term(t, c);
            let better = match &best {
                None => true,
                Some((_, _, bm)) => Point::cmp_value(m.hi, bm.hi) == Some(std::cmp::Ordering::Greater),
            };
            if better {
                best = Some((t.clone(), c.clone(), m));
            }
        }
        best.map(|(t, c, _)| (t, c))
    }

    pub fn pow(&self, b: &Sum, e: &Sum) -> Result<Sum> {
        if e.is_zero() {
            return Ok(Sum::int(1));
        }
        if b.is_zero() {
            return match e.as_constant() {
                Some(q) if !q.is_positive() => Err(Error::Domain("zero raised to a non-positive power".into())),
                _ => Ok(Sum::zero()),
            };
        }
        if let Some((t, c)) = b.single() {
            let (cc, mut atoms) = const_pow(c, e)?;
            for (a, x) in &t.0 {
                atoms.push((a.clone(), x.mul(e)?));
            }
            return Sum::from_atoms(cc, atoms);
        }
        if let Some(k) = small_int(e) {
            if (1..=4).contains(&k) && (b.0.len() as u64).pow(k as u32) <= 64 {
                let mut r = b.clone();
                for _ in 1..k {
                    r = r.mul(b)?;
                }
                return Ok(r);
            }
        }
        let (t, c) = self
            .dominant(b)
            .ok_or_else(|| Error::Domain("power of a non-positive sum".into()))?;
        let g = b.mul(&recip_term(&t, &c)?)?;
        let head = self.pow(&Sum::term(&t, &c), e)?;
        head.mul(&Sum::from_atoms(BigRational::one(), vec![(Atom::Group(g), e.clone())])?)
    }

    pub fn binom(&self, n: &Sum, k: &Sum) -> Result<Sum> {
        if let (Some(nc), Some(kc)) = (n.as_constant(), k.as_constant()) {
            if !nc.is_integer() || !kc.is_integer() {
                return Err(Error::Domain("binomial of non-integers".into()));
            }
            let (ni, ki) = (nc.to_integer(), kc.to_integer());
            if ki.is_negative() || ki > ni {
                return Ok(Sum::zero());
            }
            let kk = ki.clone().min(&ni - &ki);
            if let Some(kk) = kk.to_u64() {
                if kk.saturating_mul(ni.bits()) <= CONST_BITS {
                    let mut c = BigInt::one();
                    for i in 0..kk {
                        c = c * (&ni - BigInt::from(i)) / BigInt::from(i + 1);
                    }
                    return Ok(Sum::constant(BigRational::from_integer(c)));
                }
            }
        }
        let small = small_int(k)
            .filter(|&j| j <= SMALL_K)
            .or_else(|| small_int(&n.sub(k)).filter(|&j| j <= SMALL_K));
        match small {
            Some(0) => Ok(Sum::int(1)),
            Some(1) => Ok(n.clone()),
            Some(j) => Sum::atom(Atom::Binom(n.clone(), j as u32)),
            None => Sum::atom(Atom::BinomGen(n.clone(), k.clone())),
        }
    }

    pub fn cbm(&self, m: &Sum) -> Result<Sum> {
        if let Some(mc) = m.as_constant() {
            if !mc.is_integer() || mc.is_negative() {
                return Err(Error::Domain("central binomial of a non-natural number".into()));
            }
            if let Some(mi) = mc.to_integer().to_u64().filter(|&v| v <= CBM_FOLD) {
                let mut c = BigInt::one();
                for i in 0..mi / 2 {
                    c = c * BigInt::from(mi - i) / BigInt::from(i + 1);
                }
                return Ok(Sum::constant(BigRational::from_integer(c)));
            }
        }
        Sum::atom(Atom::Cbm(m.clone()))
    }

    fn schur_exact(&self, a: &Sum, k: u32) -> Option<(BigInt, BigInt, BigInt)> {
        let ac = a.as_constant()?;
        if !ac.is_integer() || ac.is_negative() {
            return None;
        }
        let m: BigInt = ac.to_integer() * 8;
        if (k as u64).saturating_mul(m.bits() / 2 + 2) > CONST_BITS {
            return None;
        }
        let (u, v) = surd_expand(&m, k);
        Some((u, v, m))
    }

    pub fn schur(&self, a: &Sum, k: u32) -> Result<Sum> {
        if let Some((u, v, m)) = self.schur_exact(a, k) {
            if v.is_zero() {
                return Ok(Sum::constant(BigRational::from_integer(u)));
            }
            let r = m.sqrt();
            if &r * &r == m {
                return Ok(Sum::constant(BigRational::from_integer(u + v * r)));
            }
        }
        Sum::atom(Atom::Schur(a.clone(), k))
    }

    pub fn ceil(&self, s: &Sum) -> Result<Sum> {
        if let Some(c) = s.as_constant() {
            return Ok(Sum::constant(c.ceil()));
        }
        if let Some((t, c)) = s.single() {
            if c.is_one() && t.0.len() == 1 {
                let (a, e) = t.0.iter().next().unwrap();
                if let (Atom::Schur(arg, k), Some(1)) = (a, small_int(e)) {
                    if let Some((u, v, m)) = self.schur_exact(arg, *k) {
                        let x = &v * &v * m;
                        let r = x.sqrt();
                        let r = if &r * &r == x { r } else { r + 1 };
                        return Ok(Sum::constant(BigRational::from_integer(u + r)));
                    }
                }
            }
        }
        Sum::atom(Atom::Ceil(s.clone()))
    }

    pub fn max(&self, items: Vec<Sum>) -> Result<Sum> {
        if items.is_empty() {
            return Err(Error::Domain("max of an empty list".into()));
        }
        if items.iter().all(|s| s.as_constant().is_some()) {
            return Ok(items
                .into_iter()
                .max_by(|a, b| a.as_constant().cmp(&b.as_constant()))
                .unwrap());
        }
        let mut items = items;
        items.sort();
        items.dedup();
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        Sum::atom(Atom::Max(items))
    }

    pub fn surd(&self, u: &BigInt, v: &BigInt, m: &BigInt) -> Result<Sum> {
        if u.is_negative() || v.is_negative() || m.is_negative() {
            return Err(Error::Domain("surd parts must be non-negative".into()));
        }
        let (c, atoms) = const_pow(
            &BigRational::from_integer(m.clone()),
            &Sum::constant(BigRational::new(1.into(), 2.into())),
        )?;
        let root = Sum::from_atoms(c, atoms)?;
        Ok(
            Sum::constant(BigRational::from_integer(u.clone()))
                .add(&root.scale(&BigRational::from_integer(v.clone()))?),
        )
    }

    /// Normal form of an expression; subtraction obligations are checked
    /// with `check_sub`.
    #[allow(clippy::wrong_self_convention)]
    pub fn from_expr(&self, e: &BoundExpr, check_sub: &dyn Fn(&Calc, &Sum, &Sum) -> Result<()>) -> Result<Sum> {
        use BoundExpr::*;
        let go = |x: &BoundExpr| self.from_expr(x, check_sub);
        match e {
            Const(c) => {
                if c.is_negative() {
                    return Err(Error::Domain("negative constant".into()));
                }
                Ok(Sum::constant(c.clone()))
            }
            E => Sum::atom(Atom::E),
            Add(a, b) => Ok(go(a)?.add(&go(b)?)),
            Sub(a, b) => {
                let (x, y) = (go(a)?, go(b)?);
                check_sub(self, &x, &y)?;
                Ok(x.sub(&y))
            }
            Mul(a, b) => go(a)?.mul(&go(b)?),
            Pow(a, b) => self.pow(&go(a)?, &go(b)?),
            Binom(n, k) => self.binom(&go(n)?, &go(k)?),
            CentralBinomMax(m) => self.cbm(&go(m)?),
            Surd { u, v, m } => self.surd(u, v, m),
            SchurJ { arg, exp } => self.schur(&go(arg)?, *exp),
            Max(items) => {
                let v = items.iter().map(go).collect::<Result<Vec<_>>>()?;
                self.max(v)
            }
            Ceil(a) => self.ceil(&go(a)?),
        }
    }

    fn logp(p: &BigUint) -> Result<Sum> {
        if *p == BigUint::from(2u32) {
            Ok(Sum::int(1))
        } else {
            Sum::atom(Atom::LogP(p.clone()))
        }
    }

    fn lf_const(&self, c: &BigRational) -> Result<Sum> {
        let mut s = Sum::zero();
        for (p, v) in factor(&c.numer().magnitude().clone()) {
            s = s.add(&Self::logp(&p)?.mul(&Sum::int(v as i64))?);
        }
        for (p, v) in factor(&c.denom().magnitude().clone()) {
            s = s.sub(&Self::logp(&p)?.mul(&Sum::int(v as i64))?);
        }
        Ok(s)
    }

    fn opaque(s: &Sum) -> Result<(Sum, Ival)> {
        Ok((Sum::atom(Atom::Log(s.clone()))?, Ival::ZERO))
    }

    /// `log2` of a positive sum as a sum plus an additive error interval.
    pub fn lf(&self, s: &Sum) -> Result<(Sum, Ival)> {
        if let Some(r) = self.lf_cache.borrow().get(s) {
            return Ok(r.clone());
        }
        let r = self.lf_uncached(s)?;
        self.lf_cache.borrow_mut().insert(s.clone(), r.clone());
        Ok(r)
    }

    fn lf_uncached(&self, s: &Sum) -> Result<(Sum, Ival)> {
        if s.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        if let Some((t, c)) = s.single() {
            return self.lf_term(t, c);
        }
        let Some((t, c)) = self.dominant(s) else {
            return Err(Error::Domain("logarithm of a non-positive sum".into()));
        };
        if self.mag_term(&t, &c).lo.sign() <= 0 {
            return Self::opaque(s);
        }
        let q = s.mul(&recip_term(&t, &c)?)?.sub(&Sum::int(1));
        let r = self.mag(&q);
        let (rl, rh) = (r.lo_f64(), r.hi_f64());
        if rl > -1.0 && rh.is_finite() {
            let err = Ival::new(log2_1p(rl, false), log2_1p(rh, true));
            let (l, e) = self.lf_term(&t, &c)?;
            return Ok((l, e.add(err)));
        }
        Self::opaque(s)
    }

    fn lf_term(&self, t: &Term, c: &BigRational) -> Result<(Sum, Ival)> {
        if !c.is_positive() {
            return Err(Error::Domain("logarithm of a negative term".into()));
        }
        if t.0.keys().any(|a| self.mag_atom(a).lo.sign() <= 0) {
            return Self::opaque(&Sum::term(t, c));
        }
        let mut sum = self.lf_const(c)?;
        let mut err = Ival::ZERO;
        for (a, e) in &t.0 {
            let (la, ea) = self.lf_atom(a)?;
            if let Some(q) = e.as_constant() {
                sum = sum.add(&la.scale(&q)?);
                err = err.add(ea.scale(&q));
            } else if ea.is_zero() {
                sum = sum.add(&la.mul(e)?);
            } else {
                let opaque = Sum::atom(Atom::Log(Sum::atom(a.clone())?))?;
                sum = sum.add(&opaque.mul(e)?);
            }
        }
        Ok((sum, err))
    }

    fn lf_atom(&self, a: &Atom) -> Result<(Sum, Ival)> {
        match a {
            Atom::Prime(p) => Ok((Self::logp(p)?, Ival::ZERO)),
            Atom::E => Ok((Sum::atom(Atom::LogE)?, Ival::ZERO)),
            Atom::Group(g) => self.lf(g),
            Atom::Binom(n, k) => {
                let mut sum = Sum::zero();
                let mut err = Ival::ZERO;
                let mut fact = BigInt::one();
                for i in 0..*k {
                    let (l, e) = self.lf(&n.sub(&Sum::int(i as i64)))?;
                    sum = sum.add(&l);
                    err = err.add(e);
                    fact *= i + 1;
                }
                let lfact = self.lf_const(&BigRational::from_integer(fact))?;
                Ok((sum.sub(&lfact), err))
            }
            Atom::Cbm(m) => {
                let (lm, em) = self.lf(m)?;
                let half = BigRational::new(1.into(), 2.into());
                let sum = m.sub(&lm.scale(&half)?);
                let err = em.scale(&-half).add(Ival::new(-1.0, -HALF_LOG2_HALF_PI));
                Ok((sum, err))
            }
            Atom::Schur(arg, k) => {
                let s = self.mag(arg).mul(Mag::exact_f64(8.0)).sqrt();
                let Some(serr) = schur_err(&s, *k) else {
                    return Self::opaque(&Sum::atom(a.clone())?);
                };
                let (la, ea) = self.lf(arg)?;
                let h = BigRational::new(BigInt::from(*k) - 1, 2.into());
                let sum = self
                    .lf_const(&BigRational::from_integer(BigInt::from(2 * *k)))?
                    .add(&la.add(&Sum::int(3)).scale(&h)?);
                Ok((sum, ea.scale(&h).add(serr)))
            }
            Atom::Ceil(s) => {
                let lo = self.mag(s).lo_f64();
                if lo <= 0.0 {
                    return Self::opaque(&Sum::atom(a.clone())?);
                }
                let hi = if lo >= 2f64.powi(500) {
                    2f64.powi(-499)
                } else {
                    log2_1p((1.0 / lo).next_up(), true)
                };
                let (l, e) = self.lf(s)?;
                Ok((l, e.add(Ival::new(0.0, hi))))
            }
            Atom::LogP(_) | Atom::LogE | Atom::Log(_) | Atom::Max(_) | Atom::BinomGen(..) => {
                Self::opaque(&Sum::atom(a.clone())?)
            }
        }
    }
}
