//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every polynomial is built against a shared [`VariableOrder`]. Position `i`
//! in the order is the variable `x_{i+1}`, and `x_1 < x_2 < ... < x_n`. Terms
//! are kept in pure lexicographic order induced by the variable order, so the
//! last variable is the most significant one.

mod division;
mod parse;

pub use division::{prem, pseudo_divide, pseudo_divide_by, PseudoDivisionResult};
pub use parse::{parse_polynomial, parse_polynomial_file, PolynomialFile, Section};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ordered list of variable names, lowest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableOrder {
    names: Vec<String>,
}

impl VariableOrder {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Structure("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Structure(format!("duplicate variable name `{n}`")));
            }
        }
        Ok(Arc::new(Self { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector; ordered lexicographically with the highest variable first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `Q[x_1, ..., x_n]`.
#[derive(Clone)]
pub struct Polynomial {
    order: Arc<VariableOrder>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_order(&self.order, &other.order) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

pub(crate) fn same_order(a: &Arc<VariableOrder>, b: &Arc<VariableOrder>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(order: &Arc<VariableOrder>) -> Self {
        Polynomial {
            order: order.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: &Arc<VariableOrder>) -> Self {
        Self::constant(order, BigRational::one())
    }

    pub fn constant(order: &Arc<VariableOrder>, c: BigRational) -> Self {
        let mut p = Self::zero(order);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(order.len()), c);
        }
        p
    }

    pub fn from_int(order: &Arc<VariableOrder>, c: i64) -> Self {
        Self::constant(order, rat(c))
    }

    /// The variable `x_{i+1}`.
    pub fn var(order: &Arc<VariableOrder>, i: usize) -> Self {
        Self::var_pow(order, i, 1)
    }

    pub fn var_pow(order: &Arc<VariableOrder>, i: usize, k: u32) -> Self {
        let mut e = vec![0; order.len()];
        e[i] = k;
        Self::monomial(order, Monomial(e), BigRational::one())
    }

    pub fn monomial(order: &Arc<VariableOrder>, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.0.len(), order.len(), "monomial length does not match variable order");
        let mut p = Self::zero(order);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(order: &Arc<VariableOrder>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Self::zero(order);
        for (e, c) in terms {
            p.add_term(Monomial::from_exponents(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.order.len());
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.order.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Index of the highest variable occurring with positive exponent.
    pub fn class(&self) -> Option<usize> {
        // The lex-largest monomial carries the highest variable.
        let (m, _) = self.terms.iter().next_back()?;
        m.0.iter().rposition(|&e| e > 0)
    }

    pub fn class_name(&self) -> Option<&str> {
        self.class().map(|i| self.order.name(i))
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree in the class variable; zero for constants.
    pub fn main_degree(&self) -> u32 {
        self.class().map(|c| self.degree_in(c)).unwrap_or(0)
    }

    /// Whether only variables with index `< r` occur.
    pub fn involves_only_first(&self, r: usize) -> bool {
        self.class().map(|c| c < r).unwrap_or(true)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of `x_v^d`, as a polynomial free of `x_v`.
    pub fn coeff_in(&self, v: usize, d: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.order);
        for (m, c) in &self.terms {
            if m.0[v] == d {
                let mut e = m.0.clone();
                e[v] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Coefficients in `x_v`, indexed by degree.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Polynomial::zero(&self.order); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut e = m.0.clone();
            e[v] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Leading coefficient in variable `v`.
    pub fn lc_in(&self, v: usize) -> Polynomial {
        self.coeff_in(v, self.degree_in(v))
    }

    /// The initial: leading coefficient with respect to the class variable.
    pub fn initial(&self) -> Result<Polynomial> {
        match self.class() {
            Some(c) => Ok(self.lc_in(c)),
            None => Err(Error::Domain("initial of a constant polynomial".into())),
        }
    }

    /// Drops the terms of highest degree in `v`.
    pub fn reductum_in(&self, v: usize) -> Polynomial {
        let d = self.degree_in(v);
        let mut out = self.clone();
        out.terms.retain(|m, _| m.0[v] != d);
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        Polynomial {
            order: self.order.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `x_v^k`.
    pub fn shift(&self, v: usize, k: u32) -> Polynomial {
        if k == 0 {
            return self.clone();
        }
        Polynomial {
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[v] += k;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.order);
        for (m, c) in &self.terms {
            let k = m.0[v];
            if k > 0 {
                let mut e = m.0.clone();
                e[v] -= 1;
                out.add_term(Monomial(e), c * rat(k as i64));
            }
        }
        out
    }

    /// Evaluates at a full point.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars() {
            return Err(Error::Structure(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.nvars()
            )));
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes a rational value for one variable; the order is kept.
    pub fn substitute(&self, v: usize, value: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(&self.order);
        for (m, c) in &self.terms {
            let k = m.0[v];
            let mut e = m.0.clone();
            e[v] = 0;
            out.add_term(Monomial(e), c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Substitutes polynomials (over `target`) for every variable.
    pub fn compose(&self, images: &[Polynomial], target: &Arc<VariableOrder>) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::Structure("composition needs one image per variable".into()));
        }
        if images.iter().any(|p| !same_order(p.order(), target)) {
            return Err(Error::Structure("composition images use a different order".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Moves the polynomial into `target`, sending variable `i` to `mapping[i]`.
    pub fn reindex(&self, target: &Arc<VariableOrder>, mapping: &[usize]) -> Result<Polynomial> {
        if mapping.len() != self.nvars() {
            return Err(Error::Structure("reindex mapping has wrong length".into()));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = *mapping
                        .get(i)
                        .filter(|&&j| j < target.len())
                        .ok_or_else(|| Error::Structure(format!("variable {} has no image", self.order.name(i))))?;
                    e[j] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Moves the polynomial into another order by matching variable names.
    pub fn rename_into(&self, target: &Arc<VariableOrder>) -> Result<Polynomial> {
        let mapping: Vec<usize> = self
            .order
            .names()
            .iter()
            .map(|n| target.index_of(n).unwrap_or(usize::MAX))
            .collect();
        self.reindex(target, &mapping)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(same_order(&self.order, &divisor.order));
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.order);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let t = Polynomial::monomial(&self.order, m.div(&lm), c / &lc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Scales to make the leading coefficient one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Content-free integer normalization: integer coefficients with gcd one and
    /// positive leading coefficient.
    pub fn primitive_integer(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den / c.denom());
            g = g.gcd(&v);
        }
        let mut factor = BigRational::new(den, g);
        if self.leading_term().unwrap().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_order(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_order(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_order(other)?;
        Ok(self * other)
    }

    pub fn check_order(&self, other: &Polynomial) -> Result<()> {
        if same_order(&self.order, &other.order) {
            Ok(())
        } else {
            Err(Error::Structure("polynomials use different variable orders".into()))
        }
    }

    /// Ranking key: class, main degree, total degree, then the term list.
    pub(crate) fn rank_cmp(&self, other: &Polynomial) -> Ordering {
        let ca = self.class().map(|c| c as i64).unwrap_or(-1);
        let cb = other.class().map(|c| c as i64).unwrap_or(-1);
        ca.cmp(&cb)
            .then_with(|| self.main_degree().cmp(&other.main_degree()))
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.term_cmp(other))
    }

    /// Deterministic comparison of term lists, highest terms first.
    pub(crate) fn term_cmp(&self, other: &Polynomial) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_order(&self.order, &rhs.order), "variable order mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_order(&self.order, &rhs.order), "variable order mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_order(&self.order, &rhs.order), "variable order mismatch");
        let mut out = Polynomial::zero(&self.order);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.order.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.order.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<VariableOrder> {
        VariableOrder::new(&["x", "y"]).unwrap()
    }

    fn p(order: &Arc<VariableOrder>, s: &str) -> Polynomial {
        parse_polynomial(s, order).unwrap()
    }

    #[test]
    fn class_of_examples() {
        let o = xy();
        assert_eq!(p(&o, "7").class(), None);
        assert_eq!(p(&o, "x*y").class_name(), Some("y"));
        assert_eq!(p(&o, "x^2 - 1").class_name(), Some("x"));
    }

    #[test]
    fn initial_examples() {
        let o = xy();
        assert_eq!(p(&o, "x*y").initial().unwrap(), p(&o, "x"));
        assert_eq!(p(&o, "x^2-1").initial().unwrap(), p(&o, "1"));
        assert_eq!(p(&o, "(x+1)*y^2 + y").initial().unwrap(), p(&o, "x+1"));
        assert!(matches!(p(&o, "3").initial(), Err(Error::Domain(_))));
    }

    #[test]
    fn ring_plumbing() {
        let o = xy();
        assert_eq!(&p(&o, "x+y") + &p(&o, "x-y"), p(&o, "2*x"));
        let pt = [rat(0), rat(-2)];
        assert_eq!(p(&o, "x*y").evaluate(&pt).unwrap(), rat(0));
        assert_eq!(p(&o, "y").evaluate(&pt).unwrap(), rat(-2));
    }

    #[test]
    fn order_mismatch_is_structural() {
        let a = p(&xy(), "x");
        let other = VariableOrder::new(&["u", "v"]).unwrap();
        let b = p(&other, "u");
        assert!(matches!(a.try_add(&b), Err(Error::Structure(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(VariableOrder::new(&["x", "x"]).is_err());
        assert!(VariableOrder::new(&["x", " "]).is_err());
    }

    #[test]
    fn exact_division() {
        let o = xy();
        let f = p(&o, "x^2*y^2 - 1");
        let g = p(&o, "x*y - 1");
        assert_eq!(f.div_exact(&g).unwrap(), p(&o, "x*y + 1"));
        assert!(p(&o, "x*y + 2").div_exact(&g).is_none());
    }

    #[test]
    fn display_round_trips() {
        let o = xy();
        let f = p(&o, "2*x^2*y - 1/3 + y^3");
        assert_eq!(p(&o, &f.to_string()), f);
        assert_eq!(f.to_string(), "y^3 + 2*x^2*y - 1/3");
    }
}
