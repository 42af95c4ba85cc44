//! Triangular sets, quasi-components and triangular representations of
//! radical ideals.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{parse_polynomial_file, prem, same_order, Polynomial, VariableOrder};

/// True iff the classes strictly increase along `list` and no member is constant.
pub fn is_triangular(list: &[Polynomial]) -> bool {
    let mut last: Option<usize> = None;
    for g in list {
        match g.class() {
            None => return false,
            Some(c) => {
                if last.is_some_and(|l| c <= l) {
                    return false;
                }
                last = Some(c);
            }
        }
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriangularSet {
    order: Arc<VariableOrder>,
    members: Vec<Polynomial>,
}

impl TriangularSet {
    pub fn new(order: &Arc<VariableOrder>, members: Vec<Polynomial>) -> Result<Self> {
        for g in &members {
            if !same_order(order, g.order()) {
                return Err(Error::Structure("member uses a different variable order".into()));
            }
        }
        if !is_triangular(&members) {
            return Err(Error::Structure(
                "classes must strictly increase and members must be non-constant".into(),
            ));
        }
        Ok(TriangularSet {
            order: order.clone(),
            members,
        })
    }

    pub fn empty(order: &Arc<VariableOrder>) -> Self {
        TriangularSet {
            order: order.clone(),
            members: Vec::new(),
        }
    }

    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    pub fn members(&self) -> &[Polynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<Polynomial> {
        self.members
    }

    pub fn classes(&self) -> Vec<usize> {
        self.members.iter().map(|g| g.class().expect("non-constant")).collect()
    }

    pub fn initials(&self) -> Vec<Polynomial> {
        self.members
            .iter()
            .map(|g| g.initial().expect("non-constant"))
            .collect()
    }

    /// Member whose class is `v`, if any.
    pub fn member_of_class(&self, v: usize) -> Option<&Polynomial> {
        self.members.iter().find(|g| g.class() == Some(v))
    }

    pub fn prem(&self, f: &Polynomial) -> Result<Polynomial> {
        prem(f, &self.members)
    }

    /// `f ∈ rep(G)`, i.e. `prem(f, G) = 0`.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.prem(f)?.is_zero())
    }

    /// The prefix of members that only involve the first `r` variables.
    pub fn restrict(&self, r: usize) -> TriangularSet {
        let members = self
            .members
            .iter()
            .take_while(|g| g.involves_only_first(r))
            .cloned()
            .collect();
        TriangularSet {
            order: self.order.clone(),
            members,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.members.iter().map(Polynomial::total_degree).max().unwrap_or(0)
    }

    pub fn vanishes_at(&self, point: &[BigRational]) -> Result<bool> {
        for g in &self.members {
            if !g.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for TriangularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.members.iter().map(|g| g.to_string()))
            .finish()
    }
}

/// `rep(G)` membership, `prem(f, G) = 0`.
pub fn rep_contains(g: &TriangularSet, f: &Polynomial) -> Result<bool> {
    g.contains(f)
}

/// Searches `samples` for `f, g ∈ rep(G)` whose difference is not in `rep(G)`.
pub fn rep_is_ideal_witness(g: &TriangularSet, samples: &[Polynomial]) -> Result<Option<(Polynomial, Polynomial)>> {
    let mut inside = Vec::new();
    for s in samples {
        if g.contains(s)? {
            inside.push(s);
        }
    }
    for (i, a) in inside.iter().enumerate() {
        for b in &inside[i + 1..] {
            if !g.contains(&a.try_sub(b)?)? {
                return Ok(Some(((*a).clone(), (*b).clone())));
            }
        }
    }
    Ok(None)
}

pub fn restrict(g: &TriangularSet, r: usize) -> Result<TriangularSet> {
    if r == 0 || r > g.order.len() {
        return Err(Error::Precondition(format!(
            "restriction index {r} outside 1..={}",
            g.order.len()
        )));
    }
    Ok(g.restrict(r))
}

/// A triangular set together with polynomials required to be nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuasiComponent {
    pub set: TriangularSet,
    pub inequations: Vec<Polynomial>,
}

impl QuasiComponent {
    pub fn new(set: TriangularSet, inequations: Vec<Polynomial>) -> Result<Self> {
        for q in &inequations {
            if q.is_zero() {
                return Err(Error::Domain("inequation is the zero polynomial".into()));
            }
            if !same_order(set.order(), q.order()) {
                return Err(Error::Structure("inequation uses a different variable order".into()));
            }
        }
        Ok(QuasiComponent { set, inequations })
    }

    pub fn plain(set: TriangularSet) -> Self {
        QuasiComponent {
            set,
            inequations: Vec::new(),
        }
    }

    /// True when some inequation reduces to zero modulo the set, so the
    /// component carries no admissible points.
    pub fn is_degenerate(&self) -> Result<bool> {
        for q in &self.inequations {
            if self.set.contains(q)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Members vanish, inequations and initials do not.
    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        if !self.set.vanishes_at(point)? {
            return Ok(false);
        }
        for q in self.inequations.iter().chain(self.set.initials().iter()) {
            if q.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for QuasiComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.set)?;
        if !self.inequations.is_empty() {
            let ineqs: Vec<String> = self.inequations.iter().map(|q| q.to_string()).collect();
            write!(f, " != {ineqs:?}")?;
        }
        Ok(())
    }
}

/// Family of quasi-components representing a radical ideal as the
/// intersection of their `rep` sets.
///
/// An empty family stands for the zero ideal: only `0` is a member. The
/// unit ideal (inconsistent system) is a separate marker.
#[derive(Clone, PartialEq, Eq)]
pub struct TriangularRepresentation {
    order: Arc<VariableOrder>,
    kind: Kind,
}

#[derive(Clone, PartialEq, Eq)]
enum Kind {
    Components(Vec<QuasiComponent>),
    Unit,
}

impl TriangularRepresentation {
    pub fn new(order: &Arc<VariableOrder>, components: Vec<QuasiComponent>) -> Result<Self> {
        for c in &components {
            if !same_order(order, c.set.order()) {
                return Err(Error::Structure("component uses a different variable order".into()));
            }
        }
        Ok(TriangularRepresentation {
            order: order.clone(),
            kind: Kind::Components(components),
        })
    }

    pub fn from_sets(order: &Arc<VariableOrder>, sets: Vec<TriangularSet>) -> Result<Self> {
        Self::new(order, sets.into_iter().map(QuasiComponent::plain).collect())
    }

    pub fn zero_ideal(order: &Arc<VariableOrder>) -> Self {
        TriangularRepresentation {
            order: order.clone(),
            kind: Kind::Components(Vec::new()),
        }
    }

    pub fn unit(order: &Arc<VariableOrder>) -> Self {
        TriangularRepresentation {
            order: order.clone(),
            kind: Kind::Unit,
        }
    }

    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, Kind::Unit)
    }

    pub fn is_zero_ideal(&self) -> bool {
        matches!(&self.kind, Kind::Components(c) if c.is_empty())
    }

    /// Components; empty for both the unit marker and the zero ideal.
    pub fn components(&self) -> &[QuasiComponent] {
        match &self.kind {
            Kind::Components(c) => c,
            Kind::Unit => &[],
        }
    }

    pub fn sets(&self) -> Vec<&TriangularSet> {
        self.components().iter().map(|c| &c.set).collect()
    }

    /// Radical membership: `prem(f, G_i) = 0` for every component.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if !same_order(&self.order, f.order()) {
            return Err(Error::Structure("polynomial uses a different variable order".into()));
        }
        match &self.kind {
            Kind::Unit => Ok(true),
            Kind::Components(cs) if cs.is_empty() => Ok(f.is_zero()),
            Kind::Components(cs) => {
                for c in cs {
                    if !c.set.contains(f)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Some component admits the point (members vanish, inequations and
    /// initials nonzero).
    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        match &self.kind {
            Kind::Unit => Ok(false),
            Kind::Components(cs) if cs.is_empty() => Ok(true),
            Kind::Components(cs) => {
                for c in cs {
                    if c.contains_point(point)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Some component's members all vanish at the point.
    pub fn vanishes_at(&self, point: &[BigRational]) -> Result<bool> {
        match &self.kind {
            Kind::Unit => Ok(false),
            Kind::Components(cs) if cs.is_empty() => Ok(true),
            Kind::Components(cs) => {
                for c in cs {
                    if c.set.vanishes_at(point)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.components().iter().map(|c| c.set.max_degree()).max().unwrap_or(0)
    }

    pub fn restrict(&self, r: usize) -> Result<Self> {
        if r == 0 || r > self.order.len() {
            return Err(Error::Precondition(format!(
                "restriction index {r} outside 1..={}",
                self.order.len()
            )));
        }
        Ok(match &self.kind {
            Kind::Unit => self.clone(),
            Kind::Components(cs) => {
                let mut out: Vec<QuasiComponent> = Vec::new();
                for c in cs {
                    let set = c.set.restrict(r);
                    let inequations = c
                        .inequations
                        .iter()
                        .filter(|q| q.involves_only_first(r))
                        .cloned()
                        .collect();
                    let qc = QuasiComponent { set, inequations };
                    if !out.contains(&qc) {
                        out.push(qc);
                    }
                }
                TriangularRepresentation {
                    order: self.order.clone(),
                    kind: Kind::Components(out),
                }
            }
        })
    }

    /// Representation of `√(IJ) = √I ∩ √J` by concatenating components.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if !same_order(&self.order, &other.order) {
            return Err(Error::Structure("representations use different variable orders".into()));
        }
        Ok(match (&self.kind, &other.kind) {
            (Kind::Unit, _) => other.clone(),
            (_, Kind::Unit) => self.clone(),
            (Kind::Components(a), Kind::Components(b)) => {
                let mut all = a.clone();
                for c in b {
                    if !all.contains(c) {
                        all.push(c.clone());
                    }
                }
                TriangularRepresentation {
                    order: self.order.clone(),
                    kind: Kind::Components(all),
                }
            }
        })
    }

    /// Text form: `vars:` header, components separated by `---`,
    /// inequations prefixed `!=`. A component with no members is written as
    /// `0`; the unit marker as a single `1`.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.order.names().join(","));
        match &self.kind {
            Kind::Unit => out.push_str("1\n"),
            Kind::Components(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str("---\n");
                    }
                    if c.set.is_empty() {
                        out.push_str("0\n");
                    }
                    for g in c.set.members() {
                        out.push_str(&format!("{g}\n"));
                    }
                    for q in &c.inequations {
                        out.push_str(&format!("!= {q}\n"));
                    }
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let file = parse_polynomial_file(text, None)?;
        let order = file.order.clone();
        let sections: Vec<_> = file
            .sections
            .into_iter()
            .filter(|s| !(s.equations.is_empty() && s.inequations.is_empty()))
            .collect();
        let mut comps = Vec::new();
        for s in sections {
            if s.equations
                .iter()
                .any(|g| g.constant_value().is_some_and(|c| !c.is_zero()))
            {
                return Ok(Self::unit(&order));
            }
            let members: Vec<Polynomial> = s.equations.into_iter().filter(|g| !g.is_zero()).collect();
            let set = TriangularSet::new(&order, members)?;
            comps.push(QuasiComponent::new(set, s.inequations)?);
        }
        Self::new(&order, comps)
    }
}

impl fmt::Debug for TriangularRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Unit => write!(f, "Unit"),
            Kind::Components(cs) => f.debug_list().entries(cs).finish(),
        }
    }
}

impl fmt::Display for TriangularRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn representation_restrict(r_: &TriangularRepresentation, r: usize) -> Result<TriangularRepresentation> {
    r_.restrict(r)
}

pub fn representation_product(
    a: &TriangularRepresentation,
    b: &TriangularRepresentation,
) -> Result<TriangularRepresentation> {
    a.product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    fn xy() -> Arc<VariableOrder> {
        VariableOrder::new(&["x", "y"]).unwrap()
    }

    fn set(o: &Arc<VariableOrder>, ps: &[&str]) -> TriangularSet {
        TriangularSet::new(o, ps.iter().map(|s| parse_polynomial(s, o).unwrap()).collect()).unwrap()
    }

    #[test]
    fn triangularity() {
        let o = xy();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert!(is_triangular(&[p("x"), p("x*y")]));
        assert!(!is_triangular(&[p("x*y"), p("x")]));
        assert!(!is_triangular(&[p("x^2-1"), p("x^3")]));
        assert!(!is_triangular(&[p("2")]));
        assert!(is_triangular(&[]));
    }

    #[test]
    fn rep_is_not_an_ideal() {
        let o = xy();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let g = set(&o, &["x", "x*y"]);
        assert!(rep_contains(&g, &p("y")).unwrap());
        assert!(rep_contains(&g, &p("y+1")).unwrap());
        assert!(!rep_contains(&g, &p("-1")).unwrap());
        assert!(rep_contains(&TriangularSet::empty(&o), &p("0")).unwrap());
        assert_eq!(
            rep_is_ideal_witness(&g, &[p("y"), p("y+1")]).unwrap(),
            Some((p("y"), p("y+1")))
        );
        let h = set(&o, &["x-1"]);
        assert_eq!(rep_is_ideal_witness(&h, &[p("x-1"), p("2*x-2")]).unwrap(), None);
        let k = set(&o, &["y"]);
        assert_eq!(rep_is_ideal_witness(&k, &[p("y"), p("2*y")]).unwrap(), None);
    }

    #[test]
    fn restriction() {
        let o = xy();
        let g = set(&o, &["x^2-1", "x*y-1"]);
        assert_eq!(restrict(&g, 1).unwrap(), set(&o, &["x^2-1"]));
        assert_eq!(restrict(&g, 2).unwrap(), g);
        assert!(restrict(&set(&o, &["y^2-2"]), 1).unwrap().is_empty());
        assert!(matches!(restrict(&g, 0), Err(Error::Precondition(_))));

        let r = TriangularRepresentation::from_sets(&o, vec![set(&o, &["x^2-1", "y-x"])]).unwrap();
        let expect = TriangularRepresentation::from_sets(&o, vec![set(&o, &["x^2-1"])]).unwrap();
        assert_eq!(representation_restrict(&r, 1).unwrap(), expect);
        let r = TriangularRepresentation::from_sets(&o, vec![set(&o, &["x", "y"])]).unwrap();
        let expect = TriangularRepresentation::from_sets(&o, vec![set(&o, &["x"])]).unwrap();
        assert_eq!(representation_restrict(&r, 1).unwrap(), expect);
    }

    #[test]
    fn products() {
        let o = xy();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let ri = TriangularRepresentation::from_sets(&o, vec![set(&o, &["x"])]).unwrap();
        let rj = TriangularRepresentation::from_sets(&o, vec![set(&o, &["y"])]).unwrap();
        let prod = representation_product(&ri, &rj).unwrap();
        assert_eq!(prod.components().len(), 2);
        assert!(prod.contains(&p("x*y")).unwrap());
        assert!(!prod.contains(&p("x")).unwrap());
        assert_eq!(
            representation_product(&ri, &TriangularRepresentation::zero_ideal(&o)).unwrap(),
            ri
        );
        let other = VariableOrder::new(&["x", "y", "z"]).unwrap();
        let rk = TriangularRepresentation::zero_ideal(&other);
        assert!(matches!(ri.product(&rk), Err(Error::Structure(_))));
    }

    #[test]
    fn conventions_and_points() {
        let o = xy();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let z = TriangularRepresentation::zero_ideal(&o);
        assert!(z.contains(&p("0")).unwrap());
        assert!(!z.contains(&p("x")).unwrap());
        let u = TriangularRepresentation::unit(&o);
        assert!(u.contains(&p("1")).unwrap());
        assert!(!u.contains_point(&[rat(0), rat(0)]).unwrap());

        let c = QuasiComponent::new(set(&o, &["x*y-1"]), vec![p("y-2")]).unwrap();
        assert!(c.contains_point(&[rat(1), rat(1)]).unwrap());
        assert!(!c
            .contains_point(&[BigRational::new(1.into(), 2.into()), rat(2)])
            .unwrap());
        assert!(QuasiComponent::new(set(&o, &["x"]), vec![p("0")]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let o = xy();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let r = TriangularRepresentation::new(
            &o,
            vec![
                QuasiComponent::new(set(&o, &["x^2-1", "y-x"]), vec![p("x+2")]).unwrap(),
                QuasiComponent::plain(TriangularSet::empty(&o)),
            ],
        )
        .unwrap();
        let text = r.to_text();
        assert_eq!(TriangularRepresentation::from_text(&text).unwrap().to_text(), text);
        for r in [
            TriangularRepresentation::unit(&o),
            TriangularRepresentation::zero_ideal(&o),
        ] {
            let back = TriangularRepresentation::from_text(&r.to_text()).unwrap();
            assert_eq!(back.is_unit(), r.is_unit());
            assert_eq!(back.is_zero_ideal(), r.is_zero_ideal());
        }
    }
}
