use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

use super::{matrix_order, SubgroupPresentation};

/// Named groups with fixed rule tables for components, characters,
/// containment and normality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupCatalogEntry {
    GL(u32),
    SL(u32),
    DiagonalTorus(u32),
    Borel(u32),
    UnipotentUpper(u32),
    /// `C*` inside `GL(1)`.
    Scalars,
    /// Roots of unity of order `m` inside `GL(1)`.
    FiniteCyclic(u32),
    /// The identity subgroup of `GL(n)`.
    Trivial(u32),
}

use GroupCatalogEntry::*;

impl GroupCatalogEntry {
    pub fn ambient(&self) -> u32 {
        match *self {
            GL(n) | SL(n) | DiagonalTorus(n) | Borel(n) | UnipotentUpper(n) | Trivial(n) => n,
            Scalars | FiniteCyclic(_) => 1,
        }
    }

    /// Canonical name; in `GL(1)` several entries coincide.
    fn canonical(self) -> GroupCatalogEntry {
        match self {
            GL(1) | DiagonalTorus(1) | Borel(1) => Scalars,
            SL(1) | UnipotentUpper(1) | FiniteCyclic(1) => Trivial(1),
            g => g,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.canonical(), FiniteCyclic(_) | Trivial(_))
    }

    pub fn is_connected(&self) -> bool {
        !matches!(self.canonical(), FiniteCyclic(_))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GL(0) | SL(0) | DiagonalTorus(0) | Borel(0) | UnipotentUpper(0) | Trivial(0) => {
                Err(Error::Domain(format!("{self} has size zero")))
            }
            FiniteCyclic(0) => Err(Error::Domain("cyclic group of order zero".into())),
            _ => Ok(()),
        }
    }

    /// Defining equations in the entries `x11, …`.
    pub fn presentation(&self) -> Result<SubgroupPresentation> {
        self.validate()?;
        let n = self.ambient() as usize;
        let order = matrix_order("x", n)?;
        let x = |i: usize, j: usize| Polynomial::var(&order, i * n + j);
        let one = Polynomial::one(&order);
        let mut eqs = Vec::new();
        match *self {
            GL(_) | Scalars => {}
            SL(_) => return SubgroupPresentation::special_linear(n),
            FiniteCyclic(m) => eqs.push(&x(0, 0).pow(m) - &one),
            DiagonalTorus(_) | Borel(_) | UnipotentUpper(_) | Trivial(_) => {
                let diag_one = matches!(self, UnipotentUpper(_) | Trivial(_));
                for i in 0..n {
                    for j in 0..n {
                        let below = i > j;
                        let off = i != j;
                        let zero = match self {
                            DiagonalTorus(_) | Trivial(_) => off,
                            _ => below,
                        };
                        if zero {
                            eqs.push(x(i, j));
                        } else if i == j && diag_one {
                            eqs.push(&x(i, i) - &one);
                        }
                    }
                }
            }
        }
        SubgroupPresentation::new(n, eqs)
    }
}

impl fmt::Display for GroupCatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GL(n) => write!(f, "GL({n})"),
            SL(n) => write!(f, "SL({n})"),
            DiagonalTorus(n) => write!(f, "DiagonalTorus({n})"),
            Borel(n) => write!(f, "Borel({n})"),
            UnipotentUpper(n) => write!(f, "UnipotentUpper({n})"),
            Scalars => write!(f, "Scalars"),
            FiniteCyclic(m) => write!(f, "FiniteCyclic({m})"),
            Trivial(1) => write!(f, "Trivial"),
            Trivial(n) => write!(f, "Trivial({n})"),
        }
    }
}

impl FromStr for GroupCatalogEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown catalog group `{s}`"),
        };
        match s.as_str() {
            "Scalars" | "C*" => return Ok(Scalars),
            "Trivial" => return Ok(Trivial(1)),
            _ => {}
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let arg: u32 = rest.strip_suffix(')').and_then(|a| a.parse().ok()).ok_or_else(bad)?;
        let g = match name {
            "GL" => GL(arg),
            "SL" => SL(arg),
            "DiagonalTorus" | "T" => DiagonalTorus(arg),
            "Borel" | "B" => Borel(arg),
            "UnipotentUpper" | "U" => UnipotentUpper(arg),
            "FiniteCyclic" | "mu" => FiniteCyclic(arg),
            "Trivial" => Trivial(arg),
            _ => return Err(bad()),
        };
        g.validate()?;
        Ok(g)
    }
}

/// `H⁰`: connected entries are their own identity component.
pub fn identity_component(g: GroupCatalogEntry) -> GroupCatalogEntry {
    match g.canonical() {
        FiniteCyclic(_) => Trivial(1),
        _ => g,
    }
}

/// `H^t`, the intersection of the kernels of all characters of a connected
/// group.
pub fn character_kernel_intersection(g: GroupCatalogEntry) -> Result<GroupCatalogEntry> {
    Ok(match g.canonical() {
        FiniteCyclic(m) => {
            return Err(Error::Precondition(format!(
                "FiniteCyclic({m}) is not connected; take the identity component first"
            )))
        }
        GL(n) | SL(n) => SL(n),
        DiagonalTorus(n) => Trivial(n),
        Scalars => Trivial(1),
        UnipotentUpper(n) | Borel(n) => UnipotentUpper(n),
        Trivial(n) => Trivial(n),
    }
    .canonical())
}

fn same_ambient(a: GroupCatalogEntry, b: GroupCatalogEntry) -> Result<()> {
    if a.ambient() != b.ambient() {
        return Err(Error::UnknownPair(format!("{a} and {b} live in different GL(n)")));
    }
    Ok(())
}

/// Containment `a ⊆ b` from the fact table.
pub fn is_subgroup(a: GroupCatalogEntry, b: GroupCatalogEntry) -> Result<bool> {
    same_ambient(a, b)?;
    let (a, b) = (a.canonical(), b.canonical());
    if a == b || matches!(a, Trivial(_)) {
        return Ok(true);
    }
    Ok(match (a, b) {
        (FiniteCyclic(m), FiniteCyclic(k)) => k % m == 0,
        (FiniteCyclic(_), Scalars) => true,
        (_, GL(_)) => true,
        (UnipotentUpper(_), SL(_) | Borel(_)) => true,
        (DiagonalTorus(_), Borel(_)) => true,
        _ => false,
    })
}

/// Normality `a ⊴ b` for `a ⊆ b` from the fact table.
pub fn is_normal(a: GroupCatalogEntry, b: GroupCatalogEntry) -> Result<bool> {
    if !is_subgroup(a, b)? {
        return Ok(false);
    }
    let (a, b) = (a.canonical(), b.canonical());
    if a == b || matches!(a, Trivial(_)) || b.ambient() == 1 {
        return Ok(true);
    }
    Ok(matches!((a, b), (SL(_), GL(_)) | (UnipotentUpper(_), Borel(_))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The Galois group lies in the candidate.
    Contains,
    /// `(H⁰)^t ⊆ G⁰`.
    KernelInComponent,
    /// `(H⁰)^t ⊴ G⁰`.
    Normal,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Contains => "(i)",
            Clause::KernelInComponent => "(ii)",
            Clause::Normal => "(iii)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtoVerdict {
    pub failed: Option<Clause>,
    pub trace: Vec<String>,
}

impl ProtoVerdict {
    pub fn passes(&self) -> bool {
        self.failed.is_none()
    }
}

/// Checks `(H⁰)^t ⊴ G⁰ ⊆ G ⊆ H` for candidate `H` and Galois group `G`.
pub fn proto_check(candidate: GroupCatalogEntry, galois: GroupCatalogEntry) -> Result<ProtoVerdict> {
    candidate.validate()?;
    galois.validate()?;
    let mut trace = Vec::new();
    let verdict = |trace: &mut Vec<String>, clause: Clause, ok: bool, what: String| -> Option<Clause> {
        trace.push(format!("{clause} {what}: {}", if ok { "yes" } else { "no" }));
        (!ok).then_some(clause)
    };
    let c1 = is_subgroup(galois, candidate)?;
    if let Some(c) = verdict(&mut trace, Clause::Contains, c1, format!("{galois} ⊆ {candidate}")) {
        return Ok(ProtoVerdict { failed: Some(c), trace });
    }
    let h0 = identity_component(candidate);
    let t = character_kernel_intersection(h0)?;
    let g0 = identity_component(galois);
    trace.push(format!("H0 = {h0}, (H0)^t = {t}, G0 = {g0}"));
    let c2 = is_subgroup(t, g0)?;
    if let Some(c) = verdict(&mut trace, Clause::KernelInComponent, c2, format!("{t} ⊆ {g0}")) {
        return Ok(ProtoVerdict { failed: Some(c), trace });
    }
    let c3 = is_normal(t, g0)?;
    let failed = verdict(&mut trace, Clause::Normal, c3, format!("{t} ⊴ {g0}"));
    Ok(ProtoVerdict { failed, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(h: &str, g: &str) -> Option<Clause> {
        proto_check(h.parse().unwrap(), g.parse().unwrap()).unwrap().failed
    }

    #[test]
    fn worked_examples() {
        assert_eq!(check("Scalars", "FiniteCyclic(3)"), None);
        assert_eq!(check("GL(2)", "SL(2)"), None);
        assert_eq!(check("SL(2)", "SL(2)"), None);
        assert_eq!(check("GL(2)", "UnipotentUpper(2)"), Some(Clause::KernelInComponent));
        assert_eq!(check("SL(2)", "UnipotentUpper(2)"), Some(Clause::KernelInComponent));
        assert_eq!(check("GL(2)", "Borel(2)"), Some(Clause::KernelInComponent));
        assert_eq!(check("SL(2)", "Borel(2)"), Some(Clause::Contains));
    }

    #[test]
    fn rule_tables() {
        assert_eq!(identity_component(FiniteCyclic(3)), Trivial(1));
        assert_eq!(identity_component(SL(2)), SL(2));
        assert_eq!(character_kernel_intersection(GL(2)).unwrap(), SL(2));
        assert_eq!(character_kernel_intersection(Scalars).unwrap(), Trivial(1));
        assert!(character_kernel_intersection(FiniteCyclic(3)).is_err());
        assert!(matches!(proto_check(GL(2), Scalars), Err(Error::UnknownPair(_))));
    }

    #[test]
    fn presentations_contain_identity() {
        for g in [
            GL(2),
            SL(3),
            DiagonalTorus(2),
            Borel(3),
            UnipotentUpper(2),
            Scalars,
            FiniteCyclic(3),
            Trivial(2),
        ] {
            let p = g.presentation().unwrap();
            assert_eq!(p.n(), g.ambient() as usize);
        }
        assert_eq!(Borel(2).presentation().unwrap().equations().len(), 1);
        assert_eq!(UnipotentUpper(2).presentation().unwrap().equations().len(), 3);
    }
}
