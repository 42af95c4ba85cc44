//! Decomposition of a polynomial system into triangular sets whose `rep`
//! sets intersect to the radical of the generated ideal.
//!
//! The characteristic set of every branch is normalized into a regular,
//! squarefree chain: initials and inequations are tested for invertibility
//! modulo the lower part of the chain, and every member is replaced by its
//! squarefree part over the tower. When a test meets a zero divisor the
//! branch is split along the factorization that the tower gcd exposes.

mod audit;
mod oracle;

pub use audit::{degree_audit, degree_bound, DegreeAudit};
pub use oracle::{oracle_membership, oracle_zeros};

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{prem, pseudo_divide_by, Polynomial, VariableOrder};
use crate::triangular::{QuasiComponent, TriangularRepresentation, TriangularSet};

/// Step and degree caps for a decomposition run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: u64,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 100_000,
            max_degree: 512,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionTask {
    pub order: Arc<VariableOrder>,
    pub generators: Vec<Polynomial>,
    pub inequations: Vec<Polynomial>,
    pub limits: Limits,
}

impl DecompositionTask {
    pub fn new(order: &Arc<VariableOrder>, generators: Vec<Polynomial>) -> Result<Self> {
        Self::with_inequations(order, generators, Vec::new())
    }

    pub fn with_inequations(
        order: &Arc<VariableOrder>,
        generators: Vec<Polynomial>,
        inequations: Vec<Polynomial>,
    ) -> Result<Self> {
        for p in generators.iter().chain(&inequations) {
            if !crate::poly::same_order(order, p.order()) {
                return Err(Error::Structure("polynomial uses a different variable order".into()));
            }
            if p.is_zero() {
                return Err(Error::Domain("zero polynomial in task".into()));
            }
        }
        Ok(DecompositionTask {
            order: order.clone(),
            generators,
            inequations,
            limits: Limits::default(),
        })
    }

    pub fn limits(mut self, limits: Limits) -> Result<Self> {
        if limits.max_steps == 0 || limits.max_degree == 0 {
            return Err(Error::Domain("budget must be positive".into()));
        }
        self.limits = limits;
        Ok(self)
    }
}

struct Ctx {
    steps: u64,
    limits: Limits,
}

impl Ctx {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::Budget(format!(
                "more than {} reduction steps",
                self.limits.max_steps
            )));
        }
        Ok(())
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if p.total_degree() > self.limits.max_degree {
            return Err(Error::Budget(format!(
                "intermediate degree {} exceeds {}",
                p.total_degree(),
                self.limits.max_degree
            )));
        }
        Ok(())
    }

    /// Pseudo-remainder modulo `chain`, made primitive.
    fn reduce(&mut self, p: &Polynomial, chain: &[Polynomial]) -> Result<Polynomial> {
        self.tick()?;
        let r = prem(p, chain)?.primitive_integer();
        self.check(&r)?;
        Ok(r)
    }
}

enum Reg {
    Zero,
    Invertible,
    Split(Polynomial, Polynomial),
}

enum Gcd {
    One,
    Poly(Polynomial),
    Split(Polynomial, Polynomial),
}

fn chain_index(chain: &[Polynomial], v: usize) -> Option<usize> {
    chain.iter().position(|g| g.class() == Some(v))
}

/// Decides whether `p` is zero, invertible or a zero divisor modulo the
/// saturation of the regular chain `chain`.
fn regularize(ctx: &mut Ctx, chain: &[Polynomial], p: &Polynomial) -> Result<Reg> {
    let p = ctx.reduce(p, chain)?;
    if p.is_zero() {
        return Ok(Reg::Zero);
    }
    let v = match p.class() {
        None => return Ok(Reg::Invertible),
        Some(v) => v,
    };
    match chain_index(chain, v) {
        Some(j) => match tower_gcd(ctx, &chain[..j], &chain[j], &p, v)? {
            Gcd::One => Ok(Reg::Invertible),
            Gcd::Split(g, h) => Ok(Reg::Split(g, h)),
            Gcd::Poly(g) => {
                let h = cofactor(ctx, &chain[..j], &chain[j], &g, v)?;
                Ok(Reg::Split(g, h))
            }
        },
        None => match regularize(ctx, chain, &p.lc_in(v))? {
            Reg::Zero => regularize(ctx, chain, &p.reductum_in(v)),
            other => Ok(other),
        },
    }
}

/// Gcd of `a` and `b` in the class variable `v` over the regular chain
/// `lower`; `a` must have an invertible initial.
fn tower_gcd(ctx: &mut Ctx, lower: &[Polynomial], a: &Polynomial, b: &Polynomial, v: usize) -> Result<Gcd> {
    let mut a = a.clone();
    let mut b = ctx.reduce(b, lower)?;
    loop {
        if b.degree_in(v) == 0 {
            return match regularize(ctx, lower, &b)? {
                Reg::Zero => Ok(Gcd::Poly(a)),
                Reg::Invertible => Ok(Gcd::One),
                Reg::Split(g, h) => Ok(Gcd::Split(g, h)),
            };
        }
        match regularize(ctx, lower, &b.lc_in(v))? {
            Reg::Zero => b = ctx.reduce(&b.reductum_in(v), lower)?,
            Reg::Split(g, h) => return Ok(Gcd::Split(g, h)),
            Reg::Invertible => {
                ctx.tick()?;
                let (_, r, _) = pseudo_divide_by(&a, &b, v);
                let r = ctx.reduce(&r, lower)?;
                a = b;
                b = r;
            }
        }
    }
}

/// Pseudo-quotient of `c` by its tower factor `g`, reduced modulo `lower`.
fn cofactor(ctx: &mut Ctx, lower: &[Polynomial], c: &Polynomial, g: &Polynomial, v: usize) -> Result<Polynomial> {
    ctx.tick()?;
    let (q, r, _) = pseudo_divide_by(c, g, v);
    if !ctx.reduce(&r, lower)?.is_zero() {
        return Err(Error::Precondition("tower gcd does not divide its argument".into()));
    }
    ctx.reduce(&q, lower)
}

enum Normalized {
    Chain(Vec<Polynomial>),
    Empty,
    Split(Polynomial, Polynomial),
}

/// Turns a characteristic set into a regular squarefree chain.
fn normalize(ctx: &mut Ctx, chain: &[Polynomial]) -> Result<Normalized> {
    let mut out: Vec<Polynomial> = Vec::with_capacity(chain.len());
    for c in chain {
        let v = c.class().expect("non-constant member");
        let mut c = ctx.reduce(c, &out)?;
        loop {
            if c.class() != Some(v) {
                return Ok(Normalized::Empty);
            }
            match regularize(ctx, &out, &c.lc_in(v))? {
                Reg::Zero => return Ok(Normalized::Empty),
                Reg::Split(g, h) => return Ok(Normalized::Split(g, h)),
                Reg::Invertible => {}
            }
            let d = c.derivative(v);
            match tower_gcd(ctx, &out, &c, &d, v)? {
                Gcd::One => break,
                Gcd::Split(g, h) => return Ok(Normalized::Split(g, h)),
                Gcd::Poly(g) => c = cofactor(ctx, &out, &c, &g, v)?,
            }
        }
        out.push(c);
    }
    Ok(Normalized::Chain(out))
}

fn rank_sort(polys: &mut Vec<Polynomial>) {
    polys.sort_by(|a, b| a.rank_cmp(b));
    polys.dedup();
}

/// Ritt basic set of `polys`, which must be sorted by rank and free of
/// constants.
fn basic_set(sorted: &[Polynomial]) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in sorted {
        let c = p.class().expect("no constants");
        let fits = match basis.last() {
            None => true,
            Some(last) => {
                c > last.class().expect("non-constant")
                    && basis.iter().all(|b| {
                        let v = b.class().expect("non-constant");
                        p.degree_in(v) < b.degree_in(v)
                    })
            }
        };
        if fits {
            basis.push(p.clone());
        }
    }
    basis
}

/// Runs the Wu loop. Returns `None` when the system has no zeros, else the
/// characteristic set and the enlarged generator list.
fn wu_loop(ctx: &mut Ctx, polys: Vec<Polynomial>) -> Result<Option<(Vec<Polynomial>, Vec<Polynomial>)>> {
    let mut polys: Vec<Polynomial> = polys
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.primitive_integer())
        .collect();
    loop {
        if polys.iter().any(Polynomial::is_constant) {
            return Ok(None);
        }
        rank_sort(&mut polys);
        let basis = basic_set(&polys);
        let mut added = Vec::new();
        for p in &polys {
            if basis.contains(p) {
                continue;
            }
            let r = ctx.reduce(p, &basis)?;
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                return Ok(None);
            }
            added.push(r);
        }
        if added.is_empty() {
            return Ok(Some((basis, polys)));
        }
        polys.extend(added);
    }
}

/// Characteristic set of `basis`; `None` signals an inconsistent system.
pub fn characteristic_set(basis: &[Polynomial]) -> Result<Option<TriangularSet>> {
    let first = basis.first().ok_or_else(|| Error::Precondition("empty basis".into()))?;
    for p in basis {
        first.check_order(p)?;
    }
    let mut ctx = Ctx {
        steps: 0,
        limits: Limits::default(),
    };
    match wu_loop(&mut ctx, basis.to_vec())? {
        None => Ok(None),
        Some((c, _)) => Ok(Some(TriangularSet::new(first.order(), c)?)),
    }
}

fn task_key(p: &[Polynomial], q: &[Polynomial]) -> String {
    let mut a: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    let mut b: Vec<String> = q.iter().map(|x| x.to_string()).collect();
    a.sort();
    a.dedup();
    b.sort();
    b.dedup();
    format!("{}|{}", a.join(";"), b.join(";"))
}

fn push_unique(list: &mut Vec<Polynomial>, p: Polynomial) {
    if !p.is_constant() && !list.contains(&p) {
        list.push(p);
    }
}

/// Decomposes the task into a triangular representation of the radical of
/// the generated ideal, with the inequations removed from the zero set.
pub fn decompose(task: &DecompositionTask) -> Result<TriangularRepresentation> {
    let order = &task.order;
    if task.generators.is_empty() {
        return Ok(TriangularRepresentation::zero_ideal(order));
    }
    let mut ctx = Ctx {
        steps: 0,
        limits: task.limits,
    };
    let mut ineqs = Vec::new();
    for q in &task.inequations {
        push_unique(&mut ineqs, q.primitive_integer());
    }
    let mut stack = vec![(task.generators.clone(), ineqs)];
    let mut seen = HashSet::new();
    let mut components: Vec<QuasiComponent> = Vec::new();

    while let Some((polys, ineqs)) = stack.pop() {
        if !seen.insert(task_key(&polys, &ineqs)) {
            continue;
        }
        let (chain, full) = match wu_loop(&mut ctx, polys)? {
            None => continue,
            Some(x) => x,
        };
        let initials: Vec<Polynomial> = chain
            .iter()
            .map(|c| c.initial().expect("non-constant").primitive_integer())
            .filter(|i| !i.is_constant())
            .collect();
        for init in initials.iter().rev() {
            let mut p = full.clone();
            p.push(init.clone());
            stack.push((p, ineqs.clone()));
        }
        let mut with_inits = ineqs.clone();
        for i in &initials {
            push_unique(&mut with_inits, i.clone());
        }
        let t = match normalize(&mut ctx, &chain)? {
            Normalized::Empty => continue,
            Normalized::Split(g, h) => {
                for f in [h, g] {
                    let mut p = full.clone();
                    p.push(f);
                    stack.push((p, with_inits.clone()));
                }
                continue;
            }
            Normalized::Chain(t) => t,
        };
        let mut kept = Vec::new();
        let mut outcome = None;
        for q in &ineqs {
            match regularize(&mut ctx, &t, q)? {
                Reg::Zero => {
                    outcome = Some(None);
                    break;
                }
                Reg::Split(g, h) => {
                    outcome = Some(Some((g, h)));
                    break;
                }
                Reg::Invertible => kept.push(q.clone()),
            }
        }
        match outcome {
            Some(None) => continue,
            Some(Some((g, h))) => {
                for f in [h, g] {
                    let mut p = full.clone();
                    p.push(f);
                    stack.push((p, with_inits.clone()));
                }
                continue;
            }
            None => {}
        }
        let set = TriangularSet::new(order, t)?;
        components.push(QuasiComponent::new(set, kept)?);
    }

    if components.is_empty() {
        return Ok(TriangularRepresentation::unit(order));
    }
    components.sort_by(|a, b| compare_sets(&a.set, &b.set));
    components.dedup_by(|a, b| a.set == b.set);
    TriangularRepresentation::new(order, components)
}

fn compare_sets(a: &TriangularSet, b: &TriangularSet) -> std::cmp::Ordering {
    for (x, y) in a.members().iter().zip(b.members()) {
        let o = x.rank_cmp(y);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Radical membership through a decomposition.
pub fn membership_radical(f: &Polynomial, r: &TriangularRepresentation) -> Result<bool> {
    r.contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};

    fn sys(o: &Arc<VariableOrder>, ps: &[&str]) -> Vec<Polynomial> {
        ps.iter().map(|s| parse_polynomial(s, o).unwrap()).collect()
    }

    fn run(o: &Arc<VariableOrder>, ps: &[&str]) -> TriangularRepresentation {
        decompose(&DecompositionTask::new(o, sys(o, ps)).unwrap()).unwrap()
    }

    #[test]
    fn documented_examples() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();

        let r = run(&o, &["x^2-1", "y-x"]);
        assert!(membership_radical(&p("y^2-1"), &r).unwrap());
        assert!(!membership_radical(&p("y-1"), &r).unwrap());

        let r = run(&o, &["x", "x*y"]);
        assert_eq!(r.components().len(), 1);
        assert_eq!(r.components()[0].set.members(), &[p("x")]);
        assert!(!membership_radical(&p("y"), &r).unwrap());

        assert!(run(&o, &[]).is_zero_ideal());
        assert!(run(&o, &["1"]).is_unit());

        let r = run(&o, &["x^2"]);
        assert!(membership_radical(&p("x"), &r).unwrap());
        assert!(!membership_radical(&p("y"), &r).unwrap());
    }

    #[test]
    fn characteristic_sets() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert!(characteristic_set(&sys(&o, &["x^2-1", "y-x", "x+y"]))
            .unwrap()
            .is_none());
        let c = characteristic_set(&[p("x*y-1")]).unwrap().unwrap();
        assert_eq!(c.members(), &[p("x*y-1")]);
        assert!(characteristic_set(&sys(&o, &["x", "3"])).unwrap().is_none());
        assert!(characteristic_set(&[]).is_err());
    }

    #[test]
    fn splits_on_zero_divisors() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        // initial x-1 vanishes on one of the two roots of x^2-1
        let r = run(&o, &["x^2-1", "(x-1)*y - 1"]);
        assert!(r.contains(&p("x+1")).unwrap());
        assert!(r.contains(&p("2*y+1")).unwrap());
        assert!(!r.contains(&p("y")).unwrap());
        for c in r.components() {
            for g in &sys(&o, &["x^2-1", "(x-1)*y - 1"]) {
                assert!(c.set.contains(g).unwrap());
            }
        }
    }

    #[test]
    fn inequations_prune() {
        let o = VariableOrder::new(&["x", "y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        let task = DecompositionTask::with_inequations(&o, sys(&o, &["x^2-1", "y-x"]), vec![p("x-1")]).unwrap();
        let r = decompose(&task).unwrap();
        assert!(r.contains(&p("x+1")).unwrap());
        for c in r.components() {
            assert!(!c.set.contains(&p("x-1")).unwrap());
        }
        assert!(r.contains_point(&[rat(-1), rat(-1)]).unwrap());
        let task = DecompositionTask::with_inequations(&o, sys(&o, &["x-1"]), vec![p("x-1")]).unwrap();
        assert!(decompose(&task).unwrap().is_unit());
    }

    #[test]
    fn budget_is_enforced() {
        let o = VariableOrder::new(&["x", "y", "z"]).unwrap();
        let task = DecompositionTask::new(&o, sys(&o, &["x^3-y*z", "y^3-x*z", "z^3-x*y"]))
            .unwrap()
            .limits(Limits {
                max_steps: 3,
                max_degree: 512,
            })
            .unwrap();
        assert!(matches!(decompose(&task), Err(Error::Budget(_))));
    }
}
