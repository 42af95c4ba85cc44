//! Algebraic subgroups of `GL_n` given by equations in the matrix entries,
//! pullbacks along rational homomorphisms, unipotent subgroups and a small
//! catalog of named groups.

mod catalog;
mod unipotent;

pub use catalog::{
    character_kernel_intersection, identity_component, is_normal, is_subgroup, proto_check, Clause, GroupCatalogEntry,
    ProtoVerdict,
};
pub use unipotent::{one_param_subgroup, unipotent_group_equations, OneParameterUnipotent};

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::{decompose, DecompositionTask};
use crate::error::{Error, Result};
use crate::poly::{same_order, Polynomial, VariableOrder};
use crate::triangular::{QuasiComponent, TriangularRepresentation, TriangularSet};

/// Entry names `{prefix}{i}{j}` (1-based), with an underscore between the
/// indices once `n` reaches 10.
pub fn matrix_order(prefix: &str, n: usize) -> Result<Arc<VariableOrder>> {
    if n == 0 {
        return Err(Error::Domain("matrix size must be positive".into()));
    }
    let mut names = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            names.push(if n < 10 {
                format!("{prefix}{i}{j}")
            } else {
                format!("{prefix}{i}_{j}")
            });
        }
    }
    VariableOrder::new(&names)
}

/// Determinant of a row-major `n × n` matrix of polynomials.
pub fn det(entries: &[Polynomial], n: usize) -> Polynomial {
    assert_eq!(entries.len(), n * n);
    let order = entries[0].order().clone();
    if n == 1 {
        return entries[0].clone();
    }
    // Laplace expansion along the first row; n stays tiny here.
    let mut out = Polynomial::zero(&order);
    for c in 0..n {
        let minor: Vec<Polynomial> = (1..n)
            .flat_map(|r| (0..n).filter(move |&k| k != c).map(move |k| (r, k)))
            .map(|(r, k)| entries[r * n + k].clone())
            .collect();
        let t = &entries[c] * &det(&minor, n - 1);
        out = if c % 2 == 0 { &out + &t } else { &out - &t };
    }
    out
}

/// Determinant of a rational matrix by fraction-free elimination.
pub fn det_rational(m: &[BigRational], n: usize) -> BigRational {
    let mut a = m.to_vec();
    let mut sign = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            sign = -sign;
        }
        for r in k + 1..n {
            let f = &a[r * n + k] / &a[k * n + k];
            for j in k..n {
                let v = &f * &a[k * n + j];
                a[r * n + j] -= v;
            }
        }
    }
    (0..n).fold(sign, |acc, k| acc * &a[k * n + k])
}

fn identity_point(n: usize) -> Vec<BigRational> {
    (0..n * n)
        .map(|k| {
            if k / n == k % n {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// `H = Z(p_1, …, p_m) ∩ GL_n`.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    n: usize,
    order: Arc<VariableOrder>,
    equations: Vec<Polynomial>,
}

impl SubgroupPresentation {
    /// Equations must live in the entry order `x11, …, xnn` and vanish at
    /// the identity.
    pub fn new(n: usize, equations: Vec<Polynomial>) -> Result<Self> {
        let order = matrix_order("x", n)?;
        let mut eqs = Vec::with_capacity(equations.len());
        for p in equations {
            let p = if same_order(p.order(), &order) {
                p
            } else {
                p.rename_into(&order)?
            };
            if !p.evaluate(&identity_point(n))?.is_zero() {
                return Err(Error::Precondition(format!("identity does not satisfy {p}")));
            }
            if !p.is_zero() {
                eqs.push(p);
            }
        }
        Ok(SubgroupPresentation {
            n,
            order,
            equations: eqs,
        })
    }

    pub fn general_linear(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn special_linear(n: usize) -> Result<Self> {
        let order = matrix_order("x", n)?;
        let d = det(&vars(&order), n);
        Self::new(n, vec![&d - &Polynomial::one(&order)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn det_polynomial(&self) -> Polynomial {
        det(&vars(&self.order), self.n)
    }

    /// Decomposition of the equations with `det ≠ 0` imposed.
    pub fn representation(&self) -> Result<TriangularRepresentation> {
        let task =
            DecompositionTask::with_inequations(&self.order, self.equations.clone(), vec![self.det_polynomial()])?;
        decompose(&task)
    }

    /// Exact membership of a rational matrix (row-major).
    pub fn contains_matrix(&self, g: &[BigRational]) -> Result<bool> {
        check_len(g, self.n)?;
        if det_rational(g, self.n).is_zero() {
            return Ok(false);
        }
        for p in &self.equations {
            if !p.evaluate(g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_len(g: &[BigRational], n: usize) -> Result<()> {
    if g.len() != n * n {
        return Err(Error::Structure(format!("expected {} entries, got {}", n * n, g.len())));
    }
    Ok(())
}

fn vars(order: &Arc<VariableOrder>) -> Vec<Polynomial> {
    (0..order.len()).map(|i| Polynomial::var(order, i)).collect()
}

/// `τ = (P_ij / Q)` from `GL_n` to `GL_l`.
#[derive(Clone, Debug)]
pub struct RationalHomomorphism {
    source_n: usize,
    target_l: usize,
    numerators: Vec<Polynomial>,
    denominator: Polynomial,
}

impl RationalHomomorphism {
    /// `numerators` is row-major `l × l` over the `x` entry order of size `n`.
    pub fn new(source_n: usize, target_l: usize, numerators: Vec<Polynomial>, denominator: Polynomial) -> Result<Self> {
        let order = matrix_order("x", source_n)?;
        if target_l == 0 || numerators.len() != target_l * target_l {
            return Err(Error::Structure(format!(
                "need {} numerators for a map into GL({target_l})",
                target_l * target_l
            )));
        }
        let fix = |p: Polynomial| -> Result<Polynomial> {
            if same_order(p.order(), &order) {
                Ok(p)
            } else {
                p.rename_into(&order)
            }
        };
        let numerators = numerators.into_iter().map(fix).collect::<Result<Vec<_>>>()?;
        let denominator = fix(denominator)?;
        if denominator.is_zero() {
            return Err(Error::Domain("denominator is the zero polynomial".into()));
        }
        Ok(RationalHomomorphism {
            source_n,
            target_l,
            numerators,
            denominator,
        })
    }

    /// `det: GL_n → GL_1`.
    pub fn determinant(n: usize) -> Result<Self> {
        let order = matrix_order("x", n)?;
        Self::new(n, 1, vec![det(&vars(&order), n)], Polynomial::one(&order))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let order = matrix_order("x", n)?;
        Self::new(n, n, vars(&order), Polynomial::one(&order))
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn target_l(&self) -> usize {
        self.target_l
    }

    pub fn numerators(&self) -> &[Polynomial] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Largest degree among numerators and denominator.
    pub fn bound(&self) -> u32 {
        self.numerators
            .iter()
            .chain(std::iter::once(&self.denominator))
            .map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// `τ(g)`, or `None` where `Q(g) = 0`.
    pub fn apply(&self, g: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        check_len(g, self.source_n)?;
        let q = self.denominator.evaluate(g)?;
        if q.is_zero() {
            return Ok(None);
        }
        let mut out = Vec::with_capacity(self.numerators.len());
        for p in &self.numerators {
            out.push(p.evaluate(g)? / &q);
        }
        Ok(Some(out))
    }

    /// `Q^e · f(P/Q)` for `f` over the target entry order, `e = deg f`.
    pub fn pull_back(&self, f: &Polynomial) -> Result<Polynomial> {
        let e = f.total_degree();
        let order = self.denominator.order().clone();
        let mut qpow = vec![Polynomial::one(&order)];
        for k in 1..=e as usize {
            let next = &qpow[k - 1] * &self.denominator;
            qpow.push(next);
        }
        let mut out = Polynomial::zero(&order);
        for (m, c) in f.terms() {
            let mut t = Polynomial::constant(&order, c.clone());
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    t = &t * &self.numerators[i].pow(k);
                }
            }
            t = &t * &qpow[(e - m.degree()) as usize];
            out = &out + &t;
        }
        Ok(out)
    }
}

/// `τ⁻¹(H' ∩ τ(H))`: each component of `H'` is pulled back with cleared
/// denominators, decomposed together with the equations of `H` (with
/// `det ≠ 0` and `Q ≠ 0`), and the pieces are united.
pub fn preimage_intersection(
    h: &SubgroupPresentation,
    hp: &SubgroupPresentation,
    tau: &RationalHomomorphism,
) -> Result<TriangularRepresentation> {
    if tau.source_n != h.n || tau.target_l != hp.n {
        return Err(Error::Precondition(format!(
            "homomorphism GL({}) -> GL({}) does not match groups of size {} and {}",
            tau.source_n, tau.target_l, h.n, hp.n
        )));
    }
    let hrep = h.representation()?;
    for c in hrep.components() {
        if c.set.contains(&tau.denominator)? {
            return Err(Error::Precondition(format!(
                "denominator {} vanishes on a component of the source group",
                tau.denominator
            )));
        }
    }
    let ineqs = vec![h.det_polynomial(), tau.denominator.clone()];
    let hprep = hp.representation()?;
    if hprep.is_unit() {
        return Ok(TriangularRepresentation::unit(&h.order));
    }
    let pieces: Vec<Vec<Polynomial>> = if hprep.is_zero_ideal() {
        vec![Vec::new()]
    } else {
        hprep.sets().iter().map(|s| s.members().to_vec()).collect()
    };
    let mut out: Option<TriangularRepresentation> = None;
    for members in pieces {
        let mut gens = h.equations.clone();
        for f in &members {
            let p = tau.pull_back(f)?;
            if !p.is_zero() {
                gens.push(p);
            }
        }
        let task = DecompositionTask::with_inequations(&h.order, gens, ineqs.clone())?;
        let r = decompose(&task)?;
        out = Some(match out {
            None => r,
            Some(acc) => union(&acc, &r)?,
        });
    }
    Ok(out.unwrap_or_else(|| TriangularRepresentation::unit(&h.order)))
}

/// Zero-set union: the product representation, except that the zero ideal
/// absorbs everything.
fn union(a: &TriangularRepresentation, b: &TriangularRepresentation) -> Result<TriangularRepresentation> {
    if a.is_zero_ideal() || b.is_zero_ideal() {
        return Ok(TriangularRepresentation::zero_ideal(a.order()));
    }
    a.product(b)
}

/// Moves a representation whose members only involve variables of `target`
/// (matched by name) into that order.
pub(crate) fn move_representation(
    r: &TriangularRepresentation,
    target: &Arc<VariableOrder>,
) -> Result<TriangularRepresentation> {
    if r.is_unit() {
        return Ok(TriangularRepresentation::unit(target));
    }
    let mut comps: Vec<QuasiComponent> = Vec::new();
    for c in r.components() {
        let members = c
            .set
            .members()
            .iter()
            .map(|p| p.rename_into(target))
            .collect::<Result<Vec<_>>>()?;
        let ineqs = c
            .inequations
            .iter()
            .map(|p| p.rename_into(target))
            .collect::<Result<Vec<_>>>()?;
        let qc = QuasiComponent::new(TriangularSet::new(target, members)?, ineqs)?;
        if !comps.contains(&qc) {
            comps.push(qc);
        }
    }
    TriangularRepresentation::new(target, comps)
}

/// Small random rational in `[-bound, bound]` with denominator up to 3.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    let den = rng.gen_range(1..=3i64);
    let num = rng.gen_range(-bound * den..=bound * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Random invertible rational matrix.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BigRational> {
    loop {
        let g: Vec<BigRational> = (0..n * n).map(|_| random_rational(rng, 9)).collect();
        if !det_rational(&g, n).is_zero() {
            return g;
        }
    }
}

/// Random rational matrix of determinant 1.
pub fn random_special<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BigRational> {
    let mut g = random_invertible(rng, n);
    let d = det_rational(&g, n);
    for x in g.iter_mut().take(n) {
        *x = &*x / &d;
    }
    g
}

/// Whether some component's members vanish at the matrix `g`, i.e. `g` lies
/// on the variety of the representation, and `g` is invertible.
pub fn representation_admits(r: &TriangularRepresentation, g: &[BigRational], n: usize) -> Result<bool> {
    check_len(g, n)?;
    Ok(!det_rational(g, n).is_zero() && r.vanishes_at(g)?)
}

/// Outcome of a sampled membership comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SampleReport {
    pub samples: usize,
    /// Samples expected inside the group.
    pub inside: usize,
    pub mismatches: usize,
}

/// Compares `r` with `g ∈ H ∧ τ(g) ∈ H'` on random invertible matrices,
/// alternating with determinant-one matrices.
pub fn check_preimage_samples(
    h: &SubgroupPresentation,
    hp: &SubgroupPresentation,
    tau: &RationalHomomorphism,
    r: &TriangularRepresentation,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SampleReport::default();
    while rep.samples < samples {
        let g = if rep.samples % 2 == 0 {
            random_special(&mut rng, h.n)
        } else {
            random_invertible(&mut rng, h.n)
        };
        let Some(image) = tau.apply(&g)? else { continue };
        rep.samples += 1;
        let expected = h.contains_matrix(&g)? && hp.contains_matrix(&image)?;
        rep.inside += expected as usize;
        if representation_admits(r, &g, h.n)? != expected {
            rep.mismatches += 1;
        }
    }
    Ok(rep)
}

/// Half the samples are random products of the one-parameter subgroups and
/// must be admitted, half are random invertible matrices and must not be.
pub fn check_unipotent_samples(
    gens: &[OneParameterUnipotent],
    r: &TriangularRepresentation,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    let n = gens
        .first()
        .map(OneParameterUnipotent::n)
        .ok_or_else(|| Error::Precondition("at least one generator is required".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SampleReport::default();
    for k in 0..samples {
        rep.samples += 1;
        let (g, expected) = if k % 2 == 0 {
            let len = rng.gen_range(1..=2 * n * n);
            let mut g = identity_point(n);
            for _ in 0..len {
                let u = &gens[rng.gen_range(0..gens.len())];
                g = unipotent::mat_mul(&g, &u.at(&random_rational(&mut rng, 5)), n);
            }
            (g, true)
        } else {
            (random_invertible(&mut rng, n), false)
        };
        rep.inside += expected as usize;
        if representation_admits(r, &g, n)? != expected {
            rep.mismatches += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn determinant_pullback_is_special_linear() {
        let gl2 = SubgroupPresentation::general_linear(2).unwrap();
        let o1 = matrix_order("x", 1).unwrap();
        let one = SubgroupPresentation::new(1, vec![parse_polynomial("x11 - 1", &o1).unwrap()]).unwrap();
        let tau = RationalHomomorphism::determinant(2).unwrap();
        let r = preimage_intersection(&gl2, &one, &tau).unwrap();
        let d = parse_polynomial("x11*x22 - x12*x21 - 1", gl2.order()).unwrap();
        assert!(r.contains(&d).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(representation_admits(&r, &random_special(&mut rng, 2), 2).unwrap());
            let g = random_invertible(&mut rng, 2);
            let inside = det_rational(&g, 2).is_one();
            assert_eq!(representation_admits(&r, &g, 2).unwrap(), inside);
        }
    }

    #[test]
    fn trivial_target_keeps_source() {
        let sl2 = SubgroupPresentation::special_linear(2).unwrap();
        let gl1 = SubgroupPresentation::general_linear(1).unwrap();
        let tau = RationalHomomorphism::determinant(2).unwrap();
        let r = preimage_intersection(&sl2, &gl1, &tau).unwrap();
        assert!(r.contains(&sl2.equations()[0]).unwrap());
    }

    #[test]
    fn determinants() {
        let o = matrix_order("x", 3).unwrap();
        let d = det(&vars(&o), 3);
        assert_eq!(d.num_terms(), 6);
        let g: Vec<BigRational> = [2, 0, 1, 1, 3, 0, 0, 1, 1]
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        assert_eq!(det_rational(&g, 3), d.evaluate(&g).unwrap());
        assert!(SubgroupPresentation::new(
            2,
            vec![parse_polynomial("x11", &matrix_order("x", 2).unwrap()).unwrap()]
        )
        .is_err());
    }
}
