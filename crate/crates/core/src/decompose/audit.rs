use std::cmp::Ordering;
use std::fmt;

use crate::bounds::{compare, BoundExpr};
use crate::error::{Error, Result};
use crate::triangular::TriangularRepresentation;

/// Observed output degrees against the bound `n·d^{5.5n³}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeAudit {
    pub n: u32,
    pub d: u32,
    pub observed_max: u32,
    pub bound: BoundExpr,
    pub within: bool,
}

pub fn degree_bound(n: u32, d: u32) -> BoundExpr {
    let n3 = (n as i64).pow(3);
    BoundExpr::int(n as i64) * BoundExpr::int(d as i64).pow(BoundExpr::rat(11 * n3, 2))
}

/// Audits `r` for `n` variables and input degree `d`; refuses `n ≤ 1`.
pub fn degree_audit(r: &TriangularRepresentation, n: u32, d: u32) -> Result<DegreeAudit> {
    if n <= 1 {
        return Err(Error::Precondition(format!("degree audit needs n > 1, got {n}")));
    }
    let observed_max = r.max_degree();
    let bound = degree_bound(n, d);
    let within = compare(&BoundExpr::int(observed_max as i64), &bound)? != Ordering::Greater;
    Ok(DegreeAudit {
        n,
        d,
        observed_max,
        bound,
        within,
    })
}

impl fmt::Display for DegreeAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14} {}", "n", self.n)?;
        writeln!(f, "{:<14} {}", "d", self.d)?;
        writeln!(f, "{:<14} {}", "observed max", self.observed_max)?;
        writeln!(f, "{:<14} {}", "bound", self.bound)?;
        if let Ok(Some(v)) = crate::bounds::eval_exact(&self.bound, 60) {
            writeln!(f, "{:<14} {}", "bound value", v)?;
        }
        write!(f, "{:<14} {}", "within", if self.within { "yes" } else { "NO" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, DecompositionTask};
    use crate::poly::{parse_polynomial, VariableOrder};

    #[test]
    fn small_audits() {
        let order = VariableOrder::new(&["x", "y"]).unwrap();
        let gens = vec![
            parse_polynomial("x^2 - 1", &order).unwrap(),
            parse_polynomial("y - x", &order).unwrap(),
        ];
        let r = decompose(&DecompositionTask::new(&order, gens).unwrap()).unwrap();
        let a = degree_audit(&r, 2, 2).unwrap();
        assert!(a.within);
        assert_eq!(a.observed_max, 2);
        let v = crate::bounds::eval_exact(&a.bound, 100).unwrap().unwrap();
        assert_eq!(v, num_bigint::BigInt::from(35_184_372_088_832u64));
        assert!(degree_audit(&r, 1, 2).is_err());
        let z = TriangularRepresentation::zero_ideal(&order);
        assert!(degree_audit(&z, 2, 0).unwrap().within);
    }
}
