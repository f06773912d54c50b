//! Deliberately broken bracket tables for exercising the checkers.
//!
//! The defect-detection suite requires that each injected fault is caught
//! with a nonzero residual naming the offending pair or triple; these
//! constructors produce the faulted algebras.

use crate::catalog::kb_quotient;
use crate::conformal::Algebra;
use crate::doc::{algebra_from_doc, algebra_to_doc, DocError};
use crate::poly::Poly;
use crate::scalar::GaussRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Defect {
    /// Sign flip on the `[J_0, G+_0]` entry alone; skew-symmetry must flag
    /// the `(J0, G+0)` pair.
    SkewSignFlip,
    /// The lambda coefficient of the `J` component of `[G+_0, G-_0]`
    /// rescaled from 2 to 3, with the opposite entry kept skew-consistent,
    /// so skew-symmetry stays clean but the Jacobi identity fails on
    /// `(L0, G+0, G-0)`.
    JacobiCoefficient,
}

pub fn kb_quotient_with_defect(
    p: &GaussRat,
    cutoff: u32,
    defect: Defect,
) -> Result<Algebra, DocError> {
    let base = kb_quotient(p, cutoff)?;
    let ctx = base.ctx.clone();
    let mut doc = algebra_to_doc(&base);
    match defect {
        Defect::SkewSignFlip => {
            let entry = doc
                .brackets
                .iter_mut()
                .find(|b| b.a == "J0" && b.b == "G+0")
                .expect("catalog entry");
            for term in &mut entry.value {
                let poly = Poly::parse(&term.coeff, &ctx)?;
                term.coeff = poly.neg().to_string();
            }
        }
        Defect::JacobiCoefficient => {
            // Bump the lambda part of the J component by half of itself
            // (2 -> 3 overall), then rebuild the opposite entry through the
            // skew transform so the skew scan cannot see the fault.
            let entry = doc
                .brackets
                .iter_mut()
                .find(|e| e.a == "G+0" && e.b == "G-0")
                .expect("catalog entry");
            let term = entry
                .value
                .iter_mut()
                .find(|t| t.symbol == "J0")
                .expect("odd-odd J component");
            let poly = Poly::parse(&term.coeff, &ctx)?;
            let lambda_part = Poly::monomial(
                crate::poly::Var::L,
                1,
                crate::scalar::Scalar::from_ratio(1, 2),
            )
            .mul(&poly.coeff_of(crate::poly::Var::L, 1), &ctx);
            let bumped = poly.add(&lambda_part);
            term.coeff = bumped.to_string();
            let flipped = Poly::var(crate::poly::Var::L)
                .neg()
                .sub(&Poly::var(crate::poly::Var::D));
            let mirror = bumped.substitute(crate::poly::Var::L, &flipped, &ctx);
            let entry = doc
                .brackets
                .iter_mut()
                .find(|e| e.a == "G-0" && e.b == "G+0")
                .expect("catalog entry");
            let term = entry
                .value
                .iter_mut()
                .find(|t| t.symbol == "J0")
                .expect("odd-odd J component");
            term.coeff = mirror.to_string();
        }
    }
    algebra_from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_flip_caught_by_skew() {
        let alg =
            kb_quotient_with_defect(&GaussRat::from_int(1), 1, Defect::SkewSignFlip).unwrap();
        let failures = alg.check_skew();
        assert!(!failures.is_empty());
        assert!(failures
            .iter()
            .any(|f| f.items == vec!["J0".to_string(), "G+0".to_string()]));
    }

    #[test]
    fn coefficient_change_caught_by_jacobi_not_skew() {
        let alg =
            kb_quotient_with_defect(&GaussRat::from_int(1), 1, Defect::JacobiCoefficient).unwrap();
        assert!(alg.check_skew().is_empty());
        let failures = alg.check_jacobi();
        assert!(!failures.is_empty());
        assert!(failures.iter().any(|f| f.items
            == vec!["L0".to_string(), "G+0".to_string(), "G-0".to_string()]));
    }
}
