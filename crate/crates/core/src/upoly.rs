//! Dense univariate polynomials in the translation generator `D` over
//! [`Scalar`], with the Euclidean division the submodule engine needs.

use crate::poly::{Mono, Poly, Var};
use crate::scalar::{FieldContext, Scalar, ScalarError};
use std::fmt;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    c: Vec<Scalar>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        UPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = UPoly { c: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(c: Vec<Scalar>) -> Self {
        let mut p = UPoly { c };
        p.trim();
        p
    }

    /// `D + a`.
    pub fn linear(a: Scalar) -> Self {
        UPoly::from_coeffs(vec![a, Scalar::one()])
    }

    pub fn x() -> Self {
        UPoly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(x) if x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.c.last()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_unit(&self) -> bool {
        self.c.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        matches!(self.leading(), Some(x) if *x == Scalar::one())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k).add(&o.coeff(k)));
        }
        UPoly::from_coeffs(c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k).sub(&o.coeff(k)));
        }
        UPoly::from_coeffs(c)
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            c: self.c.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, o: &UPoly, ctx: &FieldContext) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b, ctx));
            }
        }
        UPoly::from_coeffs(c)
    }

    pub fn scale(&self, s: &Scalar, ctx: &FieldContext) -> UPoly {
        UPoly::from_coeffs(self.c.iter().map(|x| x.mul(s, ctx)).collect())
    }

    /// Quotient and remainder with `deg(r) < deg(d)`; coefficients form a
    /// field, so division is always exact in this sense.
    pub fn divrem(&self, d: &UPoly, ctx: &FieldContext) -> Result<(UPoly, UPoly), ScalarError> {
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let dd = d.deg().unwrap();
        let lead_inv = d.leading().unwrap().inv(ctx)?;
        let mut r = self.clone();
        let mut q = vec![Scalar::zero(); self.c.len().saturating_sub(dd)];
        while let Some(rd) = r.deg() {
            if rd < dd {
                break;
            }
            let factor = r.leading().unwrap().mul(&lead_inv, ctx);
            let shift = rd - dd;
            q[shift] = q[shift].add(&factor);
            // r -= factor * x^shift * d
            let mut c = r.c.clone();
            for (j, b) in d.c.iter().enumerate() {
                c[j + shift] = c[j + shift].sub(&factor.mul(b, ctx));
            }
            r = UPoly::from_coeffs(c);
        }
        Ok((UPoly::from_coeffs(q), r))
    }

    pub fn monic(&self, ctx: &FieldContext) -> UPoly {
        match self.leading() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.inv(ctx).expect("nonzero leading"), ctx),
        }
    }

    /// Evaluates at a scalar point.
    pub fn eval(&self, x: &Scalar, ctx: &FieldContext) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x, ctx).add(c);
        }
        acc
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in self.c.iter().enumerate() {
            p.add_term(
                Mono {
                    d: k as u32,
                    l: 0,
                    m: 0,
                },
                c,
            );
        }
        p
    }

    /// Converts a `D`-only [`Poly`]; any `L`/`M` dependence is an error.
    pub fn from_poly(p: &Poly) -> Result<UPoly, ScalarError> {
        if p.uses(Var::L) || p.uses(Var::M) {
            return Err(ScalarError::Parse {
                input: p.to_string(),
                message: "expected a polynomial in D only".into(),
            });
        }
        let mut c = vec![Scalar::zero(); p.max_deg(Var::D) as usize + 1];
        for (m, s) in p.terms() {
            c[m.d as usize] = s.clone();
        }
        Ok(UPoly::from_coeffs(c))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> FieldContext {
        FieldContext::from_int(2).unwrap()
    }

    #[test]
    fn division_invariant() {
        let ctx = ctx();
        // (D^2 + 1) / (D + 3): q = D - 3, r = 10
        let a = UPoly::from_coeffs(vec![
            Scalar::from_int(1),
            Scalar::zero(),
            Scalar::from_int(1),
        ]);
        let d = UPoly::linear(Scalar::from_int(3));
        let (q, r) = a.divrem(&d, &ctx).unwrap();
        assert_eq!(q.mul(&d, &ctx).add(&r), a);
        assert_eq!(r, UPoly::constant(Scalar::from_int(10)));
    }

    #[test]
    fn division_by_zero() {
        let ctx = ctx();
        assert!(UPoly::one().divrem(&UPoly::zero(), &ctx).is_err());
    }

    #[test]
    fn poly_round_trip() {
        let ctx = ctx();
        let u = UPoly::from_coeffs(vec![
            Scalar::from_ratio(1, 2),
            Scalar::sqrt_p(&ctx),
            Scalar::from_int(-3),
        ]);
        assert_eq!(UPoly::from_poly(&u.to_poly()).unwrap(), u);
    }
}
