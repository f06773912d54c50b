//! Canonical echelon bases (Hermite normal form) for submodules of a free
//! module over the univariate polynomial ring in `D`.
//!
//! The coefficient ring is a field, so the polynomial ring is Euclidean and
//! every submodule of a finite free module has a unique basis with monic
//! pivots on strictly increasing columns and all other entries in a pivot
//! column reduced below the pivot degree. Two generating sets span the same
//! submodule exactly when their normal forms are identical row lists.

use crate::scalar::{FieldContext, Rat};
use crate::upoly::UPoly;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::fmt;

/// A vector of `D`-polynomials, one coordinate per free generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec(pub Vec<UPoly>);

impl PolyVec {
    pub fn zero(width: usize) -> Self {
        PolyVec(vec![UPoly::zero(); width])
    }

    pub fn unit(width: usize, col: usize) -> Self {
        let mut v = Self::zero(width);
        v.0[col] = UPoly::one();
        v
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(UPoly::is_zero)
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_col(&self) -> Option<usize> {
        self.0.iter().position(|p| !p.is_zero())
    }

    pub fn add(&self, o: &PolyVec) -> PolyVec {
        PolyVec(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, o: &PolyVec) -> PolyVec {
        PolyVec(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, f: &UPoly, ctx: &FieldContext) -> PolyVec {
        PolyVec(self.0.iter().map(|p| p.mul(f, ctx)).collect())
    }

    /// Rescales to primitive form: multiplied by the common denominator and
    /// divided by the numerator gcd of all coordinates. Exact elimination
    /// blows up coefficient sizes without this.
    pub fn primitive(&self) -> PolyVec {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for p in &self.0 {
            for k in 0..=p.deg().map(|d| d).unwrap_or(0) {
                let s = p.coeff(k);
                for r in s.coords() {
                    if !r.is_zero() {
                        num_gcd = num_gcd.gcd(r.numer());
                        den_lcm = den_lcm.lcm(r.denom());
                    }
                }
            }
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let factor = Rat::new(den_lcm, num_gcd).abs();
        if factor.is_one() {
            return self.clone();
        }
        PolyVec(
            self.0
                .iter()
                .map(|p| {
                    UPoly::from_coeffs(
                        (0..=p.deg().unwrap_or(0))
                            .map(|k| p.coeff(k).scale_rat(&factor))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Canonical row-echelon basis; rows ordered by pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    rows: Vec<PolyVec>,
    pivots: Vec<usize>,
    width: usize,
}

impl HermiteBasis {
    pub fn rows(&self) -> &[PolyVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn pivot_poly(&self, row: usize) -> &UPoly {
        &self.rows[row].0[self.pivots[row]]
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// True when every pivot is a unit and there is one per column, i.e. the
    /// submodule is the whole free module.
    pub fn is_full(&self) -> bool {
        self.rank() == self.width && self.rows.iter().all(|r| {
            r.0.iter().filter(|p| !p.is_zero()).count() == 1
        }) && (0..self.rank()).all(|k| self.pivot_poly(k).is_unit())
    }

    /// Reduces `v` against the basis; returns the remainder and the
    /// combination coefficients used.
    pub fn reduce(&self, v: &PolyVec, ctx: &FieldContext) -> (PolyVec, Vec<UPoly>) {
        let mut rem = v.clone();
        let mut cert = vec![UPoly::zero(); self.rows.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let col = self.pivots[k];
            if rem.0[col].is_zero() {
                continue;
            }
            let (q, r) = rem.0[col]
                .divrem(&row.0[col], ctx)
                .expect("pivot is nonzero");
            if q.is_zero() {
                continue;
            }
            rem = rem.sub(&row.scale(&q, ctx));
            debug_assert_eq!(rem.0[col], r);
            cert[k] = q;
        }
        (rem, cert)
    }

    /// Membership with certificate: `Some(coeffs)` iff `v` lies in the span.
    pub fn membership(&self, v: &PolyVec, ctx: &FieldContext) -> Option<Vec<UPoly>> {
        let (rem, cert) = self.reduce(v, ctx);
        if rem.is_zero() {
            Some(cert)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &PolyVec, ctx: &FieldContext) -> bool {
        self.membership(v, ctx).is_some()
    }

    /// True when the two bases span the same submodule (canonicity makes
    /// this plain equality).
    pub fn same_span(&self, o: &HermiteBasis) -> bool {
        self == o
    }
}

/// Computes the canonical echelon basis of the row span.
pub fn hermite_form(rows: &[PolyVec], width: usize, ctx: &FieldContext) -> HermiteBasis {
    // pivot_rows[col] = current pivot row for that column.
    let mut pivot_rows: Vec<Option<PolyVec>> = vec![None; width];
    let mut queue: Vec<PolyVec> = rows
        .iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.primitive())
        .collect();
    for r in &queue {
        assert_eq!(r.width(), width, "row width mismatch");
    }

    while let Some(mut v) = queue.pop() {
        let Some(col) = v.leading_col() else { continue };
        match &pivot_rows[col] {
            None => {
                pivot_rows[col] = Some(v);
            }
            Some(p) => {
                // Euclidean step at the shared leading column: the remainder
                // strictly drops the degree until one side vanishes there.
                let mut pivot = p.clone();
                loop {
                    let dv = v.0[col].deg();
                    let dp = pivot.0[col].deg();
                    match (dv, dp) {
                        (None, _) => break,
                        (Some(_), None) => {
                            std::mem::swap(&mut v, &mut pivot);
                            break;
                        }
                        (Some(a), Some(b)) => {
                            if a < b {
                                std::mem::swap(&mut v, &mut pivot);
                                continue;
                            }
                            let (q, _) = v.0[col].divrem(&pivot.0[col], ctx).unwrap();
                            v = v.sub(&pivot.scale(&q, ctx)).primitive();
                        }
                    }
                }
                pivot_rows[col] = Some(pivot);
                if !v.is_zero() {
                    queue.push(v);
                }
            }
        }
    }

    // Normalize: reduce entries at every other row's pivot column below the
    // pivot degree, working on primitive rows to keep coefficients small,
    // and only then make the pivots monic. The degree conditions are
    // scale-invariant, so the result is the canonical form either way.
    let mut pivots: Vec<usize> = Vec::new();
    let mut basis: Vec<PolyVec> = Vec::new();
    for (col, row) in pivot_rows.into_iter().enumerate() {
        if let Some(r) = row {
            pivots.push(col);
            basis.push(r);
        }
    }
    // Ascending pivot order: a subtrahend row is zero left of its own
    // pivot, so earlier reductions are never disturbed.
    for k in 0..basis.len() {
        let row = basis[k].clone();
        let col = pivots[k];
        for j in 0..basis.len() {
            if j == k {
                continue;
            }
            if basis[j].0[col].is_zero() {
                continue;
            }
            let (q, _) = basis[j].0[col].divrem(&row.0[col], ctx).unwrap();
            if !q.is_zero() {
                basis[j] = basis[j].sub(&row.scale(&q, ctx)).primitive();
            }
        }
    }
    for k in 0..basis.len() {
        basis[k] = basis[k].scale(
            &UPoly::constant(
                basis[k].0[pivots[k]]
                    .leading()
                    .unwrap()
                    .inv(ctx)
                    .expect("pivot leading coefficient"),
            ),
            ctx,
        );
        debug_assert!(basis[k].0[pivots[k]].is_monic());
    }
    HermiteBasis {
        rows: basis,
        pivots,
        width,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn ctx() -> FieldContext {
        FieldContext::from_int(2).unwrap()
    }

    fn upoly(coeffs: &[i64]) -> UPoly {
        UPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    fn vec2(a: UPoly, b: UPoly) -> PolyVec {
        PolyVec(vec![a, b])
    }

    #[test]
    fn redundant_row_collapses() {
        let ctx = ctx();
        // {(D, D^2), (1, D)}: the first row is D times the second.
        let rows = vec![
            vec2(upoly(&[0, 1]), upoly(&[0, 0, 1])),
            vec2(upoly(&[1]), upoly(&[0, 1])),
        ];
        let b = hermite_form(&rows, 2, &ctx);
        assert_eq!(b.rank(), 1);
        assert_eq!(b.rows()[0], vec2(upoly(&[1]), upoly(&[0, 1])));
    }

    #[test]
    fn echelon_input_is_fixed_point() {
        let ctx = ctx();
        let alpha = Scalar::from_int(5);
        let rows = vec![
            vec2(UPoly::linear(alpha), UPoly::zero()),
            vec2(UPoly::zero(), UPoly::one()),
        ];
        let b = hermite_form(&rows, 2, &ctx);
        assert_eq!(b.rows(), &rows[..]);
        let again = hermite_form(b.rows(), 2, &ctx);
        assert!(b.same_span(&again));
    }

    #[test]
    fn gcd_of_column_entries() {
        let ctx = ctx();
        // {(D^2, 0), (D^2 + D, 0)} -> {(D, 0)}
        let rows = vec![
            vec2(upoly(&[0, 0, 1]), UPoly::zero()),
            vec2(upoly(&[0, 1, 1]), UPoly::zero()),
        ];
        let b = hermite_form(&rows, 2, &ctx);
        assert_eq!(b.rank(), 1);
        assert_eq!(b.rows()[0], vec2(upoly(&[0, 1]), UPoly::zero()));
    }

    #[test]
    fn membership_examples() {
        let ctx = ctx();
        let alpha = Scalar::from_int(7);
        let basis = hermite_form(
            &[vec2(UPoly::linear(alpha.clone()), UPoly::zero())],
            2,
            &ctx,
        );
        // (D^2 + alpha D, 0) = D * (D + alpha, 0)
        let v = vec2(
            UPoly::from_coeffs(vec![Scalar::zero(), alpha, Scalar::from_int(1)]),
            UPoly::zero(),
        );
        let cert = basis.membership(&v, &ctx).unwrap();
        assert_eq!(cert, vec![UPoly::x()]);
        // (1, 0) has a degree obstruction.
        assert!(!basis.contains(&PolyVec::unit(2, 0), &ctx));
        // Zero belongs to any span.
        assert!(basis.contains(&PolyVec::zero(2), &ctx));
    }

    #[test]
    fn canonical_under_row_operations() {
        // Same span through a degree-two row operation; the canonical forms
        // must coincide rowwise.
        let ctx = ctx();
        let r1 = vec2(upoly(&[0, 0, 0, 1]), upoly(&[0, 1]));
        let r2 = vec2(UPoly::zero(), upoly(&[1, 0, 1]));
        let mixed = r1.add(&r2.scale(&upoly(&[0, 0, 3]), &ctx));
        let a = hermite_form(&[r1.clone(), r2.clone()], 2, &ctx);
        let b = hermite_form(&[mixed, r2], 2, &ctx);
        assert_eq!(a, b);
    }

    #[test]
    fn shuffle_invariance() {
        let ctx = ctx();
        let rows = vec![
            vec2(upoly(&[1, 2]), upoly(&[3])),
            vec2(upoly(&[0, 0, 5]), upoly(&[1, 1])),
            vec2(upoly(&[2, 2]), upoly(&[0, 4])),
        ];
        let b1 = hermite_form(&rows, 2, &ctx);
        let shuffled = vec![rows[2].clone(), rows[0].clone(), rows[1].clone()];
        let b2 = hermite_form(&shuffled, 2, &ctx);
        assert!(b1.same_span(&b2));
        for r in &rows {
            assert!(b1.contains(r, &ctx));
        }
    }
}
