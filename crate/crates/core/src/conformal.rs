//! Finitely presented conformal superalgebras with an exact lambda-bracket.
//!
//! An [`Algebra`] stores a finite ordered basis over the polynomial ring in
//! the translation generator together with the full bracket table. The table
//! is total: an absent entry is the zero bracket. Sesquilinearity holds by
//! construction of [`Algebra::bracket_elements`]; skew-symmetry and the
//! Jacobi identity are verified by [`Algebra::check_skew`] and
//! [`Algebra::check_jacobi`].

use crate::poly::{Poly, Var};
use crate::scalar::{FieldContext, GaussRat, Scalar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn combine(self, o: Parity) -> Parity {
        if self == o {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// True when the Koszul sign `(-1)^{|a||b|}` is -1.
    pub fn koszul_negative(a: Parity, b: Parity) -> bool {
        a == Parity::Odd && b == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInfo {
    pub family: String,
    pub index: u32,
    pub parity: Parity,
    pub degree: Option<i64>,
}

impl SymbolInfo {
    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.index)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("bracket table entry ({a}, {b}) breaks parity homogeneity at `{symbol}`")]
    ParityHomogeneity { a: String, b: String, symbol: String },
    #[error("bracket table entry ({a}, {b}) breaks the grading at `{symbol}`")]
    Grading { a: String, b: String, symbol: String },
    #[error("bracket table entry ({a}, {b}) uses the auxiliary variable M")]
    MuInTable { a: String, b: String },
    #[error("element coefficient for `{0}` must be a polynomial in D only")]
    NonTranslationCoefficient(String),
}

/// A finite linear combination of basis ids with polynomial coefficients.
///
/// The same shape serves algebra elements (coefficients in `D` only),
/// bracket values (coefficients in `D`, `L`) and intermediate residuals
/// (all three variables).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb {
    terms: BTreeMap<usize, Poly>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(id: usize, p: Poly) -> Self {
        let mut lc = LinComb::zero();
        lc.add_term(id, p);
        lc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&usize, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, id: usize) -> Poly {
        self.terms.get(&id).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add_term(&mut self, id: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(id).or_insert_with(Poly::zero);
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn add(&self, o: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (id, p) in &o.terms {
            out.add_term(*id, p.clone());
        }
        out
    }

    pub fn sub(&self, o: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (id, p) in &o.terms {
            out.add_term(*id, p.neg());
        }
        out
    }

    pub fn neg(&self) -> LinComb {
        LinComb {
            terms: self.terms.iter().map(|(i, p)| (*i, p.neg())).collect(),
        }
    }

    pub fn scale_poly(&self, p: &Poly, ctx: &FieldContext) -> LinComb {
        let mut out = LinComb::zero();
        for (id, q) in &self.terms {
            out.add_term(*id, q.mul(p, ctx));
        }
        out
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldContext) -> LinComb {
        self.scale_poly(&Poly::constant(c.clone()), ctx)
    }

    pub fn map_polys(&self, mut f: impl FnMut(&Poly) -> Poly) -> LinComb {
        let mut out = LinComb::zero();
        for (id, p) in &self.terms {
            out.add_term(*id, f(p));
        }
        out
    }

    /// Renders against a naming function, e.g. `[(2)*D] L0 + [(1)] J1`.
    pub fn render(&self, name_of: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(id, p)| format!("[{p}] {}", name_of(*id)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One nonzero residual from an axiom scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    /// The pair or triple (or other item) that failed.
    pub items: Vec<String>,
    /// Rendered residual polynomial combination.
    pub residual: String,
}

/// How a catalog algebra was built; drives module family construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Quotient of the Block-type family at parameter `p`, indices up to `cutoff`.
    BlockQuotient { p: GaussRat, cutoff: u32 },
    /// The rank-4 N=2 superalgebra in its rescaled basis `{L, J, G+, G-}`.
    N2 { p: GaussRat },
    /// Loaded from a definition document.
    Custom,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    pub ctx: FieldContext,
    pub label: String,
    pub kind: AlgebraKind,
    symbols: Vec<SymbolInfo>,
    index: BTreeMap<String, usize>,
    table: Vec<Vec<LinComb>>,
}

impl Algebra {
    /// Assembles and validates an algebra from explicit table entries.
    ///
    /// Every listed entry must be parity homogeneous and respect the grading
    /// when degrees are declared; entries not listed are zero.
    pub fn new(
        ctx: FieldContext,
        label: String,
        kind: AlgebraKind,
        symbols: Vec<SymbolInfo>,
        entries: Vec<(String, String, LinComb)>,
    ) -> Result<Self, AlgebraError> {
        let mut index = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.name(), i).is_some() {
                return Err(AlgebraError::DuplicateSymbol(s.name()));
            }
        }
        let n = symbols.len();
        let mut table = vec![vec![LinComb::zero(); n]; n];
        let graded = symbols.iter().all(|s| s.degree.is_some());
        for (a, b, value) in entries {
            let ia = *index
                .get(&a)
                .ok_or_else(|| AlgebraError::UnknownSymbol(a.clone()))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| AlgebraError::UnknownSymbol(b.clone()))?;
            let want_parity = symbols[ia].parity.combine(symbols[ib].parity);
            for (id, p) in value.terms() {
                let out = &symbols[*id];
                if p.uses(Var::M) {
                    return Err(AlgebraError::MuInTable { a, b });
                }
                if out.parity != want_parity {
                    return Err(AlgebraError::ParityHomogeneity {
                        a,
                        b,
                        symbol: out.name(),
                    });
                }
                if graded {
                    let want = symbols[ia].degree.unwrap() + symbols[ib].degree.unwrap();
                    if out.degree.unwrap() != want {
                        return Err(AlgebraError::Grading {
                            a,
                            b,
                            symbol: out.name(),
                        });
                    }
                }
            }
            table[ia][ib] = value;
        }
        Ok(Algebra {
            ctx,
            label,
            kind,
            symbols,
            index,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[SymbolInfo] {
        &self.symbols
    }

    pub fn symbol_id(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn symbol_name(&self, id: usize) -> String {
        self.symbols[id].name()
    }

    pub fn parity(&self, id: usize) -> Parity {
        self.symbols[id].parity
    }

    /// The stored bracket of two basis symbols (polynomials in `D`, `L`).
    pub fn table(&self, a: usize, b: usize) -> &LinComb {
        &self.table[a][b]
    }

    pub fn render_comb(&self, lc: &LinComb) -> String {
        lc.render(|id| self.symbol_name(id))
    }

    /// An element `f(D)*name`.
    pub fn element(&self, name: &str, coeff: Poly) -> Result<LinComb, AlgebraError> {
        if coeff.uses(Var::L) || coeff.uses(Var::M) {
            return Err(AlgebraError::NonTranslationCoefficient(name.to_string()));
        }
        Ok(LinComb::single(self.symbol_id(name)?, coeff))
    }

    /// Bilinear bracket of two elements with `D`-polynomial coefficients.
    ///
    /// The first slot turns `D` into `-L`, the second into `D + L`, then the
    /// stored table entry is scaled along.
    pub fn bracket_elements(&self, x: &LinComb, y: &LinComb) -> Result<LinComb, AlgebraError> {
        let ctx = &self.ctx;
        let lambda = Poly::var(Var::L);
        let mut out = LinComb::zero();
        for (a, f) in x.terms() {
            if f.uses(Var::L) || f.uses(Var::M) {
                return Err(AlgebraError::NonTranslationCoefficient(
                    self.symbol_name(*a),
                ));
            }
            let f_shift = f.substitute(Var::D, &lambda.neg(), ctx);
            for (b, g) in y.terms() {
                if g.uses(Var::L) || g.uses(Var::M) {
                    return Err(AlgebraError::NonTranslationCoefficient(
                        self.symbol_name(*b),
                    ));
                }
                let g_shift = g.substitute(Var::D, &Poly::var(Var::D).add(&lambda), ctx);
                let factor = f_shift.mul(&g_shift, ctx);
                out = out.add(&self.table[*a][*b].scale_poly(&factor, ctx));
            }
        }
        Ok(out)
    }

    /// Skew-symmetry scan over all ordered basis pairs; returns the nonzero
    /// residuals `[a_L b] + (-1)^{|a||b|} [b_{-L-D} a]`.
    pub fn check_skew(&self) -> Vec<ResidualEntry> {
        let n = self.dim();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let mut failures: Vec<(usize, usize, String)> = pairs
            .par_iter()
            .filter_map(|&(a, b)| {
                let r = self.skew_residual(a, b);
                if r.is_zero() {
                    None
                } else {
                    Some((a, b, self.render_comb(&r)))
                }
            })
            .collect();
        failures.sort();
        failures
            .into_iter()
            .map(|(a, b, residual)| ResidualEntry {
                items: vec![self.symbol_name(a), self.symbol_name(b)],
                residual,
            })
            .collect()
    }

    pub fn skew_residual(&self, a: usize, b: usize) -> LinComb {
        let ctx = &self.ctx;
        let flipped_var = Poly::var(Var::L).neg().sub(&Poly::var(Var::D));
        let mirrored = self.table[b][a].map_polys(|p| p.substitute(Var::L, &flipped_var, ctx));
        let signed = if Parity::koszul_negative(self.parity(a), self.parity(b)) {
            mirrored.neg()
        } else {
            mirrored
        };
        self.table[a][b].add(&signed)
    }

    /// Jacobi scan over all ordered basis triples; returns nonzero residuals
    /// of `[a_L [b_M c]] - [[a_L b]_{L+M} c] - (-1)^{|a||b|} [b_M [a_L c]]`.
    pub fn check_jacobi(&self) -> Vec<ResidualEntry> {
        let n = self.dim();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .collect();
        let mut failures: Vec<(usize, usize, usize, String)> = triples
            .par_iter()
            .filter_map(|&(a, b, c)| {
                let r = self.jacobi_residual(a, b, c);
                if r.is_zero() {
                    None
                } else {
                    Some((a, b, c, self.render_comb(&r)))
                }
            })
            .collect();
        failures.sort();
        failures
            .into_iter()
            .map(|(a, b, c, residual)| ResidualEntry {
                items: vec![
                    self.symbol_name(a),
                    self.symbol_name(b),
                    self.symbol_name(c),
                ],
                residual,
            })
            .collect()
    }

    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize) -> LinComb {
        let ctx = &self.ctx;
        let lambda = Poly::var(Var::L);
        let mu = Poly::var(Var::M);
        let lambda_mu = lambda.add(&mu);

        // [a_L [b_M c]]: the inner bracket in M, then the outer in L with the
        // inner coefficient shifted by D -> D + L.
        let mut lhs = LinComb::zero();
        let inner_bc = self.table[b][c].map_polys(|p| p.substitute(Var::L, &mu, ctx));
        for (d, h) in inner_bc.terms() {
            let shifted = h.substitute(Var::D, &Poly::var(Var::D).add(&lambda), ctx);
            lhs = lhs.add(&self.table[a][*d].scale_poly(&shifted, ctx));
        }

        // [[a_L b]_{L+M} c]: outer bracket variable L+M, first-slot D -> -(L+M).
        let mut rhs1 = LinComb::zero();
        for (e, f) in self.table[a][b].terms() {
            let f_shift = f.substitute(Var::D, &lambda_mu.neg(), ctx);
            let outer = self.table[*e][c].map_polys(|p| p.substitute(Var::L, &lambda_mu, ctx));
            rhs1 = rhs1.add(&outer.scale_poly(&f_shift, ctx));
        }

        // (-1)^{|a||b|} [b_M [a_L c]].
        let mut rhs2 = LinComb::zero();
        for (d, g) in self.table[a][c].terms() {
            let g_shift = g.substitute(Var::D, &Poly::var(Var::D).add(&mu), ctx);
            let outer = self.table[b][*d].map_polys(|p| p.substitute(Var::L, &mu, ctx));
            rhs2 = rhs2.add(&outer.scale_poly(&g_shift, ctx));
        }
        if Parity::koszul_negative(self.parity(a), self.parity(b)) {
            rhs2 = rhs2.neg();
        }

        lhs.sub(&rhs1).sub(&rhs2)
    }

    /// All nonzero k-products `a_(k) b` as elements with `D` coefficients.
    pub fn k_products(&self, a: usize, b: usize) -> Vec<(u32, LinComb)> {
        let entry = &self.table[a][b];
        let max_k = entry
            .terms()
            .map(|(_, p)| p.max_deg(Var::L))
            .max()
            .unwrap_or(0);
        let mut out = Vec::new();
        for k in 0..=max_k {
            let mut lc = LinComb::zero();
            for (id, p) in entry.terms() {
                lc.add_term(*id, p.extract_divided(Var::L, k, &self.ctx));
            }
            if !lc.is_zero() {
                out.push((k, lc));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::affine_dl;

    /// A deliberately tiny hand-rolled current-algebra-like table used to
    /// exercise validation paths without the catalog.
    fn toy() -> Algebra {
        let ctx = FieldContext::from_int(1).unwrap();
        let symbols = vec![SymbolInfo {
            family: "L".into(),
            index: 0,
            parity: Parity::Even,
            degree: Some(0),
        }];
        let ll = LinComb::single(
            0,
            affine_dl(Scalar::from_int(1), Scalar::from_int(2), Scalar::zero()),
        );
        Algebra::new(
            ctx,
            "toy".into(),
            AlgebraKind::Custom,
            symbols,
            vec![("L0".into(), "L0".into(), ll)],
        )
        .unwrap()
    }

    #[test]
    fn toy_passes_axioms() {
        let a = toy();
        assert!(a.check_skew().is_empty());
        assert!(a.check_jacobi().is_empty());
    }

    #[test]
    fn sesquilinearity_by_construction() {
        let a = toy();
        // [dL0 _L L0] = -L [L0 _L L0]
        let x = a.element("L0", Poly::var(Var::D)).unwrap();
        let y = a.element("L0", Poly::one()).unwrap();
        let got = a.bracket_elements(&x, &y).unwrap();
        let base = a.bracket_elements(&y, &y).unwrap();
        let expected = base.scale_poly(&Poly::var(Var::L).neg(), &a.ctx);
        assert_eq!(got, expected);
        // [L0 _L dL0] = (D+L) [L0 _L L0]
        let got = a.bracket_elements(&y, &x).unwrap();
        let shift = Poly::var(Var::D).add(&Poly::var(Var::L));
        assert_eq!(got, base.scale_poly(&shift, &a.ctx));
    }

    #[test]
    fn parity_validation_rejects_bad_entry() {
        let ctx = FieldContext::from_int(1).unwrap();
        let symbols = vec![
            SymbolInfo {
                family: "L".into(),
                index: 0,
                parity: Parity::Even,
                degree: None,
            },
            SymbolInfo {
                family: "G".into(),
                index: 0,
                parity: Parity::Odd,
                degree: None,
            },
        ];
        let bad = LinComb::single(1, Poly::one());
        let err = Algebra::new(
            ctx,
            "bad".into(),
            AlgebraKind::Custom,
            symbols,
            vec![("L0".into(), "L0".into(), bad)],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::ParityHomogeneity { .. }));
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        let a = toy();
        assert!(matches!(
            a.element("J0", Poly::one()),
            Err(AlgebraError::UnknownSymbol(_))
        ));
    }
}
