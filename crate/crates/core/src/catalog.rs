//! Constructors for the catalog algebras and the structural embedding
//! checks between them.
//!
//! The Block-type family at parameter `p` has basis `{L_i, J_i, G+_i, G-_i}`
//! and carries a grading by the index; the quotient by all indices above a
//! cutoff is again a superalgebra because the grading is positive. The
//! finite members `k(n)` are the quotients at `p = -n`, and the rank-4
//! member is the N=2 superalgebra in a rescaled basis.

use crate::conformal::{Algebra, AlgebraError, AlgebraKind, LinComb, Parity, ResidualEntry, SymbolInfo};
use crate::hermite::{hermite_form, HermiteBasis, PolyVec};
use crate::poly::{Poly, Var};
use crate::scalar::{rat, rat_from, FieldContext, GaussRat, Rat, Scalar, ScalarError};
use crate::upoly::UPoly;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Invalid(String),
}

fn g(n: i64) -> GaussRat {
    GaussRat::from_int(n)
}

fn gr(r: Rat) -> GaussRat {
    GaussRat::from_rat(r)
}

/// `a*D + b*L` with Gaussian-rational coefficients.
fn dl(a: GaussRat, b: GaussRat) -> Poly {
    let mut p = Poly::monomial(Var::D, 1, Scalar::from_gauss(&a));
    p = p.add(&Poly::monomial(Var::L, 1, Scalar::from_gauss(&b)));
    p
}

fn constant(c: GaussRat) -> Poly {
    Poly::constant(Scalar::from_gauss(&c))
}

/// The Block-type quotient at parameter `p` with basis indices `0..=cutoff`.
///
/// Brackets whose output index exceeds the cutoff are zero; this is the
/// graded quotient, so all axioms hold exactly.
pub fn kb_quotient(p: &GaussRat, cutoff: u32) -> Result<Algebra, CatalogError> {
    let ctx = FieldContext::new(p.clone())?;
    let mut symbols = Vec::new();
    for i in 0..=cutoff {
        for (family, parity) in [
            ("L", Parity::Even),
            ("J", Parity::Even),
            ("G+", Parity::Odd),
            ("G-", Parity::Odd),
        ] {
            symbols.push(SymbolInfo {
                family: family.to_string(),
                index: i,
                parity,
                degree: Some(i as i64),
            });
        }
    }

    let mut entries: Vec<(String, String, LinComb)> = Vec::new();
    let mut push = |a: String, b: String, value: Vec<(String, Poly)>, alg_symbols: &[SymbolInfo]| {
        let mut lc = LinComb::zero();
        for (name, poly) in value {
            let id = alg_symbols
                .iter()
                .position(|s| s.name() == name)
                .expect("catalog symbol");
            lc.add_term(id, poly);
        }
        entries.push((a, b, lc));
    };

    let half = rat(1, 2);
    let three_half = rat(3, 2);
    for i in 0..=cutoff {
        for j in 0..=cutoff {
            if i + j > cutoff {
                continue;
            }
            let (gi, gj) = (g(i as i64), g(j as i64));
            let ip = gi.add(p); // i + p
            let ij = gi.add(&gj); // i + j
            let out = |f: &str| format!("{f}{}", i + j);

            // [L_i, L_j] = ((i+p) D + (i+j+2p) L) L_{i+j}
            push(
                format!("L{i}"),
                format!("L{j}"),
                vec![(out("L"), dl(ip.clone(), ij.add(p).add(p)))],
                &symbols,
            );
            // [L_i, J_j] = ((i+p) D + (i+j+p) L) J_{i+j}
            push(
                format!("L{i}"),
                format!("J{j}"),
                vec![(out("J"), dl(ip.clone(), ij.add(p)))],
                &symbols,
            );
            // [J_j, L_i] = (j D + (i+j+p) L) J_{i+j}
            push(
                format!("J{j}"),
                format!("L{i}"),
                vec![(out("J"), dl(gj.clone(), ij.add(p)))],
                &symbols,
            );
            let three_half_p = p.mul(&gr(three_half.clone()));
            for sign in ["+", "-"] {
                // [L_i, G±_j] = ((i+p) D + (i+j+3p/2) L) G±_{i+j}
                push(
                    format!("L{i}"),
                    format!("G{sign}{j}"),
                    vec![(out(&format!("G{sign}")), dl(ip.clone(), ij.add(&three_half_p)))],
                    &symbols,
                );
                // [G±_j, L_i] = ((j+p/2) D + (i+j+3p/2) L) G±_{i+j}
                push(
                    format!("G{sign}{j}"),
                    format!("L{i}"),
                    vec![(
                        out(&format!("G{sign}")),
                        dl(gj.add(&p.mul(&gr(half.clone()))), ij.add(&three_half_p)),
                    )],
                    &symbols,
                );
            }
            // [J_i, G±_j] = ±G±_{i+j}, [G±_j, J_i] = ∓G±_{i+j}
            push(
                format!("J{i}"),
                format!("G+{j}"),
                vec![(out("G+"), constant(g(1)))],
                &symbols,
            );
            push(
                format!("J{i}"),
                format!("G-{j}"),
                vec![(out("G-"), constant(g(-1)))],
                &symbols,
            );
            push(
                format!("G+{j}"),
                format!("J{i}"),
                vec![(out("G+"), constant(g(-1)))],
                &symbols,
            );
            push(
                format!("G-{j}"),
                format!("J{i}"),
                vec![(out("G-"), constant(g(1)))],
                &symbols,
            );
            // [G+_i, G-_j] = ((2i+p) D + 2(i+j+p) L) J_{i+j} + 2 L_{i+j}
            let two_ijp = ij.add(p).mul(&g(2));
            push(
                format!("G+{i}"),
                format!("G-{j}"),
                vec![
                    (out("J"), dl(g(2 * i as i64).add(p), two_ijp.clone())),
                    (out("L"), constant(g(2))),
                ],
                &symbols,
            );
            // [G-_i, G+_j] = (-(2i+p) D - 2(i+j+p) L) J_{i+j} + 2 L_{i+j}
            push(
                format!("G-{i}"),
                format!("G+{j}"),
                vec![
                    (out("J"), dl(g(2 * i as i64).add(p).neg(), two_ijp.neg())),
                    (out("L"), constant(g(2))),
                ],
                &symbols,
            );
        }
    }

    Ok(Algebra::new(
        ctx,
        format!("kb(p={p})[{cutoff}]"),
        AlgebraKind::BlockQuotient {
            p: p.clone(),
            cutoff,
        },
        symbols,
        entries,
    )?)
}

/// The finite member `k(n)`, i.e. the quotient of the family at `p = -n`
/// with cutoff `n`.
pub fn finite_block(n: u32) -> Result<Algebra, CatalogError> {
    if n == 0 {
        return Err(CatalogError::Invalid("k(n) requires n >= 1".into()));
    }
    let mut alg = kb_quotient(&g(-(n as i64)), n)?;
    alg.label = format!("k({n})");
    Ok(alg)
}

/// The rank-4 N=2 superalgebra in the rescaled basis `{L, J, G+, G-}`.
pub fn n2_algebra(p: &GaussRat) -> Result<Algebra, CatalogError> {
    let ctx = FieldContext::new(p.clone())?;
    let symbols: Vec<SymbolInfo> = [
        ("L", Parity::Even),
        ("J", Parity::Even),
        ("G+", Parity::Odd),
        ("G-", Parity::Odd),
    ]
    .into_iter()
    .map(|(family, parity)| SymbolInfo {
        family: family.to_string(),
        index: 0,
        parity,
        degree: Some(0),
    })
    .collect();

    let id = |name: &str| {
        symbols
            .iter()
            .position(|s| s.name() == name)
            .expect("n2 symbol")
    };
    let one = |name: &str, p: Poly| LinComb::single(id(name), p);
    let entries = vec![
        ("L0", "L0", one("L0", dl(g(1), g(2)))),
        ("L0", "J0", one("J0", dl(g(1), g(1)))),
        ("J0", "L0", one("J0", dl(g(0), g(1)))),
        ("L0", "G+0", one("G+0", dl(g(1), gr(rat(3, 2))))),
        ("L0", "G-0", one("G-0", dl(g(1), gr(rat(3, 2))))),
        ("G+0", "L0", one("G+0", dl(gr(rat(1, 2)), gr(rat(3, 2))))),
        ("G-0", "L0", one("G-0", dl(gr(rat(1, 2)), gr(rat(3, 2))))),
        ("J0", "G+0", one("G+0", constant(g(1)))),
        ("J0", "G-0", one("G-0", constant(g(-1)))),
        ("G+0", "J0", one("G+0", constant(g(-1)))),
        ("G-0", "J0", one("G-0", constant(g(1)))),
        ("G+0", "G-0", {
            let mut lc = one("J0", dl(g(1), g(2)));
            lc.add_term(id("L0"), constant(g(2)));
            lc
        }),
        ("G-0", "G+0", {
            let mut lc = one("J0", dl(g(-1), g(-2)));
            lc.add_term(id("L0"), constant(g(2)));
            lc
        }),
    ]
    .into_iter()
    .map(|(a, b, v)| (a.to_string(), b.to_string(), v))
    .collect();

    Ok(Algebra::new(
        ctx,
        format!("k2(p={p})"),
        AlgebraKind::N2 { p: p.clone() },
        symbols,
        entries,
    )?)
}

/// Verifies that a symbol-wise map `src -> dst` intertwines the brackets:
/// `phi([a_L b]) = [phi(a)_L phi(b)]` for every ordered basis pair.
///
/// `images[k]` is the image of source symbol `k` as an element of `dst`
/// (coefficients polynomials in `D`).
pub fn hom_check(src: &Algebra, dst: &Algebra, images: &[LinComb]) -> Result<Vec<ResidualEntry>, CatalogError> {
    if images.len() != src.dim() {
        return Err(CatalogError::Invalid(
            "one image per source symbol required".into(),
        ));
    }
    let ctx = &dst.ctx;
    let mut failures = Vec::new();
    for a in 0..src.dim() {
        for b in 0..src.dim() {
            let rhs = dst.bracket_elements(&images[a], &images[b])?;
            let mut lhs = LinComb::zero();
            for (c, h) in src.table(a, b).terms() {
                lhs = lhs.add(&images[*c].map_polys(|gpoly| gpoly.mul(h, ctx)));
            }
            let residual = rhs.sub(&lhs);
            if !residual.is_zero() {
                failures.push(ResidualEntry {
                    items: vec![src.symbol_name(a), src.symbol_name(b)],
                    residual: dst.render_comb(&residual),
                });
            }
        }
    }
    Ok(failures)
}

/// Checks the rescaling map from the N=2 algebra into the degree-zero part
/// of the Block quotient: `L -> (1/p) L_0`, `J -> J_0`, `G± -> (1/sqrt p) G±_0`.
pub fn n2_rescale_check(p: &GaussRat, cutoff: u32) -> Result<Vec<ResidualEntry>, CatalogError> {
    let src = n2_algebra(p)?;
    let dst = kb_quotient(p, cutoff)?;
    let ctx = &dst.ctx;
    let inv_p = Scalar::from_gauss(
        &p.inv()
            .ok_or_else(|| CatalogError::Invalid("p must be nonzero".into()))?,
    );
    let inv_sqrt_p = Scalar::sqrt_p(ctx).inv(ctx)?;
    let image = |name: &str, c: Scalar| -> Result<LinComb, CatalogError> {
        Ok(LinComb::single(
            dst.symbol_id(name)?,
            Poly::constant(c),
        ))
    };
    let images = vec![
        image("L0", inv_p)?,
        image("J0", Scalar::one())?,
        image("G+0", inv_sqrt_p.clone())?,
        image("G-0", inv_sqrt_p)?,
    ];
    hom_check(&src, &dst, &images)
}

/// Verifies the index-dilation embedding of the family at `p` into the
/// family at `n*p`: `L_i -> (1/n) L'_{ni}`, `J_i -> J'_{ni}`,
/// `G±_i -> n^{-1/2} G±'_{ni}`.
///
/// The square root of `n` cancels structurally: for every bracket the
/// combined weight difference is an integer power of `n`, so the residuals
/// are computed exactly in the target field without adjoining `sqrt(n)`.
pub fn scaling_embedding_check(
    p: &GaussRat,
    n: u32,
    cutoff: u32,
) -> Result<Vec<ResidualEntry>, CatalogError> {
    if n == 0 {
        return Err(CatalogError::Invalid("dilation factor must be >= 1".into()));
    }
    let src = kb_quotient(p, cutoff)?;
    let np = p.mul(&g(n as i64));
    let dst = kb_quotient(&np, n * cutoff)?;
    let ctx = &dst.ctx;

    // Per family: rational prefactor and the exponent of n^{1/2}.
    let weight = |family: &str| -> (Rat, i32) {
        match family {
            "L" => (rat(1, n as i64), 0),
            "J" => (rat_from(1), 0),
            _ => (rat_from(1), -1),
        }
    };

    let mut failures = Vec::new();
    for a in 0..src.dim() {
        for b in 0..src.dim() {
            let sa = &src.symbols()[a];
            let sb = &src.symbols()[b];
            let (ca, wa) = weight(&sa.family);
            let (cb, wb) = weight(&sb.family);
            let a_dst = dst.symbol_id(&format!("{}{}", sa.family, n * sa.index))?;
            let b_dst = dst.symbol_id(&format!("{}{}", sb.family, n * sb.index))?;

            let mut residual = LinComb::zero();
            // Image side: c_a c_b n^{(wa+wb-wz)/2} * dst bracket coefficient.
            for (z, h) in dst.table(a_dst, b_dst).terms() {
                let sz = &dst.symbols()[*z];
                let (_, wz) = weight(&sz.family);
                let halves = wa + wb - wz;
                assert!(halves % 2 == 0, "weight mismatch is structural");
                let n_rat = rat_from(n as i64);
                let mut factor = ca.clone() * cb.clone();
                let mut e = halves / 2;
                while e > 0 {
                    factor = factor * n_rat.clone();
                    e -= 1;
                }
                while e < 0 {
                    factor = factor / n_rat.clone();
                    e += 1;
                }
                residual.add_term(*z, h.scale(&Scalar::from_rat(factor), ctx));
            }
            // Source side: the mapped bracket, subtracted.
            for (x, h) in src.table(a, b).terms() {
                let sx = &src.symbols()[*x];
                let (cx, _) = weight(&sx.family);
                let x_dst = dst.symbol_id(&format!("{}{}", sx.family, n * sx.index))?;
                residual.add_term(
                    x_dst,
                    h.scale(&Scalar::from_rat(cx), ctx).neg(),
                );
            }
            if !residual.is_zero() {
                failures.push(ResidualEntry {
                    items: vec![src.symbol_name(a), src.symbol_name(b)],
                    residual: dst.render_comb(&residual),
                });
            }
        }
    }
    Ok(failures)
}

/// Report from a span-closure scan.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub closed: bool,
    pub failures: Vec<ResidualEntry>,
    /// Rendered brackets of the spanning elements, for the record.
    pub induced: Vec<(String, String, String)>,
}

/// The lambda-power slices of a bracket value, as vectors over the basis.
fn lambda_slices(alg: &Algebra, lc: &LinComb) -> Vec<PolyVec> {
    let max_k = lc.terms().map(|(_, p)| p.max_deg(Var::L)).max().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=max_k {
        let mut v = PolyVec::zero(alg.dim());
        let mut nonzero = false;
        for (id, p) in lc.terms() {
            let slice = p.coeff_of(Var::L, k);
            if !slice.is_zero() {
                v.0[*id] = UPoly::from_poly(&slice).expect("bracket coefficients are D,L only");
                nonzero = true;
            }
        }
        if nonzero {
            out.push(v);
        }
    }
    out
}

/// Checks that the `D`-span of `gens` is closed under all pairwise brackets.
pub fn span_closure_check(
    alg: &Algebra,
    gens: &[(String, LinComb)],
) -> Result<SpanReport, CatalogError> {
    let ctx = &alg.ctx;
    let width = alg.dim();
    let rows: Vec<PolyVec> = gens
        .iter()
        .map(|(_, e)| {
            let mut v = PolyVec::zero(width);
            for (id, p) in e.terms() {
                v.0[*id] = UPoly::from_poly(p).expect("generator coefficients are D only");
            }
            v
        })
        .collect();
    let basis: HermiteBasis = hermite_form(&rows, width, ctx);

    let mut failures = Vec::new();
    let mut induced = Vec::new();
    for (na, ea) in gens {
        for (nb, eb) in gens {
            let bracket = alg.bracket_elements(ea, eb)?;
            induced.push((na.clone(), nb.clone(), alg.render_comb(&bracket)));
            for slice in lambda_slices(alg, &bracket) {
                if !basis.contains(&slice, ctx) {
                    let mut escaped = LinComb::zero();
                    for (id, p) in slice.0.iter().enumerate() {
                        escaped.add_term(id, p.to_poly());
                    }
                    failures.push(ResidualEntry {
                        items: vec![na.clone(), nb.clone()],
                        residual: alg.render_comb(&escaped),
                    });
                }
            }
        }
    }
    Ok(SpanReport {
        closed: failures.is_empty(),
        failures,
        induced,
    })
}

/// Checks that the span of `{L_i, G+_i + G-_i}` inside the Block quotient is
/// bracket-closed (the N=1 diagonal subalgebra).
pub fn sb_span_check(p: &GaussRat, cutoff: u32) -> Result<SpanReport, CatalogError> {
    let alg = kb_quotient(p, cutoff)?;
    let mut gens = Vec::new();
    for i in 0..=cutoff {
        gens.push((
            format!("L{i}"),
            alg.element(&format!("L{i}"), Poly::one())?,
        ));
        let mut h = alg.element(&format!("G+{i}"), Poly::one())?;
        h = h.add(&alg.element(&format!("G-{i}"), Poly::one())?);
        gens.push((format!("G+{i}+G-{i}"), h));
    }
    span_closure_check(&alg, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kb_quotient_shape() {
        // cutoff 0 has four symbols; cutoff 2 has twelve, graded by index.
        let a = kb_quotient(&g(5), 0).unwrap();
        assert_eq!(a.dim(), 4);
        let a = kb_quotient(&g(3), 2).unwrap();
        assert_eq!(a.dim(), 12);
        for s in a.symbols() {
            assert_eq!(s.degree, Some(s.index as i64));
        }
    }

    #[test]
    fn kb_bracket_values() {
        let a = kb_quotient(&g(5), 1).unwrap();
        // [L0 _L L0] = (p D + 2p L) L0
        let l0 = a.symbol_id("L0").unwrap();
        let expected = LinComb::single(l0, dl(g(5), g(10)));
        assert_eq!(a.table(l0, l0), &expected);
        // [J0 _L J0] = 0
        let j0 = a.symbol_id("J0").unwrap();
        assert!(a.table(j0, j0).is_zero());
        // Sesquilinearity through elements: [dL0 _L L0] = -L (p D + 2p L) L0.
        let x = a.element("L0", Poly::var(Var::D)).unwrap();
        let y = a.element("L0", Poly::one()).unwrap();
        let got = a.bracket_elements(&x, &y).unwrap();
        let expected = LinComb::single(
            l0,
            dl(g(5), g(10)).mul(&Poly::var(Var::L).neg(), &a.ctx),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn kb_passes_axioms_for_sample_parameters() {
        for (p, cutoff) in [(g(-2), 2), (gr(rat(1, 2)), 2), (g(3), 1)] {
            let a = kb_quotient(&p, cutoff).unwrap();
            assert!(a.check_skew().is_empty(), "skew failed for {}", a.label);
            assert!(a.check_jacobi().is_empty(), "jacobi failed for {}", a.label);
        }
    }

    #[test]
    fn finite_block_matches_quotient() {
        let k2 = finite_block(2).unwrap();
        let q = kb_quotient(&g(-2), 2).unwrap();
        assert_eq!(k2.dim(), q.dim());
        for a in 0..k2.dim() {
            for b in 0..k2.dim() {
                assert_eq!(k2.table(a, b), q.table(a, b));
            }
        }
        // [L1 _L L1] = 0 in k(1): output index out of range.
        let k1 = finite_block(1).unwrap();
        let l1 = k1.symbol_id("L1").unwrap();
        assert!(k1.table(l1, l1).is_zero());
        assert_eq!(k1.dim(), 8);
        assert_eq!(finite_block(2).unwrap().dim(), 12);
    }

    #[test]
    fn n2_table() {
        let a = n2_algebra(&g(2)).unwrap();
        let l = a.symbol_id("L0").unwrap();
        assert_eq!(a.table(l, l), &LinComb::single(l, dl(g(1), g(2))));
        let gp = a.symbol_id("G+0").unwrap();
        let gm = a.symbol_id("G-0").unwrap();
        let j = a.symbol_id("J0").unwrap();
        let mut expected = LinComb::single(j, dl(g(1), g(2)));
        expected.add_term(l, constant(g(2)));
        assert_eq!(a.table(gp, gm), &expected);
        assert!(a.check_skew().is_empty());
        assert!(a.check_jacobi().is_empty());
    }

    #[test]
    fn rescale_is_a_homomorphism() {
        assert!(n2_rescale_check(&g(2), 3).unwrap().is_empty());
        assert!(n2_rescale_check(&gr(rat(1, 2)), 1).unwrap().is_empty());
    }

    #[test]
    fn rescale_detects_wrong_map() {
        // Mapping G- with the wrong sign breaks the (G+, G-) bracket.
        let p = g(2);
        let src = n2_algebra(&p).unwrap();
        let dst = kb_quotient(&p, 1).unwrap();
        let ctx = &dst.ctx;
        let inv_p = Scalar::from_gauss(&p.inv().unwrap());
        let inv_sqrt_p = Scalar::sqrt_p(ctx).inv(ctx).unwrap();
        let images = vec![
            LinComb::single(dst.symbol_id("L0").unwrap(), Poly::constant(inv_p)),
            LinComb::single(dst.symbol_id("J0").unwrap(), Poly::one()),
            LinComb::single(
                dst.symbol_id("G+0").unwrap(),
                Poly::constant(inv_sqrt_p.clone()),
            ),
            LinComb::single(
                dst.symbol_id("G-0").unwrap(),
                Poly::constant(inv_sqrt_p.neg()),
            ),
        ];
        let failures = hom_check(&src, &dst, &images).unwrap();
        assert!(failures
            .iter()
            .any(|f| f.items == vec!["G+0".to_string(), "G-0".to_string()]));
    }

    #[test]
    fn scaling_embedding_examples() {
        assert!(scaling_embedding_check(&g(1), 2, 2).unwrap().is_empty());
        assert!(scaling_embedding_check(&g(-1), 3, 1).unwrap().is_empty());
        // n = 1 is the identity map.
        assert!(scaling_embedding_check(&g(2), 1, 2).unwrap().is_empty());
    }

    #[test]
    fn diagonal_span_closes() {
        let report = sb_span_check(&g(1), 3).unwrap();
        assert!(report.closed);
        // The bracket of the diagonal odd elements lands on L alone.
        let hh = report
            .induced
            .iter()
            .find(|(a, b, _)| a == "G+0+G-0" && b == "G+0+G-0")
            .unwrap();
        assert_eq!(hh.2, "[(4)] L0");
        let report = sb_span_check(&g(-2), 2).unwrap();
        assert!(report.closed);
    }

    #[test]
    fn span_check_catches_escape() {
        // {L_i, G+_i, G-_0}: the (G+0, G-0) bracket leaves the span via J0.
        let alg = kb_quotient(&g(1), 2).unwrap();
        let mut gens = Vec::new();
        for i in 0..=2u32 {
            gens.push((
                format!("L{i}"),
                alg.element(&format!("L{i}"), Poly::one()).unwrap(),
            ));
            gens.push((
                format!("G+{i}"),
                alg.element(&format!("G+{i}"), Poly::one()).unwrap(),
            ));
        }
        gens.push(("G-0".into(), alg.element("G-0", Poly::one()).unwrap()));
        let report = span_closure_check(&alg, &gens).unwrap();
        assert!(!report.closed);
        assert!(report
            .failures
            .iter()
            .any(|f| f.items == vec!["G+0".to_string(), "G-0".to_string()]));
    }
}
