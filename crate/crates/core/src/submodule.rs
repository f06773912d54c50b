//! Submodule machinery over the translation ring: generated-submodule
//! closure, quotient construction, isomorphism certificates and a
//! randomized reducibility probe.
//!
//! A submodule is carried as a canonical echelon basis of vectors over the
//! module's generators. Closure alternates action sweeps with re-reduction
//! until the basis stabilizes; the pivot-degree vector drops strictly on
//! every proper growth step, so the sweep terminates.

use crate::conformal::{LinComb, Parity, ResidualEntry};
use crate::hermite::{hermite_form, HermiteBasis, PolyVec};
use crate::module::{Generator, Module, ModuleError};
use crate::poly::{Poly, Var};
use crate::scalar::{rat_from, FieldContext, Scalar};
use crate::upoly::UPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubmoduleError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("row mixes parities and cannot name a homogeneous generator")]
    MixedParityRow,
    #[error("unsupported quotient shape: {0}")]
    UnsupportedQuotientShape(String),
    #[error("submodule is not action-closed: {0}")]
    NotClosed(String),
    #[error("quotient column `{0}` does not act trivially")]
    NonTrivialTorsionAction(String),
}

/// Interprets a vector as a module element.
pub fn vec_to_element(v: &PolyVec) -> LinComb {
    let mut e = LinComb::zero();
    for (g, p) in v.0.iter().enumerate() {
        e.add_term(g, p.to_poly());
    }
    e
}

/// The lambda-power slices of the action of basis symbol `s` on vector `v`.
pub fn action_slices(m: &Module, s: usize, v: &PolyVec) -> Vec<PolyVec> {
    let x = LinComb::single(s, Poly::one());
    let value = m.act(&x, &vec_to_element(v)).expect("valid ids");
    let max_k = value
        .terms()
        .map(|(_, p)| p.max_deg(Var::L))
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=max_k {
        let mut slice = PolyVec::zero(m.rank());
        let mut nonzero = false;
        for (g, p) in value.terms() {
            let c = p.coeff_of(Var::L, k);
            if !c.is_zero() {
                slice.0[*g] = UPoly::from_poly(&c).expect("action coefficients are D,L");
                nonzero = true;
            }
        }
        if nonzero {
            out.push(slice);
        }
    }
    out
}

/// Smallest action-closed submodule containing `gens`.
pub fn closure(m: &Module, gens: &[PolyVec]) -> HermiteBasis {
    let ctx = &m.algebra.ctx;
    let width = m.rank();
    let mut basis = hermite_form(gens, width, ctx);
    loop {
        if basis.is_full() {
            return basis;
        }
        let mut grew = false;
        // Acting on primitive rescalings keeps the arithmetic small; the
        // generated span is unchanged.
        let snapshot: Vec<PolyVec> = basis.rows().iter().map(PolyVec::primitive).collect();
        for s in 0..m.algebra.dim() {
            for row in &snapshot {
                for slice in action_slices(m, s, row) {
                    let slice = slice.primitive();
                    if !basis.contains(&slice, ctx) {
                        let mut rows = basis.rows().to_vec();
                        rows.push(slice);
                        basis = hermite_form(&rows, width, ctx);
                        grew = true;
                        if basis.is_full() {
                            return basis;
                        }
                    }
                }
            }
        }
        if !grew {
            return basis;
        }
    }
}

/// One further sweep adds nothing exactly when the basis is action-closed.
pub fn is_action_closed(m: &Module, basis: &HermiteBasis) -> bool {
    let ctx = &m.algebra.ctx;
    for s in 0..m.algebra.dim() {
        for row in basis.rows() {
            for slice in action_slices(m, s, row) {
                if !basis.contains(&slice, ctx) {
                    return false;
                }
            }
        }
    }
    true
}

fn row_parity(m: &Module, row: &PolyVec) -> Result<Parity, SubmoduleError> {
    let mut parity = None;
    for (g, p) in row.0.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let gp = m.generators()[g].parity;
        match parity {
            None => parity = Some(gp),
            Some(q) if q == gp => {}
            _ => return Err(SubmoduleError::MixedParityRow),
        }
    }
    parity.ok_or(SubmoduleError::MixedParityRow)
}

/// Presents an action-closed submodule as a module in its own right, with
/// one generator per basis row and actions re-expressed through membership
/// certificates.
pub fn submodule_as_module(
    m: &Module,
    basis: &HermiteBasis,
    label: String,
) -> Result<Module, SubmoduleError> {
    let ctx = &m.algebra.ctx;
    let generators: Vec<Generator> = basis
        .rows()
        .iter()
        .enumerate()
        .map(|(k, row)| {
            Ok(Generator {
                name: format!("w{k}"),
                parity: row_parity(m, row)?,
            })
        })
        .collect::<Result<_, SubmoduleError>>()?;
    let mut entries = Vec::new();
    for s in 0..m.algebra.dim() {
        for (k, row) in basis.rows().iter().enumerate() {
            let mut value = LinComb::zero();
            for (lam, slice) in slices_with_lambda(m, s, row) {
                let cert = basis.membership(&slice, ctx).ok_or_else(|| {
                    SubmoduleError::NotClosed(format!(
                        "action of {} on row {k} leaves the span",
                        m.algebra.symbol_name(s)
                    ))
                })?;
                for (j, c) in cert.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    value.add_term(
                        j,
                        c.to_poly().mul(&Poly::monomial(Var::L, lam, Scalar::one()), ctx),
                    );
                }
            }
            if !value.is_zero() {
                entries.push((
                    m.algebra.symbol_name(s),
                    format!("w{k}"),
                    value,
                ));
            }
        }
    }
    Ok(Module::new(
        m.algebra.clone(),
        label,
        None,
        generators,
        entries,
    )?)
}

fn slices_with_lambda(m: &Module, s: usize, v: &PolyVec) -> Vec<(u32, PolyVec)> {
    let x = LinComb::single(s, Poly::one());
    let value = m.act(&x, &vec_to_element(v)).expect("valid ids");
    let max_k = value
        .terms()
        .map(|(_, p)| p.max_deg(Var::L))
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=max_k {
        let mut slice = PolyVec::zero(m.rank());
        let mut nonzero = false;
        for (g, p) in value.terms() {
            let c = p.coeff_of(Var::L, k);
            if !c.is_zero() {
                slice.0[*g] = UPoly::from_poly(&c).expect("action coefficients are D,L");
                nonzero = true;
            }
        }
        if nonzero {
            out.push((k, slice));
        }
    }
    out
}

/// Determinant by Laplace expansion; fine at the ranks that occur here.
pub fn det(matrix: &[Vec<UPoly>], ctx: &FieldContext) -> UPoly {
    let n = matrix.len();
    if n == 0 {
        return UPoly::one();
    }
    if n == 1 {
        return matrix[0][0].clone();
    }
    let mut acc = UPoly::zero();
    for (j, top) in matrix[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<UPoly>> = matrix[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = top.mul(&det(&minor, ctx), ctx);
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// A one-dimensional quotient piece: the translation generator acts by the
/// eigenvalue and the whole algebra acts by zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialSummand {
    pub eigenvalue: Scalar,
    pub parity: Parity,
}

impl TrivialSummand {
    pub fn describe(&self) -> String {
        format!("trivial(eigenvalue={}, {})", self.eigenvalue, self.parity)
    }
}

#[derive(Debug)]
pub enum QuotientOutcome {
    Zero,
    Free(Module),
    Trivial(Vec<TrivialSummand>),
}

/// Solves `c * rows_C = v_C` by Cramer's rule; `rows_C` must have constant
/// nonzero determinant.
fn solve_against(
    rows: &[PolyVec],
    cols: &[usize],
    v: &PolyVec,
    ctx: &FieldContext,
) -> Vec<UPoly> {
    let n = rows.len();
    // Transposed system: M x = b with M[i][j] = rows[j].0[cols[i]].
    let m: Vec<Vec<UPoly>> = cols
        .iter()
        .map(|&c| rows.iter().map(|r| r.0[c].clone()).collect())
        .collect();
    let b: Vec<UPoly> = cols.iter().map(|&c| v.0[c].clone()).collect();
    let d = det(&m, ctx);
    debug_assert!(d.is_unit());
    let d_inv = d
        .leading()
        .expect("unit determinant")
        .inv(ctx)
        .expect("unit determinant");
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut mj = m.clone();
        for (i, row) in mj.iter_mut().enumerate() {
            row[j] = b[i].clone();
        }
        out.push(det(&mj, ctx).scale(&d_inv, ctx));
    }
    out
}

/// Quotient of the free module by an action-closed submodule.
///
/// Two shapes are supported: a free quotient, recognized by a unit maximal
/// minor of the basis matrix, and a pure torsion quotient where every
/// non-unit pivot is linear and confined to its own column. Anything else
/// is rejected.
pub fn quotient_module(m: &Module, basis: &HermiteBasis) -> Result<QuotientOutcome, SubmoduleError> {
    let ctx = &m.algebra.ctx;
    let width = m.rank();
    let rank = basis.rank();
    if !is_action_closed(m, basis) {
        return Err(SubmoduleError::NotClosed("quotient base".into()));
    }
    if rank == width && (0..rank).all(|k| basis.pivot_poly(k).is_unit()) {
        return Ok(QuotientOutcome::Zero);
    }

    // Free quotient: a column subset of size `rank` with unit determinant.
    let mut unit_cols: Option<Vec<usize>> = None;
    if rank > 0 {
        for combo in column_subsets(width, rank) {
            let mat: Vec<Vec<UPoly>> = basis
                .rows()
                .iter()
                .map(|r| combo.iter().map(|&c| r.0[c].clone()).collect())
                .collect();
            if det(&mat, ctx).is_unit() {
                unit_cols = Some(combo);
                break;
            }
        }
    }
    if let Some(cols) = unit_cols {
        let complement: Vec<usize> = (0..width).filter(|c| !cols.contains(c)).collect();
        let reduce = |v: &PolyVec| -> PolyVec {
            if basis.rank() == 0 {
                return v.clone();
            }
            let coeffs = solve_against(basis.rows(), &cols, v, ctx);
            let mut out = v.clone();
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out = out.sub(&basis.rows()[k].scale(c, ctx));
                }
            }
            for &c in &cols {
                debug_assert!(out.0[c].is_zero());
            }
            out
        };
        let generators: Vec<Generator> = complement
            .iter()
            .map(|&c| m.generators()[c].clone())
            .collect();
        let mut entries = Vec::new();
        for s in 0..m.algebra.dim() {
            for (qi, &c) in complement.iter().enumerate() {
                let mut value = LinComb::zero();
                for (lam, slice) in slices_with_lambda(m, s, &PolyVec::unit(width, c)) {
                    let reduced = reduce(&slice);
                    for (j, &cc) in complement.iter().enumerate() {
                        let p = &reduced.0[cc];
                        if !p.is_zero() {
                            value.add_term(
                                j,
                                p.to_poly()
                                    .mul(&Poly::monomial(Var::L, lam, Scalar::one()), ctx),
                            );
                        }
                    }
                }
                if !value.is_zero() {
                    entries.push((
                        m.algebra.symbol_name(s),
                        m.generators()[c].name.clone(),
                        value,
                    ));
                }
                let _ = qi;
            }
        }
        let module = Module::new(
            m.algebra.clone(),
            format!("{}/submodule", m.label),
            None,
            generators,
            entries,
        )?;
        return Ok(QuotientOutcome::Free(module));
    }

    // Torsion quotient: every column pivoted; non-unit pivots linear and
    // alone in their row.
    if rank != width {
        return Err(SubmoduleError::UnsupportedQuotientShape(
            "no unit minor and unpivoted columns remain".into(),
        ));
    }
    let mut summands = Vec::new();
    for k in 0..rank {
        let pivot = basis.pivot_poly(k);
        if pivot.is_unit() {
            continue;
        }
        if pivot.deg() != Some(1) {
            return Err(SubmoduleError::UnsupportedQuotientShape(format!(
                "pivot degree {:?} at column {}",
                pivot.deg(),
                basis.pivots()[k]
            )));
        }
        let col = basis.pivots()[k];
        let row = &basis.rows()[k];
        for (c, p) in row.0.iter().enumerate() {
            if c != col && !p.is_zero() {
                return Err(SubmoduleError::UnsupportedQuotientShape(format!(
                    "linear pivot row at column {col} entangles column {c}"
                )));
            }
        }
        // D + a annihilates the class, so D acts by -a.
        let eigenvalue = pivot.coeff(0).neg();
        // Every action on this column must vanish in the quotient.
        for s in 0..m.algebra.dim() {
            for slice in action_slices(m, s, &PolyVec::unit(width, col)) {
                let (rem, _) = basis.reduce(&slice, ctx);
                if !rem.is_zero() {
                    return Err(SubmoduleError::NonTrivialTorsionAction(
                        m.generators()[col].name.clone(),
                    ));
                }
            }
        }
        summands.push(TrivialSummand {
            eigenvalue,
            parity: m.generators()[col].parity,
        });
    }
    Ok(QuotientOutcome::Trivial(summands))
}

fn column_subsets(width: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, width: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for c in start..width {
            current.push(c);
            rec(c + 1, width, size, current, out);
            current.pop();
        }
    }
    rec(0, width, size, &mut current, &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub invertible: bool,
    pub parity_ok: bool,
    pub failures: Vec<ResidualEntry>,
}

impl IsoReport {
    pub fn pass(&self) -> bool {
        self.invertible && self.parity_ok && self.failures.is_empty()
    }
}

/// Verifies that the generator-level matrix defines an isomorphism
/// `a -> b`: it must intertwine every basis action and be invertible over
/// the polynomial ring (constant nonzero determinant).
///
/// With `parity_flip` the map must flip every generator parity instead of
/// preserving it.
pub fn check_iso(
    a: &Module,
    b: &Module,
    matrix: &[Vec<UPoly>],
    parity_flip: bool,
) -> IsoReport {
    let ctx = &a.algebra.ctx;
    assert_eq!(a.algebra.dim(), b.algebra.dim(), "modules over one algebra");
    assert_eq!(matrix.len(), a.rank());
    let mut parity_ok = true;
    for (i, row) in matrix.iter().enumerate() {
        assert_eq!(row.len(), b.rank());
        for (j, entry) in row.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let want = if parity_flip {
                a.generators()[i].parity.flip()
            } else {
                a.generators()[i].parity
            };
            if b.generators()[j].parity != want {
                parity_ok = false;
            }
        }
    }
    let invertible = a.rank() == b.rank() && det(matrix, ctx).is_unit();

    let phi = |v: &LinComb| -> LinComb {
        // phi(sum_i c_i(D,L) a_i) = sum_j (sum_i c_i * m_ij) b_j
        let mut out = LinComb::zero();
        for (i, c) in v.terms() {
            for (j, entry) in matrix[*i].iter().enumerate() {
                if !entry.is_zero() {
                    out.add_term(j, c.mul(&entry.to_poly(), ctx));
                }
            }
        }
        out
    };

    let mut failures = Vec::new();
    let shift = Poly::var(Var::D).add(&Poly::var(Var::L));
    for s in 0..a.algebra.dim() {
        for i in 0..a.rank() {
            let lhs = phi(a.action(s, i));
            // s acting on phi(a_i) = sum_j m_ij(D) b_j.
            let mut rhs = LinComb::zero();
            for (j, entry) in matrix[i].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let shifted = entry.to_poly().substitute(Var::D, &shift, ctx);
                rhs = rhs.add(&b.action(s, j).scale_poly(&shifted, ctx));
            }
            let r = lhs.sub(&rhs);
            if !r.is_zero() {
                failures.push(ResidualEntry {
                    items: vec![
                        a.algebra.symbol_name(s),
                        a.generators()[i].name.clone(),
                    ],
                    residual: b.render_comb(&r),
                });
            }
        }
    }
    IsoReport {
        invertible,
        parity_ok,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    /// A proper nonzero invariant span was found.
    Reducible,
    /// No witness in the sampled budget; explicitly not a proof.
    NoWitnessFound,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub module: String,
    pub verdict: ProbeVerdict,
    pub seed: u64,
    pub trials: u32,
    pub degree_bound: u32,
    pub witness_trial: Option<u32>,
    pub witness: Option<String>,
    pub witness_closure: Option<Vec<String>>,
}

/// Random reducibility probe: closes `trials` random vectors of bounded
/// degree and reports the first proper nonzero closure.
///
/// Supports cycle deterministically through the nonempty generator subsets
/// while coefficients are drawn from a small box over the prime subfield
/// plus unit multiples of `i` and `s`, so a fixed seed fixes the outcome.
pub fn irreducibility_probe(
    m: &Module,
    degree_bound: u32,
    trials: u32,
    seed: u64,
) -> ProbeReport {
    let ctx = &m.algebra.ctx;
    let width = m.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subsets = (1u32 << width) - 1;
    for trial in 0..trials {
        let mask = (trial % subsets) + 1;
        let mut v = PolyVec::zero(width);
        let mut nonzero = false;
        for g in 0..width {
            if mask & (1 << g) == 0 {
                continue;
            }
            let mut coeffs = Vec::new();
            for _ in 0..=degree_bound {
                let mut c = Scalar::from_rat(rat_from(rng.gen_range(-3..=3)));
                c = c.add(&Scalar::i_unit().mul(
                    &Scalar::from_rat(rat_from(rng.gen_range(-3..=3))),
                    ctx,
                ));
                c = c.add(&Scalar::sqrt_p(ctx).mul(
                    &Scalar::from_rat(rat_from(rng.gen_range(-3..=3))),
                    ctx,
                ));
                coeffs.push(c);
            }
            let p = UPoly::from_coeffs(coeffs);
            if !p.is_zero() {
                nonzero = true;
            }
            v.0[g] = p;
        }
        if !nonzero {
            continue;
        }
        let basis = closure(m, &[v.clone()]);
        if !basis.is_empty() && !basis.is_full() {
            return ProbeReport {
                module: m.label.clone(),
                verdict: ProbeVerdict::Reducible,
                seed,
                trials,
                degree_bound,
                witness_trial: Some(trial),
                witness: Some(v.to_string()),
                witness_closure: Some(basis.rows().iter().map(|r| r.to_string()).collect()),
            };
        }
    }
    ProbeReport {
        module: m.label.clone(),
        verdict: ProbeVerdict::NoWitnessFound,
        seed,
        trials,
        degree_bound,
        witness_trial: None,
        witness: None,
        witness_closure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::kb_quotient;
    use crate::module::{build_family, param, Family};
    use crate::scalar::GaussRat;
    use std::sync::Arc;

    fn v1_module(delta: (i64, i64), alpha: (i64, i64), p: i64) -> Module {
        let alg = Arc::new(kb_quotient(&GaussRat::from_int(p), 1).unwrap());
        build_family(
            &Family::V1 {
                delta: param(delta.0, delta.1),
                alpha: param(alpha.0, alpha.1),
            },
            &alg,
        )
        .unwrap()
    }

    #[test]
    fn closure_of_degenerate_first_kind() {
        // At delta = 0 the span of (D + alpha) v0 closes to
        // {(D + alpha) v0, v1}.
        let m = v1_module((0, 1), (7, 1), 2);
        let ctx = &m.algebra.ctx;
        let mut gen = PolyVec::zero(2);
        gen.0[0] = UPoly::linear(Scalar::from_int(7));
        let basis = closure(&m, &[gen]);
        let expected = hermite_form(
            &[
                PolyVec(vec![UPoly::linear(Scalar::from_int(7)), UPoly::zero()]),
                PolyVec(vec![UPoly::zero(), UPoly::one()]),
            ],
            2,
            ctx,
        );
        assert_eq!(basis, expected);
        assert!(is_action_closed(&m, &basis));
    }

    #[test]
    fn closure_of_generic_generator_is_everything() {
        // delta = 1: the module is simple, so any single generator closes
        // to the full module.
        let m = v1_module((1, 1), (7, 1), 2);
        let basis = closure(&m, &[PolyVec::unit(2, 1)]);
        assert!(basis.is_full());
    }

    #[test]
    fn quotient_trivial_shape() {
        let m = v1_module((0, 1), (7, 1), 2);
        let ctx = &m.algebra.ctx;
        let basis = hermite_form(
            &[
                PolyVec(vec![UPoly::linear(Scalar::from_int(7)), UPoly::zero()]),
                PolyVec(vec![UPoly::zero(), UPoly::one()]),
            ],
            2,
            ctx,
        );
        match quotient_module(&m, &basis).unwrap() {
            QuotientOutcome::Trivial(parts) => {
                assert_eq!(parts.len(), 1);
                assert_eq!(parts[0].eigenvalue, Scalar::from_int(-7));
                assert_eq!(parts[0].parity, Parity::Even);
            }
            other => panic!("expected trivial quotient, got {other:?}"),
        }
    }

    #[test]
    fn quotient_of_full_module_is_zero() {
        let m = v1_module((1, 1), (0, 1), 2);
        let ctx = &m.algebra.ctx;
        let basis = hermite_form(&[PolyVec::unit(2, 0), PolyVec::unit(2, 1)], 2, ctx);
        assert!(matches!(
            quotient_module(&m, &basis).unwrap(),
            QuotientOutcome::Zero
        ));
    }

    #[test]
    fn submodule_isomorphism_certificate() {
        // The degenerate first-kind submodule is the parity reversal of the
        // second kind at delta 1/2 via v0 -> w1/2, v1 -> w0.
        let m = v1_module((0, 1), (7, 1), 2);
        let ctx = &m.algebra.ctx;
        let basis = closure(&m, &[{
            let mut v = PolyVec::zero(2);
            v.0[0] = UPoly::linear(Scalar::from_int(7));
            v
        }]);
        let sub = submodule_as_module(&m, &basis, "sub".into()).unwrap();
        let target = build_family(
            &Family::V2 {
                delta: param(1, 2),
                alpha: param(7, 1),
            },
            &m.algebra,
        )
        .unwrap()
        .reverse_parity();
        let matrix = vec![
            vec![UPoly::zero(), UPoly::constant(Scalar::from_ratio(1, 2))],
            vec![UPoly::one(), UPoly::zero()],
        ];
        let report = check_iso(&target, &sub, &matrix, false);
        assert!(report.pass(), "{report:?}");
        let _ = ctx;
    }

    #[test]
    fn identity_map_is_an_isomorphism() {
        let m = v1_module((1, 1), (0, 1), 2);
        let id = vec![
            vec![UPoly::one(), UPoly::zero()],
            vec![UPoly::zero(), UPoly::one()],
        ];
        assert!(check_iso(&m, &m, &id, false).pass());
        // A non-invertible matrix is reported distinctly.
        let sq = vec![
            vec![UPoly::x(), UPoly::zero()],
            vec![UPoly::zero(), UPoly::one()],
        ];
        let r = check_iso(&m, &m, &sq, false);
        assert!(!r.invertible);
    }

    #[test]
    fn probe_finds_witness_in_degenerate_module() {
        let m = v1_module((0, 1), (1, 1), 2);
        let r = irreducibility_probe(&m, 3, 50, 0);
        assert_eq!(r.verdict, ProbeVerdict::Reducible);
        // Every witness closes to the unique proper submodule.
        let expected = closure(&m, &[{
            let mut v = PolyVec::zero(2);
            v.0[0] = UPoly::linear(Scalar::from_int(1));
            v
        }]);
        let got: Vec<String> = expected.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(r.witness_closure.unwrap(), got);
    }

    #[test]
    fn probe_reports_no_witness_for_simple_module() {
        let m = v1_module((1, 1), (1, 1), 2);
        let r = irreducibility_probe(&m, 3, 50, 0);
        assert_eq!(r.verdict, ProbeVerdict::NoWitnessFound);
    }
}
