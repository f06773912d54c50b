//! The annihilation superalgebra of the Block-type family on finite index
//! windows, its distinguished finite-dimensional subquotients, and the
//! structural facts the representation-theoretic dimension bound rests on.
//!
//! Modes are stored in the shifted convention (`L` lowered by one, `G` by a
//! half) and doubled so that all indexing stays integral. Brackets are
//! computed from the k-products through the binomial mode formula, and
//! independently from the closed-form structure constants; the dual-path
//! comparison of the two is this module's central check.

use crate::catalog::{kb_quotient, CatalogError};
use crate::conformal::{Algebra, Parity, ResidualEntry};
use crate::scalar::{rat, rat_from, FieldContext, GaussRat, Rat, Scalar};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum AnnFamily {
    L,
    J,
    Gp,
    Gm,
}

impl AnnFamily {
    pub fn parity(self) -> Parity {
        match self {
            AnnFamily::L | AnnFamily::J => Parity::Even,
            AnnFamily::Gp | AnnFamily::Gm => Parity::Odd,
        }
    }

    /// Doubled shift between the stored mode and the raw mode.
    fn shift2(self) -> i64 {
        match self {
            AnnFamily::L => 2,
            AnnFamily::J => 0,
            AnnFamily::Gp | AnnFamily::Gm => 1,
        }
    }

    pub fn symbol_family(self) -> &'static str {
        match self {
            AnnFamily::L => "L",
            AnnFamily::J => "J",
            AnnFamily::Gp => "G+",
            AnnFamily::Gm => "G-",
        }
    }

    fn from_symbol_family(f: &str) -> Option<Self> {
        match f {
            "L" => Some(AnnFamily::L),
            "J" => Some(AnnFamily::J),
            "G+" => Some(AnnFamily::Gp),
            "G-" => Some(AnnFamily::Gm),
            _ => None,
        }
    }
}

/// A mode element `X_{i, mode}` in the shifted convention; `mode2` is the
/// doubled mode, odd exactly for the `G` families.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct AnnBasis {
    pub family: AnnFamily,
    pub index: u32,
    pub mode2: i64,
}

impl AnnBasis {
    pub fn new(family: AnnFamily, index: u32, mode2: i64) -> Self {
        let b = AnnBasis {
            family,
            index,
            mode2,
        };
        debug_assert!(b.is_valid(), "invalid mode element {b}");
        b
    }

    /// Mode bounds of the full annihilation superalgebra: `L` modes start at
    /// -1, `J` modes at 0, `G` modes at -1/2; `G` modes are half-odd.
    pub fn is_valid(&self) -> bool {
        match self.family {
            AnnFamily::L => self.mode2 % 2 == 0 && self.mode2 >= -2,
            AnnFamily::J => self.mode2 % 2 == 0 && self.mode2 >= 0,
            AnnFamily::Gp | AnnFamily::Gm => self.mode2.rem_euclid(2) == 1 && self.mode2 >= -1,
        }
    }

    /// The raw (unshifted) mode; always a non-negative integer.
    pub fn raw_mode(&self) -> i64 {
        (self.mode2 + self.family.shift2()) / 2
    }

    pub fn parity(&self) -> Parity {
        self.family.parity()
    }

    /// The stored mode as an exact rational.
    pub fn mode(&self) -> Rat {
        rat(self.mode2, 2)
    }
}

impl fmt::Display for AnnBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = if self.mode2 % 2 == 0 {
            format!("{}", self.mode2 / 2)
        } else {
            format!("{}/2", self.mode2)
        };
        write!(f, "{}[{},{}]", self.family.symbol_family(), self.index, m)
    }
}

/// A finite scalar combination of mode elements.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AnnComb {
    terms: BTreeMap<AnnBasis, Scalar>,
}

impl AnnComb {
    pub fn zero() -> Self {
        AnnComb::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AnnBasis, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, b: AnnBasis, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Scalar::zero);
        *entry = entry.add(c);
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, o: &AnnComb) -> AnnComb {
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(*b, c);
        }
        out
    }

    pub fn sub(&self, o: &AnnComb) -> AnnComb {
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(*b, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> AnnComb {
        AnnComb {
            terms: self.terms.iter().map(|(b, c)| (*b, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar, ctx: &FieldContext) -> AnnComb {
        let mut out = AnnComb::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, &c.mul(s, ctx));
        }
        out
    }
}

impl fmt::Display for AnnComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) {b}")?;
        }
        Ok(())
    }
}

fn binomial(m: i64, k: u32) -> Rat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(m - j);
        den *= BigInt::from(j + 1);
    }
    Rat::new(num, den)
}

/// Falling factorial `r (r-1) ... (r-j+1)`.
fn falling(r: i64, j: u32) -> Rat {
    let mut out = BigInt::one();
    for t in 0..j as i64 {
        out *= BigInt::from(r - t);
    }
    Rat::from_integer(out)
}

/// Mode bracket computed from the k-products:
/// `[a_m, b_n] = sum_k C(m, k) (a_(k) b)_{m+n-k}` on raw modes, with
/// `(D^j c)_r = (-1)^j r(r-1)...(r-j+1) c_{r-j}`.
///
/// `alg` must be a Block quotient whose cutoff is at least
/// `a.index + b.index`, so the k-products are untruncated.
pub fn ann_bracket(alg: &Algebra, a: &AnnBasis, b: &AnnBasis) -> AnnComb {
    let ctx = &alg.ctx;
    let ia = alg
        .symbol_id(&format!("{}{}", a.family.symbol_family(), a.index))
        .expect("index within cutoff");
    let ib = alg
        .symbol_id(&format!("{}{}", b.family.symbol_family(), b.index))
        .expect("index within cutoff");
    if let crate::conformal::AlgebraKind::BlockQuotient { cutoff, .. } = &alg.kind {
        assert!(
            a.index + b.index <= *cutoff,
            "cutoff too small for untruncated k-products"
        );
    }
    let m = a.raw_mode();
    let n = b.raw_mode();
    let mut out = AnnComb::zero();
    for (k, product) in alg.k_products(ia, ib) {
        let weight = binomial(m, k);
        if weight.is_zero() {
            continue;
        }
        let r = m + n - k as i64;
        for (sym, poly) in product.terms() {
            let info = &alg.symbols()[*sym];
            let fam = AnnFamily::from_symbol_family(&info.family).expect("catalog family");
            for (mono, coeff) in poly.terms() {
                let j = mono.d;
                debug_assert_eq!(mono.l, 0);
                let fall = falling(r, j);
                if fall.is_zero() {
                    continue;
                }
                let sign = if j % 2 == 1 { -rat_from(1) } else { rat_from(1) };
                let raw_out = r - j as i64;
                debug_assert!(raw_out >= 0);
                let target = AnnBasis::new(
                    fam,
                    info.index,
                    2 * raw_out - fam.shift2(),
                );
                let total = Scalar::from_rat(weight.clone() * fall * sign);
                out.add_term(target, &coeff.mul(&total, ctx));
            }
        }
    }
    out
}

fn gmul(a: &GaussRat, r: &Rat) -> GaussRat {
    a.mul(&GaussRat::from_rat(r.clone()))
}

fn add_guarded(out: &mut AnnComb, fam: AnnFamily, index: u32, mode2: i64, s: Scalar) {
    if s.is_zero() {
        return;
    }
    out.add_term(AnnBasis::new(fam, index, mode2), &s);
}

/// The closed-form structure constants of the annihilation superalgebra,
/// extended to all ordered family pairs by super-antisymmetry.
///
/// A formula may point below a family mode floor, but only where its
/// coefficient vanishes, so terms are materialized only when nonzero.
pub fn closed_form_bracket(p: &GaussRat, a: &AnnBasis, b: &AnnBasis) -> AnnComb {
    use AnnFamily::*;
    let ctx_free = |c: GaussRat| Scalar::from_gauss(&c);
    let mut out = AnnComb::zero();
    let (i, j) = (a.index as i64, b.index as i64);
    let (ma, mb) = (a.mode(), b.mode());
    let half = rat(1, 2);
    let one = rat_from(1);
    let idx = a.index + b.index;
    let mode2 = a.mode2 + b.mode2;
    match (a.family, b.family) {
        (L, L) => {
            // (j+p)(m+1) - (i+p)(n+1), the second index against the first mode
            let c = gmul(&GaussRat::from_int(j).add(p), &(ma.clone() + one.clone()))
                .sub(&gmul(&GaussRat::from_int(i).add(p), &(mb.clone() + one)));
            add_guarded(&mut out, L, idx, mode2, ctx_free(c));
        }
        (L, J) => {
            // j(m+1) - (i+p)n
            let c = GaussRat::from_rat(rat_from(j) * (ma.clone() + one))
                .sub(&gmul(&GaussRat::from_int(i).add(p), &mb));
            add_guarded(&mut out, J, idx, mode2, ctx_free(c));
        }
        (J, L) => {
            let c = GaussRat::from_rat(rat_from(i) * (mb.clone() + one))
                .sub(&gmul(&GaussRat::from_int(j).add(p), &ma));
            add_guarded(&mut out, J, idx, mode2, ctx_free(c.neg()));
        }
        (L, Gp) | (L, Gm) => {
            // (j + p/2)(m+1) - (i+p)(t+1/2)
            let c = gmul(
                &GaussRat::from_int(j).add(&gmul(p, &half)),
                &(ma.clone() + one),
            )
            .sub(&gmul(
                &GaussRat::from_int(i).add(p),
                &(mb.clone() + half.clone()),
            ));
            add_guarded(&mut out, b.family, idx, mode2, ctx_free(c));
        }
        (Gp, L) | (Gm, L) => {
            let c = gmul(
                &GaussRat::from_int(i).add(&gmul(p, &half)),
                &(mb.clone() + one),
            )
            .sub(&gmul(
                &GaussRat::from_int(j).add(p),
                &(ma.clone() + half.clone()),
            ));
            add_guarded(&mut out, a.family, idx, mode2, ctx_free(c.neg()));
        }
        (J, Gp) => {
            add_guarded(&mut out, Gp, idx, mode2, Scalar::one());
        }
        (J, Gm) => {
            add_guarded(&mut out, Gm, idx, mode2, Scalar::from_int(-1));
        }
        (Gp, J) => {
            add_guarded(&mut out, Gp, idx, mode2, Scalar::from_int(-1));
        }
        (Gm, J) => {
            add_guarded(&mut out, Gm, idx, mode2, Scalar::one());
        }
        (Gp, Gm) => {
            // ((2j+p)(s+1/2) - (2i+p)(t+1/2)) J + 2 L
            let c = gmul(&GaussRat::from_int(2 * j).add(p), &(ma.clone() + half.clone()))
                .sub(&gmul(
                    &GaussRat::from_int(2 * i).add(p),
                    &(mb.clone() + half.clone()),
                ));
            add_guarded(&mut out, J, idx, mode2, ctx_free(c));
            add_guarded(&mut out, L, idx, mode2, Scalar::from_int(2));
        }
        (Gm, Gp) => {
            // +[G+_{j,t}, G-_{i,s}] by super-antisymmetry
            let c = gmul(&GaussRat::from_int(2 * i).add(p), &(mb.clone() + half.clone()))
                .sub(&gmul(
                    &GaussRat::from_int(2 * j).add(p),
                    &(ma.clone() + half.clone()),
                ));
            add_guarded(&mut out, J, idx, mode2, ctx_free(c));
            add_guarded(&mut out, L, idx, mode2, Scalar::from_int(2));
        }
        (J, J) | (Gp, Gp) | (Gm, Gm) => {}
    }
    out
}

/// All mode elements with index at most `imax` and shifted mode at most
/// `mmax` (down to the family floor).
pub fn window(imax: u32, mmax: i64) -> Vec<AnnBasis> {
    let mut out = Vec::new();
    for i in 0..=imax {
        for m2 in (-2..=2 * mmax).step_by(2) {
            out.push(AnnBasis::new(AnnFamily::L, i, m2));
        }
        for m2 in (0..=2 * mmax).step_by(2) {
            out.push(AnnBasis::new(AnnFamily::J, i, m2));
        }
        for fam in [AnnFamily::Gp, AnnFamily::Gm] {
            let mut m2 = -1;
            while m2 <= 2 * mmax - 1 {
                out.push(AnnBasis::new(fam, i, m2));
                m2 += 2;
            }
        }
    }
    out
}

/// Dual-path comparison: for every ordered pair in the window, the bracket
/// computed from k-products through the binomial mode formula must equal
/// the closed-form structure constants.
pub fn dual_path_check(
    p: &GaussRat,
    imax: u32,
    mmax: i64,
) -> Result<Vec<ResidualEntry>, CatalogError> {
    let alg = kb_quotient(p, 2 * imax)?;
    let items = window(imax, mmax);
    let pairs: Vec<(usize, usize)> = (0..items.len())
        .flat_map(|a| (0..items.len()).map(move |b| (a, b)))
        .collect();
    let mut failures: Vec<(usize, usize, String)> = pairs
        .par_iter()
        .filter_map(|&(ai, bi)| {
            let a = &items[ai];
            let b = &items[bi];
            let got = ann_bracket(&alg, a, b);
            let expected = closed_form_bracket(p, a, b);
            let r = got.sub(&expected);
            if r.is_zero() {
                None
            } else {
                Some((ai, bi, r.to_string()))
            }
        })
        .collect();
    failures.sort();
    Ok(failures
        .into_iter()
        .map(|(a, b, residual)| ResidualEntry {
            items: vec![items[a].to_string(), items[b].to_string()],
            residual,
        })
        .collect())
}

/// Super-Leibniz check for the mode-lowering derivation
/// `T(x_{raw n}) = -n x_{raw n-1}` against all window pairs.
pub fn derivation_check(
    p: &GaussRat,
    imax: u32,
    mmax: i64,
) -> Result<Vec<ResidualEntry>, CatalogError> {
    let alg = kb_quotient(p, 2 * imax)?;
    let ctx = alg.ctx.clone();
    let apply_t = |c: &AnnComb| -> AnnComb {
        let mut out = AnnComb::zero();
        for (b, s) in c.terms() {
            let raw = b.raw_mode();
            if raw == 0 {
                continue;
            }
            let lowered = AnnBasis::new(b.family, b.index, b.mode2 - 2);
            out.add_term(lowered, &s.mul(&Scalar::from_rat(-rat_from(raw)), &ctx));
        }
        out
    };
    let single = |b: &AnnBasis| {
        let mut c = AnnComb::zero();
        c.add_term(*b, &Scalar::one());
        c
    };
    let items = window(imax, mmax);
    let mut failures = Vec::new();
    for a in &items {
        for b in &items {
            let bracket = ann_bracket(&alg, a, b);
            let lhs = apply_t(&bracket);
            let mut rhs = AnnComb::zero();
            let ta = apply_t(&single(a));
            for (x, s) in ta.terms() {
                rhs = rhs.add(&ann_bracket(&alg, x, b).scale(s, &ctx));
            }
            let tb = apply_t(&single(b));
            for (x, s) in tb.terms() {
                rhs = rhs.add(&ann_bracket(&alg, a, x).scale(s, &ctx));
            }
            let r = lhs.sub(&rhs);
            if !r.is_zero() {
                failures.push(ResidualEntry {
                    items: vec![a.to_string(), b.to_string()],
                    residual: r.to_string(),
                });
            }
        }
    }
    Ok(failures)
}

/// A finite-dimensional Lie superalgebra with explicit structure constants.
#[derive(Clone, Debug)]
pub struct FiniteLieSuperalgebra {
    pub ctx: FieldContext,
    pub label: String,
    pub basis: Vec<AnnBasis>,
    index_of: BTreeMap<AnnBasis, usize>,
    brackets: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl FiniteLieSuperalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(even | odd)` dimensions.
    pub fn super_dim(&self) -> (usize, usize) {
        let even = self
            .basis
            .iter()
            .filter(|b| b.parity() == Parity::Even)
            .count();
        (even, self.basis.len() - even)
    }

    pub fn id_of(&self, b: &AnnBasis) -> Option<usize> {
        self.index_of.get(b).copied()
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.brackets[a][b]
    }

    fn bracket_comb(&self, a: usize, comb: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (x, s) in comb {
            for (y, t) in &self.brackets[a][*x] {
                let add = s.mul(t, &self.ctx);
                let e = acc.entry(*y).or_insert_with(Scalar::zero);
                *e = e.add(&add);
            }
        }
        acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
    }

    pub fn render(&self, comb: &[(usize, Scalar)]) -> String {
        if comb.is_empty() {
            return "0".into();
        }
        comb.iter()
            .map(|(x, s)| format!("({s}) {}", self.basis[*x]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Super-Jacobi scan over all ordered basis triples.
    pub fn jacobi_check(&self) -> Vec<ResidualEntry> {
        let n = self.dim();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .collect();
        let mut failures: Vec<(usize, usize, usize, String)> = triples
            .par_iter()
            .filter_map(|&(a, b, c)| {
                // [a,[b,c]] - [[a,b],c] - (-1)^{|a||b|}[b,[a,c]]
                let bc = self.brackets[b][c].clone();
                let lhs = self.bracket_comb(a, &bc);
                let ab = &self.brackets[a][b];
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (y, s) in lhs {
                    let e = acc.entry(y).or_insert_with(Scalar::zero);
                    *e = e.add(&s);
                }
                for (x, s) in ab {
                    for (y, t) in &self.brackets[*x][c] {
                        let e = acc.entry(*y).or_insert_with(Scalar::zero);
                        *e = e.sub(&s.mul(t, &self.ctx));
                    }
                }
                let koszul = Parity::koszul_negative(
                    self.basis[a].parity(),
                    self.basis[b].parity(),
                );
                let ac = self.brackets[a][c].clone();
                for (y, s) in self.bracket_comb(b, &ac) {
                    let e = acc.entry(y).or_insert_with(Scalar::zero);
                    *e = if koszul { e.add(&s) } else { e.sub(&s) };
                }
                let residual: Vec<(usize, Scalar)> = acc
                    .into_iter()
                    .filter(|(_, s)| !s.is_zero())
                    .collect();
                if residual.is_empty() {
                    None
                } else {
                    Some((a, b, c, self.render(&residual)))
                }
            })
            .collect();
        failures.sort();
        failures
            .into_iter()
            .map(|(a, b, c, residual)| ResidualEntry {
                items: vec![
                    self.basis[a].to_string(),
                    self.basis[b].to_string(),
                    self.basis[c].to_string(),
                ],
                residual,
            })
            .collect()
    }
}

/// Membership in the subquotient window: indices at most `k`, `L` modes in
/// `[0, nn]`, `J` modes in `[1, nn+1]`, `G` modes in `[1/2, nn+1/2]`.
pub fn in_g_window(b: &AnnBasis, k: u32, nn: i64) -> bool {
    if b.index > k {
        return false;
    }
    match b.family {
        AnnFamily::L => b.mode2 >= 0 && b.mode2 <= 2 * nn,
        AnnFamily::J => b.mode2 >= 2 && b.mode2 <= 2 * nn + 2,
        AnnFamily::Gp | AnnFamily::Gm => b.mode2 >= 1 && b.mode2 <= 2 * nn + 1,
    }
}

/// Builds the finite subquotient at indices `<= k` and mode depth `nn`.
///
/// Structure constants come from the mode bracket with out-of-window images
/// dropped; dropping is legal because the out-of-window span is an ideal of
/// the non-negative part, which [`ideal_belt_check`] verifies explicitly.
pub fn build_g(p: &GaussRat, k: u32, nn: i64) -> Result<FiniteLieSuperalgebra, CatalogError> {
    let alg = kb_quotient(p, 2 * k)?;
    let ctx = alg.ctx.clone();
    let mut basis = Vec::new();
    for i in 0..=k {
        for m2 in (0..=2 * nn).step_by(2) {
            basis.push(AnnBasis::new(AnnFamily::L, i, m2));
        }
        for m2 in (2..=2 * nn + 2).step_by(2) {
            basis.push(AnnBasis::new(AnnFamily::J, i, m2));
        }
        for fam in [AnnFamily::Gp, AnnFamily::Gm] {
            let mut m2 = 1;
            while m2 <= 2 * nn + 1 {
                basis.push(AnnBasis::new(fam, i, m2));
                m2 += 2;
            }
        }
    }
    let index_of: BTreeMap<AnnBasis, usize> =
        basis.iter().enumerate().map(|(n, b)| (*b, n)).collect();
    let dim = basis.len();
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let full = ann_bracket(&alg, &basis[a], &basis[b]);
            let mut comb = Vec::new();
            for (x, s) in full.terms() {
                if in_g_window(x, k, nn) {
                    comb.push((index_of[x], s.clone()));
                }
            }
            brackets[a][b] = comb;
        }
    }
    let g = FiniteLieSuperalgebra {
        ctx,
        label: format!("g(k={k},N={nn},p={p})"),
        basis,
        index_of,
        brackets,
    };
    // Super-antisymmetry is a construction invariant.
    for a in 0..dim {
        for b in 0..dim {
            let koszul =
                Parity::koszul_negative(g.basis[a].parity(), g.basis[b].parity());
            let mut mirror: BTreeMap<usize, Scalar> = g.brackets[b][a]
                .iter()
                .map(|(x, s)| (*x, if koszul { s.neg() } else { s.clone() }))
                .collect();
            for (x, s) in &g.brackets[a][b] {
                let e = mirror.entry(*x).or_insert_with(Scalar::zero);
                *e = e.add(s);
            }
            assert!(
                mirror.values().all(Scalar::is_zero),
                "antisymmetry failed at ({}, {})",
                g.basis[a],
                g.basis[b]
            );
        }
    }
    Ok(g)
}

/// Verifies that brackets of window elements with just-out-of-window
/// elements never produce components back inside the window, which is what
/// makes the quotient construction of [`build_g`] legal.
pub fn ideal_belt_check(p: &GaussRat, k: u32, nn: i64) -> Result<Vec<ResidualEntry>, CatalogError> {
    let alg = kb_quotient(p, 2 * k + 2)?;
    let inside: Vec<AnnBasis> = window(k, nn + 1)
        .into_iter()
        .filter(|b| in_g_window(b, k, nn))
        .collect();
    // Non-negative-part elements outside the window, within a belt wide
    // enough to cover every way a bracket could re-enter.
    let belt: Vec<AnnBasis> = window(k + 1, nn + 3)
        .into_iter()
        .filter(|b| {
            let nonneg = match b.family {
                AnnFamily::L => b.mode2 >= 0,
                AnnFamily::J => b.mode2 >= 2,
                AnnFamily::Gp | AnnFamily::Gm => b.mode2 >= 1,
            };
            nonneg && !in_g_window(b, k, nn)
        })
        .collect();
    let mut failures = Vec::new();
    for a in &inside {
        for b in &belt {
            let bracket = ann_bracket(&alg, a, b);
            let mut escaped = AnnComb::zero();
            for (x, s) in bracket.terms() {
                if in_g_window(x, k, nn) {
                    escaped.add_term(*x, s);
                }
            }
            if !escaped.is_zero() {
                failures.push(ResidualEntry {
                    items: vec![a.to_string(), b.to_string()],
                    residual: escaped.to_string(),
                });
            }
        }
    }
    Ok(failures)
}

/// The index-pair obstruction sets of the subquotient grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaSets {
    pub l: BTreeSet<(u32, u32)>,
    pub j: BTreeSet<(u32, u32)>,
    pub g: BTreeSet<(u32, u32)>,
}

/// Enumerates the grid `[0,k] x [0,nn]` minus the origin and filters by the
/// three linear eigenvalue-vanishing conditions.
pub fn omega_sets(p: &GaussRat, k: u32, nn: u32) -> OmegaSets {
    let mut sets = OmegaSets {
        l: BTreeSet::new(),
        j: BTreeSet::new(),
        g: BTreeSet::new(),
    };
    for jj in 0..=k {
        for n in 0..=nn {
            if jj == 0 && n == 0 {
                continue;
            }
            let jjg = GaussRat::from_int(jj as i64);
            // j - p n = 0
            if jjg.sub(&gmul(p, &rat_from(n as i64))).is_zero() {
                sets.l.insert((jj, n));
            }
            // j - p (n+1) = 0
            if jjg.sub(&gmul(p, &rat_from(n as i64 + 1))).is_zero() {
                sets.j.insert((jj, n));
            }
            // j - p (n+1/2) = 0
            if jjg.sub(&gmul(p, &(rat_from(n as i64) + rat(1, 2)))).is_zero() {
                sets.g.insert((jj, n));
            }
        }
    }
    sets
}

/// True when `p` lies in `{2, 4, 6, ...}`.
fn is_positive_even_integer(p: &GaussRat) -> bool {
    if !p.im.is_zero() || !p.re.is_positive() {
        return false;
    }
    if !p.re.denom().is_one() {
        return false;
    }
    (p.re.numer() % BigInt::from(2)).is_zero()
}

fn is_positive_rational(p: &GaussRat) -> bool {
    p.im.is_zero() && p.re.is_positive()
}

/// The four obstruction-set statements, evaluated with the sets taken over
/// the whole sampled grid `[1,kmax] x [1,nmax]`.
///
/// The statements are grid-level: emptiness is decided against the largest
/// window, and the two pointwise-safe implications are additionally checked
/// at every grid point.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaGridReport {
    pub p: String,
    pub l_nonempty: bool,
    pub j_nonempty: bool,
    pub g_nonempty: bool,
    /// `L` nonempty iff `J` nonempty (over the grid).
    pub s1_l_iff_j: bool,
    /// `L` nonempty implies `p` is a positive rational.
    pub s2_l_implies_positive: bool,
    /// `G` nonempty iff `p` is a positive even integer (over the grid).
    pub s3_g_iff_even: bool,
    /// `G` nonempty implies `L` nonempty (over the grid).
    pub s4_g_implies_l: bool,
    /// Pointwise at every `(k, N)`: `L` nonempty implies `J` nonempty and
    /// `p > 0`.
    pub pointwise_ok: bool,
    pub pass: bool,
}

pub fn omega_grid_check(p: &GaussRat, kmax: u32, nmax: u32) -> OmegaGridReport {
    let full = omega_sets(p, kmax, nmax);
    let l_nonempty = !full.l.is_empty();
    let j_nonempty = !full.j.is_empty();
    let g_nonempty = !full.g.is_empty();
    let s1 = l_nonempty == j_nonempty;
    let s2 = !l_nonempty || is_positive_rational(p);
    let s3 = g_nonempty == is_positive_even_integer(p);
    let s4 = !g_nonempty || l_nonempty;
    let mut pointwise_ok = true;
    for k in 1..=kmax {
        for n in 1..=nmax {
            let sets = omega_sets(p, k, n);
            if !sets.l.is_empty() && (sets.j.is_empty() || !is_positive_rational(p)) {
                pointwise_ok = false;
            }
        }
    }
    OmegaGridReport {
        p: p.to_string(),
        l_nonempty,
        j_nonempty,
        g_nonempty,
        s1_l_iff_j: s1,
        s2_l_implies_positive: s2,
        s3_g_iff_even: s3,
        s4_g_implies_l: s4,
        pointwise_ok,
        pass: s1 && s2 && s3 && s4 && pointwise_ok,
    }
}

/// Structural facts about one subquotient: ideal scans, top-corner
/// near-centrality and the adjoint eigenvalue table.
#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    pub label: String,
    /// Row span is an ideal; abelian is asserted only for `k >= 1`.
    pub row_ideal: bool,
    pub row_abelian: Option<bool>,
    pub col_ideal: bool,
    pub col_abelian: Option<bool>,
    /// The top `J` corner commutes with every basis element except possibly
    /// the weight element, whose bracket is `(k - p(N+1))` times it.
    pub j_top_commutes_elsewhere: bool,
    pub j_top_weight_matches: bool,
    pub j_top_central: bool,
    pub j_top_central_expected: bool,
    /// The top `L` corner is central modulo the odd-and-`J` top column.
    pub l_top_central_mod_cjg: bool,
    pub l_top_weight_matches: bool,
    /// Adjoint eigenvalues of the weight element on every basis vector equal
    /// `index - p * mode`, and vanish exactly on the obstruction sets.
    pub eigenvalues_match: bool,
    pub eigenvalue_zeros_match_omega: bool,
    pub failures: Vec<ResidualEntry>,
}

impl StructuralReport {
    pub fn pass(&self) -> bool {
        self.row_ideal
            && self.col_ideal
            && self.row_abelian.unwrap_or(true)
            && self.col_abelian.unwrap_or(true)
            && self.j_top_commutes_elsewhere
            && self.j_top_weight_matches
            && (self.j_top_central == self.j_top_central_expected)
            && self.l_top_central_mod_cjg
            && self.l_top_weight_matches
            && self.eigenvalues_match
            && self.eigenvalue_zeros_match_omega
    }
}

pub fn structural_checks(
    g: &FiniteLieSuperalgebra,
    p: &GaussRat,
    k: u32,
    nn: i64,
) -> StructuralReport {
    let mut failures = Vec::new();
    let row: Vec<usize> = g
        .basis
        .iter()
        .enumerate()
        .filter(|(_, b)| b.index == k)
        .map(|(i, _)| i)
        .collect();
    let col: Vec<usize> = g
        .basis
        .iter()
        .enumerate()
        .filter(|(_, b)| match b.family {
            AnnFamily::L => b.mode2 == 2 * nn,
            AnnFamily::J => b.mode2 == 2 * nn + 2,
            AnnFamily::Gp | AnnFamily::Gm => b.mode2 == 2 * nn + 1,
        })
        .map(|(i, _)| i)
        .collect();

    let ideal_scan = |members: &[usize], tag: &str, failures: &mut Vec<ResidualEntry>| -> bool {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let mut ok = true;
        for a in 0..g.dim() {
            for &b in members {
                for (x, _) in g.bracket(a, b) {
                    if !set.contains(x) {
                        ok = false;
                        failures.push(ResidualEntry {
                            items: vec![
                                tag.to_string(),
                                g.basis[a].to_string(),
                                g.basis[b].to_string(),
                            ],
                            residual: format!("component escapes to {}", g.basis[*x]),
                        });
                    }
                }
            }
        }
        ok
    };
    let abelian_scan = |members: &[usize], tag: &str, failures: &mut Vec<ResidualEntry>| -> bool {
        let mut ok = true;
        for &a in members {
            for &b in members {
                if !g.bracket(a, b).is_empty() {
                    ok = false;
                    failures.push(ResidualEntry {
                        items: vec![
                            tag.to_string(),
                            g.basis[a].to_string(),
                            g.basis[b].to_string(),
                        ],
                        residual: g.render(g.bracket(a, b)),
                    });
                }
            }
        }
        ok
    };

    let row_ideal = ideal_scan(&row, "row-ideal", &mut failures);
    let col_ideal = ideal_scan(&col, "col-ideal", &mut failures);
    let row_abelian = (k >= 1).then(|| abelian_scan(&row, "row-abelian", &mut failures));
    let col_abelian = (nn >= 1).then(|| abelian_scan(&col, "col-abelian", &mut failures));

    let weight_id = g
        .id_of(&AnnBasis::new(AnnFamily::L, 0, 0))
        .expect("weight element present");
    let j_top = AnnBasis::new(AnnFamily::J, k, 2 * nn + 2);
    let j_top_id = g.id_of(&j_top).expect("top J corner present");
    let mut j_top_commutes_elsewhere = true;
    let mut j_top_central = true;
    for a in 0..g.dim() {
        let br = g.bracket(a, j_top_id);
        if br.is_empty() {
            continue;
        }
        j_top_central = false;
        if a != weight_id {
            j_top_commutes_elsewhere = false;
            failures.push(ResidualEntry {
                items: vec!["j-top".into(), g.basis[a].to_string(), j_top.to_string()],
                residual: g.render(br),
            });
        }
    }
    // [weight, J_top] = (k - p(N+1)) J_top
    let expected_w = Scalar::from_gauss(
        &GaussRat::from_int(k as i64).sub(&gmul(p, &rat_from(nn + 1))),
    );
    let got = g.bracket(weight_id, j_top_id);
    let j_top_weight_matches = match (got.len(), expected_w.is_zero()) {
        (0, true) => true,
        (1, false) => got[0].0 == j_top_id && got[0].1 == expected_w,
        _ => false,
    };
    let j_top_central_expected = expected_w.is_zero();

    // The top L corner: brackets live in span{L_top} + top J and G column,
    // with the L_top component only from the weight element.
    let l_top = AnnBasis::new(AnnFamily::L, k, 2 * nn);
    let l_top_id = g.id_of(&l_top).expect("top L corner present");
    let cjg: BTreeSet<usize> = g
        .basis
        .iter()
        .enumerate()
        .filter(|(_, b)| match b.family {
            AnnFamily::J => b.mode2 == 2 * nn + 2,
            AnnFamily::Gp | AnnFamily::Gm => b.mode2 == 2 * nn + 1,
            AnnFamily::L => false,
        })
        .map(|(i, _)| i)
        .collect();
    let mut l_top_central_mod_cjg = true;
    let mut l_top_weight_matches = true;
    let expected_l = Scalar::from_gauss(
        &GaussRat::from_int(k as i64).sub(&gmul(p, &rat_from(nn))),
    );
    for a in 0..g.dim() {
        for (x, s) in g.bracket(a, l_top_id) {
            if *x == l_top_id {
                if a != weight_id || *s != expected_l {
                    l_top_weight_matches = false;
                    failures.push(ResidualEntry {
                        items: vec![
                            "l-top-weight".into(),
                            g.basis[a].to_string(),
                            l_top.to_string(),
                        ],
                        residual: g.render(g.bracket(a, l_top_id)),
                    });
                }
            } else if !cjg.contains(x) {
                l_top_central_mod_cjg = false;
                failures.push(ResidualEntry {
                    items: vec![
                        "l-top".into(),
                        g.basis[a].to_string(),
                        l_top.to_string(),
                    ],
                    residual: g.render(g.bracket(a, l_top_id)),
                });
            }
        }
    }
    if !expected_l.is_zero() {
        // The weight bracket must actually be present with that eigenvalue.
        let has = g
            .bracket(weight_id, l_top_id)
            .iter()
            .any(|(x, s)| *x == l_top_id && *s == expected_l);
        if !has {
            l_top_weight_matches = false;
        }
    }

    // ad(weight) is diagonal with eigenvalue index - p * mode, vanishing
    // exactly on the obstruction sets (plus the origin for the L family).
    let omega = omega_sets(p, k, nn.max(0) as u32);
    let mut eigenvalues_match = true;
    let mut zeros_match = true;
    for (bi, b) in g.basis.iter().enumerate() {
        let eig = Scalar::from_gauss(
            &GaussRat::from_int(b.index as i64).sub(&gmul(p, &b.mode())),
        );
        let got = g.bracket(weight_id, bi);
        let matches = if eig.is_zero() {
            got.is_empty()
        } else {
            got.len() == 1 && got[0].0 == bi && got[0].1 == eig
        };
        if !matches {
            eigenvalues_match = false;
            failures.push(ResidualEntry {
                items: vec!["eigenvalue".into(), b.to_string()],
                residual: g.render(got),
            });
        }
        let pair_in_omega = match b.family {
            AnnFamily::L => {
                (b.index == 0 && b.mode2 == 0)
                    || omega.l.contains(&(b.index, (b.mode2 / 2) as u32))
            }
            AnnFamily::J => omega.j.contains(&(b.index, (b.mode2 / 2 - 1) as u32)),
            AnnFamily::Gp | AnnFamily::Gm => {
                omega.g.contains(&(b.index, ((b.mode2 - 1) / 2) as u32))
            }
        };
        if eig.is_zero() != pair_in_omega {
            zeros_match = false;
            failures.push(ResidualEntry {
                items: vec!["omega-zero".into(), b.to_string()],
                residual: format!("eigenvalue zero = {}, omega = {}", eig.is_zero(), pair_in_omega),
            });
        }
    }

    StructuralReport {
        label: g.label.clone(),
        row_ideal,
        row_abelian,
        col_ideal,
        col_abelian,
        j_top_commutes_elsewhere,
        j_top_weight_matches,
        j_top_central,
        j_top_central_expected,
        l_top_central_mod_cjg,
        l_top_weight_matches,
        eigenvalues_match,
        eigenvalue_zeros_match_omega: zeros_match,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_int(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn mode_bracket_examples() {
        // p = 1: [L_{0,0}, L_{1,0}] = L_{1,0}.
        let alg = kb_quotient(&g_int(1), 2).unwrap();
        let a = AnnBasis::new(AnnFamily::L, 0, 0);
        let b = AnnBasis::new(AnnFamily::L, 1, 0);
        let got = ann_bracket(&alg, &a, &b);
        let mut expected = AnnComb::zero();
        expected.add_term(AnnBasis::new(AnnFamily::L, 1, 0), &Scalar::one());
        assert_eq!(got, expected);

        // any p: [J_{i,m}, G+_{j,n}] = G+_{i+j,m+n}.
        let alg = kb_quotient(&g_int(-3), 3).unwrap();
        let a = AnnBasis::new(AnnFamily::J, 1, 4);
        let b = AnnBasis::new(AnnFamily::Gp, 2, 3);
        let got = ann_bracket(&alg, &a, &b);
        let mut expected = AnnComb::zero();
        expected.add_term(AnnBasis::new(AnnFamily::Gp, 3, 7), &Scalar::one());
        assert_eq!(got, expected);

        // p = 2, [G+_{0,-1/2}, G-_{0,-1/2}] = 2 L_{0,-1}.
        let alg = kb_quotient(&g_int(2), 1).unwrap();
        let a = AnnBasis::new(AnnFamily::Gp, 0, -1);
        let b = AnnBasis::new(AnnFamily::Gm, 0, -1);
        let got = ann_bracket(&alg, &a, &b);
        let mut expected = AnnComb::zero();
        expected.add_term(AnnBasis::new(AnnFamily::L, 0, -2), &Scalar::from_int(2));
        assert_eq!(got, expected);
        assert_eq!(got, closed_form_bracket(&g_int(2), &a, &b));
    }

    #[test]
    fn dual_path_small_window() {
        for p in [g_int(1), g_int(-2)] {
            let failures = dual_path_check(&p, 2, 2).unwrap();
            assert!(failures.is_empty(), "{failures:?}");
        }
    }

    #[test]
    fn derivation_is_super_leibniz() {
        let failures = derivation_check(&g_int(-1), 1, 2).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn g_dimensions() {
        // k=0, N=0: basis {L[0,0], J[0,1], G±[0,1/2]}, dimension (2|2).
        let g0 = build_g(&g_int(1), 0, 0).unwrap();
        assert_eq!(g0.super_dim(), (2, 2));
        // k=1, N=1: dimension (8|8).
        let g1 = build_g(&g_int(1), 1, 1).unwrap();
        assert_eq!(g1.super_dim(), (8, 8));
    }

    #[test]
    fn g_satisfies_super_jacobi() {
        let g = build_g(&g_int(2), 1, 1).unwrap();
        assert!(g.jacobi_check().is_empty());
    }

    #[test]
    fn belt_check_confirms_ideal() {
        assert!(ideal_belt_check(&g_int(1), 1, 1).unwrap().is_empty());
        assert!(ideal_belt_check(&g_int(-2), 2, 1).unwrap().is_empty());
    }

    #[test]
    fn omega_examples() {
        // p=2, k=4, N=3: G set is {(1,0), (3,1)}.
        let s = omega_sets(&g_int(2), 4, 3);
        assert_eq!(
            s.g,
            BTreeSet::from([(1u32, 0u32), (3, 1)])
        );
        // p=-1: everything empty.
        let s = omega_sets(&g_int(-1), 6, 6);
        assert!(s.l.is_empty() && s.j.is_empty() && s.g.is_empty());
        // p=1, k=N=2.
        let s = omega_sets(&g_int(1), 2, 2);
        assert_eq!(s.l, BTreeSet::from([(1u32, 1u32), (2, 2)]));
        assert_eq!(s.j, BTreeSet::from([(1u32, 0u32), (2, 1)]));
        // p=3/2: G condition has no integral solutions.
        let p = GaussRat::from_rat(rat(3, 2));
        let s = omega_sets(&p, 10, 10);
        assert!(s.g.is_empty());
    }

    #[test]
    fn omega_grid_statements() {
        for p in [
            g_int(1),
            g_int(-1),
            g_int(2),
            g_int(-2),
            g_int(3),
            g_int(-3),
            g_int(4),
            GaussRat::from_rat(rat(1, 2)),
            GaussRat::from_rat(rat(3, 2)),
        ] {
            let r = omega_grid_check(&p, 10, 10);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn structural_facts_sample() {
        // k=2, N=1, p=1: k - p(N+1) = 0, so the top J corner is central.
        let g = build_g(&g_int(1), 2, 1).unwrap();
        let r = structural_checks(&g, &g_int(1), 2, 1);
        assert!(r.pass(), "{:?}", r.failures);
        assert!(r.j_top_central);

        // k=1, N=2, p=-1: row and column ideals abelian.
        let g = build_g(&g_int(-1), 1, 2).unwrap();
        let r = structural_checks(&g, &g_int(-1), 1, 2);
        assert!(r.pass(), "{:?}", r.failures);
        assert_eq!(r.row_abelian, Some(true));
        assert_eq!(r.col_abelian, Some(true));
        assert!(!r.j_top_central && !r.j_top_central_expected);

        // k=1, N=1, p=3: eigenvalue on L[1,1] is 1 - 3 = -2.
        let g = build_g(&g_int(3), 1, 1).unwrap();
        let weight = g.id_of(&AnnBasis::new(AnnFamily::L, 0, 0)).unwrap();
        let target = g.id_of(&AnnBasis::new(AnnFamily::L, 1, 2)).unwrap();
        let br = g.bracket(weight, target);
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].1, Scalar::from_int(-2));
        let r = structural_checks(&g, &g_int(3), 1, 1);
        assert!(r.pass(), "{:?}", r.failures);
    }

    #[test]
    fn degenerate_row_is_not_abelian() {
        // k=0 makes the row span the whole algebra, which is not abelian;
        // the scan must not claim otherwise.
        let g = build_g(&g_int(1), 0, 1).unwrap();
        let r = structural_checks(&g, &g_int(1), 0, 1);
        assert!(r.row_abelian.is_none());
        assert!(r.row_ideal);
        assert!(r.pass(), "{:?}", r.failures);
    }
}
