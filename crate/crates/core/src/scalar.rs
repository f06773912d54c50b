//! Exact arithmetic in the coefficient field Q(i, sqrt(p)).
//!
//! Every quantity the engine manipulates lives in the smallest field
//! containing the rationals, a square root of -1 and a square root of the
//! structure parameter `p`. A [`FieldContext`] fixes `p` once; when `p` is a
//! perfect square in Q(i) the canonical root is chosen and the extension
//! collapses to Q(i), otherwise elements carry four rational coordinates in
//! the basis `{1, i, s, i*s}` with `s^2 = p`.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational, the prime subfield.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("the structure parameter p must be nonzero")]
    ZeroParameter,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },
}

pub fn rat_from(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a non-negative rational, if one exists.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_parse(s: &str) -> Result<Rat, ScalarError> {
    let err = |m: &str| ScalarError::Parse {
        input: s.to_string(),
        message: m.to_string(),
    };
    match s.split_once('/') {
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| err("bad integer"))?;
            Ok(Rat::from_integer(n))
        }
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// An element of Q(i): `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_from(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Canonical square root in Q(i), if the element is a perfect square.
    ///
    /// The canonical choice has positive rational part, falling back to
    /// positive imaginary part when the rational part vanishes.
    pub fn sqrt(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.im.is_zero() {
            if self.re.is_positive() {
                return rat_sqrt(&self.re).map(GaussRat::from_rat);
            }
            let neg = -self.re.clone();
            return rat_sqrt(&neg).map(|r| GaussRat::new(Rat::zero(), r));
        }
        // (x + yi)^2 = re + im*i forces x^2 = (re + |self|)/2, y = im/(2x).
        let norm = &self.re * &self.re + &self.im * &self.im;
        let n = rat_sqrt(&norm)?;
        let t = (&self.re + &n) / rat_from(2);
        let x = rat_sqrt(&t)?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&x * rat_from(2));
        Some(GaussRat::new(x, y))
    }

    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let sc = parse_coordinates(s)?;
        if !sc[2].is_zero() || !sc[3].is_zero() {
            return Err(ScalarError::Parse {
                input: s.to_string(),
                message: "s is not allowed in a Gaussian rational".into(),
            });
        }
        let [re, im, _, _] = sc;
        Ok(GaussRat::new(re, im))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            render_coordinates(&[
                self.re.clone(),
                self.im.clone(),
                Rat::zero(),
                Rat::zero()
            ])
        )
    }
}

/// The fixed coefficient field Q(i, sqrt(p)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    p: GaussRat,
    sqrt_p: Option<GaussRat>,
}

impl FieldContext {
    /// Builds the context for a nonzero Gaussian-rational parameter,
    /// detecting whether `p` is already a square in Q(i).
    pub fn new(p: GaussRat) -> Result<Self, ScalarError> {
        if p.is_zero() {
            return Err(ScalarError::ZeroParameter);
        }
        let sqrt_p = p.sqrt();
        Ok(FieldContext { p, sqrt_p })
    }

    pub fn from_int(p: i64) -> Result<Self, ScalarError> {
        Self::new(GaussRat::from_int(p))
    }

    pub fn p(&self) -> &GaussRat {
        &self.p
    }

    /// The canonical root of `p` when `p` is a square in Q(i).
    pub fn canonical_root(&self) -> Option<&GaussRat> {
        self.sqrt_p.as_ref()
    }

    /// 1 when sqrt(p) already lies in Q(i), otherwise 2.
    pub fn extension_degree(&self) -> u8 {
        if self.sqrt_p.is_some() {
            1
        } else {
            2
        }
    }
}

/// An element of Q(i, sqrt(p)) with coordinates in the basis `{1, i, s, i*s}`.
///
/// In degree-1 contexts the last two coordinates are identically zero: every
/// constructor folds `s` through the canonical root eagerly, so equality is
/// plain coordinate equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    c: [Rat; 4],
}

impl Scalar {
    fn from_raw(c: [Rat; 4], ctx: &FieldContext) -> Self {
        let mut s = Scalar { c };
        if let Some(q) = &ctx.sqrt_p {
            if !s.c[2].is_zero() || !s.c[3].is_zero() {
                // c2*s + c3*i*s with s = q.re + q.im*i folds into the Q(i) part.
                let re = &s.c[2] * &q.re - &s.c[3] * &q.im;
                let im = &s.c[2] * &q.im + &s.c[3] * &q.re;
                s.c[0] = &s.c[0] + &re;
                s.c[1] = &s.c[1] + &im;
                s.c[2] = Rat::zero();
                s.c[3] = Rat::zero();
            }
        }
        s
    }

    pub fn zero() -> Self {
        Scalar {
            c: [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Scalar {
            c: [Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_from(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar {
            c: [r, Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        Scalar {
            c: [g.re.clone(), g.im.clone(), Rat::zero(), Rat::zero()],
        }
    }

    /// The imaginary unit.
    pub fn i_unit() -> Self {
        Scalar {
            c: [Rat::zero(), Rat::one(), Rat::zero(), Rat::zero()],
        }
    }

    /// The distinguished square root of `p` in this context.
    pub fn sqrt_p(ctx: &FieldContext) -> Self {
        Self::from_raw([Rat::zero(), Rat::zero(), Rat::one(), Rat::zero()], ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.c
    }

    /// Scales by a rational; needs no context since the basis is fixed.
    pub fn scale_rat(&self, r: &Rat) -> Scalar {
        Scalar {
            c: [
                &self.c[0] * r,
                &self.c[1] * r,
                &self.c[2] * r,
                &self.c[3] * r,
            ],
        }
    }

    /// The Q(i) part `(c0, c1)` and the sqrt(p) part `(c2, c3)`.
    fn split(&self) -> (GaussRat, GaussRat) {
        (
            GaussRat::new(self.c[0].clone(), self.c[1].clone()),
            GaussRat::new(self.c[2].clone(), self.c[3].clone()),
        )
    }

    fn join(a: GaussRat, b: GaussRat) -> Self {
        Scalar {
            c: [a.re, a.im, b.re, b.im],
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Scalar {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Scalar {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }

    pub fn neg(&self) -> Self {
        Scalar {
            c: [
                -self.c[0].clone(),
                -self.c[1].clone(),
                -self.c[2].clone(),
                -self.c[3].clone(),
            ],
        }
    }

    pub fn mul(&self, o: &Self, ctx: &FieldContext) -> Self {
        // Fast paths: purely rational and purely complex operands cover the
        // bulk of the arithmetic in the scans.
        let self_rat = self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero();
        if self_rat {
            if self.c[0].is_zero() {
                return Scalar::zero();
            }
            return Scalar {
                c: [
                    &self.c[0] * &o.c[0],
                    &self.c[0] * &o.c[1],
                    &self.c[0] * &o.c[2],
                    &self.c[0] * &o.c[3],
                ],
            };
        }
        let other_rat = o.c[1].is_zero() && o.c[2].is_zero() && o.c[3].is_zero();
        if other_rat {
            if o.c[0].is_zero() {
                return Scalar::zero();
            }
            return Scalar {
                c: [
                    &self.c[0] * &o.c[0],
                    &self.c[1] * &o.c[0],
                    &self.c[2] * &o.c[0],
                    &self.c[3] * &o.c[0],
                ],
            };
        }
        if self.c[2].is_zero() && self.c[3].is_zero() && o.c[2].is_zero() && o.c[3].is_zero() {
            return Scalar {
                c: [
                    &self.c[0] * &o.c[0] - &self.c[1] * &o.c[1],
                    &self.c[0] * &o.c[1] + &self.c[1] * &o.c[0],
                    Rat::zero(),
                    Rat::zero(),
                ],
            };
        }
        // (a + b s)(a' + b' s) = (a a' + p b b') + (a b' + b a') s
        let (a, b) = self.split();
        let (a2, b2) = o.split();
        let re = a.mul(&a2).add(&ctx.p.mul(&b.mul(&b2)));
        let sv = a.mul(&b2).add(&b.mul(&a2));
        Self::from_raw([re.re, re.im, sv.re, sv.im], ctx)
    }

    pub fn inv(&self, ctx: &FieldContext) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // (a + b s)^{-1} = (a - b s) / (a^2 - p b^2); the norm is nonzero
        // exactly because s is not in Q(i) whenever b != 0.
        let (a, b) = self.split();
        let norm = a.mul(&a).sub(&ctx.p.mul(&b.mul(&b)));
        let ninv = norm.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(Self::join(a.mul(&ninv), b.neg().mul(&ninv)))
    }

    pub fn div(&self, o: &Self, ctx: &FieldContext) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.inv(ctx)?, ctx))
    }

    pub fn parse(s: &str, ctx: &FieldContext) -> Result<Self, ScalarError> {
        let c = parse_coordinates(s)?;
        Ok(Self::from_raw(c, ctx))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_coordinates(&self.c))
    }
}

const UNIT_NAMES: [&str; 4] = ["", "i", "s", "i*s"];

/// Renders `a/b + c/d*i + e/f*s + g/h*i*s` with zero terms omitted.
fn render_coordinates(c: &[Rat; 4]) -> String {
    let mut out = String::new();
    for (k, coef) in c.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let mag = coef.abs();
        if out.is_empty() {
            if coef.is_negative() {
                out.push('-');
            }
        } else if coef.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if k == 0 {
            out.push_str(&rat_to_string(&mag));
        } else if mag.is_one() {
            out.push_str(UNIT_NAMES[k]);
        } else {
            out.push_str(&rat_to_string(&mag));
            out.push('*');
            out.push_str(UNIT_NAMES[k]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses the textual scalar format into raw `{1, i, s, i*s}` coordinates.
fn parse_coordinates(s: &str) -> Result<[Rat; 4], ScalarError> {
    let err = |m: String| ScalarError::Parse {
        input: s.to_string(),
        message: m,
    };
    let mut c = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    let text = s.trim();
    if text.is_empty() {
        return Err(err("empty scalar".into()));
    }
    // Split into signed terms on top-level + and - (not inside a number).
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut seen_any = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' if seen_any && !cur.trim().is_empty() => {
                terms.push((neg, cur.trim().to_string()));
                cur = String::new();
                neg = ch == '-';
            }
            '-' if cur.trim().is_empty() => {
                neg = !neg;
                seen_any = true;
            }
            '+' if cur.trim().is_empty() => {
                seen_any = true;
            }
            _ => {
                if !ch.is_whitespace() {
                    seen_any = true;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur.trim().to_string()));
    }
    if terms.is_empty() {
        return Err(err("no terms".into()));
    }
    for (negated, term) in terms {
        let mut coef = Rat::one();
        let mut unit = 0usize;
        let mut saw_number = false;
        for factor in term.split('*') {
            let factor = factor.trim();
            match factor {
                "i" => {
                    unit = match unit {
                        0 => 1,
                        2 => 3,
                        _ => return Err(err(format!("repeated i in `{term}`"))),
                    }
                }
                "s" => {
                    unit = match unit {
                        0 => 2,
                        1 => 3,
                        _ => return Err(err(format!("repeated s in `{term}`"))),
                    }
                }
                _ => {
                    if saw_number {
                        return Err(err(format!("two numeric factors in `{term}`")));
                    }
                    coef = rat_parse(factor)?;
                    saw_number = true;
                }
            }
        }
        if negated {
            coef = -coef;
        }
        c[unit] = &c[unit] + &coef;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: i64) -> FieldContext {
        FieldContext::from_int(p).unwrap()
    }

    #[test]
    fn rejects_zero_parameter() {
        assert_eq!(
            FieldContext::from_int(0).unwrap_err(),
            ScalarError::ZeroParameter
        );
    }

    #[test]
    fn extension_degree_detection() {
        // 2 is not a square in Q(i); s^2 reduces to 2.
        let c2 = ctx(2);
        assert_eq!(c2.extension_degree(), 2);
        let s = Scalar::sqrt_p(&c2);
        assert_eq!(s.mul(&s, &c2), Scalar::from_int(2));

        // 4 collapses with canonical root 2.
        let c4 = ctx(4);
        assert_eq!(c4.extension_degree(), 1);
        assert_eq!(Scalar::sqrt_p(&c4), Scalar::from_int(2));

        // -1 collapses with canonical root i.
        let cm1 = ctx(-1);
        assert_eq!(cm1.extension_degree(), 1);
        assert_eq!(Scalar::sqrt_p(&cm1), Scalar::i_unit());
        let s = Scalar::sqrt_p(&cm1);
        assert_eq!(s.mul(&s, &cm1), Scalar::from_int(-1));
    }

    #[test]
    fn canonical_root_tie_breaking() {
        // -4 has roots +-2i; the canonical one has positive imaginary part.
        let c = ctx(-4);
        let q = c.canonical_root().unwrap();
        assert_eq!(q, &GaussRat::new(rat_from(0), rat_from(2)));
        // 3+4i = (2+i)^2; canonical root has positive rational part.
        let g = GaussRat::new(rat_from(3), rat_from(4));
        assert_eq!(g.sqrt().unwrap(), GaussRat::new(rat_from(2), rat_from(1)));
        // 9/4 over Q.
        let g = GaussRat::from_rat(rat(9, 4));
        assert_eq!(g.sqrt().unwrap(), GaussRat::from_rat(rat(3, 2)));
        // 2 has no root in Q(i).
        assert!(GaussRat::from_int(2).sqrt().is_none());
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx(2);
        let s = Scalar::sqrt_p(&c);
        let one = Scalar::one();
        // (1+s)(1-s) = 1 - s^2 = -1
        let prod = one.add(&s).mul(&one.sub(&s), &c);
        assert_eq!(prod, Scalar::from_int(-1));
        // s / s = 1
        assert_eq!(s.div(&s, &c).unwrap(), Scalar::one());

        let cm1 = ctx(-1);
        let s = Scalar::sqrt_p(&cm1);
        assert_eq!(s.mul(&s, &cm1), Scalar::from_int(-1));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let c = ctx(2);
        assert_eq!(
            Scalar::one().div(&Scalar::zero(), &c).unwrap_err(),
            ScalarError::DivisionByZero
        );
    }

    #[test]
    fn inverse_in_degree_two() {
        let c = ctx(2);
        // x = 1 + i + s + 2 i s
        let x = Scalar::parse("1 + i + s + 2*i*s", &c).unwrap();
        let y = x.inv(&c).unwrap();
        assert_eq!(x.mul(&y, &c), Scalar::one());
    }

    #[test]
    fn render_parse_round_trip() {
        let c = ctx(3);
        for text in [
            "0",
            "1",
            "-1/2",
            "i",
            "-i",
            "2/3*i",
            "s",
            "1 - 3/2*s",
            "1/2 + 1/3*i + 5*s + 7/2*i*s",
            "-2 - i - s - i*s",
        ] {
            let x = Scalar::parse(text, &c).unwrap();
            let rendered = x.to_string();
            let back = Scalar::parse(&rendered, &c).unwrap();
            assert_eq!(x, back, "round trip through `{rendered}`");
        }
    }

    #[test]
    fn parse_folds_root_in_degree_one() {
        let c = ctx(-1);
        let x = Scalar::parse("2*s", &c).unwrap();
        assert_eq!(x, Scalar::parse("2*i", &c).unwrap());
    }

    #[test]
    fn gauss_parse() {
        assert_eq!(GaussRat::parse("-1").unwrap(), GaussRat::from_int(-1));
        assert_eq!(
            GaussRat::parse("1/2 + i").unwrap(),
            GaussRat::new(rat(1, 2), rat_from(1))
        );
        assert!(GaussRat::parse("s").is_err());
    }
}
