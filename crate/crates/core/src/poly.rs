//! Sparse exact polynomials in the formal variables `D` (the translation
//! generator), `L` (lambda) and `M` (mu) over [`Scalar`].
//!
//! Three variables are enough for every identity the engine checks: the
//! middle bracket variable of a nested bracket is always eliminated by a
//! sesquilinearity substitution before a fourth variable could appear.

use crate::scalar::{FieldContext, Scalar, ScalarError};
use num::bigint::BigInt;
use num::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// The three formal variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    /// The translation generator (rendered `D`).
    D,
    /// The bracket variable lambda (rendered `L`).
    L,
    /// The auxiliary bracket variable mu (rendered `M`).
    M,
}

/// Exponent triple, ordered lexicographically by `(d, l, m)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Mono {
    pub d: u32,
    pub l: u32,
    pub m: u32,
}

impl Mono {
    fn get(&self, v: Var) -> u32 {
        match v {
            Var::D => self.d,
            Var::L => self.l,
            Var::M => self.m,
        }
    }

    fn cleared(&self, v: Var) -> Mono {
        let mut c = *self;
        match v {
            Var::D => c.d = 0,
            Var::L => c.l = 0,
            Var::M => c.m = 0,
        }
        c
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono {
            d: self.d + o.d,
            l: self.l + o.l,
            m: self.m + o.m,
        }
    }
}

/// Sparse polynomial; no stored coefficient is zero and the zero polynomial
/// is the empty map, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(Mono::default(), c);
        }
        Poly { terms: t }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(v, 1, Scalar::one())
    }

    pub fn monomial(v: Var, k: u32, c: Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mono = match v {
            Var::D => Mono { d: k, l: 0, m: 0 },
            Var::L => Mono { d: 0, l: k, m: 0 },
            Var::M => Mono { d: 0, l: 0, m: k },
        };
        let mut t = BTreeMap::new();
        t.insert(mono, c);
        Poly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: Mono, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
        *entry = entry.add(c);
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &Poly, ctx: &FieldContext) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &ca.mul(cb, ctx));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar, ctx: &FieldContext) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, &x.mul(c, ctx));
        }
        out
    }

    pub fn max_deg(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.get(v)).max().unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.get(v) > 0)
    }

    /// Replaces every occurrence of `v` by `image`, expanding exactly.
    pub fn substitute(&self, v: Var, image: &Poly, ctx: &FieldContext) -> Poly {
        // Collect coefficient polynomials by power of v, then Horner upward.
        let mut by_power: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power
                .entry(m.get(v))
                .or_insert_with(Poly::zero)
                .add_term(m.cleared(v), c);
        }
        let mut out = Poly::zero();
        let mut power = Poly::one();
        let mut current = 0u32;
        for (k, coeff) in by_power {
            while current < k {
                power = power.mul(image, ctx);
                current += 1;
            }
            out = out.add(&coeff.mul(&power, ctx));
        }
        out
    }

    /// The plain coefficient polynomial of `v^k` (in the remaining variables).
    pub fn coeff_of(&self, v: Var, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.get(v) == k {
                out.add_term(m.cleared(v), c);
            }
        }
        out
    }

    /// `k!` times the coefficient of `v^k`, i.e. extraction against the
    /// divided power `v^(k) = v^k / k!`.
    pub fn extract_divided(&self, v: Var, k: u32, ctx: &FieldContext) -> Poly {
        let mut fact = BigInt::from(1);
        for j in 2..=k as u64 {
            fact *= BigInt::from(j);
        }
        self.coeff_of(v, k)
            .scale(&Scalar::from_rat(BigRational::from_integer(fact)), ctx)
    }

    pub fn parse(s: &str, ctx: &FieldContext) -> Result<Poly, ScalarError> {
        let err = |m: String| ScalarError::Parse {
            input: s.to_string(),
            message: m,
        };
        let text = s.trim();
        if text == "0" {
            return Ok(Poly::zero());
        }
        // Terms are joined by top-level '+'; scalar signs live inside parens.
        let mut out = Poly::zero();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut parts: Vec<String> = Vec::new();
        for ch in text.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' if depth == 0 => {
                    parts.push(cur.trim().to_string());
                    cur = String::new();
                }
                _ => cur.push(ch),
            }
        }
        if depth != 0 {
            return Err(err("unbalanced parentheses".into()));
        }
        if !cur.trim().is_empty() {
            parts.push(cur.trim().to_string());
        }
        for part in parts {
            if !part.starts_with('(') {
                return Err(err(format!("term `{part}` must start with (coef)")));
            }
            let close = part
                .rfind(')')
                .ok_or_else(|| err(format!("missing ) in `{part}`")))?;
            let coef = Scalar::parse(&part[1..close], ctx)?;
            let rest = part[close + 1..].trim();
            let mut mono = Mono::default();
            if !rest.is_empty() {
                for factor in rest.trim_start_matches('*').split('*') {
                    let factor = factor.trim();
                    let (name, pow) = match factor.split_once('^') {
                        None => (factor, 1u32),
                        Some((n, p)) => (
                            n.trim(),
                            p.trim()
                                .parse::<u32>()
                                .map_err(|_| err(format!("bad exponent in `{factor}`")))?,
                        ),
                    };
                    match name {
                        "D" => mono.d += pow,
                        "L" => mono.l += pow,
                        "M" => mono.m += pow,
                        _ => return Err(err(format!("unknown variable `{name}`"))),
                    }
                }
            }
            out.add_term(mono, &coef);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (name, pow) in [("D", m.d), ("L", m.l), ("M", m.m)] {
                if pow == 1 {
                    write!(f, "*{name}")?;
                } else if pow > 1 {
                    write!(f, "*{name}^{pow}")?;
                }
            }
        }
        Ok(())
    }
}

/// Convenience constructor for `a*D + b*L + c` lines with rational entries.
pub fn affine_dl(a: Scalar, b: Scalar, c: Scalar) -> Poly {
    let mut p = Poly::zero();
    p.add_term(Mono { d: 1, l: 0, m: 0 }, &a);
    p.add_term(Mono { d: 0, l: 1, m: 0 }, &b);
    p.add_term(Mono::default(), &c);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_from;

    fn ctx() -> FieldContext {
        FieldContext::from_int(1).unwrap()
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Scalar::from_int(n))
    }

    #[test]
    fn product_of_conjugates() {
        let ctx = ctx();
        let d = Poly::var(Var::D);
        let l = Poly::var(Var::L);
        let lhs = d.add(&l).mul(&d.sub(&l), &ctx);
        let expected = d.mul(&d, &ctx).sub(&l.mul(&l, &ctx));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn additive_identity() {
        let ctx = FieldContext::from_int(5).unwrap();
        let p = Poly::var(Var::D)
            .scale(&Scalar::from_int(5), &ctx)
            .add(&Poly::var(Var::L).scale(&Scalar::from_int(5), &ctx));
        assert_eq!(p.add(&Poly::zero()), p);
    }

    #[test]
    fn simple_product() {
        let ctx = ctx();
        let p = Poly::var(Var::D).add(&Poly::var(Var::L).mul(&c(2), &ctx));
        let q = p.mul(&Poly::var(Var::L), &ctx);
        let mut expected = Poly::zero();
        expected.add_term(Mono { d: 1, l: 1, m: 0 }, &Scalar::from_int(1));
        expected.add_term(Mono { d: 0, l: 2, m: 0 }, &Scalar::from_int(2));
        assert_eq!(q, expected);
    }

    #[test]
    fn substitution_examples() {
        let ctx = ctx();
        let d = Poly::var(Var::D);
        let l = Poly::var(Var::L);
        let m = Poly::var(Var::M);

        // lambda^2 under lambda -> -lambda - D gives (lambda + D)^2.
        let f = l.mul(&l, &ctx);
        let image = l.neg().sub(&d);
        let got = f.substitute(Var::L, &image, &ctx);
        let expected = l.add(&d).mul(&l.add(&d), &ctx);
        assert_eq!(got, expected);

        // D*lambda under lambda -> lambda + mu.
        let f = d.mul(&l, &ctx);
        let got = f.substitute(Var::L, &l.add(&m), &ctx);
        assert_eq!(got, d.mul(&l, &ctx).add(&d.mul(&m, &ctx)));

        // D under D -> -(lambda + mu).
        let got = d.substitute(Var::D, &l.add(&m).neg(), &ctx);
        assert_eq!(got, l.neg().sub(&m));
    }

    #[test]
    fn divided_power_extraction() {
        let ctx = FieldContext::from_int(7).unwrap();
        // f = p*D + (2p)*L with p = 7: extracting L at k=1 gives 2p.
        let p_val = Scalar::from_int(7);
        let f = affine_dl(
            p_val.clone(),
            p_val.add(&p_val),
            Scalar::zero(),
        );
        assert_eq!(
            f.extract_divided(Var::L, 1, &ctx),
            Poly::constant(Scalar::from_int(14))
        );
        // f = p*D has no L term.
        let f = Poly::monomial(Var::D, 1, p_val);
        assert!(f.extract_divided(Var::L, 1, &ctx).is_zero());
        // f = 3L^2: k=2 extraction gives 2! * 3 = 6.
        let f = Poly::monomial(Var::L, 2, Scalar::from_int(3));
        assert_eq!(
            f.extract_divided(Var::L, 2, &ctx),
            Poly::constant(Scalar::from_int(6))
        );
    }

    #[test]
    fn divided_power_reconstruction() {
        // sum_k L^(k) * extract(f, L, k) recovers f.
        let ctx = ctx();
        let d = Poly::var(Var::D);
        let mut f = Poly::zero();
        for k in 0..=8u32 {
            f = f.add(&Poly::monomial(Var::L, k, Scalar::from_int(k as i64 + 1)));
        }
        f = f.mul(&d.add(&c(3)), &ctx);
        let mut back = Poly::zero();
        let mut fact = rat_from(1);
        for k in 0..=f.max_deg(Var::L) {
            if k > 0 {
                fact = fact * rat_from(k as i64);
            }
            let divided = Poly::monomial(
                Var::L,
                k,
                Scalar::from_rat(num::BigRational::new(
                    fact.denom().clone(),
                    fact.numer().clone(),
                )),
            );
            back = back.add(&divided.mul(&f.extract_divided(Var::L, k, &ctx), &ctx));
        }
        assert_eq!(back, f);
    }

    #[test]
    fn parse_render_round_trip() {
        let ctx = FieldContext::from_int(2).unwrap();
        for text in [
            "0",
            "(1)",
            "(-1/2)*D^2*L + (3)*M",
            "(1 + i)*D + (2*s)*L^3",
            "(2)*D*L*M",
        ] {
            let p = Poly::parse(text, &ctx).unwrap();
            let rendered = p.to_string();
            let back = Poly::parse(&rendered, &ctx).unwrap();
            assert_eq!(p, back, "round trip through `{rendered}`");
        }
    }
}
