//! Element expressions and their canonical printer.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := power (['*'|'/'] power)*
//! power    := atom ['^' exponent]
//! atom     := INT | 'x' | 't' | 'a' | 'C' | 'w' '(' expr ')' | 'O' '(' INT '^' exponent ['*' 'x' '^' exponent] ')'
//!           | '[' digit (',' digit)* ']' '@' rational | '(' expr ')'
//! digit    := rational ':' INT
//! exponent := INT | '(' rational ')'
//! ```
//!
//! `x` takes integer exponents only. `t` exists in equal characteristic,
//! `C`, `w(..)` (Teichmuller lift of an `F_q` constant), `O(p^g)` and digit
//! lists in mixed characteristic. `a` is the generator of `F_q` over `F_p`.
//! `O(p^g)` lowers the precision of the coefficient it is added to;
//! `O(p^g*x^k)` records a coefficient lost below `p^g x^k`. It applies to
//! the whole element wherever it occurs; products do not move it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::{Coeff, EqElem, MixedElem};
use crate::error::{Error, Result};
use crate::gf::GfCtx;
use crate::laurent::{LaurentPoly, ValConfig};
use crate::values::{rat, Rat};

/// Coefficient models with a textual form.
pub trait Syntax: Coeff {
    /// `t^e`.
    fn t_power(ctx: &Self::Ctx, e: Rat) -> std::result::Result<Self, String>;
    /// `p^e` for non-integral `e`.
    fn prime_power(ctx: &Self::Ctx, e: Rat) -> std::result::Result<Self, String>;
    /// Zero known to absolute precision `g`.
    fn zero_to(ctx: &Self::Ctx, g: Rat) -> std::result::Result<Self, String>;
    fn digit_list(ctx: &Self::Ctx, digits: &[(Rat, u32)], prec: Rat) -> std::result::Result<Self, String>;
    /// Canonical text, a sum of monomials.
    fn write(&self) -> String;
}

fn fq_text(k: &GfCtx, d: u32) -> String {
    k.fmt_elem(d)
}

fn monomial_text(coeff: String, var: &str, e: Rat) -> String {
    if e == Rat::from_integer(0) {
        coeff
    } else if coeff == "1" {
        format!("{var}^({e})")
    } else {
        format!("{coeff}*{var}^({e})")
    }
}

impl Syntax for EqElem {
    fn t_power(ctx: &Arc<GfCtx>, e: Rat) -> std::result::Result<Self, String> {
        EqElem::monomial(&ctx.elem(1), e).map_err(|_| "an exponent with p-power denominator".into())
    }
    fn prime_power(_: &Arc<GfCtx>, _: Rat) -> std::result::Result<Self, String> {
        Err("an integer exponent (p = 0 in equal characteristic)".into())
    }
    fn zero_to(_: &Arc<GfCtx>, _: Rat) -> std::result::Result<Self, String> {
        Err("exact coefficients (O(..) needs mixed characteristic)".into())
    }
    fn digit_list(_: &Arc<GfCtx>, _: &[(Rat, u32)], _: Rat) -> std::result::Result<Self, String> {
        Err("t-monomials (digit lists need mixed characteristic)".into())
    }

    fn write(&self) -> String {
        let f = self.ratfunc();
        let k = f.ctx().clone();
        if let Some(ts) = self.terms() {
            if ts.is_empty() {
                return "0".into();
            }
            let parts: Vec<String> = ts.iter().map(|(e, d)| monomial_text(fq_text(&k, d.v), "t", *e)).collect();
            return parts.join(" + ");
        }
        let unit = rat(1, (k.p() as i128).pow(self.depth()));
        let poly = |p: &crate::poly::Poly| {
            let parts: Vec<String> = (0..=p.degree().unwrap_or(0))
                .filter(|&i| p.coeff(i) != 0)
                .map(|i| monomial_text(fq_text(&k, p.coeff(i)), "t", unit * Rat::from_integer(i as i128)))
                .collect();
            parts.join(" + ")
        };
        format!("({})/({})", poly(f.num()), poly(f.den()))
    }
}

impl Syntax for MixedElem {
    fn t_power(_: &Self::Ctx, _: Rat) -> std::result::Result<Self, String> {
        Err("x, a, C, w, O or a number (t needs equal characteristic)".into())
    }
    fn prime_power(ctx: &Self::Ctx, e: Rat) -> std::result::Result<Self, String> {
        MixedElem::p_pow(ctx, e).map_err(|e| format!("a representable power of p ({e})"))
    }
    fn zero_to(ctx: &Self::Ctx, g: Rat) -> std::result::Result<Self, String> {
        MixedElem::from_digits(ctx, &[], Some(g)).map_err(|e| format!("a representable precision ({e})"))
    }
    fn digit_list(ctx: &Self::Ctx, digits: &[(Rat, u32)], prec: Rat) -> std::result::Result<Self, String> {
        if let Some((_, d)) = digits.iter().find(|(_, d)| *d >= ctx.gf.q()) {
            return Err(format!("digits below q = {} (got {d})", ctx.gf.q()));
        }
        let ds: Vec<_> = digits.iter().map(|(g, d)| (*g, ctx.gf.elem(*d))).collect();
        MixedElem::from_digits(ctx, &ds, Some(prec)).map_err(|e| format!("a representable digit list ({e})"))
    }

    fn write(&self) -> String {
        let ctx = self.context();
        let p = ctx.p;
        let mut parts: Vec<String> = self
            .digits()
            .iter()
            .map(|(g, d)| {
                let w = match d.v {
                    1 => "1".to_string(),
                    v => {
                        let s = fq_text(&ctx.gf, v);
                        let s = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(&s).to_string();
                        format!("w({s})")
                    }
                };
                monomial_text(w, &p.to_string(), *g)
            })
            .collect();
        if let Some(prec) = self.precision() {
            let full = self.value().ok().map(|v| v + rat(ctx.cap as i128, ctx.m as i128));
            if full != Some(prec) {
                parts.push(format!("O({p}^({prec}))"));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }
}

/// Canonical text of an element; [`parse_element`] reads it back.
pub fn format_element<C: Syntax>(f: &LaurentPoly<C>) -> String {
    let mut parts = Vec::new();
    for (k, c) in f.terms() {
        let cs = c.write();
        parts.push(if k == 0 {
            cs
        } else if cs == "1" {
            format!("x^({k})")
        } else if cs.contains(' ') {
            format!("({cs})*x^({k})")
        } else {
            format!("{cs}*x^({k})")
        });
    }
    if let Some(fl) = f.floor() {
        let vx = f.config().vx;
        let k = if vx.b == Rat::from_integer(0) { Rat::from_integer(0) } else { fl.b / vx.b };
        let g = fl.a - k * vx.a;
        let p = C::prime(f.ctx());
        parts.push(format!("O({p}^({g})*x^({k}))"));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

/// Coefficients by exponent, keeping zeros that carry a precision.
type Draft<C> = BTreeMap<i64, C>;

fn d_add<C: Coeff>(a: &Draft<C>, b: &Draft<C>) -> Draft<C> {
    let mut out = a.clone();
    for (k, c) in b {
        let s = match out.remove(k) {
            Some(o) => o.add(c),
            None => c.clone(),
        };
        out.insert(*k, s);
    }
    out
}

fn d_mul<C: Coeff>(ctx: &C::Ctx, a: &Draft<C>, b: &Draft<C>) -> Draft<C> {
    let mut out: Draft<C> = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            let e = out.entry(i + j).or_insert_with(|| C::zero(ctx));
            *e = e.add(&x.mul(y));
        }
    }
    out
}

fn d_const<C: Coeff>(c: C) -> Draft<C> {
    BTreeMap::from([(0, c)])
}

struct Parser<'s, C: Syntax> {
    src: &'s [u8],
    pos: usize,
    ctx: C::Ctx,
    floors: Vec<(i64, C)>,
}

impl<'s, C: Syntax> Parser<'s, C> {
    fn fail<T>(&self, at: usize, expected: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError { position: at, expected: expected.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(self.pos, format!("'{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<i128> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(start, "an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse().or_else(|_| self.fail(start, "an integer that fits in 127 bits"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let neg = self.eat(b'-');
        let n = self.int()?;
        let at = self.pos;
        let d = if self.eat(b'/') { self.int()? } else { 1 };
        if d == 0 {
            return self.fail(at, "a nonzero denominator");
        }
        let r = rat(n, d);
        Ok(if neg { -r } else { r })
    }

    fn exponent(&mut self) -> Result<Rat> {
        if self.eat(b'(') {
            let r = self.rational()?;
            self.expect(b')')?;
            Ok(r)
        } else {
            let neg = self.eat(b'-');
            let n = Rat::from_integer(self.int()?);
            Ok(if neg { -n } else { n })
        }
    }

    fn expr(&mut self) -> Result<Draft<C>> {
        let mut acc = BTreeMap::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let t = self.term()?;
            let t = if neg { t.into_iter().map(|(k, c)| (k, c.neg())).collect() } else { t };
            acc = d_add(&acc, &t);
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || b"(xtaCwO[".contains(&c))
    }

    fn term(&mut self) -> Result<Draft<C>> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                let f = self.power()?;
                acc = d_mul(&self.ctx, &acc, &f);
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                self.ws();
                let at = self.pos;
                let f = self.power()?;
                let inv = self.inverse(&f, at)?;
                acc = d_mul(&self.ctx, &acc, &inv);
            } else if self.starts_factor() {
                let f = self.power()?;
                acc = d_mul(&self.ctx, &acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    /// Inverse of a single nonzero monomial `c x^k`.
    fn inverse(&self, f: &Draft<C>, at: usize) -> Result<Draft<C>> {
        let nz: Vec<_> = f.iter().filter(|(_, c)| !c.is_zero()).collect();
        match nz.as_slice() {
            [(k, c)] if f.len() == 1 => match c.inv() {
                Ok(i) => Ok(BTreeMap::from([(-**k, i)])),
                Err(_) => self.fail(at, "an invertible divisor"),
            },
            _ => self.fail(at, "a monomial divisor"),
        }
    }

    fn power(&mut self) -> Result<Draft<C>> {
        self.ws();
        let start = self.pos;
        let atom = self.atom()?;
        if !self.eat(b'^') {
            return atom.to_draft(&self.ctx).or_else(|e| self.fail(start, e));
        }
        self.ws();
        let at = self.pos;
        let e = self.exponent()?;
        let int = e.is_integer().then(|| *e.numer());
        match (&atom, int) {
            (Atom::X, None) => Err(Error::RationalExponentOnX(at)),
            (Atom::X, Some(k)) => Ok(BTreeMap::from([(k as i64, C::one(&self.ctx))])),
            (Atom::T, _) => C::t_power(&self.ctx, e).map(d_const).or_else(|s| self.fail(at, s)),
            (Atom::Int(n), None) => {
                if *n != C::prime(&self.ctx) as i128 {
                    return self.fail(at, "an integer exponent (rational powers are defined for p only)");
                }
                C::prime_power(&self.ctx, e).map(d_const).or_else(|s| self.fail(at, s))
            }
            (_, None) => self.fail(at, "an integer exponent"),
            (_, Some(k)) => {
                let base = atom.to_draft(&self.ctx).or_else(|e| self.fail(start, e))?;
                let b = if k < 0 { self.inverse(&base, start)? } else { base };
                let mut acc = d_const(C::one(&self.ctx));
                for _ in 0..k.unsigned_abs() {
                    acc = d_mul(&self.ctx, &acc, &b);
                }
                Ok(acc)
            }
        }
    }

    fn atom(&mut self) -> Result<Atom<C>> {
        let at = self.pos;
        let Some(c) = self.peek() else {
            return self.fail(at, "a term");
        };
        match c {
            b'0'..=b'9' => Ok(Atom::Int(self.int()?)),
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(Atom::Group(e))
            }
            b'[' => {
                self.pos += 1;
                let mut digits = Vec::new();
                if !self.eat(b']') {
                    loop {
                        let g = self.rational()?;
                        self.expect(b':')?;
                        let d = self.int()?;
                        digits.push((g, u32::try_from(d).unwrap_or(u32::MAX)));
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                self.expect(b'@')?;
                let prec = self.rational()?;
                let e = C::digit_list(&self.ctx, &digits, prec).or_else(|s| self.fail(at, s))?;
                Ok(Atom::Group(d_const(e)))
            }
            b'x' => {
                self.pos += 1;
                Ok(Atom::X)
            }
            b't' => {
                self.pos += 1;
                Ok(Atom::T)
            }
            b'a' => {
                self.pos += 1;
                let k = C::residue_field(&self.ctx);
                if k.r() < 2 {
                    return self.fail(at, "a term (the constant a needs q > p)");
                }
                let g = k.elem(k.from_coords(&[0, 1]));
                Ok(Atom::Group(d_const(C::lift(&self.ctx, &g))))
            }
            b'C' => {
                self.pos += 1;
                C::c_const(&self.ctx).map(|c| Atom::Group(d_const(c))).or_else(|_| self.fail(at, "a term (C needs mixed characteristic)"))
            }
            b'w' => {
                self.pos += 1;
                self.expect(b'(')?;
                let inner = self.pos;
                let k = C::residue_field(&self.ctx);
                let sub = {
                    let mut p = Parser::<EqElem> { src: self.src, pos: self.pos, ctx: k.clone(), floors: Vec::new() };
                    let e = p.expr()?;
                    self.pos = p.pos;
                    e
                };
                self.expect(b')')?;
                let d = match sub.iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>().as_slice() {
                    [] => 0,
                    [(0, c)] => match c.terms().as_deref() {
                        Some([(e, d)]) if *e == Rat::from_integer(0) => d.v,
                        _ => return self.fail(inner, "a constant of F_q"),
                    },
                    _ => return self.fail(inner, "a constant of F_q"),
                };
                Ok(Atom::Group(d_const(C::lift(&self.ctx, &k.elem(d)))))
            }
            b'O' => {
                self.pos += 1;
                self.expect(b'(')?;
                let base_at = self.pos;
                let n = self.int()?;
                let g = if n == 1 && self.peek() == Some(b')') {
                    Rat::from_integer(0)
                } else {
                    if n != C::prime(&self.ctx) as i128 {
                        return self.fail(base_at, format!("p = {}", C::prime(&self.ctx)));
                    }
                    self.expect(b'^')?;
                    self.exponent()?
                };
                let lost = if self.eat(b'*') {
                    self.expect(b'x')?;
                    self.expect(b'^')?;
                    let e_at = self.pos;
                    let e = self.exponent()?;
                    if !e.is_integer() {
                        return Err(Error::RationalExponentOnX(e_at));
                    }
                    Some(*e.numer() as i64)
                } else {
                    None
                };
                self.expect(b')')?;
                let z = C::zero_to(&self.ctx, g).or_else(|s| self.fail(at, s))?;
                match lost {
                    Some(k) => {
                        self.floors.push((k, z));
                        Ok(Atom::Group(BTreeMap::new()))
                    }
                    None => Ok(Atom::Group(d_const(z))),
                }
            }
            _ => self.fail(at, "a number, x, t, a, C, w(..), O(..), a digit list or '('"),
        }
    }
}

enum Atom<C: Coeff> {
    Int(i128),
    X,
    T,
    Group(Draft<C>),
}

impl<C: Syntax> Atom<C> {
    fn to_draft(&self, ctx: &C::Ctx) -> std::result::Result<Draft<C>, String> {
        match self {
            Atom::Int(n) => {
                let n = i64::try_from(*n).map_err(|_| "an integer that fits in 63 bits".to_string())?;
                Ok(d_const(C::from_int(ctx, n)))
            }
            Atom::X => Ok(BTreeMap::from([(1, C::one(ctx))])),
            Atom::T => C::t_power(ctx, Rat::from_integer(1)).map(d_const),
            Atom::Group(d) => Ok(d.clone()),
        }
    }
}

/// Parses an expression into a Laurent polynomial over `C`.
pub fn parse_element<C: Syntax>(text: &str, ctx: &C::Ctx, cfg: ValConfig) -> Result<LaurentPoly<C>> {
    if let Some(i) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::SyntaxError { position: i, expected: "ASCII input".into() });
    }
    let mut p = Parser::<C> { src: text.as_bytes(), pos: 0, ctx: ctx.clone(), floors: Vec::new() };
    let d = p.expr()?;
    if p.peek().is_some() {
        return p.fail(p.pos, "'+', '-', '*', '/' or end of input");
    }
    let f = LaurentPoly::from_terms(ctx, cfg, d);
    Ok(p.floors.into_iter().fold(f, |f, (k, z)| f.add(&LaurentPoly::monomial(ctx, cfg, z, k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::MixedCtx;
    use crate::values::{rat_int, Lambda, Value};
    use proptest::prelude::*;

    fn vt() -> ValConfig {
        ValConfig::vt(Value::new(rat_int(0), rat_int(1))).unwrap()
    }

    #[test]
    fn equal_char_example() {
        let k = GfCtx::new(2, 1).unwrap();
        let f = parse_element::<EqElem>("t^(-2)*x^(-4) + t^(-1)", &k, vt()).unwrap();
        assert_eq!(f.support(), vec![-4, 0]);
        assert_eq!(f.coeff(-4).unwrap(), &EqElem::monomial(&k.elem(1), rat_int(-2)).unwrap());
        assert_eq!(f.coeff(0).unwrap(), &EqElem::monomial(&k.elem(1), rat_int(-1)).unwrap());
        assert_eq!(format_element(&f), "t^(-2)*x^(-4) + t^(-1)");
    }

    #[test]
    fn rational_x_exponent_is_rejected() {
        let k = GfCtx::new(2, 1).unwrap();
        assert_eq!(parse_element::<EqElem>("x^(1/2)", &k, vt()).unwrap_err(), Error::RationalExponentOnX(2));
    }

    #[test]
    fn mixed_char_example() {
        let ctx = MixedCtx::new(GfCtx::new(2, 1).unwrap(), 8, None).unwrap();
        let f = parse_element::<MixedElem>("1 + 2*x", &ctx, vt()).unwrap();
        assert_eq!(f.support(), vec![0, 1]);
        assert_eq!(f.coeff(1).unwrap(), &MixedElem::from_int(&ctx, 2));
        assert_eq!(format_element(&f), "1 + 2^(1)*x^(1)");
        let g = parse_element::<MixedElem>("1 + 2^(1/2) x", &ctx, vt()).unwrap();
        assert_eq!(g.coeff(1).unwrap(), &MixedElem::p_pow(&ctx, rat(1, 2)).unwrap());
        // -1 = 1 + 2 + 4 + ... as Teichmuller digits.
        let h = parse_element::<MixedElem>("-1", &ctx, vt()).unwrap();
        assert_eq!(h, parse_element::<MixedElem>(&format_element(&h), &ctx, vt()).unwrap());
        assert!(format_element(&h).starts_with("1 + 2^(1) + 2^(2)"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let k = GfCtx::new(2, 1).unwrap();
        let err = |s: &str| parse_element::<EqElem>(s, &k, vt()).unwrap_err();
        assert!(matches!(err("t^(-1) +"), Error::SyntaxError { position: 8, .. }));
        assert!(matches!(err("x^(2"), Error::SyntaxError { position: 4, .. }));
        assert!(matches!(err("t^(1/3)"), Error::SyntaxError { position: 2, .. }));
        assert!(matches!(err("C"), Error::SyntaxError { position: 0, .. }));
        assert!(matches!(err("1/(1 + x)"), Error::SyntaxError { position: 2, .. }));
        assert!(matches!(err("x $"), Error::SyntaxError { position: 2, .. }));
        assert!(matches!(err("a"), Error::SyntaxError { position: 0, .. }));
    }

    #[test]
    fn arithmetic_forms_agree() {
        let k = GfCtx::new(3, 1).unwrap();
        let cfg = vt();
        let p = |s: &str| parse_element::<EqElem>(s, &k, cfg).unwrap();
        assert_eq!(p("(1 + x)^2"), p("1 + 2x + x^2"));
        assert_eq!(p("x / x^3"), p("x^(-2)"));
        assert_eq!(p("t^(1/3) t^(2/3)"), p("t"));
        assert_eq!(p("-x"), p("2*x"));
        assert_eq!(p("(x^(-1))^(-1)"), p("x"));
        let rt = ValConfig::rt(Lambda::default());
        let f = parse_element::<EqElem>("1/(1 + t)*x", &k, rt).unwrap();
        let s = format_element(&f);
        assert_eq!(parse_element::<EqElem>(&s, &k, rt).unwrap(), f);
    }

    #[test]
    fn mixed_precision_round_trip() {
        let ctx = MixedCtx::new(GfCtx::new(3, 2).unwrap(), 6, None).unwrap();
        let cfg = vt();
        let p = |s: &str| parse_element::<MixedElem>(s, &ctx, cfg).unwrap();
        for s in ["w(a) + O(3^(2))", "O(3^(5/2)*x^(3)) + C*x", "x^(3) + O(3^(1)*x^(3))", "(1 + O(3^(1)))*x^(-1)", "[0:1, 1/2:4]@7", "a^3 x^2"] {
            let f = p(s);
            assert_eq!(p(&format_element(&f)), f, "{s} -> {}", format_element(&f));
        }
        assert!(p("O(3^(5/2)*x^(3))").floor().is_some());
        assert!(p("O(3^(5/2))*x^(3)").floor().is_some());
        assert_eq!(p("[0:1]@3"), p("1 + O(3^(3))"));
    }

    /// Per exponent of `x`, coefficients `(n, c, depth)` for `c t^(n/p^depth)`.
    type Terms = Vec<(i64, Vec<(i64, u32, u32)>)>;

    fn eq_poly(k: &Arc<GfCtx>, cfg: ValConfig, terms: Terms) -> LaurentPoly<EqElem> {
        let p = k.p() as i128;
        let ts = terms.into_iter().map(|(i, cs)| {
            let c = cs.into_iter().fold(EqElem::zero(k), |acc, (n, d, depth)| {
                let e = rat(n as i128, p.pow(depth));
                acc.add(&EqElem::monomial(&k.elem(d % k.q()), e).unwrap())
            });
            (i, c)
        });
        LaurentPoly::from_terms(k, cfg, ts)
    }

    proptest! {
        #[test]
        fn equal_char_round_trip(r in 1u32..3, terms in prop::collection::vec((-5i64..6, prop::collection::vec((-6i64..7, 0u32..9, 0u32..3), 1..3)), 0..4), den in prop::option::of(0u32..9)) {
            let k = GfCtx::new(2, r).unwrap();
            let f = eq_poly(&k, vt(), terms);
            // A non-Laurent coefficient.
            let f = match den {
                Some(d) => f.scale(&EqElem::one(&k).add(&EqElem::t(&k).mul(&EqElem::monomial(&k.elem(1 + d % (k.q() - 1)), rat_int(1)).unwrap())).inv().unwrap()),
                None => f,
            };
            let s = format_element(&f);
            let g = parse_element::<EqElem>(&s, &k, vt()).unwrap();
            prop_assert_eq!(&g, &f, "{}", s);
            prop_assert_eq!(format_element(&g), s);
        }

        #[test]
        fn mixed_char_round_trip(p in prop::sample::select(vec![2u32, 3]), terms in prop::collection::vec((-4i64..5, -40i64..40, -3i64..4, 0u32..4), 0..4), lossy in prop::option::of((0i64..4, 1i64..9, any::<bool>()))) {
            let k = GfCtx::new(p, if p == 2 { 1 } else { 2 }).unwrap();
            let ctx = MixedCtx::new(k, 6, None).unwrap();
            let mut f = LaurentPoly::from_terms(&ctx, vt(), terms.into_iter().map(|(i, n, g, num)| {
                let den = if p == 2 { 4 } else { 6 };
                let c = MixedElem::from_int(&ctx, n).mul(&MixedElem::p_pow(&ctx, rat(g as i128 * den + num as i128, den)).unwrap());
                (i, c)
            }));
            if let Some((i, g, floor)) = lossy {
                let z = MixedElem::zero_to(&ctx, rat_int(g as i128)).unwrap();
                if floor || f.coeff(i).is_none() {
                    f = f.add(&LaurentPoly::monomial(&ctx, vt(), z, i));
                } else {
                    let c = f.coeff(i).unwrap().add(&z);
                    let old = LaurentPoly::monomial(&ctx, vt(), f.coeff(i).unwrap().clone(), i);
                    f = f.sub(&old).add(&LaurentPoly::monomial(&ctx, vt(), c, i));
                }
            }
            let s = format_element(&f);
            let g = parse_element::<MixedElem>(&s, &ctx, vt()).unwrap();
            prop_assert_eq!(&g, &f, "{}", s);
            prop_assert_eq!(format_element(&g), s);
        }
    }
}
