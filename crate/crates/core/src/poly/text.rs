//! Canonical text form of polynomials.
//!
//! Rendering lists terms in descending order as `c*x1^3*x2^-2`, with
//! rationals written `p/q`. The parser accepts that output back, plus
//! parentheses and integer powers of subexpressions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exponent::ExponentVector;
use super::laurent::LaurentPoly;
use super::scalar::{fmt_rational, Scalar};
use crate::error::{Error, Result};

/// Variable and parameter names for parsing and rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarContext {
    pub vars: Vec<String>,
    pub params: Vec<String>,
}

impl VarContext {
    pub fn new(vars: Vec<String>, params: Vec<String>) -> Self {
        VarContext { vars, params }
    }

    /// Variables named by `vars`, no parameters.
    pub fn named(vars: &[&str]) -> Self {
        VarContext {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            params: Vec::new(),
        }
    }

    /// `x1, ..., xn` with no parameters.
    pub fn indexed(n: usize) -> Self {
        VarContext {
            vars: default_names(n),
            params: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn parse(&self, src: &str) -> Result<LaurentPoly> {
        parse_poly(src, self)
    }

    pub fn render(&self, p: &LaurentPoly) -> String {
        render(p, &self.vars)
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn render_monomial(e: &ExponentVector, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.as_slice().iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{k}", names[i])),
        }
    }
    parts.join("*")
}

fn render_term(e: &ExponentVector, c: &Scalar, names: &[String]) -> String {
    let mono = render_monomial(e, names);
    if mono.is_empty() {
        return if c.is_single_term() {
            c.to_string()
        } else {
            format!("({c})")
        };
    }
    if c.is_one() {
        return mono;
    }
    if let Some(r) = c.as_rational() {
        if (-r).is_one() {
            return format!("-{mono}");
        }
        return format!("{}*{mono}", fmt_rational(r));
    }
    if c.is_single_term() {
        format!("{c}*{mono}")
    } else {
        format!("({c})*{mono}")
    }
}

/// Canonical rendering with the given variable names.
pub fn render(p: &LaurentPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let t = render_term(e, c, names);
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

fn latex_name(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit());
    match split {
        Some(i) if i > 0 => format!("{}_{}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}

/// LaTeX-style rendering, e.g. `x_1^4 x_2^{-2} x_3^3`.
pub fn render_latex(p: &LaurentPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let mut mono = Vec::new();
        for (v, &k) in e.as_slice().iter().enumerate() {
            let n = latex_name(&names[v]);
            match k {
                0 => {}
                1 => mono.push(n),
                2..=9 => mono.push(format!("{n}^{k}")),
                _ => mono.push(format!("{n}^{{{k}}}")),
            }
        }
        let mono = mono.join(" ");
        let (neg, coeff) = match c.as_rational() {
            Some(r) if r.is_negative() => (true, Scalar::from(-r)),
            _ => (false, c.clone()),
        };
        let body = if mono.is_empty() {
            coeff.to_string()
        } else if coeff.is_one() {
            mono
        } else if coeff.is_single_term() {
            format!("{coeff} {mono}")
        } else {
            format!("({coeff}) {mono}")
        };
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render(self, &default_names(self.nvars())))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a VarContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn lift(&self, r: Result<LaurentPoly>) -> Result<LaurentPoly> {
        r.map_err(|e| Error::Parse {
            pos: self.offset(),
            msg: e.to_string(),
        })
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let n = self.ctx.arity();
        let mut acc = LaurentPoly::zero(n);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            let t = if negate { t.neg() } else { t };
            acc = self.lift(acc.add(&t))?;
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.lift(acc.mul(&f))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = match self.peek() {
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let k = match self.peek() {
                Some(Tok::Num(k)) => k.clone(),
                _ => return self.err("expected integer exponent"),
            };
            self.pos += 1;
            let k: u32 = match u32::try_from(k) {
                Ok(k) if k <= i32::MAX as u32 => k,
                _ => return self.err("exponent too large"),
            };
            if !neg {
                return self.lift(base.pow(k));
            }
            let (e, c) = match base.as_unit_monomial() {
                Some((e, c)) => (e.clone(), c.clone()),
                None => return self.err("negative power of a non-monomial"),
            };
            let inv = LaurentPoly::monomial(self.lift_exp(e.scaled(-1))?, Scalar::from(c.recip()));
            return self.lift(inv.pow(k));
        }
        Ok(base)
    }

    fn lift_exp(&self, r: Result<ExponentVector>) -> Result<ExponentVector> {
        r.map_err(|e| Error::Parse {
            pos: self.offset(),
            msg: e.to_string(),
        })
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let n = self.ctx.arity();
        match self.peek().cloned() {
            Some(Tok::Num(num)) => {
                self.pos += 1;
                let mut r = BigRational::from_integer(num);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    let den = match self.peek() {
                        Some(Tok::Num(d)) => d.clone(),
                        _ => return self.err("expected integer denominator"),
                    };
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    self.pos += 1;
                    r /= BigRational::from_integer(den);
                }
                Ok(LaurentPoly::constant(n, Scalar::from(r)))
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.ctx.vars.iter().position(|v| *v == name) {
                    self.pos += 1;
                    Ok(LaurentPoly::var(n, i))
                } else if self.ctx.params.contains(&name) {
                    self.pos += 1;
                    Ok(LaurentPoly::constant(n, Scalar::param(&name)))
                } else {
                    self.err(format!("unknown identifier {name:?}"))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_poly(src: &str, ctx: &VarContext) -> Result<LaurentPoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        ctx,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a parameter-bearing scalar such as `2`, `-1/3` or `q`.
pub fn parse_scalar(src: &str, params: &[String]) -> Result<Scalar> {
    let ctx = VarContext::new(Vec::new(), params.to_vec());
    let p = parse_poly(src, &ctx)?;
    Ok(p.coeff(&ExponentVector::zero(0)))
}
