//! Expression trees: parsing, rendering, conversion to rational functions,
//! the shift operator and complex floating-point evaluation.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-'? factor
//! factor := base ('^' signed_integer)?
//! base   := rational | 'i' | 'n' | ident | 'u' '(' integer ')' | '(' expr ')' | func '(' expr ')'
//! ```
//!
//! The parser folds constants (a product keeps one leading `Const`, an
//! all-constant sum becomes a `Const`), flattens nested sums and products,
//! turns `-x` into `(-1)*x` and `x/y` into `x*y^-1`. `render` produces text
//! that parses back to the same tree.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::Poly;
use super::ratfun::RatFun;
use super::var::Var;
use crate::error::{Error, Result};
use crate::num::Gq;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sym {
    N,
    Param(String),
    U(u32),
}

impl Sym {
    pub fn to_var(&self) -> Var {
        match self {
            Sym::N => Var::N,
            Sym::Param(p) => Var::param(p),
            Sym::U(k) => Var::u(*k),
        }
    }

    pub fn from_var(v: Var) -> Sym {
        if v.is_n() {
            Sym::N
        } else if let Some(k) = v.u_index() {
            Sym::U(k)
        } else {
            Sym::Param(v.name())
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::N => write!(f, "n"),
            Sym::Param(p) => write!(f, "{p}"),
            Sym::U(k) => write!(f, "u({k})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Func {
    Exp,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Const(Gq),
    Var(Sym),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    IntPower(Box<Expr>, i64),
    FunctionApp(Func, Box<Expr>),
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                let value = parse_decimal(lit).ok_or_else(|| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{lit}`"),
                })?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_lowercase() => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn parse_decimal(lit: &str) -> Option<BigRational> {
    let mut parts = lit.split('.');
    let int = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(n, d))
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (t, off) = self.next();
        if t == want {
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: off,
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    let t = self.term()?;
                    terms.push(negate(t));
                }
                _ => break,
            }
        }
        Ok(make_sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    factors.push(self.unary()?);
                }
                Tok::Slash => {
                    self.next();
                    let f = self.unary()?;
                    factors.push(reciprocal(f));
                }
                _ => break,
            }
        }
        Ok(make_product(factors))
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.next();
            let f = self.factor()?;
            return Ok(make_product(vec![Expr::Const(Gq::from_int(-1)), f]));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let off = self.offset();
        let mut sign = 1i64;
        if *self.peek() == Tok::Minus {
            self.next();
            sign = -1;
        }
        let (t, toff) = self.next();
        let k = match t {
            Tok::Num(r) if r.is_integer() => {
                let v: i64 = r.to_integer().try_into().map_err(|_| Error::Syntax {
                    offset: toff,
                    message: "exponent too large".into(),
                })?;
                v
            }
            Tok::Num(_) | Tok::Ident(_) | Tok::LParen => {
                return Err(Error::NonIntegerExponent { offset: off })
            }
            _ => {
                return Err(Error::Syntax {
                    offset: toff,
                    message: "expected integer exponent".into(),
                })
            }
        };
        Ok(make_power(base, sign * k))
    }

    fn base(&mut self) -> Result<Expr> {
        let (t, off) = self.next();
        match t {
            Tok::Num(r) => Ok(Expr::Const(Gq::real(r))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Expr::Const(Gq::i())),
                "n" => Ok(Expr::Var(Sym::N)),
                "u" => {
                    self.expect(Tok::LParen, "`(` after `u`")?;
                    let (t, ioff) = self.next();
                    let k = match t {
                        Tok::Num(r) if r.is_integer() && !r.is_negative() => {
                            let v: u32 = r.to_integer().try_into().map_err(|_| Error::Syntax {
                                offset: ioff,
                                message: "index too large".into(),
                            })?;
                            v
                        }
                        _ => {
                            return Err(Error::Syntax {
                                offset: ioff,
                                message: "expected nonnegative integer index".into(),
                            })
                        }
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Var(Sym::U(k)))
                }
                "exp" | "sin" | "cos" => {
                    let f = match name.as_str() {
                        "exp" => Func::Exp,
                        "sin" => Func::Sin,
                        _ => Func::Cos,
                    };
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::FunctionApp(f, Box::new(arg)))
                }
                _ => {
                    if *self.peek() == Tok::LParen {
                        return Err(Error::UnknownFunction { name, offset: off });
                    }
                    Ok(Expr::Var(Sym::Param(name)))
                }
            },
            Tok::End => Err(Error::Syntax {
                offset: off,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                offset: off,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Syntax {
            offset: p.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

/// Parse a Gaussian-rational literal such as `1/2+3/4*i`.
pub fn parse_gq(text: &str) -> Result<Gq> {
    match parse_expr(text)? {
        Expr::Const(c) => Ok(c),
        _ => Err(Error::Invalid(format!(
            "`{text}` is not a Gaussian-rational literal"
        ))),
    }
}

// ---------------------------------------------------------------- smart constructors

pub fn make_sum(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t {
            Expr::Sum(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    if flat.iter().all(|t| matches!(t, Expr::Const(_))) {
        let mut acc = Gq::zero();
        for t in &flat {
            if let Expr::Const(c) = t {
                acc = &acc + c;
            }
        }
        return Expr::Const(acc);
    }
    if flat.len() == 1 {
        return flat.pop().expect("one term");
    }
    Expr::Sum(flat)
}

pub fn make_product(factors: Vec<Expr>) -> Expr {
    let mut c = Gq::one();
    let mut rest = Vec::new();
    for f in factors {
        match f {
            Expr::Product(inner) => {
                for g in inner {
                    match g {
                        Expr::Const(k) => c = &c * &k,
                        other => rest.push(other),
                    }
                }
            }
            Expr::Const(k) => c = &c * &k,
            other => rest.push(other),
        }
    }
    if c.is_zero() || rest.is_empty() {
        return Expr::Const(c);
    }
    if c.is_one() {
        if rest.len() == 1 {
            return rest.pop().expect("one factor");
        }
        return Expr::Product(rest);
    }
    let mut out = vec![Expr::Const(c)];
    out.extend(rest);
    Expr::Product(out)
}

pub fn make_power(base: Expr, k: i64) -> Expr {
    if let Expr::Const(c) = &base {
        if let Some(v) = c.pow(k) {
            return Expr::Const(v);
        }
    }
    Expr::IntPower(Box::new(base), k)
}

fn negate(e: Expr) -> Expr {
    make_product(vec![Expr::Const(Gq::from_int(-1)), e])
}

fn reciprocal(e: Expr) -> Expr {
    match &e {
        Expr::Const(c) if !c.is_zero() => Expr::Const(c.inv().expect("nonzero")),
        _ => Expr::IntPower(Box::new(e), -1),
    }
}

// ---------------------------------------------------------------- rendering

fn is_negative_const(c: &Gq) -> bool {
    c.re.is_negative() || (c.re.is_zero() && c.im.is_negative())
}

fn is_negative_term(e: &Expr) -> bool {
    match e {
        Expr::Const(c) => is_negative_const(c),
        Expr::Product(fs) => matches!(fs.first(), Some(Expr::Const(c)) if is_negative_const(c)),
        _ => false,
    }
}

fn render_const_in_product(c: &Gq) -> String {
    if !c.re.is_zero() && !c.im.is_zero() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

fn render_atom(e: &Expr) -> String {
    // Operand of `^`.
    match e {
        Expr::Var(_) | Expr::FunctionApp(..) => render(e),
        _ => format!("({})", render(e)),
    }
}

fn render_factor(e: &Expr) -> String {
    match e {
        Expr::Sum(_) => format!("({})", render(e)),
        Expr::Const(c) => render_const_in_product(c),
        Expr::Product(_) => format!("({})", render(e)),
        _ => render(e),
    }
}

fn render_product(fs: &[Expr]) -> String {
    let mut out = String::new();
    let mut first = true;
    let mut skip_star = false;
    for f in fs {
        if let Expr::IntPower(b, -1) = f {
            out.push_str(if first { "1/" } else { "/" });
            out.push_str(&render_factor(b));
            first = false;
            continue;
        }
        if first {
            if let Expr::Const(c) = f {
                if (-c).is_one() && fs.len() > 1 && !matches!(fs[1], Expr::IntPower(_, -1)) {
                    out.push('-');
                    first = false;
                    skip_star = true;
                    continue;
                }
                if c.is_real() || c.re.is_zero() {
                    out.push_str(&c.to_string());
                } else {
                    out.push_str(&render_const_in_product(c));
                }
            } else {
                out.push_str(&render_factor(f));
            }
            first = false;
        } else {
            if !std::mem::take(&mut skip_star) {
                out.push('*');
            }
            out.push_str(&render_factor(f));
        }
    }
    out
}

fn negated_text(e: &Expr) -> String {
    match e {
        Expr::Const(c) => render_const_in_product(&-c),
        Expr::Product(fs) => {
            let Expr::Const(c) = &fs[0] else {
                unreachable!("negative product has a leading constant")
            };
            let nc = -c;
            let mut rest: Vec<Expr> = Vec::new();
            if !nc.is_one() {
                rest.push(Expr::Const(nc));
            }
            rest.extend(fs[1..].iter().cloned());
            if rest.len() == 1 {
                render_sum_term(&rest[0])
            } else {
                render_product(&rest)
            }
        }
        _ => unreachable!("only constants and products are negative"),
    }
}

fn render_sum_term(e: &Expr) -> String {
    match e {
        Expr::Sum(_) => format!("({})", render(e)),
        Expr::Const(c) => render_const_in_product(c),
        _ => render(e),
    }
}

pub fn render(e: &Expr) -> String {
    match e {
        Expr::Const(c) => c.to_string(),
        Expr::Var(s) => s.to_string(),
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (idx, t) in ts.iter().enumerate() {
                if idx == 0 {
                    out.push_str(&render_sum_term(t));
                } else if is_negative_term(t) {
                    out.push_str(" - ");
                    out.push_str(&negated_text(t));
                } else {
                    out.push_str(" + ");
                    out.push_str(&render_sum_term(t));
                }
            }
            out
        }
        Expr::Product(fs) => render_product(fs),
        Expr::IntPower(b, -1) => format!("1/{}", render_factor(b)),
        Expr::IntPower(b, k) => format!("{}^{}", render_atom(b), k),
        Expr::FunctionApp(f, a) => format!("{}({})", f.name(), render(a)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

// ---------------------------------------------------------------- semantics

impl Expr {
    pub fn has_function(&self) -> bool {
        match self {
            Expr::FunctionApp(..) => true,
            Expr::Sum(v) | Expr::Product(v) => v.iter().any(Expr::has_function),
            Expr::IntPower(b, _) => b.has_function(),
            _ => false,
        }
    }

    pub fn symbols(&self, out: &mut Vec<Sym>) {
        match self {
            Expr::Var(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Sum(v) | Expr::Product(v) => v.iter().for_each(|x| x.symbols(out)),
            Expr::IntPower(b, _) | Expr::FunctionApp(_, b) => b.symbols(out),
            Expr::Const(_) => {}
        }
    }

    /// `n ↦ n+i`, `U(k) ↦ U(k+i)`.
    pub fn shift(&self, i: u32) -> Expr {
        match self {
            Expr::Var(Sym::N) if i > 0 => {
                Expr::Sum(vec![Expr::Var(Sym::N), Expr::Const(Gq::from_int(i as i64))])
            }
            Expr::Var(Sym::U(k)) => Expr::Var(Sym::U(k + i)),
            Expr::Var(_) | Expr::Const(_) => self.clone(),
            Expr::Sum(v) => Expr::Sum(v.iter().map(|x| x.shift(i)).collect()),
            Expr::Product(v) => Expr::Product(v.iter().map(|x| x.shift(i)).collect()),
            Expr::IntPower(b, k) => Expr::IntPower(Box::new(b.shift(i)), *k),
            Expr::FunctionApp(f, a) => Expr::FunctionApp(*f, Box::new(a.shift(i))),
        }
    }

    pub fn to_rational(&self) -> Result<RatFun> {
        match self {
            Expr::Const(c) => Ok(RatFun::constant(c.clone())),
            Expr::Var(s) => Ok(RatFun::var(s.to_var())),
            Expr::Sum(v) => {
                let mut acc = RatFun::from_int(0);
                for t in v {
                    acc = acc.add_rf(&t.to_rational()?);
                }
                Ok(acc)
            }
            Expr::Product(v) => {
                let mut acc = RatFun::from_int(1);
                for t in v {
                    acc = acc.mul_rf(&t.to_rational()?);
                }
                Ok(acc)
            }
            Expr::IntPower(b, k) => b.to_rational()?.powi(*k).ok_or(Error::DivisionByZero),
            Expr::FunctionApp(..) => Err(Error::NonRational),
        }
    }

    pub fn eval_numeric(&self, bind: &Bindings) -> Result<Complex64> {
        match self {
            Expr::Const(c) => Ok(c.to_complex()),
            Expr::Var(s) => bind
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnboundSymbol(s.to_string())),
            Expr::Sum(v) => v.iter().try_fold(Complex64::new(0.0, 0.0), |acc, t| {
                Ok(acc + t.eval_numeric(bind)?)
            }),
            Expr::Product(v) => v.iter().try_fold(Complex64::new(1.0, 0.0), |acc, t| {
                Ok(acc * t.eval_numeric(bind)?)
            }),
            Expr::IntPower(b, k) => {
                let x = b.eval_numeric(bind)?;
                if *k < 0 && x.norm() == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(x.powi(*k as i32))
            }
            Expr::FunctionApp(f, a) => {
                let x = a.eval_numeric(bind)?;
                Ok(match f {
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                })
            }
        }
    }
}

pub type Bindings = HashMap<Sym, Complex64>;

pub fn poly_to_expr(p: &Poly) -> Expr {
    if p.is_zero() {
        return Expr::Const(Gq::zero());
    }
    let terms: Vec<Expr> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut fs = vec![Expr::Const(c.clone())];
            for &(v, e) in m {
                let x = Expr::Var(Sym::from_var(v));
                fs.push(if e == 1 {
                    x
                } else {
                    Expr::IntPower(Box::new(x), e as i64)
                });
            }
            make_product(fs)
        })
        .collect();
    make_sum(terms)
}

pub fn ratfun_to_expr(r: &RatFun) -> Expr {
    let n = poly_to_expr(r.num());
    if r.den().is_one() {
        return n;
    }
    let d = poly_to_expr(r.den());
    match n {
        Expr::Product(mut fs) => {
            fs.push(Expr::IntPower(Box::new(d), -1));
            Expr::Product(fs)
        }
        Expr::Const(c) if c.is_one() => Expr::IntPower(Box::new(d), -1),
        Expr::Const(c) => Expr::Product(vec![Expr::Const(c), Expr::IntPower(Box::new(d), -1)]),
        other => Expr::Product(vec![other, Expr::IntPower(Box::new(d), -1)]),
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&ratfun_to_expr(self)))
    }
}

pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    parse_expr(text)?.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: u32) -> Expr {
        Expr::Var(Sym::U(k))
    }

    fn p(name: &str) -> Expr {
        Expr::Var(Sym::Param(name.into()))
    }

    #[test]
    fn grammar_derivation() {
        let e = parse_expr("u(1)^2 + d*u(1) + e").unwrap();
        assert_eq!(
            e,
            Expr::Sum(vec![
                Expr::IntPower(Box::new(u(1)), 2),
                Expr::Product(vec![p("d"), u(1)]),
                p("e")
            ])
        );
    }

    #[test]
    fn incomplete_call_reports_offset() {
        match parse_expr("u(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_function_and_bad_exponent() {
        assert!(matches!(
            parse_expr("tan(n)"),
            Err(Error::UnknownFunction { .. })
        ));
        assert!(matches!(
            parse_expr("u(0)^n"),
            Err(Error::NonIntegerExponent { .. })
        ));
        assert!(matches!(
            parse_expr("u(0)^1.5"),
            Err(Error::NonIntegerExponent { .. })
        ));
    }

    #[test]
    fn complex_literal_folds() {
        assert_eq!(
            parse_expr("1/2+3/4*i").unwrap(),
            Expr::Const(Gq::from_parts((1, 2), (3, 4)))
        );
        assert_eq!(parse_gq("-i").unwrap(), -Gq::i());
        assert_eq!(parse_gq("0.25").unwrap(), Gq::from_frac(1, 4));
    }

    #[test]
    fn render_roundtrip_on_samples() {
        for text in [
            "-u(0)-u(1)+(a*n+b)/u(1)+c",
            "(a*u(1)^2+b*u(1)+c)/(u(0)*(u(1)^2+d*u(1)+e))",
            "(-u(0)*u(1)+mu/u(1)^2+eps0)/(u(0)+u(1))",
            "u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))",
            "-3/4*i*u(0) - (1/2-i)*n + 1/b",
            "exp(n)^2 - cos(2*n)",
            "(u(0)^2)^3 - u(1)^-2",
            "2 - 1/2*i",
        ] {
            let t = parse_expr(text).unwrap();
            let back = parse_expr(&render(&t)).unwrap();
            assert_eq!(back, t, "{text} -> {}", render(&t));
        }
    }

    #[test]
    fn cancellation_example() {
        let e = parse_expr("(u(0)+u(1))*u(0)^-1 - u(1)*u(0)^-1").unwrap();
        assert_eq!(e.to_rational().unwrap(), RatFun::from_int(1));
        assert_eq!(
            parse_expr("exp(n)").unwrap().to_rational(),
            Err(Error::NonRational)
        );
    }

    #[test]
    fn shift_of_affine() {
        let e = parse_expr("a*n+b").unwrap().shift(2);
        assert_eq!(render(&e), "a*(n + 2) + b");
    }

    #[test]
    fn numeric_evaluation() {
        let e = parse_expr("-u(0)-u(1)+(a*n+b)/u(1)+c").unwrap();
        let mut b = Bindings::new();
        for (s, v) in [
            (Sym::Param("a".into()), 1.0),
            (Sym::Param("b".into()), 0.0),
            (Sym::Param("c".into()), 0.0),
            (Sym::N, 2.0),
            (Sym::U(0), 1.0),
            (Sym::U(1), 2.0),
        ] {
            b.insert(s, Complex64::new(v, 0.0));
        }
        assert_eq!(e.eval_numeric(&b).unwrap(), Complex64::new(-2.0, 0.0));
        let sq = parse_expr("i^2").unwrap();
        assert_eq!(
            sq.eval_numeric(&Bindings::new()).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
        let inv = parse_expr("1/u(1)").unwrap();
        let mut z = Bindings::new();
        z.insert(Sym::U(1), Complex64::new(0.0, 0.0));
        assert_eq!(inv.eval_numeric(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn one_over_is_not_a_product() {
        assert_eq!(
            parse_expr("1/u(0)").unwrap(),
            Expr::IntPower(Box::new(u(0)), -1)
        );
    }
}
