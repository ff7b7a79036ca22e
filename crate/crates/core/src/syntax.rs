//! Plain-text expressions: a parser for rational functions and operators and
//! a deterministic printer whose output parses back to the same value.
//!
//! Grammar: `+ -` bind weakest, then `* /`, then unary minus, then `^` with a
//! nonnegative integer literal exponent. Binary operators are left
//! associative. Integer literals are unbounded; there are no floats.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hyperexp::HElement;
use crate::ore::OreOp;
use crate::poly::{MPoly, Rat};
use crate::ratfun::RatFun;

/// Name of the operator variable in rendered operators.
pub const DT: &str = "Dt";

/// Default names `t, x1, .., xn` for `n + 1` variables.
pub fn default_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| if i == 0 { "t".to_string() } else { format!("x{i}") }).collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Lexer {
    fn new(src: &str, line: usize, col0: usize) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (at, ch) = chars[i];
            let col = src[..at].chars().count();
            if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = chars.get(i).map_or(src.len(), |c| c.0);
                if i < chars.len() && chars[i].1 == '.' {
                    return Err(syntax(line, col0 + col, "floating-point literals are not accepted"));
                }
                toks.push((Tok::Int(src[chars[start].0..end].parse().expect("digits")), col));
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let end = chars.get(i).map_or(src.len(), |c| c.0);
                toks.push((Tok::Ident(src[chars[start].0..end].to_string()), col));
            } else if "+-*/^()".contains(ch) {
                toks.push((Tok::Op(ch), col));
                i += 1;
            } else {
                return Err(syntax(line, col0 + col, &format!("unexpected character `{ch}`")));
            }
        }
        toks.push((Tok::End, src.chars().count()));
        Ok(Lexer { toks, pos: 0, line, col0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.col0 + self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> Error {
        syntax(self.line, self.col(), message)
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax { line, column: column + 1, message: message.to_string() }
}

struct Parser<'a> {
    lex: Lexer,
    names: &'a [String],
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        loop {
            match self.lex.peek() {
                Tok::Op('+') => {
                    self.lex.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.lex.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.unary()?;
        loop {
            match self.lex.peek() {
                Tok::Op('*') => {
                    self.lex.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.lex.next();
                    let col = self.lex.col();
                    let d = self.unary()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| syntax(self.lex.line, col, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun> {
        if *self.lex.peek() == Tok::Op('-') {
            self.lex.next();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if *self.lex.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.lex.next();
        match self.lex.next() {
            Tok::Int(k) => {
                let k: i32 = k.try_into().map_err(|_| self.lex.error("exponent too large"))?;
                if *self.lex.peek() == Tok::Op('^') {
                    return Err(self.lex.error("chained exponents need parentheses"));
                }
                base.pow(k)
            }
            _ => Err(self.lex.error("exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<RatFun> {
        let n = self.names.len();
        let col = self.lex.col();
        match self.lex.next() {
            Tok::Int(k) => Ok(RatFun::constant(n, Rat::from_integer(k))),
            Tok::Ident(name) => match self.names.iter().position(|v| *v == name) {
                Some(i) => Ok(RatFun::var(n, i)),
                None => Err(Error::UnknownVariable(name)),
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.lex.next() != Tok::Op(')') {
                    return Err(syntax(self.lex.line, self.lex.col(), "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(syntax(self.lex.line, col, "unexpected end of expression")),
            Tok::Op(c) => Err(syntax(self.lex.line, col, &format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `text` as a rational function in the variables `names`
/// (index order). Reported columns are 1-based; `line` and `col0` locate the
/// text inside a larger document.
pub fn parse_expr_at(text: &str, names: &[String], line: usize, col0: usize) -> Result<RatFun> {
    let mut p = Parser { lex: Lexer::new(text, line, col0)?, names };
    if *p.lex.peek() == Tok::End {
        return Err(p.lex.error("empty expression"));
    }
    let e = p.expr()?;
    if *p.lex.peek() != Tok::End {
        return Err(p.lex.error("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_expr(text: &str, names: &[String]) -> Result<RatFun> {
    parse_expr_at(text, names, 1, 0)
}

/// Parses an operator written as a sum of `coeff*Dt^k` terms, coefficients
/// to the left of the powers of `Dt`.
pub fn parse_operator(text: &str, names: &[String]) -> Result<OreOp> {
    let n = names.len();
    let mut ext = names.to_vec();
    ext.push(DT.to_string());
    let f = parse_expr(text, &ext)?;
    if !f.den().is_free_of_all_but(&(0..n).collect::<Vec<_>>()) {
        return Err(syntax(1, 0, "Dt may not occur in a denominator"));
    }
    let den = drop_last_var(f.den(), n);
    let coeffs: Vec<RatFun> = f
        .num()
        .coeffs_in(n)
        .iter()
        .map(|c| RatFun::new(drop_last_var(c, n), den.clone()).expect("nonzero denominator"))
        .collect();
    Ok(OreOp::from_coeffs(n, coeffs))
}

fn drop_last_var(p: &MPoly, n: usize) -> MPoly {
    MPoly::from_terms(
        n,
        p.terms().iter().map(|(e, c)| (crate::poly::Exponents(e.0[..n].to_vec()), c.clone())),
    )
}

fn monomial_text(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { names[v].clone() } else { format!("{}^{}", names[v], k) })
        .collect();
    parts.join("*")
}

fn rat_text(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Polynomial text with a leading sign only when the leading coefficient is
/// negative.
pub fn render_poly(p: &MPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let m = monomial_text(&e.0, names);
        if m.is_empty() {
            out.push_str(&rat_text(&a));
        } else if a.is_one() {
            out.push_str(&m);
        } else {
            out.push_str(&rat_text(&a));
            out.push('*');
            out.push_str(&m);
        }
    }
    out
}

fn is_bare_power(p: &MPoly) -> bool {
    p.num_terms() == 1
        && p.terms()[0].1.is_one()
        && p.terms()[0].0 .0.iter().filter(|&&k| k > 0).count() == 1
}

fn is_atomic(p: &MPoly) -> bool {
    p.num_terms() == 1 && !p.terms()[0].1.is_negative() && p.terms()[0].1.is_integer()
}

pub fn render_ratfun(f: &RatFun, names: &[String]) -> String {
    let num = render_poly(f.num(), names);
    if f.den().is_one() {
        return num;
    }
    let num = if f.num().num_terms() > 1 { format!("({num})") } else { num };
    let den = render_poly(f.den(), names);
    if is_bare_power(f.den()) {
        format!("{num}/{den}")
    } else {
        format!("{num}/({den})")
    }
}

/// `c*X`, returning the text and whether it carries a leading minus.
fn scaled(c: &RatFun, x: &str, names: &[String]) -> (bool, String) {
    let neg = c.num().leading_coeff().is_negative();
    let a = if neg { -c } else { c.clone() };
    let body = if x.is_empty() {
        // a polynomial sum after an extracted sign needs parentheses
        if neg && a.den().is_one() && a.num().num_terms() > 1 {
            format!("({})", render_poly(a.num(), names))
        } else {
            render_ratfun(&a, names)
        }
    } else if a.is_one() {
        x.to_string()
    } else if a.den().is_one() && is_atomic(a.num()) {
        format!("{}*{x}", render_poly(a.num(), names))
    } else {
        format!("({})*{x}", render_ratfun(&a, names))
    };
    (neg, body)
}

fn join_signed(items: Vec<(bool, String)>) -> String {
    if items.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in items.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Operator text, highest order first: `8*t^3*Dt^3 - 12*t^2*Dt^2 + 18*t*Dt - 15`.
pub fn render_operator(op: &OreOp, names: &[String]) -> String {
    let items = (0..op.coeffs().len())
        .rev()
        .filter(|&i| !op.coeff(i).is_zero())
        .map(|i| {
            let d = match i {
                0 => String::new(),
                1 => DT.to_string(),
                _ => format!("{DT}^{i}"),
            };
            scaled(&op.coeff(i), &d, names)
        })
        .collect();
    join_signed(items)
}

/// Element text as a sum of `coeff*label` parts; parts over the trivial term
/// print as the bare coefficient.
pub fn render_element(f: &HElement, names: &[String]) -> String {
    let items = f
        .parts()
        .iter()
        .map(|(c, h)| if h.is_trivial() { scaled(c, "", names) } else { scaled(c, h.label(), names) })
        .collect();
    join_signed(items)
}

/// `{ a ∈ F : L(a) = 0 }` for the monic form of `op`.
pub fn render_group(op: &OreOp, names: &[String]) -> String {
    if op.order() == 0 {
        return "{ a ∈ F : a = 0 }".to_string();
    }
    let monic = op.monic();
    let text = render_operator(&monic, names);
    let applied = if monic.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
        format!("{text}(a)")
    } else {
        format!("({text})(a)")
    };
    format!("{{ a ∈ F : {applied} = 0 }}")
}
