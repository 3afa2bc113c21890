//! Series literal grammar.
//!
//! ```text
//! series  := term (("+"|"-") term)* ["+" "O(" ident "^" int ["," ident "^" int] ")"]
//! term    := rat ["*" mono] | mono | rat
//! mono    := ident ["^" int] ("*" ident ["^" int])*
//! rat     := ["-"] digits ["/" digits]
//! ```
//!
//! Whitespace is ignored. Printing in `series` and `bivar` emits exactly
//! this grammar, so parse/print round-trips.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_q, Q};
use crate::series::LaurentSeries;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Slash,
    Star,
    Caret,
    Plus,
    Minus,
    LParen,
    RParen,
    Comma,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '0'..='9' => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Num(cs[st..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let st = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[st..i].iter().collect()));
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// A parsed literal: signed monomial terms and optional precision markers.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub terms: Vec<(Q, Vec<(String, i64)>)>,
    /// Per-variable markers `O(x^a, z^b)`.
    pub orders: Vec<(String, i64)>,
    /// Total-degree marker `O(x, y)^N`.
    pub total: Option<(Vec<String>, i64)>,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let mut neg = false;
        let mut paren = false;
        if self.peek() == Some(&Tok::LParen) {
            paren = true;
            self.bump();
        }
        if self.peek() == Some(&Tok::Minus) {
            neg = true;
            self.bump();
        }
        let v = match self.bump() {
            Some(Tok::Num(d)) => d
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad exponent {d}")))?,
            got => return Err(Error::Parse(format!("expected exponent, found {got:?}"))),
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self, name: String) -> Result<(String, i64)> {
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            Ok((name, self.int()?))
        } else {
            Ok((name, 1))
        }
    }

    fn mono(&mut self, first: String) -> Result<Vec<(String, i64)>> {
        let mut fs = vec![self.factor(first)?];
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            match self.bump() {
                Some(Tok::Ident(n)) => fs.push(self.factor(n)?),
                got => return Err(Error::Parse(format!("expected variable, found {got:?}"))),
            }
        }
        Ok(fs)
    }

    fn term(&mut self) -> Result<(Q, Vec<(String, i64)>)> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut text = n;
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) => text = format!("{text}/{d}"),
                        got => return Err(Error::Parse(format!("expected denominator, found {got:?}"))),
                    }
                }
                let c = parse_q(&text)?;
                if self.peek() == Some(&Tok::Star) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Ident(v)) => Ok((c, self.mono(v)?)),
                        got => Err(Error::Parse(format!("expected variable, found {got:?}"))),
                    }
                } else {
                    Ok((c, vec![]))
                }
            }
            Some(Tok::Ident(v)) => Ok((Q::one(), self.mono(v)?)),
            got => Err(Error::Parse(format!("expected term, found {got:?}"))),
        }
    }

    fn orders(&mut self) -> Result<Vec<(String, Option<i64>)>> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        loop {
            let v = match self.bump() {
                Some(Tok::Ident(v)) => v,
                got => return Err(Error::Parse(format!("expected variable in O(), found {got:?}"))),
            };
            if self.peek() == Some(&Tok::Caret) {
                self.bump();
                out.push((v, Some(self.int()?)));
            } else {
                out.push((v, None));
            }
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                got => return Err(Error::Parse(format!("expected ',' or ')', found {got:?}"))),
            }
        }
        Ok(out)
    }
}

pub fn parse_literal(s: &str) -> Result<Literal> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let mut lit = Literal { terms: vec![], orders: vec![], total: None };
    if p.peek().is_none() {
        return Err(Error::Parse("empty literal".into()));
    }
    let mut sign = Q::one();
    if p.peek() == Some(&Tok::Minus) {
        p.bump();
        sign = -Q::one();
    }
    loop {
        if matches!(p.peek(), Some(Tok::Ident(o)) if o == "O")
            && p.toks.get(p.pos + 1) == Some(&Tok::LParen)
        {
            if sign != Q::one() {
                return Err(Error::Parse("precision marker must be added".into()));
            }
            p.bump();
            let marks = p.orders()?;
            if p.peek() == Some(&Tok::Caret) {
                p.bump();
                let n = p.int()?;
                if marks.iter().any(|(_, e)| e.is_some()) {
                    return Err(Error::Parse("total-degree marker takes bare variables".into()));
                }
                lit.total = Some((marks.into_iter().map(|(v, _)| v).collect(), n));
            } else {
                for (v, e) in marks {
                    match e {
                        Some(e) => lit.orders.push((v, e)),
                        None => return Err(Error::Parse(format!("missing exponent for {v} in O()"))),
                    }
                }
            }
            if p.peek().is_some() {
                return Err(Error::Parse("trailing input after O()".into()));
            }
            break;
        }
        let (c, m) = p.term()?;
        lit.terms.push((c * &sign, m));
        match p.bump() {
            None => break,
            Some(Tok::Plus) => sign = Q::one(),
            Some(Tok::Minus) => sign = -Q::one(),
            Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
    Ok(lit)
}

/// Collects the single variable name used in a literal, if any.
pub(crate) fn variables(lit: &Literal) -> Vec<String> {
    let mut vs: Vec<String> = Vec::new();
    for (_, m) in &lit.terms {
        for (v, _) in m {
            if !vs.contains(v) {
                vs.push(v.clone());
            }
        }
    }
    let total = lit.total.iter().flat_map(|(vs, _)| vs.iter());
    for v in lit.orders.iter().map(|(v, _)| v).chain(total) {
        if !vs.contains(v) {
            vs.push(v.clone());
        }
    }
    vs
}

/// Parses a univariate series in `var`.
pub fn parse_series(s: &str, var: &str) -> Result<LaurentSeries> {
    let lit = parse_literal(s)?;
    let vs = variables(&lit);
    if vs.iter().any(|v| v != var) {
        return Err(Error::Parse(format!("expected only variable {var}, found {vs:?}")));
    }
    univariate(&lit, var)
}

/// Parses a univariate series, inferring its variable (default `x`).
pub fn parse_series_any(s: &str) -> Result<(LaurentSeries, String)> {
    let lit = parse_literal(s)?;
    let vs = variables(&lit);
    if vs.len() > 1 {
        return Err(Error::Parse(format!("expected one variable, found {vs:?}")));
    }
    let var = vs.into_iter().next().unwrap_or_else(|| "x".to_string());
    Ok((univariate(&lit, &var)?, var))
}

fn univariate(lit: &Literal, var: &str) -> Result<LaurentSeries> {
    if lit.total.is_some() {
        return Err(Error::Parse("total-degree marker in a univariate literal".into()));
    }
    let order = match lit.orders.as_slice() {
        [] => crate::series::EXACT,
        [(_, n)] => *n,
        _ => return Err(Error::Parse("univariate literal takes one O() marker".into())),
    };
    let mut terms = Vec::new();
    for (c, m) in &lit.terms {
        let e: i64 = m.iter().map(|(_, e)| *e).sum();
        if e >= order {
            return Err(Error::Parse(format!("term x^{e} lies beyond O({var}^{order})")));
        }
        if !c.is_zero() {
            terms.push((e, c.clone()));
        }
    }
    Ok(LaurentSeries::new(order, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};

    #[test]
    fn spec_example_round_trip() {
        let s = "x + 1/3*x^3 + 1/5*x^5 + O(x^7)";
        let a = parse_series(s, "x").unwrap();
        assert_eq!(a.order(), 7);
        assert_eq!(a.get(3), qr(1, 3));
        assert_eq!(a.to_literal("x"), s);
    }

    #[test]
    fn signs_and_negative_exponents() {
        let a = parse_series("-x^-1 + 2 - 3/4*x^2", "x").unwrap();
        assert_eq!(a.get(-1), q(-1));
        assert_eq!(a.get(0), q(2));
        assert_eq!(a.get(2), qr(-3, 4));
        assert!(a.is_exact());
        assert_eq!(parse_series(&a.to_literal("x"), "x").unwrap(), a);
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_series(" x+ 1/2 * x ^ 2 +O( x ^4 )", "x").unwrap();
        assert_eq!(a.to_literal("x"), "x + 1/2*x^2 + O(x^4)");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_series("x +", "x").is_err());
        assert!(parse_series("x + y", "x").is_err());
        assert!(parse_series("x^9 + O(x^3)", "x").is_err());
        assert!(parse_series("1/0*x", "x").is_err());
    }
}
