//! Recursive-descent parser for the infix expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          exponent must fold to an integer
//! primary := number | name | func '(' expr ')' | 'diff' '(' expr (',' coord)+ ')'
//!          | '(' expr ')'
//! number  := digits ('.' digits)?
//! func    := exp | log | sin | cos | sqrt
//! ```
//! `i` is the imaginary unit. Every other name must be a declared
//! coordinate or parameter.

use num_traits::ToPrimitive;

use super::number::parse_rational;
use super::{Expr, Func, GaussRational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

/// Declared coordinates and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseContext {
    pub coords: [String; 2],
    pub params: Vec<String>,
}

impl Default for ParseContext {
    fn default() -> Self {
        ParseContext {
            coords: ["x".into(), "y".into()],
            params: Vec::new(),
        }
    }
}

impl ParseContext {
    pub fn new(x: &str, y: &str, params: &[&str]) -> Self {
        ParseContext {
            coords: [x.into(), y.into()],
            params: params.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn is_coord(&self, s: &str) -> bool {
        self.coords.iter().any(|c| c == s)
    }

    fn is_declared(&self, s: &str) -> bool {
        self.is_coord(s) || self.params.iter().any(|p| p == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let c = b[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit()
            || (c == '.' && k + 1 < b.len() && (b[k + 1] as char).is_ascii_digit())
        {
            let start = k;
            while k < b.len() && ((b[k] as char).is_ascii_digit() || b[k] == b'.') {
                k += 1;
            }
            out.push((start, Tok::Num(s[start..k].to_string())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < b.len() && ((b[k] as char).is_ascii_alphanumeric() || b[k] == b'_') {
                k += 1;
            }
            out.push((start, Tok::Ident(s[start..k].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((k, Tok::Op(c)));
            k += 1;
        } else {
            return Err(ParseError {
                pos: k,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
    ctx: &'a ParseContext,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: msg.into(),
        })
    }

    fn peek_op(&self, c: char) -> bool {
        matches!(self.toks.get(self.k), Some((_, Tok::Op(o))) if *o == c)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_op(c) {
            self.k += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.peek_op('+') {
                self.k += 1;
                terms.push(self.term()?);
            } else if self.peek_op('-') {
                self.k += 1;
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::add_all(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.k += 1;
                acc = acc * self.unary()?;
            } else if self.peek_op('/') {
                let at = self.pos();
                self.k += 1;
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| ParseError {
                    pos: at,
                    message: "zero denominator".into(),
                })?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_op('-') {
            self.k += 1;
            return Ok(-self.unary()?);
        }
        if self.peek_op('+') {
            self.k += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.k += 1;
        let at = self.pos();
        let ex = self.unary()?;
        let n = ex
            .as_const()
            .filter(|q| q.is_real() && q.re.is_integer())
            .and_then(|q| q.re.to_integer().to_i64())
            .ok_or_else(|| ParseError {
                pos: at,
                message: "exponent must be an integer constant".into(),
            })?;
        base.checked_pow(n).map_err(|_| ParseError {
            pos: at,
            message: "negative power of zero".into(),
        })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some((at, tok)) = self.toks.get(self.k).cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Num(s) => {
                self.k += 1;
                let q = parse_rational(&s).ok_or(ParseError {
                    pos: at,
                    message: format!("bad number `{s}`"),
                })?;
                Ok(Expr::constant(GaussRational::real(q)))
            }
            Tok::Op('(') => {
                self.k += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.k += 1;
                if name == "diff" {
                    return self.diff_call();
                }
                if let Some(f) = Func::from_name(&name) {
                    self.expect_op('(')?;
                    let a = self.expr()?;
                    self.expect_op(')')?;
                    return Ok(Expr::apply(f, a));
                }
                if name == "i" {
                    return Ok(Expr::imag_unit());
                }
                if self.ctx.is_declared(&name) {
                    return Ok(Expr::sym(&name));
                }
                Err(ParseError {
                    pos: at,
                    message: format!("unknown identifier `{name}`"),
                })
            }
            Tok::Op(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn diff_call(&mut self) -> Result<Expr, ParseError> {
        self.expect_op('(')?;
        let mut e = self.expr()?;
        let mut any = false;
        while self.peek_op(',') {
            self.k += 1;
            match self.toks.get(self.k).cloned() {
                Some((_, Tok::Ident(v))) if self.ctx.is_coord(&v) => {
                    self.k += 1;
                    e = e.deriv_node(&v, 1);
                    any = true;
                }
                _ => return self.err("diff expects coordinate names"),
            }
        }
        if !any {
            return self.err("diff needs at least one coordinate");
        }
        self.expect_op(')')?;
        Ok(e)
    }
}

impl Expr {
    /// Parses `text` with the declared symbols in `ctx`.
    pub fn parse(text: &str, ctx: &ParseContext) -> Result<Expr, ParseError> {
        for name in ctx.coords.iter().chain(ctx.params.iter()) {
            if name == "i" || name == "diff" || Func::from_name(name).is_some() {
                return Err(ParseError {
                    pos: 0,
                    message: format!("reserved name `{name}` declared as a symbol"),
                });
            }
        }
        let toks = lex(text)?;
        let mut p = Parser {
            toks,
            k: 0,
            end: text.len(),
            ctx,
        };
        let e = p.expr()?;
        if p.k != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}
