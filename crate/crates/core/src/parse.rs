//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' uint)? | '-' factor
//! atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | sqrt | log | relu | abs
//! curve  := expr | '[' expr (',' expr)* ']'
//! ```

use crate::error::{Error, Result};
use crate::expr::{Expr, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Uint(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        loop {
            let (tok, at) = self.next()?;
            let done = tok == Tok::End;
            out.push((tok, at));
            if done {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((tok, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(Error::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let from = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - from
        };
        let int_digits = digits(&mut self.pos);
        let mut is_uint = true;
        let mut frac_digits = 0;
        if bytes.get(self.pos) == Some(&b'.') {
            is_uint = false;
            self.pos += 1;
            frac_digits = digits(&mut self.pos);
        }
        if int_digits + frac_digits == 0 {
            return Err(Error::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if matches!(bytes.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(bytes.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(&mut self.pos) == 0 {
                return Err(Error::Syntax {
                    offset: save,
                    message: "exponent has no digits".into(),
                });
            }
            is_uint = false;
        }
        let text = &self.src[start..self.pos];
        if is_uint {
            if let Ok(n) = text.parse::<u32>() {
                return Ok((Tok::Uint(n), start));
            }
        }
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        if !value.is_finite() {
            return Err(Error::Syntax {
                offset: start,
                message: format!("number `{text}` overflows"),
            });
        }
        Ok((Tok::Num(value), start))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Self {
            toks: Lexer::new(src).tokens()?,
            idx: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn offset(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.idx].0.clone();
        if tok != Tok::End {
            self.idx += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            tok => format!("{tok:?}"),
        };
        Error::Syntax {
            offset: self.offset(),
            message: format!("expected {what}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return match self.bump() {
                Tok::Uint(n) => Ok(Expr::pow(base, n)),
                _ => {
                    self.idx -= 1;
                    Err(self.unexpected("a nonnegative integer exponent"))
                }
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Uint(n) => {
                self.bump();
                Ok(Expr::Const(n as f64))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "x" {
                    return Ok(Expr::Var);
                }
                let func = Func::from_name(&name)
                    .ok_or(Error::UnknownIdentifier { name, offset: at })?;
                self.expect(Tok::LParen, "`(` after function name")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::call(func, arg))
            }
            _ => Err(self.unexpected("a number, `x`, a function call or `(`")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a single scalar expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a curve: a single expression or a bracketed component list.
pub fn parse_curve(text: &str) -> Result<Vec<Expr>> {
    let mut p = Parser::new(text)?;
    if *p.peek() != Tok::LBracket {
        let e = p.expr()?;
        p.finish()?;
        return Ok(vec![e]);
    }
    p.bump();
    let mut components = vec![p.expr()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        components.push(p.expr()?);
    }
    p.expect(Tok::RBracket, "`,` or `]`")?;
    p.finish()?;
    Ok(components)
}
