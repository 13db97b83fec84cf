use num_traits::ToPrimitive;

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::canonical::PhaseSpace;
use crate::symcore::{Expr, Func, Poly, MAX_EXPONENT};

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    space: &'a PhaseSpace,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn unexpected(&self) -> ParseError {
        if self.pos < self.tokens.len() {
            ParseError::UnexpectedToken { offset: self.offset() }
        } else {
            ParseError::UnexpectedEnd { offset: self.end }
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = Expr::mul(acc, self.unary()?);
            } else if self.eat(&Tok::Slash) {
                acc = Expr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(Expr::neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let offset = self.offset();
        let exponent = self.unary()?;
        let k = Poly::from_expr(&exponent)
            .ok()
            .and_then(|p| p.as_constant())
            .filter(|c| c.is_integer())
            .and_then(|c| c.to_integer().to_i64())
            .filter(|k| k.abs() <= MAX_EXPONENT)
            .ok_or(ParseError::NonIntegerExponent { offset })?;
        Ok(Expr::pow(base, k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        let tok = self.peek().cloned().ok_or(ParseError::UnexpectedEnd { offset: self.end })?;
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::constant(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected());
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(f) = Func::from_name(&name) {
                    if !self.eat(&Tok::LParen) {
                        return Err(self.unexpected());
                    }
                    if self.peek() == Some(&Tok::RParen) {
                        return Err(ParseError::ArityMismatch { name, offset });
                    }
                    let arg = self.expr()?;
                    if self.peek() == Some(&Tok::Comma) {
                        return Err(ParseError::ArityMismatch { name, offset });
                    }
                    if !self.eat(&Tok::RParen) {
                        return Err(self.unexpected());
                    }
                    return Ok(Expr::func(f, arg));
                }
                match self.space.resolve(&name) {
                    Some(v) => Ok(Expr::var(v)),
                    None => Err(ParseError::UnknownIdentifier { name, offset }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` against the variables declared by `space`.
pub fn parse(text: &str, space: &PhaseSpace) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len(), space };
    let e = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.unexpected());
    }
    Ok(e)
}
