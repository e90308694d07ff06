//! Recursive-descent parser for polynomial expressions in exponent notation.

use num_bigint::BigInt;
use thiserror::Error;

use super::{NcPoly, Word};
use crate::upoly::ExpPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected {found} at offset {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("exponent set is only allowed on `a` (offset {pos})")]
    SetExponent { pos: usize },
    #[error("empty range {lo}..{hi} at offset {pos}")]
    EmptyRange { pos: usize, lo: u32, hi: u32 },
    #[error("number too large at offset {pos}")]
    Overflow { pos: usize },
}

pub(super) fn parse(text: &str) -> Result<NcPoly, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Exponent {
    Int(u32),
    Multiset(ExpPoly),
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("{:?}", c as char),
            None => "end of input".to_string(),
        };
        ExprError::Unexpected {
            pos: self.pos,
            found,
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<NcPoly, ExprError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == b'a' || c == b'b' || c == b'(' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<NcPoly, ExprError> {
        let start = self.pos;
        let base = match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                return Ok(match self.exponent()? {
                    None => NcPoly::letter_a(),
                    Some(Exponent::Int(k)) => NcPoly::from_word(Word::a_pow(k)),
                    Some(Exponent::Multiset(h)) => NcPoly::from_upoly(&h),
                });
            }
            Some(b'b') => {
                self.pos += 1;
                NcPoly::letter_b()
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer_big();
                NcPoly::term(Word::empty(), v)
            }
            _ => return Err(self.unexpected()),
        };
        match self.exponent()? {
            None => Ok(base),
            Some(Exponent::Int(k)) => {
                let mut out = NcPoly::one();
                for _ in 0..k {
                    out = &out * &base;
                }
                Ok(out)
            }
            Some(Exponent::Multiset(_)) => Err(ExprError::SetExponent { pos: start }),
        }
    }

    fn exponent(&mut self) -> Result<Option<Exponent>, ExprError> {
        if self.peek() != Some(b'^') {
            return Ok(None);
        }
        self.pos += 1;
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let mut h = ExpPoly::zero();
            if self.peek() == Some(b'}') {
                self.pos += 1;
                return Ok(Some(Exponent::Multiset(h)));
            }
            loop {
                let at = self.pos;
                let lo = self.integer_u32()?;
                let mut hi = lo;
                if self.peek() == Some(b'.') {
                    self.expect(b'.')?;
                    self.expect(b'.')?;
                    hi = self.integer_u32()?;
                    if hi < lo {
                        return Err(ExprError::EmptyRange { pos: at, lo, hi });
                    }
                }
                for e in lo..=hi {
                    h.add_term(e, BigInt::from(1));
                }
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        return Ok(Some(Exponent::Multiset(h)));
                    }
                    _ => return Err(self.unexpected()),
                }
            }
        }
        Ok(Some(Exponent::Int(self.integer_u32()?)))
    }

    fn digits(&mut self) -> Result<&str, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        // ASCII digits only
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn integer_u32(&mut self) -> Result<u32, ExprError> {
        let pos = self.pos;
        self.digits()?
            .parse()
            .map_err(|_| ExprError::Overflow { pos })
    }

    fn integer_big(&mut self) -> BigInt {
        // caller checked that a digit follows
        self.digits().unwrap().parse().unwrap()
    }
}
