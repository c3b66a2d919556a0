//! Text syntax for elements and algebras.
//!
//! ```text
//! element := term ('+' term)*
//! term    := factor ('*'? factor)*          juxtaposition multiplies
//! factor  := 'Sq^' INT | 'Sq(' INT (',' INT)* ')' | 'P(1,' INT ')' | 'Q(' INT ')'
//!          | '1' | '0' | '(' element ')'
//! algebra := 'A(' INT ')' ['in A(' INT ')']
//!          | 'E(' INT ')' ['in A(' INT ')']
//!          | 'A(' INT ')[' element (',' element)* ']'
//! ```
//! `P(1,s)` and `Q(s)` both denote the primitive `Sq(0,...,0,1)` with the 1 in
//! place s+1. Whitespace is allowed between tokens.

use std::sync::Arc;

use super::algebra::SubAlgebra;
use super::element::{milnor_primitive, SteenrodElt};
use super::milnor::MilnorBasisElt;
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
    col0: usize,
    ambient: Option<u32>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            col: self.col0 + self.i + 1,
            msg: msg.into(),
        })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(tok.as_bytes()) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a nonnegative integer");
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn element(&mut self) -> Result<SteenrodElt> {
        let mut acc = self.term()?;
        while self.eat("+") {
            acc = acc.add(&self.term()?)?;
        }
        Ok(acc)
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'S' | b'P' | b'Q' | b'(' | b'0' | b'1'))
    }

    fn term(&mut self) -> Result<SteenrodElt> {
        let mut acc = self.factor()?;
        loop {
            let star = self.eat("*");
            if !star && !self.starts_factor() {
                return Ok(acc);
            }
            acc = acc.mul(&self.factor()?)?;
        }
    }

    fn basis(&self, b: MilnorBasisElt) -> Result<SteenrodElt> {
        SteenrodElt::from_basis(b, self.ambient).or_else(|e| self.err(e.to_string()))
    }

    fn factor(&mut self) -> Result<SteenrodElt> {
        if self.eat("Sq^") {
            let k = self.int()?;
            return self.basis(MilnorBasisElt::sq(k));
        }
        if self.eat("Sq(") {
            let mut ex = vec![self.int()?];
            while self.eat(",") {
                ex.push(self.int()?);
            }
            self.expect(")")?;
            return self.basis(MilnorBasisElt::new(ex));
        }
        if self.eat("P(") {
            if self.int()? != 1 {
                return self.err("only the primitives P(1,s) are supported");
            }
            self.expect(",")?;
            let s = self.int()?;
            self.expect(")")?;
            return self.primitive(s);
        }
        if self.eat("Q(") {
            let s = self.int()?;
            self.expect(")")?;
            return self.primitive(s);
        }
        if self.eat("(") {
            let e = self.element()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("1") {
            return Ok(SteenrodElt::one(self.ambient));
        }
        if self.eat("0") {
            return Ok(SteenrodElt::zero(self.ambient));
        }
        self.err("expected Sq^k, Sq(...), P(1,s), Q(s), 0, 1 or a parenthesized element")
    }

    fn primitive(&self, s: u32) -> Result<SteenrodElt> {
        match self.ambient {
            Some(n) => milnor_primitive(s, n).or_else(|e| self.err(e.to_string())),
            None => Ok(SteenrodElt::from_basis(MilnorBasisElt::q(s as usize), None).unwrap()),
        }
    }

    fn algebra(&mut self) -> Result<Arc<SubAlgebra>> {
        let kind = if self.eat("A(") {
            'A'
        } else if self.eat("E(") {
            'E'
        } else {
            return self.err("expected A(n) or E(n)");
        };
        let k = self.int()?;
        self.expect(")")?;
        if kind == 'A' && self.eat("[") {
            self.ambient = Some(k);
            let mut gens = vec![self.element()?];
            while self.eat(",") {
                gens.push(self.element()?);
            }
            self.expect("]")?;
            return SubAlgebra::closure(&gens, k).or_else(|e| self.err(e.to_string()));
        }
        let n = if self.eat("in") {
            self.expect("A(")?;
            let n = self.int()?;
            self.expect(")")?;
            n
        } else {
            k
        };
        let r = if kind == 'A' {
            SubAlgebra::a_in(k, n)
        } else {
            SubAlgebra::e_in(k, n)
        };
        r.or_else(|e| self.err(e.to_string()))
    }

    fn finish(&mut self) -> Result<()> {
        self.ws();
        if self.i < self.s.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

fn parser(text: &str, ambient: Option<u32>, line: usize, col0: usize) -> Parser<'_> {
    Parser {
        s: text.as_bytes(),
        i: 0,
        line,
        col0,
        ambient,
    }
}

/// Parse an element, tagging it with `ambient`.
pub fn parse_element(text: &str, ambient: Option<u32>) -> Result<SteenrodElt> {
    parse_element_at(text, ambient, 1, 0)
}

/// As [`parse_element`], reporting errors relative to a position in a file.
pub fn parse_element_at(
    text: &str,
    ambient: Option<u32>,
    line: usize,
    col0: usize,
) -> Result<SteenrodElt> {
    let mut p = parser(text, ambient, line, col0);
    let e = p.element()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_algebra(text: &str) -> Result<Arc<SubAlgebra>> {
    parse_algebra_at(text, 1, 0)
}

pub fn parse_algebra_at(text: &str, line: usize, col0: usize) -> Result<Arc<SubAlgebra>> {
    let mut p = parser(text, None, line, col0);
    let a = p.algebra()?;
    p.finish()?;
    Ok(a)
}

/// The text form of an algebra accepted by [`parse_algebra`].
pub fn algebra_text(a: &SubAlgebra) -> String {
    a.name().to_string()
}
