//! Text syntax for trees and forests.
//!
//! ```text
//! forest  := "1" | term ("·" term)*
//! term    := tree | planted | poly
//! poly    := "X^" mindex
//! planted := "I[" [kind ","] mindex "](" tree ")"
//! tree    := "N[" mindex "]" ("{" branch ("," branch)* "}")?
//! branch  := [kind ","] mindex ":" tree
//! mindex  := "(" nat ("," nat)* ")"
//! ```
//!
//! Kinds are written as naturals; kind 0 is the default and is omitted when printing.
//! A bare tree term contributes its root decoration to the polynomial part.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::multiindex::{EdgeLabel, Kind, MultiIndex};
use crate::tree::{Forest, Planted, Tree};
use crate::workspace::Workspace;

pub(crate) fn write_label(f: &mut fmt::Formatter<'_>, e: &EdgeLabel) -> fmt::Result {
    if e.kind.0 != 0 {
        write!(f, "{},", e.kind.0)?;
    }
    write!(f, "{}", e.shift)
}

pub fn parse_forest(text: &str, ws: &Workspace) -> Result<Forest> {
    let mut p = Parser::new(text, ws.dim);
    let f = p.forest()?;
    p.end()?;
    ws.check_forest(&f)?;
    Ok(f)
}

pub fn parse_tree(text: &str, ws: &Workspace) -> Result<Tree> {
    let mut p = Parser::new(text, ws.dim);
    let t = p.tree()?;
    p.end()?;
    ws.check_tree(&t)?;
    Ok(t)
}

pub fn parse_planted(text: &str, ws: &Workspace) -> Result<Planted> {
    let mut p = Parser::new(text, ws.dim);
    p.skip_ws();
    let t = p.planted()?;
    p.end()?;
    ws.check_planted(&t)?;
    Ok(t)
}

pub fn parse_multiindex(text: &str, dim: usize) -> Result<MultiIndex> {
    let mut p = Parser::new(text, dim);
    let m = p.mindex()?;
    p.end()?;
    Ok(m)
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, dim: usize) -> Self {
        Parser { src, pos: 0, dim }
    }

    fn err<T>(&self, msg: impl ToString) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
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

    pub(crate) fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn nat(&mut self) -> Result<u16> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return self.err("expected a natural number");
        }
        let s = &self.rest()[..digits];
        let v = s.parse::<u16>().or_else(|_| self.err("number too large"))?;
        self.pos += digits;
        Ok(v)
    }

    pub(crate) fn mindex(&mut self) -> Result<MultiIndex> {
        let start = self.pos;
        self.expect("(")?;
        let mut entries = Vec::new();
        entries.push(self.nat()?);
        while self.eat(",") {
            entries.push(self.nat()?);
        }
        self.expect(")")?;
        if entries.len() != self.dim {
            self.pos = start;
            return self.err(format!("multi-index has length {}, expected {}", entries.len(), self.dim));
        }
        Ok(MultiIndex::from_slice(&entries))
    }

    /// `[kind ","] mindex`
    fn label(&mut self) -> Result<EdgeLabel> {
        let kind = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.nat()?;
            self.expect(",")?;
            if k > u8::MAX as u16 {
                return self.err("edge kind too large");
            }
            Kind(k as u8)
        } else {
            Kind(0)
        };
        Ok(EdgeLabel::new(kind, self.mindex()?))
    }

    pub(crate) fn tree(&mut self) -> Result<Tree> {
        self.expect("N[")?;
        let dec = self.mindex()?;
        self.expect("]")?;
        let mut children = Vec::new();
        if self.eat("{") {
            loop {
                let edge = self.label()?;
                self.expect(":")?;
                let body = self.tree()?;
                children.push(Planted::new(edge, body));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
        }
        Ok(Tree::new(dec, children))
    }

    pub(crate) fn planted(&mut self) -> Result<Planted> {
        self.expect("I[")?;
        let edge = self.label()?;
        self.expect("]")?;
        self.expect("(")?;
        let body = self.tree()?;
        self.expect(")")?;
        Ok(Planted::new(edge, body))
    }

    fn term(&mut self) -> Result<Forest> {
        self.skip_ws();
        let r = self.rest();
        if r.starts_with("N[") {
            Ok(self.tree()?.into_forest())
        } else if r.starts_with("I[") {
            Ok(Forest::single(self.planted()?))
        } else if r.starts_with("X^") {
            self.pos += 2;
            Ok(Forest::poly(self.mindex()?))
        } else {
            self.err("expected `N[`, `I[` or `X^`")
        }
    }

    pub(crate) fn eat_separator(&mut self) -> bool {
        self.eat("·") || self.eat("*")
    }

    pub(crate) fn forest(&mut self) -> Result<Forest> {
        self.skip_ws();
        if self.rest().starts_with('1') {
            self.pos += 1;
            return Ok(Forest::unit(self.dim));
        }
        let mut f = self.term()?;
        while self.eat_separator() {
            f = f.mul(&self.term()?);
        }
        Ok(f)
    }
}

/// Format any forest-valued Vect in grammar syntax.
pub fn format_vect(v: &crate::vect::Vect<Forest>) -> String {
    v.format_with(|f| format!("{f}"))
}
