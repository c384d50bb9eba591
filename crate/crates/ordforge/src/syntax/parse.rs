//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := or ("->" formula)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | ("all"|"ex") x "." formula
//!          | "(" ("all"|"ex") x ("in" t | "sub" t | "in" "exp(" t "," t ")") ")" unary
//!          | "(" formula ")" | atom
//! atom    := t ("in"|"="|"sub") t | "fun(" t "," t "," t ")"
//! term    := ident | L(α) | V(α) | E(α) | var(i,α) | "{" x "in" t "|" formula "}"
//! ```

use super::ast::*;
use crate::ord::{self, OrdTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("theory mismatch at {pos}: {msg}")]
    TheoryMismatch { pos: usize, msg: String },
}

const KEYWORDS: &[&str] = &["all", "ex", "in", "sub", "fun", "exp", "L", "V", "E", "var"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn parse_formula(text: &str, theory: Theory) -> Result<Formula, ParseError> {
    let mut p = Parser { src: text, pos: 0, theory, scope: Vec::new() };
    let f = p.formula()?;
    p.ws();
    if p.pos != text.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(f)
}

pub fn parse_term(text: &str, theory: Theory) -> Result<Term, ParseError> {
    let mut p = Parser { src: text, pos: 0, theory, scope: Vec::new() };
    let t = p.term()?;
    p.ws();
    if p.pos != text.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    theory: Theory,
    scope: Vec<String>,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn mismatch(&self, msg: &str) -> ParseError {
        ParseError::TheoryMismatch { pos: self.pos, msg: format!("{} not available in {}", msg, self.theory.name()) }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek_sym(&mut self, s: &str) -> bool {
        self.ws();
        self.rest().starts_with(s)
    }

    fn sym(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.sym(s) { Ok(()) } else { Err(self.syntax(&format!("expected `{}`", s))) }
    }

    fn peek_ident(&mut self) -> Option<&str> {
        self.ws();
        let r = self.rest();
        let mut chars = r.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .map(|(i, _)| i)
            .unwrap_or(r.len());
        Some(&r[..end])
    }

    fn kw(&mut self, k: &str) -> bool {
        if self.peek_ident() == Some(k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        match self.peek_ident() {
            Some(id) if !is_keyword(id) => {
                let id = id.to_string();
                self.pos += id.len();
                Ok(id)
            }
            _ => Err(self.syntax("expected variable name")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.sym("->") {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.sym("|") {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.sym("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn quant_kw(&mut self) -> Option<Quant> {
        if self.kw("all") {
            Some(Quant::All)
        } else if self.kw("ex") {
            Some(Quant::Ex)
        } else {
            None
        }
    }

    fn with_binder<T>(&mut self, name: String, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.sym("~") {
            return Ok(Formula::not(self.unary()?));
        }
        let save = self.pos;
        if let Some(q) = self.quant_kw() {
            let name = self.binder_name()?;
            self.expect(".")?;
            let body = self.with_binder(name.clone(), |p| p.formula())?;
            return Ok(Formula::Q { q, bound: Bound::Unbounded, hint: Hint(name), body: Box::new(body) });
        }
        self.pos = save;
        if self.sym("(") {
            let inner = self.pos;
            if let Some(q) = self.quant_kw() {
                let name = self.binder_name()?;
                if self.peek_sym(".") {
                    // parenthesized unbounded quantifier
                    self.pos = inner;
                    let f = self.formula()?;
                    self.expect(")")?;
                    return Ok(f);
                }
                let bound = if self.kw("in") {
                    if self.kw("exp") {
                        if self.theory != Theory::IkpE {
                            return Err(self.mismatch("exponentiation-bounded quantifier"));
                        }
                        self.expect("(")?;
                        let a = self.term()?;
                        self.expect(",")?;
                        let b = self.term()?;
                        self.expect(")")?;
                        Bound::Exp(a, b)
                    } else {
                        Bound::In(self.term()?)
                    }
                } else if self.kw("sub") {
                    if self.theory != Theory::IkpP {
                        return Err(self.mismatch("subset-bounded quantifier"));
                    }
                    Bound::Sub(self.term()?)
                } else {
                    return Err(self.syntax("expected `in`, `sub` or `.`"));
                };
                self.expect(")")?;
                let body = self.with_binder(name.clone(), |p| p.unary())?;
                return Ok(Formula::Q { q, bound, hint: Hint(name), body: Box::new(body) });
            }
            self.pos = inner;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if self.kw("fun") {
            self.expect("(")?;
            let x = self.term()?;
            self.expect(",")?;
            let a = self.term()?;
            self.expect(",")?;
            let b = self.term()?;
            self.expect(")")?;
            return Ok(Formula::Fun(x, a, b));
        }
        let lhs = self.term()?;
        if self.kw("in") {
            Ok(Formula::In(lhs, self.term()?))
        } else if self.kw("sub") {
            Ok(Formula::Sub(lhs, self.term()?))
        } else if self.sym("=") {
            Ok(Formula::Eq(lhs, self.term()?))
        } else {
            Err(self.syntax("expected `in`, `sub` or `=`"))
        }
    }

    /// The raw text of a balanced parenthesized argument list, split at
    /// top-level commas.
    fn ord_args(&mut self) -> Result<Vec<(usize, String)>, ParseError> {
        self.expect("(")?;
        let bytes = self.src.as_bytes();
        let mut depth = 0usize;
        let mut start = self.pos;
        let mut out = Vec::new();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => {
                    out.push((start, self.src[start..self.pos].to_string()));
                    self.pos += 1;
                    return Ok(out);
                }
                b')' => depth -= 1,
                b',' if depth == 0 => {
                    out.push((start, self.src[start..self.pos].to_string()));
                    start = self.pos + 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.syntax("unclosed `(`"))
    }

    fn ordinal(&self, at: usize, text: &str) -> Result<OrdTerm, ParseError> {
        ord::parse(text).map_err(|e| ParseError::Syntax { pos: at, msg: format!("bad ordinal: {}", e) })
    }

    fn stage(&mut self, what: &str, allowed: bool) -> Result<OrdTerm, ParseError> {
        if !allowed {
            return Err(self.mismatch(what));
        }
        let args = self.ord_args()?;
        match args.as_slice() {
            [(at, a)] => self.ordinal(*at, a),
            _ => Err(self.syntax("expected one ordinal argument")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.sym("{") {
            let name = self.binder_name()?;
            if !self.kw("in") {
                return Err(self.syntax("expected `in`"));
            }
            let bound = self.term()?;
            self.expect("|")?;
            let body = self.with_binder(name.clone(), |p| p.formula())?;
            self.expect("}")?;
            return Ok(Term::Comp(Box::new(Comp { hint: Hint(name), bound, body })));
        }
        let th = self.theory;
        if self.kw("L") {
            return Ok(Term::L(self.stage("L", th == Theory::Ikp)?));
        }
        if self.kw("V") {
            return Ok(Term::V(self.stage("V", th == Theory::IkpP)?));
        }
        if self.kw("E") {
            return Ok(Term::E(self.stage("E", th == Theory::IkpE)?));
        }
        if self.kw("var") {
            if th == Theory::Ikp {
                return Err(self.mismatch("var"));
            }
            let args = self.ord_args()?;
            return match args.as_slice() {
                [(at, i), (at2, a)] => {
                    let i = i.trim().parse::<u32>().map_err(|_| ParseError::Syntax { pos: *at, msg: "bad index".into() })?;
                    Ok(Term::IVar(i, self.ordinal(*at2, a)?))
                }
                _ => Err(self.syntax("expected var(i, alpha)")),
            };
        }
        match self.peek_ident() {
            Some(id) if !is_keyword(id) => {
                let id = id.to_string();
                self.pos += id.len();
                Ok(match self.scope.iter().rev().position(|n| *n == id) {
                    Some(i) => Term::Bound(i),
                    None => Term::Free(id),
                })
            }
            _ => Err(self.syntax("expected term")),
        }
    }
}
