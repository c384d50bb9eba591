//! The s-expression proof format.
//!
//! ```text
//! (rule bexR :conclusion (seq () ("(ex x in b) x in b"))
//!   :premises
//!   ((rule log :conclusion (seq ("a in b") ("a in b")) :premises ())))
//! ```
//!
//! Formulas are string atoms in the ASCII syntax. `;` starts a comment.

use super::{Derivation, RuleTag};
use crate::syntax::{parse_formula, print_formula, Formula, Sequent, Theory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: bad formula {text:?}: {msg}")]
    Formula { line: usize, text: String, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Atom(String),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ProofParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut it = src.chars().peekable();
    while let Some(c) = it.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            ';' => {
                while it.peek().is_some_and(|&c| c != '\n') {
                    it.next();
                }
            }
            '(' => out.push((Tok::Open, line)),
            ')' => out.push((Tok::Close, line)),
            '"' => {
                let start = line;
                let mut s = String::new();
                loop {
                    match it.next() {
                        None => return Err(ProofParseError::Syntax { line: start, msg: "unterminated string".into() }),
                        Some('"') => break,
                        Some('\\') => match it.next() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            Some('n') => s.push('\n'),
                            _ => return Err(ProofParseError::Syntax { line, msg: "bad escape".into() }),
                        },
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c)
                        }
                    }
                }
                out.push((Tok::Str(s), start));
            }
            c => {
                let mut s = String::from(c);
                while it.peek().is_some_and(|&c| !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | ';')) {
                    s.push(it.next().unwrap());
                }
                out.push((Tok::Atom(s), line));
            }
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    theory: Theory,
}

impl Reader {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ProofParseError> {
        Err(ProofParseError::Syntax { line: self.line(), msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ProofParseError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => {
                self.pos -= 1;
                self.err(format!("expected {:?}, found {:?}", want, other))
            }
        }
    }

    fn atom(&mut self) -> Result<String, ProofParseError> {
        match self.next() {
            Some(Tok::Atom(a)) => Ok(a),
            other => {
                self.pos -= 1;
                self.err(format!("expected a symbol, found {:?}", other))
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ProofParseError> {
        match self.atom()? {
            a if a == kw => Ok(()),
            a => {
                self.pos -= 1;
                self.err(format!("expected {}, found {}", kw, a))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ProofParseError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Str(s)) => parse_formula(&s, self.theory).map_err(|e| ProofParseError::Formula {
                line,
                text: s.clone(),
                msg: e.to_string(),
            }),
            other => {
                self.pos -= 1;
                self.err(format!("expected a quoted formula, found {:?}", other))
            }
        }
    }

    fn formula_list(&mut self) -> Result<Vec<Formula>, ProofParseError> {
        self.expect(Tok::Open)?;
        let mut out = Vec::new();
        while self.peek() != Some(&Tok::Close) {
            out.push(self.formula()?);
        }
        self.expect(Tok::Close)?;
        Ok(out)
    }

    fn sequent(&mut self) -> Result<Sequent, ProofParseError> {
        self.expect(Tok::Open)?;
        self.keyword("seq")?;
        let gamma = self.formula_list()?;
        let mut delta = self.formula_list()?;
        if delta.len() > 1 {
            return self.err("succedent holds more than one formula");
        }
        self.expect(Tok::Close)?;
        Ok(Sequent::new(gamma, delta.pop()))
    }

    fn derivation(&mut self) -> Result<Derivation, ProofParseError> {
        self.expect(Tok::Open)?;
        self.keyword("rule")?;
        let tag = self.atom()?;
        let Some(rule) = RuleTag::from_name(&tag) else { return self.err(format!("unknown rule {}", tag)) };
        let mut eigen = None;
        if self.peek() == Some(&Tok::Atom(":eigen".into())) {
            self.pos += 1;
            eigen = Some(self.atom()?);
        }
        self.keyword(":conclusion")?;
        let conclusion = self.sequent()?;
        self.keyword(":premises")?;
        self.expect(Tok::Open)?;
        let mut premises = Vec::new();
        while self.peek() != Some(&Tok::Close) {
            if self.peek().is_none() {
                return self.err("unexpected end of input");
            }
            premises.push(self.derivation()?);
        }
        self.expect(Tok::Close)?;
        self.expect(Tok::Close)?;
        Ok(Derivation { rule, eigen, conclusion, premises })
    }
}

pub fn parse_proof(src: &str, theory: Theory) -> Result<Derivation, ProofParseError> {
    let mut r = Reader { toks: lex(src)?, pos: 0, theory };
    let d = r.derivation()?;
    if r.pos < r.toks.len() {
        return r.err("trailing input after the proof");
    }
    Ok(d)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn print_list(fs: &[&Formula]) -> String {
    let items: Vec<String> = fs.iter().map(|f| quote(&print_formula(f))).collect();
    format!("({})", items.join(" "))
}

fn print_node(d: &Derivation, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    out.push_str(&format!("(rule {}", d.rule.name()));
    if let Some(e) = &d.eigen {
        out.push_str(&format!(" :eigen {}", e));
    }
    let gamma: Vec<&Formula> = d.conclusion.gamma.iter().collect();
    let delta: Vec<&Formula> = d.conclusion.delta.iter().collect();
    out.push_str(&format!(" :conclusion (seq {} {})", print_list(&gamma), print_list(&delta)));
    if d.premises.is_empty() {
        out.push_str(" :premises ())");
        return;
    }
    out.push_str(&format!("\n{}  :premises\n{}  (", pad, pad));
    for (i, p) in d.premises.iter().enumerate() {
        if i > 0 {
            out.push_str(&format!("\n{}   ", pad));
        }
        print_node(p, indent + 3, out);
    }
    out.push_str("))");
}

/// Canonical text of a derivation; `print_proof(parse_proof(print_proof(d)))`
/// reproduces the same bytes.
pub fn print_proof(d: &Derivation) -> String {
    let mut out = String::new();
    print_node(d, 0, &mut out);
    out.push('\n');
    out
}
