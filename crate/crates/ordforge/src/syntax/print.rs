//! Printer for the ASCII syntax, plus a Unicode variant for reports.
//!
//! Binder names come from hints, renamed only when they would clash with a
//! free variable or an enclosing binder, so `parse(print(f)) == f`.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::*;
use super::parse::is_keyword;

#[derive(Clone, Copy)]
struct Syms {
    all: &'static str,
    ex: &'static str,
    in_: &'static str,
    sub: &'static str,
    and: &'static str,
    or: &'static str,
    imp: &'static str,
    not: &'static str,
    unicode: bool,
}

const ASCII: Syms = Syms {
    all: "all",
    ex: "ex",
    in_: " in ",
    sub: " sub ",
    and: " & ",
    or: " | ",
    imp: " -> ",
    not: "~",
    unicode: false,
};

const UNICODE: Syms = Syms {
    all: "∀",
    ex: "∃",
    in_: "∈",
    sub: "⊆",
    and: " ∧ ",
    or: " ∨ ",
    imp: " → ",
    not: "¬",
    unicode: true,
};

pub fn print_formula(f: &Formula) -> String {
    Printer::new(f, ASCII).formula(f, 0)
}

pub fn pretty_formula(f: &Formula) -> String {
    Printer::new(f, UNICODE).formula(f, 0)
}

pub fn print_term(t: &Term) -> String {
    let mut taken = BTreeSet::new();
    t.collect_free(&mut taken);
    Printer { taken, scope: Vec::new(), s: ASCII }.term(t)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

struct Printer {
    taken: BTreeSet<String>,
    scope: Vec<String>,
    s: Syms,
}

impl Printer {
    fn new(f: &Formula, s: Syms) -> Self {
        Printer { taken: f.free_vars(), scope: Vec::new(), s }
    }

    fn fresh(&self, hint: &Hint) -> String {
        let base = if hint.0.is_empty() || hint.0.starts_with(|c: char| !c.is_ascii_alphabetic()) {
            "x".to_string()
        } else {
            hint.0.clone()
        };
        let ok = |n: &str| !is_keyword(n) && !self.taken.contains(n) && !self.scope.iter().any(|s| s == n);
        if ok(&base) {
            return base;
        }
        (1..).map(|i| format!("{}{}", base, i)).find(|n| ok(n)).expect("unbounded supply")
    }

    fn bind<T>(&mut self, name: String, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn term(&mut self, t: &Term) -> String {
        let u = self.s.unicode;
        match t {
            Term::Free(n) => n.clone(),
            Term::Bound(i) => match self.scope.len().checked_sub(i + 1) {
                Some(k) => self.scope[k].clone(),
                None => format!("?{}", i),
            },
            Term::L(a) if u => format!("𝕃_{}", a.pretty()),
            Term::V(a) if u => format!("𝕍_{}", a.pretty()),
            Term::E(a) if u => format!("𝔼_{}", a.pretty()),
            Term::IVar(i, a) if u => format!("a_{}^{}", i, a.pretty()),
            Term::L(a) => format!("L({})", a),
            Term::V(a) => format!("V({})", a),
            Term::E(a) => format!("E({})", a),
            Term::IVar(i, a) => format!("var({},{})", i, a),
            Term::Comp(c) => {
                let bound = self.term(&c.bound);
                let name = self.fresh(&c.hint);
                let body = self.bind(name.clone(), |p| p.formula(&c.body, 0));
                if u {
                    format!("[{}∈{} | {}]", name, bound, body)
                } else {
                    format!("{{ {} in {} | {} }}", name, bound, body)
                }
            }
        }
    }

    /// `ctx`: 0 top, 1 right of `->`, 2 left of `->` or inside `|`,
    /// 3 inside `&`, 4 operand of a unary operator.
    fn formula(&mut self, f: &Formula, ctx: u8) -> String {
        let s = self.s;
        let paren = |body: String, need: bool| if need { format!("({})", body) } else { body };
        match f {
            Formula::In(a, b) => format!("{}{}{}", self.term(a), s.in_, self.term(b)),
            Formula::Eq(a, b) => format!("{} = {}", self.term(a), self.term(b)),
            Formula::Sub(a, b) => format!("{}{}{}", self.term(a), s.sub, self.term(b)),
            Formula::Fun(x, a, b) => format!("fun({},{},{})", self.term(x), self.term(a), self.term(b)),
            Formula::Not(a) => format!("{}{}", s.not, self.formula(a, 4)),
            Formula::Imp(a, b) => {
                let body = format!("{}{}{}", self.formula(a, 2), s.imp, self.formula(b, 1));
                paren(body, ctx > 1)
            }
            Formula::Or(a, b) => {
                let body = format!("{}{}{}", self.formula(a, 2), s.or, self.formula(b, 3));
                paren(body, ctx > 2)
            }
            Formula::And(a, b) => {
                let body = format!("{}{}{}", self.formula(a, 3), s.and, self.formula(b, 4));
                paren(body, ctx > 3)
            }
            Formula::Q { q, bound, hint, body } => {
                let kw = match q {
                    Quant::All => s.all,
                    Quant::Ex => s.ex,
                };
                let header = match bound {
                    Bound::Unbounded => None,
                    Bound::In(t) => Some(format!("{}{}", s.in_, self.term(t))),
                    Bound::Sub(t) => Some(format!("{}{}", s.sub, self.term(t))),
                    Bound::Exp(a, b) if s.unicode => Some(format!("∈^{}{}", self.term(a), self.term(b))),
                    Bound::Exp(a, b) => Some(format!(" in exp({},{})", self.term(a), self.term(b))),
                };
                let name = self.fresh(hint);
                match header {
                    None => {
                        let b = self.bind(name.clone(), |p| p.formula(body, 0));
                        let sep = if s.unicode { "" } else { " " };
                        let dot = if s.unicode { " " } else { " . " };
                        paren(format!("{}{}{}{}{}", kw, sep, name, dot, b), ctx > 0)
                    }
                    Some(h) => {
                        let b = self.bind(name.clone(), |p| p.formula(body, 4));
                        let sep = if s.unicode { "" } else { " " };
                        format!("({}{}{}{}) {}", kw, sep, name, h, b)
                    }
                }
            }
        }
    }
}

pub fn print_sequent(s: &Sequent) -> String {
    let g: Vec<String> = s.gamma.iter().map(print_formula).collect();
    let d = s.delta.as_ref().map(print_formula).unwrap_or_default();
    format!("{} => {}", g.join(", "), d).trim().to_string()
}

pub fn pretty_sequent(s: &Sequent) -> String {
    let g: Vec<String> = s.gamma.iter().map(pretty_formula).collect();
    let d = s.delta.as_ref().map(pretty_formula).unwrap_or_default();
    format!("{} ⇒ {}", g.join(", "), d).trim().to_string()
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_formula;
    use super::*;

    fn rt(s: &str, th: Theory) {
        let f = parse_formula(s, th).unwrap();
        let p = print_formula(&f);
        assert_eq!(parse_formula(&p, th).unwrap(), f, "{}", p);
    }

    #[test]
    fn round_trips() {
        rt("(all x in a)(x in b)", Theory::Ikp);
        rt("all x . ex y . x in y & ~y in x", Theory::Ikp);
        rt("(a in b -> b in c) -> a in c", Theory::Ikp);
        rt("a in b | (b in c | c in a)", Theory::Ikp);
        rt("~(all x . x in a) & a = b", Theory::Ikp);
        rt("(ex x sub a) x sub a", Theory::IkpP);
        rt("(all f in exp(a,b)) fun(f,a,b)", Theory::IkpE);
        rt("{ x in L(w) | x in L(1) } in L(w+1)", Theory::Ikp);
        rt("all x . (all x1 . x in x1)", Theory::Ikp);
    }

    #[test]
    fn renames_clashes() {
        let f = Formula::Q {
            q: Quant::All,
            bound: Bound::Unbounded,
            hint: Hint("a".into()),
            body: Box::new(Formula::In(Term::Bound(0), Term::free("a"))),
        };
        let p = print_formula(&f);
        assert_eq!(p, "all a1 . a1 in a");
        assert_eq!(parse_formula(&p, Theory::Ikp).unwrap(), f);
    }

    #[test]
    fn unicode() {
        let f = parse_formula("ex x . (all y in x)(y in x)", Theory::Ikp).unwrap();
        assert_eq!(pretty_formula(&f), "∃x (∀y∈x) y∈x");
    }
}
