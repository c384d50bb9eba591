//! Formula and term trees.
//!
//! Bound variables are de Bruijn indices; index 0 is the innermost binder.
//! The surface name of a binder is kept as a [`Hint`], which never takes part
//! in equality, so two formulas are equal exactly when they are α-equivalent.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use crate::ord::OrdTerm;

/// A display name for a binder. Ignored by `Eq`, `Ord` and `Hash`.
#[derive(Debug, Clone, Default)]
pub struct Hint(pub String);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Hint {}
impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}
impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hint {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl From<&str> for Hint {
    fn from(s: &str) -> Self {
        Hint(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Ikp,
    IkpP,
    IkpE,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Ikp, Theory::IkpP, Theory::IkpE];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Ikp => "ikp",
            Theory::IkpP => "ikpp",
            Theory::IkpE => "ikpe",
        }
    }

    pub fn from_name(s: &str) -> Option<Theory> {
        match s.to_ascii_lowercase().as_str() {
            "ikp" => Some(Theory::Ikp),
            "ikpp" | "ikp_p" | "ikp(p)" => Some(Theory::IkpP),
            "ikpe" | "ikp_e" | "ikp(e)" => Some(Theory::IkpE),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Free(String),
    Bound(usize),
    /// 𝕃_α
    L(OrdTerm),
    /// 𝕍_α
    V(OrdTerm),
    /// 𝔼_α
    E(OrdTerm),
    /// a_i^α
    IVar(u32, OrdTerm),
    /// `{x ∈ bound | body}`; the body binds index 0.
    Comp(Box<Comp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comp {
    pub hint: Hint,
    pub bound: Term,
    pub body: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    All,
    Ex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Unbounded,
    In(Term),
    Sub(Term),
    /// Functions from the first set to the second.
    Exp(Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    In(Term, Term),
    /// Sugar: extensional equality.
    Eq(Term, Term),
    /// Sugar: `(∀x∈a)(x∈b)`.
    Sub(Term, Term),
    /// Sugar: x is a function from a to b.
    Fun(Term, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Q { q: Quant, bound: Bound, hint: Hint, body: Box<Formula> },
}

/// Γ ⇒ Δ with |Δ| ≤ 1. Γ keeps its written order for printing; membership
/// tests treat it as a set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    pub gamma: Vec<Formula>,
    pub delta: Option<Formula>,
}

impl Sequent {
    pub fn new(gamma: Vec<Formula>, delta: Option<Formula>) -> Self {
        Sequent { gamma, delta }
    }

    pub fn right(f: Formula) -> Self {
        Sequent { gamma: Vec::new(), delta: Some(f) }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.gamma.iter().chain(self.delta.iter())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.collect_free(&mut out);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Constructors

impl Formula {
    pub fn in_(a: Term, b: Term) -> Formula {
        Formula::In(a, b)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// Bind the free variable `name` in `body` under a new quantifier.
    pub fn quant(q: Quant, bound: Bound, name: &str, body: Formula) -> Formula {
        Formula::Q { q, bound, hint: display_hint(name), body: Box::new(body.close(name)) }
    }

    pub fn all(name: &str, body: Formula) -> Formula {
        Formula::quant(Quant::All, Bound::Unbounded, name, body)
    }
    pub fn ex(name: &str, body: Formula) -> Formula {
        Formula::quant(Quant::Ex, Bound::Unbounded, name, body)
    }
    pub fn all_in(name: &str, t: Term, body: Formula) -> Formula {
        Formula::quant(Quant::All, Bound::In(t), name, body)
    }
    pub fn ex_in(name: &str, t: Term, body: Formula) -> Formula {
        Formula::quant(Quant::Ex, Bound::In(t), name, body)
    }
    pub fn all_sub(name: &str, t: Term, body: Formula) -> Formula {
        Formula::quant(Quant::All, Bound::Sub(t), name, body)
    }
    pub fn ex_sub(name: &str, t: Term, body: Formula) -> Formula {
        Formula::quant(Quant::Ex, Bound::Sub(t), name, body)
    }
    pub fn all_exp(name: &str, a: Term, b: Term, body: Formula) -> Formula {
        Formula::quant(Quant::All, Bound::Exp(a, b), name, body)
    }
    pub fn ex_exp(name: &str, a: Term, b: Term, body: Formula) -> Formula {
        Formula::quant(Quant::Ex, Bound::Exp(a, b), name, body)
    }
}

impl Term {
    pub fn free(name: &str) -> Term {
        Term::Free(name.to_string())
    }

    pub fn comp(name: &str, bound: Term, body: Formula) -> Term {
        Term::Comp(Box::new(Comp { hint: display_hint(name), bound, body: body.close(name) }))
    }
}

/// Placeholder names (`#z1`) display as their first letter.
fn display_hint(name: &str) -> Hint {
    match name.strip_prefix('#') {
        Some(rest) => Hint(rest.chars().take(1).collect()),
        None => Hint(name.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Locally nameless plumbing

impl Term {
    fn map_vars(&self, depth: usize, f: &mut dyn FnMut(&Term, usize) -> Option<Term>) -> Term {
        if let Some(t) = f(self, depth) {
            return t;
        }
        match self {
            Term::Comp(c) => Term::Comp(Box::new(Comp {
                hint: c.hint.clone(),
                bound: c.bound.map_vars(depth, f),
                body: c.body.map_vars(depth + 1, f),
            })),
            t => t.clone(),
        }
    }

    /// Shift loose bound indices `>= cutoff` by `d`.
    pub fn shift(&self, d: usize, cutoff: usize) -> Term {
        if d == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &mut |t, depth| match t {
            Term::Bound(i) if *i >= depth => Some(Term::Bound(i + d)),
            _ => None,
        })
    }

    pub fn has_loose(&self, depth: usize) -> bool {
        match self {
            Term::Bound(i) => *i >= depth,
            Term::Comp(c) => c.bound.has_loose(depth) || c.body.has_loose(depth + 1),
            _ => false,
        }
    }

    /// Does the loose index `idx` (relative to `depth`) occur?
    pub fn mentions_index(&self, idx: usize) -> bool {
        match self {
            Term::Bound(i) => *i == idx,
            Term::Comp(c) => c.bound.mentions_index(idx) || c.body.mentions_index(idx + 1),
            _ => false,
        }
    }

    pub fn mentions_free(&self, name: &str) -> bool {
        match self {
            Term::Free(n) => n == name,
            Term::Comp(c) => c.bound.mentions_free(name) || c.body.mentions_free(name),
            _ => false,
        }
    }

    pub fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Free(n) => {
                out.insert(n.clone());
            }
            Term::Comp(c) => {
                c.bound.collect_free(out);
                c.body.collect_free(out);
            }
            _ => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.has_loose(0)
    }
}

impl Formula {
    fn map_vars(&self, depth: usize, f: &mut dyn FnMut(&Term, usize) -> Option<Term>) -> Formula {
        use Formula::*;
        match self {
            In(a, b) => In(a.map_vars(depth, f), b.map_vars(depth, f)),
            Eq(a, b) => Eq(a.map_vars(depth, f), b.map_vars(depth, f)),
            Sub(a, b) => Sub(a.map_vars(depth, f), b.map_vars(depth, f)),
            Fun(x, a, b) => Fun(x.map_vars(depth, f), a.map_vars(depth, f), b.map_vars(depth, f)),
            Not(a) => Not(Box::new(a.map_vars(depth, f))),
            And(a, b) => And(Box::new(a.map_vars(depth, f)), Box::new(b.map_vars(depth, f))),
            Or(a, b) => Or(Box::new(a.map_vars(depth, f)), Box::new(b.map_vars(depth, f))),
            Imp(a, b) => Imp(Box::new(a.map_vars(depth, f)), Box::new(b.map_vars(depth, f))),
            Q { q, bound, hint, body } => Q {
                q: *q,
                bound: match bound {
                    Bound::Unbounded => Bound::Unbounded,
                    Bound::In(t) => Bound::In(t.map_vars(depth, f)),
                    Bound::Sub(t) => Bound::Sub(t.map_vars(depth, f)),
                    Bound::Exp(a, b) => Bound::Exp(a.map_vars(depth, f), b.map_vars(depth, f)),
                },
                hint: hint.clone(),
                body: Box::new(body.map_vars(depth + 1, f)),
            },
        }
    }

    pub fn shift(&self, d: usize, cutoff: usize) -> Formula {
        if d == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &mut |t, depth| match t {
            Term::Bound(i) if *i >= depth => Some(Term::Bound(i + d)),
            _ => None,
        })
    }

    /// Abstract the free variable `name` as a new outermost binder (index 0),
    /// shifting existing loose indices up by one.
    pub fn close(&self, name: &str) -> Formula {
        self.map_vars(0, &mut |t, depth| match t {
            Term::Bound(i) if *i >= depth => Some(Term::Bound(i + 1)),
            Term::Free(n) if n == name => Some(Term::Bound(depth)),
            _ => None,
        })
    }

    /// Replace the loose index 0 with `s` (the body of a binder, opened).
    pub fn open(&self, s: &Term) -> Formula {
        self.map_vars(0, &mut |t, depth| match t {
            Term::Bound(i) if *i == depth => Some(s.shift(depth, 0)),
            Term::Bound(i) if *i > depth => Some(Term::Bound(i - 1)),
            _ => None,
        })
    }

    /// Remove the unused loose index `idx`, lowering the ones above it.
    pub fn drop_index(&self, idx: usize) -> Option<Formula> {
        if self.mentions_index(idx) {
            return None;
        }
        Some(self.map_vars(idx, &mut |t, depth| match t {
            Term::Bound(i) if *i > depth => Some(Term::Bound(i - 1)),
            _ => None,
        }))
    }

    /// Substitute `s` for every occurrence of the free variable `name`.
    pub fn subst_free(&self, name: &str, s: &Term) -> Formula {
        self.map_vars(0, &mut |t, depth| match t {
            Term::Free(n) if n == name => Some(s.shift(depth, 0)),
            _ => None,
        })
    }

    /// Substitute every free variable at once.
    pub fn subst_all(&self, f: &dyn Fn(&str) -> Term) -> Formula {
        self.map_vars(0, &mut |t, depth| match t {
            Term::Free(n) => Some(f(n).shift(depth, 0)),
            _ => None,
        })
    }

    pub fn has_loose(&self, depth: usize) -> bool {
        self.any_term(depth, &|t, d| t.has_loose(d))
    }

    pub fn mentions_index(&self, idx: usize) -> bool {
        self.any_term(idx, &|t, d| t.mentions_index(d))
    }

    pub fn mentions_free(&self, name: &str) -> bool {
        self.any_term(0, &|t, _| t.mentions_free(name))
    }

    fn any_term(&self, depth: usize, p: &dyn Fn(&Term, usize) -> bool) -> bool {
        use Formula::*;
        match self {
            In(a, b) | Eq(a, b) | Sub(a, b) => p(a, depth) || p(b, depth),
            Fun(x, a, b) => p(x, depth) || p(a, depth) || p(b, depth),
            Not(a) => a.any_term(depth, p),
            And(a, b) | Or(a, b) | Imp(a, b) => a.any_term(depth, p) || b.any_term(depth, p),
            Q { bound, body, .. } => {
                bound.terms().iter().any(|t| p(t, depth)) || body.any_term(depth + 1, p)
            }
        }
    }

    pub fn collect_free(&self, out: &mut BTreeSet<String>) {
        self.visit_terms(&mut |t| t.collect_free(out));
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty() && !self.has_loose(0)
    }

    /// Visit every term at atom or quantifier-bound position (not descending
    /// into comprehensions).
    pub fn visit_terms(&self, f: &mut dyn FnMut(&Term)) {
        use Formula::*;
        match self {
            In(a, b) | Eq(a, b) | Sub(a, b) => {
                f(a);
                f(b);
            }
            Fun(x, a, b) => {
                f(x);
                f(a);
                f(b);
            }
            Not(a) => a.visit_terms(f),
            And(a, b) | Or(a, b) | Imp(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Q { bound, body, .. } => {
                for t in bound.terms() {
                    f(t);
                }
                body.visit_terms(f);
            }
        }
    }

    /// Number of connective, quantifier and atom nodes.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            In(..) | Eq(..) | Sub(..) | Fun(..) => 1,
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Imp(a, b) => 1 + a.size() + b.size(),
            Q { body, .. } => 1 + body.size(),
        }
    }
}

impl Bound {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Bound::Unbounded => vec![],
            Bound::In(t) | Bound::Sub(t) => vec![t],
            Bound::Exp(a, b) => vec![a, b],
        }
    }
}

// ---------------------------------------------------------------------------
// Sugar expansion

impl Formula {
    /// Expand `=`, `⊆` and `fun` into primitive bounded formulas.
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        match self {
            In(..) => self.clone(),
            Eq(a, b) => eq_expand(a, b),
            Sub(a, b) => sub_expand(a, b),
            Fun(x, a, b) => fun_expand(x, a, b),
            Not(a) => Formula::not(a.desugar()),
            And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Imp(a, b) => Formula::imp(a.desugar(), b.desugar()),
            Q { q, bound, hint, body } => Q {
                q: *q,
                bound: match bound {
                    Bound::Unbounded => Bound::Unbounded,
                    Bound::In(t) => Bound::In(t.desugar()),
                    Bound::Sub(t) => Bound::Sub(t.desugar()),
                    Bound::Exp(a, b) => Bound::Exp(a.desugar(), b.desugar()),
                },
                hint: hint.clone(),
                body: Box::new(body.desugar()),
            },
        }
    }

    pub fn is_sugar_free(&self) -> bool {
        *self == self.desugar()
    }
}

impl Term {
    pub fn desugar(&self) -> Term {
        match self {
            Term::Comp(c) => Term::Comp(Box::new(Comp {
                hint: c.hint.clone(),
                bound: c.bound.desugar(),
                body: c.body.desugar(),
            })),
            t => t.clone(),
        }
    }
}

// Placeholder names for the expansions below. They cannot be written in the
// surface syntax, so closing over them never captures a user variable.
const P: &str = "#p";
const U: &str = "#u";
const W: &str = "#w";
const V_: &str = "#v";
const T: &str = "#t";
const Q_: &str = "#q";
const Y: &str = "#y";
const Z1: &str = "#z1";
const Z2: &str = "#z2";

fn free(n: &str) -> Term {
    Term::free(n)
}

/// `a ⊆ b` as `(∀x∈a)(x∈b)`.
pub fn sub_expand(a: &Term, b: &Term) -> Formula {
    Formula::all_in(Q_, a.desugar(), Formula::In(free(Q_), b.desugar()))
}

/// `a = b` as `a ⊆ b ∧ b ⊆ a`, expanded.
pub fn eq_expand(a: &Term, b: &Term) -> Formula {
    Formula::and(sub_expand(a, b), sub_expand(b, a))
}

/// `w = {u, v}`.
fn is_upair(w: &Term, u: &Term, v: &Term) -> Formula {
    Formula::and(
        Formula::and(Formula::In(u.clone(), w.clone()), Formula::In(v.clone(), w.clone())),
        Formula::all_in(T, w.clone(), Formula::or(eq_expand(&free(T), u), eq_expand(&free(T), v))),
    )
}

/// `w = {u}`.
fn is_single(w: &Term, u: &Term) -> Formula {
    Formula::and(Formula::In(u.clone(), w.clone()), Formula::all_in(T, w.clone(), eq_expand(&free(T), u)))
}

/// `p = (u, v)` with Kuratowski pairs `{{u, v}, {u}}`.
pub fn is_pair(p: &Term, u: &Term, v: &Term) -> Formula {
    let w = free(W);
    Formula::and(
        Formula::and(
            Formula::all_in(W, p.clone(), Formula::or(is_upair(&w, u, v), is_single(&w, u))),
            Formula::ex_in(W, p.clone(), is_upair(&w, u, v)),
        ),
        Formula::ex_in(W, p.clone(), is_single(&w, u)),
    )
}

/// `(u, v) ∈ x`.
pub fn pair_in(u: &Term, v: &Term, x: &Term) -> Formula {
    Formula::ex_in(P, x.clone(), is_pair(&free(P), u, v))
}

/// The three-conjunct definition of "x is a function from a to b", with the
/// product, ordered pairs, `=` and `⊆` expanded to primitives.
pub fn fun_expand(x: &Term, a: &Term, b: &Term) -> Formula {
    let (x, a, b) = (x.desugar(), a.desugar(), b.desugar());
    let in_product = Formula::all_in(
        P,
        x.clone(),
        Formula::ex_in(U, a.clone(), Formula::ex_in(V_, b.clone(), is_pair(&free(P), &free(U), &free(V_)))),
    );
    let total = Formula::all_in(Y, a.clone(), Formula::ex_in(Z1, b.clone(), pair_in(&free(Y), &free(Z1), &x)));
    let functional = Formula::all_in(
        Y,
        a,
        Formula::all_in(
            Z1,
            b.clone(),
            Formula::all_in(
                Z2,
                b,
                Formula::imp(
                    Formula::and(pair_in(&free(Y), &free(Z1), &x), pair_in(&free(Y), &free(Z2), &x)),
                    eq_expand(&free(Z1), &free(Z2)),
                ),
            ),
        ),
    );
    Formula::and(Formula::and(in_product, total), functional)
}
