//! Hereditarily finite stages and bounded evaluation.
//!
//! At finite n the L, V and E stages coincide. Over a finite structure every
//! subset is definable with parameters (take a disjunction of equations), so
//! the definable-subset clause is the full powerset. The extra E clause adds
//! functions f: a → b with a, b ∈ E_n; each pair of f already lies in
//! E_{n+1}, so f is one of those subsets.
//!
//! Stage n has 0, 1, 2, 4, 16, 65536 elements for n = 0..5. Stages up to the
//! cap (default 4) are enumerated; membership in any stage is a rank test.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::OnceCell;

use crate::ord::OrdTerm;
use crate::syntax::classify::{classify, in_language, is_delta0, relativize};
use crate::syntax::{print_term, Bound, Formula, Quant, Term, Theory};

pub const DEFAULT_CAP: usize = 4;
pub const HARD_CAP: usize = 5;
pub const CAP_ENV: &str = "ORDFORGE_STAGE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierError {
    #[error("stage {n} exceeds the cap {cap}")]
    StageCapExceeded { n: usize, cap: usize },
    #[error("formula is not bounded for {0}")]
    ClassViolation(String),
    #[error("formula is not a Σ sentence")]
    NotSigmaSentence,
    #[error("no value for {0}")]
    Unassigned(String),
    #[error("bad set syntax at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("bad stage cap {0:?}")]
    BadCap(String),
}

/// A hereditarily finite set; elements are kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HFSet(Vec<HFSet>);

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet(Vec::new())
    }

    pub fn from_elems(mut xs: Vec<HFSet>) -> HFSet {
        xs.sort();
        xs.dedup();
        HFSet(xs)
    }

    pub fn elems(&self) -> &[HFSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.0.iter().all(|x| other.contains(x))
    }

    /// Least n with `self ∈ stage(n+1)`.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }

    pub fn singleton(x: HFSet) -> HFSet {
        HFSet(vec![x])
    }

    pub fn pair(x: HFSet, y: HFSet) -> HFSet {
        HFSet::from_elems(vec![x, y])
    }

    /// {{x,y},{x}}.
    pub fn kpair(x: &HFSet, y: &HFSet) -> HFSet {
        HFSet::pair(HFSet::pair(x.clone(), y.clone()), HFSet::singleton(x.clone()))
    }

    /// Every subset, smallest first.
    pub fn subsets(&self) -> Vec<HFSet> {
        let n = self.0.len();
        assert!(n < 32, "powerset of a {}-element set", n);
        (0u64..1 << n)
            .map(|mask| HFSet((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i].clone()).collect()))
            .collect()
    }

    /// Every function from `a` to `b`, as a set of ordered pairs.
    pub fn functions(a: &HFSet, b: &HFSet) -> Vec<HFSet> {
        let mut out = vec![Vec::new()];
        for x in &a.0 {
            out = out
                .into_iter()
                .flat_map(|f: Vec<HFSet>| {
                    b.0.iter().map(move |y| {
                        let mut g = f.clone();
                        g.push(HFSet::kpair(x, y));
                        g
                    })
                })
                .collect();
        }
        out.into_iter().map(HFSet::from_elems).collect()
    }

    /// Ackermann code: bit i is set iff the set coded by i is a member.
    pub fn code(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, x| {
            let i = x.code()?;
            (i < 64).then(|| acc | 1 << i)
        })
    }

    pub fn from_code(c: u64) -> HFSet {
        HFSet((0..64).filter(|i| c >> i & 1 == 1).map(HFSet::from_code).collect())
    }

    pub fn parse(text: &str) -> Result<HFSet, HierError> {
        let mut p = SetParser { s: text.as_bytes(), pos: 0 };
        let x = p.set()?;
        p.ws();
        if p.pos != text.len() {
            return Err(HierError::Syntax { pos: p.pos, msg: "trailing input".into() });
        }
        Ok(x)
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, "}}")
    }
}

struct SetParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl SetParser<'_> {
    fn ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn set(&mut self) -> Result<HFSet, HierError> {
        if !self.eat(b'{') {
            return Err(HierError::Syntax { pos: self.pos, msg: "expected '{'".into() });
        }
        let mut xs = Vec::new();
        if !self.eat(b'}') {
            loop {
                xs.push(self.set()?);
                if self.eat(b'}') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(HierError::Syntax { pos: self.pos, msg: "expected ',' or '}'".into() });
                }
            }
        }
        Ok(HFSet::from_elems(xs))
    }
}

/// Variable name → value. Terms other than free variables may be keyed by
/// their printed form (e.g. `var(0,1)`).
pub type Assignment = BTreeMap<String, HFSet>;

/// The stage cap from `ORDFORGE_STAGE_CAP`, else the default.
pub fn cap_from_env() -> Result<usize, HierError> {
    match std::env::var(CAP_ENV) {
        Ok(s) => parse_cap(&s),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

pub fn parse_cap(s: &str) -> Result<usize, HierError> {
    match s.trim().parse::<usize>() {
        Ok(n) if n <= HARD_CAP => Ok(n),
        _ => Err(HierError::BadCap(s.to_string())),
    }
}

static STAGES: [OnceCell<HFSet>; HARD_CAP + 1] =
    [OnceCell::new(), OnceCell::new(), OnceCell::new(), OnceCell::new(), OnceCell::new(), OnceCell::new()];

fn stage_set(n: usize) -> &'static HFSet {
    STAGES[n].get_or_init(|| match n {
        0 => HFSet::empty(),
        _ => HFSet(stage_set(n - 1).subsets().into_iter().collect::<Vec<_>>()).normalized(),
    })
}

impl HFSet {
    fn normalized(self) -> HFSet {
        HFSet::from_elems(self.0)
    }
}

/// x ∈ stage(n), for any n.
pub fn in_stage(x: &HFSet, n: usize) -> bool {
    x.rank() < n
}

/// Evaluation context with a fixed cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hierarchy {
    pub cap: usize,
}

impl Default for Hierarchy {
    fn default() -> Self {
        Hierarchy { cap: DEFAULT_CAP }
    }
}

impl Hierarchy {
    pub fn new(cap: usize) -> Result<Hierarchy, HierError> {
        if cap > HARD_CAP {
            return Err(HierError::BadCap(cap.to_string()));
        }
        Ok(Hierarchy { cap })
    }

    pub fn from_env() -> Result<Hierarchy, HierError> {
        Hierarchy::new(cap_from_env()?)
    }

    pub fn stage(&self, n: usize) -> Result<&'static HFSet, HierError> {
        if n > self.cap {
            return Err(HierError::StageCapExceeded { n, cap: self.cap });
        }
        Ok(stage_set(n))
    }

    fn stage_of(&self, a: &OrdTerm) -> Result<&'static HFSet, HierError> {
        match a.as_nat() {
            Some(n) => self.stage(n as usize),
            None => Err(HierError::StageCapExceeded { n: usize::MAX, cap: self.cap }),
        }
    }

    /// Truth of a bounded formula under `v`.
    pub fn eval_bounded(&self, f: &Formula, v: &Assignment, theory: Theory) -> Result<bool, HierError> {
        if !in_language(f, theory) || !is_delta0(f) {
            return Err(HierError::ClassViolation(theory.name().into()));
        }
        Eval { h: self, v }.formula(&f.desugar(), &mut Vec::new())
    }

    /// Does stage(n) satisfy the Σ sentence `a`?
    pub fn sat_stage(&self, a: &Formula, n: usize, theory: Theory) -> Result<bool, HierError> {
        if !a.is_sentence() || !classify(a, theory).sigma {
            return Err(HierError::NotSigmaSentence);
        }
        let z = match theory {
            Theory::Ikp => Term::L(OrdTerm::nat(n as u64)),
            Theory::IkpP => Term::V(OrdTerm::nat(n as u64)),
            Theory::IkpE => Term::E(OrdTerm::nat(n as u64)),
        };
        self.stage(n)?;
        self.eval_bounded(&relativize(a, &z), &Assignment::new(), theory)
    }
}

pub fn stage(n: usize) -> Result<&'static HFSet, HierError> {
    Hierarchy::from_env()?.stage(n)
}

pub fn eval_bounded(f: &Formula, v: &Assignment, theory: Theory) -> Result<bool, HierError> {
    Hierarchy::from_env()?.eval_bounded(f, v, theory)
}

pub fn sat_stage(a: &Formula, n: usize, theory: Theory) -> Result<bool, HierError> {
    Hierarchy::from_env()?.sat_stage(a, n, theory)
}

struct Eval<'a> {
    h: &'a Hierarchy,
    v: &'a Assignment,
}

impl Eval<'_> {
    fn term(&self, t: &Term, env: &mut Vec<HFSet>) -> Result<HFSet, HierError> {
        match t {
            Term::Bound(i) => env.iter().rev().nth(*i).cloned().ok_or_else(|| HierError::Unassigned(format!("#{}", i))),
            Term::Free(name) => self.v.get(name).cloned().ok_or_else(|| HierError::Unassigned(name.clone())),
            Term::L(a) | Term::V(a) | Term::E(a) => self.h.stage_of(a).cloned(),
            Term::IVar(..) => {
                let key = print_term(t);
                self.v.get(&key).cloned().ok_or(HierError::Unassigned(key))
            }
            Term::Comp(c) => {
                let dom = self.term(&c.bound, env)?;
                let mut keep = Vec::new();
                for x in dom.elems() {
                    env.push(x.clone());
                    let ok = self.formula(&c.body.desugar(), env);
                    env.pop();
                    if ok? {
                        keep.push(x.clone());
                    }
                }
                Ok(HFSet::from_elems(keep))
            }
        }
    }

    fn formula(&self, f: &Formula, env: &mut Vec<HFSet>) -> Result<bool, HierError> {
        use Formula::*;
        Ok(match f {
            In(s, t) => self.term(t, env)?.contains(&self.term(s, env)?),
            Eq(s, t) => self.term(s, env)? == self.term(t, env)?,
            Sub(s, t) => self.term(s, env)?.is_subset(&self.term(t, env)?),
            Fun(..) => self.formula(&f.desugar(), env)?,
            Not(a) => !self.formula(a, env)?,
            And(a, b) => self.formula(a, env)? && self.formula(b, env)?,
            Or(a, b) => self.formula(a, env)? || self.formula(b, env)?,
            Imp(a, b) => !self.formula(a, env)? || self.formula(b, env)?,
            Q { q, bound, body, .. } => {
                let dom = match bound {
                    Bound::Unbounded => return Err(HierError::ClassViolation("unbounded quantifier".into())),
                    Bound::In(t) => self.term(t, env)?.elems().to_vec(),
                    Bound::Sub(t) => self.term(t, env)?.subsets(),
                    Bound::Exp(a, b) => HFSet::functions(&self.term(a, env)?, &self.term(b, env)?),
                };
                let want = *q == Quant::Ex;
                for x in dom {
                    env.push(x);
                    let r = self.formula(body, env);
                    env.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn s(t: &str) -> HFSet {
        HFSet::parse(t).unwrap()
    }

    #[test]
    fn small_stages() {
        let h = Hierarchy::default();
        assert_eq!(h.stage(0).unwrap(), &s("{}"));
        assert_eq!(h.stage(1).unwrap(), &s("{{}}"));
        assert_eq!(h.stage(2).unwrap(), &s("{{},{{}}}"));
        assert!(matches!(h.stage(5), Err(HierError::StageCapExceeded { .. })));
    }

    #[test]
    fn braces_round_trip() {
        for t in ["{}", "{{}}", "{{},{{}}}", "{{{{}}},{}}"] {
            let x = s(t);
            assert_eq!(s(&x.to_string()), x);
        }
        assert_eq!(s("{ {}, {} }"), s("{{}}"));
        assert!(HFSet::parse("{,}").is_err());
        assert!(HFSet::parse("{}}").is_err());
    }

    #[test]
    fn codes() {
        for c in 0..300 {
            assert_eq!(HFSet::from_code(c).code(), Some(c));
        }
    }

    #[test]
    fn bounded_examples() {
        let h = Hierarchy::default();
        let mut v = Assignment::new();
        v.insert("a".into(), s("{{}}"));
        v.insert("b".into(), s("{{},{{}}}"));
        let f = parse_formula("(all x in a) x in b", Theory::Ikp).unwrap();
        assert!(h.eval_bounded(&f, &v, Theory::Ikp).unwrap());
        let f = parse_formula("(ex x sub a) x = a", Theory::IkpP).unwrap();
        assert!(h.eval_bounded(&f, &v, Theory::IkpP).unwrap());
        let f = parse_formula("ex x. x in a", Theory::Ikp).unwrap();
        assert!(matches!(h.eval_bounded(&f, &v, Theory::Ikp), Err(HierError::ClassViolation(_))));
    }
}
