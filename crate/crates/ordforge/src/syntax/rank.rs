//! Levels, stage sets k(·), and the rank functions of the three infinitary
//! systems. Ranks are computed on the sugar-free form of a formula.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use crate::ord::{self, omega_pow, omega_times, OrdTerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RankError {
    #[error("term has no level: {0}")]
    NoLevel(String),
    #[error("assignment has {got} entries but the formula has {want} term slots")]
    ArityMismatch { want: usize, got: usize },
}

/// The three infinitary systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Irs,
    IrsP,
    IrsE,
}

impl System {
    pub fn of(theory: Theory) -> System {
        match theory {
            Theory::Ikp => System::Irs,
            Theory::IkpP => System::IrsP,
            Theory::IkpE => System::IrsE,
        }
    }

    /// The term substituted for a bound variable when a rank clause asks for
    /// `F(𝕃_0)`, `F(𝕍_0)` or `F(𝔼_0)`.
    pub fn zero_term(self) -> Term {
        match self {
            System::Irs => Term::L(OrdTerm::zero()),
            System::IrsP => Term::V(OrdTerm::zero()),
            System::IrsE => Term::E(OrdTerm::zero()),
        }
    }
}

fn omega() -> OrdTerm {
    OrdTerm::omega()
}

fn big() -> OrdTerm {
    OrdTerm::big_omega()
}

/// |t| for stage terms, indexed variables and comprehensions over a stage.
pub fn level(t: &Term) -> Result<OrdTerm, RankError> {
    match t {
        Term::L(a) | Term::V(a) | Term::IVar(_, a) => Ok(a.clone()),
        Term::Comp(c) => match &c.bound {
            Term::L(a) | Term::V(a) => Ok(a.clone()),
            _ => Err(RankError::NoLevel(t.to_string())),
        },
        _ => Err(RankError::NoLevel(t.to_string())),
    }
}

/// Level with free and bound variables read as level 0.
pub fn level_or_zero(t: &Term) -> OrdTerm {
    level(t).unwrap_or_default()
}

fn k_term(t: &Term, out: &mut BTreeSet<OrdTerm>) {
    match t {
        Term::L(a) | Term::V(a) | Term::E(a) | Term::IVar(_, a) => {
            out.insert(a.clone());
        }
        Term::Comp(c) => {
            k_term(&c.bound, out);
            k_formula(&c.body, out);
        }
        Term::Free(_) | Term::Bound(_) => {}
    }
}

fn k_formula(f: &Formula, out: &mut BTreeSet<OrdTerm>) {
    let mut terms = Vec::new();
    f.visit_terms(&mut |t| terms.push(t.clone()));
    for t in &terms {
        k_term(t, out);
    }
}

/// Every stage subscript occurring in `f`, subterms included.
pub fn k_of(f: &Formula) -> BTreeSet<OrdTerm> {
    let mut out = BTreeSet::new();
    k_formula(f, &mut out);
    out
}

pub fn k_of_sequent(s: &Sequent) -> BTreeSet<OrdTerm> {
    let mut out = BTreeSet::new();
    for f in s.formulas() {
        k_formula(f, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// IRS_Ω

pub fn rank_irs_term(t: &Term) -> OrdTerm {
    match t {
        Term::L(a) | Term::V(a) | Term::E(a) | Term::IVar(_, a) => omega_times(a),
        Term::Comp(c) => {
            let body = rk_irs(&c.body.open(&System::Irs.zero_term())).add_nat(2);
            let head = match &c.bound {
                Term::L(a) => omega_times(a).succ(),
                b => rank_irs_term(b).succ(),
            };
            ord::max(&head, &body)
        }
        Term::Free(_) | Term::Bound(_) => OrdTerm::zero(),
    }
}

fn rk_irs(f: &Formula) -> OrdTerm {
    use Formula::*;
    let z = System::Irs.zero_term();
    match f {
        In(s, t) => ord::max(&rank_irs_term(s).add_nat(6), &rank_irs_term(t).succ()),
        Not(a) => rk_irs(a).succ(),
        And(a, b) | Or(a, b) | Imp(a, b) => ord::max(&rk_irs(a), &rk_irs(b)).succ(),
        Q { bound: Bound::Unbounded, body, .. } => ord::max(&big(), &rk_irs(&body.open(&z)).succ()),
        Q { bound, body, .. } => {
            let inner = rk_irs(&body.open(&z)).add_nat(2);
            bound.terms().into_iter().fold(inner, |acc, t| ord::max(&acc, &rank_irs_term(t)))
        }
        Eq(..) | Sub(..) | Fun(..) => rk_irs(&f.desugar()),
    }
}

pub fn rank_irs(f: &Formula) -> OrdTerm {
    rk_irs(&f.desugar())
}

// ---------------------------------------------------------------------------
// IRS_Ω^P

fn rk_irsp(f: &Formula) -> OrdTerm {
    use Formula::*;
    let z = System::IrsP.zero_term();
    match f {
        In(s, t) => ord::max(&level_or_zero(s), &level_or_zero(t)).succ(),
        Not(a) => rk_irsp(a).succ(),
        And(a, b) | Or(a, b) | Imp(a, b) => ord::max(&rk_irsp(a), &rk_irsp(b)).succ(),
        Q { bound, body, .. } => {
            let inner = rk_irsp(&body.open(&z)).add_nat(2);
            let head = match bound {
                Bound::Unbounded => big(),
                Bound::In(t) => level_or_zero(t),
                Bound::Sub(t) => level_or_zero(t).succ(),
                Bound::Exp(a, b) => ord::max(&level_or_zero(a), &level_or_zero(b)).succ(),
            };
            ord::max(&head, &inner)
        }
        Eq(..) | Sub(..) | Fun(..) => rk_irsp(&f.desugar()),
    }
}

pub fn rank_irsp(f: &Formula) -> OrdTerm {
    rk_irsp(&f.desugar())
}

/// Terms of IRS_Ω^P have rank equal to their level.
pub fn rank_irsp_term(t: &Term) -> OrdTerm {
    level_or_zero(t)
}

// ---------------------------------------------------------------------------
// IRS_Ω^E

/// The distinct closed terms at atom and bound positions, in first-occurrence
/// order. These are the slots indexed by an assignment β̄.
pub fn term_slots(f: &Formula) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    f.desugar().visit_terms(&mut |t| {
        if t.is_closed() && !out.contains(t) {
            out.push(t.clone());
        }
    });
    out
}

fn norm_e(f: &Formula, env: &BTreeMap<Term, OrdTerm>) -> OrdTerm {
    use Formula::*;
    // Terms that mention a bound variable stand for 𝔼_0 instances: weight 0.
    let beta = |t: &Term| env.get(t).cloned().unwrap_or_default();
    match f {
        In(s, t) => ord::max(&beta(s), &beta(t)),
        Not(a) => norm_e(a, env).succ(),
        And(a, b) | Or(a, b) | Imp(a, b) => ord::max(&norm_e(a, env), &norm_e(b, env)).succ(),
        Q { bound, body, .. } => {
            let inner = norm_e(body, env).add_nat(2);
            let head = match bound {
                Bound::Unbounded => big(),
                Bound::In(t) => beta(t),
                Bound::Sub(t) => beta(t).succ(),
                Bound::Exp(a, b) => ord::max(&beta(a).add(&omega()), &beta(b).add(&omega())),
            };
            ord::max(&head, &inner)
        }
        Eq(..) | Sub(..) | Fun(..) => norm_e(&f.desugar(), env),
    }
}

/// ‖A‖_β̄ with β̄ positional over [`term_slots`].
pub fn rank_irse(f: &Formula, betas: &[OrdTerm]) -> Result<OrdTerm, RankError> {
    let slots = term_slots(f);
    if slots.len() != betas.len() {
        return Err(RankError::ArityMismatch { want: slots.len(), got: betas.len() });
    }
    let env: BTreeMap<Term, OrdTerm> = slots.into_iter().zip(betas.iter().cloned()).collect();
    Ok(norm_e(&f.desugar(), &env))
}

/// ‖A‖_β̄ with β̄ given per term; unlisted slots weigh 0.
pub fn rank_irse_map(f: &Formula, env: &BTreeMap<Term, OrdTerm>) -> OrdTerm {
    norm_e(&f.desugar(), env)
}

/// rk(A) := ‖A‖ at the all-zero assignment.
pub fn rank_irse0(f: &Formula) -> OrdTerm {
    norm_e(&f.desugar(), &BTreeMap::new())
}

/// m(t): an upper bound on the hierarchy position of a term.
pub fn mbound(t: &Term) -> OrdTerm {
    match t {
        Term::E(a) | Term::IVar(_, a) | Term::L(a) | Term::V(a) => a.clone(),
        Term::Comp(c) => {
            let params = term_slots(&c.body);
            let inner = params.iter().fold(mbound(&c.bound), |acc, s| ord::max(&acc, &mbound(s)));
            inner.succ()
        }
        Term::Free(_) | Term::Bound(_) => OrdTerm::zero(),
    }
}

// ---------------------------------------------------------------------------
// Norms

/// Rank in the system matching `theory` (all-zero assignment for IRS^E).
pub fn rank(f: &Formula, system: System) -> OrdTerm {
    match system {
        System::Irs => rank_irs(f),
        System::IrsP => rank_irsp(f),
        System::IrsE => rank_irse0(f),
    }
}

/// no(A) = ω^{rk(A)}.
pub fn norm_no(f: &Formula, system: System) -> OrdTerm {
    omega_pow(&rank(f, system))
}

/// Natural sum of the norms of the sequent's formulas (Γ listed once per
/// distinct formula, then Δ).
pub fn norm_no_sequent(s: &Sequent, system: System) -> OrdTerm {
    norm_with(s, |f| norm_no(f, system))
}

/// no_β̄ for IRS^E with per-term weights.
pub fn norm_no_sequent_e(s: &Sequent, env: &BTreeMap<Term, OrdTerm>) -> OrdTerm {
    norm_with(s, |f| omega_pow(&rank_irse_map(f, env)))
}

fn norm_with(s: &Sequent, no: impl Fn(&Formula) -> OrdTerm) -> OrdTerm {
    let mut seen: Vec<&Formula> = Vec::new();
    let mut acc = OrdTerm::zero();
    for f in &s.gamma {
        if !seen.contains(&f) {
            seen.push(f);
            acc = acc.nat_sum(&no(f));
        }
    }
    if let Some(d) = &s.delta {
        acc = acc.nat_sum(&no(d));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_formula, parse_term};
    use super::*;
    use crate::ord::parse;

    fn o(s: &str) -> OrdTerm {
        parse(s).unwrap()
    }

    #[test]
    fn irs_examples() {
        assert_eq!(rank_irs_term(&Term::L(o("0"))), o("0"));
        let f = parse_formula("L(1) in L(2)", Theory::Ikp).unwrap();
        assert_eq!(rank_irs(&f), o("w+w+1"));
        let f = parse_formula("ex x . x in L(0)", Theory::Ikp).unwrap();
        assert_eq!(rank_irs(&f), o("W"));
        assert_eq!(norm_no(&f, System::Irs), o("W"));
    }

    #[test]
    fn irsp_examples() {
        let f = parse_formula("V(0) in V(1)", Theory::IkpP).unwrap();
        assert_eq!(rank_irsp(&f), o("2"));
        let f = parse_formula("(ex x sub V(3)) x in V(3)", Theory::IkpP).unwrap();
        assert_eq!(rank_irsp(&f), o("6"));
        let f = parse_formula("all x . x in V(0)", Theory::IkpP).unwrap();
        assert!(rank_irsp(&f) >= o("W"));
    }

    #[test]
    fn irse_examples() {
        let f = parse_formula("a in b", Theory::IkpE).unwrap();
        assert_eq!(rank_irse(&f, &[o("3"), o("5")]).unwrap(), o("5"));
        assert!(matches!(rank_irse(&f, &[o("3")]), Err(RankError::ArityMismatch { .. })));
        let f = parse_formula("(ex x in exp(s,t)) x in c", Theory::IkpE).unwrap();
        assert_eq!(rank_irse(&f, &[o("1"), o("2"), o("7")]).unwrap(), o("w"));
        let g = parse_formula("ex x . x in a", Theory::IkpE).unwrap();
        assert_eq!(rank_irse(&g, &[o("4")]).unwrap(), rank_irse0(&g));
    }

    #[test]
    fn levels_and_k() {
        assert_eq!(level(&Term::IVar(3, o("w"))).unwrap(), o("w"));
        let t = parse_term("{ x in V(5) | x in x }", Theory::IkpP).unwrap();
        assert_eq!(level(&t).unwrap(), o("5"));
        assert!(level(&Term::E(o("1"))).is_err());
        let f = parse_formula("L(0) in L(w)", Theory::Ikp).unwrap();
        assert_eq!(k_of(&f), [o("0"), o("w")].into_iter().collect());
        assert!(k_of_sequent(&Sequent::default()).is_empty());
    }

    #[test]
    fn mbound_examples() {
        assert_eq!(mbound(&Term::E(o("w"))), o("w"));
        assert_eq!(mbound(&Term::IVar(0, o("3"))), o("3"));
        let t = parse_term("{ x in E(2) | x in E(1) }", Theory::IkpE).unwrap();
        assert_eq!(mbound(&t), o("3"));
    }
}
