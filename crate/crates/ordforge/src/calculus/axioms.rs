//! Axiom schemas: instance builders and instance recognizers.
//!
//! Every schema is built from nameless bodies, so recognition is "extract the
//! parameters, rebuild, compare". Comparison is on sugar-free forms.

use super::{CalcError, RuleTag};
use crate::syntax::classify::{in_language, is_delta0};
use crate::syntax::{Bound, Formula, Hint, Quant, Sequent, Term, Theory};

fn q(quant: Quant, bound: Bound, hint: &str, body: Formula) -> Formula {
    Formula::Q { q: quant, bound, hint: Hint(hint.into()), body: Box::new(body) }
}

fn b(i: usize) -> Term {
    Term::Bound(i)
}

pub fn pair(a: &Term, c: &Term) -> Formula {
    q(Quant::Ex, Bound::Unbounded, "z", Formula::and(Formula::In(a.shift(1, 0), b(0)), Formula::In(c.shift(1, 0), b(0))))
}

pub fn union(a: &Term) -> Formula {
    q(
        Quant::Ex,
        Bound::Unbounded,
        "z",
        q(Quant::All, Bound::In(a.shift(1, 0)), "y", q(Quant::All, Bound::In(b(0)), "x", Formula::In(b(0), b(2)))),
    )
}

pub fn infinity() -> Formula {
    q(
        Quant::Ex,
        Bound::Unbounded,
        "x",
        Formula::and(
            q(Quant::Ex, Bound::In(b(0)), "y", Formula::In(b(0), b(1))),
            q(Quant::All, Bound::In(b(0)), "y", q(Quant::Ex, Bound::In(b(1)), "z", Formula::In(b(1), b(0)))),
        ),
    )
}

pub fn power_set(a: &Term) -> Formula {
    q(Quant::Ex, Bound::Unbounded, "z", q(Quant::All, Bound::Sub(a.shift(1, 0)), "x", Formula::In(b(0), b(1))))
}

pub fn exponentiation(a: &Term, c: &Term) -> Formula {
    q(
        Quant::Ex,
        Bound::Unbounded,
        "z",
        q(Quant::All, Bound::Exp(a.shift(1, 0), c.shift(1, 0)), "x", Formula::In(b(0), b(1))),
    )
}

/// `body` binds index 0 (the separated variable).
pub fn separation(a: &Term, body: &Formula) -> Formula {
    let bx = body.shift(1, 1);
    q(
        Quant::Ex,
        Bound::Unbounded,
        "y",
        Formula::and(
            q(Quant::All, Bound::In(b(0)), "x", Formula::and(Formula::In(b(0), a.shift(2, 0)), bx.clone())),
            q(Quant::All, Bound::In(a.shift(1, 0)), "x", Formula::imp(bx, Formula::In(b(0), b(1)))),
        ),
    )
}

/// `body` binds index 0.
pub fn set_induction(body: &Formula) -> Formula {
    Formula::imp(
        q(
            Quant::All,
            Bound::Unbounded,
            "x",
            Formula::imp(q(Quant::All, Bound::In(b(0)), "y", body.shift(1, 1)), body.clone()),
        ),
        q(Quant::All, Bound::Unbounded, "x", body.clone()),
    )
}

/// `body` binds y at index 0 and x at index 1.
pub fn collection(a: &Term, body: &Formula) -> Formula {
    Formula::imp(
        q(Quant::All, Bound::In(a.clone()), "x", q(Quant::Ex, Bound::Unbounded, "y", body.clone())),
        q(
            Quant::Ex,
            Bound::Unbounded,
            "z",
            q(Quant::All, Bound::In(a.shift(1, 0)), "x", q(Quant::Ex, Bound::In(b(1)), "y", body.shift(1, 2))),
        ),
    )
}

/// `body` binds index 0.
pub fn extensionality(a: &Term, c: &Term, body: &Formula) -> Formula {
    Formula::imp(Formula::and(Formula::Eq(a.clone(), c.clone()), body.open(a)), body.open(c))
}

// ---------------------------------------------------------------------------
// Instantiation

/// An argument to a schema: a term, or a formula with named distinguished
/// variables (outermost first).
#[derive(Debug, Clone)]
pub enum AxArg {
    Term(Term),
    Formula { vars: Vec<String>, body: Formula },
}

impl AxArg {
    pub fn term(name: &str) -> AxArg {
        AxArg::Term(Term::free(name))
    }

    pub fn formula(vars: &[&str], body: Formula) -> AxArg {
        AxArg::Formula { vars: vars.iter().map(|s| s.to_string()).collect(), body }
    }
}

fn class_check(theory: Theory, what: &str, f: &Formula) -> Result<(), CalcError> {
    if !in_language(f, theory) {
        return Err(CalcError::ClassViolation(format!("{} is not in the language of {}", what, theory.name())));
    }
    if !is_delta0(f) {
        return Err(CalcError::ClassViolation(format!("{} is not Δ0", what)));
    }
    Ok(())
}

/// The schema instance `⇒ A` for the given arguments.
pub fn axiom_instantiate(schema: RuleTag, args: &[AxArg], theory: Theory) -> Result<Sequent, CalcError> {
    use RuleTag::*;
    if !schema.is_axiom() || !schema.available_in(theory) {
        return Err(CalcError::TheoryMismatch(schema.name().into(), theory.name().into()));
    }
    let bad = |msg: &str| CalcError::BadArguments(schema.name().into(), msg.into());
    let body = |arg: &AxArg, n: usize| -> Result<Formula, CalcError> {
        match arg {
            AxArg::Formula { vars, body } if vars.len() == n => {
                Ok(vars.iter().fold(body.clone(), |acc, v| acc.close(v)))
            }
            _ => Err(bad(&format!("expected a formula in {} variable(s)", n))),
        }
    };
    let term = |arg: &AxArg| -> Result<Term, CalcError> {
        match arg {
            AxArg::Term(t) => Ok(t.clone()),
            _ => Err(bad("expected a term")),
        }
    };
    let f = match (schema, args) {
        (Log, [AxArg::Formula { vars, body }]) if vars.is_empty() => {
            class_check(theory, "logical axiom formula", body)?;
            return Ok(Sequent::new(vec![body.clone()], Some(body.clone())));
        }
        (Ext, [a, c, bf]) => {
            let bf = body(bf, 1)?;
            class_check(theory, "extensionality formula", &bf)?;
            extensionality(&term(a)?, &term(c)?, &bf)
        }
        (Pair, [a, c]) => pair(&term(a)?, &term(c)?),
        (Union, [a]) => union(&term(a)?),
        (Sep, [a, bf]) => {
            let bf = body(bf, 1)?;
            class_check(theory, "separation formula", &bf)?;
            separation(&term(a)?, &bf)
        }
        (SetInd, [bf]) => {
            let bf = body(bf, 1)?;
            if !in_language(&bf, theory) {
                return Err(CalcError::ClassViolation("set induction formula not in the language".into()));
            }
            set_induction(&bf)
        }
        (Inf, []) => infinity(),
        (Coll, [a, g]) => {
            let g = body(g, 2)?;
            class_check(theory, "collection formula", &g)?;
            collection(&term(a)?, &g)
        }
        (Pow, [a]) => power_set(&term(a)?),
        (ExpAx, [a, c]) => exponentiation(&term(a)?, &term(c)?),
        _ => return Err(bad("wrong number or kind of arguments")),
    };
    Ok(Sequent::right(f))
}

// ---------------------------------------------------------------------------
// Recognition

/// Why a formula is not an instance of a schema.
pub type Mismatch = String;

fn closed_terms(f: &Formula) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    f.visit_terms(&mut |t| {
        if t.is_closed() && !out.contains(t) {
            out.push(t.clone());
        }
    });
    out
}

fn quant_parts(f: &Formula) -> Option<(Quant, &Bound, &Formula)> {
    match f {
        Formula::Q { q, bound, body, .. } => Some((*q, bound, body)),
        _ => None,
    }
}

/// Find a body `B` (binding index 0) with `B(a) = fa` and `B(c) = fc`.
pub fn anti_unify(fa: &Formula, fc: &Formula, a: &Term, c: &Term) -> Option<Formula> {
    au_f(fa, fc, a, c, 0)
}

fn au_t(ta: &Term, tc: &Term, a: &Term, c: &Term, depth: usize) -> Option<Term> {
    if ta == tc {
        return Some(ta.shift(1, depth));
    }
    if *ta == a.shift(depth, 0) && *tc == c.shift(depth, 0) {
        return Some(Term::Bound(depth));
    }
    None
}

fn au_f(fa: &Formula, fc: &Formula, a: &Term, c: &Term, d: usize) -> Option<Formula> {
    use Formula::*;
    Some(match (fa, fc) {
        (In(x1, y1), In(x2, y2)) => In(au_t(x1, x2, a, c, d)?, au_t(y1, y2, a, c, d)?),
        (Eq(x1, y1), Eq(x2, y2)) => Eq(au_t(x1, x2, a, c, d)?, au_t(y1, y2, a, c, d)?),
        (Sub(x1, y1), Sub(x2, y2)) => Sub(au_t(x1, x2, a, c, d)?, au_t(y1, y2, a, c, d)?),
        (Fun(x1, y1, z1), Fun(x2, y2, z2)) => {
            Fun(au_t(x1, x2, a, c, d)?, au_t(y1, y2, a, c, d)?, au_t(z1, z2, a, c, d)?)
        }
        (Not(x), Not(y)) => Formula::not(au_f(x, y, a, c, d)?),
        (And(x1, y1), And(x2, y2)) => Formula::and(au_f(x1, x2, a, c, d)?, au_f(y1, y2, a, c, d)?),
        (Or(x1, y1), Or(x2, y2)) => Formula::or(au_f(x1, x2, a, c, d)?, au_f(y1, y2, a, c, d)?),
        (Imp(x1, y1), Imp(x2, y2)) => Formula::imp(au_f(x1, x2, a, c, d)?, au_f(y1, y2, a, c, d)?),
        (Q { q: q1, bound: b1, hint, body: body1 }, Q { q: q2, bound: b2, body: body2, .. }) if q1 == q2 => {
            let bound = match (b1, b2) {
                (Bound::Unbounded, Bound::Unbounded) => Bound::Unbounded,
                (Bound::In(x), Bound::In(y)) => Bound::In(au_t(x, y, a, c, d)?),
                (Bound::Sub(x), Bound::Sub(y)) => Bound::Sub(au_t(x, y, a, c, d)?),
                (Bound::Exp(x1, y1), Bound::Exp(x2, y2)) => Bound::Exp(au_t(x1, x2, a, c, d)?, au_t(y1, y2, a, c, d)?),
                _ => return None,
            };
            Q { q: *q1, bound, hint: hint.clone(), body: Box::new(au_f(body1, body2, a, c, d + 1)?) }
        }
        _ => return None,
    })
}

/// Check that the sugar-free formula `f` is an instance of `schema`.
pub fn recognize(schema: RuleTag, f: &Formula, theory: Theory) -> Result<(), Mismatch> {
    use RuleTag::*;
    let fail = || Err(format!("not an instance of the {} schema", schema.name()));
    let same = |g: Formula| if g.desugar() == *f { Ok(()) } else { fail() };
    let delta0 = |g: &Formula, what: &str| -> Result<(), Mismatch> {
        if is_delta0(g) && in_language(g, theory) {
            Ok(())
        } else {
            Err(format!("{} formula is not Δ0", what))
        }
    };
    let candidates = closed_terms(f);
    match schema {
        Pair => {
            for a in &candidates {
                for c in &candidates {
                    if pair(a, c) == *f {
                        return Ok(());
                    }
                }
            }
            fail()
        }
        Union => if candidates.iter().any(|a| union(a) == *f) { Ok(()) } else { fail() },
        Pow => if candidates.iter().any(|a| power_set(a) == *f) { Ok(()) } else { fail() },
        ExpAx => {
            for a in &candidates {
                for c in &candidates {
                    if exponentiation(a, c) == *f {
                        return Ok(());
                    }
                }
            }
            fail()
        }
        Inf => same(infinity()),
        Sep => {
            // ∃y[(∀x∈y)(x∈a ∧ B(x)) ∧ (∀x∈a)(B(x) → x∈y)]
            let Some((Quant::Ex, Bound::Unbounded, Formula::And(left, right))) = quant_parts(f) else { return fail() };
            let Some((Quant::All, Bound::In(a), _)) = quant_parts(right) else { return fail() };
            let Some((Quant::All, _, Formula::And(_, b1))) = quant_parts(left) else { return fail() };
            if a.has_loose(0) {
                return Err("separation bound mentions the separated set".into());
            }
            // B sits under ∃y and ∀x; y (index 1) must not occur in it.
            let Some(body) = b1.drop_index(1) else {
                return Err("separation formula mentions the separated set".into());
            };
            let a = a.clone();
            if separation(&a, &body) != *f {
                return fail();
            }
            delta0(&body, "separation")
        }
        SetInd => {
            let Formula::Imp(_, rhs) = f else { return fail() };
            let Some((Quant::All, Bound::Unbounded, body)) = quant_parts(rhs) else { return fail() };
            if set_induction(body) != *f {
                return fail();
            }
            if !in_language(body, theory) {
                return Err("set induction formula not in the language".into());
            }
            Ok(())
        }
        Coll => {
            let Formula::Imp(lhs, _) = f else { return fail() };
            let Some((Quant::All, Bound::In(a), inner)) = quant_parts(lhs) else { return fail() };
            let Some((Quant::Ex, Bound::Unbounded, g)) = quant_parts(inner) else { return fail() };
            if collection(a, g) != *f {
                return fail();
            }
            delta0(g, "collection")
        }
        Ext => {
            let Formula::Imp(lhs, bc) = f else { return fail() };
            let Formula::And(eq, ba) = lhs.as_ref() else { return fail() };
            let Formula::And(s1, s2) = eq.as_ref() else { return fail() };
            let (Some((_, Bound::In(a), _)), Some((_, Bound::In(c), _))) = (quant_parts(s1), quant_parts(s2)) else {
                return fail();
            };
            if Formula::Eq(a.clone(), c.clone()).desugar() != **eq {
                return fail();
            }
            let Some(body) = anti_unify(ba, bc, a, c) else { return fail() };
            delta0(&body, "extensionality")
        }
        Log => Ok(()),
        _ => fail(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check, Derivation};
    use crate::syntax::parse_formula;

    fn ok(schema: RuleTag, args: &[AxArg], th: Theory) -> bool {
        let s = axiom_instantiate(schema, args, th).unwrap();
        check(&Derivation::leaf(schema, s), th).ok
    }

    #[test]
    fn instances_check() {
        let f = |s: &str| parse_formula(s, Theory::IkpE).unwrap();
        let (a, c) = (AxArg::term("a"), AxArg::term("c"));
        assert!(ok(RuleTag::Pair, &[a.clone(), c.clone()], Theory::Ikp));
        assert!(ok(RuleTag::Union, std::slice::from_ref(&a), Theory::Ikp));
        assert!(ok(RuleTag::Inf, &[], Theory::IkpP));
        assert!(ok(RuleTag::Pow, std::slice::from_ref(&a), Theory::IkpP));
        assert!(ok(RuleTag::ExpAx, &[a.clone(), c.clone()], Theory::IkpE));
        let bx = AxArg::formula(&["x"], f("(ex y in x) y in c"));
        assert!(ok(RuleTag::Sep, &[a.clone(), bx.clone()], Theory::Ikp));
        assert!(ok(RuleTag::Ext, &[a.clone(), c.clone(), bx.clone()], Theory::Ikp));
        assert!(ok(RuleTag::SetInd, &[AxArg::formula(&["x"], f("ex y . x in y"))], Theory::Ikp));
        assert!(ok(RuleTag::Coll, &[a.clone(), AxArg::formula(&["x", "y"], f("x in y"))], Theory::Ikp));
        assert!(ok(RuleTag::Log, &[AxArg::formula(&[], f("a in c"))], Theory::Ikp));
    }

    #[test]
    fn errors() {
        let a = AxArg::term("a");
        assert!(matches!(axiom_instantiate(RuleTag::Pow, std::slice::from_ref(&a), Theory::IkpE), Err(CalcError::TheoryMismatch(..))));
        let bad = AxArg::formula(&["x"], parse_formula("ex y . y in x", Theory::Ikp).unwrap());
        assert!(matches!(axiom_instantiate(RuleTag::Sep, &[a.clone(), bad], Theory::Ikp), Err(CalcError::ClassViolation(_))));
        let p = pair(&Term::free("a"), &Term::free("b"));
        assert_eq!(p.to_string(), "ex z . a in z & b in z");
        assert_eq!(exponentiation(&Term::free("a"), &Term::free("b")).to_string(), "ex z . (all x in exp(a,b)) x in z");
    }

    #[test]
    fn non_delta0_separation_rejected() {
        let th = Theory::Ikp;
        let body = parse_formula("ex y . y in x", th).unwrap().close("x");
        let inst = separation(&Term::free("a"), &body);
        let r = check(&Derivation::leaf(RuleTag::Sep, Sequent::right(inst)), th);
        assert!(r.failures[0].reason.contains("not Δ0"), "{:?}", r);
    }
}
