//! The proof-checking kernel.
//!
//! Every comparison happens on sugar-free formulas, and antecedents are
//! compared as sets. Left rules may keep their principal formula in the
//! premise (contraction).

use serde::{Deserialize, Serialize};

use super::axioms::recognize;
use super::{Derivation, RuleTag};
use crate::syntax::classify::{in_language, is_delta0};
use crate::syntax::{fun_expand, sub_expand, Bound, Formula, Quant, Sequent, Term, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

pub fn check(d: &Derivation, theory: Theory) -> CheckReport {
    let mut failures = Vec::new();
    d.walk(&mut |path, node| {
        if let Err(reason) = check_node(node, theory) {
            failures.push(Failure { path: path.to_string(), reason });
        }
    });
    CheckReport { ok: failures.is_empty(), failures }
}

/// A sequent with sugar expanded.
struct Flat {
    gamma: Vec<Formula>,
    delta: Option<Formula>,
}

impl Flat {
    fn of(s: &Sequent) -> Flat {
        Flat { gamma: s.gamma.iter().map(Formula::desugar).collect(), delta: s.delta.as_ref().map(Formula::desugar) }
    }
}

fn subset(a: &[Formula], b: &[Formula]) -> bool {
    a.iter().all(|f| b.contains(f))
}

fn set_eq(a: &[Formula], b: &[Formula]) -> bool {
    subset(a, b) && subset(b, a)
}

fn with(gamma: &[Formula], extra: &[Formula]) -> Vec<Formula> {
    let mut out = gamma.to_vec();
    out.extend(extra.iter().cloned());
    out
}

fn well_formed(f: &Formula, theory: Theory) -> Result<(), String> {
    if f.has_loose(0) {
        return Err("formula has a dangling bound variable".into());
    }
    if !in_language(f, theory) {
        return Err(format!("formula not in the language of {}", theory.name()));
    }
    let mut finite = true;
    f.visit_terms(&mut |t| finite &= matches!(t, Term::Free(_) | Term::Bound(_)));
    if !finite {
        return Err("stage term in a finite derivation".into());
    }
    Ok(())
}

fn check_node(d: &Derivation, theory: Theory) -> Result<(), String> {
    let rule = d.rule;
    if !rule.available_in(theory) {
        return Err(format!("rule {} is not available in {}", rule.name(), theory.name()));
    }
    if d.premises.len() != rule.arity() {
        return Err(format!("rule {} takes {} premise(s), found {}", rule.name(), rule.arity(), d.premises.len()));
    }
    match (rule.has_eigenvariable(), &d.eigen) {
        (true, None) => return Err("missing eigenvariable".into()),
        (false, Some(_)) => return Err(format!("rule {} has no eigenvariable", rule.name())),
        _ => {}
    }
    for f in d.conclusion.formulas() {
        well_formed(f, theory)?;
    }
    let c = Flat::of(&d.conclusion);
    let ps: Vec<Flat> = d.premises.iter().map(|p| Flat::of(&p.conclusion)).collect();

    if rule.is_axiom() {
        let Some(a) = &c.delta else { return Err("axiom with empty succedent".into()) };
        if rule == RuleTag::Log {
            if !c.gamma.contains(a) {
                return Err("logical axiom formula missing from the antecedent".into());
            }
            if !is_delta0(a) {
                return Err("logical axiom formula is not Δ0".into());
            }
            return Ok(());
        }
        return recognize(rule, a, theory);
    }

    if let Some(name) = &d.eigen {
        if d.conclusion.free_vars().contains(name) {
            return Err(format!("eigenvariable violation: {} occurs in the conclusion", name));
        }
    }

    if is_left(rule) {
        left_rule(d, &c, &ps)
    } else {
        right_rule(d, &c, &ps)
    }
}

fn is_left(rule: RuleTag) -> bool {
    use RuleTag::*;
    matches!(rule, AndL | OrL | NotL | ImpL | BExL | BAllL | ExL | AllL | PBExL | PBAllL | EBExL | EBAllL)
}

/// The minor formula of a quantifier rule for principal `p` and instance `t`.
fn instance(rule: RuleTag, p: &Formula, t: &Term) -> Option<Formula> {
    use RuleTag::*;
    let Formula::Q { q, bound, body, .. } = p else { return None };
    let ft = body.open(t);
    let want_q = match rule {
        BExL | BExR | ExL | ExR | PBExL | PBExR | EBExL | EBExR => Quant::Ex,
        _ => Quant::All,
    };
    if *q != want_q {
        return None;
    }
    let guard = match (rule, bound) {
        (ExL | ExR | AllL | AllR, Bound::Unbounded) => return Some(ft),
        (BExL | BExR | BAllL | BAllR, Bound::In(b)) => Formula::In(t.clone(), b.clone()),
        (PBExL | PBExR | PBAllL | PBAllR, Bound::Sub(b)) => sub_expand(t, b),
        (EBExL | EBExR | EBAllL | EBAllR, Bound::Exp(a, b)) => fun_expand(t, a, b),
        _ => return None,
    };
    Some(if want_q == Quant::Ex { Formula::and(guard, ft) } else { Formula::imp(guard, ft) })
}

fn is_quant_rule(rule: RuleTag) -> bool {
    use RuleTag::*;
    !matches!(rule, AndL | AndR | OrL | OrR | NotL | NotR | Bot | ImpL | ImpR | Cut) && !rule.is_axiom()
}

/// Instance terms worth trying: every closed term of the candidate minors,
/// plus a placeholder for vacuous quantifiers.
fn witnesses(fs: &[&Formula]) -> Vec<Term> {
    let mut out = vec![Term::free("#any")];
    for f in fs {
        f.visit_terms(&mut |t| {
            if t.is_closed() && !out.contains(t) {
                out.push(t.clone());
            }
        });
    }
    out
}

/// For a quantifier inference: its principal formula, instance term and minor
/// formula (all sugar-free).
pub fn quantifier_instance(d: &Derivation) -> Option<(Formula, Term, Formula)> {
    let rule = d.rule;
    if !is_quant_rule(rule) || d.premises.len() != 1 {
        return None;
    }
    let c = Flat::of(&d.conclusion);
    let p = Flat::of(&d.premises[0].conclusion);
    let pick = |principal: &Formula, minors: &[Formula]| -> Option<(Formula, Term, Formula)> {
        let ts = match &d.eigen {
            Some(e) => vec![Term::free(e)],
            None => witnesses(&minors.iter().collect::<Vec<_>>()),
        };
        ts.into_iter().find_map(|t| {
            let m = instance(rule, principal, &t)?;
            minors.contains(&m).then(|| (principal.clone(), t, m))
        })
    };
    if is_left(rule) {
        c.gamma.iter().find_map(|pr| pick(pr, &p.gamma))
    } else {
        pick(c.delta.as_ref()?, p.delta.as_slice())
    }
}

const SHAPE: &str = "premises do not match the rule";

fn right_rule(d: &Derivation, c: &Flat, ps: &[Flat]) -> Result<(), String> {
    use RuleTag::*;
    let rule = d.rule;
    let same_gamma = |p: &Flat, extra: &[Formula]| set_eq(&p.gamma, &with(&c.gamma, extra));
    let shape = |ok: bool| if ok { Ok(()) } else { Err(SHAPE.to_string()) };
    match rule {
        Cut => {
            let Some(a) = &ps[0].delta else { return Err("cut premise has no cut formula".into()) };
            shape(
                same_gamma(&ps[0], &[])
                    && same_gamma(&ps[1], std::slice::from_ref(a))
                    && ps[1].delta == c.delta,
            )
        }
        Bot => shape(c.delta.is_some() && ps[0].delta.is_none() && same_gamma(&ps[0], &[])),
        _ => {
            let Some(principal) = &c.delta else { return Err("right rule with empty succedent".into()) };
            match (rule, principal) {
                (AndR, Formula::And(a, b)) => shape(
                    same_gamma(&ps[0], &[])
                        && same_gamma(&ps[1], &[])
                        && ps[0].delta.as_ref() == Some(a)
                        && ps[1].delta.as_ref() == Some(b),
                ),
                (OrR, Formula::Or(a, b)) => {
                    shape(same_gamma(&ps[0], &[]) && (ps[0].delta.as_ref() == Some(a) || ps[0].delta.as_ref() == Some(b)))
                }
                (NotR, Formula::Not(a)) => shape(same_gamma(&ps[0], &[(**a).clone()]) && ps[0].delta.is_none()),
                (ImpR, Formula::Imp(a, b)) => {
                    shape(same_gamma(&ps[0], &[(**a).clone()]) && ps[0].delta.as_ref() == Some(b))
                }
                _ if is_quant_rule(rule) => {
                    if !same_gamma(&ps[0], &[]) {
                        return Err(SHAPE.into());
                    }
                    let Some(minor) = &ps[0].delta else { return Err(SHAPE.into()) };
                    let ts = match &d.eigen {
                        Some(e) => vec![Term::free(e)],
                        None => witnesses(&[minor]),
                    };
                    let hit = ts.iter().any(|t| instance(rule, principal, t).as_ref() == Some(minor));
                    shape(hit)
                }
                _ => Err(format!("principal formula does not fit {}", rule.name())),
            }
        }
    }
}

/// One premise of a left rule: its minor formulas and expected succedent.
struct Slot {
    minors: Vec<Formula>,
    delta: Option<Formula>,
}

fn fits(c: &Flat, principal: &Formula, p: &Flat, slot: &Slot) -> bool {
    let rest: Vec<Formula> = c.gamma.iter().filter(|f| *f != principal).cloned().collect();
    subset(&p.gamma, &with(&c.gamma, &slot.minors))
        && subset(&slot.minors, &p.gamma)
        && subset(&rest, &p.gamma)
        && p.delta == slot.delta
}

fn left_rule(d: &Derivation, c: &Flat, ps: &[Flat]) -> Result<(), String> {
    use RuleTag::*;
    let rule = d.rule;
    let keep = || c.delta.clone();
    for principal in &c.gamma {
        // Alternatives: each is one assignment of slots to the premises.
        let alternatives: Vec<Vec<Slot>> = match (rule, principal) {
            (AndL, Formula::And(a, b)) => vec![
                vec![Slot { minors: vec![(**a).clone()], delta: keep() }],
                vec![Slot { minors: vec![(**b).clone()], delta: keep() }],
            ],
            (OrL, Formula::Or(a, b)) => vec![vec![
                Slot { minors: vec![(**a).clone()], delta: keep() },
                Slot { minors: vec![(**b).clone()], delta: keep() },
            ]],
            (NotL, Formula::Not(a)) if c.delta.is_none() => {
                vec![vec![Slot { minors: vec![], delta: Some((**a).clone()) }]]
            }
            (ImpL, Formula::Imp(a, b)) => {
                let minor = Slot { minors: vec![(**b).clone()], delta: keep() };
                let side = Slot { minors: vec![], delta: Some((**a).clone()) };
                let swapped = vec![
                    Slot { minors: vec![], delta: Some((**a).clone()) },
                    Slot { minors: vec![(**b).clone()], delta: keep() },
                ];
                vec![vec![minor, side], swapped]
            }
            (_, Formula::Q { .. }) if is_quant_rule(rule) => {
                let ts = match &d.eigen {
                    Some(e) => vec![Term::free(e)],
                    None => witnesses(&ps[0].gamma.iter().collect::<Vec<_>>()),
                };
                ts.iter()
                    .filter_map(|t| instance(rule, principal, t))
                    .filter(|m| ps[0].gamma.contains(m))
                    .map(|m| vec![Slot { minors: vec![m], delta: keep() }])
                    .collect()
            }
            _ => continue,
        };
        for alt in alternatives {
            if alt.iter().zip(ps).all(|(slot, p)| fits(c, principal, p, slot)) {
                return Ok(());
            }
        }
    }
    Err(format!("no principal formula in the antecedent fits {}", rule.name()))
}
