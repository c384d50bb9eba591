#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ordforge::calculus::{Derivation, RuleTag};
use ordforge::collapse::psi;
use ordforge::ord::{add, veblen, OrdTerm};
use ordforge::syntax::rank::level_or_zero;
use ordforge::syntax::{Bound, Comp, Formula, Hint, Quant, Sequent, Term, Theory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type R = ChaCha8Rng;

pub fn rng(seed: u64) -> R {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn o(s: &str) -> OrdTerm {
    ordforge::ord::parse(s).unwrap()
}

// ---------------------------------------------------------------------------
// Ordinals

/// All normal terms of size ≤ `max` reachable from {0, 1, ω, Ω} by +, φ, ψ.
pub fn universe(max: usize) -> Vec<OrdTerm> {
    let mut all: BTreeSet<OrdTerm> = ["0", "1", "w", "W"].iter().map(|s| o(s)).collect();
    let mut fresh: Vec<OrdTerm> = all.iter().cloned().collect();
    // Semi-naive closure: each round combines at least one new term.
    while !fresh.is_empty() {
        let old: Vec<OrdTerm> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for a in &fresh {
            if let Ok(p) = psi(a) {
                next.push(p);
            }
            for b in &old {
                if a.size() + b.size() <= max {
                    next.push(add(a, b));
                    next.push(add(b, a));
                }
                if a.size() + b.size() < max {
                    next.push(veblen(a, b));
                    next.push(veblen(b, a));
                }
            }
        }
        fresh = next.into_iter().filter(|x| x.size() <= max && !all.contains(x)).collect::<BTreeSet<_>>().into_iter().collect();
        all.extend(fresh.iter().cloned());
    }
    all.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Formulas

fn hint(r: &mut R) -> Hint {
    Hint(["x", "y", "z", "u", "v"].choose(r).unwrap().to_string())
}

/// Generator settings for one family of formulas.
#[derive(Clone)]
pub struct Gen {
    pub theory: Theory,
    /// Closed terms to draw from.
    pub atoms: Vec<Term>,
    /// Probability weight of unbounded quantifiers.
    pub unbounded: f64,
    pub comprehension: bool,
}

impl Gen {
    /// Finite-proof language: free variables only.
    pub fn finite(theory: Theory) -> Gen {
        Gen { theory, atoms: ["a", "b", "c"].iter().map(|n| Term::free(n)).collect(), unbounded: 0.3, comprehension: false }
    }

    /// Infinitary terms for the rank fuzz.
    pub fn infinitary(theory: Theory) -> Gen {
        let stage = |n: u64| match theory {
            Theory::Ikp => Term::L(OrdTerm::nat(n)),
            Theory::IkpP => Term::V(OrdTerm::nat(n)),
            Theory::IkpE => Term::E(OrdTerm::nat(n)),
        };
        let mut atoms: Vec<Term> = (0..4).map(stage).collect();
        if theory != Theory::Ikp {
            atoms.extend((0..3).map(|i| Term::IVar(i, OrdTerm::nat(i as u64))));
        }
        Gen { theory, atoms, unbounded: 0.3, comprehension: theory != Theory::IkpE }
    }

    pub fn term(&self, r: &mut R, depth: usize, fuel: u32) -> Term {
        if depth > 0 && (self.atoms.is_empty() || r.gen_bool(0.5)) {
            return Term::Bound(r.gen_range(0..depth));
        }
        if self.comprehension && fuel > 1 && r.gen_bool(0.15) {
            // Parameters of a comprehension sit strictly below its bound.
            let k = r.gen_range(1..3);
            let bound = match self.theory {
                Theory::Ikp => Term::L(OrdTerm::nat(k)),
                _ => Term::V(OrdTerm::nat(k)),
            };
            let atoms = self.atoms.iter().filter(|t| level_or_zero(t) < OrdTerm::nat(k)).cloned().collect();
            let g = Gen { atoms, unbounded: 0.0, ..self.clone() };
            let body = g.formula(r, 1, fuel - 1);
            return Term::Comp(Box::new(Comp { hint: hint(r), bound, body }));
        }
        self.atoms.choose(r).unwrap().clone()
    }

    fn bound(&self, r: &mut R, depth: usize, fuel: u32) -> Bound {
        if r.gen_bool(self.unbounded) {
            return Bound::Unbounded;
        }
        match (self.theory, r.gen_range(0..4)) {
            (Theory::IkpP, 0) => Bound::Sub(self.term(r, depth, fuel)),
            (Theory::IkpE, 0) => Bound::Exp(self.term(r, depth, fuel), self.term(r, depth, fuel)),
            _ => Bound::In(self.term(r, depth, fuel)),
        }
    }

    pub fn formula(&self, r: &mut R, depth: usize, fuel: u32) -> Formula {
        let pick = if fuel == 0 { r.gen_range(0..3) } else { r.gen_range(0..10) };
        let f = fuel.saturating_sub(1);
        match pick {
            0 | 1 => Formula::In(self.term(r, depth, fuel), self.term(r, depth, fuel)),
            2 => match (self.theory, r.gen_range(0..3)) {
                (Theory::IkpE, 0) => Formula::Fun(self.term(r, depth, fuel), self.term(r, depth, fuel), self.term(r, depth, fuel)),
                (_, 1) => Formula::Sub(self.term(r, depth, fuel), self.term(r, depth, fuel)),
                _ => Formula::Eq(self.term(r, depth, fuel), self.term(r, depth, fuel)),
            },
            3 => Formula::not(self.formula(r, depth, f)),
            4 => Formula::and(self.formula(r, depth, f), self.formula(r, depth, f)),
            5 => Formula::or(self.formula(r, depth, f), self.formula(r, depth, f)),
            6 => Formula::imp(self.formula(r, depth, f), self.formula(r, depth, f)),
            _ => {
                let q = if r.gen_bool(0.5) { Quant::All } else { Quant::Ex };
                let bound = self.bound(r, depth, f);
                let body = self.formula(r, depth + 1, f);
                Formula::Q { q, bound, hint: hint(r), body: Box::new(body) }
            }
        }
    }

    pub fn sentence_or_open(&self, r: &mut R, fuel: u32) -> Formula {
        self.formula(r, 0, fuel)
    }
}

/// r ∈̇ t: membership in a stage, or the defining formula of a comprehension.
pub fn dot_in(r: &Term, t: &Term) -> Formula {
    match t {
        Term::Comp(c) => c.body.open(r),
        _ => Formula::In(r.clone(), t.clone()),
    }
}

// ---------------------------------------------------------------------------
// Proof trees (shape only; used for print/parse round trips)

pub fn random_derivation(r: &mut R, theory: Theory, fuel: u32) -> Derivation {
    let g = Gen::finite(theory);
    let tags: Vec<RuleTag> = all_tags().into_iter().filter(|t| t.available_in(theory)).collect();
    let rule = if fuel == 0 {
        **tags.iter().filter(|t| t.arity() == 0).collect::<Vec<_>>().choose(r).unwrap()
    } else {
        *tags.choose(r).unwrap()
    };
    let mut seq = || {
        let n = r.gen_range(0..3);
        let gamma = (0..n).map(|_| g.formula(r, 0, 2)).collect();
        let delta = if r.gen_bool(0.8) { Some(g.formula(r, 0, 2)) } else { None };
        Sequent::new(gamma, delta)
    };
    let conclusion = seq();
    let premises = (0..rule.arity()).map(|_| random_derivation(r, theory, fuel.saturating_sub(1))).collect();
    let mut d = Derivation::node(rule, conclusion, premises);
    if rule.has_eigenvariable() {
        d.eigen = Some(["p", "q", "e1"].choose(r).unwrap().to_string());
    }
    d
}

pub fn all_tags() -> Vec<RuleTag> {
    [
        "log", "ext", "pair", "union", "sep", "setind", "inf", "coll", "pow", "exp", "andL", "andR", "orL", "orR", "notL",
        "notR", "bot", "impL", "impR", "bexL", "bexR", "ballL", "ballR", "exL", "exR", "allL", "allR", "cut", "pbexL",
        "pbexR", "pballL", "pballR", "ebexL", "ebexR", "eballL", "eballR",
    ]
    .iter()
    .map(|n| RuleTag::from_name(n).unwrap())
    .collect()
}

// ---------------------------------------------------------------------------
// Hereditarily finite sets as Ackermann codes (oracle side)

/// Codes of stage n, built by iterated powerset on bitmasks.
pub fn stage_codes(n: usize) -> Vec<u64> {
    let mut cur: Vec<u64> = Vec::new();
    for _ in 0..n {
        let k = cur.len();
        assert!(k <= 16);
        cur = (0u64..1 << k).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| acc | 1 << cur[i])).collect();
        cur.sort();
    }
    cur
}

pub fn members(code: u64) -> Vec<u64> {
    (0..64).filter(|i| code >> i & 1 == 1).collect()
}
