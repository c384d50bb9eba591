mod common;

use common::*;
use ordforge::ord::{max, omega_times, OrdTerm};
use ordforge::syntax::{k_of, rank_irs, Bound, Formula, Term, Theory};

fn rk_term(t: &Term) -> OrdTerm {
    match t {
        Term::L(a) => omega_times(a),
        Term::Comp(c) => {
            let Term::L(a) = &c.bound else { panic!("not an IRS term") };
            max(&omega_times(a).succ(), &rk(&c.body.open(&Term::L(OrdTerm::zero())).desugar()).add_nat(2))
        }
        _ => panic!("not an IRS term: {:?}", t),
    }
}

/// The rank clauses, written out once more.
fn rk(f: &Formula) -> OrdTerm {
    let zero = Term::L(OrdTerm::zero());
    match f {
        Formula::In(s, t) => max(&rk_term(s).add_nat(6), &rk_term(t).succ()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => max(&rk(a), &rk(b)).succ(),
        Formula::Not(a) => rk(a).succ(),
        Formula::Q { bound: Bound::In(t), body, .. } => max(&rk_term(t), &rk(&body.open(&zero)).add_nat(2)),
        Formula::Q { bound: Bound::Unbounded, body, .. } => max(&OrdTerm::big_omega(), &rk(&body.open(&zero)).succ()),
        _ => panic!("sugar left in {:?}", f),
    }
}

#[test]
fn irs_rank_matches_definition() {
    let g = Gen::infinitary(Theory::Ikp);
    let mut r = rng(71);
    for _ in 0..1000 {
        let f = g.formula(&mut r, 0, 4).desugar();
        assert_eq!(rank_irs(&f), rk(&f));
    }
}

#[test]
fn bounded_ranks_sit_over_their_stages() {
    // rk(A) = ω·max k(A) + m for Δ0 sentences A.
    let g = Gen { unbounded: 0.0, comprehension: false, ..Gen::infinitary(Theory::Ikp) };
    let mut r = rng(72);
    for _ in 0..500 {
        let f = g.formula(&mut r, 0, 3);
        let top = k_of(&f).into_iter().max().unwrap_or_default();
        let base = omega_times(&top);
        let rank = rank_irs(&f);
        assert!(base <= rank && rank < omega_times(&top.succ()), "{:?}: {}", f, rank);
    }
}

#[test]
fn small_examples() {
    assert_eq!(rank_irs(&Formula::In(Term::L(o("1")), Term::L(o("2")))), o("w+w+1"));
    assert_eq!(rank_irs(&Formula::In(Term::L(o("2")), Term::L(o("1")))), o("w+w+6"));
    let ex = Formula::Q { q: ordforge::syntax::Quant::Ex, bound: Bound::Unbounded, hint: Default::default(), body: Box::new(Formula::In(Term::Bound(0), Term::L(o("3")))) };
    assert_eq!(rank_irs(&ex), o("W"));
}
