mod common;

use common::*;
use ordforge::analysis::{collapse, partial_ce, predicative_ce, reduce_bound, reduce_bound_e, AnalysisError};
use ordforge::collapse::{in_b, psi, ControlledOperator};
use ordforge::ord::{add, omega_pow, veblen, OrdTerm, Principal};
use rand::seq::SliceRandom;

#[test]
fn addition_absorbs_smaller_leading_terms() {
    assert_eq!(add(&o("1"), &o("w")), o("w"));
    assert_eq!(add(&o("w"), &o("1")), o("w+1"));
    assert_eq!(add(&o("w+5"), &o("w^(2)")), o("w^(2)"));
    assert_eq!(add(&o("W"), &o("W")).to_string(), "W+W");
}

#[test]
fn natural_sum_merges_summands() {
    let u = universe(4);
    let mut r = rng(11);
    for _ in 0..500 {
        let (a, b) = (u.choose(&mut r).unwrap(), u.choose(&mut r).unwrap());
        let mut parts: Vec<Principal> = a.summands().iter().chain(b.summands()).cloned().collect();
        parts.sort_by(|x, y| y.cmp(x));
        let want = OrdTerm::from_summands(parts).unwrap();
        assert_eq!(a.nat_sum(b), want);
        assert_eq!(a.nat_sum(b), b.nat_sum(a));
        assert!(add(a, b) <= a.nat_sum(b));
    }
}

#[test]
fn veblen_zero_is_omega_power() {
    for a in universe(3) {
        assert_eq!(veblen(&OrdTerm::zero(), &a), omega_pow(&a));
    }
}

#[test]
fn towers_match_repeated_powers() {
    let u = universe(3);
    for a in u.iter().take(60) {
        let mut x = a.clone();
        for n in 0..4 {
            assert_eq!(partial_ce(a, n), x, "ω_{}({})", n, a);
            x = omega_pow(&x);
        }
    }
}

#[test]
fn reduce_bounds_are_natural_sums() {
    let (a, b, g) = (o("w+1"), o("W"), o("3"));
    assert_eq!(reduce_bound(&a, &b), o("W+W+w+w+2"));
    assert_eq!(reduce_bound_e(&a, &b, &g), o("W+W+w+w+5"));
}

#[test]
fn predicative_elimination_domain() {
    assert_eq!(predicative_ce(&o("5"), &o("0"), &o("2")).unwrap(), veblen(&o("2"), &o("5")));
    assert_eq!(predicative_ce(&o("5"), &o("W+1"), &o("2")).unwrap(), veblen(&o("2"), &o("5")));
    let err = predicative_ce(&o("5"), &o("W"), &o("1")).unwrap_err();
    assert!(matches!(err, AnalysisError::DomainViolation { .. }));
    let err = predicative_ce(&o("5"), &o("3"), &o("W+1")).unwrap_err();
    assert!(matches!(err, AnalysisError::DomainViolation { .. }));
}

#[test]
fn psi_guard_and_collapse() {
    assert_eq!(psi(&o("0")).unwrap().to_string(), "psi(0)");
    assert!(in_b(&o("1"), &o("psi(0)")));
    assert!(!in_b(&o("0"), &o("psi(0)")));
    assert!(psi(&o("psi(0)")).is_ok());
    // The argument W+1 of the inner ψ is not below the outer argument.
    assert!(psi(&o("psi(W+1)")).is_err());
    let (h, p) = collapse(&o("0"), &o("1")).unwrap();
    assert_eq!(h, o("w^(W+1)"));
    assert_eq!(p, psi(&h).unwrap());
    assert!(p < OrdTerm::big_omega());
}

#[test]
fn operator_stage_is_least_admitting_index() {
    let h = ControlledOperator::new(o("0"));
    assert!(h.contains(&o("W+w")));
    assert!(!h.contains(&o("psi(1)")));
    let h2 = h.extend([&o("psi(1)")]);
    assert!(h2.contains(&o("psi(1)")));
    assert!(h2.contains(&o("psi(0)")));
}
