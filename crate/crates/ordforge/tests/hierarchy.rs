mod common;

use std::collections::BTreeSet;

use common::*;
use ordforge::hierarchy::{Assignment, HFSet, HierError, Hierarchy};
use ordforge::syntax::rank::mbound;
use ordforge::syntax::{parse_formula, print_term, Formula, Term, Theory};

fn set(s: &str) -> HFSet {
    HFSet::parse(s).unwrap()
}

fn powerset(xs: &[HFSet]) -> BTreeSet<HFSet> {
    (0u32..1 << xs.len())
        .map(|m| HFSet::from_elems((0..xs.len()).filter(|i| m >> i & 1 == 1).map(|i| xs[i].clone()).collect()))
        .collect()
}

/// {{x0,x1},{x0}}, spelled out.
fn kuratowski(x0: &HFSet, x1: &HFSet) -> HFSet {
    HFSet::from_elems(vec![HFSet::from_elems(vec![x0.clone(), x1.clone()]), HFSet::from_elems(vec![x0.clone()])])
}

/// All total functions a → b as sets of pairs.
fn function_space(a: &[HFSet], b: &[HFSet]) -> Vec<HFSet> {
    let mut out = vec![Vec::new()];
    for x in a {
        out = out.into_iter().flat_map(|f: Vec<HFSet>| b.iter().map(move |y| [f.clone(), vec![kuratowski(x, y)]].concat())).collect();
    }
    out.into_iter().map(HFSet::from_elems).collect()
}

fn vstages(n: usize) -> Vec<BTreeSet<HFSet>> {
    let mut v = vec![BTreeSet::new()];
    for i in 0..n {
        let prev: Vec<HFSet> = v[i].iter().cloned().collect();
        v.push(powerset(&prev));
    }
    v
}

fn estages(n: usize) -> Vec<BTreeSet<HFSet>> {
    let mut e: Vec<BTreeSet<HFSet>> = vec![BTreeSet::new(), [HFSet::empty()].into()];
    for i in 2..=n {
        let prev: Vec<HFSet> = e[i - 1].iter().cloned().collect();
        let mut next = powerset(&prev);
        let base: Vec<HFSet> = e[i - 2].iter().cloned().collect();
        for a in &base {
            for b in &base {
                next.extend(function_space(a.elems(), b.elems()));
            }
        }
        e.push(next);
    }
    e
}

/// Parameter-definable subsets of `xs`, found by evaluating x = p_1 ∨ … ∨ x = p_k.
fn definable(h: &Hierarchy, xs: &[HFSet]) -> BTreeSet<HFSet> {
    let mut out = BTreeSet::new();
    for m in 0u32..1 << xs.len() {
        let picked: Vec<usize> = (0..xs.len()).filter(|i| m >> i & 1 == 1).collect();
        let text = if picked.is_empty() {
            "~ x = x".to_string()
        } else {
            picked.iter().map(|i| format!("x = p{}", i)).collect::<Vec<_>>().join(" | ")
        };
        let f = parse_formula(&text, Theory::Ikp).unwrap();
        let mut v = Assignment::new();
        for i in &picked {
            v.insert(format!("p{}", i), xs[*i].clone());
        }
        let ext = xs
            .iter()
            .filter(|x| {
                v.insert("x".into(), (*x).clone());
                h.eval_bounded(&f, &v, Theory::Ikp).unwrap()
            })
            .cloned()
            .collect();
        out.insert(HFSet::from_elems(ext));
    }
    out
}

#[test]
fn first_stages() {
    let h = Hierarchy::default();
    assert_eq!(h.stage(0).unwrap(), &set("{}"));
    assert_eq!(h.stage(1).unwrap(), &set("{{}}"));
    assert_eq!(h.stage(2).unwrap(), &set("{{},{{}}}"));
    assert!(matches!(h.stage(5), Err(HierError::StageCapExceeded { n: 5, cap: 4 })));
}

#[test]
fn three_hierarchies_coincide_at_finite_stages() {
    let h = Hierarchy::default();
    let v = vstages(4);
    let e = estages(4);
    let mut l = vec![BTreeSet::new()];
    for n in 0..4 {
        let prev: Vec<HFSet> = l[n].iter().cloned().collect();
        l.push(definable(&h, &prev));
    }
    for n in 0..=4 {
        let lib: BTreeSet<HFSet> = h.stage(n).unwrap().elems().iter().cloned().collect();
        assert_eq!(lib, v[n], "V_{}", n);
        assert_eq!(lib, e[n], "E_{}", n);
        assert_eq!(lib, l[n], "L_{}", n);
    }
}

#[test]
fn bounded_examples() {
    let h = Hierarchy::default();
    let mut v = Assignment::new();
    v.insert("a".into(), set("{{}}"));
    v.insert("b".into(), set("{{},{{}}}"));
    let f = parse_formula("(all x in a) x in b", Theory::Ikp).unwrap();
    assert!(h.eval_bounded(&f, &v, Theory::Ikp).unwrap());

    let mut w = Assignment::new();
    w.insert("a".into(), set("{{}}"));
    w.insert("b".into(), set("{{}}"));
    let g = parse_formula("(ex x sub a) x = b", Theory::IkpP).unwrap();
    assert!(h.eval_bounded(&g, &w, Theory::IkpP).unwrap());

    let mut u = Assignment::new();
    u.insert("x".into(), kuratowski(&HFSet::empty(), &HFSet::empty()).pipe_singleton());
    u.insert("a".into(), set("{{}}"));
    u.insert("b".into(), set("{{}}"));
    let fun = parse_formula("fun(x,a,b)", Theory::IkpE).unwrap();
    assert!(h.eval_bounded(&fun, &u, Theory::IkpE).unwrap());
    u.insert("x".into(), set("{}"));
    assert!(!h.eval_bounded(&fun, &u, Theory::IkpE).unwrap());
}

trait Singleton {
    fn pipe_singleton(self) -> HFSet;
}

impl Singleton for HFSet {
    fn pipe_singleton(self) -> HFSet {
        HFSet::from_elems(vec![self])
    }
}

#[test]
fn exponent_quantifier_counts_functions() {
    let h = Hierarchy::default();
    // {∅} → {∅, {∅}} has two functions, {∅} → {∅} only one.
    let s2 = h.stage(2).unwrap().clone();
    let two = parse_formula("(ex f in exp(a,b)) (ex g in exp(a,b)) ~ f = g", Theory::IkpE).unwrap();
    for (b, want) in [(s2.clone(), true), (set("{{}}"), false)] {
        let mut v = Assignment::new();
        v.insert("a".into(), set("{{}}"));
        v.insert("b".into(), b);
        assert_eq!(h.eval_bounded(&two, &v, Theory::IkpE).unwrap(), want);
    }
    assert_eq!(HFSet::functions(&s2, &s2).len(), 4);
    assert_eq!(function_space(s2.elems(), s2.elems()).into_iter().collect::<BTreeSet<_>>(), HFSet::functions(&s2, &s2).into_iter().collect());
}

#[test]
fn evaluation_ignores_element_order() {
    let h = Hierarchy::default();
    let f = parse_formula("(all x in a) (ex y in b) x = y", Theory::Ikp).unwrap();
    let e = HFSet::empty();
    let one = HFSet::from_elems(vec![e.clone()]);
    for (a, b) in [(vec![e.clone(), one.clone()], vec![one.clone(), e.clone()]), (vec![one.clone(), e.clone(), one.clone()], vec![e.clone(), one.clone()])] {
        let mut v = Assignment::new();
        v.insert("a".into(), HFSet::from_elems(a));
        v.insert("b".into(), HFSet::from_elems(b));
        assert!(h.eval_bounded(&f, &v, Theory::Ikp).unwrap());
    }
}

#[test]
fn stage_terms_lie_where_mbound_says() {
    let h = Hierarchy::default();
    for n in 0..=3u64 {
        let t = Term::E(o(&n.to_string()));
        let k = mbound(&t).as_nat().unwrap() + 1;
        let f = Formula::In(t, Term::E(o(&k.to_string())));
        assert!(h.eval_bounded(&f, &Assignment::new(), Theory::IkpE).unwrap(), "E({}) in E({})", n, k);
    }
    let var = Term::IVar(0, o("1"));
    let mut v = Assignment::new();
    for x in h.stage(2).unwrap().elems() {
        v.insert(print_term(&var), x.clone());
        let f = Formula::In(var.clone(), Term::E(o("2")));
        assert!(h.eval_bounded(&f, &v, Theory::IkpE).unwrap());
    }
}

#[test]
fn sat_examples_and_errors() {
    let h = Hierarchy::default();
    let pairing = parse_formula("ex z. (ex y in z) ((all w in y) ~ w = w & (ex u in z) (y in u & (all w in u) w = y))", Theory::Ikp).unwrap();
    assert!(!h.sat_stage(&pairing, 2, Theory::Ikp).unwrap());
    assert!(h.sat_stage(&pairing, 3, Theory::Ikp).unwrap());
    let pi = parse_formula("all z. z = z", Theory::Ikp).unwrap();
    assert!(matches!(h.sat_stage(&pi, 2, Theory::Ikp), Err(HierError::NotSigmaSentence)));
    let open = parse_formula("ex z. z in a", Theory::Ikp).unwrap();
    assert!(matches!(h.sat_stage(&open, 2, Theory::Ikp), Err(HierError::NotSigmaSentence)));
    let unbounded = parse_formula("ex z. z = z", Theory::Ikp).unwrap();
    assert!(matches!(h.eval_bounded(&unbounded, &Assignment::new(), Theory::Ikp), Err(HierError::ClassViolation(_))));
}

#[test]
fn codes_round_trip() {
    for c in 0..5000u64 {
        assert_eq!(HFSet::from_code(c).code(), Some(c));
    }
    for c in stage_codes(4) {
        assert_eq!(members(c), HFSet::from_code(c).elems().iter().map(|x| x.code().unwrap()).collect::<Vec<_>>());
    }
}
