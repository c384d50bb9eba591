//! Formula classes (Δ0, Σ, Π, strict-Σ) and relativization.

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Class {
    pub delta0: bool,
    pub sigma: bool,
    pub pi: bool,
    pub strict_sigma: bool,
}

/// Is every quantifier form in `f` part of the theory's language?
pub fn in_language(f: &Formula, theory: Theory) -> bool {
    use Formula::*;
    match f {
        In(..) | Eq(..) | Sub(..) | Fun(..) => true,
        Not(a) => in_language(a, theory),
        And(a, b) | Or(a, b) | Imp(a, b) => in_language(a, theory) && in_language(b, theory),
        Q { bound, body, .. } => {
            let ok = match bound {
                Bound::Unbounded | Bound::In(_) => true,
                Bound::Sub(_) => theory == Theory::IkpP,
                Bound::Exp(..) => theory == Theory::IkpE,
            };
            ok && in_language(body, theory)
        }
    }
}

/// No unbounded quantifier anywhere (comprehension bodies are not inspected;
/// they live inside terms).
pub fn is_delta0(f: &Formula) -> bool {
    use Formula::*;
    match f {
        In(..) | Eq(..) | Sub(..) | Fun(..) => true,
        Not(a) => is_delta0(a),
        And(a, b) | Or(a, b) | Imp(a, b) => is_delta0(a) && is_delta0(b),
        Q { bound, body, .. } => *bound != Bound::Unbounded && is_delta0(body),
    }
}

/// (Σ, Π) membership by the inductive clauses.
fn sigma_pi(f: &Formula) -> (bool, bool) {
    use Formula::*;
    if is_delta0(f) {
        return (true, true);
    }
    match f {
        In(..) | Eq(..) | Sub(..) | Fun(..) => (true, true),
        And(a, b) | Or(a, b) => {
            let (sa, pa) = sigma_pi(a);
            let (sb, pb) = sigma_pi(b);
            (sa && sb, pa && pb)
        }
        Imp(a, b) => {
            let (sa, pa) = sigma_pi(a);
            let (sb, pb) = sigma_pi(b);
            (pa && sb, sa && pb)
        }
        Not(a) => {
            let (sa, pa) = sigma_pi(a);
            (pa, sa)
        }
        Q { q, bound: Bound::Unbounded, body, .. } => {
            let (s, p) = sigma_pi(body);
            match q {
                Quant::Ex => (s, false),
                Quant::All => (false, p),
            }
        }
        Q { body, .. } => sigma_pi(body),
    }
}

fn strict_sigma(f: &Formula) -> bool {
    use Formula::*;
    if is_delta0(f) {
        return true;
    }
    match f {
        And(a, b) | Or(a, b) => strict_sigma(a) && strict_sigma(b),
        Q { q: Quant::Ex, bound: Bound::Unbounded, body, .. } => strict_sigma(body),
        Q { bound: Bound::Unbounded, .. } => false,
        Q { body, .. } => strict_sigma(body),
        _ => false,
    }
}

pub fn classify(f: &Formula, theory: Theory) -> Class {
    if !in_language(f, theory) {
        return Class::default();
    }
    let (sigma, pi) = sigma_pi(f);
    Class { delta0: is_delta0(f), sigma, pi, strict_sigma: strict_sigma(f) }
}

/// Bound every unbounded quantifier by `z`; other quantifiers are untouched.
pub fn relativize(f: &Formula, z: &Term) -> Formula {
    rel(f, z, 0)
}

fn rel(f: &Formula, z: &Term, depth: usize) -> Formula {
    use Formula::*;
    match f {
        In(..) | Eq(..) | Sub(..) | Fun(..) => f.clone(),
        Not(a) => Formula::not(rel(a, z, depth)),
        And(a, b) => Formula::and(rel(a, z, depth), rel(b, z, depth)),
        Or(a, b) => Formula::or(rel(a, z, depth), rel(b, z, depth)),
        Imp(a, b) => Formula::imp(rel(a, z, depth), rel(b, z, depth)),
        Q { q, bound, hint, body } => Q {
            q: *q,
            bound: match bound {
                Bound::Unbounded => Bound::In(z.shift(depth, 0)),
                b => b.clone(),
            },
            hint: hint.clone(),
            body: Box::new(rel(body, z, depth + 1)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_formula;
    use super::*;

    fn c(s: &str) -> Class {
        classify(&parse_formula(s, Theory::IkpP).unwrap(), Theory::IkpP)
    }

    #[test]
    fn examples() {
        let k = c("(all x in a)(x in b)");
        assert!(k.delta0 && k.sigma && k.pi);
        let k = c("ex x . x in a");
        assert!(k.sigma && !k.pi && k.strict_sigma && !k.delta0);
        let k = c("(all x . x in a) -> ex y . y in a");
        assert!(k.sigma && !k.pi && !k.strict_sigma);
        let k = c("(all x sub a) ex y . x in y");
        assert!(k.sigma && k.strict_sigma);
    }

    #[test]
    fn relativize_examples() {
        let f = parse_formula("ex x . x in a", Theory::Ikp).unwrap();
        let g = parse_formula("(ex x in b) x in a", Theory::Ikp).unwrap();
        assert_eq!(relativize(&f, &Term::free("b")), g);
        let f = parse_formula("all x . ex y . x in y", Theory::Ikp).unwrap();
        let g = parse_formula("(all x in b)(ex y in b) x in y", Theory::Ikp).unwrap();
        assert_eq!(relativize(&f, &Term::free("b")), g);
        let d = parse_formula("(all x in a) x in b", Theory::Ikp).unwrap();
        assert_eq!(relativize(&d, &Term::free("c")), d);
    }
}
