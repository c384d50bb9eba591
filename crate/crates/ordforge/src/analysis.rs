//! Ordinal bookkeeping for the three analyses.
//!
//! `embed_bounds` annotates a checked finite proof with the ordinal, cut rank
//! and operator of the infinitary derivation its embedding produces. Each
//! annotation is justified by a short list of [`RuleInstance`]s (auxiliary
//! cuts included) that [`validate_inference`] accepts.
//!
//! Free variables of the finite proof become indexed variables `a_i^β`
//! (default β = 0). In IRS^E such a variable sits in E_{β+1}; that location
//! is the weight it carries in ‖·‖.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{check, quantifier_instance, Derivation, Failure, RuleTag};
use crate::collapse::{self, ControlledOperator};
use crate::ord::{self, max, max_all, omega_omega_pow, omega_pow, omega_tower, veblen, OrdError, OrdTerm};
use crate::syntax::classify::classify;
use crate::syntax::rank::{k_of_sequent, level_or_zero, mbound, norm_no_sequent, norm_no_sequent_e, rank, rank_irse_map};
use crate::syntax::{Bound, Formula, Sequent, System, Term, Theory};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("derivation does not check ({} failure(s))", .0.len())]
    Unchecked(Vec<Failure>),
    #[error("end sequent is not of the form => A with A a Σ sentence: {0}")]
    NotSigmaSentence(String),
    #[error("Ω lies in [{rho}, {rho}+ω^{beta})")]
    DomainViolation { rho: String, beta: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no quantifier instance found at {0}")]
    NoInstance(String),
    #[error("no m below {0} bounds the root")]
    NoBound(u64),
    #[error(transparent)]
    Ord(#[from] OrdError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAnnotation {
    pub ordinal: OrdTerm,
    pub cutrank: OrdTerm,
    pub operator: ControlledOperator,
}

/// Rule rows of the infinitary systems, reduced to the data their side
/// conditions mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfRule {
    /// A derivation supplied whole (axioms, auxiliary ⊩-derivations).
    Supplied { floor: OrdTerm, rho: OrdTerm },
    Propositional,
    Cut { rank: OrdTerm },
    /// b∀L / b∃R (and their ⊆ variants): one premise, witness level below the bound.
    Witness { level: OrdTerm, bound: OrdTerm, subset: bool },
    /// b∀R∞ / b∃L∞ (and ⊆ variants): a uniform family over the bound.
    Family { bound: OrdTerm, subset: bool },
    /// ∀L / ∃R.
    Unbounded { level: OrdTerm },
    /// ∀R∞ / ∃L∞.
    UnboundedFamily,
    SigmaRef { sigma: bool },
    /// IRS^E b∀L / b∃R.
    ELocated { beta: OrdTerm, gamma: OrdTerm },
    /// IRS^E b∀R∞ / b∃L∞.
    EFamily { beta: OrdTerm },
    /// IRS^E Eb∀L / Eb∃R.
    EExpWitness { beta: OrdTerm, gamma: OrdTerm, delta: OrdTerm },
    /// IRS^E Eb∀R∞ / Eb∃L∞.
    EExpFamily { beta: OrdTerm, gamma: OrdTerm },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: InfRule,
    pub conclusion: NodeAnnotation,
    pub premises: Vec<NodeAnnotation>,
    /// k(Γ⇒Δ) of the conclusion.
    pub stages: BTreeSet<OrdTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub ok: bool,
    pub reasons: Vec<String>,
}

fn big() -> OrdTerm {
    OrdTerm::big_omega()
}

fn n(k: u64) -> OrdTerm {
    OrdTerm::nat(k)
}

/// Checks one inference against its row in `system`'s table.
pub fn validate_inference(system: System, inst: &RuleInstance) -> Verdict {
    let mut reasons = Vec::new();
    let mut need = |ok: bool, why: String| {
        if !ok {
            reasons.push(why);
        }
    };
    let c = &inst.conclusion;
    let (a, rho, h) = (&c.ordinal, &c.cutrank, &c.operator);
    need(h.contains(a), format!("{} is not in the operator", a));
    if system != System::IrsE {
        for s in &inst.stages {
            need(h.contains(s), format!("stage {} is not in the operator", s));
        }
    }
    for (i, p) in inst.premises.iter().enumerate() {
        need(p.cutrank <= *rho, format!("premise {} cut rank {} exceeds {}", i, p.cutrank, rho));
    }
    let strict = |k: u64, need: &mut dyn FnMut(bool, String)| {
        for (i, p) in inst.premises.iter().enumerate() {
            need(p.ordinal.add_nat(k) < *a, format!("premise {}: {}+{} < {} fails", i, p.ordinal, k, a));
        }
    };
    let unb_gap = if system == System::IrsE { 3 } else { 1 };
    match &inst.rule {
        InfRule::Supplied { floor, rho: r } => {
            need(inst.premises.is_empty(), "supplied rows take no premises".into());
            need(floor <= a, format!("{} is below the supplied bound {}", a, floor));
            need(r <= rho, format!("cut rank {} is below the supplied {}", rho, r));
        }
        InfRule::Propositional => strict(0, &mut need),
        InfRule::Cut { rank: r } => {
            need(inst.premises.len() == 2, "cut takes two premises".into());
            strict(0, &mut need);
            need(r < rho, format!("cut formula rank {} is not below {}", r, rho));
        }
        InfRule::Witness { level, bound, subset } => {
            strict(0, &mut need);
            need(level < a, format!("witness level {} is not below {}", level, a));
            let fits = if *subset { level <= bound } else { level < bound };
            need(fits, format!("witness level {} does not fit bound {}", level, bound));
        }
        InfRule::Family { bound, subset } => {
            strict(0, &mut need);
            let fits = if *subset { bound < a } else { bound <= a };
            need(fits, format!("bound {} does not fit {}", bound, a));
        }
        InfRule::Unbounded { level } => {
            strict(unb_gap, &mut need);
            need(level < a, format!("witness level {} is not below {}", level, a));
        }
        InfRule::UnboundedFamily => {
            strict(unb_gap, &mut need);
            need(big() <= *a, format!("Ω ≤ {} fails", a));
        }
        InfRule::SigmaRef { sigma } => {
            strict(1, &mut need);
            need(big() < *a, format!("Ω < {} fails", a));
            need(*sigma, "reflected formula is not Σ".into());
        }
        InfRule::ELocated { beta, gamma } => {
            strict(0, &mut need);
            need(gamma < a, format!("γ={} is not below {}", gamma, a));
            need(gamma <= beta, format!("γ={} exceeds β={}", gamma, beta));
            need(h.contains(beta) && h.contains(gamma), "β or γ is not in the operator".into());
        }
        InfRule::EFamily { beta } => {
            strict(0, &mut need);
            need(beta < a, format!("β={} is not below {}", beta, a));
            need(h.contains(beta), "β is not in the operator".into());
        }
        InfRule::EExpWitness { beta, gamma, delta } => {
            strict(0, &mut need);
            need(delta < a, format!("δ={} is not below {}", delta, a));
            let top = max(beta, gamma).add_nat(2);
            need(delta <= &top, format!("δ={} exceeds max(β,γ)+2={}", delta, top));
            need([beta, gamma, delta].iter().all(|x| h.contains(x)), "β, γ or δ is not in the operator".into());
        }
        InfRule::EExpFamily { beta, gamma } => {
            strict(0, &mut need);
            let top = max(beta, gamma).add_nat(2);
            need(top <= *a, format!("max(β,γ)+2={} exceeds {}", top, a));
            need(h.contains(beta) && h.contains(gamma), "β or γ is not in the operator".into());
        }
    }
    Verdict { ok: reasons.is_empty(), reasons }
}

// ---------------------------------------------------------------------------
// Embedding

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub theory: Theory,
    pub m: u64,
    /// Keyed by tree path (`r`, `r.0`, `r.0.1`, ...).
    pub annotations: BTreeMap<String, NodeAnnotation>,
    pub steps: BTreeMap<String, Vec<RuleInstance>>,
    /// no(Γ⇒Δ) of the embedded end sequent.
    pub root_norm: OrdTerm,
}

impl Embedding {
    pub fn root(&self) -> &NodeAnnotation {
        &self.annotations["r"]
    }

    /// Every recorded step that `validate_inference` rejects.
    pub fn invalid_steps(&self) -> Vec<(String, Verdict)> {
        let system = System::of(self.theory);
        let mut out = Vec::new();
        for (path, steps) in &self.steps {
            for s in steps {
                let v = validate_inference(system, s);
                if !v.ok {
                    out.push((path.clone(), v));
                }
            }
        }
        out
    }
}

struct Ctx {
    system: System,
    vars: BTreeMap<String, Term>,
    env: BTreeMap<Term, OrdTerm>,
}

impl Ctx {
    fn new(d: &Derivation, theory: Theory, betas: &BTreeMap<String, OrdTerm>) -> Ctx {
        let mut names = BTreeSet::new();
        d.walk(&mut |_, node| {
            names.extend(node.conclusion.free_vars());
            names.extend(node.eigen.iter().cloned());
        });
        names.insert("#any".to_string());
        let vars: BTreeMap<String, Term> = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| {
                let beta = betas.get(&name).cloned().unwrap_or_default();
                (name, Term::IVar(i as u32, beta))
            })
            .collect();
        let env = vars.values().map(|t| (t.clone(), mbound(t).succ())).collect();
        Ctx { system: System::of(theory), vars, env }
    }

    fn formula(&self, f: &Formula) -> Formula {
        f.subst_all(&|name| self.vars.get(name).cloned().unwrap_or_else(|| Term::free(name)))
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Free(name) => self.vars.get(name).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        }
    }

    fn sequent(&self, s: &Sequent) -> Sequent {
        Sequent::new(s.gamma.iter().map(|f| self.formula(f)).collect(), s.delta.as_ref().map(|f| self.formula(f)))
    }

    fn rk(&self, f: &Formula) -> OrdTerm {
        match self.system {
            System::IrsE => rank_irse_map(f, &self.env),
            s => rank(f, s),
        }
    }

    fn no(&self, s: &Sequent) -> OrdTerm {
        match self.system {
            System::IrsE => norm_no_sequent_e(s, &self.env),
            s2 => norm_no_sequent(s, s2),
        }
    }

    /// |t| in IRS_Ω and IRS^P; the location β with t ∈ E_β in IRS^E.
    fn lev(&self, t: &Term) -> OrdTerm {
        match self.system {
            System::IrsE => mbound(t).succ(),
            _ => level_or_zero(t),
        }
    }

    fn operator(&self, s: &Sequent) -> ControlledOperator {
        let ks = k_of_sequent(s);
        let op = ControlledOperator::with_params(OrdTerm::zero(), &ks);
        if self.system == System::IrsE {
            let mut locs = Vec::new();
            for f in s.formulas() {
                f.visit_terms(&mut |t| {
                    if let Some(b) = self.env.get(t) {
                        locs.push(b.clone());
                    }
                });
            }
            op.extend(&locs)
        } else {
            op
        }
    }
}

/// Builds the steps of one node.
struct Steps<'a> {
    ctx: &'a Ctx,
    op: ControlledOperator,
    stages: BTreeSet<OrdTerm>,
    out: Vec<RuleInstance>,
}

impl Steps<'_> {
    fn push(&mut self, rule: InfRule, premises: Vec<NodeAnnotation>, ordinal: OrdTerm, cutrank: OrdTerm) -> NodeAnnotation {
        let conclusion = NodeAnnotation { ordinal, cutrank, operator: self.op.clone() };
        self.out.push(RuleInstance { rule, conclusion: conclusion.clone(), premises, stages: self.stages.clone() });
        conclusion
    }

    fn supplied(&mut self, floor: OrdTerm, rho: OrdTerm) -> NodeAnnotation {
        self.push(InfRule::Supplied { floor: floor.clone(), rho: rho.clone() }, vec![], floor, rho)
    }

    fn cut(&mut self, a: NodeAnnotation, b: NodeAnnotation, formula_rank: OrdTerm) -> NodeAnnotation {
        let alpha = max(&a.ordinal, &b.ordinal).succ();
        let rho = max_all([&a.cutrank, &b.cutrank, &formula_rank.succ()]);
        self.push(InfRule::Cut { rank: formula_rank }, vec![a, b], alpha, rho)
    }

    /// Cut of `child` against a ⊩-derivation of `aux` (plus `extra`).
    fn aux_cut(&mut self, child: NodeAnnotation, aux: &Sequent, extra: &OrdTerm, cut_formula: &Formula) -> NodeAnnotation {
        let floor = self.ctx.no(aux).nat_sum(extra);
        let given = self.supplied(floor, OrdTerm::zero());
        let r = self.ctx.rk(cut_formula);
        self.cut(child, given, r)
    }

    fn one(&mut self, rule: InfRule, child: NodeAnnotation, ordinal: OrdTerm) -> NodeAnnotation {
        let rho = child.cutrank.clone();
        self.push(rule, vec![child], ordinal, rho)
    }
}

/// Per-axiom (ordinal, cut rank); `s` is the embedded axiom sequent.
fn axiom_bound(ctx: &Ctx, rule: RuleTag, s: &Sequent) -> (OrdTerm, OrdTerm) {
    use RuleTag::*;
    let zero = OrdTerm::zero();
    let norm = ctx.no(s);
    let a = s.delta.as_ref().map(Formula::desugar);
    let body = |f: &Formula| match f {
        Formula::Q { body, .. } => Some((**body).clone()),
        _ => None,
    };
    let inner_bound = || -> Option<Bound> {
        match body(a.as_ref()?)? {
            Formula::Q { bound, .. } => Some(bound),
            _ => None,
        }
    };
    let lv = |t: &Term| ctx.lev(t);
    let closed_levels = || {
        let mut ls = vec![OrdTerm::zero()];
        if let Some(f) = &a {
            f.visit_terms(&mut |t| {
                if t.is_closed() {
                    ls.push(lv(t));
                }
            });
        }
        max_all(&ls)
    };
    let pair_args = || -> (OrdTerm, OrdTerm) {
        match a.as_ref().and_then(body) {
            Some(Formula::And(x, y)) => match (*x, *y) {
                (Formula::In(s, _), Formula::In(t, _)) => (lv(&s), lv(&t)),
                _ => (zero.clone(), zero.clone()),
            },
            _ => (zero.clone(), zero.clone()),
        }
    };
    let one_arg = || match inner_bound() {
        Some(Bound::In(t) | Bound::Sub(t)) => lv(&t),
        _ => zero.clone(),
    };
    match (ctx.system, rule) {
        (System::Irs, SetInd) => {
            let ante = match &a {
                Some(Formula::Imp(x, _)) => ctx.rk(x),
                _ => zero.clone(),
            };
            (norm.nat_sum(&omega_pow(&ante)), zero)
        }
        (System::Irs, _) => (norm, zero),
        (System::IrsP, Inf) => (OrdTerm::omega().add_nat(2), zero),
        (System::IrsP, Pair) => {
            let (s, t) = pair_args();
            (max(&s, &t).add_nat(3), zero)
        }
        (System::IrsP, Union) => (one_arg().add_nat(5), zero),
        (System::IrsP, Pow) => (one_arg().add_nat(3), zero),
        (System::IrsP, Sep) => {
            let r = match &a {
                Some(Formula::Q { body, .. }) => match &**body {
                    Formula::And(_, y) => match &**y {
                        Formula::Q { bound: Bound::In(r), .. } => lv(r),
                        _ => zero.clone(),
                    },
                    _ => zero.clone(),
                },
                _ => zero.clone(),
            };
            (r.add_nat(7), closed_levels().add(&OrdTerm::omega()))
        }
        (System::IrsP, _) => (norm, zero),
        (System::IrsE, Inf) => (OrdTerm::omega().add_nat(4), OrdTerm::omega()),
        (System::IrsE, Sep) => (closed_levels().add_nat(7), zero),
        (System::IrsE, Pair) => {
            let (s, t) = pair_args();
            let al = max(&s, &t);
            (al.add_nat(6), al.add_nat(2))
        }
        (System::IrsE, Union) => {
            let b = one_arg();
            (b.add_nat(9), b.add_nat(2))
        }
        (System::IrsE, ExpAx) => {
            let d = match inner_bound() {
                Some(Bound::Exp(x, y)) => max(&lv(&x), &lv(&y)).add_nat(2),
                _ => n(2),
            };
            (d.add_nat(4), d.add_nat(3))
        }
        (System::IrsE, _) => (norm, big()),
    }
}

fn bound_term(f: &Formula) -> Option<&Bound> {
    match f {
        Formula::Q { bound, .. } => Some(bound),
        _ => None,
    }
}

fn embed_node(ctx: &Ctx, d: &Derivation, path: &str, children: Vec<NodeAnnotation>) -> Result<Vec<RuleInstance>, AnalysisError> {
    use RuleTag::*;
    let seq = ctx.sequent(&d.conclusion);
    let mut st = Steps { ctx, op: ctx.operator(&seq), stages: k_of_sequent(&seq), out: Vec::new() };
    let rule = d.rule;
    if rule.is_axiom() {
        let (a, r) = axiom_bound(ctx, rule, &seq);
        st.supplied(a, r);
        return Ok(st.out);
    }
    let mut kids = children.into_iter();
    let mut next = || kids.next().expect("arity checked");
    match rule {
        AndL | AndR | OrL | OrR | NotL | NotR | Bot | ImpL | ImpR => {
            let ps: Vec<NodeAnnotation> = (0..rule.arity()).map(|_| next()).collect();
            let alpha = max_all(ps.iter().map(|p| &p.ordinal)).succ();
            let rho = max_all(ps.iter().map(|p| &p.cutrank));
            st.push(InfRule::Propositional, ps, alpha, rho);
        }
        Cut => {
            let (a, b) = (next(), next());
            let f = ctx.formula(d.premises[0].conclusion.delta.as_ref().expect("checked cut"));
            let r = ctx.rk(&f);
            st.cut(a, b, r);
        }
        _ => {
            let child = next();
            let (principal, witness, minor) =
                quantifier_instance(d).ok_or_else(|| AnalysisError::NoInstance(path.to_string()))?;
            let (p, s, mnr) = (ctx.formula(&principal), ctx.term(&witness), ctx.formula(&minor));
            let bound = bound_term(&p).cloned().unwrap_or(Bound::Unbounded);
            let gamma_star: Vec<Formula> = seq.gamma.iter().map(Formula::desugar).collect();
            quantifier_steps(ctx, &mut st, rule, child, &p, &s, &mnr, &bound, &gamma_star, d.eigen.is_some());
        }
    }
    Ok(st.out)
}

#[allow(clippy::too_many_arguments)]
fn quantifier_steps(
    ctx: &Ctx,
    st: &mut Steps,
    rule: RuleTag,
    child: NodeAnnotation,
    p: &Formula,
    s: &Term,
    minor: &Formula,
    bound: &Bound,
    gamma: &[Formula],
    eigen: bool,
) {
    use RuleTag::*;
    let left = matches!(rule, BAllL | BExL | AllL | ExL | PBAllL | PBExL | EBAllL | EBExL);
    let zero = OrdTerm::zero();
    // Γ*, minor ⇒ P* for right rules, Γ* ⇒ minor for left rules.
    let aux = || {
        if left {
            Sequent::new(gamma.to_vec(), Some(minor.clone()))
        } else {
            let mut g = gamma.to_vec();
            g.push(minor.clone());
            Sequent::new(g, Some(p.clone()))
        }
    };
    match (ctx.system, bound) {
        (System::IrsE, Bound::Unbounded) => {
            let a0 = child.ordinal.clone();
            if eigen {
                st.one(InfRule::UnboundedFamily, child, max(&a0.add_nat(4), &big()));
            } else {
                let b = ctx.lev(s);
                st.one(InfRule::Unbounded { level: b.clone() }, child, max(&a0.add_nat(4), &b.succ()));
            }
        }
        (_, Bound::Unbounded) => {
            let a0 = child.ordinal.clone();
            if eigen {
                st.one(InfRule::UnboundedFamily, child, max(&a0.add_nat(2), &big()));
            } else {
                let l = ctx.lev(s);
                st.one(InfRule::Unbounded { level: l.clone() }, child, max(&a0.add_nat(2), &l.succ()));
            }
        }
        (System::IrsE, Bound::In(t)) => {
            let a0 = child.ordinal.clone();
            if eigen {
                let beta = ctx.lev(t);
                st.one(InfRule::EFamily { beta: beta.clone() }, child, max(&a0.succ(), &beta.succ()));
            } else {
                let gamma = ctx.lev(s);
                let beta = max(&ctx.lev(t), &gamma);
                let alpha = max(&a0.succ(), &gamma.succ());
                st.one(InfRule::ELocated { beta, gamma }, child, alpha);
            }
        }
        (System::IrsE, Bound::Exp(x, y)) => {
            let a0 = child.ordinal.clone();
            let (mut beta, gamma) = (ctx.lev(x), ctx.lev(y));
            if eigen {
                let alpha = max(&a0.succ(), &max(&beta, &gamma).add_nat(2));
                st.one(InfRule::EExpFamily { beta, gamma }, child, alpha);
            } else {
                let delta = ctx.lev(s);
                if delta > max(&beta, &gamma).add_nat(2) {
                    beta = delta.clone();
                }
                let alpha = max(&a0.succ(), &delta.succ());
                st.one(InfRule::EExpWitness { beta, gamma, delta }, child, alpha);
            }
        }
        (System::Irs, Bound::In(t)) if eigen => {
            // Case 1 of the IKP embedding: cut against p∈t ⇒ p∈t, then the
            // implication (resp. the conjunction), then the family.
            let c = Formula::In(s.clone(), t.clone());
            let aux_seq = if rule == BAllR { Sequent::new(vec![c.clone()], Some(c.clone())) } else { Sequent::new(vec![minor.clone()], Some(minor.clone())) };
            let cut_f = if rule == BAllR { c } else { minor.clone() };
            let mut a = st.aux_cut(child, &aux_seq, &zero, &cut_f);
            if rule == BAllR {
                let alpha = a.ordinal.succ();
                a = st.one(InfRule::Propositional, a, alpha);
            }
            let alpha = max(&a.ordinal.succ(), &ctx.lev(t));
            st.one(InfRule::Family { bound: ctx.lev(t), subset: false }, a, alpha);
        }
        (System::IrsP, Bound::In(t) | Bound::Sub(t)) if eigen => {
            let subset = matches!(bound, Bound::Sub(_));
            let b = ctx.lev(t);
            let floor = if subset { b.succ() } else { b.clone() };
            let alpha = max(&child.ordinal.succ(), &floor);
            st.one(InfRule::Family { bound: b, subset }, child, alpha);
        }
        (_, Bound::Sub(_)) => {
            st.aux_cut(child, &aux(), &OrdTerm::omega(), minor);
        }
        _ => {
            st.aux_cut(child, &aux(), &zero, minor);
        }
    }
}

/// Least m ≥ 1 with α ≤ Ω·ω^m, ρ ≤ Ω+m and no ≤ Ω·ω^m.
fn least_m(root: &NodeAnnotation, norm: &OrdTerm) -> Result<u64, AnalysisError> {
    const CAP: u64 = 4096;
    (1..CAP)
        .find(|&m| {
            let top = omega_omega_pow(m);
            root.ordinal <= top && root.cutrank <= big().add_nat(m) && *norm <= top
        })
        .ok_or(AnalysisError::NoBound(CAP))
}

pub fn embed_bounds(d: &Derivation, theory: Theory) -> Result<Embedding, AnalysisError> {
    embed_bounds_with(d, theory, &BTreeMap::new())
}

/// As [`embed_bounds`], with the level β of each named free variable given.
pub fn embed_bounds_with(d: &Derivation, theory: Theory, betas: &BTreeMap<String, OrdTerm>) -> Result<Embedding, AnalysisError> {
    let report = check(d, theory);
    if !report.ok {
        return Err(AnalysisError::Unchecked(report.failures));
    }
    let ctx = Ctx::new(d, theory, betas);
    let mut annotations = BTreeMap::new();
    let mut steps = BTreeMap::new();
    go(&ctx, d, "r", &mut annotations, &mut steps)?;
    let root = annotations["r"].clone();
    let root_norm = ctx.no(&ctx.sequent(&d.conclusion));
    let m = least_m(&root, &root_norm)?;
    Ok(Embedding { theory, m, annotations, steps, root_norm })
}

fn go(
    ctx: &Ctx,
    d: &Derivation,
    path: &str,
    annotations: &mut BTreeMap<String, NodeAnnotation>,
    steps: &mut BTreeMap<String, Vec<RuleInstance>>,
) -> Result<NodeAnnotation, AnalysisError> {
    let mut children = Vec::new();
    for (i, p) in d.premises.iter().enumerate() {
        children.push(go(ctx, p, &format!("{}.{}", path, i), annotations, steps)?);
    }
    let out = embed_node(ctx, d, path, children)?;
    let ann = out.last().expect("every node yields a step").conclusion.clone();
    annotations.insert(path.to_string(), ann.clone());
    steps.insert(path.to_string(), out);
    Ok(ann)
}

// ---------------------------------------------------------------------------
// Cut elimination and collapsing arithmetic

/// α#α#β#β.
pub fn reduce_bound(alpha: &OrdTerm, beta: &OrdTerm) -> OrdTerm {
    alpha.nat_sum(alpha).nat_sum(beta).nat_sum(beta)
}

/// α#α#β#β#γ.
pub fn reduce_bound_e(alpha: &OrdTerm, beta: &OrdTerm, gamma: &OrdTerm) -> OrdTerm {
    reduce_bound(alpha, beta).nat_sum(gamma)
}

/// φβα, provided Ω ∉ [ρ, ρ+ω^β).
pub fn predicative_ce(alpha: &OrdTerm, rho: &OrdTerm, beta: &OrdTerm) -> Result<OrdTerm, AnalysisError> {
    let top = ord::add(rho, &omega_pow(beta));
    if *rho <= big() && big() < top {
        return Err(AnalysisError::DomainViolation { rho: rho.to_string(), beta: beta.to_string() });
    }
    Ok(veblen(beta, alpha))
}

/// ω_n(α).
pub fn partial_ce(alpha: &OrdTerm, n: u32) -> OrdTerm {
    omega_tower(n, alpha)
}

/// (η + ω^{Ω+α}, ψ_Ω(η + ω^{Ω+α})), provided η ∈ H_η.
pub fn collapse(eta: &OrdTerm, alpha: &OrdTerm) -> Result<(OrdTerm, OrdTerm), AnalysisError> {
    if !collapse::h_contains(&ControlledOperator::new(eta.clone()), eta) {
        return Err(AnalysisError::PreconditionViolated(format!("{} is not in H_{}", eta, eta)));
    }
    let h = collapse::hat(eta, alpha);
    let p = collapse::psi(&h)?;
    Ok((h, p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub theory: Theory,
    pub m: u64,
    /// (Ω·ω^m, Ω+m).
    pub embed: (OrdTerm, OrdTerm),
    /// (ω_{m-1}(Ω·ω^m), Ω+1).
    pub pre_collapse: (OrdTerm, OrdTerm),
    /// γ (IKP) or σ: ω_m(Ω·ω^m).
    pub gamma_or_sigma: OrdTerm,
    pub collapsed: OrdTerm,
    pub final_bound: OrdTerm,
    pub embedding: Embedding,
}

/// End-to-end bound for a proof of ⇒A with A a Σ sentence.
pub fn analyze_sigma(d: &Derivation, theory: Theory) -> Result<BoundReport, AnalysisError> {
    let report = check(d, theory);
    if !report.ok {
        return Err(AnalysisError::Unchecked(report.failures));
    }
    let end = &d.conclusion;
    let a = match (&end.gamma[..], &end.delta) {
        ([], Some(a)) => a,
        _ => return Err(AnalysisError::NotSigmaSentence("antecedent must be empty".into())),
    };
    if !a.is_sentence() {
        return Err(AnalysisError::NotSigmaSentence("formula has free variables".into()));
    }
    if !classify(a, theory).sigma {
        return Err(AnalysisError::NotSigmaSentence("formula is not Σ".into()));
    }
    let embedding = embed_bounds(d, theory)?;
    let m = embedding.m;
    let top = omega_omega_pow(m);
    let embed = (top.clone(), big().add_nat(m));
    let pre = partial_ce(&top, (m - 1) as u32);
    let (hat, collapsed) = collapse(&OrdTerm::zero(), &pre)?;
    let gamma = partial_ce(&top, m as u32);
    debug_assert_eq!(hat, gamma);
    let final_bound = match theory {
        Theory::Ikp => predicative_ce(&collapsed, &OrdTerm::zero(), &collapsed)?,
        _ => collapsed.clone(),
    };
    Ok(BoundReport {
        theory,
        m,
        embed,
        pre_collapse: (pre, big().succ()),
        gamma_or_sigma: gamma,
        collapsed,
        final_bound,
        embedding,
    })
}
