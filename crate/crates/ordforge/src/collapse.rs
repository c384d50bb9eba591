//! Collapsing: membership in B^Ω(α), the ψ constructor, operators H_η[X].
//!
//! `H_η(X)` is the intersection of all `B^Ω(α)` with `X ⊆ B^Ω(α)` and `η < α`.
//! Since B^Ω is monotone in α, that intersection is a single stage
//! `B^Ω(α*)` with `α* = max(η+1, adm(x) for x in X)`, where `adm(x)` is the
//! least α admitting every ψ-argument nested in `x`.

use std::collections::BTreeSet;

use crate::ord::{self, OrdError, OrdTerm, Principal};

/// x ∈ B^Ω(α).
pub fn in_b(alpha: &OrdTerm, x: &OrdTerm) -> bool {
    x.summands().iter().all(|p| match p {
        Principal::Omega => true,
        Principal::Phi(a, b) => in_b(alpha, a) && in_b(alpha, b),
        Principal::Psi(xi) => xi < alpha && in_b(alpha, xi),
    })
}

/// ψ_Ω(a). Requires `a ∈ B^Ω(a)`.
pub fn psi(a: &OrdTerm) -> Result<OrdTerm, OrdError> {
    if !in_b(a, a) {
        return Err(OrdError::NonNormalPsiArgument(a.to_string()));
    }
    OrdTerm::from_summands(vec![Principal::Psi(a.clone())])
}

/// Least α with x ∈ B^Ω(α).
pub fn admission(x: &OrdTerm) -> OrdTerm {
    ord::max_all(x.psi_args().iter().map(|xi| xi.succ()).collect::<Vec<_>>().iter())
}

/// A finitely presented operator H_η[X].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ControlledOperator {
    pub eta: OrdTerm,
    pub params: BTreeSet<OrdTerm>,
}

impl ControlledOperator {
    /// H_η with no parameters.
    pub fn new(eta: OrdTerm) -> Self {
        ControlledOperator { eta, params: BTreeSet::new() }
    }

    /// H_η[X]; parameters are closed under CNF decomposition.
    pub fn with_params<'a>(eta: OrdTerm, xs: impl IntoIterator<Item = &'a OrdTerm>) -> Self {
        ControlledOperator::new(eta).extend(xs)
    }

    pub fn extend<'a>(&self, xs: impl IntoIterator<Item = &'a OrdTerm>) -> Self {
        let mut params = self.params.clone();
        for x in xs {
            decompose_into(x, &mut params);
        }
        ControlledOperator { eta: self.eta.clone(), params }
    }

    /// The stage index α* with H_η(X) = B^Ω(α*).
    pub fn stage(&self) -> OrdTerm {
        let base = self.eta.succ();
        self.params.iter().fold(base, |acc, p| ord::max(&acc, &admission(p)))
    }

    pub fn contains(&self, x: &OrdTerm) -> bool {
        in_b(&self.stage(), x)
    }
}

fn decompose_into(x: &OrdTerm, out: &mut BTreeSet<OrdTerm>) {
    if !out.insert(x.clone()) {
        return;
    }
    let parts = x.summands();
    if parts.len() > 1 {
        for p in parts {
            let single = OrdTerm::from_summands(vec![p.clone()]).expect("summand of a normal term");
            decompose_into(&single, out);
        }
    } else if let Some(Principal::Phi(a, b)) = parts.first() {
        if a.is_zero() {
            decompose_into(b, out);
        }
    }
}

pub fn h_contains(h: &ControlledOperator, x: &OrdTerm) -> bool {
    h.contains(x)
}

pub fn extend(h: &ControlledOperator, xs: &[OrdTerm]) -> ControlledOperator {
    h.extend(xs)
}

/// η + ω^{Ω+α}.
pub fn hat(eta: &OrdTerm, alpha: &OrdTerm) -> OrdTerm {
    ord::add(eta, &ord::omega_pow(&ord::add(&OrdTerm::big_omega(), alpha)))
}
