//! Finite sequent-calculus derivations for IKP, IKP(P) and IKP(E).

pub mod axioms;
pub mod check;
pub mod proof_file;

use crate::syntax::{Sequent, Theory};

pub use axioms::{axiom_instantiate, AxArg};
pub use check::{check, quantifier_instance, CheckReport, Failure};
pub use proof_file::{parse_proof, print_proof, ProofParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("schema {0} is not an axiom of {1}")]
    TheoryMismatch(String, String),
    #[error("class violation: {0}")]
    ClassViolation(String),
    #[error("bad arguments for {0}: {1}")]
    BadArguments(String, String),
}

macro_rules! rule_tags {
    ($($v:ident => $s:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum RuleTag { $($v),* }

        impl RuleTag {
            pub const ALL: &'static [RuleTag] = &[$(RuleTag::$v),*];

            pub fn name(self) -> &'static str {
                match self { $(RuleTag::$v => $s),* }
            }

            pub fn from_name(s: &str) -> Option<RuleTag> {
                match s { $($s => Some(RuleTag::$v),)* _ => None }
            }
        }
    };
}

rule_tags! {
    Log => "log", Ext => "ext", Pair => "pair", Union => "union", Sep => "sep",
    SetInd => "setind", Inf => "inf", Coll => "coll", Pow => "pow", ExpAx => "exp",
    AndL => "andL", AndR => "andR", OrL => "orL", OrR => "orR",
    NotL => "notL", NotR => "notR", Bot => "bot", ImpL => "impL", ImpR => "impR",
    BExL => "bexL", BExR => "bexR", BAllL => "ballL", BAllR => "ballR",
    ExL => "exL", ExR => "exR", AllL => "allL", AllR => "allR", Cut => "cut",
    PBExL => "pbexL", PBExR => "pbexR", PBAllL => "pballL", PBAllR => "pballR",
    EBExL => "ebexL", EBExR => "ebexR", EBAllL => "eballL", EBAllR => "eballR",
}

impl RuleTag {
    pub fn is_axiom(self) -> bool {
        use RuleTag::*;
        matches!(self, Log | Ext | Pair | Union | Sep | SetInd | Inf | Coll | Pow | ExpAx)
    }

    /// Rules whose instance variable must be fresh.
    pub fn has_eigenvariable(self) -> bool {
        use RuleTag::*;
        matches!(self, BExL | ExL | BAllR | AllR | PBExL | PBAllR | EBExL | EBAllR)
    }

    pub fn arity(self) -> usize {
        use RuleTag::*;
        match self {
            t if t.is_axiom() => 0,
            AndR | OrL | ImpL | Cut => 2,
            _ => 1,
        }
    }

    pub fn available_in(self, theory: Theory) -> bool {
        use RuleTag::*;
        match self {
            Pow | PBExL | PBExR | PBAllL | PBAllR => theory == Theory::IkpP,
            ExpAx | EBExL | EBExR | EBAllL | EBAllR => theory == Theory::IkpE,
            _ => true,
        }
    }
}

/// A finite proof tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: RuleTag,
    pub eigen: Option<String>,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: RuleTag, conclusion: Sequent) -> Self {
        Derivation { rule, eigen: None, conclusion, premises: Vec::new() }
    }

    pub fn node(rule: RuleTag, conclusion: Sequent, premises: Vec<Derivation>) -> Self {
        Derivation { rule, eigen: None, conclusion, premises }
    }

    pub fn with_eigen(mut self, name: &str) -> Self {
        self.eigen = Some(name.to_string());
        self
    }

    /// Visit every node with its path (`r`, `r.0`, `r.0.1`, ...), parents first.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&str, &'a Derivation)) {
        fn go<'a>(d: &'a Derivation, path: &str, f: &mut dyn FnMut(&str, &'a Derivation)) {
            f(path, d);
            for (i, p) in d.premises.iter().enumerate() {
                go(p, &format!("{}.{}", path, i), f);
            }
        }
        go(self, "r", f);
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Put every (→L) in the order (Γ,B ⇒ Δ), (Γ ⇒ A).
    pub fn canonicalize(&self) -> Derivation {
        let mut premises: Vec<Derivation> = self.premises.iter().map(Derivation::canonicalize).collect();
        if self.rule == RuleTag::ImpL && premises.len() == 2 && premises[0].conclusion.delta != self.conclusion.delta {
            premises.swap(0, 1);
        }
        Derivation { premises, ..self.clone() }
    }
}
