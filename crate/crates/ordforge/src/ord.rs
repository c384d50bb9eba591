//! Ordinal notations below ε_{Ω+1}.
//!
//! A term is a weakly decreasing sum of principal terms. Principal terms are
//! `Omega`, `Phi(a, b)` (binary Veblen, with `φ(0, a) = ω^a`) and `Psi(a)`.
//! One is `Phi(0, 0)` and ω is `Phi(0, 1)`.
//!
//! Values can only be built through the normalizing constructors in this
//! module, so every `OrdTerm` in circulation is in normal form. Ω and every
//! `Psi(_)` are strongly critical: `φ(a, S) = S` for `a < S` and `φ(S, 0) = S`.

use std::cmp::Ordering;
use std::fmt;

use crate::collapse;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdError {
    #[error("non-normal input: {0}")]
    NonNormalInput(String),
    #[error("psi argument not in normal form: {0}")]
    NonNormalPsiArgument(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Principal {
    Omega,
    Phi(OrdTerm, OrdTerm),
    Psi(OrdTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdTerm {
    terms: Vec<Principal>,
}

impl Principal {
    fn one() -> Principal {
        Principal::Phi(OrdTerm::zero(), OrdTerm::zero())
    }

    /// Strongly critical principals: Ω and ψ-values.
    fn is_critical(&self) -> bool {
        matches!(self, Principal::Omega | Principal::Psi(_))
    }

    /// The exponent `e` with `self = ω^e`.
    pub fn exponent(&self) -> OrdTerm {
        match self {
            Principal::Phi(a, b) if a.is_zero() => b.clone(),
            p => OrdTerm::principal(p.clone()),
        }
    }

    fn cmp_principal(&self, other: &Principal) -> Ordering {
        use Principal::*;
        match (self, other) {
            (Omega, Omega) => Ordering::Equal,
            (Psi(a), Psi(b)) => a.cmp(b),
            (Psi(_), Omega) => Ordering::Less,
            (Omega, Psi(_)) => Ordering::Greater,
            (Phi(a, b), s) if s.is_critical() => {
                if a.cmp_p(s).is_lt() && b.cmp_p(s).is_lt() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (s, Phi(..)) if s.is_critical() => other.cmp_principal(self).reverse(),
            (Phi(a1, b1), Phi(a2, b2)) => match a1.cmp(a2) {
                Ordering::Equal => b1.cmp(b2),
                Ordering::Less => {
                    if b1.cmp_p(other).is_lt() {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                }
                Ordering::Greater => {
                    if b2.cmp_p(self).is_ge() {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                }
            },
            _ => unreachable!("all principal pairs covered"),
        }
    }
}

impl Ord for Principal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_principal(other)
    }
}

impl PartialOrd for Principal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.terms.iter().zip(&other.terms) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compare two normal terms.
pub fn compare(a: &OrdTerm, b: &OrdTerm) -> Ordering {
    a.cmp(b)
}

impl OrdTerm {
    pub fn zero() -> OrdTerm {
        OrdTerm { terms: Vec::new() }
    }

    pub fn one() -> OrdTerm {
        OrdTerm::principal(Principal::one())
    }

    pub fn omega() -> OrdTerm {
        OrdTerm::principal(Principal::Phi(OrdTerm::zero(), OrdTerm::one()))
    }

    /// Ω.
    pub fn big_omega() -> OrdTerm {
        OrdTerm::principal(Principal::Omega)
    }

    pub fn nat(n: u64) -> OrdTerm {
        OrdTerm { terms: (0..n).map(|_| Principal::one()).collect() }
    }

    /// Compare against a single principal term without allocating.
    fn cmp_p(&self, p: &Principal) -> Ordering {
        match self.terms.first() {
            None => Ordering::Less,
            Some(h) => match h.cmp(p) {
                Ordering::Equal if self.terms.len() > 1 => Ordering::Greater,
                o => o,
            },
        }
    }

    fn principal(p: Principal) -> OrdTerm {
        OrdTerm { terms: vec![p] }
    }

    /// Build from summands, rejecting anything that is not already normal.
    pub fn from_summands(terms: Vec<Principal>) -> Result<OrdTerm, OrdError> {
        let t = OrdTerm { terms };
        t.validate()?;
        Ok(t)
    }

    /// Check every normal-form invariant, recursively.
    pub fn validate(&self) -> Result<(), OrdError> {
        for w in self.terms.windows(2) {
            if w[0] < w[1] {
                return Err(OrdError::NonNormalInput(format!("summands out of order in {}", self)));
            }
        }
        for p in &self.terms {
            match p {
                Principal::Omega => {}
                Principal::Phi(a, b) => {
                    a.validate()?;
                    b.validate()?;
                    if veblen(a, b) != OrdTerm::principal(p.clone()) {
                        return Err(OrdError::NonNormalInput(format!("{} is a Veblen fixed point", b)));
                    }
                }
                Principal::Psi(a) => {
                    a.validate()?;
                    if !collapse::in_b(a, a) {
                        return Err(OrdError::NonNormalPsiArgument(a.to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn summands(&self) -> &[Principal] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == Principal::one()
    }

    pub fn as_principal(&self) -> Option<&Principal> {
        match self.terms.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }

    /// Successor ordinal test: last summand is One.
    pub fn is_successor(&self) -> bool {
        self.terms.last() == Some(&Principal::one())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// Finite value, if the term is a natural number.
    pub fn as_nat(&self) -> Option<u64> {
        if self.terms.iter().all(|p| *p == Principal::one()) {
            Some(self.terms.len() as u64)
        } else {
            None
        }
    }

    pub fn succ(&self) -> OrdTerm {
        add(self, &OrdTerm::one())
    }

    pub fn add(&self, other: &OrdTerm) -> OrdTerm {
        add(self, other)
    }

    pub fn add_nat(&self, n: u64) -> OrdTerm {
        add(self, &OrdTerm::nat(n))
    }

    pub fn nat_sum(&self, other: &OrdTerm) -> OrdTerm {
        nat_sum(self, other)
    }

    /// Number of principal-term nodes, counting nested arguments.
    pub fn size(&self) -> usize {
        self.terms
            .iter()
            .map(|p| match p {
                Principal::Omega => 1,
                Principal::Phi(a, b) => 1 + a.size() + b.size(),
                Principal::Psi(a) => 1 + a.size(),
            })
            .sum()
    }

    /// Every ψ-argument occurring anywhere inside, outermost first.
    pub fn psi_args(&self) -> Vec<OrdTerm> {
        let mut out = Vec::new();
        self.collect_psi(&mut out);
        out
    }

    fn collect_psi(&self, out: &mut Vec<OrdTerm>) {
        for p in &self.terms {
            match p {
                Principal::Omega => {}
                Principal::Phi(a, b) => {
                    a.collect_psi(out);
                    b.collect_psi(out);
                }
                Principal::Psi(a) => {
                    out.push(a.clone());
                    a.collect_psi(out);
                }
            }
        }
    }

    /// Unicode rendering, e.g. `ω^{Ω+1}·2+3`.
    pub fn pretty(&self) -> String {
        pretty(self)
    }
}

/// Ordinal sum; summands of `a` dominated by the head of `b` are absorbed.
pub fn add(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    let Some(head) = b.terms.first() else {
        return a.clone();
    };
    let mut terms: Vec<Principal> = a.terms.iter().take_while(|p| *p >= head).cloned().collect();
    terms.extend(b.terms.iter().cloned());
    OrdTerm { terms }
}

/// Hessenberg natural sum.
pub fn nat_sum(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    let mut terms = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        if a.terms[i] >= b.terms[j] {
            terms.push(a.terms[i].clone());
            i += 1;
        } else {
            terms.push(b.terms[j].clone());
            j += 1;
        }
    }
    terms.extend_from_slice(&a.terms[i..]);
    terms.extend_from_slice(&b.terms[j..]);
    OrdTerm { terms }
}

/// Binary Veblen function, normalized.
pub fn veblen(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    if let Some(p) = b.as_principal() {
        match p {
            Principal::Phi(a2, _) if a2 > a => return b.clone(),
            s if s.is_critical() && a < b => return b.clone(),
            _ => {}
        }
    }
    if b.is_zero() {
        if let Some(s) = a.as_principal() {
            if s.is_critical() {
                return a.clone();
            }
        }
    }
    OrdTerm::principal(Principal::Phi(a.clone(), b.clone()))
}

/// ω^a.
pub fn omega_pow(a: &OrdTerm) -> OrdTerm {
    veblen(&OrdTerm::zero(), a)
}

/// ω_n(a): n-fold iterate of `omega_pow`.
pub fn omega_tower(n: u32, a: &OrdTerm) -> OrdTerm {
    (0..n).fold(a.clone(), |acc, _| omega_pow(&acc))
}

/// ω·a, summand by summand: ω·ω^e = ω^{1+e}.
pub fn omega_times(a: &OrdTerm) -> OrdTerm {
    a.terms
        .iter()
        .map(|p| omega_pow(&add(&OrdTerm::one(), &p.exponent())))
        .fold(OrdTerm::zero(), |acc, x| add(&acc, &x))
}

/// Ω·ω^m, represented as ω^{Ω+m}.
pub fn omega_omega_pow(m: u64) -> OrdTerm {
    omega_pow(&OrdTerm::big_omega().add_nat(m))
}

pub fn max(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn max_all<'a>(xs: impl IntoIterator<Item = &'a OrdTerm>) -> OrdTerm {
    xs.into_iter().fold(OrdTerm::zero(), |acc, x| max(&acc, x))
}

// ---------------------------------------------------------------------------
// Raw expressions

/// An unnormalized ordinal expression, as produced by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Raw {
    Zero,
    Nat(u64),
    Omega,
    BigOmega,
    Add(Box<Raw>, Box<Raw>),
    NatSum(Box<Raw>, Box<Raw>),
    Pow(Box<Raw>),
    Phi(Box<Raw>, Box<Raw>),
    Psi(Box<Raw>),
    Tower(u32, Box<Raw>),
}

impl Raw {
    pub fn normalize(&self) -> Result<OrdTerm, OrdError> {
        Ok(match self {
            Raw::Zero => OrdTerm::zero(),
            Raw::Nat(n) => OrdTerm::nat(*n),
            Raw::Omega => OrdTerm::omega(),
            Raw::BigOmega => OrdTerm::big_omega(),
            Raw::Add(a, b) => add(&a.normalize()?, &b.normalize()?),
            Raw::NatSum(a, b) => nat_sum(&a.normalize()?, &b.normalize()?),
            Raw::Pow(a) => omega_pow(&a.normalize()?),
            Raw::Phi(a, b) => veblen(&a.normalize()?, &b.normalize()?),
            Raw::Psi(a) => collapse::psi(&a.normalize()?)?,
            Raw::Tower(n, a) => omega_tower(*n, &a.normalize()?),
        })
    }
}

impl From<&OrdTerm> for Raw {
    fn from(t: &OrdTerm) -> Raw {
        let mut parts = t.terms.iter().map(|p| match p {
            Principal::Omega => Raw::BigOmega,
            Principal::Phi(a, b) => Raw::Phi(Box::new(a.into()), Box::new(b.into())),
            Principal::Psi(a) => Raw::Psi(Box::new(a.into())),
        });
        let Some(first) = parts.next() else { return Raw::Zero };
        parts.fold(first, |acc, x| Raw::Add(Box::new(acc), Box::new(x)))
    }
}

// ---------------------------------------------------------------------------
// Text syntax

/// Parse the ASCII ordinal syntax and normalize.
pub fn parse(text: &str) -> Result<OrdTerm, OrdError> {
    parse_raw(text)?.normalize()
}

pub fn parse_raw(text: &str) -> Result<Raw, OrdError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let r = p.sum()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> OrdError {
        OrdError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), OrdError> {
        if self.eat(s) { Ok(()) } else { Err(self.err(&format!("expected `{}`", s))) }
    }

    fn sum(&mut self) -> Result<Raw, OrdError> {
        let mut acc = self.atom()?;
        loop {
            if self.eat("+") {
                acc = Raw::Add(Box::new(acc), Box::new(self.atom()?));
            } else if self.eat("#") {
                acc = Raw::NatSum(Box::new(acc), Box::new(self.atom()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn number(&mut self) -> Option<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Raw, OrdError> {
        self.ws();
        if self.eat("phi(") {
            let a = self.sum()?;
            self.expect(",")?;
            let b = self.sum()?;
            self.expect(")")?;
            return Ok(Raw::Phi(Box::new(a), Box::new(b)));
        }
        if self.eat("psi(") {
            let a = self.sum()?;
            self.expect(")")?;
            return Ok(Raw::Psi(Box::new(a)));
        }
        if self.eat("tower(") {
            let n = self.number().ok_or_else(|| self.err("expected tower height"))?;
            self.expect(",")?;
            let a = self.sum()?;
            self.expect(")")?;
            let n = u32::try_from(n).map_err(|_| self.err("tower height too large"))?;
            return Ok(Raw::Tower(n, Box::new(a)));
        }
        if self.eat("w^") {
            let e = self.atom()?;
            return Ok(Raw::Pow(Box::new(e)));
        }
        if self.eat("w") {
            return Ok(Raw::Omega);
        }
        if self.eat("W") {
            return Ok(Raw::BigOmega);
        }
        if self.eat("(") {
            let r = self.sum()?;
            self.expect(")")?;
            return Ok(r);
        }
        match self.number() {
            Some(0) => Ok(Raw::Zero),
            Some(n) => Ok(Raw::Nat(n)),
            None => Err(self.err("expected ordinal term")),
        }
    }
}

fn fmt_principal(p: &Principal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Principal::Omega => write!(f, "W"),
        Principal::Phi(a, b) if a.is_zero() && b.is_one() => write!(f, "w"),
        Principal::Phi(a, b) if a.is_zero() => write!(f, "w^({})", b),
        Principal::Phi(a, b) => write!(f, "phi({},{})", a, b),
        Principal::Psi(a) => write!(f, "psi({})", a),
    }
}

impl fmt::Display for OrdTerm {
    /// Canonical text syntax; a trailing run of ones prints as a numeral.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones = self.terms.iter().rev().take_while(|p| **p == Principal::one()).count();
        let head = &self.terms[..self.terms.len() - ones];
        if head.is_empty() {
            return write!(f, "{}", ones);
        }
        for (i, p) in head.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            fmt_principal(p, f)?;
        }
        if ones > 0 {
            write!(f, "+{}", ones)?;
        }
        Ok(())
    }
}

fn pretty(t: &OrdTerm) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < t.terms.len() {
        let p = &t.terms[i];
        let mut k = 1;
        while i + k < t.terms.len() && t.terms[i + k] == *p {
            k += 1;
        }
        if *p == Principal::one() {
            parts.push(k.to_string());
        } else {
            let base = pretty_principal(p);
            parts.push(if k > 1 { format!("{}·{}", base, k) } else { base });
        }
        i += k;
    }
    parts.join("+")
}

fn pretty_principal(p: &Principal) -> String {
    match p {
        Principal::Omega => "Ω".into(),
        Principal::Phi(a, b) if a.is_zero() && b.is_one() => "ω".into(),
        Principal::Phi(a, b) if a.is_zero() => {
            let e = pretty(b);
            if e.chars().count() == 1 { format!("ω^{}", e) } else { format!("ω^{{{}}}", e) }
        }
        Principal::Phi(a, b) => format!("φ({},{})", pretty(a), pretty(b)),
        Principal::Psi(a) => format!("ψ_Ω({})", pretty(a)),
    }
}
