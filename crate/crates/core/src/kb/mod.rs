//! Temporal DL-Lite knowledge bases: signature, concepts, inclusions and
//! timestamped assertions, plus the `.tkb` text format.

mod parse;
mod print;
mod validate;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub use parse::{parse_kb, parse_kb_with, ParseError, ParseOptions};
pub use print::{serialize_kb, DlDisplay};
pub use validate::{validate_kb, ValidationOptions, ValidationReport, Violation, ViolationCode};

/// Time points are natural numbers.
pub type Timestamp = u32;

/// A role name, possibly inverted (`R` or `R^-`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: String,
    pub inverse: bool,
}

impl Role {
    pub fn new(name: impl Into<String>) -> Self {
        Role { name: name.into(), inverse: false }
    }

    pub fn inverse_of(name: impl Into<String>) -> Self {
        Role { name: name.into(), inverse: true }
    }

    pub fn inverted(&self) -> Self {
        Role { name: self.name.clone(), inverse: !self.inverse }
    }
}

/// Concept expressions. `Or` is interpreted but only admitted in input when
/// the grammar is not strict.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(String),
    Exists(Role),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    /// `F C`: at some time from now on.
    Sometime(Box<Concept>),
    /// `G C`: at every time from now on.
    Always(Box<Concept>),
}

impl Concept {
    pub fn atomic(name: impl Into<String>) -> Self {
        Concept::Atomic(name.into())
    }

    pub fn exists(role: Role) -> Self {
        Concept::Exists(role)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Concept::Not(Box::new(self))
    }

    pub fn and(self, other: Concept) -> Self {
        Concept::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Concept) -> Self {
        Concept::Or(Box::new(self), Box::new(other))
    }

    pub fn sometime(self) -> Self {
        Concept::Sometime(Box::new(self))
    }

    pub fn always(self) -> Self {
        Concept::Always(Box::new(self))
    }

    /// Maximum nesting of `F`/`G` along any root-to-leaf path.
    pub fn temporal_depth(&self) -> u32 {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) | Concept::Exists(_) => 0,
            Concept::Not(c) => c.temporal_depth(),
            Concept::And(a, b) | Concept::Or(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Concept::Sometime(c) | Concept::Always(c) => 1 + c.temporal_depth(),
        }
    }

    pub fn is_temporal(&self) -> bool {
        self.temporal_depth() > 0
    }

    pub fn contains_or(&self) -> bool {
        match self {
            Concept::Or(..) => true,
            Concept::Not(c) | Concept::Sometime(c) | Concept::Always(c) => c.contains_or(),
            Concept::And(a, b) => a.contains_or() || b.contains_or(),
            _ => false,
        }
    }

    /// Expression length: every operator and every basic concept counts one.
    pub fn length(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) | Concept::Exists(_) => 1,
            Concept::Not(c) | Concept::Sometime(c) | Concept::Always(c) => 1 + c.length(),
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.length() + b.length(),
        }
    }

    /// Calls `f` on every concept name and every role occurring in the tree.
    pub fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(Symbol<'a>)) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(name) => f(Symbol::Concept(name)),
            Concept::Exists(role) => f(Symbol::Role(role)),
            Concept::Not(c) | Concept::Sometime(c) | Concept::Always(c) => c.visit_symbols(f),
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
        }
    }
}

/// A symbol occurrence reported by [`Concept::visit_symbols`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol<'a> {
    Concept(&'a str),
    Role(&'a Role),
}

/// A general concept inclusion `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Gci { lhs, rhs }
    }

    /// The inclusion `A <= G A` that a `rigid` declaration stands for.
    pub fn persistence(concept: &str) -> Self {
        Gci::new(Concept::atomic(concept), Concept::atomic(concept).always())
    }
}

/// Maximum temporal depth over the right-hand sides of `gcis`.
pub fn temporal_depth(gcis: &[Gci]) -> u32 {
    gcis.iter().map(|g| g.rhs.temporal_depth()).max().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConceptDecl {
    pub rigid: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RoleDecl {
    /// Global (rigid) role; otherwise local.
    pub global: bool,
    pub functional: bool,
    pub inverse_functional: bool,
}

/// Declared concept, role and individual names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeMap<String, ConceptDecl>,
    pub roles: BTreeMap<String, RoleDecl>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    pub fn declare_concept(&mut self, name: impl Into<String>, rigid: bool) -> &mut Self {
        self.concepts.insert(name.into(), ConceptDecl { rigid });
        self
    }

    pub fn declare_role(&mut self, name: impl Into<String>, decl: RoleDecl) -> &mut Self {
        self.roles.insert(name.into(), decl);
        self
    }

    pub fn declare_individual(&mut self, name: impl Into<String>) -> &mut Self {
        self.individuals.insert(name.into());
        self
    }

    pub fn is_rigid_concept(&self, name: &str) -> bool {
        self.concepts.get(name).is_some_and(|d| d.rigid)
    }

    pub fn is_global_role(&self, name: &str) -> bool {
        self.roles.get(name).is_some_and(|d| d.global)
    }

    /// Rigid concept or global role.
    pub fn is_rigid_predicate(&self, name: &str) -> bool {
        self.is_rigid_concept(name) || self.is_global_role(name)
    }
}

/// The atom asserted by an ABox assertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fact {
    Concept { concept: String, individual: String },
    Role { role: String, subject: String, object: String },
}

impl Fact {
    pub fn symbol(&self) -> &str {
        match self {
            Fact::Concept { concept, .. } => concept,
            Fact::Role { role, .. } => role,
        }
    }

    /// `(a, None)` for concept facts, `(a, Some(b))` for role facts.
    pub fn arguments(&self) -> (&str, Option<&str>) {
        match self {
            Fact::Concept { individual, .. } => (individual, None),
            Fact::Role { subject, object, .. } => (subject, Some(object)),
        }
    }
}

/// `A(a)@n`, `R(a,b)@n` or their negations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assertion {
    pub fact: Fact,
    pub negated: bool,
    pub time: Timestamp,
}

impl Assertion {
    pub fn concept(concept: &str, individual: &str, time: Timestamp) -> Self {
        Assertion {
            fact: Fact::Concept { concept: concept.to_string(), individual: individual.to_string() },
            negated: false,
            time,
        }
    }

    pub fn role(role: &str, subject: &str, object: &str, time: Timestamp) -> Self {
        Assertion {
            fact: Fact::Role {
                role: role.to_string(),
                subject: subject.to_string(),
                object: object.to_string(),
            },
            negated: false,
            time,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn symbol(&self) -> &str {
        self.fact.symbol()
    }

    /// Order used when shrinking conflict seeds: timestamp, symbol, arguments.
    pub fn chronological_cmp(&self, other: &Self) -> Ordering {
        self.time
            .cmp(&other.time)
            .then_with(|| self.symbol().cmp(other.symbol()))
            .then_with(|| self.fact.arguments().cmp(&other.fact.arguments()))
            .then_with(|| self.negated.cmp(&other.negated))
    }

    pub fn individuals(&self) -> impl Iterator<Item = &str> {
        let (a, b) = self.fact.arguments();
        core::iter::once(a).chain(b)
    }
}

/// The default order is symbol, arguments, timestamp.
impl Ord for Assertion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbol()
            .cmp(other.symbol())
            .then_with(|| self.fact.arguments().cmp(&other.fact.arguments()))
            .then_with(|| self.time.cmp(&other.time))
            .then_with(|| self.negated.cmp(&other.negated))
    }
}

impl PartialOrd for Assertion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        match &self.fact {
            Fact::Concept { concept, individual } => write!(f, "{concept}({individual})@{}", self.time),
            Fact::Role { role, subject, object } => write!(f, "{role}({subject},{object})@{}", self.time),
        }
    }
}

/// A knowledge base `(T, A)`. Functionality axioms live in the role
/// declarations of the signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TemporalKb {
    pub signature: Signature,
    pub gcis: Vec<Gci>,
    pub abox: Vec<Assertion>,
}

impl TemporalKb {
    /// Builds a KB, dropping duplicate assertions (first occurrence wins).
    pub fn new(signature: Signature, gcis: Vec<Gci>, abox: Vec<Assertion>) -> Self {
        TemporalKb { signature, gcis, abox: dedup_assertions(abox) }
    }

    /// Same TBox and signature, different ABox.
    pub fn with_abox(&self, abox: Vec<Assertion>) -> Self {
        TemporalKb { signature: self.signature.clone(), gcis: self.gcis.clone(), abox }
    }

    /// `funct R` / `funct R^-` axioms in declaration order.
    pub fn functionality(&self) -> Vec<Role> {
        let mut out = Vec::new();
        for (name, decl) in &self.signature.roles {
            if decl.functional {
                out.push(Role::new(name.clone()));
            }
            if decl.inverse_functional {
                out.push(Role::inverse_of(name.clone()));
            }
        }
        out
    }

    /// Number of TBox axioms: inclusions plus functionality declarations.
    pub fn tbox_len(&self) -> usize {
        self.gcis.len() + self.functionality().len()
    }

    /// The inclusions with every `rigid` concept declaration expanded to
    /// `A <= G A`, skipping ones already stated explicitly.
    pub fn expanded_gcis(&self) -> Vec<Gci> {
        let mut out = self.gcis.clone();
        for (name, decl) in &self.signature.concepts {
            if decl.rigid {
                let gci = Gci::persistence(name);
                if !out.contains(&gci) {
                    out.push(gci);
                }
            }
        }
        out
    }

    /// Temporal depth of the expanded TBox.
    pub fn temporal_depth(&self) -> u32 {
        temporal_depth(&self.expanded_gcis())
    }

    pub fn is_rigid_predicate(&self, symbol: &str) -> bool {
        self.signature.is_rigid_predicate(symbol)
    }
}

pub(crate) fn dedup_assertions(abox: Vec<Assertion>) -> Vec<Assertion> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(abox.len());
    for a in abox {
        if seen.insert(a.clone()) {
            out.push(a);
        } else {
            log::warn!("dropping duplicate assertion {a}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_of_nested_operators() {
        let c = Concept::atomic("B").sometime().always();
        assert_eq!(c.temporal_depth(), 2);
        assert_eq!(temporal_depth(&[Gci::new(Concept::atomic("A"), c)]), 2);
        assert_eq!(temporal_depth(&[]), 0);
        let flat = Concept::atomic("A").and(Concept::exists(Role::new("R")).not());
        assert_eq!(flat.temporal_depth(), 0);
    }

    #[test]
    fn length_counts_operators_and_leaves() {
        let c = Concept::atomic("A").and(Concept::exists(Role::new("R")).not());
        assert_eq!(c.length(), 4);
        assert_eq!(Concept::Top.length(), 1);
    }

    #[test]
    fn rigid_declarations_expand_once() {
        let mut sig = Signature::default();
        sig.declare_concept("A", true).declare_concept("B", true);
        let kb = TemporalKb::new(sig, alloc::vec![Gci::persistence("A")], Vec::new());
        let gcis = kb.expanded_gcis();
        assert_eq!(gcis.len(), 2);
        assert_eq!(gcis[1], Gci::persistence("B"));
        assert_eq!(kb.temporal_depth(), 1);
    }

    #[test]
    fn duplicate_assertions_are_dropped() {
        let a = Assertion::concept("A", "x", 1);
        let kb = TemporalKb::new(Signature::default(), Vec::new(), alloc::vec![a.clone(), a.clone()]);
        assert_eq!(kb.abox, alloc::vec![a]);
    }

    #[test]
    fn assertion_orders() {
        let early = Assertion::concept("Minor", "John", 1);
        let late = Assertion::concept("Adult", "John", 2);
        assert_eq!(early.chronological_cmp(&late), Ordering::Less);
        assert_eq!(early.cmp(&late), Ordering::Greater);
        assert_eq!(alloc::format!("{}", late.clone().negate()), "-Adult(John)@2");
        let r = Assertion::role("hasMother", "John", "Ana", 0);
        assert_eq!(alloc::format!("{r}"), "hasMother(John,Ana)@0");
    }
}
