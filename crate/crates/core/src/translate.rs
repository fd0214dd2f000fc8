//! Reduction of a temporal KB to time-indexed atemporal DL-Lite.
//!
//! Every concept and role name `X` evaluated at time `i` becomes the fresh
//! name `X@i`. `G D` at `i` becomes the conjunction of `D` at `k = i..=H` and
//! `F D` the disjunction over the same range (`k = i+1..=H` in strict mode),
//! where `H = n + m`. Each inclusion is instantiated at every time of the
//! window `[l, H]`, global roles get `R@i <= R@k` for `i <= k`, and
//! functionality is stated per time point.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use thiserror::Error;

use crate::kb::{Assertion, Concept, Fact, Gci, Role, TemporalKb, Timestamp};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TranslateOptions {
    /// Evaluate `F`/`G` over `k > i` instead of `k >= i`.
    pub strict_future: bool,
}

/// Translation window: `[start, last + depth]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Horizon {
    /// Earliest ABox timestamp (`l`).
    pub start: Timestamp,
    /// Latest ABox timestamp (`n`).
    pub last: Timestamp,
    /// Temporal depth of the TBox (`m`).
    pub depth: u32,
}

impl Horizon {
    pub fn new(start: Timestamp, last: Timestamp, depth: u32) -> Self {
        assert!(start <= last, "horizon start {start} after last timestamp {last}");
        Horizon { start, last, depth }
    }

    /// `H = n + m`.
    pub fn end(&self) -> Timestamp {
        self.last + self.depth
    }

    pub fn times(&self) -> RangeInclusive<Timestamp> {
        self.start..=self.end()
    }

    pub fn len(&self) -> usize {
        (self.end() - self.start) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.times().contains(&t)
    }

    /// The window for `depth` and the timestamps of `abox` (`[0, m]` when empty).
    pub fn for_abox(abox: &[Assertion], depth: u32) -> Self {
        let start = abox.iter().map(|a| a.time).min().unwrap_or(0);
        let last = abox.iter().map(|a| a.time).max().unwrap_or(0);
        Horizon { start, last, depth }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

pub fn compute_horizon(kb: &TemporalKb) -> Horizon {
    Horizon::for_abox(&kb.abox, kb.temporal_depth())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("time index {index} outside the window [{start}, {end}]")]
    IndexOutOfRange { index: Timestamp, start: Timestamp, end: Timestamp },
    #[error("assertion {assertion} outside the observed interval [{start}, {last}]")]
    TimestampOutOfRange { assertion: String, start: Timestamp, last: Timestamp },
}

/// A concept or role name at a time index, rendered `base@index`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundName {
    pub base: String,
    pub index: Timestamp,
}

impl GroundName {
    pub fn new(base: impl Into<String>, index: Timestamp) -> Self {
        GroundName { base: base.into(), index }
    }
}

impl fmt::Display for GroundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.base, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundRole {
    pub name: GroundName,
    pub inverse: bool,
}

impl GroundRole {
    pub fn at(role: &Role, index: Timestamp) -> Self {
        GroundRole { name: GroundName::new(role.name.clone(), index), inverse: role.inverse }
    }
}

impl fmt::Display for GroundRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.inverse {
            f.write_str("^-")?;
        }
        Ok(())
    }
}

/// Atemporal concepts over time-indexed names. There are no temporal nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundConcept {
    Top,
    Bottom,
    Atomic(GroundName),
    Exists(GroundRole),
    Not(alloc::boxed::Box<GroundConcept>),
    And(alloc::boxed::Box<GroundConcept>, alloc::boxed::Box<GroundConcept>),
    Or(alloc::boxed::Box<GroundConcept>, alloc::boxed::Box<GroundConcept>),
}

impl GroundConcept {
    pub fn atomic(base: &str, index: Timestamp) -> Self {
        GroundConcept::Atomic(GroundName::new(base, index))
    }

    /// Right-nested conjunction of the distinct operands; `Top` when empty.
    pub fn conjunction(operands: Vec<GroundConcept>) -> Self {
        Self::nest(operands, GroundConcept::Top, |a, b| {
            GroundConcept::And(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b))
        })
    }

    /// Right-nested disjunction of the distinct operands; `Bottom` when empty.
    pub fn disjunction(operands: Vec<GroundConcept>) -> Self {
        Self::nest(operands, GroundConcept::Bottom, |a, b| {
            GroundConcept::Or(alloc::boxed::Box::new(a), alloc::boxed::Box::new(b))
        })
    }

    fn nest(
        operands: Vec<GroundConcept>,
        empty: GroundConcept,
        join: impl Fn(GroundConcept, GroundConcept) -> GroundConcept,
    ) -> Self {
        let mut distinct: Vec<GroundConcept> = Vec::with_capacity(operands.len());
        for op in operands {
            if !distinct.contains(&op) {
                distinct.push(op);
            }
        }
        let mut iter = distinct.into_iter().rev();
        match iter.next() {
            None => empty,
            Some(last) => iter.fold(last, |acc, op| join(op, acc)),
        }
    }

    /// Operands of a (nested) conjunction, flattened.
    pub fn conjuncts(&self) -> Vec<&GroundConcept> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a GroundConcept, out: &mut Vec<&'a GroundConcept>) {
            match c {
                GroundConcept::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Operands of a (nested) disjunction, flattened.
    pub fn disjuncts(&self) -> Vec<&GroundConcept> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a GroundConcept, out: &mut Vec<&'a GroundConcept>) {
            match c {
                GroundConcept::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Normal form for comparisons: conjunctions and disjunctions flattened,
    /// operands sorted and deduplicated.
    pub fn canonical(&self) -> GroundConcept {
        match self {
            GroundConcept::And(..) => {
                let mut ops: Vec<_> = self.conjuncts().into_iter().map(|c| c.canonical()).collect();
                ops.sort();
                GroundConcept::conjunction(ops)
            }
            GroundConcept::Or(..) => {
                let mut ops: Vec<_> = self.disjuncts().into_iter().map(|c| c.canonical()).collect();
                ops.sort();
                GroundConcept::disjunction(ops)
            }
            GroundConcept::Not(c) => GroundConcept::Not(alloc::boxed::Box::new(c.canonical())),
            other => other.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GroundConcept::Not(c) => 1 + c.size(),
            GroundConcept::And(a, b) | GroundConcept::Or(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Calls `f` on every time index occurring in the tree.
    pub fn visit_indices(&self, f: &mut dyn FnMut(Timestamp)) {
        match self {
            GroundConcept::Atomic(n) => f(n.index),
            GroundConcept::Exists(r) => f(r.name.index),
            GroundConcept::Not(c) => c.visit_indices(f),
            GroundConcept::And(a, b) | GroundConcept::Or(a, b) => {
                a.visit_indices(f);
                b.visit_indices(f);
            }
            GroundConcept::Top | GroundConcept::Bottom => {}
        }
    }
}

const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

fn write_ground(f: &mut fmt::Formatter<'_>, c: &GroundConcept, context: u8) -> fmt::Result {
    let own = match c {
        GroundConcept::Or(..) => OR,
        GroundConcept::And(..) => AND,
        _ => UNARY,
    };
    if own < context {
        f.write_str("(")?;
    }
    match c {
        GroundConcept::Top => f.write_str("Top")?,
        GroundConcept::Bottom => f.write_str("Bot")?,
        GroundConcept::Atomic(n) => write!(f, "{n}")?,
        GroundConcept::Exists(r) => write!(f, "exists {r}")?,
        GroundConcept::Not(inner) => {
            f.write_str("!")?;
            write_ground(f, inner, UNARY)?;
        }
        GroundConcept::And(a, b) => {
            write_ground(f, a, AND)?;
            f.write_str(" & ")?;
            write_ground(f, b, AND)?;
        }
        GroundConcept::Or(a, b) => {
            write_ground(f, a, OR)?;
            f.write_str(" | ")?;
            write_ground(f, b, OR)?;
        }
    }
    if own < context {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for GroundConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ground(f, self, OR)
    }
}

/// A grounded inclusion with its provenance: the index of the source
/// inclusion in [`TemporalKb::expanded_gcis`] and the time it was grounded at.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundGci {
    pub lhs: GroundConcept,
    pub rhs: GroundConcept,
    pub source: usize,
    pub time: Timestamp,
}

impl fmt::Display for GroundGci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// `role@from <= role@to` for a global role.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleInclusion {
    pub role: String,
    pub from: Timestamp,
    pub to: Timestamp,
}

impl RoleInclusion {
    pub fn sub(&self) -> GroundName {
        GroundName::new(self.role.clone(), self.from)
    }

    pub fn sup(&self) -> GroundName {
        GroundName::new(self.role.clone(), self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundFact {
    Concept { concept: GroundName, individual: String },
    Role { role: GroundName, subject: String, object: String },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAssertion {
    pub fact: GroundFact,
    pub negated: bool,
}

impl fmt::Display for GroundAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        match &self.fact {
            GroundFact::Concept { concept, individual } => write!(f, "{concept}({individual})"),
            GroundFact::Role { role, subject, object } => write!(f, "{role}({subject},{object})"),
        }
    }
}

/// The grounded TBox part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TboxTranslation {
    pub gcis: Vec<GroundGci>,
    pub role_inclusions: Vec<RoleInclusion>,
    /// `funct(R@i)` / `funct(R@i^-)`.
    pub functionality: Vec<GroundRole>,
}

/// `K†`: the time-indexed atemporal KB.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundKb {
    pub gcis: Vec<GroundGci>,
    pub role_inclusions: Vec<RoleInclusion>,
    pub functionality: Vec<GroundRole>,
    /// One entry per source assertion, in ABox order.
    pub abox: Vec<GroundAssertion>,
    pub horizon: Horizon,
    /// The (rigid-expanded) inclusions that `gcis[..].source` points into.
    pub sources: Vec<Gci>,
}

impl GroundKb {
    /// Roles occurring under `exists`, as `(base name, inverse)`.
    pub fn existential_roles(&self) -> BTreeSet<(String, bool)> {
        let mut out = BTreeSet::new();
        fn walk(c: &GroundConcept, out: &mut BTreeSet<(String, bool)>) {
            match c {
                GroundConcept::Exists(r) => {
                    out.insert((r.name.base.clone(), r.inverse));
                }
                GroundConcept::Not(c) => walk(c, out),
                GroundConcept::And(a, b) | GroundConcept::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        for g in &self.gcis {
            walk(&g.lhs, &mut out);
            walk(&g.rhs, &mut out);
        }
        out
    }
}

/// Translates `c` evaluated at time `i`.
pub fn tr_concept(
    c: &Concept,
    i: Timestamp,
    horizon: &Horizon,
    options: TranslateOptions,
) -> Result<GroundConcept, TranslateError> {
    if !horizon.contains(i) {
        return Err(TranslateError::IndexOutOfRange { index: i, start: horizon.start, end: horizon.end() });
    }
    Ok(tr(c, i, horizon.end(), options))
}

fn tr(c: &Concept, i: Timestamp, end: Timestamp, options: TranslateOptions) -> GroundConcept {
    use alloc::boxed::Box;
    match c {
        Concept::Top => GroundConcept::Top,
        Concept::Bottom => GroundConcept::Bottom,
        Concept::Atomic(name) => GroundConcept::atomic(name, i),
        Concept::Exists(role) => GroundConcept::Exists(GroundRole::at(role, i)),
        Concept::Not(inner) => GroundConcept::Not(Box::new(tr(inner, i, end, options))),
        Concept::And(a, b) => {
            GroundConcept::And(Box::new(tr(a, i, end, options)), Box::new(tr(b, i, end, options)))
        }
        Concept::Or(a, b) => {
            GroundConcept::Or(Box::new(tr(a, i, end, options)), Box::new(tr(b, i, end, options)))
        }
        Concept::Always(inner) => {
            GroundConcept::conjunction(future(i, end, options).map(|k| tr(inner, k, end, options)).collect())
        }
        Concept::Sometime(inner) => {
            GroundConcept::disjunction(future(i, end, options).map(|k| tr(inner, k, end, options)).collect())
        }
    }
}

fn future(i: Timestamp, end: Timestamp, options: TranslateOptions) -> RangeInclusive<Timestamp> {
    if options.strict_future {
        i + 1..=end
    } else {
        i..=end
    }
}

/// Grounds the (rigid-expanded) TBox of `kb` over `horizon`.
pub fn translate_tbox(kb: &TemporalKb, horizon: &Horizon, options: TranslateOptions) -> TboxTranslation {
    let sources = kb.expanded_gcis();
    let end = horizon.end();
    let mut out = TboxTranslation::default();
    for (source, gci) in sources.iter().enumerate() {
        for i in horizon.times() {
            out.gcis.push(GroundGci {
                lhs: tr(&gci.lhs, i, end, options),
                rhs: tr(&gci.rhs, i, end, options),
                source,
                time: i,
            });
        }
    }
    for (name, decl) in &kb.signature.roles {
        if decl.global {
            for from in horizon.times() {
                for to in from..=end {
                    out.role_inclusions.push(RoleInclusion { role: name.clone(), from, to });
                }
            }
        }
    }
    for role in kb.functionality() {
        for i in horizon.times() {
            out.functionality.push(GroundRole::at(&role, i));
        }
    }
    out
}

pub fn translate_assertion(a: &Assertion) -> GroundAssertion {
    let fact = match &a.fact {
        Fact::Concept { concept, individual } => {
            GroundFact::Concept { concept: GroundName::new(concept.clone(), a.time), individual: individual.clone() }
        }
        Fact::Role { role, subject, object } => GroundFact::Role {
            role: GroundName::new(role.clone(), a.time),
            subject: subject.clone(),
            object: object.clone(),
        },
    };
    GroundAssertion { fact, negated: a.negated }
}

pub fn translate_abox(abox: &[Assertion], horizon: &Horizon) -> Result<Vec<GroundAssertion>, TranslateError> {
    abox.iter()
        .map(|a| {
            if a.time < horizon.start || a.time > horizon.last {
                Err(TranslateError::TimestampOutOfRange {
                    assertion: alloc::format!("{a}"),
                    start: horizon.start,
                    last: horizon.last,
                })
            } else {
                Ok(translate_assertion(a))
            }
        })
        .collect()
}

/// Translates `kb` over the window computed from its own ABox.
pub fn translate_kb(kb: &TemporalKb, options: TranslateOptions) -> Result<GroundKb, TranslateError> {
    translate_kb_over(kb, &compute_horizon(kb), options)
}

/// Translates `kb` over an explicit window (which must cover the ABox).
pub fn translate_kb_over(
    kb: &TemporalKb,
    horizon: &Horizon,
    options: TranslateOptions,
) -> Result<GroundKb, TranslateError> {
    let abox = translate_abox(&kb.abox, horizon)?;
    let tbox = translate_tbox(kb, horizon, options);
    Ok(GroundKb {
        gcis: tbox.gcis,
        role_inclusions: tbox.role_inclusions,
        functionality: tbox.functionality,
        abox,
        horizon: *horizon,
        sources: kb.expanded_gcis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;
    use alloc::string::ToString;
    use alloc::vec;

    fn example() -> TemporalKb {
        parse_kb(crate::EXAMPLE_KB).unwrap()
    }

    fn h(start: u32, last: u32, depth: u32) -> Horizon {
        Horizon::new(start, last, depth)
    }

    #[test]
    fn horizons() {
        let kb = example();
        assert_eq!(compute_horizon(&kb), h(0, 4, 1));
        assert_eq!(compute_horizon(&kb).end(), 5);
        let tbox_only = kb.with_abox(vec![]);
        assert_eq!(compute_horizon(&tbox_only).times(), 0..=1);
        let shifted: Vec<_> = kb.abox.iter().filter(|a| a.time >= 1).cloned().collect();
        assert_eq!(compute_horizon(&kb.with_abox(shifted)).times(), 1..=5);
    }

    #[test]
    fn always_at_start_of_window() {
        let c = Concept::atomic("Person").always();
        let got = tr_concept(&c, 0, &h(0, 0, 1), TranslateOptions::default()).unwrap();
        assert_eq!(got.to_string(), "Person@0 & Person@1");
    }

    #[test]
    fn plain_name_gets_index() {
        let got = tr_concept(&Concept::atomic("Adult"), 3, &h(0, 4, 1), TranslateOptions::default()).unwrap();
        assert_eq!(got, GroundConcept::atomic("Adult", 3));
    }

    #[test]
    fn sometime_expands_to_disjunction() {
        let c = Concept::atomic("Adult").sometime();
        let got = tr_concept(&c, 3, &h(0, 4, 1), TranslateOptions::default()).unwrap();
        assert_eq!(got.to_string(), "Adult@3 | Adult@4 | Adult@5");
        assert_eq!(got.disjuncts().len(), 3);
    }

    #[test]
    fn strict_future_ranges() {
        let strict = TranslateOptions { strict_future: true };
        let horizon = h(0, 4, 1);
        let g = tr_concept(&Concept::atomic("A").always(), 5, &horizon, strict).unwrap();
        assert_eq!(g, GroundConcept::Top);
        let f = tr_concept(&Concept::atomic("A").sometime(), 5, &horizon, strict).unwrap();
        assert_eq!(f, GroundConcept::Bottom);
        let f = tr_concept(&Concept::atomic("A").sometime(), 3, &horizon, strict).unwrap();
        assert_eq!(f.to_string(), "A@4 | A@5");
    }

    #[test]
    fn out_of_range_index() {
        let err = tr_concept(&Concept::Top, 6, &h(0, 4, 1), TranslateOptions::default()).unwrap_err();
        assert_eq!(err, TranslateError::IndexOutOfRange { index: 6, start: 0, end: 5 });
    }

    #[test]
    fn reflexive_always_at_end_deduplicates() {
        let c = Concept::atomic("A").always().always();
        let got = tr_concept(&c, 1, &h(0, 0, 1), TranslateOptions::default()).unwrap();
        assert_eq!(got, GroundConcept::atomic("A", 1));
    }

    #[test]
    fn counts_follow_window_size() {
        let kb = example();
        let horizon = compute_horizon(&kb);
        let t = translate_tbox(&kb, &horizon, TranslateOptions::default());
        let width = horizon.len();
        assert_eq!(t.gcis.len(), 6 * width);
        assert_eq!(t.functionality.len(), width);
        assert_eq!(t.role_inclusions.len(), width * (width + 1) / 2);
    }

    #[test]
    fn empty_tbox_fragment() {
        let kb = TemporalKb::default();
        assert_eq!(translate_tbox(&kb, &h(0, 0, 0), TranslateOptions::default()), TboxTranslation::default());
        let g = translate_kb(&kb, TranslateOptions::default()).unwrap();
        assert!(g.gcis.is_empty() && g.abox.is_empty() && g.functionality.is_empty());
        assert_eq!(g.horizon.times(), 0..=0);
    }

    #[test]
    fn abox_translation() {
        let kb = example();
        let g = translate_abox(&kb.abox, &compute_horizon(&kb)).unwrap();
        let text: Vec<_> = g.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            text,
            [
                "Person@0(John)",
                "Minor@1(John)",
                "Adult@2(John)",
                "Minor@3(John)",
                "Minor@4(John)",
                "hasMother@0(John,Ana)",
                "hasMother@1(John,Eva)",
                "hasMother@2(John,Maria)"
            ]
        );
        let neg = translate_abox(&[Assertion::concept("Adult", "John", 3).negate()], &h(3, 3, 0)).unwrap();
        assert_eq!(neg[0].to_string(), "-Adult@3(John)");
        assert!(translate_abox(&[], &h(0, 0, 0)).unwrap().is_empty());
        let err = translate_abox(&kb.abox, &h(1, 4, 1)).unwrap_err();
        assert!(matches!(err, TranslateError::TimestampOutOfRange { .. }));
    }

    #[test]
    fn persistence_instances_in_full_translation() {
        let g = translate_kb(&example(), TranslateOptions::default()).unwrap();
        let rendered: Vec<_> = g.gcis.iter().map(|x| x.to_string()).collect();
        assert!(rendered.contains(&"Adult@2 <= Adult@2 & Adult@3 & Adult@4 & Adult@5".to_string()));
        assert!(rendered.contains(&"Minor@3 & Adult@3 <= Bot".to_string()));
        assert_eq!(g.existential_roles().into_iter().collect::<Vec<_>>(), vec![("hasMother".to_string(), false)]);
    }

    #[test]
    fn canonical_flattens_and_sorts() {
        let a = GroundConcept::atomic("A", 0);
        let b = GroundConcept::atomic("B", 0);
        let left = GroundConcept::conjunction(vec![b.clone(), GroundConcept::conjunction(vec![a.clone(), b.clone()])]);
        assert_eq!(left.canonical(), GroundConcept::conjunction(vec![a, b]));
    }
}
