//! Exhaustive model search over the direct temporal semantics.
//!
//! Independent of the translation: concepts are evaluated at `(element,
//! time)` by the semantic clauses (`G C` holds when `C` holds at every time
//! of the range, `F C` when it holds at some time), over a finite domain and
//! the bounded window `[l, H]`. The search is a backtracking enumeration of
//! truth values for the atoms `A(d, t)` and `R(d, e, t)`, pruned by
//! three-valued evaluation of the constraints, so it visits every
//! interpretation that is not already refuted by a partial one.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::{kb_individuals, Domain, Verdict};
use crate::kb::{Concept, Fact, Gci, TemporalKb, Timestamp};
use crate::translate::Horizon;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_domain: usize,
    /// Maximum `H - l`.
    pub max_window: u32,
    pub max_concepts: usize,
    pub max_roles: usize,
    /// Search nodes before giving up.
    pub node_budget: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_domain: 4, max_window: 5, max_concepts: 4, max_roles: 3, node_budget: 2_000_000 }
    }
}

impl OracleLimits {
    /// Larger shape limits for test corpora; the node budget still applies.
    pub fn widened() -> Self {
        OracleLimits { max_domain: 10, max_window: 8, max_concepts: 8, max_roles: 8, node_budget: 20_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleOptions {
    pub strict_future: bool,
    /// Hold rigid concepts and global roles constant over the whole window
    /// instead of propagating them forward.
    pub semantic_rigidity: bool,
    pub limits: OracleLimits,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} is {value}, above the oracle limit of {limit}")]
    LimitExceeded { what: &'static str, value: usize, limit: usize },
    #[error("a domain of {size} elements cannot hold {named} named individuals")]
    DomainTooSmall { size: usize, named: usize },
    #[error("assertion {assertion} lies outside the window {window}")]
    OutsideWindow { assertion: String, window: Horizon },
    #[error("search budget of {0} nodes exhausted")]
    Budget(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub verdict: Verdict,
    /// A witnessing interpretation when consistent.
    pub model: Option<TemporalModel>,
    pub nodes: u64,
}

/// A finite interpretation over a time window. Individuals denote the
/// named elements of `domain` at every time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalModel {
    pub domain: Domain,
    pub start: Timestamp,
    pub end: Timestamp,
    /// Concept name to its extension at each time of the window.
    pub concepts: BTreeMap<String, Vec<BTreeSet<usize>>>,
    /// Role name to its extension at each time of the window.
    pub roles: BTreeMap<String, Vec<BTreeSet<(usize, usize)>>>,
}

impl TemporalModel {
    fn slot(&self, t: Timestamp) -> usize {
        (t - self.start) as usize
    }

    fn concept_at(&self, name: &str, t: Timestamp) -> BTreeSet<usize> {
        self.concepts.get(name).map(|v| v[self.slot(t)].clone()).unwrap_or_default()
    }

    fn role_at(&self, name: &str, t: Timestamp) -> BTreeSet<(usize, usize)> {
        self.roles.get(name).map(|v| v[self.slot(t)].clone()).unwrap_or_default()
    }

    /// Extension of `c` at time `t`.
    pub fn extension(&self, c: &Concept, t: Timestamp, strict_future: bool) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (0..self.domain.len()).collect();
        match c {
            Concept::Top => all,
            Concept::Bottom => BTreeSet::new(),
            Concept::Atomic(name) => self.concept_at(name, t),
            Concept::Exists(role) => self
                .role_at(&role.name, t)
                .into_iter()
                .map(|(d, e)| if role.inverse { e } else { d })
                .collect(),
            Concept::Not(inner) => all.difference(&self.extension(inner, t, strict_future)).copied().collect(),
            Concept::And(a, b) => {
                self.extension(a, t, strict_future).intersection(&self.extension(b, t, strict_future)).copied().collect()
            }
            Concept::Or(a, b) => {
                self.extension(a, t, strict_future).union(&self.extension(b, t, strict_future)).copied().collect()
            }
            Concept::Always(inner) => {
                let mut acc = all;
                for k in range(t, self.end, strict_future) {
                    acc = acc.intersection(&self.extension(inner, k, strict_future)).copied().collect();
                }
                acc
            }
            Concept::Sometime(inner) => {
                let mut acc = BTreeSet::new();
                for k in range(t, self.end, strict_future) {
                    acc.extend(self.extension(inner, k, strict_future));
                }
                acc
            }
        }
    }

    /// Two-valued check of every axiom and assertion of `kb`.
    pub fn satisfies(&self, kb: &TemporalKb, options: &OracleOptions) -> bool {
        let times = self.start..=self.end;
        let gcis = if options.semantic_rigidity { kb.gcis.clone() } else { kb.expanded_gcis() };
        for gci in &gcis {
            for t in times.clone() {
                let lhs = self.extension(&gci.lhs, t, options.strict_future);
                if !lhs.is_subset(&self.extension(&gci.rhs, t, options.strict_future)) {
                    return false;
                }
            }
        }
        for (name, decl) in &kb.signature.roles {
            if decl.global {
                for i in times.clone() {
                    for k in i..=self.end {
                        let (a, b) = (self.role_at(name, i), self.role_at(name, k));
                        let ok = if options.semantic_rigidity { a == b } else { a.is_subset(&b) };
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        if options.semantic_rigidity {
            for (name, decl) in &kb.signature.concepts {
                if decl.rigid && times.clone().any(|t| self.concept_at(name, t) != self.concept_at(name, self.start)) {
                    return false;
                }
            }
        }
        for role in kb.functionality() {
            for t in times.clone() {
                let mut seen = BTreeSet::new();
                for (d, e) in self.role_at(&role.name, t) {
                    let key = if role.inverse { e } else { d };
                    if !seen.insert(key) {
                        return false;
                    }
                }
            }
        }
        kb.abox.iter().all(|a| {
            let holds = match &a.fact {
                Fact::Concept { concept, individual } => {
                    self.domain.index_of(individual).is_some_and(|d| self.concept_at(concept, a.time).contains(&d))
                }
                Fact::Role { role, subject, object } => {
                    match (self.domain.index_of(subject), self.domain.index_of(object)) {
                        (Some(d), Some(e)) => self.role_at(role, a.time).contains(&(d, e)),
                        _ => false,
                    }
                }
            };
            holds != a.negated
        })
    }
}

fn range(t: Timestamp, end: Timestamp, strict: bool) -> core::ops::RangeInclusive<Timestamp> {
    if strict {
        t + 1..=end
    } else {
        t..=end
    }
}

/// Searches for a model of `kb` with `domain_size` elements over `horizon`.
/// The domain holds the KB's individuals and anonymous elements.
pub fn oracle_enumerate(
    kb: &TemporalKb,
    domain_size: usize,
    horizon: &Horizon,
    options: &OracleOptions,
) -> Result<OracleOutcome, OracleError> {
    let individuals = kb_individuals(kb);
    if domain_size < individuals.len() || domain_size == 0 {
        return Err(OracleError::DomainTooSmall { size: domain_size, named: individuals.len() });
    }
    let limits = options.limits;
    let mut concepts: BTreeSet<String> = kb.signature.concepts.keys().cloned().collect();
    let mut roles: BTreeSet<String> = kb.signature.roles.keys().cloned().collect();
    for gci in &kb.gcis {
        for side in [&gci.lhs, &gci.rhs] {
            side.visit_symbols(&mut |s| match s {
                crate::kb::Symbol::Concept(c) => {
                    concepts.insert(c.into());
                }
                crate::kb::Symbol::Role(r) => {
                    roles.insert(r.name.clone());
                }
            });
        }
    }
    for a in &kb.abox {
        match &a.fact {
            Fact::Concept { concept, .. } => concepts.insert(concept.clone()),
            Fact::Role { role, .. } => roles.insert(role.clone()),
        };
    }
    for (what, value, limit) in [
        ("domain size", domain_size, limits.max_domain),
        ("window width", (horizon.end() - horizon.start) as usize, limits.max_window as usize),
        ("concept count", concepts.len(), limits.max_concepts),
        ("role count", roles.len(), limits.max_roles),
    ] {
        if value > limit {
            return Err(OracleError::LimitExceeded { what, value, limit });
        }
    }
    if let Some(a) = kb.abox.iter().find(|a| !horizon.contains(a.time)) {
        return Err(OracleError::OutsideWindow { assertion: alloc::format!("{a}"), window: *horizon });
    }

    let domain = Domain::with_anonymous(individuals, domain_size - kb_individuals(kb).len());
    let layout = Layout::new(kb, &domain, horizon, concepts, roles, options);
    let constraints = layout.constraints(kb, options);
    let mut csp = Csp::new(constraints, layout.atom_count(), limits.node_budget);
    let found = csp.solve()?;
    let model = found.then(|| layout.model(&csp.values, domain.clone()));
    Ok(OracleOutcome {
        verdict: if found { Verdict::Consistent } else { Verdict::Inconsistent },
        model,
        nodes: csp.nodes,
    })
}

/// Numbering of the atoms `A(d, t)` and `R(d, e, t)`.
struct Layout<'a> {
    concepts: BTreeMap<String, usize>,
    roles: BTreeMap<String, usize>,
    rigid_concepts: BTreeSet<String>,
    global_roles: BTreeSet<String>,
    semantic_rigidity: bool,
    strict_future: bool,
    n: usize,
    start: Timestamp,
    end: Timestamp,
    domain: &'a Domain,
}

impl<'a> Layout<'a> {
    fn new(
        kb: &TemporalKb,
        domain: &'a Domain,
        horizon: &Horizon,
        concepts: BTreeSet<String>,
        roles: BTreeSet<String>,
        options: &OracleOptions,
    ) -> Self {
        Layout {
            concepts: concepts.into_iter().enumerate().map(|(i, c)| (c, i)).collect(),
            roles: roles.into_iter().enumerate().map(|(i, r)| (r, i)).collect(),
            rigid_concepts: kb.signature.concepts.iter().filter(|(_, d)| d.rigid).map(|(n, _)| n.clone()).collect(),
            global_roles: kb.signature.roles.iter().filter(|(_, d)| d.global).map(|(n, _)| n.clone()).collect(),
            semantic_rigidity: options.semantic_rigidity,
            strict_future: options.strict_future,
            n: domain.len(),
            start: horizon.start,
            end: horizon.end(),
            domain,
        }
    }

    fn width(&self) -> usize {
        (self.end - self.start) as usize + 1
    }

    fn concept_block(&self) -> usize {
        self.concepts.len() * self.width() * self.n
    }

    fn atom_count(&self) -> usize {
        self.concept_block() + self.roles.len() * self.width() * self.n * self.n
    }

    fn slot(&self, rigid: bool, t: Timestamp) -> usize {
        if rigid && self.semantic_rigidity {
            0
        } else {
            (t - self.start) as usize
        }
    }

    fn concept_atom(&self, name: &str, d: usize, t: Timestamp) -> u32 {
        let c = self.concepts[name];
        let slot = self.slot(self.rigid_concepts.contains(name), t);
        ((c * self.width() + slot) * self.n + d) as u32
    }

    fn role_atom(&self, name: &str, d: usize, e: usize, t: Timestamp) -> u32 {
        let r = self.roles[name];
        let slot = self.slot(self.global_roles.contains(name), t);
        (self.concept_block() + ((r * self.width() + slot) * self.n + d) * self.n + e) as u32
    }

    fn compile(&self, c: &Concept, d: usize, t: Timestamp) -> Expr {
        match c {
            Concept::Top => Expr::Const(true),
            Concept::Bottom => Expr::Const(false),
            Concept::Atomic(name) => Expr::Atom(self.concept_atom(name, d, t)),
            Concept::Exists(role) => Expr::or(
                (0..self.n)
                    .map(|e| {
                        let (x, y) = if role.inverse { (e, d) } else { (d, e) };
                        Expr::Atom(self.role_atom(&role.name, x, y, t))
                    })
                    .collect(),
            ),
            Concept::Not(inner) => Expr::not(self.compile(inner, d, t)),
            Concept::And(a, b) => Expr::and(vec![self.compile(a, d, t), self.compile(b, d, t)]),
            Concept::Or(a, b) => Expr::or(vec![self.compile(a, d, t), self.compile(b, d, t)]),
            Concept::Always(inner) => {
                Expr::and(range(t, self.end, self.strict_future).map(|k| self.compile(inner, d, k)).collect())
            }
            Concept::Sometime(inner) => {
                Expr::or(range(t, self.end, self.strict_future).map(|k| self.compile(inner, d, k)).collect())
            }
        }
    }

    fn constraints(&self, kb: &TemporalKb, options: &OracleOptions) -> Vec<Expr> {
        let mut out = Vec::new();
        for a in &kb.abox {
            let atom = match &a.fact {
                Fact::Concept { concept, individual } => {
                    self.concept_atom(concept, self.domain.index_of(individual).unwrap(), a.time)
                }
                Fact::Role { role, subject, object } => self.role_atom(
                    role,
                    self.domain.index_of(subject).unwrap(),
                    self.domain.index_of(object).unwrap(),
                    a.time,
                ),
            };
            out.push(if a.negated { Expr::not(Expr::Atom(atom)) } else { Expr::Atom(atom) });
        }
        let gcis: Vec<Gci> = if options.semantic_rigidity { kb.gcis.clone() } else { kb.expanded_gcis() };
        for gci in &gcis {
            for t in self.start..=self.end {
                for d in 0..self.n {
                    out.push(Expr::or(vec![Expr::not(self.compile(&gci.lhs, d, t)), self.compile(&gci.rhs, d, t)]));
                }
            }
        }
        for role in kb.functionality() {
            for t in self.start..=self.end {
                for d in 0..self.n {
                    let fillers = (0..self.n)
                        .map(|e| {
                            let (x, y) = if role.inverse { (e, d) } else { (d, e) };
                            self.role_atom(&role.name, x, y, t)
                        })
                        .collect();
                    out.push(Expr::AtMostOne(fillers));
                }
            }
        }
        if !options.semantic_rigidity {
            for role in &self.global_roles {
                if !self.roles.contains_key(role) {
                    continue;
                }
                for i in self.start..=self.end {
                    for k in i + 1..=self.end {
                        for d in 0..self.n {
                            for e in 0..self.n {
                                out.push(Expr::or(vec![
                                    Expr::not(Expr::Atom(self.role_atom(role, d, e, i))),
                                    Expr::Atom(self.role_atom(role, d, e, k)),
                                ]));
                            }
                        }
                    }
                }
            }
        }
        out.retain(|c| *c != Expr::Const(true));
        out
    }

    fn model(&self, values: &[Option<bool>], domain: Domain) -> TemporalModel {
        let truth = |atom: u32| values[atom as usize] == Some(true);
        let times = self.start..=self.end;
        let concepts = self
            .concepts
            .keys()
            .map(|name| {
                let ext = times
                    .clone()
                    .map(|t| (0..self.n).filter(|&d| truth(self.concept_atom(name, d, t))).collect())
                    .collect();
                (name.clone(), ext)
            })
            .collect();
        let roles = self
            .roles
            .keys()
            .map(|name| {
                let ext = times
                    .clone()
                    .map(|t| {
                        let mut pairs = BTreeSet::new();
                        for d in 0..self.n {
                            for e in 0..self.n {
                                if truth(self.role_atom(name, d, e, t)) {
                                    pairs.insert((d, e));
                                }
                            }
                        }
                        pairs
                    })
                    .collect();
                (name.clone(), ext)
            })
            .collect();
        TemporalModel { domain, start: self.start, end: self.end, concepts, roles }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Const(bool),
    Atom(u32),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    AtMostOne(Vec<u32>),
}

impl Expr {
    fn not(e: Expr) -> Expr {
        match e {
            Expr::Const(b) => Expr::Const(!b),
            Expr::Not(inner) => *inner,
            other => Expr::Not(Box::new(other)),
        }
    }

    fn and(parts: Vec<Expr>) -> Expr {
        let mut kept = Vec::new();
        for p in parts {
            match p {
                Expr::Const(true) => {}
                Expr::Const(false) => return Expr::Const(false),
                other => kept.push(other),
            }
        }
        match kept.len() {
            0 => Expr::Const(true),
            1 => kept.pop().unwrap(),
            _ => Expr::And(kept),
        }
    }

    fn or(parts: Vec<Expr>) -> Expr {
        let mut kept = Vec::new();
        for p in parts {
            match p {
                Expr::Const(false) => {}
                Expr::Const(true) => return Expr::Const(true),
                other => kept.push(other),
            }
        }
        match kept.len() {
            0 => Expr::Const(false),
            1 => kept.pop().unwrap(),
            _ => Expr::Or(kept),
        }
    }

    /// Kleene evaluation: `None` while undetermined.
    fn eval(&self, values: &[Option<bool>]) -> Option<bool> {
        match self {
            Expr::Const(b) => Some(*b),
            Expr::Atom(a) => values[*a as usize],
            Expr::Not(inner) => inner.eval(values).map(|b| !b),
            Expr::And(parts) => {
                let mut open = false;
                for p in parts {
                    match p.eval(values) {
                        Some(false) => return Some(false),
                        None => open = true,
                        Some(true) => {}
                    }
                }
                if open {
                    None
                } else {
                    Some(true)
                }
            }
            Expr::Or(parts) => {
                let mut open = false;
                for p in parts {
                    match p.eval(values) {
                        Some(true) => return Some(true),
                        None => open = true,
                        Some(false) => {}
                    }
                }
                if open {
                    None
                } else {
                    Some(false)
                }
            }
            Expr::AtMostOne(atoms) => {
                let mut yes = 0;
                let mut open = 0;
                for &a in atoms {
                    match values[a as usize] {
                        Some(true) => yes += 1,
                        None => open += 1,
                        Some(false) => {}
                    }
                }
                if yes > 1 {
                    Some(false)
                } else if yes + open <= 1 {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    fn atoms(&self, out: &mut Vec<u32>) {
        match self {
            Expr::Const(_) => {}
            Expr::Atom(a) => out.push(*a),
            Expr::Not(inner) => inner.atoms(out),
            Expr::And(parts) | Expr::Or(parts) => parts.iter().for_each(|p| p.atoms(out)),
            Expr::AtMostOne(atoms) => out.extend_from_slice(atoms),
        }
    }
}

struct Csp {
    constraints: Vec<Expr>,
    atoms_of: Vec<Vec<u32>>,
    watchers: Vec<Vec<u32>>,
    values: Vec<Option<bool>>,
    trail: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Csp {
    fn new(constraints: Vec<Expr>, atom_count: usize, budget: u64) -> Self {
        let mut watchers = vec![Vec::new(); atom_count];
        let atoms_of: Vec<Vec<u32>> = constraints
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut atoms = Vec::new();
                c.atoms(&mut atoms);
                atoms.sort_unstable();
                atoms.dedup();
                for &a in &atoms {
                    watchers[a as usize].push(i as u32);
                }
                atoms
            })
            .collect();
        Csp { constraints, atoms_of, watchers, values: vec![None; atom_count], trail: Vec::new(), nodes: 0, budget }
    }

    fn assign(&mut self, atom: u32, value: bool) {
        self.values[atom as usize] = Some(value);
        self.trail.push(atom);
    }

    fn undo(&mut self, mark: usize) {
        for &a in &self.trail[mark..] {
            self.values[a as usize] = None;
        }
        self.trail.truncate(mark);
    }

    /// Refutes the constraint or forces its last open atom. `false` on conflict.
    fn examine(&mut self, c: usize) -> bool {
        match self.constraints[c].eval(&self.values) {
            Some(true) => true,
            Some(false) => false,
            None => {
                let mut open = self.atoms_of[c].iter().filter(|&&a| self.values[a as usize].is_none());
                let (Some(&atom), None) = (open.next(), open.next()) else {
                    return true;
                };
                self.values[atom as usize] = Some(false);
                let if_false = self.constraints[c].eval(&self.values);
                self.values[atom as usize] = Some(true);
                let if_true = self.constraints[c].eval(&self.values);
                self.values[atom as usize] = None;
                match (if_false, if_true) {
                    (Some(false), Some(false)) => false,
                    (Some(false), _) => {
                        self.assign(atom, true);
                        true
                    }
                    (_, Some(false)) => {
                        self.assign(atom, false);
                        true
                    }
                    _ => true,
                }
            }
        }
    }

    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let atom = self.trail[head] as usize;
            head += 1;
            for k in 0..self.watchers[atom].len() {
                let c = self.watchers[atom][k] as usize;
                if !self.examine(c) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool, OracleError> {
        for c in 0..self.constraints.len() {
            if !self.examine(c) {
                return Ok(false);
            }
        }
        if !self.propagate(0) {
            return Ok(false);
        }
        self.search(0)
    }

    fn search(&mut self, from: usize) -> Result<bool, OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::Budget(self.budget));
        }
        let mut c = from;
        loop {
            if c == self.constraints.len() {
                return Ok(true);
            }
            match self.constraints[c].eval(&self.values) {
                Some(true) => c += 1,
                Some(false) => return Ok(false),
                None => break,
            }
        }
        let atom = *self.atoms_of[c]
            .iter()
            .find(|&&a| self.values[a as usize].is_none())
            .expect("undetermined constraint without open atoms");
        for value in [false, true] {
            let mark = self.trail.len();
            self.assign(atom, value);
            if self.propagate(mark) && self.search(c)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{parse_kb, Assertion, Signature};
    use crate::translate::compute_horizon;

    fn opts() -> OracleOptions {
        OracleOptions { limits: OracleLimits::widened(), ..Default::default() }
    }

    #[test]
    fn bottom_assertion_is_inconsistent() {
        let kb = parse_kb("concept A\ntbox:\nA <= Bot\nabox:\nA(a)@0\n").unwrap();
        let out = oracle_enumerate(&kb, 1, &compute_horizon(&kb), &OracleOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn persistence_against_negation() {
        let kb = parse_kb("concept A\ntbox:\nA <= G A\nabox:\nA(a)@0\n-A(a)@2\n").unwrap();
        let out = oracle_enumerate(&kb, 1, &compute_horizon(&kb), &OracleOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Inconsistent);
        let relaxed = kb.with_abox(vec![Assertion::concept("A", "a", 0), Assertion::concept("A", "a", 2)]);
        let out = oracle_enumerate(&relaxed, 1, &compute_horizon(&relaxed), &OracleOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Consistent);
        assert!(out.model.unwrap().satisfies(&relaxed, &OracleOptions::default()));
    }

    #[test]
    fn example_first_abox_is_inconsistent() {
        let kb = parse_kb(crate::EXAMPLE_KB).unwrap();
        let a1: Vec<Assertion> = kb.abox[..5].to_vec();
        let mut sub = kb.with_abox(a1);
        sub.signature.individuals = ["John".into()].into_iter().collect();
        let out = oracle_enumerate(&sub, 2, &compute_horizon(&sub), &opts()).unwrap();
        assert_eq!(out.verdict, Verdict::Inconsistent);
    }

    #[test]
    fn model_is_checked_independently() {
        let kb = parse_kb(crate::EXAMPLE_KB).unwrap();
        let repaired: Vec<Assertion> = kb
            .abox
            .iter()
            .filter(|a| !["Adult(John)@2", "hasMother(John,Ana)@0", "hasMother(John,Eva)@1"].contains(&alloc::format!("{a}").as_str()))
            .cloned()
            .collect();
        let sub = kb.with_abox(repaired);
        let out = oracle_enumerate(&sub, 5, &compute_horizon(&sub), &opts()).unwrap();
        assert_eq!(out.verdict, Verdict::Consistent);
        assert!(out.model.unwrap().satisfies(&sub, &opts()));
    }

    #[test]
    fn limits_are_enforced() {
        let kb = parse_kb("concept A\ntbox:\nabox:\nA(a)@9\n").unwrap();
        let err = oracle_enumerate(&kb, 1, &Horizon::new(0, 9, 0), &OracleOptions::default()).unwrap_err();
        assert!(matches!(err, OracleError::LimitExceeded { what: "window width", .. }));
        let err = oracle_enumerate(&kb, 0, &Horizon::new(9, 9, 0), &OracleOptions::default()).unwrap_err();
        assert_eq!(err, OracleError::DomainTooSmall { size: 0, named: 1 });
        let mut sig = Signature::default();
        for c in ["A", "B", "C", "D", "E"] {
            sig.declare_concept(c, false);
        }
        let wide = TemporalKb::new(sig, vec![], vec![]);
        assert!(oracle_enumerate(&wide, 1, &Horizon::new(0, 0, 0), &OracleOptions::default()).is_err());
    }

    #[test]
    fn semantic_rigidity_is_stricter_backwards() {
        // A rigid concept asserted late must also hold early.
        let kb = parse_kb("concept A rigid\ntbox:\nabox:\n-A(a)@0\nA(a)@1\n").unwrap();
        let h = compute_horizon(&kb);
        let forward = oracle_enumerate(&kb, 1, &h, &OracleOptions::default()).unwrap();
        assert_eq!(forward.verdict, Verdict::Consistent);
        let semantic = OracleOptions { semantic_rigidity: true, ..Default::default() };
        assert_eq!(oracle_enumerate(&kb, 1, &h, &semantic).unwrap().verdict, Verdict::Inconsistent);
    }
}
