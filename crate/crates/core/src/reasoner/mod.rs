//! Consistency checking for grounded KBs over a bounded domain.
//!
//! A [`GroundKb`] is compiled into clauses over atoms `A@i(d)` and
//! `R@i(d, e)` for the elements `d, e` of a finite [`Domain`], with one
//! selector literal per ABox assertion so that assertions can be toggled
//! without re-grounding. The clause set is decided by [`crate::sat::Solver`].

mod encode;
pub mod oracle;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use encode::{ground_to_propositional, ground_to_propositional_tracked, AxiomRef, ClauseSet};
pub use oracle::{oracle_enumerate, OracleError, OracleLimits, OracleOptions, OracleOutcome, TemporalModel};

use crate::kb::{Assertion, TemporalKb};
use crate::sat::{BudgetExceeded, Lit, SatOptions, SatStats, SolveResult, Solver};
use crate::translate::{translate_kb_over, GroundKb, Horizon, TranslateError, TranslateOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReasonerOptions {
    pub strict_future: bool,
    /// Copies of the witness element per existential role direction.
    pub witness_depth: u32,
    /// Conflicts allowed per satisfiability call.
    pub conflict_budget: Option<u64>,
}

impl Default for ReasonerOptions {
    fn default() -> Self {
        ReasonerOptions { strict_future: false, witness_depth: 1, conflict_budget: None }
    }
}

impl ReasonerOptions {
    pub fn translate(&self) -> TranslateOptions {
        TranslateOptions { strict_future: self.strict_future }
    }

    fn sat(&self) -> SatOptions {
        SatOptions { conflict_budget: self.conflict_budget, ..SatOptions::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl Verdict {
    pub fn is_consistent(self) -> bool {
        self == Verdict::Consistent
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("assertion index {0} is not part of the ABox")]
    UnknownAssertion(usize),
}

/// A domain element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Named(String),
    /// Fresh successor for `exists R` (or `exists R^-`).
    Witness { role: String, inverse: bool, copy: u32 },
    Anonymous(u32),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Named(name) => f.write_str(name),
            Element::Witness { role, inverse, copy } => {
                write!(f, "w({role}{})", if *inverse { "^-" } else { "" })?;
                if *copy > 0 {
                    write!(f, "#{copy}")?;
                }
                Ok(())
            }
            Element::Anonymous(i) => write!(f, "_{i}"),
        }
    }
}

/// Named individuals (pairwise distinct) followed by anonymous elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    elements: Vec<Element>,
    named: BTreeMap<String, u32>,
}

impl Domain {
    /// `individuals` plus `witness_depth` witnesses per role direction.
    /// Falls back to a single anonymous element when that would be empty.
    pub fn new<I, S>(individuals: I, witness_roles: &BTreeSet<(String, bool)>, witness_depth: u32) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: BTreeSet<String> = individuals.into_iter().map(Into::into).collect();
        let mut elements: Vec<Element> = names.into_iter().map(Element::Named).collect();
        for copy in 0..witness_depth {
            for (role, inverse) in witness_roles {
                elements.push(Element::Witness { role: role.clone(), inverse: *inverse, copy });
            }
        }
        if elements.is_empty() {
            elements.push(Element::Anonymous(0));
        }
        Self::from_elements(elements)
    }

    /// `individuals` plus `extra` anonymous elements.
    pub fn with_anonymous<I, S>(individuals: I, extra: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: BTreeSet<String> = individuals.into_iter().map(Into::into).collect();
        let mut elements: Vec<Element> = names.into_iter().map(Element::Named).collect();
        elements.extend((0..extra as u32).map(Element::Anonymous));
        Self::from_elements(elements)
    }

    fn from_elements(elements: Vec<Element>) -> Self {
        let named = elements
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Element::Named(n) => Some((n.clone(), i as u32)),
                _ => None,
            })
            .collect();
        Domain { elements, named }
    }

    /// The domain used for every consistency check on `kb`: all individuals
    /// of the signature and the ABox, plus witnesses for the existential
    /// roles of the TBox.
    pub fn for_kb(kb: &TemporalKb, options: &ReasonerOptions) -> Self {
        let horizon = Horizon::new(0, 0, kb.temporal_depth());
        let tbox = crate::translate::translate_tbox(kb, &horizon, options.translate());
        let probe = GroundKb {
            gcis: tbox.gcis,
            role_inclusions: Vec::new(),
            functionality: Vec::new(),
            abox: Vec::new(),
            horizon,
            sources: Vec::new(),
        };
        Domain::new(kb_individuals(kb), &probe.existential_roles(), options.witness_depth)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn named_count(&self) -> usize {
        self.named.len()
    }

    pub fn index_of(&self, individual: &str) -> Option<usize> {
        self.named.get(individual).map(|&i| i as usize)
    }
}

fn kb_individuals(kb: &TemporalKb) -> BTreeSet<String> {
    let mut out = kb.signature.individuals.clone();
    for a in &kb.abox {
        for i in a.individuals() {
            out.insert(i.into());
        }
    }
    out
}

/// Problem size and search effort of a check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReasonerStats {
    pub variables: u64,
    pub clauses: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

impl ReasonerStats {
    fn record(&mut self, solver: &Solver, before: SatStats) {
        let after = solver.stats();
        self.decisions += after.decisions - before.decisions;
        self.propagations += after.propagations - before.propagations;
        self.conflicts += after.conflicts - before.conflicts;
    }

    pub fn absorb(&mut self, other: &ReasonerStats) {
        self.variables = self.variables.max(other.variables);
        self.clauses = self.clauses.max(other.clauses);
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.conflicts += other.conflicts;
    }
}

/// Decides `gkb` with only the ABox entries flagged in `enabled` switched on.
pub fn check_sat(
    gkb: &GroundKb,
    domain: &Domain,
    enabled: &[bool],
    options: &ReasonerOptions,
) -> Result<(Verdict, ReasonerStats), ReasonerError> {
    let clauses = ground_to_propositional(gkb, domain);
    let mut solver = clauses.to_solver(options.sat());
    let assumptions: Vec<Lit> = clauses
        .selectors
        .iter()
        .zip(enabled.iter().chain(core::iter::repeat(&false)))
        .map(|(&s, &on)| if on { s } else { !s })
        .collect();
    let mut stats = ReasonerStats { variables: clauses.num_vars as u64, clauses: clauses.clauses.len() as u64, ..Default::default() };
    let before = solver.stats();
    let result = solver.solve_with(&assumptions)?;
    stats.record(&solver, before);
    Ok((verdict_of(result), stats))
}

fn verdict_of(result: SolveResult) -> Verdict {
    match result {
        SolveResult::Sat => Verdict::Consistent,
        SolveResult::Unsat => Verdict::Inconsistent,
    }
}

/// Is `(T, abox_subset)` consistent? The window is recomputed from the subset;
/// the domain comprises every individual of `kb`.
pub fn check_consistency(kb: &TemporalKb, abox_subset: &[Assertion]) -> Result<Verdict, ReasonerError> {
    check_consistency_with(kb, abox_subset, &ReasonerOptions::default()).map(|(v, _)| v)
}

pub fn check_consistency_with(
    kb: &TemporalKb,
    abox_subset: &[Assertion],
    options: &ReasonerOptions,
) -> Result<(Verdict, ReasonerStats), ReasonerError> {
    let sub = kb.with_abox(abox_subset.to_vec());
    let horizon = Horizon::for_abox(abox_subset, kb.temporal_depth());
    let gkb = translate_kb_over(&sub, &horizon, options.translate())?;
    let mut domain = Domain::for_kb(kb, options);
    if abox_subset.iter().flat_map(|a| a.individuals()).any(|i| domain.index_of(i).is_none()) {
        domain = Domain::for_kb(&sub, options);
    }
    check_sat(&gkb, &domain, &alloc::vec![true; gkb.abox.len()], options)
}

/// One window's grounding of a whole KB, reusable across ABox subsets.
///
/// Only assertions whose timestamp lies in `[horizon.start, horizon.last]`
/// are grounded; checking a subset enables exactly their selectors.
pub struct GroundChecker {
    solver: Solver,
    horizon: Horizon,
    /// Per KB assertion: selector and asserted literal, if in the window.
    slots: Vec<Option<(Lit, Lit)>>,
    by_selector: BTreeMap<Lit, usize>,
    core: Vec<usize>,
    satisfied: Vec<usize>,
    stats: ReasonerStats,
}

impl GroundChecker {
    pub fn new(kb: &TemporalKb, horizon: Horizon, domain: &Domain, options: &ReasonerOptions) -> Result<Self, ReasonerError> {
        let inside: Vec<usize> = (0..kb.abox.len())
            .filter(|&i| (horizon.start..=horizon.last).contains(&kb.abox[i].time))
            .collect();
        let sub = kb.with_abox(inside.iter().map(|&i| kb.abox[i].clone()).collect());
        let gkb = translate_kb_over(&sub, &horizon, options.translate())?;
        let clauses = ground_to_propositional(&gkb, domain);
        let solver = clauses.to_solver(options.sat());
        let mut slots = alloc::vec![None; kb.abox.len()];
        let mut by_selector = BTreeMap::new();
        for (k, &i) in inside.iter().enumerate() {
            slots[i] = Some((clauses.selectors[k], clauses.assertion_lits[k]));
            by_selector.insert(clauses.selectors[k], i);
        }
        let stats = ReasonerStats {
            variables: clauses.num_vars as u64,
            clauses: clauses.clauses.len() as u64,
            ..Default::default()
        };
        Ok(GroundChecker { solver, horizon, slots, by_selector, core: Vec::new(), satisfied: Vec::new(), stats })
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    /// Checks the assertions with the given KB indices (all inside the window).
    pub fn check(&mut self, enabled: &[usize]) -> Result<Verdict, ReasonerError> {
        let mut on = alloc::vec![false; self.slots.len()];
        for &i in enabled {
            if self.slots.get(i).copied().flatten().is_none() {
                return Err(ReasonerError::UnknownAssertion(i));
            }
            on[i] = true;
        }
        let assumptions: Vec<Lit> = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|(s, _)| if on[i] { s } else { !s }))
            .collect();
        let before = self.solver.stats();
        let result = self.solver.solve_with(&assumptions);
        self.stats.record(&self.solver, before);
        let result = result?;
        self.core.clear();
        self.satisfied.clear();
        match result {
            SolveResult::Unsat => {
                self.core = self
                    .solver
                    .failed_assumptions()
                    .iter()
                    .filter_map(|l| self.by_selector.get(l).copied())
                    .collect();
                self.core.sort_unstable();
            }
            SolveResult::Sat => {
                for (i, slot) in self.slots.iter().enumerate() {
                    if let Some((_, lit)) = slot {
                        if self.solver.model_value(lit.var()) != lit.is_negated() {
                            self.satisfied.push(i);
                        }
                    }
                }
            }
        }
        Ok(verdict_of(result))
    }

    /// After an inconsistent check: enabled assertions that already conflict.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// After a consistent check: in-window assertions true in the model found.
    pub fn satisfied(&self) -> &[usize] {
        &self.satisfied
    }

    pub fn stats(&self) -> ReasonerStats {
        self.stats
    }
}

/// Outcome of a cached check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// Inconsistent: a conflicting subset of the checked assertions.
    pub core: Vec<usize>,
    /// Consistent: assertions of the KB that hold in the model found.
    pub satisfied: Vec<usize>,
}

/// [`check_consistency`] on subsets of one KB's ABox, memoising one
/// [`GroundChecker`] per window.
pub struct ConsistencyCache<'a> {
    kb: &'a TemporalKb,
    options: ReasonerOptions,
    domain: Domain,
    depth: u32,
    checkers: Vec<(GroundChecker, u64)>,
    capacity: usize,
    clock: u64,
    checks: u64,
    retired: ReasonerStats,
}

impl<'a> ConsistencyCache<'a> {
    pub fn new(kb: &'a TemporalKb, options: ReasonerOptions) -> Self {
        ConsistencyCache {
            kb,
            options,
            domain: Domain::for_kb(kb, &options),
            depth: kb.temporal_depth(),
            checkers: Vec::new(),
            capacity: 16,
            clock: 0,
            checks: 0,
            retired: ReasonerStats::default(),
        }
    }

    pub fn kb(&self) -> &'a TemporalKb {
        self.kb
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn options(&self) -> &ReasonerOptions {
        &self.options
    }

    /// Number of satisfiability calls issued so far.
    pub fn checks(&self) -> u64 {
        self.checks
    }

    pub fn stats(&self) -> ReasonerStats {
        let mut total = self.retired;
        for (c, _) in &self.checkers {
            total.absorb(&c.stats());
        }
        total
    }

    pub fn horizon_of(&self, subset: &[usize]) -> Horizon {
        let times = subset.iter().map(|&i| self.kb.abox[i].time);
        let start = times.clone().min().unwrap_or(0);
        let last = times.max().unwrap_or(0);
        Horizon::new(start, last, self.depth)
    }

    pub fn check(&mut self, subset: &[usize]) -> Result<Verdict, ReasonerError> {
        self.check_detailed(subset).map(|o| o.verdict)
    }

    pub fn check_detailed(&mut self, subset: &[usize]) -> Result<CheckOutcome, ReasonerError> {
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.kb.abox.len()) {
            return Err(ReasonerError::UnknownAssertion(bad));
        }
        let horizon = self.horizon_of(subset);
        self.clock += 1;
        self.checks += 1;
        let slot = match self.checkers.iter().position(|(c, _)| c.horizon() == horizon) {
            Some(i) => i,
            None => {
                if self.checkers.len() >= self.capacity {
                    let oldest = (0..self.checkers.len()).min_by_key(|&i| self.checkers[i].1).unwrap();
                    let (gone, _) = self.checkers.swap_remove(oldest);
                    self.retired.absorb(&gone.stats());
                }
                let checker = GroundChecker::new(self.kb, horizon, &self.domain, &self.options)?;
                self.checkers.push((checker, self.clock));
                self.checkers.len() - 1
            }
        };
        self.checkers[slot].1 = self.clock;
        let checker = &mut self.checkers[slot].0;
        let verdict = checker.check(subset)?;
        Ok(CheckOutcome { verdict, core: checker.core().to_vec(), satisfied: checker.satisfied().to_vec() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;
    use crate::translate::translate_kb;

    fn example() -> TemporalKb {
        parse_kb(crate::EXAMPLE_KB).unwrap()
    }

    fn subset(kb: &TemporalKb, names: &[&str]) -> Vec<Assertion> {
        kb.abox.iter().filter(|a| names.contains(&alloc::format!("{a}").as_str())).cloned().collect()
    }

    #[test]
    fn example_is_inconsistent() {
        let kb = example();
        assert_eq!(check_consistency(&kb, &kb.abox).unwrap(), Verdict::Inconsistent);
        let gkb = translate_kb(&kb, TranslateOptions::default()).unwrap();
        let domain = Domain::for_kb(&kb, &ReasonerOptions::default());
        let all = alloc::vec![true; gkb.abox.len()];
        let (v, stats) = check_sat(&gkb, &domain, &all, &ReasonerOptions::default()).unwrap();
        assert_eq!(v, Verdict::Inconsistent);
        assert!(stats.variables > 0);
    }

    #[test]
    fn example_repairs_are_consistent() {
        let kb = example();
        let a1 = subset(&kb, &["Person(John)@0", "Minor(John)@1", "Minor(John)@3", "Minor(John)@4"]);
        assert_eq!(check_consistency(&kb, &a1).unwrap(), Verdict::Consistent);
        let maria = subset(&kb, &["hasMother(John,Maria)@2"]);
        assert_eq!(check_consistency(&kb, &maria).unwrap(), Verdict::Consistent);
        assert_eq!(check_consistency(&kb, &[]).unwrap(), Verdict::Consistent);
        let a2 = subset(&kb, &["hasMother(John,Ana)@0", "hasMother(John,Eva)@1", "hasMother(John,Maria)@2"]);
        assert_eq!(check_consistency(&kb, &a2).unwrap(), Verdict::Inconsistent);
    }

    #[test]
    fn domain_layout() {
        let kb = example();
        let d = Domain::for_kb(&kb, &ReasonerOptions::default());
        let names: Vec<_> = d.elements().iter().map(|e| alloc::format!("{e}")).collect();
        assert_eq!(names, ["Ana", "Eva", "John", "Maria", "w(hasMother)"]);
        assert_eq!(d.index_of("John"), Some(2));
        let empty = Domain::new(Vec::<String>::new(), &BTreeSet::new(), 1);
        assert_eq!(empty.elements(), &[Element::Anonymous(0)]);
    }

    #[test]
    fn cache_matches_direct_checks() {
        let kb = example();
        let mut cache = ConsistencyCache::new(&kb, ReasonerOptions::default());
        let n = kb.abox.len();
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let direct: Vec<Assertion> = idx.iter().map(|&i| kb.abox[i].clone()).collect();
            assert_eq!(cache.check(&idx).unwrap(), check_consistency(&kb, &direct).unwrap(), "mask {mask:b}");
        }
    }

    #[test]
    fn core_is_a_conflicting_subset() {
        let kb = example();
        let mut cache = ConsistencyCache::new(&kb, ReasonerOptions::default());
        let all: Vec<usize> = (0..kb.abox.len()).collect();
        let out = cache.check_detailed(&all).unwrap();
        assert_eq!(out.verdict, Verdict::Inconsistent);
        assert!(!out.core.is_empty());
        assert_eq!(cache.check(&out.core).unwrap(), Verdict::Inconsistent);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let kb = example();
        let options = ReasonerOptions { conflict_budget: Some(0), ..Default::default() };
        match check_consistency_with(&kb, &kb.abox, &options) {
            Err(ReasonerError::Budget(_)) | Ok((Verdict::Inconsistent, _)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
