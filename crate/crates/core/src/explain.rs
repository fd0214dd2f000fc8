//! Minimal conflict sets and the inconsistency graph.
//!
//! A conflict set is a minimal inconsistent subset (MUS) of the ABox: the set
//! itself is inconsistent with the TBox and dropping any one member makes it
//! consistent. MUSes are enumerated with a map solver over "which assertions
//! are in": every MUS found blocks its supersets and every maximal
//! consistent subset found blocks its subsets, until the map is exhausted.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::kb::{Assertion, DlDisplay, TemporalKb};
use crate::reasoner::{
    ground_to_propositional_tracked, AxiomRef, ConsistencyCache, Domain, ReasonerError, ReasonerOptions, Verdict,
};
use crate::sat::{Lit, SatOptions, SolveResult, Solver};
use crate::translate::{translate_kb_over, Horizon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplainOptions {
    /// Stop after this many conflict sets.
    pub mus_budget: usize,
    /// Stop after this many consistent subsets have been explored.
    pub mss_budget: usize,
    /// Attach the violated TBox axioms to every conflict set.
    pub labels: bool,
}

impl Default for ExplainOptions {
    fn default() -> Self {
        ExplainOptions { mus_budget: 256, mss_budget: 256, labels: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("the seed set is consistent, so it contains no conflict")]
    SeedConsistent,
}

/// A minimal inconsistent set of assertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictSet {
    /// Members in chronological order.
    pub assertions: Vec<Assertion>,
    /// Positions of the members in the ABox they were drawn from.
    pub indices: Vec<usize>,
    /// The TBox axioms the conflict violates (empty when labels are off).
    pub label: String,
}

impl ConflictSet {
    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.assertions.contains(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MusEnumeration {
    pub muses: Vec<ConflictSet>,
    /// True when every conflict set has been found.
    pub complete: bool,
    /// Consistency checks issued.
    pub checks: u64,
}

fn chronological(kb: &TemporalKb, indices: &mut [usize]) {
    indices.sort_by(|&a, &b| kb.abox[a].chronological_cmp(&kb.abox[b]).then(a.cmp(&b)));
}

/// Deletion-based minimisation of an inconsistent set of ABox positions.
///
/// Members are tried in chronological order and dropped while the rest stays
/// inconsistent; passes repeat until none can be dropped.
pub fn shrink_indices(cache: &mut ConsistencyCache<'_>, seed: &[usize]) -> Result<Vec<usize>, ExplainError> {
    let kb = cache.kb();
    let outcome = cache.check_detailed(seed)?;
    if outcome.verdict == Verdict::Consistent {
        return Err(ExplainError::SeedConsistent);
    }
    let mut current: Vec<usize> = seed.to_vec();
    let mut core = outcome.core;
    while core.len() < current.len() {
        let next = cache.check_detailed(&core)?;
        if next.verdict == Verdict::Consistent {
            break;
        }
        current = core;
        core = next.core;
    }
    chronological(kb, &mut current);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < current.len() {
            let mut without = current.clone();
            without.remove(i);
            let out = cache.check_detailed(&without)?;
            if out.verdict == Verdict::Inconsistent {
                current = without;
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(current)
}

/// Shrinks `seed` (assertions of `kb`'s ABox or extra ones) to a conflict set.
pub fn shrink_mus(kb: &TemporalKb, seed: &[Assertion]) -> Result<ConflictSet, ExplainError> {
    shrink_mus_with(kb, seed, &ReasonerOptions::default())
}

pub fn shrink_mus_with(kb: &TemporalKb, seed: &[Assertion], options: &ReasonerOptions) -> Result<ConflictSet, ExplainError> {
    let sub = kb.with_abox(seed.to_vec());
    let mut cache = ConsistencyCache::new(&sub, *options);
    let all: Vec<usize> = (0..seed.len()).collect();
    let indices = shrink_indices(&mut cache, &all)?;
    let label = label_conflict(&sub, &indices, options)?;
    Ok(ConflictSet { assertions: indices.iter().map(|&i| seed[i].clone()).collect(), indices, label })
}

/// Enumerates the conflict sets of `kb`'s ABox.
pub fn enumerate_muses(kb: &TemporalKb, options: &ExplainOptions) -> Result<MusEnumeration, ExplainError> {
    enumerate_muses_with(kb, options, &ReasonerOptions::default())
}

pub fn enumerate_muses_with(
    kb: &TemporalKb,
    options: &ExplainOptions,
    reasoner: &ReasonerOptions,
) -> Result<MusEnumeration, ExplainError> {
    let mut cache = ConsistencyCache::new(kb, *reasoner);
    let all: Vec<usize> = (0..kb.abox.len()).collect();
    enumerate_in(&mut cache, &all, options)
}

/// Enumerates the conflict sets among the ABox positions `active`.
pub fn enumerate_in(
    cache: &mut ConsistencyCache<'_>,
    active: &[usize],
    options: &ExplainOptions,
) -> Result<MusEnumeration, ExplainError> {
    let kb = cache.kb();
    let start_checks = cache.checks();
    let mut order: Vec<usize> = active.to_vec();
    chronological(kb, &mut order);
    let n = order.len();
    let mut map = Solver::new(SatOptions { conflict_budget: None, default_phase: true });
    let vars: Vec<Lit> = (0..n).map(|_| map.new_var().positive()).collect();
    let position = |abox_index: usize| order.iter().position(|&x| x == abox_index);

    let mut muses: Vec<Vec<usize>> = Vec::new();
    let mut explored_mss = 0usize;
    let mut complete = false;
    loop {
        if muses.len() >= options.mus_budget || explored_mss >= options.mss_budget {
            break;
        }
        if map.solve().expect("map solver runs without a budget") == SolveResult::Unsat {
            complete = true;
            break;
        }
        let seed: Vec<usize> = (0..n).filter(|&k| map.model_value(vars[k].var())).map(|k| order[k]).collect();
        let outcome = cache.check_detailed(&seed)?;
        if outcome.verdict == Verdict::Inconsistent {
            let mus = shrink_indices(cache, &seed)?;
            let block: Vec<Lit> = mus.iter().map(|&i| !vars[position(i).unwrap()]).collect();
            map.add_clause(&block);
            muses.push(mus);
        } else {
            let mss = grow(cache, &order, seed, &outcome.satisfied);
            explored_mss += 1;
            let inside: BTreeSet<usize> = mss.into_iter().collect();
            let block: Vec<Lit> = (0..n).filter(|&k| !inside.contains(&order[k])).map(|k| vars[k]).collect();
            map.add_clause(&block);
        }
    }
    log::debug!("{} conflict sets, {} consistent subsets explored, complete: {complete}", muses.len(), explored_mss);

    let mut sets = Vec::with_capacity(muses.len());
    for indices in muses {
        let label = if options.labels { label_conflict(kb, &indices, cache.options())? } else { String::new() };
        sets.push(ConflictSet { assertions: indices.iter().map(|&i| kb.abox[i].clone()).collect(), indices, label });
    }
    Ok(MusEnumeration { muses: sets, complete, checks: cache.checks() - start_checks })
}

/// Extends a consistent `seed` by every assertion of `order` that its model
/// already satisfies within the seed's window. The result is consistent but
/// not necessarily maximal.
fn grow(cache: &ConsistencyCache<'_>, order: &[usize], seed: Vec<usize>, satisfied: &[usize]) -> Vec<usize> {
    let kb = cache.kb();
    let window = cache.horizon_of(&seed);
    let mut current: BTreeSet<usize> = seed.into_iter().collect();
    let candidates: BTreeSet<usize> = order.iter().copied().collect();
    for &i in satisfied {
        if candidates.contains(&i) && (window.start..=window.last).contains(&kb.abox[i].time) {
            current.insert(i);
        }
    }
    current.into_iter().collect()
}

/// Names the TBox axioms responsible for the conflict among `indices`:
/// the violated inclusions and functionality axioms, followed by the
/// persistence steps they rely on.
pub fn label_conflict(kb: &TemporalKb, indices: &[usize], options: &ReasonerOptions) -> Result<String, ReasonerError> {
    let abox: Vec<Assertion> = indices.iter().map(|&i| kb.abox[i].clone()).collect();
    let horizon = Horizon::for_abox(&abox, kb.temporal_depth());
    let sub = kb.with_abox(abox);
    let gkb = translate_kb_over(&sub, &horizon, options.translate())?;
    let domain = Domain::for_kb(kb, options);
    let clauses = ground_to_propositional_tracked(&gkb, &domain);
    let mut solver = clauses.to_solver(SatOptions { conflict_budget: options.conflict_budget, ..Default::default() });

    let mut active: Vec<usize> = (0..clauses.axiom_selectors.len()).collect();
    let assume = |active: &[usize]| {
        let mut a = clauses.selectors.clone();
        a.extend(active.iter().map(|&k| clauses.axiom_selectors[k].1));
        a
    };
    if solver.solve_with(&assume(&active))? == SolveResult::Sat {
        return Ok(String::from("no TBox axiom violated"));
    }
    let failed: BTreeSet<Lit> = solver.failed_assumptions().iter().copied().collect();
    active.retain(|&k| failed.contains(&clauses.axiom_selectors[k].1));
    let mut necessary: Vec<usize> = Vec::new();
    while let Some(k) = active.pop() {
        let mut trial = necessary.clone();
        trial.extend_from_slice(&active);
        if solver.solve_with(&assume(&trial))? == SolveResult::Unsat {
            let failed: BTreeSet<Lit> = solver.failed_assumptions().iter().copied().collect();
            active.retain(|&k| failed.contains(&clauses.axiom_selectors[k].1));
        } else {
            necessary.push(k);
        }
    }
    necessary.sort_unstable();
    let active = necessary;
    let axioms: Vec<&AxiomRef> = active.iter().map(|&k| &clauses.axiom_selectors[k].0).collect();
    if axioms.is_empty() {
        return Ok(String::from("complementary assertions"));
    }
    let mut primary = Vec::new();
    let mut chain = Vec::new();
    for axiom in axioms {
        match axiom {
            AxiomRef::Gci { source, time } => {
                let gci = &gkb.sources[*source];
                let text = alloc::format!("{} @{time}", DlDisplay(gci));
                let persistence = matches!(&gci.rhs, crate::kb::Concept::Always(inner) if **inner == gci.lhs);
                if persistence {
                    chain.push(text);
                } else {
                    primary.push(text);
                }
            }
            AxiomRef::Functional { role, inverse, time } => {
                primary.push(alloc::format!("funct({role}{}) @{time}", if *inverse { "⁻" } else { "" }));
            }
            AxiomRef::RoleInclusion { role, from, to } => chain.push(alloc::format!("rigid {role} @{from}→@{to}")),
        }
    }
    let mut label = if primary.is_empty() { chain.join("; ") } else { primary.join("; ") };
    if !primary.is_empty() && !chain.is_empty() {
        label.push_str(" via ");
        label.push_str(&chain.join(", "));
    }
    Ok(label)
}

/// A conflict among graph vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    /// Vertex positions, ascending.
    pub members: Vec<usize>,
    pub label: String,
}

impl Hyperedge {
    pub fn is_self_loop(&self) -> bool {
        self.members.len() == 1
    }
}

/// Vertices are the assertions occurring in some conflict set; each
/// conflict set becomes one (hyper)edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InconsistencyGraph {
    /// Sorted by symbol, arguments, timestamp.
    pub vertices: Vec<Assertion>,
    pub edges: Vec<Hyperedge>,
    /// Inconsistency degree: incident edges per vertex.
    pub degree: Vec<usize>,
}

impl InconsistencyGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, a: &Assertion) -> Option<usize> {
        self.vertices.binary_search(a).ok()
    }

    pub fn degree_of(&self, a: &Assertion) -> usize {
        self.vertex(a).map_or(0, |v| self.degree[v])
    }
}

pub fn build_graph(muses: &[ConflictSet]) -> InconsistencyGraph {
    let vertices: Vec<Assertion> = muses
        .iter()
        .flat_map(|m| m.assertions.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut degree = vec![0; vertices.len()];
    let edges = muses
        .iter()
        .map(|m| {
            let mut members: Vec<usize> = m.assertions.iter().map(|a| vertices.binary_search(a).unwrap()).collect();
            members.sort_unstable();
            members.dedup();
            for &v in &members {
                degree[v] += 1;
            }
            Hyperedge { members, label: m.label.to_string() }
        })
        .collect();
    InconsistencyGraph { vertices, edges, degree }
}
