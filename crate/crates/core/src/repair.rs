//! Best temporal repair: remove a greedy cover of the inconsistency graph,
//! then put back whatever can be put back.
//!
//! The cover repeatedly takes the vertex of highest current inconsistency
//! degree. Ties go to the lowest temporal weight `w_t`, which is `t + σ` for
//! assertions about rigid concepts and global roles and `t` otherwise, then
//! to the lexically smallest assertion (or a seeded random pick).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::explain::{build_graph, enumerate_in, ExplainError, ExplainOptions, InconsistencyGraph};
use crate::kb::{Assertion, TemporalKb};
use crate::reasoner::{check_consistency_with, ConsistencyCache, ReasonerError, ReasonerOptions, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairConfig {
    /// Duration `σ` per rigid concept or global role.
    pub sigma: BTreeMap<String, u64>,
    /// `σ` for rigid predicates missing from `sigma`; defaults to the number
    /// of observed time points `n - l + 1`.
    pub default_sigma: Option<u64>,
    pub mus_budget: usize,
    /// Break final ties with a random pick seeded by this value.
    pub tie_seed: Option<u64>,
    pub reasoner: ReasonerOptions,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig {
            sigma: BTreeMap::new(),
            default_sigma: None,
            mus_budget: ExplainOptions::default().mus_budget,
            tie_seed: None,
            reasoner: ReasonerOptions::default(),
        }
    }
}

impl RepairConfig {
    /// The same `σ` for every rigid predicate.
    pub fn uniform(sigma: u64) -> Self {
        RepairConfig { default_sigma: Some(sigma), ..Default::default() }
    }

    /// `σ` applied to `symbol` when it is rigid in `kb`.
    pub fn sigma_for(&self, symbol: &str, kb: &TemporalKb) -> u64 {
        self.sigma.get(symbol).copied().unwrap_or_else(|| self.default_sigma.unwrap_or_else(|| observed_span(kb)))
    }
}

/// `n - l + 1` over the ABox timestamps (1 for an empty ABox).
pub fn observed_span(kb: &TemporalKb) -> u64 {
    let first = kb.abox.iter().map(|a| a.time).min().unwrap_or(0);
    let last = kb.abox.iter().map(|a| a.time).max().unwrap_or(0);
    u64::from(last - first) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("the TBox is unsatisfiable, so no ABox repair exists")]
    TBoxUnsatisfiable,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Explain(#[from] ExplainError),
}

/// `t + σ` for rigid concepts and global roles, `t` otherwise. Negative
/// assertions always weigh `t`.
pub fn temporal_weight(a: &Assertion, config: &RepairConfig, kb: &TemporalKb) -> u64 {
    let t = u64::from(a.time);
    if !a.negated && kb.is_rigid_predicate(a.symbol()) {
        t + config.sigma_for(a.symbol(), kb)
    } else {
        t
    }
}

/// One vertex taken into the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverStep {
    pub vertex: usize,
    /// Current inconsistency degree when taken.
    pub degree: usize,
    pub weight: u64,
    /// Edges that disappeared with it.
    pub edges_covered: usize,
}

/// Greedy hitting set of the graph's (hyper)edges. Self-loop vertices go
/// first; afterwards the highest current degree wins, then the lowest
/// weight, then the vertex order (lexical) or a seeded random pick.
pub fn greedy_cover(graph: &InconsistencyGraph, weights: &[u64], tie_seed: Option<u64>) -> Vec<CoverStep> {
    let mut alive: Vec<bool> = alloc::vec![true; graph.edges.len()];
    let mut taken: BTreeSet<usize> = BTreeSet::new();
    let mut rng = tie_seed.map(ChaCha8Rng::seed_from_u64);
    let mut steps = Vec::new();

    let degrees = |alive: &[bool]| {
        let mut d = alloc::vec![0usize; graph.vertices.len()];
        for (e, edge) in graph.edges.iter().enumerate() {
            if alive[e] {
                for &v in &edge.members {
                    d[v] += 1;
                }
            }
        }
        d
    };
    let mut take = |v: usize, alive: &mut Vec<bool>, degree: usize, steps: &mut Vec<CoverStep>| {
        let mut covered = 0;
        for (e, edge) in graph.edges.iter().enumerate() {
            if alive[e] && edge.members.contains(&v) {
                alive[e] = false;
                covered += 1;
            }
        }
        taken.insert(v);
        steps.push(CoverStep { vertex: v, degree, weight: weights[v], edges_covered: covered });
    };

    let loops: BTreeSet<usize> = graph.edges.iter().filter(|e| e.is_self_loop()).map(|e| e.members[0]).collect();
    for v in loops {
        let d = degrees(&alive)[v];
        take(v, &mut alive, d, &mut steps);
    }
    loop {
        let d = degrees(&alive);
        let Some(&best) = d.iter().max() else { break };
        if best == 0 {
            break;
        }
        let top: Vec<usize> = (0..d.len()).filter(|&v| d[v] == best).collect();
        let light = top.iter().map(|&v| weights[v]).min().unwrap();
        let ties: Vec<usize> = top.into_iter().filter(|&v| weights[v] == light).collect();
        let v = match rng.as_mut() {
            Some(rng) if ties.len() > 1 => ties[rng.random_range(0..ties.len())],
            _ => ties[0],
        };
        take(v, &mut alive, best, &mut steps);
    }
    steps
}

/// Re-adds removed assertions, heaviest first, whenever the result stays
/// consistent; repeats until no removed assertion can be re-added.
/// Returns `(still removed, kept)`.
pub fn restore_maximality(
    kb: &TemporalKb,
    removed: &[Assertion],
    kept: &[Assertion],
    config: &RepairConfig,
) -> Result<(Vec<Assertion>, Vec<Assertion>), RepairError> {
    let index: BTreeMap<&Assertion, usize> = kb.abox.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut extended = kb.clone();
    let mut lookup = |a: &Assertion| match index.get(a) {
        Some(&i) => i,
        None => {
            extended.abox.push(a.clone());
            extended.abox.len() - 1
        }
    };
    let removed_idx: Vec<usize> = removed.iter().map(&mut lookup).collect();
    let kept_idx: Vec<usize> = kept.iter().map(&mut lookup).collect();
    let mut cache = ConsistencyCache::new(&extended, config.reasoner);
    let ((still, mut kept_idx), _) = restore_indices(&mut cache, removed_idx, kept_idx, config)?;
    kept_idx.sort_unstable();
    let abox = &extended.abox;
    Ok((still.iter().map(|&i| abox[i].clone()).collect(), kept_idx.iter().map(|&i| abox[i].clone()).collect()))
}

type Restored = ((Vec<usize>, Vec<usize>), Vec<usize>);

/// Index form of [`restore_maximality`]: `((removed, kept), restored)`.
fn restore_indices(
    cache: &mut ConsistencyCache<'_>,
    removed: Vec<usize>,
    mut kept: Vec<usize>,
    config: &RepairConfig,
) -> Result<Restored, RepairError> {
    let kb = cache.kb();
    let mut pending = removed;
    pending.sort_by(|&a, &b| {
        let (wa, wb) = (temporal_weight(&kb.abox[a], config, kb), temporal_weight(&kb.abox[b], config, kb));
        wb.cmp(&wa).then_with(|| kb.abox[a].cmp(&kb.abox[b]))
    });
    let mut restored = Vec::new();
    loop {
        let mut changed = false;
        let mut still = Vec::new();
        for &i in &pending {
            let mut trial = kept.clone();
            trial.push(i);
            trial.sort_unstable();
            if cache.check(&trial)? == Verdict::Consistent {
                kept = trial;
                restored.push(i);
                changed = true;
            } else {
                still.push(i);
            }
        }
        pending = still;
        if !changed {
            break;
        }
    }
    Ok(((pending, kept), restored))
}

/// A removal, with the numbers that justified it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalStep {
    pub assertion: Assertion,
    /// Inconsistency degree when removed.
    pub degree: usize,
    pub weight: u64,
    pub edges_covered: usize,
    /// Detect-and-repair round (from 1).
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairResult {
    /// Assertions that stay removed, in removal order.
    pub removed: Vec<RemovalStep>,
    /// Removed by the cover but re-added afterwards.
    pub restored: Vec<Assertion>,
    /// The consistent sub-ABox, in original order.
    pub repaired_abox: Vec<Assertion>,
    /// Detect-and-repair rounds.
    pub iterations: usize,
    /// No removed assertion can be re-added.
    pub maximal: bool,
    /// Whether every round enumerated all conflicts.
    pub complete_enumeration: bool,
    /// `σ` used for rigid predicates without an explicit entry.
    pub default_sigma: u64,
    /// Consistency checks issued.
    pub checks: u64,
}

impl RepairResult {
    pub fn removed_assertions(&self) -> Vec<Assertion> {
        self.removed.iter().map(|s| s.assertion.clone()).collect()
    }
}

/// Detect conflicts, remove a greedy cover, repeat until consistent, then
/// restore maximality.
pub fn repair(kb: &TemporalKb, config: &RepairConfig) -> Result<RepairResult, RepairError> {
    let (tbox_verdict, _) = check_consistency_with(kb, &[], &config.reasoner)?;
    if tbox_verdict == Verdict::Inconsistent {
        return Err(RepairError::TBoxUnsatisfiable);
    }
    let mut cache = ConsistencyCache::new(kb, config.reasoner);
    let explain = ExplainOptions { mus_budget: config.mus_budget, labels: false, ..Default::default() };
    let index: BTreeMap<&Assertion, usize> = kb.abox.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut kept: Vec<usize> = (0..kb.abox.len()).collect();
    let mut steps: Vec<(usize, RemovalStep)> = Vec::new();
    let mut round = 0;
    let mut complete = true;
    while cache.check(&kept)? == Verdict::Inconsistent {
        round += 1;
        let found = enumerate_in(&mut cache, &kept, &explain)?;
        complete &= found.complete;
        let graph = build_graph(&found.muses);
        let weights: Vec<u64> = graph.vertices.iter().map(|a| temporal_weight(a, config, kb)).collect();
        let cover = greedy_cover(&graph, &weights, config.tie_seed);
        log::info!("round {round}: {} conflicts, removing {}", graph.edges.len(), cover.len());
        let mut gone = BTreeSet::new();
        for step in cover {
            let assertion = graph.vertices[step.vertex].clone();
            let i = index[&assertion];
            gone.insert(i);
            steps.push((
                i,
                RemovalStep { assertion, degree: step.degree, weight: step.weight, edges_covered: step.edges_covered, round },
            ));
        }
        kept.retain(|i| !gone.contains(i));
    }

    let removed_idx: Vec<usize> = steps.iter().map(|(i, _)| *i).collect();
    let ((still, kept), restored) = restore_indices(&mut cache, removed_idx, kept, config)?;
    let still: BTreeSet<usize> = still.into_iter().collect();
    let mut maximal = true;
    for &i in &still {
        let mut trial = kept.clone();
        trial.push(i);
        trial.sort_unstable();
        if cache.check(&trial)? == Verdict::Consistent {
            maximal = false;
        }
    }
    let mut kept_sorted = kept;
    kept_sorted.sort_unstable();
    let repaired_abox: Vec<Assertion> = kept_sorted.iter().map(|&i| kb.abox[i].clone()).collect();
    debug_assert_eq!(check_consistency_with(kb, &repaired_abox, &config.reasoner).map(|r| r.0), Ok(Verdict::Consistent));
    Ok(RepairResult {
        removed: steps.into_iter().filter(|(i, _)| still.contains(i)).map(|(_, s)| s).collect(),
        restored: restored.into_iter().map(|i| kb.abox[i].clone()).collect(),
        repaired_abox,
        iterations: round,
        maximal,
        complete_enumeration: complete,
        default_sigma: config.default_sigma.unwrap_or_else(|| observed_span(kb)),
        checks: cache.checks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explain::{build_graph, ConflictSet};
    use crate::kb::parse_kb;
    use alloc::format;
    use alloc::vec;

    fn example() -> TemporalKb {
        parse_kb(crate::EXAMPLE_KB).unwrap()
    }

    fn names(list: &[Assertion]) -> Vec<String> {
        list.iter().map(|a| format!("{a}")).collect()
    }

    fn pick(kb: &TemporalKb, names: &[&str]) -> Vec<Assertion> {
        names.iter().map(|n| kb.abox.iter().find(|a| format!("{a}") == *n).unwrap().clone()).collect()
    }

    #[test]
    fn weights() {
        let kb = example();
        let cfg = RepairConfig { sigma: [("Adult".into(), 5), ("hasMother".into(), 3)].into(), ..Default::default() };
        assert_eq!(temporal_weight(&Assertion::concept("Minor", "John", 2), &cfg, &kb), 2);
        assert_eq!(temporal_weight(&Assertion::concept("Adult", "John", 0), &cfg, &kb), 5);
        assert_eq!(temporal_weight(&Assertion::role("hasMother", "John", "Ana", 0), &cfg, &kb), 3);
        assert_eq!(temporal_weight(&Assertion::concept("Adult", "John", 0).negate(), &cfg, &kb), 0);
        assert_eq!(RepairConfig::default().sigma_for("Person", &kb), 5);
    }

    fn graph_of(sets: &[&[Assertion]]) -> InconsistencyGraph {
        let muses: Vec<ConflictSet> = sets
            .iter()
            .map(|s| ConflictSet { assertions: s.to_vec(), indices: vec![], label: String::new() })
            .collect();
        build_graph(&muses)
    }

    #[test]
    fn triangle_keeps_latest() {
        let kb = example();
        let [ana, eva, maria]: [Assertion; 3] = pick(
            &kb,
            &["hasMother(John,Ana)@0", "hasMother(John,Eva)@1", "hasMother(John,Maria)@2"],
        )
        .try_into()
        .unwrap();
        let g = graph_of(&[
            &[ana.clone(), eva.clone()],
            &[ana.clone(), maria.clone()],
            &[eva.clone(), maria.clone()],
        ]);
        let cfg = RepairConfig::uniform(4);
        let w: Vec<u64> = g.vertices.iter().map(|a| temporal_weight(a, &cfg, &kb)).collect();
        let cover: Vec<Assertion> = greedy_cover(&g, &w, None).iter().map(|s| g.vertices[s.vertex].clone()).collect();
        assert_eq!(cover, vec![ana, eva]);
    }

    #[test]
    fn sigma_decides_between_rigid_and_recent() {
        let kb = parse_kb("concept Adult rigid\nconcept Minor\ntbox:\nabox:\nAdult(John)@0\nMinor(John)@2\n").unwrap();
        let g = graph_of(&[&kb.abox]);
        for (sigma, expected) in [(5, "Minor(John)@2"), (1, "Adult(John)@0")] {
            let cfg = RepairConfig::uniform(sigma);
            let w: Vec<u64> = g.vertices.iter().map(|a| temporal_weight(a, &cfg, &kb)).collect();
            let cover = greedy_cover(&g, &w, None);
            assert_eq!(cover.len(), 1);
            assert_eq!(format!("{}", g.vertices[cover[0].vertex]), expected);
        }
    }

    #[test]
    fn example_repair() {
        let kb = example();
        let result = repair(&kb, &RepairConfig::uniform(6)).unwrap();
        assert_eq!(
            names(&result.removed_assertions()),
            ["hasMother(John,Ana)@0", "Adult(John)@2", "hasMother(John,Eva)@1"]
        );
        assert_eq!(
            names(&result.repaired_abox),
            ["Person(John)@0", "Minor(John)@1", "Minor(John)@3", "Minor(John)@4", "hasMother(John,Maria)@2"]
        );
        assert!(result.maximal && result.restored.is_empty());
        assert_eq!(result.iterations, 1);
        assert_eq!(result.removed[0].degree, 2);
    }

    #[test]
    fn consistent_kb_is_untouched() {
        let kb = example();
        let sub = kb.with_abox(pick(&kb, &["Person(John)@0", "Minor(John)@1"]));
        let result = repair(&sub, &RepairConfig::default()).unwrap();
        assert!(result.removed.is_empty());
        assert_eq!(result.repaired_abox, sub.abox);
        assert_eq!(result.iterations, 0);
    }

    #[test]
    fn singleton_conflict_is_removed() {
        let kb = parse_kb("concept A\nconcept B\ntbox:\nA <= Bot\nabox:\nA(a)@0\nB(a)@1\n").unwrap();
        let result = repair(&kb, &RepairConfig::default()).unwrap();
        assert_eq!(names(&result.removed_assertions()), ["A(a)@0"]);
        assert_eq!(names(&result.repaired_abox), ["B(a)@1"]);
    }

    #[test]
    fn unsatisfiable_tbox() {
        let kb = parse_kb("concept A\ntbox:\nTop <= A & !A\nabox:\n").unwrap();
        assert_eq!(repair(&kb, &RepairConfig::default()), Err(RepairError::TBoxUnsatisfiable));
    }

    #[test]
    fn restoration() {
        let kb = example();
        let a1: Vec<Assertion> = kb.abox[..5].to_vec();
        let only_a1 = kb.with_abox(a1.clone());
        let over = pick(&kb, &["Minor(John)@3", "Adult(John)@2"]);
        let kept: Vec<Assertion> = a1.iter().filter(|a| !over.contains(a)).cloned().collect();
        let (removed, kept) = restore_maximality(&only_a1, &over, &kept, &RepairConfig::default()).unwrap();
        assert_eq!(names(&removed), ["Adult(John)@2"]);
        assert!(kept.contains(&over[0]));

        let (removed, kept2) = restore_maximality(&only_a1, &[], &kept, &RepairConfig::default()).unwrap();
        assert!(removed.is_empty());
        assert_eq!(kept2, kept);
    }
}
