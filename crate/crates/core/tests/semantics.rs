//! Grounding, explanation and repair checked against brute force and the
//! direct-semantics oracle on small random KBs.

use std::collections::BTreeSet;

use temporepair_core::bench::{random_kb, GenConfig};
use temporepair_core::explain::{enumerate_muses, ExplainOptions};
use temporepair_core::reasoner::{check_consistency_with, oracle_enumerate, Domain, OracleError, OracleLimits, OracleOptions};
use temporepair_core::repair::{repair, RepairConfig};
use temporepair_core::translate::compute_horizon;
use temporepair_core::{Assertion, ReasonerOptions, TemporalKb, Verdict};

fn corpus_member(seed: u64, i: usize, abox_size: usize) -> TemporalKb {
    let cfg = GenConfig {
        seed,
        n: 2 + i % 2,
        lt: 2 + i % 3,
        lc: 1 + i % 4,
        pt: 0.5,
        pg: 0.5,
        abox_size,
        max_time: 2 + (i / 4 % 2) as u32,
        negative_prob: 0.2,
        functional_prob: 0.3,
        rigid_prob: 0.3,
        ..Default::default()
    };
    random_kb(&cfg, &mut cfg.member_rng(i)).unwrap()
}

fn verdict(kb: &TemporalKb, abox: &[Assertion]) -> Verdict {
    check_consistency_with(kb, abox, &ReasonerOptions::default()).unwrap().0
}

fn oracle(kb: &TemporalKb) -> Result<Verdict, OracleError> {
    let size = Domain::for_kb(kb, &ReasonerOptions::default()).len();
    let limits = OracleLimits { node_budget: 1_000_000, ..OracleLimits::widened() };
    let options = OracleOptions { limits, ..Default::default() };
    oracle_enumerate(kb, size, &compute_horizon(kb), &options).map(|o| o.verdict)
}

#[test]
fn grounding_agrees_with_oracle() {
    let (mut checked, mut inconsistent) = (0, 0);
    for i in 0..80 {
        let kb = corpus_member(31, i, 9);
        let Ok(expected) = oracle(&kb) else { continue };
        checked += 1;
        inconsistent += usize::from(expected == Verdict::Inconsistent);
        assert_eq!(verdict(&kb, &kb.abox), expected, "member {i}");
    }
    assert!(checked >= 70, "{checked}");
    assert!(inconsistent >= 10 && inconsistent < checked, "{inconsistent}/{checked}");
}

fn subsets(abox: &[Assertion]) -> Vec<Vec<Assertion>> {
    (0u32..1 << abox.len())
        .map(|mask| abox.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect())
        .collect()
}

#[test]
fn conflicts_match_brute_force() {
    let mut compared = 0;
    for i in 0..40 {
        let kb = corpus_member(57, i, 7);
        if verdict(&kb, &kb.abox).is_consistent() {
            continue;
        }
        let all = subsets(&kb.abox);
        let bad: BTreeSet<Vec<Assertion>> = all.iter().filter(|s| !verdict(&kb, s).is_consistent()).map(|s| sorted(s)).collect();
        let minimal: BTreeSet<Vec<Assertion>> = bad
            .iter()
            .filter(|s| !bad.iter().any(|t| t.len() < s.len() && t.iter().all(|a| s.contains(a))))
            .cloned()
            .collect();
        let found = enumerate_muses(&kb, &ExplainOptions { labels: false, ..Default::default() }).unwrap();
        assert!(found.complete);
        let got: BTreeSet<Vec<Assertion>> = found.muses.iter().map(|m| sorted(&m.assertions)).collect();
        assert_eq!(got, minimal, "member {i}");
        compared += 1;
    }
    assert!(compared >= 5, "{compared}");
}

fn sorted(s: &[Assertion]) -> Vec<Assertion> {
    let mut s = s.to_vec();
    s.sort();
    s
}

#[test]
fn repairs_are_maximal_consistent_subsets() {
    let mut repaired = 0;
    for i in 0..60 {
        let kb = corpus_member(89, i, 9);
        if !verdict(&kb, &[]).is_consistent() || verdict(&kb, &kb.abox).is_consistent() {
            continue;
        }
        let result = repair(&kb, &RepairConfig::default()).unwrap();
        assert!(result.repaired_abox.iter().all(|a| kb.abox.contains(a)));
        assert!(verdict(&kb, &result.repaired_abox).is_consistent(), "member {i}");
        assert!(result.maximal);
        for step in &result.removed {
            let mut plus = result.repaired_abox.clone();
            plus.push(step.assertion.clone());
            assert!(!verdict(&kb, &plus).is_consistent(), "member {i}: {} can come back", step.assertion);
        }
        assert_eq!(result.repaired_abox.len() + result.removed.len(), kb.abox.len());
        if let Ok(v) = oracle(&kb.with_abox(result.repaired_abox.clone())) {
            assert_eq!(v, Verdict::Consistent, "member {i}");
        }
        repaired += 1;
    }
    assert!(repaired >= 15, "{repaired}");
}

#[test]
fn seeded_ties_are_reproducible() {
    for i in 0..20 {
        let kb = corpus_member(3, i, 9);
        if !verdict(&kb, &[]).is_consistent() {
            continue;
        }
        let cfg = RepairConfig { tie_seed: Some(i as u64), ..Default::default() };
        assert_eq!(repair(&kb, &cfg).unwrap(), repair(&kb, &cfg).unwrap());
    }
}
