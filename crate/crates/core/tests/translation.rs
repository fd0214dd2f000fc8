//! Golden translations of the John KB.

use std::collections::BTreeMap;

use temporepair_core::translate::{translate_abox, translate_tbox, GroundGci, TboxTranslation};
use temporepair_core::{parse_kb, Horizon, TemporalKb, TranslateOptions, EXAMPLE_KB};

fn kb() -> TemporalKb {
    parse_kb(EXAMPLE_KB).unwrap()
}

fn is_tautology(g: &GroundGci) -> bool {
    let lhs = g.lhs.canonical();
    let have = lhs.conjuncts();
    g.rhs.canonical().conjuncts().iter().all(|c| have.contains(c))
}

/// Non-trivial GCIs, funct axioms and strict role inclusions as a multiset
/// of canonical strings.
fn multiset(t: &TboxTranslation) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    let gcis = t.gcis.iter().filter(|g| !is_tautology(g));
    for g in gcis {
        *out.entry(format!("{} <= {}", g.lhs.canonical(), g.rhs.canonical())).or_default() += 1;
    }
    for f in &t.functionality {
        *out.entry(format!("funct({f})")).or_default() += 1;
    }
    for r in t.role_inclusions.iter().filter(|r| r.from != r.to) {
        *out.entry(format!("{} <= {}", r.sub(), r.sup())).or_default() += 1;
    }
    out
}

fn expected(lines: &[String]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for l in lines {
        *out.entry(l.clone()).or_default() += 1;
    }
    out
}

fn conj(name: &str, from: u32, to: u32) -> String {
    (from..=to).map(|i| format!("{name}@{i}")).collect::<Vec<_>>().join(" & ")
}

#[test]
fn tbox_without_abox() {
    let t = translate_tbox(&kb(), &Horizon::new(0, 0, 1), TranslateOptions::default());
    let mut want: Vec<String> = [
        "Adult@0 <= Person@0",
        "Adult@1 <= Person@1",
        "Minor@0 <= Person@0",
        "Minor@1 <= Person@1",
        "Person@0 <= Person@0 & Person@1",
        "Adult@0 <= Adult@0 & Adult@1",
        "Adult@0 & Minor@0 <= Bot",
        "Adult@1 & Minor@1 <= Bot",
        "Person@0 <= exists hasMother@0",
        "Person@1 <= exists hasMother@1",
        "funct(hasMother@0)",
        "funct(hasMother@1)",
    ]
    .map(String::from)
    .to_vec();
    want.push("hasMother@0 <= hasMother@1".into());
    assert_eq!(multiset(&t), expected(&want));
}

#[test]
fn abox_over_observed_window() {
    let kb = kb();
    let got: Vec<String> = translate_abox(&kb.abox, &Horizon::new(0, 4, 1)).unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(
        got,
        [
            "Person@0(John)",
            "Minor@1(John)",
            "Adult@2(John)",
            "Minor@3(John)",
            "Minor@4(John)",
            "hasMother@0(John,Ana)",
            "hasMother@1(John,Eva)",
            "hasMother@2(John,Maria)",
        ]
    );
}

#[test]
fn tbox_over_extended_window() {
    let h = Horizon::new(1, 4, 1);
    assert_eq!(h.times(), 1..=5);
    let t = translate_tbox(&kb(), &h, TranslateOptions::default());
    let mut want = Vec::new();
    for i in 1..=5 {
        want.push(format!("Adult@{i} <= Person@{i}"));
        want.push(format!("Minor@{i} <= Person@{i}"));
        want.push(format!("Adult@{i} & Minor@{i} <= Bot"));
        want.push(format!("Person@{i} <= exists hasMother@{i}"));
        want.push(format!("funct(hasMother@{i})"));
        if i < 5 {
            want.push(format!("Person@{i} <= {}", conj("Person", i, 5)));
            want.push(format!("Adult@{i} <= {}", conj("Adult", i, 5)));
        }
        for k in i + 1..=5 {
            want.push(format!("hasMother@{i} <= hasMother@{k}"));
        }
    }
    assert_eq!(multiset(&t), expected(&want));
}

#[test]
fn every_time_point_gets_every_axiom() {
    let kb = kb();
    for (start, last) in [(0, 0), (0, 4), (2, 7)] {
        let h = Horizon::new(start, last, kb.temporal_depth());
        let t = translate_tbox(&kb, &h, TranslateOptions::default());
        let w = h.len();
        assert_eq!(t.gcis.len(), kb.expanded_gcis().len() * w);
        assert_eq!(t.functionality.len(), w);
        assert_eq!(t.role_inclusions.len(), w * (w + 1) / 2);
        assert!(t.gcis.iter().all(|g| h.contains(g.time)));
    }
}
