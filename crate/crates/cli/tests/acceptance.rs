//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temporepair_core::bench::{random_abox, random_kb, GenConfig, Vocabulary};
use temporepair_core::explain::{build_graph, enumerate_muses, ConflictSet, ExplainOptions};
use temporepair_core::kb::serialize_kb;
use temporepair_core::reasoner::{check_consistency_with, oracle_enumerate, Domain, OracleLimits, OracleOptions};
use temporepair_core::repair::{greedy_cover, repair, RepairConfig};
use temporepair_core::translate::{compute_horizon, translate_abox, translate_tbox, GroundGci, TboxTranslation};
use temporepair_core::{parse_kb, Assertion, Horizon, ReasonerOptions, TemporalKb, TranslateOptions, Verdict, EXAMPLE_KB};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn john() -> TemporalKb {
    parse_kb(EXAMPLE_KB).unwrap()
}

fn names(list: &[Assertion]) -> BTreeSet<String> {
    list.iter().map(ToString::to_string).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn verdict(kb: &TemporalKb, abox: &[Assertion]) -> Verdict {
    check_consistency_with(kb, abox, &ReasonerOptions::default()).unwrap().0
}

fn oracle(kb: &TemporalKb, node_budget: u64) -> Option<Verdict> {
    let size = Domain::for_kb(kb, &ReasonerOptions::default()).len();
    let limits = OracleLimits { node_budget, ..OracleLimits::widened() };
    let options = OracleOptions { limits, ..Default::default() };
    oracle_enumerate(kb, size, &compute_horizon(kb), &options).ok().map(|o| o.verdict)
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1000.0)
}

fn example_repair() -> Outcome {
    let kb = john();
    let start = Instant::now();
    let result = repair(&kb, &RepairConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let removed = names(&result.removed_assertions());
    let want = set(&["Adult(John)@2", "hasMother(John,Ana)@0", "hasMother(John,Eva)@1"]);
    ensure!(removed == want, "removed {removed:?}");
    let kept = set(&["Person(John)@0", "Minor(John)@1", "Minor(John)@3", "Minor(John)@4", "hasMother(John,Maria)@2"]);
    ensure!(names(&result.repaired_abox) == kept, "kept {:?}", result.repaired_abox);
    ensure!(result.maximal, "not maximal");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("removed {} assertions, sigma {}, {}", removed.len(), result.default_sigma, ms(elapsed)))
}

fn is_tautology(g: &GroundGci) -> bool {
    let lhs = g.lhs.canonical();
    let have = lhs.conjuncts();
    g.rhs.canonical().conjuncts().iter().all(|c| have.contains(c))
}

fn axiom_multiset(t: &TboxTranslation) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for g in t.gcis.iter().filter(|g| !is_tautology(g)) {
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

fn multiset(lines: Vec<String>) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for l in lines {
        *out.entry(l).or_default() += 1;
    }
    out
}

fn conj(name: &str, from: u32, to: u32) -> String {
    (from..=to).map(|i| format!("{name}@{i}")).collect::<Vec<_>>().join(" & ")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn translation_goldens() -> Outcome {
    let kb = john();
    let limit = Duration::from_millis(100);

    let (t, d1) = timed(|| translate_tbox(&kb, &Horizon::new(0, 0, 1), TranslateOptions::default()));
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
    ensure!(axiom_multiset(&t) == multiset(want), "TBox over [0, 1]: {:?}", axiom_multiset(&t));

    let (abox, d2) = timed(|| translate_abox(&kb.abox, &Horizon::new(0, 4, 1)).unwrap());
    let got: Vec<String> = abox.iter().map(ToString::to_string).collect();
    let want = [
        "Person@0(John)",
        "Minor@1(John)",
        "Adult@2(John)",
        "Minor@3(John)",
        "Minor@4(John)",
        "hasMother@0(John,Ana)",
        "hasMother@1(John,Eva)",
        "hasMother@2(John,Maria)",
    ];
    ensure!(got == want, "ABox: {got:?}");

    let (t, d3) = timed(|| translate_tbox(&kb, &Horizon::new(1, 4, 1), TranslateOptions::default()));
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
    ensure!(axiom_multiset(&t) == multiset(want), "TBox over [1, 5]: {:?}", axiom_multiset(&t));
    for d in [d1, d2, d3] {
        ensure!(d < limit, "translation took {d:?}");
    }
    Ok(format!("TBox [0, 1] {}, ABox {}, TBox [1, 5] {}", ms(d1), ms(d2), ms(d3)))
}

fn inconsistency_degrees() -> Outcome {
    let kb = john();
    let found = enumerate_muses(&kb, &ExplainOptions::default()).map_err(|e| e.to_string())?;
    ensure!(found.complete, "enumeration incomplete");
    let graph = build_graph(&found.muses);
    let degree = |s: &str| graph.vertices.iter().position(|v| v.to_string() == s).map(|i| graph.degree[i]);
    let want = [
        ("Adult(John)@2", 2),
        ("hasMother(John,Ana)@0", 2),
        ("hasMother(John,Eva)@1", 2),
        ("hasMother(John,Maria)@2", 2),
        ("Minor(John)@3", 1),
        ("Minor(John)@4", 1),
    ];
    for (a, d) in want {
        ensure!(degree(a) == Some(d), "I_d({a}) = {:?}, expected {d}", degree(a));
    }
    ensure!(graph.vertices.len() == want.len(), "{} vertices", graph.vertices.len());
    for m in &found.muses {
        let sub = kb.with_abox(m.assertions.clone());
        ensure!(oracle(&sub, 20_000_000) == Some(Verdict::Inconsistent), "oracle: {:?} not inconsistent", names(&m.assertions));
        for skip in 0..m.assertions.len() {
            let mut rest = m.assertions.clone();
            rest.remove(skip);
            let sub = kb.with_abox(rest);
            ensure!(oracle(&sub, 20_000_000) == Some(Verdict::Consistent), "oracle: {:?} minus one is not consistent", names(&m.assertions));
        }
    }
    Ok(format!("{} conflicts, degrees 2,2,2,2,1,1, each conflict confirmed minimal by the oracle", found.muses.len()))
}

fn corpus_member(seed: u64, i: usize) -> TemporalKb {
    let cfg = GenConfig {
        seed,
        n: 2 + i % 2,
        lt: 2 + i % 3,
        lc: 1 + i % 4,
        pt: 0.5,
        pg: 0.5,
        abox_size: 9,
        max_time: 2 + (i / 4 % 2) as u32,
        negative_prob: 0.2,
        functional_prob: 0.3,
        rigid_prob: 0.3,
        ..Default::default()
    };
    random_kb(&cfg, &mut cfg.member_rng(i)).unwrap()
}

fn bounded_time_agreement() -> Outcome {
    let start = Instant::now();
    let total = 240;
    let (mut checked, mut inconsistent, mut skipped) = (0, 0, 0);
    for i in 0..total {
        let kb = corpus_member(2024, i);
        let Some(expected) = oracle(&kb, 2_000_000) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        inconsistent += usize::from(expected == Verdict::Inconsistent);
        let got = verdict(&kb, &kb.abox);
        ensure!(got == expected, "member {i}: grounding says {got}, oracle says {expected}\n{}", serialize_kb(&kb));
    }
    let elapsed = start.elapsed();
    ensure!(checked >= 200, "only {checked} of {total} KBs within the oracle budget");
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!(
        "{checked}/{checked} agree ({inconsistent} inconsistent), {skipped} of {total} beyond the oracle budget, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn repair_definition() -> Outcome {
    let start = Instant::now();
    let (mut repaired, mut oracle_checked) = (0, 0);
    let mut i = 0;
    while repaired < 100 {
        ensure!(i < 2000, "corpus exhausted after {repaired} inconsistent KBs");
        let kb = corpus_member(4242, i);
        i += 1;
        if !verdict(&kb, &[]).is_consistent() || verdict(&kb, &kb.abox).is_consistent() {
            continue;
        }
        let result = repair(&kb, &RepairConfig::default()).map_err(|e| e.to_string())?;
        let kept = &result.repaired_abox;
        ensure!(kept.iter().all(|a| kb.abox.contains(a)), "member {}: repair is not a subset", i - 1);
        ensure!(verdict(&kb, kept).is_consistent(), "member {}: repair is inconsistent", i - 1);
        if let Some(v) = oracle(&kb.with_abox(kept.clone()), 2_000_000) {
            ensure!(v == Verdict::Consistent, "member {}: oracle rejects the repair", i - 1);
            oracle_checked += 1;
        }
        for a in kb.abox.iter().filter(|a| !kept.contains(a)) {
            let mut plus = kept.clone();
            plus.push(a.clone());
            ensure!(!verdict(&kb, &plus).is_consistent(), "member {}: {a} could be kept", i - 1);
        }
        repaired += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!(
        "{repaired} repairs are consistent maximal subsets, {oracle_checked} also confirmed by the oracle, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|m| edges.iter().all(|&(a, b)| m >> a & 1 == 1 || m >> b & 1 == 1))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

fn two_approximation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for g in 0..50 {
        let n = rng.random_range(2..=14);
        let p: f64 = rng.random_range(0.1..0.6);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 1));
        }
        let vertex = |i: usize| Assertion::concept("V", &format!("v{i:02}"), 0);
        let sets: Vec<ConflictSet> = edges
            .iter()
            .map(|&(a, b)| ConflictSet { assertions: vec![vertex(a), vertex(b)], indices: vec![], label: String::new() })
            .collect();
        let graph = build_graph(&sets);
        let weights = vec![0; graph.vertices.len()];
        let cover = greedy_cover(&graph, &weights, None);
        let optimum = min_vertex_cover(n, &edges);
        ensure!(cover.len() <= 2 * optimum, "graph {g}: greedy {} vs optimum {optimum}", cover.len());
        worst = worst.max(cover.len() as f64 / optimum as f64);
    }
    Ok(format!("50 graphs, worst ratio {worst:.2}, {}", ms(start.elapsed())))
}

fn sigma_tie_breaking() -> Outcome {
    let kb = john().with_abox(vec![Assertion::concept("Adult", "John", 0), Assertion::concept("Minor", "John", 2)]);
    let mut lines = Vec::new();
    for (sigma, expected) in [(5, "Minor(John)@2"), (1, "Adult(John)@0")] {
        let config = RepairConfig { sigma: [("Adult".to_string(), sigma)].into(), ..Default::default() };
        let result = repair(&kb, &config).map_err(|e| e.to_string())?;
        let removed = names(&result.removed_assertions());
        ensure!(removed == set(&[expected]), "sigma {sigma}: removed {removed:?}");
        let degrees: Vec<usize> = result.removed.iter().map(|s| s.degree).collect();
        ensure!(degrees == [1], "sigma {sigma}: degrees {degrees:?}");
        lines.push(format!("sigma {sigma} removes {expected}"));
    }
    Ok(lines.join(", "))
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_temporepair")).args(args).env_remove("TEMPOREPAIR_LOG").output().unwrap();
    assert!(out.status.code().is_some_and(|c| c <= 1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn scaling_family(size: usize) -> TemporalKb {
    let kb = john();
    let cfg = GenConfig { seed: 8, abox_size: size, max_time: 9, ..Default::default() };
    let vocab = Vocabulary::of(&kb.gcis);
    let abox = random_abox(&cfg, &vocab, &mut cfg.member_rng(size)).unwrap();
    let mut sig = kb.signature.clone();
    for a in &abox {
        for i in a.individuals() {
            sig.declare_individual(i);
        }
    }
    TemporalKb::new(sig, kb.gcis.clone(), abox)
}

fn determinism_and_scaling() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let family = scaling_family(100);
    std::fs::write(p("kb.tkb"), serialize_kb(&family)).map_err(|e| e.to_string())?;
    for run in ["a", "b"] {
        run_cli(&["repair", &p("kb.tkb"), "--randomize-ties", "17", "--report", &p(&format!("repair_{run}.json"))]);
        run_cli(&["explain", &p("kb.tkb"), "--report", &p(&format!("explain_{run}.json"))]);
        run_cli(&["gen", "--seed", "5", "--batch", "3", "--out-dir", &p(&format!("gen_{run}")), "--report", &p(&format!("gen_{run}.json"))]);
    }
    let same = |a: &str, b: &str| std::fs::read(Path::new(&p(a))).unwrap() == std::fs::read(Path::new(&p(b))).unwrap();
    for (a, b) in [("repair_a.json", "repair_b.json"), ("explain_a.json", "explain_b.json"), ("gen_a.json", "gen_b.json")] {
        ensure!(same(a, b), "{a} and {b} differ");
    }
    for k in 0..3 {
        let f = format!("kb_{k:04}.tkb");
        ensure!(same(&format!("gen_a/{f}"), &format!("gen_b/{f}")), "generated {f} differs");
    }

    let mut points = Vec::new();
    for size in [100, 500, 1000] {
        let kb = scaling_family(size);
        let h = compute_horizon(&kb);
        ensure!(h.end() <= 10, "window {h}");
        let start = Instant::now();
        let result = repair(&kb, &RepairConfig::default()).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        ensure!(result.maximal, "|A| = {size}: repair not maximal");
        points.push((size as f64, secs, result.removed.len()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-4).ln()).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let timings: Vec<String> = points.iter().map(|(n, s, r)| format!("|A|={n} {s:.2} s ({r} removed)")).collect();
    ensure!(slope.total_cmp(&3.0).is_lt(), "log-log slope {slope:.2}: {}", timings.join(", "));
    Ok(format!("reports byte-identical; {}; slope {slope:.2}", timings.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("John KB repair", example_repair),
        ("translation goldens", translation_goldens),
        ("inconsistency degrees", inconsistency_degrees),
        ("bounded-time agreement with the oracle", bounded_time_agreement),
        ("repairs are maximal consistent subsets", repair_definition),
        ("greedy cover within twice the optimum", two_approximation),
        ("sigma tie-breaking", sigma_tie_breaking),
        ("determinism and scaling", determinism_and_scaling),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
