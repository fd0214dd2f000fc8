//! Subcommand implementations. Each returns the process exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use temporepair_core::bench::{generate_batch, GenConfig};
use temporepair_core::explain::{build_graph, enumerate_muses_with, ExplainOptions, InconsistencyGraph};
use temporepair_core::kb::{parse_kb_with, serialize_kb, ParseOptions};
use temporepair_core::reasoner::{
    check_consistency_with, oracle_enumerate, Domain, OracleLimits, OracleOptions, TemporalModel,
};
use temporepair_core::repair::{repair, temporal_weight, RepairConfig};
use temporepair_core::translate::{compute_horizon, translate_kb};
use temporepair_core::{Horizon, ReasonerOptions, TemporalKb, TranslateOptions, Verdict};

use crate::args::*;
use crate::error::CliError;
use crate::ground;
use crate::report::*;

fn load(input: &Input) -> Result<TemporalKb, CliError> {
    let text = fs::read_to_string(&input.input).map_err(|e| CliError::io(&input.input, e))?;
    let options = ParseOptions { strict_grammar: input.strict_grammar, strict_declarations: input.strict_grammar };
    parse_kb_with(&text, options).map_err(|source| CliError::Parse { path: input.input.clone(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_report<T: Serialize>(path: Option<&Path>, report: &T) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(report).expect("report serializes");
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(())
}

fn reasoner_options(args: &ReasonerArgs) -> ReasonerOptions {
    ReasonerOptions { strict_future: args.strict_future, conflict_budget: args.conflict_budget, ..Default::default() }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Consistent => 0,
        Verdict::Inconsistent => 1,
    }
}

pub fn check(args: &CheckArgs) -> Result<u8, CliError> {
    let kb = load(&args.input)?;
    let options = reasoner_options(&args.reasoner);
    let (verdict, stats) = check_consistency_with(&kb, &kb.abox, &options)?;
    let h = compute_horizon(&kb);
    println!("{verdict}");
    log::info!("window {h}, {} assertions", kb.abox.len());
    let stats = Stats::from(stats);
    match args.stats {
        Some(StatsFormat::Json) => eprintln!("{}", serde_json::to_string(&stats).expect("stats serialize")),
        Some(StatsFormat::Text) => eprintln!(
            "variables {} clauses {} decisions {} propagations {} conflicts {}",
            stats.variables, stats.clauses, stats.decisions, stats.propagations, stats.conflicts
        ),
        None => {}
    }
    let report = CheckReport {
        command: "check",
        verdict: verdict.to_string(),
        window: Window { start: h.start, end: h.end() },
        assertions: kb.abox.len(),
        stats,
    };
    write_report(args.report.as_deref(), &report)?;
    Ok(verdict_code(verdict))
}

pub fn translate(args: &TranslateArgs) -> Result<u8, CliError> {
    let kb = load(&args.input)?;
    let g = translate_kb(&kb, TranslateOptions { strict_future: args.strict_future }).map_err(|e| CliError::Reasoner(e.into()))?;
    let text = match args.format {
        GroundFormat::Gkb => ground::to_gkb(&g),
        GroundFormat::Json => {
            let mut s = serde_json::to_string_pretty(&ground::to_json(&g)).expect("ground KB serializes");
            s.push('\n');
            s
        }
    };
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn repair_config(sigma: &SigmaArgs, reasoner: &ReasonerArgs) -> RepairConfig {
    RepairConfig {
        sigma: sigma.sigma.iter().cloned().collect(),
        default_sigma: sigma.default_sigma,
        reasoner: reasoner_options(reasoner),
        ..Default::default()
    }
}

fn graph_dot(graph: &InconsistencyGraph, weights: &[u64]) -> String {
    let quote = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut out = String::from("graph inconsistency {\n  node [shape=box];\n");
    for (i, v) in graph.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{i} [label=\"{}\\nI_d={} w_t={}\"];",
            quote(&v.to_string()),
            graph.degree[i],
            weights[i]
        );
    }
    for (k, e) in graph.edges.iter().enumerate() {
        let label = quote(&e.label);
        match e.members.as_slice() {
            [v] => {
                let _ = writeln!(out, "  v{v} -- v{v} [label=\"{label}\"];");
            }
            [a, b] => {
                let _ = writeln!(out, "  v{a} -- v{b} [label=\"{label}\"];");
            }
            members => {
                let _ = writeln!(out, "  e{k} [shape=point, label=\"\"];");
                for (j, v) in members.iter().enumerate() {
                    let tag = if j == 0 { format!(" [label=\"{label}\"]") } else { String::new() };
                    let _ = writeln!(out, "  v{v} -- e{k}{tag};");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn explain(args: &ExplainArgs) -> Result<u8, CliError> {
    let kb = load(&args.input)?;
    let config = repair_config(&args.sigma, &args.reasoner);
    let (verdict, _) = check_consistency_with(&kb, &kb.abox, &config.reasoner)?;
    let (muses, complete) = if verdict.is_consistent() {
        (Vec::new(), true)
    } else {
        let options = ExplainOptions { mus_budget: args.mus_budget, labels: !args.no_labels, ..Default::default() };
        let found = enumerate_muses_with(&kb, &options, &config.reasoner)?;
        (found.muses, found.complete)
    };
    let graph = build_graph(&muses);
    let weights: Vec<u64> = graph.vertices.iter().map(|a| temporal_weight(a, &config, &kb)).collect();

    println!("{verdict}: {} conflict{}{}", muses.len(), if muses.len() == 1 { "" } else { "s" }, if complete { "" } else { " (budget reached)" });
    for (i, m) in muses.iter().enumerate() {
        let members: Vec<String> = m.assertions.iter().map(ToString::to_string).collect();
        if m.label.is_empty() {
            println!("  #{} {{{}}}", i + 1, members.join(", "));
        } else {
            println!("  #{} {{{}}}  {}", i + 1, members.join(", "), m.label);
        }
    }
    if !graph.is_empty() {
        println!("degrees:");
        for (i, v) in graph.vertices.iter().enumerate() {
            println!("  {v}  I_d={} w_t={}", graph.degree[i], weights[i]);
        }
    }
    if let Some(path) = &args.dot {
        write_file(path, &graph_dot(&graph, &weights))?;
    }
    let report = ExplainReport {
        command: "explain",
        consistent: verdict.is_consistent(),
        complete,
        muses: muses
            .iter()
            .map(|m| Mus { assertions: m.assertions.iter().map(ToString::to_string).collect(), label: m.label.clone() })
            .collect(),
        graph: Graph {
            vertices: graph
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| Vertex { assertion: v.to_string(), degree: graph.degree[i], w_t: weights[i] })
                .collect(),
            edges: graph
                .edges
                .iter()
                .map(|e| Edge {
                    members: e.members.iter().map(|&v| graph.vertices[v].to_string()).collect(),
                    label: e.label.clone(),
                })
                .collect(),
        },
    };
    write_report(args.report.as_deref(), &report)?;
    Ok(0)
}

pub fn repair_cmd(args: &RepairArgs) -> Result<u8, CliError> {
    let kb = load(&args.input)?;
    let config = RepairConfig {
        mus_budget: args.mus_budget,
        tie_seed: args.randomize_ties,
        ..repair_config(&args.sigma, &args.reasoner)
    };
    let result = repair(&kb, &config)?;

    println!(
        "# removed {} of {} assertions in {} round{}{}",
        result.removed.len(),
        kb.abox.len(),
        result.iterations,
        if result.iterations == 1 { "" } else { "s" },
        if result.maximal { ", maximal" } else { "" }
    );
    for (i, s) in result.removed.iter().enumerate() {
        println!("# {}. {}  I_d={} w_t={}", i + 1, s.assertion, s.degree, s.weight);
    }
    for a in &result.restored {
        println!("# restored {a}");
    }
    println!("abox:");
    for a in &result.repaired_abox {
        println!("{a}");
    }
    if let Some(path) = &args.out {
        write_file(path, &serialize_kb(&kb.with_abox(result.repaired_abox.clone())))?;
    }
    let report = RepairReport {
        command: "repair",
        removed: result
            .removed
            .iter()
            .enumerate()
            .map(|(i, s)| Removed {
                assertion: s.assertion.to_string(),
                degree: s.degree,
                w_t: s.weight,
                step: i + 1,
                round: s.round,
            })
            .collect(),
        restored: result.restored.iter().map(ToString::to_string).collect(),
        repaired: result.repaired_abox.iter().map(ToString::to_string).collect(),
        iterations: result.iterations,
        maximal: result.maximal,
        complete_enumeration: result.complete_enumeration,
        default_sigma: result.default_sigma,
        sigma: config.sigma.clone(),
    };
    write_report(args.report.as_deref(), &report)?;
    Ok(0)
}

fn model_json(m: &TemporalModel) -> Model {
    let names: Vec<String> = m.domain.elements().iter().map(ToString::to_string).collect();
    Model {
        concepts: m
            .concepts
            .iter()
            .map(|(c, ext)| (c.clone(), ext.iter().map(|s| s.iter().map(|&d| names[d].clone()).collect()).collect()))
            .collect(),
        roles: m
            .roles
            .iter()
            .map(|(r, ext)| {
                let slices = ext.iter().map(|s| s.iter().map(|&(d, e)| [names[d].clone(), names[e].clone()]).collect()).collect();
                (r.clone(), slices)
            })
            .collect(),
        domain: names,
    }
}

pub fn oracle(args: &OracleArgs) -> Result<u8, CliError> {
    let kb = load(&args.input)?;
    let reasoner = ReasonerOptions { strict_future: args.strict_future, ..Default::default() };
    let size = args.domain_size.unwrap_or_else(|| Domain::for_kb(&kb, &reasoner).len());
    let horizon = match args.horizon {
        Some((start, end)) => Horizon::new(start, end, 0),
        None => compute_horizon(&kb),
    };
    let mut limits = if args.widened { OracleLimits::widened() } else { OracleLimits::default() };
    if let Some(budget) = args.node_budget {
        limits.node_budget = budget;
    }
    let options = OracleOptions { strict_future: args.strict_future, semantic_rigidity: args.semantic_rigidity, limits };
    let outcome = oracle_enumerate(&kb, size, &horizon, &options)?;
    println!("{}", outcome.verdict);
    log::info!("domain {size}, window [{}, {}], {} nodes", horizon.start, horizon.end(), outcome.nodes);
    let model = outcome.model.as_ref().map(model_json);
    if args.show_model {
        if let Some(m) = &model {
            print!("{}", render_model(m, horizon.start));
        }
    }
    let report = OracleReport {
        command: "oracle",
        verdict: outcome.verdict.to_string(),
        window: Window { start: horizon.start, end: horizon.end() },
        domain_size: size,
        nodes: outcome.nodes,
        model,
    };
    write_report(args.report.as_deref(), &report)?;
    Ok(verdict_code(outcome.verdict))
}

fn render_model(m: &Model, start: u32) -> String {
    let mut out = format!("domain: {}\n", m.domain.join(", "));
    for (c, ext) in &m.concepts {
        for (k, slice) in ext.iter().enumerate().filter(|(_, s)| !s.is_empty()) {
            let _ = writeln!(out, "{c}@{}: {}", start as usize + k, slice.join(", "));
        }
    }
    for (r, ext) in &m.roles {
        for (k, slice) in ext.iter().enumerate().filter(|(_, s)| !s.is_empty()) {
            let pairs: Vec<String> = slice.iter().map(|[a, b]| format!("({a},{b})")).collect();
            let _ = writeln!(out, "{r}@{}: {}", start as usize + k, pairs.join(", "));
        }
    }
    out
}

pub fn gen(args: &GenArgs) -> Result<u8, CliError> {
    let config = GenConfig {
        seed: args.seed,
        n: args.n,
        lt: args.lt,
        lc: args.lc,
        pt: args.pt,
        pg: args.pg,
        abox_size: args.abox_size,
        max_time: args.max_time,
        batch: args.batch,
        negative_prob: args.negative_prob,
        rigid_prob: args.rigid_prob,
        functional_prob: args.functional_prob,
    };
    let kbs = generate_batch(&config)?;
    let mut files = Vec::new();
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    for (i, kb) in kbs.iter().enumerate() {
        let name = format!("kb_{i:04}.tkb");
        let text = serialize_kb(kb);
        match &args.out_dir {
            Some(dir) => {
                write_file(&dir.join(&name), &text)?;
                println!("{}", dir.join(&name).display());
            }
            None => print!("# {name}\n{text}\n"),
        }
        files.push(name);
    }
    write_report(args.report.as_deref(), &GenReport { command: "gen", seed: args.seed, files })?;
    Ok(0)
}
