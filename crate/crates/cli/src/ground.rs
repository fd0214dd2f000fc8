//! Text and JSON renderings of a grounded KB.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;
use temporepair_core::translate::{GroundConcept, GroundFact, GroundKb};

fn collect(c: &GroundConcept, concepts: &mut BTreeSet<String>, roles: &mut BTreeSet<String>) {
    match c {
        GroundConcept::Top | GroundConcept::Bottom => {}
        GroundConcept::Atomic(n) => {
            concepts.insert(n.to_string());
        }
        GroundConcept::Exists(r) => {
            roles.insert(r.name.to_string());
        }
        GroundConcept::Not(x) => collect(x, concepts, roles),
        GroundConcept::And(a, b) | GroundConcept::Or(a, b) => {
            collect(a, concepts, roles);
            collect(b, concepts, roles);
        }
    }
}

/// `.gkb`: `.tkb` without temporal operators or timestamps, time-indexed
/// names, and `roleinc` lines for the inclusions between role copies.
pub fn to_gkb(g: &GroundKb) -> String {
    let mut concepts = BTreeSet::new();
    let mut roles = BTreeSet::new();
    for gci in &g.gcis {
        collect(&gci.lhs, &mut concepts, &mut roles);
        collect(&gci.rhs, &mut concepts, &mut roles);
    }
    for a in &g.abox {
        match &a.fact {
            GroundFact::Concept { concept, .. } => concepts.insert(concept.to_string()),
            GroundFact::Role { role, .. } => roles.insert(role.to_string()),
        };
    }
    for r in &g.role_inclusions {
        roles.insert(r.sub().to_string());
        roles.insert(r.sup().to_string());
    }
    let mut funct: BTreeMap<String, (bool, bool)> = BTreeMap::new();
    for f in &g.functionality {
        let name = f.name.to_string();
        roles.insert(name.clone());
        let entry = funct.entry(name).or_default();
        if f.inverse {
            entry.1 = true;
        } else {
            entry.0 = true;
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "# window {}", g.horizon);
    for c in &concepts {
        let _ = writeln!(out, "concept {c}");
    }
    for r in &roles {
        let (f, inv) = funct.get(r).copied().unwrap_or_default();
        let _ = writeln!(
            out,
            "role {r}{}{}",
            if f { " functional" } else { "" },
            if inv { " inverse-functional" } else { "" }
        );
    }
    out.push_str("\ntbox:\n");
    for gci in &g.gcis {
        let _ = writeln!(out, "{gci}");
    }
    for r in g.role_inclusions.iter().filter(|r| r.from != r.to) {
        let _ = writeln!(out, "roleinc {} <= {}", r.sub(), r.sup());
    }
    out.push_str("\nabox:\n");
    for a in &g.abox {
        let _ = writeln!(out, "{a}");
    }
    out
}

#[derive(Serialize)]
pub struct GroundWindow {
    pub start: u32,
    pub last: u32,
    pub end: u32,
    pub depth: u32,
}

#[derive(Serialize)]
pub struct GroundGciJson {
    pub lhs: String,
    pub rhs: String,
    pub source: usize,
    pub time: u32,
}

#[derive(Serialize)]
pub struct RoleInclusionJson {
    pub role: String,
    pub from: u32,
    pub to: u32,
}

#[derive(Serialize)]
pub struct GroundKbJson {
    pub window: GroundWindow,
    pub sources: Vec<String>,
    pub gcis: Vec<GroundGciJson>,
    pub role_inclusions: Vec<RoleInclusionJson>,
    pub functionality: Vec<String>,
    pub abox: Vec<String>,
}

pub fn to_json(g: &GroundKb) -> GroundKbJson {
    GroundKbJson {
        window: GroundWindow { start: g.horizon.start, last: g.horizon.last, end: g.horizon.end(), depth: g.horizon.depth },
        sources: g.sources.iter().map(ToString::to_string).collect(),
        gcis: g
            .gcis
            .iter()
            .map(|x| GroundGciJson { lhs: x.lhs.to_string(), rhs: x.rhs.to_string(), source: x.source, time: x.time })
            .collect(),
        role_inclusions: g
            .role_inclusions
            .iter()
            .filter(|r| r.from != r.to)
            .map(|r| RoleInclusionJson { role: r.role.clone(), from: r.from, to: r.to })
            .collect(),
        functionality: g.functionality.iter().map(|f| format!("funct({f})")).collect(),
        abox: g.abox.iter().map(ToString::to_string).collect(),
    }
}
