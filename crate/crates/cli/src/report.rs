//! JSON report shapes. Field order is fixed so identical runs produce
//! identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use temporepair_core::reasoner::ReasonerStats;

#[derive(Serialize)]
pub struct Window {
    pub start: u32,
    pub end: u32,
}

#[derive(Serialize)]
pub struct Stats {
    pub variables: u64,
    pub clauses: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

impl From<ReasonerStats> for Stats {
    fn from(s: ReasonerStats) -> Self {
        Stats {
            variables: s.variables,
            clauses: s.clauses,
            decisions: s.decisions,
            propagations: s.propagations,
            conflicts: s.conflicts,
        }
    }
}

#[derive(Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub verdict: String,
    pub window: Window,
    pub assertions: usize,
    pub stats: Stats,
}

#[derive(Serialize)]
pub struct Mus {
    pub assertions: Vec<String>,
    pub label: String,
}

#[derive(Serialize)]
pub struct Vertex {
    pub assertion: String,
    #[serde(rename = "I_d")]
    pub degree: usize,
    pub w_t: u64,
}

#[derive(Serialize)]
pub struct Edge {
    pub members: Vec<String>,
    pub label: String,
}

#[derive(Serialize)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Serialize)]
pub struct ExplainReport {
    pub command: &'static str,
    pub consistent: bool,
    pub complete: bool,
    pub muses: Vec<Mus>,
    pub graph: Graph,
}

#[derive(Serialize)]
pub struct Removed {
    pub assertion: String,
    #[serde(rename = "I_d")]
    pub degree: usize,
    pub w_t: u64,
    pub step: usize,
    pub round: usize,
}

#[derive(Serialize)]
pub struct RepairReport {
    pub command: &'static str,
    pub removed: Vec<Removed>,
    pub restored: Vec<String>,
    pub repaired: Vec<String>,
    pub iterations: usize,
    pub maximal: bool,
    pub complete_enumeration: bool,
    pub default_sigma: u64,
    pub sigma: BTreeMap<String, u64>,
}

#[derive(Serialize)]
pub struct Model {
    pub domain: Vec<String>,
    pub concepts: BTreeMap<String, Vec<Vec<String>>>,
    pub roles: BTreeMap<String, Vec<Vec<[String; 2]>>>,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub command: &'static str,
    pub verdict: String,
    pub window: Window,
    pub domain_size: usize,
    pub nodes: u64,
    pub model: Option<Model>,
}

#[derive(Serialize)]
pub struct GenReport {
    pub command: &'static str,
    pub seed: u64,
    pub files: Vec<String>,
}
