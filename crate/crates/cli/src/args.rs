//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "temporepair", version, about = "Consistency checking, conflict explanation and repair for temporal DL-Lite knowledge bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency (exit 0 consistent, 1 inconsistent).
    Check(CheckArgs),
    /// Print the grounded, atemporal KB.
    Translate(TranslateArgs),
    /// List minimal conflicts and the inconsistency graph.
    Explain(ExplainArgs),
    /// Compute a maximal consistent ABox.
    Repair(RepairArgs),
    /// Decide consistency by direct model search over a fixed domain.
    Oracle(OracleArgs),
    /// Write random knowledge bases.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Knowledge base in `.tkb` syntax.
    pub input: PathBuf,
    /// Reject disjunction and require `individual` declarations.
    #[arg(long)]
    pub strict_grammar: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReasonerArgs {
    /// F and G range over later time points only.
    #[arg(long)]
    pub strict_future: bool,
    /// Give up after this many SAT conflicts per check (exit 3).
    #[arg(long, value_name = "N")]
    pub conflict_budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub reasoner: ReasonerArgs,
    /// Print solver statistics on stderr.
    #[arg(long, value_enum, value_name = "FORMAT")]
    pub stats: Option<StatsFormat>,
    /// Write a JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroundFormat {
    Gkb,
    Json,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub input: Input,
    /// Output syntax.
    #[arg(long, value_enum, default_value = "gkb")]
    pub format: GroundFormat,
    /// F and G range over later time points only.
    #[arg(long)]
    pub strict_future: bool,
    /// Write here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SigmaArgs {
    /// Duration for one rigid concept or global role.
    #[arg(long = "sigma", value_name = "NAME=NAT", value_parser = parse_sigma)]
    pub sigma: Vec<(String, u64)>,
    /// Duration for rigid predicates without `--sigma` (default: number of observed time points).
    #[arg(long, value_name = "NAT")]
    pub default_sigma: Option<u64>,
}

fn parse_sigma(s: &str) -> Result<(String, u64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=NAT, got `{s}`"))?;
    let value = value.trim().parse().map_err(|e| format!("bad duration in `{s}`: {e}"))?;
    if name.trim().is_empty() {
        return Err(format!("missing name in `{s}`"));
    }
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub reasoner: ReasonerArgs,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    /// Stop after this many conflicts.
    #[arg(long, default_value_t = 256, value_name = "N")]
    pub mus_budget: usize,
    /// Skip the violated-axiom labels.
    #[arg(long)]
    pub no_labels: bool,
    /// Write the inconsistency graph in DOT syntax.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write a JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub reasoner: ReasonerArgs,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    /// Break remaining ties randomly with this seed.
    #[arg(long, value_name = "SEED")]
    pub randomize_ties: Option<u64>,
    /// Minimal conflicts to collect per round.
    #[arg(long, default_value_t = 256, value_name = "N")]
    pub mus_budget: usize,
    /// Write a JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Write the repaired KB as `.tkb`.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: Input,
    /// Elements in the domain (default: named individuals plus one witness per existential role).
    #[arg(long, value_name = "N")]
    pub domain_size: Option<usize>,
    /// Window as `START:END` (default: the ABox span extended by the temporal depth).
    #[arg(long, value_name = "START:END", value_parser = parse_window)]
    pub horizon: Option<(u32, u32)>,
    /// F and G range over later time points only.
    #[arg(long)]
    pub strict_future: bool,
    /// Rigid symbols keep one extension across time instead of only persisting forward.
    #[arg(long)]
    pub semantic_rigidity: bool,
    /// Search nodes before giving up (exit 3).
    #[arg(long, value_name = "N")]
    pub node_budget: Option<u64>,
    /// Raise the size limits on domain, window and vocabulary.
    #[arg(long)]
    pub widened: bool,
    /// Print the model found.
    #[arg(long)]
    pub show_model: bool,
    /// Write a JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected START:END, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("bad start in `{s}`: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("bad end in `{s}`: {e}"))?;
    if a > b {
        return Err(format!("empty window `{s}`"));
    }
    Ok((a, b))
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Seed for the ChaCha generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Concept names and role names.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// GCIs per TBox.
    #[arg(long, default_value_t = 4)]
    pub lt: usize,
    /// Concept expression length.
    #[arg(long, default_value_t = 3)]
    pub lc: usize,
    /// Temporal operator probability.
    #[arg(long, default_value_t = 0.5)]
    pub pt: f64,
    /// Global role probability.
    #[arg(long, default_value_t = 0.5)]
    pub pg: f64,
    /// Assertions per ABox.
    #[arg(long, default_value_t = 8)]
    pub abox_size: usize,
    /// Largest timestamp.
    #[arg(long, default_value_t = 3)]
    pub max_time: u32,
    /// Number of KBs.
    #[arg(long, default_value_t = 1)]
    pub batch: usize,
    /// Probability that an assertion is negated.
    #[arg(long, default_value_t = 0.0)]
    pub negative_prob: f64,
    /// Probability that a concept name is rigid.
    #[arg(long, default_value_t = 0.0)]
    pub rigid_prob: f64,
    /// Probability that a role is functional.
    #[arg(long, default_value_t = 0.0)]
    pub functional_prob: f64,
    /// Write `kb_0000.tkb`, `kb_0001.tkb`, ... here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Write a JSON report.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}
