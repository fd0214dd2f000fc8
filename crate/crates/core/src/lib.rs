//! Consistency checking, conflict explanation and best temporal repair for
//! temporal DL-Lite knowledge bases.
//!
//! A [`kb::TemporalKb`] pairs a TBox whose inclusions may use the future
//! operators `F` (sometime) and `G` (always) on their right-hand side with a
//! timestamped ABox. The pipeline is:
//!
//! 1. [`translate`] grounds the KB into time-indexed atemporal DL-Lite over the
//!    window `[l, n + m]` (`l`/`n` the first/last ABox timestamp, `m` the
//!    temporal depth of the TBox).
//! 2. [`reasoner`] decides the grounded KB with a bounded-domain propositional
//!    encoding and the internal [`sat`] engine. [`reasoner::oracle`] decides the
//!    same question directly from the temporal semantics for cross-checking.
//! 3. [`explain`] extracts minimal conflicting assertion sets and assembles the
//!    inconsistency graph.
//! 4. [`repair`] removes a greedy weighted vertex cover, then restores
//!    maximality.
//!
//! [`bench`] generates seeded random knowledge bases for fuzzing and scaling.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bench;
pub mod explain;
pub mod kb;
pub mod reasoner;
pub mod repair;
pub mod sat;
pub mod translate;

pub use kb::{parse_kb, Assertion, Concept, Fact, Gci, Role, Signature, TemporalKb, Timestamp};
pub use reasoner::{check_consistency, ReasonerOptions, Verdict};
pub use repair::{repair, RepairConfig, RepairResult};
pub use translate::{translate_kb, GroundKb, Horizon, TranslateOptions};

/// A small KB about John's status and his mothers, in `.tkb` syntax.
pub const EXAMPLE_KB: &str = "\
# Minors and adults are persons, but disjoint; persons have one mother.
concept Person rigid
concept Adult rigid
concept Minor
role hasMother global functional

tbox:
Adult <= Person
Minor <= Person
Person <= G Person
Adult <= G Adult
Minor & Adult <= Bot
Person <= exists hasMother

abox:
Person(John)@0
Minor(John)@1
Adult(John)@2
Minor(John)@3
Minor(John)@4
hasMother(John,Ana)@0
hasMother(John,Eva)@1
hasMother(John,Maria)@2
";
