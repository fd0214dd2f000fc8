//! Structural validation. Violations are data: each carries a stable code.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::parse::RESERVED;
use super::{Concept, Fact, Symbol, TemporalKb};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    pub strict_grammar: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationCode {
    TemporalLhs,
    DisjunctionInStrictGrammar,
    UndeclaredConcept,
    UndeclaredRole,
    UndeclaredIndividual,
    DuplicateAssertion,
    ReservedName,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::TemporalLhs => "TEMPORAL_LHS",
            ViolationCode::DisjunctionInStrictGrammar => "DISJUNCTION_IN_STRICT_GRAMMAR",
            ViolationCode::UndeclaredConcept => "UNDECLARED_CONCEPT",
            ViolationCode::UndeclaredRole => "UNDECLARED_ROLE",
            ViolationCode::UndeclaredIndividual => "UNDECLARED_INDIVIDUAL",
            ViolationCode::DuplicateAssertion => "DUPLICATE_ASSERTION",
            ViolationCode::ReservedName => "RESERVED_NAME",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }

    fn push(&mut self, code: ViolationCode, message: String) {
        self.violations.push(Violation { code, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.code, v.message)?;
        }
        Ok(())
    }
}

pub fn validate_kb(kb: &TemporalKb, options: ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    let sig = &kb.signature;

    for name in sig.concepts.keys().chain(sig.roles.keys()) {
        if RESERVED.contains(&name.as_str()) {
            report.push(ViolationCode::ReservedName, alloc::format!("`{name}` is reserved"));
        }
    }

    for (i, gci) in kb.gcis.iter().enumerate() {
        if gci.lhs.is_temporal() {
            report.push(
                ViolationCode::TemporalLhs,
                alloc::format!("inclusion {} has a temporal operator on its left-hand side", i + 1),
            );
        }
        if options.strict_grammar && (gci.lhs.contains_or() || gci.rhs.contains_or()) {
            report.push(
                ViolationCode::DisjunctionInStrictGrammar,
                alloc::format!("inclusion {} uses disjunction", i + 1),
            );
        }
        for side in [&gci.lhs, &gci.rhs] {
            check_symbols(kb, side, &mut report);
        }
    }

    let mut seen = BTreeSet::new();
    for a in &kb.abox {
        if !seen.insert(a) {
            report.push(ViolationCode::DuplicateAssertion, alloc::format!("{a} occurs twice"));
        }
        match &a.fact {
            Fact::Concept { concept, .. } if !sig.concepts.contains_key(concept) => {
                report.push(ViolationCode::UndeclaredConcept, alloc::format!("`{concept}` in {a}"));
            }
            Fact::Role { role, .. } if !sig.roles.contains_key(role) => {
                report.push(ViolationCode::UndeclaredRole, alloc::format!("`{role}` in {a}"));
            }
            _ => {}
        }
        for name in a.individuals() {
            if !sig.individuals.contains(name) {
                report.push(ViolationCode::UndeclaredIndividual, alloc::format!("`{name}` in {a}"));
            }
        }
    }
    report
}

fn check_symbols(kb: &TemporalKb, concept: &Concept, report: &mut ValidationReport) {
    let mut missing: Vec<(ViolationCode, String)> = Vec::new();
    concept.visit_symbols(&mut |s| match s {
        Symbol::Concept(name) if !kb.signature.concepts.contains_key(name) => {
            missing.push((ViolationCode::UndeclaredConcept, name.to_string()));
        }
        Symbol::Role(role) if !kb.signature.roles.contains_key(&role.name) => {
            missing.push((ViolationCode::UndeclaredRole, role.name.clone()));
        }
        _ => {}
    });
    for (code, name) in missing {
        report.push(code, alloc::format!("`{name}` in a TBox inclusion"));
    }
}
