//! Canonical `.tkb` output and a DL-notation renderer for labels.

use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt::{self, Write};

use super::{Concept, Gci, Role, TemporalKb};

const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

fn write_concept(f: &mut fmt::Formatter<'_>, c: &Concept, context: u8) -> fmt::Result {
    let own = match c {
        Concept::Or(..) => OR,
        Concept::And(..) => AND,
        _ => UNARY,
    };
    if own < context {
        f.write_char('(')?;
    }
    match c {
        Concept::Top => f.write_str("Top")?,
        Concept::Bottom => f.write_str("Bot")?,
        Concept::Atomic(name) => f.write_str(name)?,
        Concept::Exists(role) => write!(f, "exists {role}")?,
        Concept::Not(inner) => {
            f.write_char('!')?;
            write_concept(f, inner, UNARY)?;
        }
        Concept::Sometime(inner) => {
            f.write_str("F ")?;
            write_concept(f, inner, UNARY)?;
        }
        Concept::Always(inner) => {
            f.write_str("G ")?;
            write_concept(f, inner, UNARY)?;
        }
        Concept::And(a, b) => {
            write_concept(f, a, AND)?;
            f.write_str(" & ")?;
            write_concept(f, b, UNARY)?;
        }
        Concept::Or(a, b) => {
            write_concept(f, a, OR)?;
            f.write_str(" | ")?;
            write_concept(f, b, AND)?;
        }
    }
    if own < context {
        f.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.inverse {
            f.write_str("^-")?;
        }
        Ok(())
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_concept(f, self, OR)
    }
}

impl fmt::Display for Gci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// Renders concepts and inclusions with DL symbols (`⊓`, `⊑`, `□F`, ...).
pub struct DlDisplay<'a, T>(pub &'a T);

fn write_dl(f: &mut fmt::Formatter<'_>, c: &Concept, context: u8) -> fmt::Result {
    let own = match c {
        Concept::Or(..) => OR,
        Concept::And(..) => AND,
        _ => UNARY,
    };
    if own < context {
        f.write_char('(')?;
    }
    match c {
        Concept::Top => f.write_char('⊤')?,
        Concept::Bottom => f.write_char('⊥')?,
        Concept::Atomic(name) => f.write_str(name)?,
        Concept::Exists(role) => {
            write!(f, "∃{}", role.name)?;
            if role.inverse {
                f.write_char('⁻')?;
            }
        }
        Concept::Not(inner) => {
            f.write_char('¬')?;
            write_dl(f, inner, UNARY)?;
        }
        Concept::Sometime(inner) => {
            f.write_str("◇F ")?;
            write_dl(f, inner, UNARY)?;
        }
        Concept::Always(inner) => {
            f.write_str("□F ")?;
            write_dl(f, inner, UNARY)?;
        }
        Concept::And(a, b) => {
            write_dl(f, a, AND)?;
            f.write_str(" ⊓ ")?;
            write_dl(f, b, UNARY)?;
        }
        Concept::Or(a, b) => {
            write_dl(f, a, OR)?;
            f.write_str(" ⊔ ")?;
            write_dl(f, b, AND)?;
        }
    }
    if own < context {
        f.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for DlDisplay<'_, Concept> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dl(f, self.0, OR)
    }
}

impl fmt::Display for DlDisplay<'_, Gci> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dl(f, &self.0.lhs, OR)?;
        f.write_str(" ⊑ ")?;
        write_dl(f, &self.0.rhs, OR)
    }
}

/// Canonical text: sorted declarations, inclusions and assertions in KB order.
pub fn serialize_kb(kb: &TemporalKb) -> String {
    let mut out = String::new();
    let sig = &kb.signature;
    for (name, decl) in &sig.concepts {
        let _ = write!(out, "concept {name}");
        if decl.rigid {
            out.push_str(" rigid");
        }
        out.push('\n');
    }
    for (name, decl) in &sig.roles {
        let _ = write!(out, "role {name}");
        for (set, flag) in [
            (decl.global, " global"),
            (decl.functional, " functional"),
            (decl.inverse_functional, " inverse-functional"),
        ] {
            if set {
                out.push_str(flag);
            }
        }
        out.push('\n');
    }
    // Individuals are implied by the ABox unless some are never mentioned.
    let mentioned: BTreeSet<&str> = kb.abox.iter().flat_map(|a| a.individuals()).collect();
    if sig.individuals.iter().any(|i| !mentioned.contains(i.as_str())) {
        for name in &sig.individuals {
            let _ = writeln!(out, "individual {name}");
        }
    }
    out.push_str("tbox:\n");
    for gci in &kb.gcis {
        let _ = writeln!(out, "{gci}");
    }
    out.push_str("abox:\n");
    for a in &kb.abox {
        let _ = writeln!(out, "{a}");
    }
    out
}
