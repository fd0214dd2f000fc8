//! Line-oriented parser for the `.tkb` format.
//!
//! ```text
//! concept Person rigid
//! role hasMother global functional
//! tbox:
//! Minor & Adult <= Bot
//! Person <= G Person
//! abox:
//! hasMother(John,Ana)@0
//! -Adult(John)@3
//! ```
//!
//! Unary operators (`!`, `F`, `G`, `exists`) bind tighter than `&`, which binds
//! tighter than `|`. Both binary operators associate to the left.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::{
    validate_kb, Assertion, Concept, Fact, Gci, Role, RoleDecl, Signature, TemporalKb,
    ValidationOptions, ValidationReport,
};

pub(crate) const RESERVED: &[&str] = &["Top", "Bot", "F", "G", "exists"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject `|` (disjunction is interpreted but not part of the core grammar).
    pub strict_grammar: bool,
    /// Require `individual` declarations instead of collecting names from the ABox.
    pub strict_declarations: bool,
}

impl From<ParseOptions> for ValidationOptions {
    fn from(o: ParseOptions) -> Self {
        ValidationOptions { strict_grammar: o.strict_grammar }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String, line: usize, column: usize },
    #[error("invalid knowledge base: {0}")]
    Invalid(ValidationReport),
}

/// Parses `.tkb` text with default (lenient) options.
pub fn parse_kb(text: &str) -> Result<TemporalKb, ParseError> {
    parse_kb_with(text, ParseOptions::default())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Decls,
    Tbox,
    Abox,
}

pub fn parse_kb_with(text: &str, options: ParseOptions) -> Result<TemporalKb, ParseError> {
    let mut signature = Signature::default();
    let mut gcis = Vec::new();
    let mut abox = Vec::new();
    let mut section = Section::Decls;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = content.len() - content.trim_start().len() + 1;
        let header = match trimmed {
            "tbox:" => Some(Section::Tbox),
            "abox:" => Some(Section::Abox),
            _ => None,
        };
        if let Some(next) = header {
            if next <= section {
                return Err(syntax(line_no, column, "section header out of order"));
            }
            section = next;
            continue;
        }
        match section {
            Section::Decls => parse_decl(trimmed, line_no, column, &mut signature)?,
            Section::Tbox => {
                let mut p = LineParser::new(trimmed, line_no, column, &signature, options)?;
                let lhs = p.concept()?;
                p.expect(&Tok::Le, "`<=`")?;
                let rhs = p.concept()?;
                p.end()?;
                gcis.push(Gci::new(lhs, rhs));
            }
            Section::Abox => {
                let mut p = LineParser::new(trimmed, line_no, column, &signature, options)?;
                abox.push(p.assertion()?);
            }
        }
    }

    if !options.strict_declarations {
        for a in &abox {
            for name in a.individuals() {
                if !signature.individuals.contains(name) {
                    signature.individuals.insert(name.to_string());
                }
            }
        }
    }

    let kb = TemporalKb::new(signature, gcis, abox);
    let report = validate_kb(&kb, options.into());
    if report.is_empty() {
        Ok(kb)
    } else {
        Err(ParseError::Invalid(report))
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_decl(line: &str, line_no: usize, column: usize, sig: &mut Signature) -> Result<(), ParseError> {
    let mut words = line.split_whitespace();
    let keyword = words.next().unwrap_or_default();
    let name = words
        .next()
        .ok_or_else(|| syntax(line_no, column, "declaration needs a name"))?;
    if !is_identifier(name) || RESERVED.contains(&name) {
        return Err(syntax(line_no, column, alloc::format!("`{name}` is not a usable name")));
    }
    let flags: Vec<&str> = words.collect();
    let duplicate = || syntax(line_no, column, alloc::format!("`{name}` declared twice"));
    match keyword {
        "concept" => {
            let rigid = match flags.as_slice() {
                [] => false,
                ["rigid"] => true,
                _ => return Err(syntax(line_no, column, "expected `concept NAME [rigid]`")),
            };
            if sig.concepts.contains_key(name) {
                return Err(duplicate());
            }
            sig.declare_concept(name, rigid);
        }
        "role" => {
            let mut decl = RoleDecl::default();
            for flag in flags {
                let slot = match flag {
                    "global" => &mut decl.global,
                    "functional" => &mut decl.functional,
                    "inverse-functional" => &mut decl.inverse_functional,
                    other => {
                        return Err(syntax(line_no, column, alloc::format!("unknown role flag `{other}`")))
                    }
                };
                *slot = true;
            }
            if sig.roles.contains_key(name) {
                return Err(duplicate());
            }
            sig.declare_role(name, decl);
        }
        "individual" => {
            if !flags.is_empty() {
                return Err(syntax(line_no, column, "expected `individual NAME`"));
            }
            if !sig.individuals.insert(name.to_string()) {
                return Err(duplicate());
            }
        }
        _ => return Err(syntax(line_no, column, "expected a declaration or `tbox:`")),
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Nat(u32),
    Le,
    Inverse,
    Punct(char),
}

struct LineParser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    line: usize,
    end_column: usize,
    sig: &'a Signature,
    options: ParseOptions,
}

impl<'a> LineParser<'a> {
    fn new(
        text: &'a str,
        line: usize,
        base_column: usize,
        sig: &'a Signature,
        options: ParseOptions,
    ) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let column = base_column + text[..i].chars().count();
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(&text[start..i]), column));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..i]
                    .parse()
                    .map_err(|_| syntax(line, column, "timestamp out of range"))?;
                toks.push((Tok::Nat(value), column));
            } else if text[i..].starts_with("<=") {
                toks.push((Tok::Le, column));
                i += 2;
            } else if text[i..].starts_with("^-") {
                toks.push((Tok::Inverse, column));
                i += 2;
            } else if "!&|(),@-".contains(c) {
                toks.push((Tok::Punct(c), column));
                i += 1;
            } else {
                return Err(syntax(line, column, alloc::format!("unexpected character `{c}`")));
            }
        }
        let end_column = base_column + text.chars().count();
        Ok(LineParser { toks, pos: 0, line, end_column, sig, options })
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        syntax(self.line, self.column(), message)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let tok = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        tok
    }

    fn expect(&mut self, tok: &Tok<'_>, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected {what}")))
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn identifier(&mut self, what: &str) -> Result<(&'a str, usize), ParseError> {
        let column = self.column();
        match self.bump() {
            Some(Tok::Ident(name)) => Ok((name, column)),
            _ => {
                self.pos -= 1;
                Err(self.error(alloc::format!("expected {what}")))
            }
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Tok::Punct('|')) {
            if self.options.strict_grammar {
                return Err(self.error("`|` is not allowed under the strict grammar"));
            }
            self.pos += 1;
            let right = self.conjunction()?;
            left = Concept::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Concept, ParseError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Tok::Punct('&')) {
            self.pos += 1;
            let right = self.unary()?;
            left = Concept::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        let column = self.column();
        match self.bump() {
            Some(Tok::Punct('!')) => Ok(self.unary()?.not()),
            Some(Tok::Punct('(')) => {
                let inner = self.concept()?;
                self.expect(&Tok::Punct(')'), "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident("F")) => Ok(self.unary()?.sometime()),
            Some(Tok::Ident("G")) => Ok(self.unary()?.always()),
            Some(Tok::Ident("Top")) => Ok(Concept::Top),
            Some(Tok::Ident("Bot")) => Ok(Concept::Bottom),
            Some(Tok::Ident("exists")) => {
                let (name, column) = self.identifier("a role name")?;
                self.require_role(name, column)?;
                let inverse = if self.peek() == Some(&Tok::Inverse) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                Ok(Concept::Exists(Role { name: name.to_string(), inverse }))
            }
            Some(Tok::Ident(name)) => {
                if !self.sig.concepts.contains_key(name) {
                    return Err(undeclared("concept", name, self.line, column));
                }
                Ok(Concept::atomic(name))
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a concept"))
            }
        }
    }

    fn require_role(&self, name: &str, column: usize) -> Result<(), ParseError> {
        if self.sig.roles.contains_key(name) {
            Ok(())
        } else {
            Err(undeclared("role", name, self.line, column))
        }
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let negated = if self.peek() == Some(&Tok::Punct('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let (symbol, symbol_column) = self.identifier("a concept or role name")?;
        self.expect(&Tok::Punct('('), "`(`")?;
        let (first, _) = self.identifier("an individual name")?;
        let second = if self.peek() == Some(&Tok::Punct(',')) {
            self.pos += 1;
            Some(self.identifier("an individual name")?.0)
        } else {
            None
        };
        self.expect(&Tok::Punct(')'), "`)`")?;
        self.expect(&Tok::Punct('@'), "`@`")?;
        let time = match self.bump() {
            Some(Tok::Nat(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a timestamp"));
            }
        };
        self.end()?;
        let fact = match second {
            None => {
                if !self.sig.concepts.contains_key(symbol) {
                    return Err(undeclared("concept", symbol, self.line, symbol_column));
                }
                Fact::Concept { concept: symbol.to_string(), individual: first.to_string() }
            }
            Some(object) => {
                self.require_role(symbol, symbol_column)?;
                Fact::Role { role: symbol.to_string(), subject: first.to_string(), object: object.to_string() }
            }
        };
        Ok(Assertion { fact, negated, time })
    }
}

fn undeclared(kind: &'static str, name: &str, line: usize, column: usize) -> ParseError {
    ParseError::Undeclared { kind, name: name.to_string(), line, column }
}
