//! Line-oriented schema text format.
//!
//! ```text
//! # comment
//! objecttype <Type> [weight <decimal>]
//! relationship <Type> [weight <decimal>] roles <role>:<Player> [<role>:<Player> ...]
//! spec <Sub> <Super>
//! poly <X> <Y>
//! ```
//!
//! Omitted weights default to 1. Declarations may reference types declared
//! further down the file. Declaring any element twice is an error.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::name::{NameError, RoleName, TypeName};
use crate::schema::{ConceptualSchema, MarkerKind, Violation};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    ObjectType { name: TypeName, weight: Option<Weight> },
    Relationship { name: TypeName, weight: Option<Weight>, roles: Vec<(RoleName, TypeName)> },
    Pair { kind: MarkerKind, first: TypeName, second: TypeName },
}

impl fmt::Display for Declaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let weight = |f: &mut fmt::Formatter<'_>, w: &Option<Weight>| match w {
            Some(w) => write!(f, " weight {w}"),
            None => Ok(()),
        };
        match self {
            Declaration::ObjectType { name, weight: w } => {
                write!(f, "objecttype {name}")?;
                weight(f, w)
            }
            Declaration::Relationship { name, weight: w, roles } => {
                write!(f, "relationship {name}")?;
                weight(f, w)?;
                f.write_str(" roles")?;
                for (role, player) in roles {
                    write!(f, " {role}:{player}")?;
                }
                Ok(())
            }
            Declaration::Pair { kind, first, second } => {
                write!(f, "{} {first} {second}", kind.keyword())
            }
        }
    }
}

/// A parsed schema file: its declarations in source order with their
/// 1-based line numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaDocument {
    pub source_name: String,
    pub declarations: Vec<(usize, Declaration)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedViolation {
    pub line: Option<usize>,
    pub violation: Violation,
}

impl fmt::Display for LocatedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.violation),
            None => write!(f, "{}", self.violation),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}", join_violations(.0))]
    Invalid(Vec<LocatedViolation>),
}

fn join_violations(vs: &[LocatedViolation]) -> String {
    let mut out = String::new();
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{v}");
    }
    out
}

impl IngestError {
    /// Line of the first reported problem, if known.
    pub fn line(&self) -> Option<usize> {
        match self {
            IngestError::Syntax { line, .. } => Some(*line),
            IngestError::Invalid(vs) => vs.iter().find_map(|v| v.line),
        }
    }
}

/// Parses schema text and validates the result.
pub fn parse_schema(text: &str) -> Result<ConceptualSchema, IngestError> {
    parse_document("", text)?.to_schema()
}

/// Writes `schema` in canonical form: object types, relationship types,
/// spec pairs, then poly pairs, each section sorted by name. Weights equal
/// to 1 are omitted.
pub fn serialize_schema(schema: &ConceptualSchema) -> String {
    let mut out = String::new();
    for decl in canonical_declarations(schema) {
        let _ = writeln!(out, "{decl}");
    }
    out
}

fn canonical_declarations(schema: &ConceptualSchema) -> Vec<Declaration> {
    let explicit = |t: &TypeName| Some(schema.weight(t)).filter(|w| *w != Weight::ONE);
    let mut decls = Vec::new();
    for name in &schema.obj_types {
        decls.push(Declaration::ObjectType { name: name.clone(), weight: explicit(name) });
    }
    for name in &schema.rel_types {
        let roles = schema
            .roles
            .get(name)
            .into_iter()
            .flatten()
            .map(|role| (role.clone(), schema.player[role].clone()))
            .collect();
        decls.push(Declaration::Relationship { name: name.clone(), weight: explicit(name), roles });
    }
    for kind in [MarkerKind::Spec, MarkerKind::Poly] {
        for (first, second) in schema.pairs(kind) {
            decls.push(Declaration::Pair { kind, first: first.clone(), second: second.clone() });
        }
    }
    decls
}

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    pos: usize,
    /// Column just past the end of the line, for "expected more" errors.
    end_column: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        let mut column = 0;
        for (byte, ch) in text.char_indices() {
            column += 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    items.push((c, &text[b..byte]));
                }
            } else if start.is_none() {
                start = Some((byte, column));
            }
        }
        if let Some((b, c)) = start {
            items.push((c, &text[b..]));
        }
        Tokens { line, items, pos: 0, end_column: column + 1 }
    }

    fn error(&self, column: usize, message: String) -> IngestError {
        IngestError::Syntax { line: self.line, column, message }
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|(_, t)| *t)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), IngestError> {
        match self.items.get(self.pos) {
            Some(&item) => {
                self.pos += 1;
                Ok(item)
            }
            None => Err(self.error(self.end_column, format!("expected {what}"))),
        }
    }

    fn type_name(&mut self, what: &str) -> Result<TypeName, IngestError> {
        let (col, tok) = self.next(what)?;
        TypeName::new(tok).map_err(|e| self.name_error(col, what, e))
    }

    fn name_error(&self, column: usize, what: &str, e: NameError) -> IngestError {
        self.error(column, format!("invalid {what}: {e}"))
    }

    fn optional_weight(&mut self) -> Result<Option<Weight>, IngestError> {
        if self.peek() != Some("weight") {
            return Ok(None);
        }
        self.pos += 1;
        let (col, tok) = self.next("weight value")?;
        tok.parse::<Weight>()
            .map(Some)
            .map_err(|e| self.error(col, format!("{e}")))
    }

    fn finish(&self) -> Result<(), IngestError> {
        match self.items.get(self.pos) {
            Some((col, tok)) => Err(self.error(*col, format!("unexpected token {tok:?}"))),
            None => Ok(()),
        }
    }
}

fn parse_line(tokens: &mut Tokens<'_>) -> Result<Option<Declaration>, IngestError> {
    let Some(&(col, keyword)) = tokens.items.first() else {
        return Ok(None);
    };
    tokens.pos = 1;
    let decl = match keyword {
        "objecttype" => {
            let name = tokens.type_name("type name")?;
            let weight = tokens.optional_weight()?;
            Declaration::ObjectType { name, weight }
        }
        "relationship" => {
            let name = tokens.type_name("relationship name")?;
            let weight = tokens.optional_weight()?;
            let (col, tok) = tokens.next("`roles`")?;
            if tok != "roles" {
                return Err(tokens.error(col, format!("expected `roles`, found {tok:?}")));
            }
            let mut roles = Vec::new();
            while tokens.peek().is_some() {
                let (col, tok) = tokens.next("role")?;
                let Some((role, player)) = tok.split_once(':') else {
                    return Err(tokens.error(col, format!("expected <role>:<player>, found {tok:?}")));
                };
                let role = RoleName::new(role).map_err(|e| tokens.name_error(col, "role name", e))?;
                let player_col = col + role.as_str().chars().count() + 1;
                let player = TypeName::new(player)
                    .map_err(|e| tokens.name_error(player_col, "player type", e))?;
                roles.push((role, player));
            }
            if roles.is_empty() {
                return Err(tokens.error(tokens.end_column, "relationship needs at least one role".into()));
            }
            Declaration::Relationship { name, weight, roles }
        }
        "spec" | "poly" => {
            let kind = if keyword == "spec" { MarkerKind::Spec } else { MarkerKind::Poly };
            let first = tokens.type_name("type name")?;
            let second = tokens.type_name("type name")?;
            Declaration::Pair { kind, first, second }
        }
        other => {
            return Err(tokens.error(col, format!("unknown declaration {other:?}")));
        }
    };
    tokens.finish()?;
    Ok(Some(decl))
}

/// Parses the declarations of a schema file without checking
/// cross-references between them.
pub fn parse_document(source_name: &str, text: &str) -> Result<SchemaDocument, IngestError> {
    let mut declarations = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = Tokens::new(idx + 1, content);
        if let Some(decl) = parse_line(&mut tokens)? {
            declarations.push((idx + 1, decl));
        }
    }
    Ok(SchemaDocument { source_name: source_name.into(), declarations })
}

impl SchemaDocument {
    /// Builds the schema, rejecting duplicate declarations and reporting
    /// validation violations against the line that caused them.
    pub fn to_schema(&self) -> Result<ConceptualSchema, IngestError> {
        let mut schema = ConceptualSchema::new();
        let mut type_lines: BTreeMap<TypeName, usize> = BTreeMap::new();
        let mut role_lines: BTreeMap<RoleName, usize> = BTreeMap::new();
        let mut pair_lines: BTreeMap<(MarkerKind, TypeName, TypeName), usize> = BTreeMap::new();

        let duplicate = |line: usize, message: String| IngestError::Syntax { line, column: 1, message };

        for (line, decl) in &self.declarations {
            let line = *line;
            match decl {
                Declaration::ObjectType { name, .. } | Declaration::Relationship { name, .. } => {
                    if let Some(first) = type_lines.insert(name.clone(), line) {
                        return Err(duplicate(
                            line,
                            format!("duplicate declaration of type {name} (first declared on line {first})"),
                        ));
                    }
                }
                Declaration::Pair { kind, first, second } => {
                    let key = (*kind, first.clone(), second.clone());
                    if let Some(prev) = pair_lines.insert(key, line) {
                        return Err(duplicate(
                            line,
                            format!("duplicate declaration `{decl}` (first declared on line {prev})"),
                        ));
                    }
                }
            }
            match decl {
                Declaration::ObjectType { name, weight } => {
                    schema.add_object_type(name.clone(), weight.unwrap_or_default());
                }
                Declaration::Relationship { name, weight, roles } => {
                    for (role, _) in roles {
                        if let Some(prev) = role_lines.insert(role.clone(), line) {
                            return Err(duplicate(
                                line,
                                format!("duplicate declaration of role {role} (first declared on line {prev})"),
                            ));
                        }
                    }
                    schema.add_relationship(name.clone(), weight.unwrap_or_default(), roles.iter().cloned());
                }
                Declaration::Pair { kind, first, second } => {
                    schema.add_pair(*kind, first.clone(), second.clone());
                }
            }
        }

        let violations = schema.validate();
        if violations.is_empty() {
            return Ok(schema);
        }
        let located = violations
            .into_iter()
            .map(|violation| {
                let line = match &violation {
                    Violation::UnknownPlayer { role, .. }
                    | Violation::MissingPlayer(role)
                    | Violation::RoleNotPartitioned { role, .. } => role_lines.get(role).copied(),
                    Violation::PairNotFromObjectType { kind, first, second }
                    | Violation::PairToUnknownType { kind, first, second }
                    | Violation::SymmetricPair { kind, first, second } => pair_lines
                        .get(&(*kind, first.clone(), second.clone()))
                        .copied(),
                    Violation::UnclassifiedType(t)
                    | Violation::AmbiguousKind(t)
                    | Violation::UndeclaredType(t)
                    | Violation::RolesOnNonRelationship(t)
                    | Violation::EmptyRelationship(t)
                    | Violation::MissingWeight(t)
                    | Violation::WeightForUnknownType(t) => type_lines.get(t).copied(),
                };
                LocatedViolation { line, violation }
            })
            .collect();
        Err(IngestError::Invalid(located))
    }
}
