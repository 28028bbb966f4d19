//! Path expressions and their construction from spider trees.
//!
//! A node with children becomes a confluence of one branch per outgoing
//! edge, headed by the node's type. A leaf becomes the bare type. Each edge
//! is a segment `child-expression o connector o parent-type`, where the
//! connector is empty for spec/poly edges, the role itself when the parent
//! is the relationship owning the role, and the reversed role otherwise.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::EdgeLabel;
use crate::name::{RoleName, TypeName};
use crate::schema::ConceptualSchema;
use crate::spider::{SpiderEdge, SpiderGraph, SpiderNodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpression {
    TypeAtom(TypeName),
    RoleStep { role: RoleName, reversed: bool },
    Concat(Vec<PathExpression>),
    Confluence { branches: Vec<Branch>, head: TypeName },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub attr: String,
    pub expr: PathExpression,
}

impl PathExpression {
    /// Concatenates `parts`, splicing in the parts of nested
    /// concatenations. A single part is returned as is.
    pub fn concat(parts: impl IntoIterator<Item = PathExpression>) -> PathExpression {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                PathExpression::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one part")
        } else {
            PathExpression::Concat(flat)
        }
    }

    /// Every type occurrence in the expression in rendering order: type
    /// atoms and confluence heads.
    pub fn type_occurrences(&self) -> Vec<&TypeName> {
        let mut out = Vec::new();
        self.collect_types(&mut out);
        out
    }

    fn collect_types<'a>(&'a self, out: &mut Vec<&'a TypeName>) {
        match self {
            PathExpression::TypeAtom(t) => out.push(t),
            PathExpression::RoleStep { .. } => {}
            PathExpression::Concat(parts) => parts.iter().for_each(|p| p.collect_types(out)),
            PathExpression::Confluence { branches, head } => {
                branches.iter().for_each(|b| b.expr.collect_types(out));
                out.push(head);
            }
        }
    }

    /// Checks the shape produced by the compiler: concatenations have at
    /// least two parts, none of them a concatenation, begin and end with an
    /// atom or confluence, and have only role steps in between;
    /// confluences have at least one branch and distinct branch names.
    pub fn check_well_formed(&self) -> Result<(), String> {
        match self {
            PathExpression::TypeAtom(_) => Ok(()),
            PathExpression::RoleStep { role, .. } => {
                Err(format!("role step {role} outside a concatenation"))
            }
            PathExpression::Concat(parts) => {
                if parts.len() < 2 {
                    return Err("concatenation of fewer than two parts".into());
                }
                let last = parts.len() - 1;
                for (i, part) in parts.iter().enumerate() {
                    let end = i == 0 || i == last;
                    match part {
                        PathExpression::Concat(_) => return Err("nested concatenation".into()),
                        PathExpression::RoleStep { .. } if end => {
                            return Err("concatenation starts or ends with a role step".into())
                        }
                        PathExpression::TypeAtom(_) | PathExpression::Confluence { .. } if !end => {
                            return Err("term in the middle of a concatenation".into())
                        }
                        PathExpression::Confluence { .. } => part.check_well_formed()?,
                        _ => {}
                    }
                }
                Ok(())
            }
            PathExpression::Confluence { branches, .. } => {
                if branches.is_empty() {
                    return Err("confluence without branches".into());
                }
                let mut seen = BTreeSet::new();
                for b in branches {
                    if !seen.insert(b.attr.as_str()) {
                        return Err(format!("branch name {} used twice", b.attr));
                    }
                    b.expr.check_well_formed()?;
                }
                Ok(())
            }
        }
    }
}

/// Hands out branch names: the base name followed by a counter starting at
/// 1, skipping any name already handed out.
#[derive(Debug, Clone, Default)]
pub struct AttrNamer {
    counters: BTreeMap<String, u32>,
    used: BTreeSet<String>,
}

impl AttrNamer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let counter = self.counters.entry(base.into()).or_insert(0);
        loop {
            *counter += 1;
            let name = format!("{base}{counter}");
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// How an edge label links a child expression to its parent type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Connector {
    /// Spec or poly edge: plain concatenation.
    Plain,
    /// The parent is the relationship type owning the role.
    Forward(RoleName),
    Reverse(RoleName),
}

impl Connector {
    pub fn step(&self) -> Option<PathExpression> {
        match self {
            Connector::Plain => None,
            Connector::Forward(role) => Some(PathExpression::RoleStep { role: role.clone(), reversed: false }),
            Connector::Reverse(role) => Some(PathExpression::RoleStep { role: role.clone(), reversed: true }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("unknown node {0}")]
    UnknownNode(SpiderNodeId),
    #[error("role {0} is not part of the schema")]
    UnknownRole(RoleName),
}

pub fn connector(
    label: &EdgeLabel,
    parent_type: &TypeName,
    schema: &ConceptualSchema,
) -> Result<Connector, PathError> {
    let role = match label {
        EdgeLabel::Spec | EdgeLabel::Poly => return Ok(Connector::Plain),
        EdgeLabel::Role(role) => role,
    };
    if !schema.player.contains_key(role) {
        return Err(PathError::UnknownRole(role.clone()));
    }
    if schema.is_rel_type(parent_type) && schema.has_role(parent_type, role) {
        Ok(Connector::Forward(role.clone()))
    } else {
        Ok(Connector::Reverse(role.clone()))
    }
}

pub fn path_seg(
    g: &SpiderGraph,
    edge: &SpiderEdge,
    schema: &ConceptualSchema,
    namer: &mut AttrNamer,
) -> Result<PathExpression, PathError> {
    let parent_type = g.type_of(edge.parent).ok_or(PathError::UnknownNode(edge.parent))?;
    let child = node_expr(g, edge.child, schema, namer)?;
    let step = connector(&edge.label, parent_type, schema)?.step();
    Ok(PathExpression::concat(
        core::iter::once(child)
            .chain(step)
            .chain(core::iter::once(PathExpression::TypeAtom(parent_type.clone()))),
    ))
}

/// The expression for the subtree rooted at `n`. Branches follow child
/// order and are named after the child's type; each branch is named before
/// its own subtree is compiled.
pub fn node_expr(
    g: &SpiderGraph,
    n: SpiderNodeId,
    schema: &ConceptualSchema,
    namer: &mut AttrNamer,
) -> Result<PathExpression, PathError> {
    let head = g.type_of(n).ok_or(PathError::UnknownNode(n))?;
    if g.is_leaf(n) {
        return Ok(PathExpression::TypeAtom(head.clone()));
    }
    let mut branches = Vec::with_capacity(g.children(n).len());
    for edge in g.out_edges(n) {
        let child_type = g.type_of(edge.child).ok_or(PathError::UnknownNode(edge.child))?;
        let attr = namer.fresh(child_type.as_str());
        let expr = path_seg(g, &edge, schema, namer)?;
        branches.push(Branch { attr, expr });
    }
    Ok(PathExpression::Confluence { branches, head: head.clone() })
}

/// The complete expression of a spider tree.
pub fn root_expr(g: &SpiderGraph, schema: &ConceptualSchema) -> Result<PathExpression, PathError> {
    node_expr(g, g.root(), schema, &mut AttrNamer::new())
}
