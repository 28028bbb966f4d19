//! Interactive spider sessions: a schema, the current tree and the log of
//! operations that produced it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use spiderq_core::{
    build_graph, parse_schema, prune, render, respider_bounded, root_expr, spider_query_bounded, verbalize,
    ConceptualSchema, IngestError, PathError, SchemaGraph, SpiderError, SpiderGraph, SpiderNodeId, TypeName,
};

use crate::doc::{DocError, SpiderGraphDoc};

/// Largest tree a session will grow before giving up.
pub const MAX_TREE_NODES: usize = 1_000_000;

/// A parsed schema together with its graph.
#[derive(Debug, Clone)]
pub struct LoadedSchema {
    pub text: String,
    pub schema: ConceptualSchema,
    pub graph: SchemaGraph,
}

impl LoadedSchema {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let schema = parse_schema(text)?;
        let graph = build_graph(&schema).expect("parsed schemas are valid");
        Ok(LoadedSchema { text: text.into(), schema, graph })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Spider { root: String },
    Prune { node: String },
    Respider { node: String },
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Spider { root } => write!(f, "spider:{root}"),
            Op::Prune { node } => write!(f, "prune:{node}"),
            Op::Respider { node } => write!(f, "respider:{node}"),
        }
    }
}

/// Parses a `prune:nK` / `respider:nK` script step.
impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("invalid op {s:?}, expected prune:nK or respider:nK"))?;
        arg.parse::<SpiderNodeId>().map_err(|e| e.to_string())?;
        match kind {
            "prune" => Ok(Op::Prune { node: arg.into() }),
            "respider" => Ok(Op::Respider { node: arg.into() }),
            _ => Err(format!("unknown op {kind:?}, expected prune or respider")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OpError {
    #[error("unknown root type {0}")]
    UnknownRootType(String),
    #[error("{0}")]
    BadNodeId(String),
    /// The engine refused the operation; the session is unchanged.
    #[error("{0}")]
    Rejected(SpiderError),
    #[error("spider tree exceeded {MAX_TREE_NODES} nodes")]
    TooLarge,
}

impl From<SpiderError> for OpError {
    fn from(e: SpiderError) -> Self {
        match e {
            SpiderError::NodeLimit { .. } => OpError::TooLarge,
            SpiderError::UnknownType(t) => OpError::UnknownRootType(t.to_string()),
            other => OpError::Rejected(other),
        }
    }
}

fn node(id: &str) -> Result<SpiderNodeId, OpError> {
    id.parse().map_err(|e: spiderq_core::spider::NodeIdError| OpError::BadNodeId(e.to_string()))
}

/// Runs a fresh spider query from `root`.
pub fn start(schema: &LoadedSchema, root: &str) -> Result<SpiderGraph, OpError> {
    let root_type = TypeName::new(root).map_err(|_| OpError::UnknownRootType(root.into()))?;
    Ok(spider_query_bounded(&schema.graph, &schema.schema, &root_type, MAX_TREE_NODES)?)
}

/// Applies one operation to `tree`. A spider op replaces the tree.
pub fn apply(schema: &LoadedSchema, tree: &SpiderGraph, op: &Op) -> Result<SpiderGraph, OpError> {
    match op {
        Op::Spider { root } => start(schema, root),
        Op::Prune { node: id } => Ok(prune(tree, node(id)?)?),
        Op::Respider { node: id } => Ok(respider_bounded(
            &schema.graph,
            &schema.schema,
            tree,
            node(id)?,
            MAX_TREE_NODES,
        )?),
    }
}

/// Rebuilds a tree from an operation log, which must begin with a spider
/// op.
pub fn replay<'a>(schema: &LoadedSchema, ops: impl IntoIterator<Item = &'a Op>) -> Result<SpiderGraph, OpError> {
    let mut ops = ops.into_iter();
    let mut tree = match ops.next() {
        Some(Op::Spider { root }) => start(schema, root)?,
        Some(other) => return Err(OpError::BadNodeId(format!("log starts with {other} instead of a spider op"))),
        None => return Err(OpError::BadNodeId("empty log".into())),
    };
    for op in ops {
        tree = apply(schema, &tree, op)?;
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    #[serde(flatten)]
    pub op: Op,
    /// Milliseconds since the Unix epoch.
    pub at: u64,
}

/// A persisted session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub schema_id: String,
    pub root_type: String,
    pub graph: SpiderGraphDoc,
    pub log: Vec<LogEntry>,
    pub created: u64,
    pub updated: u64,
}

impl Session {
    pub fn tree(&self) -> Result<SpiderGraph, DocError> {
        self.graph.to_graph()
    }

    /// Replays the log and checks that it reproduces the stored tree
    /// document byte for byte.
    pub fn replay_matches(&self, schema: &LoadedSchema) -> Result<bool, OpError> {
        let tree = replay(schema, self.log.iter().map(|e| &e.op))?;
        let replayed = serde_json::to_string(&SpiderGraphDoc::new(&tree, &schema.schema)).expect("serializable");
        let stored = serde_json::to_string(&self.graph).expect("serializable");
        Ok(replayed == stored)
    }
}

/// Output formats shared by the CLI and the service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// The serialized spider tree document.
    Tree,
    /// The rendered path expression.
    Expr,
    /// The verbalized path expression.
    Verbal,
    /// Tree, expression and verbalization together.
    Json,
}

/// The expression and verbalization of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendering {
    pub tree: SpiderGraphDoc,
    pub expression: String,
    pub verbalization: String,
}

impl Rendering {
    pub fn new(schema: &ConceptualSchema, tree: &SpiderGraph) -> Result<Self, PathError> {
        let expr = root_expr(tree, schema)?;
        Ok(Rendering {
            tree: SpiderGraphDoc::new(tree, schema),
            expression: render(&expr),
            verbalization: verbalize(&expr, schema),
        })
    }

    /// The text emitted for `format`, newline-terminated.
    pub fn emit(&self, format: Format) -> String {
        let mut out = match format {
            Format::Tree => serde_json::to_string_pretty(&self.tree).expect("serializable"),
            Format::Expr => self.expression.clone(),
            Format::Verbal => self.verbalization.clone(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable"),
        };
        out.push('\n');
        out
    }
}

pub type SharedSchema = Arc<LoadedSchema>;
