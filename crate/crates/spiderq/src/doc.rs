//! JSON documents for schema graphs and spider trees.

use serde::{Deserialize, Serialize};

use spiderq_core::{
    ConceptualSchema, EdgeLabel, IngestError, RoleName, SchemaGraph, SpiderEdge, SpiderError, SpiderGraph, SpiderNodeId,
    TypeName,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LabelDoc {
    Role { role: String },
    Spec,
    Poly,
}

impl From<&EdgeLabel> for LabelDoc {
    fn from(label: &EdgeLabel) -> Self {
        match label {
            EdgeLabel::Role(r) => LabelDoc::Role { role: r.to_string() },
            EdgeLabel::Spec => LabelDoc::Spec,
            EdgeLabel::Poly => LabelDoc::Poly,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error(transparent)]
    Name(#[from] spiderq_core::NameError),
    #[error(transparent)]
    NodeId(#[from] spiderq_core::spider::NodeIdError),
    #[error(transparent)]
    Spider(#[from] SpiderError),
}

impl TryFrom<&LabelDoc> for EdgeLabel {
    type Error = DocError;

    fn try_from(doc: &LabelDoc) -> Result<Self, Self::Error> {
        Ok(match doc {
            LabelDoc::Role { role } => EdgeLabel::Role(RoleName::new(role)?),
            LabelDoc::Spec => EdgeLabel::Spec,
            LabelDoc::Poly => EdgeLabel::Poly,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNodeDoc {
    pub name: String,
    /// `object` or `relationship`.
    pub kind: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdgeDoc {
    pub endpoints: [String; 2],
    pub label: LabelDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaGraphDoc {
    pub nodes: Vec<GraphNodeDoc>,
    pub edges: Vec<GraphEdgeDoc>,
}

impl SchemaGraphDoc {
    pub fn new(graph: &SchemaGraph, schema: &ConceptualSchema) -> Self {
        let nodes = graph
            .nodes()
            .iter()
            .map(|t| GraphNodeDoc {
                name: t.to_string(),
                kind: if schema.is_rel_type(t) { "relationship" } else { "object" }.into(),
                weight: schema.weight(t).to_string(),
            })
            .collect();
        let edges = graph
            .edges()
            .iter()
            .map(|e| GraphEdgeDoc {
                endpoints: [e.endpoints.0.to_string(), e.endpoints.1.to_string()],
                label: (&e.label).into(),
            })
            .collect();
        SchemaGraphDoc { nodes, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildDoc {
    pub label: LabelDoc,
    pub child: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNodeDoc {
    pub id: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub weight: String,
    /// In the frontier, or a leaf: the UI offers a spider button.
    pub extendable: bool,
    pub frontier: bool,
    pub children: Vec<ChildDoc>,
}

/// A serialized spider tree. Carries the full engine state (frontier and
/// next node id), so decoding it gives back an equal [`SpiderGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiderGraphDoc {
    pub root: String,
    pub next_id: u32,
    pub nodes: Vec<TreeNodeDoc>,
}

impl SpiderGraphDoc {
    /// Nodes are listed in pre-order from the root, children in creation
    /// order.
    pub fn new(g: &SpiderGraph, schema: &ConceptualSchema) -> Self {
        let nodes = g
            .descendants(g.root())
            .into_iter()
            .map(|n| {
                let ty = g.type_of(n).expect("node exists");
                TreeNodeDoc {
                    id: n.to_string(),
                    ty: ty.to_string(),
                    weight: schema.weight(ty).to_string(),
                    extendable: g.in_frontier(n) || g.is_leaf(n),
                    frontier: g.in_frontier(n),
                    children: g
                        .out_edges(n)
                        .map(|e| ChildDoc { label: (&e.label).into(), child: e.child.to_string() })
                        .collect(),
                }
            })
            .collect();
        SpiderGraphDoc {
            root: g.root().to_string(),
            next_id: g.next_id(),
            nodes,
        }
    }

    pub fn to_graph(&self) -> Result<SpiderGraph, DocError> {
        let root: SpiderNodeId = self.root.parse()?;
        let mut types = Vec::with_capacity(self.nodes.len());
        let mut edges = Vec::new();
        let mut frontier = Vec::new();
        for node in &self.nodes {
            let id: SpiderNodeId = node.id.parse()?;
            types.push((id, TypeName::new(&node.ty)?));
            if node.frontier {
                frontier.push(id);
            }
            for c in &node.children {
                edges.push(SpiderEdge { parent: id, child: c.child.parse()?, label: (&c.label).try_into()? });
            }
        }
        Ok(SpiderGraph::from_parts(root, types, edges, frontier, self.next_id)?)
    }
}

/// One problem found while ingesting a schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column: Option<usize>,
    pub code: String,
    pub message: String,
}

impl ProblemDoc {
    pub fn from_ingest(e: &IngestError) -> Vec<ProblemDoc> {
        match e {
            IngestError::Syntax { line, column, message } => vec![ProblemDoc {
                line: Some(*line),
                column: Some(*column),
                code: "syntax".into(),
                message: message.clone(),
            }],
            IngestError::Invalid(vs) => vs
                .iter()
                .map(|v| ProblemDoc {
                    line: v.line,
                    column: None,
                    code: v.violation.code().into(),
                    message: v.violation.to_string(),
                })
                .collect(),
        }
    }
}
