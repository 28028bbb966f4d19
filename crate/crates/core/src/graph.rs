//! The undirected labelled multigraph derived from a conceptual schema.
//!
//! Nodes are the schema's types. Every role `r` contributes the edge
//! `{player(r), rel(r)}` labelled `r`; every spec or poly pair contributes
//! one edge labelled with the corresponding marker.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::name::{RoleName, TypeName};
use crate::schema::{ConceptualSchema, MarkerKind, Violation};

/// Label of a schema graph edge. The derived order puts all role labels
/// (by role name) before the spec marker, and that before the poly marker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Role(RoleName),
    Spec,
    Poly,
}

impl EdgeLabel {
    pub fn marker(kind: MarkerKind) -> Self {
        match kind {
            MarkerKind::Spec => EdgeLabel::Spec,
            MarkerKind::Poly => EdgeLabel::Poly,
        }
    }

    /// Text of the label: the role name, or `spec` / `poly` for markers.
    pub fn text(&self) -> &str {
        match self {
            EdgeLabel::Role(r) => r.as_str(),
            EdgeLabel::Spec => "spec",
            EdgeLabel::Poly => "poly",
        }
    }

    pub fn role(&self) -> Option<&RoleName> {
        match self {
            EdgeLabel::Role(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_marker(&self) -> bool {
        !matches!(self, EdgeLabel::Role(_))
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

/// One edge of the schema graph. Endpoints are stored sorted; both are
/// equal for a self-loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaEdge {
    pub label: EdgeLabel,
    pub endpoints: (TypeName, TypeName),
}

impl SchemaEdge {
    pub fn new(x: TypeName, y: TypeName, label: EdgeLabel) -> Self {
        let endpoints = if x <= y { (x, y) } else { (y, x) };
        SchemaEdge { label, endpoints }
    }

    pub fn is_self_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }

    /// The endpoint opposite `t`, if `t` is an endpoint.
    pub fn other(&self, t: &TypeName) -> Option<&TypeName> {
        if &self.endpoints.0 == t {
            Some(&self.endpoints.1)
        } else if &self.endpoints.1 == t {
            Some(&self.endpoints.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("schema is invalid ({} violation(s))", .0.len())]
    InvalidSchema(Vec<Violation>),
    #[error("unknown type {0}")]
    UnknownType(TypeName),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaGraph {
    nodes: BTreeSet<TypeName>,
    edges: Vec<SchemaEdge>,
    incidence: BTreeMap<TypeName, Vec<usize>>,
}

/// Builds the schema graph with every role edge included.
pub fn build_graph(schema: &ConceptualSchema) -> Result<SchemaGraph, GraphError> {
    build_graph_filtered(schema, |_| true)
}

/// Builds the schema graph, keeping only the role edges for which
/// `keep_role` returns true. Spec and poly edges are always kept.
///
/// This is the hook for excluding reference-scheme roles from spider
/// expansion.
pub fn build_graph_filtered(
    schema: &ConceptualSchema,
    keep_role: impl Fn(&RoleName) -> bool,
) -> Result<SchemaGraph, GraphError> {
    let violations = schema.validate();
    if !violations.is_empty() {
        return Err(GraphError::InvalidSchema(violations));
    }

    let mut edges = Vec::with_capacity(schema.role_count() + schema.spec.len() + schema.poly.len());
    for (rel, roles) in &schema.roles {
        for role in roles.iter().filter(|r| keep_role(r)) {
            let player = schema.player[role].clone();
            edges.push(SchemaEdge::new(player, rel.clone(), EdgeLabel::Role(role.clone())));
        }
    }
    for kind in [MarkerKind::Spec, MarkerKind::Poly] {
        for (x, y) in schema.pairs(kind) {
            edges.push(SchemaEdge::new(x.clone(), y.clone(), EdgeLabel::marker(kind)));
        }
    }
    Ok(SchemaGraph::from_parts(schema.types.clone(), edges))
}

impl SchemaGraph {
    fn from_parts(nodes: BTreeSet<TypeName>, mut edges: Vec<SchemaEdge>) -> Self {
        edges.sort();
        let mut incidence: BTreeMap<TypeName, Vec<usize>> =
            nodes.iter().map(|n| (n.clone(), Vec::new())).collect();
        for (i, e) in edges.iter().enumerate() {
            incidence.get_mut(&e.endpoints.0).expect("endpoint is a node").push(i);
            if !e.is_self_loop() {
                incidence.get_mut(&e.endpoints.1).expect("endpoint is a node").push(i);
            }
        }
        SchemaGraph { nodes, edges, incidence }
    }

    pub fn nodes(&self) -> &BTreeSet<TypeName> {
        &self.nodes
    }

    /// All edges, ordered by label (roles by name, then spec, then poly)
    /// and then by sorted endpoints.
    pub fn edges(&self) -> &[SchemaEdge] {
        &self.edges
    }

    pub fn contains(&self, t: &TypeName) -> bool {
        self.nodes.contains(t)
    }

    pub fn has_edge(&self, x: &TypeName, y: &TypeName, label: &EdgeLabel) -> bool {
        let probe = SchemaEdge::new(x.clone(), y.clone(), label.clone());
        self.edges.binary_search(&probe).is_ok()
    }

    /// Borrowing variant of [`incident_edges`](Self::incident_edges).
    pub fn incident(
        &self,
        t: &TypeName,
    ) -> Result<impl Iterator<Item = (&TypeName, &EdgeLabel)> + '_, GraphError> {
        let idx = self
            .incidence
            .get(t)
            .ok_or_else(|| GraphError::UnknownType(t.clone()))?;
        let t = t.clone();
        Ok(idx.iter().map(move |&i| {
            let e = &self.edges[i];
            (e.other(&t).expect("incident edge"), &e.label)
        }))
    }

    /// Every edge touching `t`, paired with its other endpoint, in edge
    /// order. A self-loop is listed once, with `t` as the neighbour.
    pub fn incident_edges(&self, t: &TypeName) -> Result<Vec<(TypeName, EdgeLabel)>, GraphError> {
        Ok(self
            .incident(t)?
            .map(|(n, l)| (n.clone(), l.clone()))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::tests::{example_schema, r, t};
    use crate::weight::Weight;
    use alloc::vec;

    fn role(s: &str) -> EdgeLabel {
        EdgeLabel::Role(r(s))
    }

    #[test]
    fn example_graph_has_six_nodes_and_seven_edges() {
        let g = build_graph(&example_schema()).unwrap();
        let nodes: Vec<_> = g.nodes().iter().map(TypeName::as_str).collect();
        assert_eq!(nodes, ["A", "B", "C", "D", "f", "g"]);
        let expected = vec![
            SchemaEdge::new(t("A"), t("f"), role("r")),
            SchemaEdge::new(t("B"), t("f"), role("s")),
            SchemaEdge::new(t("C"), t("g"), role("t")),
            SchemaEdge::new(t("A"), t("g"), role("u")),
            SchemaEdge::new(t("B"), t("D"), EdgeLabel::Spec),
            SchemaEdge::new(t("A"), t("C"), EdgeLabel::Poly),
            SchemaEdge::new(t("A"), t("g"), EdgeLabel::Poly),
        ];
        assert_eq!(g.edges(), expected.as_slice());
    }

    #[test]
    fn single_object_type() {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        let g = build_graph(&s).unwrap();
        assert_eq!(g.nodes().len(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(g.incident_edges(&t("A")).unwrap(), vec![]);
    }

    #[test]
    fn chain_schema() {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        s.add_object_type(t("B"), Weight::ONE);
        s.add_relationship(t("f"), Weight::ONE, [(r("r"), t("A")), (r("s"), t("B"))]);
        let g = build_graph(&s).unwrap();
        assert_eq!(g.nodes().len(), 3);
        assert_eq!(
            g.edges(),
            [
                SchemaEdge::new(t("A"), t("f"), role("r")),
                SchemaEdge::new(t("B"), t("f"), role("s")),
            ]
        );
    }

    #[test]
    fn incident_edges_of_example() {
        let g = build_graph(&example_schema()).unwrap();
        assert_eq!(
            g.incident_edges(&t("B")).unwrap(),
            vec![(t("f"), role("s")), (t("D"), EdgeLabel::Spec)]
        );
        assert_eq!(
            g.incident_edges(&t("A")).unwrap(),
            vec![
                (t("f"), role("r")),
                (t("g"), role("u")),
                (t("C"), EdgeLabel::Poly),
                (t("g"), EdgeLabel::Poly),
            ]
        );
        assert_eq!(
            g.incident_edges(&t("Z")),
            Err(GraphError::UnknownType(t("Z")))
        );
    }

    #[test]
    fn rejects_invalid_schema() {
        let mut s = example_schema();
        s.player.remove(&r("r"));
        assert!(matches!(build_graph(&s), Err(GraphError::InvalidSchema(v)) if v.len() == 1));
    }

    #[test]
    fn self_loop_listed_once() {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        s.types.insert(t("f"));
        s.rel_types.insert(t("f"));
        s.cweight.insert(t("f"), Weight::ONE);
        s.roles.insert(t("f"), vec![r("r"), r("self")]);
        s.player.insert(r("r"), t("A"));
        s.player.insert(r("self"), t("f"));
        let g = build_graph(&s).unwrap();
        assert!(g.edges()[1].is_self_loop());
        assert_eq!(
            g.incident_edges(&t("f")).unwrap(),
            vec![(t("A"), role("r")), (t("f"), role("self"))]
        );
    }

    #[test]
    fn role_filter_drops_role_edges_only() {
        let s = example_schema();
        let g = build_graph_filtered(&s, |role| role.as_str() != "u").unwrap();
        assert_eq!(g.edges().len(), 6);
        assert!(!g.has_edge(&t("A"), &t("g"), &role("u")));
        assert!(g.has_edge(&t("g"), &t("A"), &EdgeLabel::Poly));
    }
}
