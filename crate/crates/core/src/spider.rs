//! Spider query construction.
//!
//! A spider query is a tree fanning out from one root type over the schema
//! graph. It is grown in rounds: each round collects every admissible
//! extension of the extendable nodes (the frontier), gives each one a fresh
//! node, and keeps as the next frontier only the new nodes whose conceptual
//! weight does not exceed their parent's. A type never occurs twice on one
//! root-to-node path, which bounds the depth by the number of types and
//! makes the construction terminate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::{EdgeLabel, SchemaGraph};
use crate::name::TypeName;
use crate::schema::ConceptualSchema;

/// Identifier of a spider tree node, written `n<K>`. Ids are handed out in
/// increasing order and never reused within one tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpiderNodeId(u32);

impl SpiderNodeId {
    pub fn new(index: u32) -> Self {
        SpiderNodeId(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SpiderNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Debug for SpiderNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid node id {0:?}, expected n<number>")]
pub struct NodeIdError(pub String);

impl FromStr for SpiderNodeId {
    type Err = NodeIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('n')
            .filter(|digits| !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|digits| digits.parse().ok())
            .map(SpiderNodeId)
            .ok_or_else(|| NodeIdError(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpiderError {
    #[error("unknown root type {0}")]
    UnknownType(TypeName),
    #[error("unknown node {0}")]
    UnknownNode(SpiderNodeId),
    #[error("no extension candidates")]
    NoCandidates,
    #[error("node {0} is not a leaf")]
    NotALeaf(SpiderNodeId),
    #[error("the root node cannot be pruned")]
    PruneRoot,
    #[error("spider tree exceeded {limit} nodes")]
    NodeLimit { limit: usize },
    #[error("malformed spider graph: {0}")]
    Malformed(String),
}

/// A directed edge `parent -> child` of a spider tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpiderEdge {
    pub parent: SpiderNodeId,
    pub child: SpiderNodeId,
    pub label: EdgeLabel,
}

/// One admissible extension: attach a node of `target_type` under `node`
/// via `label`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCandidate {
    pub node: SpiderNodeId,
    pub target_type: TypeName,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    ty: TypeName,
    parent: Option<(SpiderNodeId, EdgeLabel)>,
    children: Vec<SpiderNodeId>,
}

/// A spider query tree together with its extendable frontier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiderGraph {
    nodes: BTreeMap<SpiderNodeId, Node>,
    root: SpiderNodeId,
    frontier: BTreeSet<SpiderNodeId>,
    next_id: u32,
}

impl SpiderGraph {
    /// A one-node tree rooted at `root_type`, with the root extendable.
    pub fn new(root_type: TypeName) -> Self {
        let root = SpiderNodeId(0);
        let mut nodes = BTreeMap::new();
        nodes.insert(root, Node { ty: root_type, parent: None, children: Vec::new() });
        SpiderGraph { nodes, root, frontier: BTreeSet::from([root]), next_id: 1 }
    }

    /// Reassembles a tree from its parts, checking that they form a tree
    /// rooted at `root` with all ids below `next_id`.
    pub fn from_parts(
        root: SpiderNodeId,
        types: impl IntoIterator<Item = (SpiderNodeId, TypeName)>,
        edges: impl IntoIterator<Item = SpiderEdge>,
        frontier: impl IntoIterator<Item = SpiderNodeId>,
        next_id: u32,
    ) -> Result<Self, SpiderError> {
        let malformed = |msg: String| Err(SpiderError::Malformed(msg));
        let mut nodes = BTreeMap::new();
        for (id, ty) in types {
            if id.0 >= next_id {
                return malformed(format!("node {id} is not below next id n{next_id}"));
            }
            if nodes.insert(id, Node { ty, parent: None, children: Vec::new() }).is_some() {
                return malformed(format!("node {id} listed twice"));
            }
        }
        if !nodes.contains_key(&root) {
            return malformed(format!("root {root} is not a node"));
        }
        for edge in edges {
            if !nodes.contains_key(&edge.parent) {
                return malformed(format!("edge from unknown node {}", edge.parent));
            }
            let child = match nodes.get_mut(&edge.child) {
                Some(child) => child,
                None => return malformed(format!("edge to unknown node {}", edge.child)),
            };
            if child.parent.is_some() || edge.child == root {
                return malformed(format!("node {} has more than one parent", edge.child));
            }
            child.parent = Some((edge.parent, edge.label));
            nodes.get_mut(&edge.parent).expect("checked").children.push(edge.child);
        }
        for node in nodes.values_mut() {
            node.children.sort();
        }
        let frontier: BTreeSet<_> = frontier.into_iter().collect();
        if let Some(stray) = frontier.iter().find(|id| !nodes.contains_key(id)) {
            return malformed(format!("frontier node {stray} is not a node"));
        }
        let g = SpiderGraph { nodes, root, frontier, next_id };
        // Every node must be reachable from the root, which also rules out
        // parent cycles.
        let reachable = g.descendants(root).len();
        if reachable != g.nodes.len() {
            return malformed(format!(
                "{} node(s) unreachable from root",
                g.nodes.len() - reachable
            ));
        }
        Ok(g)
    }

    pub fn root(&self) -> SpiderNodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, n: SpiderNodeId) -> bool {
        self.nodes.contains_key(&n)
    }

    /// The schema type a node stands for.
    pub fn type_of(&self, n: SpiderNodeId) -> Option<&TypeName> {
        self.nodes.get(&n).map(|node| &node.ty)
    }

    pub fn parent(&self, n: SpiderNodeId) -> Option<(SpiderNodeId, &EdgeLabel)> {
        self.nodes
            .get(&n)
            .and_then(|node| node.parent.as_ref())
            .map(|(p, l)| (*p, l))
    }

    /// Children of `n` in creation order.
    pub fn children(&self, n: SpiderNodeId) -> &[SpiderNodeId] {
        self.nodes.get(&n).map_or(&[], |node| &node.children)
    }

    /// Outgoing edges of `n` in child order.
    pub fn out_edges(&self, n: SpiderNodeId) -> impl Iterator<Item = SpiderEdge> + '_ {
        self.children(n).iter().map(move |&child| SpiderEdge {
            parent: n,
            child,
            label: self.parent(child).expect("child has parent").1.clone(),
        })
    }

    pub fn is_leaf(&self, n: SpiderNodeId) -> bool {
        self.children(n).is_empty()
    }

    /// Node ids in increasing order.
    pub fn node_ids(&self) -> impl Iterator<Item = SpiderNodeId> + '_ {
        self.nodes.keys().copied()
    }

    /// All edges, ordered by parent id and then child order.
    pub fn edges(&self) -> impl Iterator<Item = SpiderEdge> + '_ {
        self.nodes.keys().flat_map(move |&n| self.out_edges(n))
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.values().map(|n| n.children.len()).sum()
    }

    pub fn frontier(&self) -> &BTreeSet<SpiderNodeId> {
        &self.frontier
    }

    pub fn in_frontier(&self, n: SpiderNodeId) -> bool {
        self.frontier.contains(&n)
    }

    /// The id the next allocated node will receive.
    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    /// A node is a root if it exists and has no incoming edge.
    pub fn is_root(&self, n: SpiderNodeId) -> bool {
        self.nodes.get(&n).is_some_and(|node| node.parent.is_none())
    }

    /// Number of edges between the root and `n`.
    pub fn depth(&self, n: SpiderNodeId) -> usize {
        let mut depth = 0;
        let mut cur = n;
        while let Some((p, _)) = self.parent(cur) {
            depth += 1;
            cur = p;
        }
        depth
    }

    /// `n` and everything below it, in pre-order.
    pub fn descendants(&self, n: SpiderNodeId) -> Vec<SpiderNodeId> {
        let mut out = Vec::new();
        if !self.contains(n) {
            return out;
        }
        let mut stack = alloc::vec![n];
        while let Some(cur) = stack.pop() {
            out.push(cur);
            stack.extend(self.children(cur).iter().rev());
        }
        out
    }

    /// Types on the path from the root down to and including `n`.
    fn path_types(&self, n: SpiderNodeId) -> Vec<&TypeName> {
        let mut out = Vec::new();
        let mut cur = Some(n);
        while let Some(id) = cur {
            let node = &self.nodes[&id];
            out.push(&node.ty);
            cur = node.parent.as_ref().map(|(p, _)| *p);
        }
        out
    }

    fn alloc(&mut self, ty: TypeName, parent: SpiderNodeId, label: EdgeLabel) -> SpiderNodeId {
        let id = SpiderNodeId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(id, Node { ty, parent: Some((parent, label)), children: Vec::new() });
        self.nodes.get_mut(&parent).expect("parent exists").children.push(id);
        id
    }

    /// Checks the structural invariants against the schema graph the tree
    /// was built from: tree shape with a unique root, no repeated type on
    /// any root path, every edge backed by a schema edge, frontier within
    /// the node set.
    pub fn check_invariants(&self, graph: &SchemaGraph) -> Result<(), SpiderError> {
        let fail = |msg: String| Err(SpiderError::Malformed(msg));
        let roots: Vec<_> = self.node_ids().filter(|&n| self.is_root(n)).collect();
        if roots != [self.root] {
            return fail(format!("expected exactly root {}, found roots {roots:?}", self.root));
        }
        if self.edge_count() + 1 != self.len() {
            return fail(format!("{} edges for {} nodes", self.edge_count(), self.len()));
        }
        if self.descendants(self.root).len() != self.len() {
            return fail("not every node is reachable from the root".into());
        }
        for (&id, node) in &self.nodes {
            if id.0 >= self.next_id {
                return fail(format!("node {id} is not below next id"));
            }
            let path = self.path_types(id);
            let distinct: BTreeSet<_> = path.iter().collect();
            if distinct.len() != path.len() {
                return fail(format!("type repeated on the path to {id}"));
            }
            if let Some((p, label)) = &node.parent {
                let parent_ty = &self.nodes[p].ty;
                if !self.nodes[p].children.contains(&id) {
                    return fail(format!("{id} missing from children of {p}"));
                }
                if !graph.has_edge(parent_ty, &node.ty, label) {
                    return fail(format!(
                        "edge {p} -> {id} ({parent_ty} -{label}- {}) is not in the schema graph",
                        node.ty
                    ));
                }
            }
        }
        if let Some(stray) = self.frontier.iter().find(|id| !self.contains(**id)) {
            return fail(format!("frontier node {stray} is not a node"));
        }
        Ok(())
    }
}

/// The types on the path from the root to `n`, including `n`'s own type.
pub fn top(g: &SpiderGraph, n: SpiderNodeId) -> Result<BTreeSet<TypeName>, SpiderError> {
    if !g.contains(n) {
        return Err(SpiderError::UnknownNode(n));
    }
    Ok(g.path_types(n).into_iter().cloned().collect())
}

/// All admissible extensions of the frontier: for each frontier node `n`
/// and each schema edge `{type(n), t}` labelled `l` with `t` not already on
/// the path to `n`. Ordered by node id, then target type, then label text.
pub fn epsilon(graph: &SchemaGraph, g: &SpiderGraph) -> Vec<ExtensionCandidate> {
    let mut out = Vec::new();
    for &n in &g.frontier {
        let Some(node) = g.nodes.get(&n) else { continue };
        let Ok(incident) = graph.incident(&node.ty) else { continue };
        let path = g.path_types(n);
        let start = out.len();
        for (target, label) in incident {
            if !path.contains(&target) {
                out.push(ExtensionCandidate { node: n, target_type: target.clone(), label: label.clone() });
            }
        }
        out[start..].sort_by(|a, b| {
            (&a.target_type, a.label.text(), &a.label).cmp(&(&b.target_type, b.label.text(), &b.label))
        });
    }
    out
}

impl SpiderGraph {
    /// Attaches one fresh node per candidate and replaces the frontier with
    /// the new nodes that are no heavier than their parent.
    fn extend(&mut self, schema: &ConceptualSchema, candidates: Vec<ExtensionCandidate>) {
        let mut frontier = BTreeSet::new();
        for c in candidates {
            let parent_weight = schema.weight(&self.nodes[&c.node].ty);
            let keep = schema.weight(&c.target_type) <= parent_weight;
            let id = self.alloc(c.target_type, c.node, c.label);
            if keep {
                frontier.insert(id);
            }
        }
        self.frontier = frontier;
    }

    fn run_to_fixpoint(
        &mut self,
        graph: &SchemaGraph,
        schema: &ConceptualSchema,
        max_nodes: usize,
    ) -> Result<(), SpiderError> {
        loop {
            let candidates = epsilon(graph, self);
            if candidates.is_empty() {
                return Ok(());
            }
            if self.len().saturating_add(candidates.len()) > max_nodes {
                return Err(SpiderError::NodeLimit { limit: max_nodes });
            }
            self.extend(schema, candidates);
        }
    }
}

/// One round of construction. Fails with [`SpiderError::NoCandidates`] if
/// the frontier admits no extension.
pub fn sigma_step(
    graph: &SchemaGraph,
    schema: &ConceptualSchema,
    g: &SpiderGraph,
) -> Result<SpiderGraph, SpiderError> {
    let candidates = epsilon(graph, g);
    if candidates.is_empty() {
        return Err(SpiderError::NoCandidates);
    }
    let mut next = g.clone();
    next.extend(schema, candidates);
    Ok(next)
}

/// Builds the full spider query for `root_type`.
pub fn spider_query(
    graph: &SchemaGraph,
    schema: &ConceptualSchema,
    root_type: &TypeName,
) -> Result<SpiderGraph, SpiderError> {
    spider_query_bounded(graph, schema, root_type, usize::MAX)
}

/// Like [`spider_query`], but gives up with [`SpiderError::NodeLimit`]
/// rather than grow the tree beyond `max_nodes`.
pub fn spider_query_bounded(
    graph: &SchemaGraph,
    schema: &ConceptualSchema,
    root_type: &TypeName,
    max_nodes: usize,
) -> Result<SpiderGraph, SpiderError> {
    if !graph.contains(root_type) {
        return Err(SpiderError::UnknownType(root_type.clone()));
    }
    let mut g = SpiderGraph::new(root_type.clone());
    g.run_to_fixpoint(graph, schema, max_nodes)?;
    Ok(g)
}

/// Continues construction from a leaf, as if the user pressed its spider
/// button. The leaf is expanded regardless of its weight; nodes added after
/// that follow the usual weight rule. Returns the tree unchanged if the leaf
/// has no admissible extension.
pub fn respider(
    graph: &SchemaGraph,
    schema: &ConceptualSchema,
    g: &SpiderGraph,
    leaf: SpiderNodeId,
) -> Result<SpiderGraph, SpiderError> {
    respider_bounded(graph, schema, g, leaf, usize::MAX)
}

pub fn respider_bounded(
    graph: &SchemaGraph,
    schema: &ConceptualSchema,
    g: &SpiderGraph,
    leaf: SpiderNodeId,
    max_nodes: usize,
) -> Result<SpiderGraph, SpiderError> {
    if !g.contains(leaf) {
        return Err(SpiderError::UnknownNode(leaf));
    }
    if !g.is_leaf(leaf) {
        return Err(SpiderError::NotALeaf(leaf));
    }
    let mut next = g.clone();
    next.frontier = BTreeSet::from([leaf]);
    if epsilon(graph, &next).is_empty() {
        return Ok(g.clone());
    }
    next.run_to_fixpoint(graph, schema, max_nodes)?;
    Ok(next)
}

/// Removes `n` together with its subtree. Ids are not reused afterwards.
pub fn prune(g: &SpiderGraph, n: SpiderNodeId) -> Result<SpiderGraph, SpiderError> {
    let Some((parent, _)) = g.parent(n) else {
        return Err(if g.contains(n) { SpiderError::PruneRoot } else { SpiderError::UnknownNode(n) });
    };
    let mut next = g.clone();
    for id in g.descendants(n) {
        next.nodes.remove(&id);
        next.frontier.remove(&id);
    }
    next.nodes
        .get_mut(&parent)
        .expect("parent exists")
        .children
        .retain(|&c| c != n);
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::schema::tests::{example_schema, r, t};
    use crate::weight::Weight;
    use alloc::string::ToString;
    use alloc::vec;

    fn id(i: u32) -> SpiderNodeId {
        SpiderNodeId(i)
    }

    fn role(s: &str) -> EdgeLabel {
        EdgeLabel::Role(r(s))
    }

    fn cand(n: u32, ty: &str, label: EdgeLabel) -> ExtensionCandidate {
        ExtensionCandidate { node: id(n), target_type: t(ty), label }
    }

    fn types(g: &SpiderGraph) -> Vec<(SpiderNodeId, &str)> {
        g.node_ids().map(|n| (n, g.type_of(n).unwrap().as_str())).collect()
    }

    fn set(names: &[&str]) -> BTreeSet<TypeName> {
        names.iter().map(|n| t(n)).collect()
    }

    fn chain() -> ConceptualSchema {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        s.add_object_type(t("B"), Weight::ONE);
        s.add_relationship(t("f"), Weight::ONE, [(r("r"), t("A")), (r("s"), t("B"))]);
        s
    }

    #[test]
    fn node_id_text() {
        assert_eq!(id(12).to_string(), "n12");
        assert_eq!("n7".parse::<SpiderNodeId>().unwrap(), id(7));
        for bad in ["7", "n", "n-1", "nx", "m3", "n 1"] {
            assert!(bad.parse::<SpiderNodeId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn top_is_inclusive_path() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let root = SpiderGraph::new(t("B"));
        assert_eq!(top(&root, id(0)).unwrap(), set(&["B"]));
        assert_eq!(top(&root, id(3)), Err(SpiderError::UnknownNode(id(3))));

        let g = sigma_step(&graph, &schema, &root).unwrap();
        assert_eq!(top(&g, id(2)).unwrap(), set(&["B", "f"]));
        let g = sigma_step(&graph, &schema, &g).unwrap();
        assert_eq!(types(&g)[3], (id(3), "A"));
        assert_eq!(top(&g, id(3)).unwrap(), set(&["B", "f", "A"]));
    }

    #[test]
    fn epsilon_examples() {
        let graph = build_graph(&example_schema()).unwrap();
        assert_eq!(
            epsilon(&graph, &SpiderGraph::new(t("B"))),
            vec![cand(0, "D", EdgeLabel::Spec), cand(0, "f", role("s"))]
        );
        assert_eq!(
            epsilon(&graph, &SpiderGraph::new(t("A"))),
            vec![
                cand(0, "C", EdgeLabel::Poly),
                cand(0, "f", role("r")),
                cand(0, "g", EdgeLabel::Poly),
                cand(0, "g", role("u")),
            ]
        );
        let mut idle = SpiderGraph::new(t("A"));
        idle.frontier.clear();
        assert_eq!(epsilon(&graph, &idle), vec![]);
    }

    #[test]
    fn sigma_step_examples() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let g = sigma_step(&graph, &schema, &SpiderGraph::new(t("B"))).unwrap();
        assert_eq!(types(&g), vec![(id(0), "B"), (id(1), "D"), (id(2), "f")]);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![
                SpiderEdge { parent: id(0), child: id(1), label: EdgeLabel::Spec },
                SpiderEdge { parent: id(0), child: id(2), label: role("s") },
            ]
        );
        assert_eq!(g.frontier(), &BTreeSet::from([id(1), id(2)]));

        let mut heavy = schema.clone();
        heavy.cweight.insert(t("f"), Weight::from_integer(5));
        let g = sigma_step(&graph, &heavy, &SpiderGraph::new(t("B"))).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.frontier(), &BTreeSet::from([id(1)]));

        let mut done = SpiderGraph::new(t("B"));
        done.frontier.clear();
        assert_eq!(sigma_step(&graph, &schema, &done), Err(SpiderError::NoCandidates));
    }

    #[test]
    fn shared_target_type_gets_one_node_per_parent() {
        // Two frontier nodes (A via r, B via s under f) both reach g.
        let mut s = ConceptualSchema::new();
        for n in ["A", "B"] {
            s.add_object_type(t(n), Weight::ONE);
        }
        s.add_relationship(t("f"), Weight::ONE, [(r("r"), t("A")), (r("s"), t("B"))]);
        s.add_relationship(t("g"), Weight::ONE, [(r("p"), t("A")), (r("q"), t("B"))]);
        let graph = build_graph(&s).unwrap();
        let g = sigma_step(&graph, &s, &SpiderGraph::new(t("f"))).unwrap();
        let g = sigma_step(&graph, &s, &g).unwrap();
        let gs: Vec<_> = g.node_ids().filter(|&n| g.type_of(n) == Some(&t("g"))).collect();
        assert_eq!(gs.len(), 2);
        assert_ne!(g.parent(gs[0]).unwrap().0, g.parent(gs[1]).unwrap().0);
        g.check_invariants(&graph).unwrap();
    }

    #[test]
    fn spider_on_chain() {
        let s = chain();
        let graph = build_graph(&s).unwrap();
        let g = spider_query(&graph, &s, &t("A")).unwrap();
        assert_eq!(types(&g), vec![(id(0), "A"), (id(1), "f"), (id(2), "B")]);
        assert_eq!(
            g.edges().map(|e| e.label).collect::<Vec<_>>(),
            vec![role("r"), role("s")]
        );
    }

    #[test]
    fn spider_on_isolated_type() {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        let graph = build_graph(&s).unwrap();
        let g = spider_query(&graph, &s, &t("A")).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(
            spider_query(&graph, &s, &t("Z")),
            Err(SpiderError::UnknownType(t("Z")))
        );
    }

    #[test]
    fn spider_on_example_from_b() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let g = spider_query(&graph, &schema, &t("B")).unwrap();
        g.check_invariants(&graph).unwrap();
        assert_eq!(
            types(&g),
            vec![
                (id(0), "B"),
                (id(1), "D"),
                (id(2), "f"),
                (id(3), "A"),
                (id(4), "C"),
                (id(5), "g"),
                (id(6), "g"),
                (id(7), "g"),
                (id(8), "C"),
                (id(9), "C"),
            ]
        );
        let edges: Vec<_> = g.edges().map(|e| (e.parent.0, e.child.0, e.label)).collect();
        assert_eq!(
            edges,
            vec![
                (0, 1, EdgeLabel::Spec),
                (0, 2, role("s")),
                (2, 3, role("r")),
                (3, 4, EdgeLabel::Poly),
                (3, 5, EdgeLabel::Poly),
                (3, 6, role("u")),
                (4, 7, role("t")),
                (5, 8, role("t")),
                (6, 9, role("t")),
            ]
        );
        assert!(spider_query_bounded(&graph, &schema, &t("B"), 9).is_err());
        assert_eq!(spider_query_bounded(&graph, &schema, &t("B"), 10).unwrap(), g);
    }

    /// B(1) -s- f(1) -r- A(1), B -spec- D(3), D -t- h(1) -u- E(1):
    /// D is heavier than B, so the first spider stops at D.
    fn ridge() -> ConceptualSchema {
        let mut s = ConceptualSchema::new();
        s.add_object_type(t("A"), Weight::ONE);
        s.add_object_type(t("B"), Weight::ONE);
        s.add_object_type(t("D"), Weight::from_integer(3));
        s.add_object_type(t("E"), Weight::ONE);
        s.add_relationship(t("f"), Weight::ONE, [(r("r"), t("A")), (r("s"), t("B"))]);
        s.add_relationship(t("h"), Weight::ONE, [(r("t"), t("D")), (r("u"), t("E"))]);
        s.add_pair(crate::schema::MarkerKind::Spec, t("D"), t("B"));
        s
    }

    #[test]
    fn respider_climbs_the_weight_ridge() {
        let schema = ridge();
        let graph = build_graph(&schema).unwrap();
        let g = spider_query(&graph, &schema, &t("B")).unwrap();
        assert_eq!(types(&g), vec![(id(0), "B"), (id(1), "D"), (id(2), "f"), (id(3), "A")]);
        assert!(g.is_leaf(id(1)));
        assert_eq!(top(&g, id(1)).unwrap(), set(&["B", "D"]));

        let g2 = respider(&graph, &schema, &g, id(1)).unwrap();
        g2.check_invariants(&graph).unwrap();
        assert_eq!(&types(&g2)[..4], &types(&g)[..]);
        assert_eq!(&types(&g2)[4..], &[(id(4), "h"), (id(5), "E")]);
        assert_eq!(g2.parent(id(4)), Some((id(1), &role("t"))));
        assert_eq!(g2.parent(id(5)), Some((id(4), &role("u"))));
    }

    #[test]
    fn respider_rule_applies_after_first_step() {
        let mut schema = ridge();
        schema.cweight.insert(t("h"), Weight::from_integer(7));
        let graph = build_graph(&schema).unwrap();
        let g = spider_query(&graph, &schema, &t("B")).unwrap();
        let g2 = respider(&graph, &schema, &g, id(1)).unwrap();
        // h(7) is attached since D is expanded unconditionally, but h is
        // heavier than D(3) so it is not expanded further.
        assert_eq!(&types(&g2)[4..], &[(id(4), "h")]);
        assert!(!g2.in_frontier(id(4)));
    }

    #[test]
    fn respider_errors_and_noops() {
        let schema = ridge();
        let graph = build_graph(&schema).unwrap();
        let g = spider_query(&graph, &schema, &t("B")).unwrap();
        assert_eq!(respider(&graph, &schema, &g, id(0)), Err(SpiderError::NotALeaf(id(0))));
        assert_eq!(respider(&graph, &schema, &g, id(42)), Err(SpiderError::UnknownNode(id(42))));
        // A's only neighbour f is already on its path.
        assert_eq!(respider(&graph, &schema, &g, id(3)).unwrap(), g);
    }

    #[test]
    fn respider_on_single_root_equals_spider() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        for ty in ["A", "B", "C", "D", "f", "g"] {
            let fresh = SpiderGraph::new(t(ty));
            assert_eq!(
                respider(&graph, &schema, &fresh, id(0)).unwrap(),
                spider_query(&graph, &schema, &t(ty)).unwrap()
            );
        }
    }

    #[test]
    fn prune_examples() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let g = sigma_step(&graph, &schema, &SpiderGraph::new(t("B"))).unwrap();
        let g = sigma_step(&graph, &schema, &g).unwrap();
        assert_eq!(types(&g), vec![(id(0), "B"), (id(1), "D"), (id(2), "f"), (id(3), "A")]);

        let pruned = prune(&g, id(2)).unwrap();
        assert_eq!(types(&pruned), vec![(id(0), "B"), (id(1), "D")]);
        assert_eq!(pruned.edge_count(), 1);
        assert_eq!(pruned.next_id(), g.next_id());
        pruned.check_invariants(&graph).unwrap();

        let leafless = prune(&g, id(3)).unwrap();
        assert_eq!(leafless.len(), 3);
        assert!(leafless.is_leaf(id(2)));
        assert!(!leafless.in_frontier(id(3)));

        assert_eq!(prune(&g, id(0)), Err(SpiderError::PruneRoot));
        assert_eq!(prune(&g, id(9)), Err(SpiderError::UnknownNode(id(9))));
    }

    #[test]
    fn ids_are_not_reused_after_prune() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let g = sigma_step(&graph, &schema, &SpiderGraph::new(t("B"))).unwrap();
        let g = prune(&g, id(2)).unwrap();
        let g = prune(&g, id(1)).unwrap();
        let g = respider(&graph, &schema, &g, id(0)).unwrap();
        assert_eq!(g.children(id(0)), &[id(3), id(4)]);
    }

    #[test]
    fn from_parts_round_trips_and_rejects_garbage() {
        let schema = example_schema();
        let graph = build_graph(&schema).unwrap();
        let g = spider_query(&graph, &schema, &t("A")).unwrap();
        let rebuilt = SpiderGraph::from_parts(
            g.root(),
            g.node_ids().map(|n| (n, g.type_of(n).unwrap().clone())),
            g.edges(),
            g.frontier().iter().copied(),
            g.next_id(),
        )
        .unwrap();
        assert_eq!(rebuilt, g);

        let edge = |p, c| SpiderEdge { parent: id(p), child: id(c), label: EdgeLabel::Spec };
        let nodes = || [(id(0), t("B")), (id(1), t("D")), (id(2), t("D"))];
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(0, 1), edge(0, 1)], [], 3).is_err());
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(0, 1)], [], 3).is_err());
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(0, 1), edge(1, 2)], [], 2).is_err());
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(1, 2), edge(2, 1)], [], 3).is_err());
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(0, 1), edge(1, 2)], [id(5)], 3).is_err());
        assert!(SpiderGraph::from_parts(id(0), nodes(), [edge(0, 1), edge(1, 2)], [id(2)], 3).is_ok());
    }
}
