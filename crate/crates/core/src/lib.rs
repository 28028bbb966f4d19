//! Spider queries over ORM conceptual schemas.
//!
//! A conceptual schema ([`ConceptualSchema`]) is turned into an undirected
//! labelled multigraph ([`SchemaGraph`]). Starting from one type, a spider
//! query grows a tree over that graph ([`SpiderGraph`]) in weight-bounded
//! rounds, which a user may then prune and extend. The tree compiles to a
//! path expression ([`PathExpression`]) that can be rendered as text or
//! verbalized.
//!
//! ```
//! use spiderq_core::{build_graph, parse_schema, render, root_expr, spider_query, TypeName};
//!
//! let schema = parse_schema("objecttype A\nobjecttype B\nrelationship f roles r:A s:B\n").unwrap();
//! let graph = build_graph(&schema).unwrap();
//! let tree = spider_query(&graph, &schema, &TypeName::new("A").unwrap()).unwrap();
//! let expr = root_expr(&tree, &schema).unwrap();
//! assert_eq!(render(&expr), "[f1: [B1: B o s o f; f] o ~r o A; A]");
//! ```
#![no_std]

extern crate alloc;

pub mod graph;
pub mod ingest;
pub mod name;
pub mod path;
pub mod render;
pub mod schema;
pub mod spider;
pub mod verbalize;
pub mod weight;

pub use graph::{build_graph, build_graph_filtered, EdgeLabel, GraphError, SchemaEdge, SchemaGraph};
pub use ingest::{parse_document, parse_schema, serialize_schema, IngestError, SchemaDocument};
pub use name::{NameError, RoleName, TypeName};
pub use path::{connector, node_expr, path_seg, root_expr, AttrNamer, Branch, Connector, PathError, PathExpression};
pub use render::{parse_expression, render, ExprSyntaxError};
pub use schema::{ConceptualSchema, MarkerKind, Violation};
pub use spider::{
    epsilon, prune, respider, respider_bounded, sigma_step, spider_query, spider_query_bounded, top,
    ExtensionCandidate, SpiderEdge, SpiderError, SpiderGraph, SpiderNodeId,
};
pub use verbalize::verbalize;
pub use weight::Weight;
