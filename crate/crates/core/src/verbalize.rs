//! Template verbalization of path expressions.
//!
//! Segments read as `<Parent> <role> <child>` for forward roles,
//! `<child> is <role> of <Parent>` for reversed roles and
//! `<child> which is a <Parent>` for spec/poly links. A confluence becomes
//! its head type followed by an indented bullet per branch.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::path::PathExpression;
use crate::schema::ConceptualSchema;

const INDENT: &str = "  ";

/// Renders `e` as indented semi-natural text. The schema is consulted for
/// role ownership when naming a role step on its own.
pub fn verbalize(e: &PathExpression, schema: &ConceptualSchema) -> String {
    lines(e, schema).join("\n")
}

/// Appends `suffix` to the first line, before a trailing `:` if the first
/// line is a confluence title.
fn with_suffix(mut block: Vec<String>, suffix: &str) -> Vec<String> {
    if let Some(first) = block.first_mut() {
        if let Some(title) = first.strip_suffix(':') {
            *first = format!("{title}{suffix}:");
        } else {
            first.push_str(suffix);
        }
    }
    block
}

fn with_prefix(mut block: Vec<String>, prefix: &str) -> Vec<String> {
    if let Some(first) = block.first_mut() {
        first.insert_str(0, prefix);
    }
    block
}

fn lines(e: &PathExpression, schema: &ConceptualSchema) -> Vec<String> {
    match e {
        PathExpression::TypeAtom(t) => alloc::vec![String::from(t.as_str())],
        PathExpression::RoleStep { role, reversed: false } => alloc::vec![String::from(role.as_str())],
        PathExpression::RoleStep { role, reversed: true } => match schema.rel_of(role) {
            Some(rel) => alloc::vec![format!("is {role} of {rel}")],
            None => alloc::vec![format!("is {role} of")],
        },
        PathExpression::Concat(parts) => concat_lines(parts, schema),
        PathExpression::Confluence { branches, head } => {
            let mut out = alloc::vec![format!("{head}:")];
            for b in branches {
                let block = branch_lines(&b.expr, head.as_str(), schema);
                for (i, line) in block.into_iter().enumerate() {
                    let marker = if i == 0 { "- " } else { INDENT };
                    out.push(format!("{INDENT}{marker}{line}"));
                }
            }
            out
        }
    }
}

/// A branch segment `child [o step] o head` under a confluence titled
/// `head`: the head is already the title, so only the link and the child
/// are spelled out.
fn branch_lines(e: &PathExpression, head: &str, schema: &ConceptualSchema) -> Vec<String> {
    if let PathExpression::Concat(parts) = e {
        if let [child, rest @ ..] = parts.as_slice() {
            let ends_at_head = matches!(rest.last(), Some(PathExpression::TypeAtom(t)) if t.as_str() == head);
            match rest {
                [_] if ends_at_head => {
                    return with_suffix(lines(child, schema), &format!(" which is a {head}"));
                }
                [PathExpression::RoleStep { role, .. }, _] if ends_at_head => {
                    return with_prefix(lines(child, schema), &format!("via {role}: "));
                }
                _ => {}
            }
        }
    }
    lines(e, schema)
}

fn concat_lines(parts: &[PathExpression], schema: &ConceptualSchema) -> Vec<String> {
    match parts {
        [child, PathExpression::TypeAtom(parent)] => {
            with_suffix(lines(child, schema), &format!(" which is a {parent}"))
        }
        [child, PathExpression::RoleStep { role, reversed: false }, PathExpression::TypeAtom(parent)] => {
            with_prefix(lines(child, schema), &format!("{parent} {role} "))
        }
        [child, PathExpression::RoleStep { role, reversed: true }, PathExpression::TypeAtom(parent)] => {
            with_suffix(lines(child, schema), &format!(" is {role} of {parent}"))
        }
        _ => {
            // Longer chains: read left to right, one part after another.
            let mut out: Vec<String> = Vec::new();
            for part in parts {
                let block = lines(part, schema);
                match out.last_mut() {
                    Some(last) if !block.is_empty() => {
                        let mut block = block.into_iter();
                        last.push(' ');
                        last.push_str(&block.next().expect("non-empty"));
                        out.extend(block);
                    }
                    _ => out.extend(block),
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::path::root_expr;
    use crate::path::tests::{atom, branch, fwd, rev};
    use crate::schema::tests::{example_schema, t};
    use crate::spider::spider_query;
    use alloc::vec;

    #[test]
    fn atoms_and_segments() {
        let s = example_schema();
        assert_eq!(verbalize(&atom("Politician"), &s), "Politician");
        assert_eq!(
            verbalize(&PathExpression::Concat(vec![atom("D"), atom("B")]), &s),
            "D which is a B"
        );
        assert_eq!(
            verbalize(&PathExpression::Concat(vec![atom("A"), fwd("r"), atom("f")]), &s),
            "f r A"
        );
        assert_eq!(
            verbalize(&PathExpression::Concat(vec![atom("f"), rev("s"), atom("B")]), &s),
            "f is s of B"
        );
        assert_eq!(verbalize(&rev("s"), &s), "is s of f");
    }

    #[test]
    fn confluence_bullets() {
        let s = example_schema();
        let one = PathExpression::Confluence {
            branches: vec![branch("f1", PathExpression::Concat(vec![atom("f"), rev("s"), atom("B")]))],
            head: t("B"),
        };
        assert_eq!(verbalize(&one, &s), "B:\n  - via s: f");

        let two = PathExpression::Confluence {
            branches: vec![
                branch("D1", PathExpression::Concat(vec![atom("D"), atom("B")])),
                branch("f1", PathExpression::Concat(vec![atom("f"), rev("s"), atom("B")])),
            ],
            head: t("B"),
        };
        assert_eq!(verbalize(&two, &s), "B:\n  - D which is a B\n  - via s: f");
    }

    #[test]
    fn nested_tree() {
        let s = example_schema();
        let g = build_graph(&s).unwrap();
        let tree = spider_query(&g, &s, &t("B")).unwrap();
        let text = verbalize(&root_expr(&tree, &s).unwrap(), &s);
        let expected = "\
B:
  - D which is a B
  - via s: f:
      - via r: A:
          - C which is a A:
              - via t: g
          - g which is a A:
              - via t: C
          - via u: g:
              - via t: C";
        assert_eq!(text, expected);
    }
}
