//! Concrete syntax for path expressions.
//!
//! ```text
//! expr   := term (" o " term)*
//! term   := Type | role | "~" role | "[" branch (", " branch)* "; " Type "]"
//! branch := name ": " expr
//! ```
//!
//! A bare name is read as a type at either end of a concatenation and as a
//! role step in between, which is exactly the shape the compiler produces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::name::{RoleName, TypeName, RESERVED_CHARS};
use crate::path::{Branch, PathExpression};

pub fn render(e: &PathExpression) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn write_expr(out: &mut String, e: &PathExpression) {
    match e {
        PathExpression::TypeAtom(t) => out.push_str(t.as_str()),
        PathExpression::RoleStep { role, reversed } => {
            if *reversed {
                out.push('~');
            }
            out.push_str(role.as_str());
        }
        PathExpression::Concat(parts) => {
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" o ");
                }
                write_expr(out, part);
            }
        }
        PathExpression::Confluence { branches, head } => {
            out.push('[');
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: ", b.attr);
                write_expr(out, &b.expr);
            }
            let _ = write!(out, "; {head}]");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: {message}")]
pub struct ExprSyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Punct(char),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    len: usize,
}

fn tokenize(s: &str) -> Vec<(usize, Tok<'_>)> {
    let mut toks = Vec::new();
    let mut word: Option<usize> = None;
    for (i, ch) in s.char_indices() {
        let boundary = ch.is_whitespace() || RESERVED_CHARS.contains(&ch);
        if boundary {
            if let Some(start) = word.take() {
                toks.push((start, Tok::Word(&s[start..i])));
            }
            if !ch.is_whitespace() {
                toks.push((i, Tok::Punct(ch)));
            }
        } else if word.is_none() {
            word = Some(i);
        }
    }
    if let Some(start) = word {
        toks.push((start, Tok::Word(&s[start..])));
    }
    toks
}

/// Parses rendered text back into an expression.
pub fn parse_expression(s: &str) -> Result<PathExpression, ExprSyntaxError> {
    let mut p = Parser { toks: tokenize(s), pos: 0, len: s.len() };
    let e = p.expr()?;
    if let Some(&(offset, tok)) = p.toks.get(p.pos) {
        return Err(ExprSyntaxError { offset, message: format!("unexpected {tok:?}") });
    }
    Ok(e)
}

enum Term {
    Name(usize, String),
    Reversed(RoleName),
    Confluence(PathExpression),
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprSyntaxError> {
        Err(ExprSyntaxError { offset: self.offset(), message: message.into() })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|(_, t)| *t)
    }

    fn word(&mut self, what: &str) -> Result<(usize, &'a str), ExprSyntaxError> {
        match self.toks.get(self.pos) {
            Some(&(offset, Tok::Word(w))) => {
                self.pos += 1;
                Ok((offset, w))
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn punct(&mut self, ch: char) -> Result<(), ExprSyntaxError> {
        if self.peek() == Some(Tok::Punct(ch)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {ch:?}"))
        }
    }

    fn expr(&mut self) -> Result<PathExpression, ExprSyntaxError> {
        let mut terms = alloc::vec![self.term()?];
        while self.peek() == Some(Tok::Word("o")) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        let last = terms.len() - 1;
        let mut parts = Vec::with_capacity(terms.len());
        for (i, term) in terms.into_iter().enumerate() {
            let end = i == 0 || i == last;
            parts.push(match term {
                Term::Name(offset, name) => {
                    let bad = |e| ExprSyntaxError { offset, message: format!("{e}") };
                    if end {
                        PathExpression::TypeAtom(TypeName::new(&name).map_err(bad)?)
                    } else {
                        PathExpression::RoleStep { role: RoleName::new(&name).map_err(bad)?, reversed: false }
                    }
                }
                Term::Reversed(role) => PathExpression::RoleStep { role, reversed: true },
                Term::Confluence(c) => c,
            });
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { PathExpression::Concat(parts) })
    }

    fn term(&mut self) -> Result<Term, ExprSyntaxError> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let (offset, w) = self.word("name")?;
                Ok(Term::Name(offset, w.into()))
            }
            Some(Tok::Punct('~')) => {
                self.pos += 1;
                let (offset, w) = self.word("role name")?;
                let role = RoleName::new(w).map_err(|e| ExprSyntaxError { offset, message: format!("{e}") })?;
                Ok(Term::Reversed(role))
            }
            Some(Tok::Punct('[')) => {
                self.pos += 1;
                let mut branches = Vec::new();
                loop {
                    let (_, attr) = self.word("branch name")?;
                    self.punct(':')?;
                    let expr = self.expr()?;
                    branches.push(Branch { attr: attr.into(), expr });
                    match self.peek() {
                        Some(Tok::Punct(',')) => self.pos += 1,
                        Some(Tok::Punct(';')) => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected ',' or ';'"),
                    }
                }
                let (offset, head) = self.word("confluence head")?;
                let head = TypeName::new(head).map_err(|e| ExprSyntaxError { offset, message: format!("{e}") })?;
                self.punct(']')?;
                Ok(Term::Confluence(PathExpression::Confluence { branches, head }))
            }
            _ => self.err("expected a term"),
        }
    }
}
