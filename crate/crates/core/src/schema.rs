//! The conceptual schema fabric: types, roles, players, subtyping and
//! polymorphy, plus conceptual weights.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::name::{RoleName, TypeName};
use crate::weight::Weight;

/// Which of the two type-overlap relations a pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkerKind {
    Spec,
    Poly,
}

impl MarkerKind {
    pub fn keyword(self) -> &'static str {
        match self {
            MarkerKind::Spec => "spec",
            MarkerKind::Poly => "poly",
        }
    }
}

/// An ORM conceptual schema, restricted to the part needed to derive the
/// schema graph.
///
/// The fields mirror the formal fabric one to one and may hold an invalid
/// combination; [`ConceptualSchema::validate`] reports what is broken.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptualSchema {
    pub types: BTreeSet<TypeName>,
    pub rel_types: BTreeSet<TypeName>,
    pub obj_types: BTreeSet<TypeName>,
    /// Roles of each relationship type, in declaration order.
    pub roles: BTreeMap<TypeName, Vec<RoleName>>,
    pub player: BTreeMap<RoleName, TypeName>,
    /// `(sub, super)` pairs.
    pub spec: BTreeSet<(TypeName, TypeName)>,
    pub poly: BTreeSet<(TypeName, TypeName)>,
    pub cweight: BTreeMap<TypeName, Weight>,
}

/// One broken well-formedness condition of a [`ConceptualSchema`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Listed in `types` but neither a relationship type nor an object type.
    UnclassifiedType(TypeName),
    /// Listed as both a relationship type and an object type.
    AmbiguousKind(TypeName),
    /// Listed as relationship or object type but missing from `types`.
    UndeclaredType(TypeName),
    /// A role that does not occur exactly once across all relationships.
    RoleNotPartitioned { role: RoleName, owners: Vec<TypeName> },
    /// `roles` has an entry for something that is not a relationship type.
    RolesOnNonRelationship(TypeName),
    EmptyRelationship(TypeName),
    MissingPlayer(RoleName),
    UnknownPlayer { role: RoleName, player: TypeName },
    /// First component of a spec/poly pair is not an object type.
    PairNotFromObjectType { kind: MarkerKind, first: TypeName, second: TypeName },
    PairToUnknownType { kind: MarkerKind, first: TypeName, second: TypeName },
    /// Both `(x, y)` and `(y, x)` are present, which yields two identical
    /// undirected edges.
    SymmetricPair { kind: MarkerKind, first: TypeName, second: TypeName },
    MissingWeight(TypeName),
    WeightForUnknownType(TypeName),
}

impl Violation {
    /// Short machine-readable name of the broken invariant.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::UnclassifiedType(_) => "unclassified-type",
            Violation::AmbiguousKind(_) => "ambiguous-kind",
            Violation::UndeclaredType(_) => "undeclared-type",
            Violation::RoleNotPartitioned { .. } => "role-partition",
            Violation::RolesOnNonRelationship(_) => "roles-on-non-relationship",
            Violation::EmptyRelationship(_) => "empty-relationship",
            Violation::MissingPlayer(_) => "missing-player",
            Violation::UnknownPlayer { .. } => "unknown-player",
            Violation::PairNotFromObjectType { .. } => "pair-not-from-object-type",
            Violation::PairToUnknownType { .. } => "pair-to-unknown-type",
            Violation::SymmetricPair { .. } => "symmetric-pair",
            Violation::MissingWeight(_) => "missing-weight",
            Violation::WeightForUnknownType(_) => "weight-for-unknown-type",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnclassifiedType(t) => {
                write!(f, "type {t} is neither an object type nor a relationship type")
            }
            Violation::AmbiguousKind(t) => {
                write!(f, "type {t} is both an object type and a relationship type")
            }
            Violation::UndeclaredType(t) => write!(f, "type {t} is not declared"),
            Violation::RoleNotPartitioned { role, owners } => {
                if owners.is_empty() {
                    write!(f, "role {role} belongs to no relationship type")
                } else {
                    write!(f, "role {role} belongs to more than one relationship:")?;
                    for owner in owners {
                        write!(f, " {owner}")?;
                    }
                    Ok(())
                }
            }
            Violation::RolesOnNonRelationship(t) => {
                write!(f, "type {t} has roles but is not a relationship type")
            }
            Violation::EmptyRelationship(t) => write!(f, "relationship type {t} has no roles"),
            Violation::MissingPlayer(r) => write!(f, "role {r} has no player"),
            Violation::UnknownPlayer { role, player } => {
                write!(f, "unknown player type {player} for role {role}")
            }
            Violation::PairNotFromObjectType { kind, first, second } => write!(
                f,
                "{} {first} {second}: {first} is not an object type",
                kind.keyword()
            ),
            Violation::PairToUnknownType { kind, first, second } => write!(
                f,
                "{} {first} {second}: {second} is not a declared type",
                kind.keyword()
            ),
            Violation::SymmetricPair { kind, first, second } => write!(
                f,
                "{} {first} {second} is also declared in reverse",
                kind.keyword()
            ),
            Violation::MissingWeight(t) => write!(f, "type {t} has no conceptual weight"),
            Violation::WeightForUnknownType(t) => {
                write!(f, "conceptual weight given for undeclared type {t}")
            }
        }
    }
}

impl ConceptualSchema {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an object type. Does not check for duplicates.
    pub fn add_object_type(&mut self, name: TypeName, weight: Weight) {
        self.types.insert(name.clone());
        self.obj_types.insert(name.clone());
        self.cweight.insert(name, weight);
    }

    /// Declares a relationship type together with its roles and their
    /// players. Does not check for duplicates.
    pub fn add_relationship(
        &mut self,
        name: TypeName,
        weight: Weight,
        roles: impl IntoIterator<Item = (RoleName, TypeName)>,
    ) {
        self.types.insert(name.clone());
        self.rel_types.insert(name.clone());
        self.cweight.insert(name.clone(), weight);
        let list = self.roles.entry(name).or_default();
        for (role, player) in roles {
            list.push(role.clone());
            self.player.insert(role, player);
        }
    }

    pub fn add_pair(&mut self, kind: MarkerKind, first: TypeName, second: TypeName) {
        match kind {
            MarkerKind::Spec => self.spec.insert((first, second)),
            MarkerKind::Poly => self.poly.insert((first, second)),
        };
    }

    pub fn pairs(&self, kind: MarkerKind) -> &BTreeSet<(TypeName, TypeName)> {
        match kind {
            MarkerKind::Spec => &self.spec,
            MarkerKind::Poly => &self.poly,
        }
    }

    pub fn is_rel_type(&self, t: &TypeName) -> bool {
        self.rel_types.contains(t)
    }

    pub fn is_obj_type(&self, t: &TypeName) -> bool {
        self.obj_types.contains(t)
    }

    /// Conceptual weight of `t`, or the default weight of 1 if none is
    /// recorded.
    pub fn weight(&self, t: &TypeName) -> Weight {
        self.cweight.get(t).copied().unwrap_or_default()
    }

    /// The relationship type owning `role`, if any.
    pub fn rel_of(&self, role: &RoleName) -> Option<&TypeName> {
        self.roles
            .iter()
            .find(|(_, roles)| roles.contains(role))
            .map(|(rel, _)| rel)
    }

    /// True if `role` is one of the roles of relationship type `rel`.
    pub fn has_role(&self, rel: &TypeName, role: &RoleName) -> bool {
        self.roles.get(rel).is_some_and(|roles| roles.contains(role))
    }

    /// All roles, in relationship order then declaration order.
    pub fn all_roles(&self) -> impl Iterator<Item = &RoleName> {
        self.roles.values().flatten()
    }

    pub fn role_count(&self) -> usize {
        self.roles.values().map(Vec::len).sum()
    }

    /// Checks every well-formedness condition and returns one violation per
    /// broken condition. An empty list means the schema is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        for t in &self.types {
            match (self.rel_types.contains(t), self.obj_types.contains(t)) {
                (false, false) => out.push(Violation::UnclassifiedType(t.clone())),
                (true, true) => out.push(Violation::AmbiguousKind(t.clone())),
                _ => {}
            }
        }
        let classified: BTreeSet<&TypeName> =
            self.rel_types.iter().chain(self.obj_types.iter()).collect();
        for t in classified {
            if !self.types.contains(t) {
                out.push(Violation::UndeclaredType(t.clone()));
            }
        }

        for rel in self.roles.keys() {
            if !self.rel_types.contains(rel) {
                out.push(Violation::RolesOnNonRelationship(rel.clone()));
            }
        }
        for rel in &self.rel_types {
            if self.roles.get(rel).is_none_or(Vec::is_empty) {
                out.push(Violation::EmptyRelationship(rel.clone()));
            }
        }

        // Role partition: every role in the universe occurs exactly once.
        let mut owners: BTreeMap<&RoleName, Vec<TypeName>> = BTreeMap::new();
        for (rel, roles) in &self.roles {
            for role in roles {
                owners.entry(role).or_default().push(rel.clone());
            }
        }
        for role in self.player.keys() {
            owners.entry(role).or_default();
        }
        for (role, rels) in &owners {
            if rels.len() != 1 {
                out.push(Violation::RoleNotPartitioned {
                    role: (*role).clone(),
                    owners: rels.clone(),
                });
            }
            match self.player.get(*role) {
                None => out.push(Violation::MissingPlayer((*role).clone())),
                Some(p) if !self.types.contains(p) => out.push(Violation::UnknownPlayer {
                    role: (*role).clone(),
                    player: p.clone(),
                }),
                Some(_) => {}
            }
        }

        for kind in [MarkerKind::Spec, MarkerKind::Poly] {
            let pairs = self.pairs(kind);
            for (first, second) in pairs {
                if !self.obj_types.contains(first) {
                    out.push(Violation::PairNotFromObjectType {
                        kind,
                        first: first.clone(),
                        second: second.clone(),
                    });
                }
                if !self.types.contains(second) {
                    out.push(Violation::PairToUnknownType {
                        kind,
                        first: first.clone(),
                        second: second.clone(),
                    });
                }
                // Report each symmetric couple once, from its smaller side.
                if first < second && pairs.contains(&(second.clone(), first.clone())) {
                    out.push(Violation::SymmetricPair {
                        kind,
                        first: first.clone(),
                        second: second.clone(),
                    });
                }
            }
        }

        for t in &self.types {
            if !self.cweight.contains_key(t) {
                out.push(Violation::MissingWeight(t.clone()));
            }
        }
        for t in self.cweight.keys() {
            if !self.types.contains(t) {
                out.push(Violation::WeightForUnknownType(t.clone()));
            }
        }

        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}
