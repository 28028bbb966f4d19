//! Seeded random schemas, kept in a plain form of their own so that test
//! oracles can work from it without going through the library.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::rngs::StdRng;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct RawRel {
    pub name: String,
    pub weight: u32,
    /// (role, player)
    pub roles: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct RawSchema {
    /// (name, weight)
    pub objects: Vec<(String, u32)>,
    pub rels: Vec<RawRel>,
    pub spec: BTreeSet<(String, String)>,
    pub poly: BTreeSet<(String, String)>,
}

pub struct Limits {
    pub max_types: usize,
    pub max_rels: usize,
    pub max_weight: u32,
}

impl RawSchema {
    pub fn random(rng: &mut StdRng, limits: &Limits) -> RawSchema {
        let n_types = rng.random_range(1..=limits.max_types);
        let n_rels = rng.random_range(0..=limits.max_rels.min(n_types - 1));
        let n_objs = n_types - n_rels;
        let weight = |rng: &mut StdRng| rng.random_range(1..=limits.max_weight);
        let objects: Vec<(String, u32)> = (0..n_objs).map(|i| (format!("O{i}"), weight(rng))).collect();
        let rel_names: Vec<String> = (0..n_rels).map(|i| format!("R{i}")).collect();
        let all: Vec<String> = objects.iter().map(|o| o.0.clone()).chain(rel_names.iter().cloned()).collect();

        let mut role_counter = 0;
        let rels = rel_names
            .iter()
            .map(|name| {
                let arity = rng.random_range(1..=3);
                let roles = (0..arity)
                    .map(|_| {
                        role_counter += 1;
                        // mostly object players; sometimes an objectified
                        // relationship, occasionally the owner itself
                        let player = if rng.random_bool(0.85) {
                            objects[rng.random_range(0..n_objs)].0.clone()
                        } else {
                            all[rng.random_range(0..all.len())].clone()
                        };
                        (format!("r{role_counter}"), player)
                    })
                    .collect();
                RawRel { name: name.clone(), weight: weight(rng), roles }
            })
            .collect();

        let pairs = |rng: &mut StdRng| {
            let mut out = BTreeSet::new();
            for _ in 0..rng.random_range(0..=3) {
                let a = objects[rng.random_range(0..n_objs)].0.clone();
                let b = all[rng.random_range(0..all.len())].clone();
                if a != b && !out.contains(&(b.clone(), a.clone())) {
                    out.insert((a, b));
                }
            }
            out
        };
        let spec = pairs(rng);
        let poly = pairs(rng);
        RawSchema { objects, rels, spec, poly }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, w) in &self.objects {
            writeln!(out, "objecttype {name} weight {w}").unwrap();
        }
        for rel in &self.rels {
            write!(out, "relationship {} weight {} roles", rel.name, rel.weight).unwrap();
            for (role, player) in &rel.roles {
                write!(out, " {role}:{player}").unwrap();
            }
            out.push('\n');
        }
        for (a, b) in &self.spec {
            writeln!(out, "spec {a} {b}").unwrap();
        }
        for (a, b) in &self.poly {
            writeln!(out, "poly {a} {b}").unwrap();
        }
        out
    }

    pub fn object_names(&self) -> Vec<String> {
        self.objects.iter().map(|o| o.0.clone()).collect()
    }

    pub fn type_names(&self) -> Vec<String> {
        self.object_names().into_iter().chain(self.rels.iter().map(|r| r.name.clone())).collect()
    }

    pub fn weight(&self, t: &str) -> u32 {
        self.objects
            .iter()
            .find(|o| o.0 == t)
            .map(|o| o.1)
            .or_else(|| self.rels.iter().find(|r| r.name == t).map(|r| r.weight))
            .expect("known type")
    }

    /// Relationship owning `role`.
    pub fn owner(&self, role: &str) -> Option<&str> {
        self.rels.iter().find(|r| r.roles.iter().any(|(x, _)| x == role)).map(|r| r.name.as_str())
    }

    /// Neighbours of `t` as (label, type); labels are `role:<r>`, `spec`
    /// and `poly`. Self-loops are included.
    pub fn neighbours(&self, t: &str) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for rel in &self.rels {
            for (role, player) in &rel.roles {
                if player == t {
                    out.push((format!("role:{role}"), rel.name.clone()));
                } else if rel.name == t {
                    out.push((format!("role:{role}"), player.clone()));
                }
            }
        }
        for (label, pairs) in [("spec", &self.spec), ("poly", &self.poly)] {
            for (a, b) in pairs {
                if a == t {
                    out.push((label.into(), b.clone()));
                }
                if b == t {
                    out.push((label.into(), a.clone()));
                }
            }
        }
        out
    }

    /// All type-distinct labelled paths from `root`, each as its sequence
    /// of (label, type) steps; the empty path stands for the root. This is
    /// the node set of the trie of all maximal such paths.
    pub fn path_trie(&self, root: &str) -> BTreeSet<Vec<(String, String)>> {
        let mut out = BTreeSet::new();
        let mut visited = vec![root.to_string()];
        let mut path = Vec::new();
        self.walk(&mut visited, &mut path, &mut out);
        out
    }

    fn walk(
        &self,
        visited: &mut Vec<String>,
        path: &mut Vec<(String, String)>,
        out: &mut BTreeSet<Vec<(String, String)>>,
    ) {
        out.insert(path.clone());
        let here = visited.last().unwrap().clone();
        for (label, next) in self.neighbours(&here) {
            if visited.contains(&next) {
                continue;
            }
            visited.push(next.clone());
            path.push((label, next));
            self.walk(visited, path, out);
            path.pop();
            visited.pop();
        }
    }
}
