//! Identifier newtypes for schema types and roles.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

/// Characters that may never appear in a type or role name. They are
/// structural in either the schema file format or the path expression
/// syntax.
pub const RESERVED_CHARS: &[char] = &[':', ',', ';', '[', ']', '~', '#'];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("name is empty")]
    Empty,
    #[error("name {name:?} contains whitespace")]
    Whitespace { name: String },
    #[error("name {name:?} contains reserved character {ch:?}")]
    Reserved { name: String, ch: char },
}

fn check(name: &str) -> Result<(), NameError> {
    if name.is_empty() {
        return Err(NameError::Empty);
    }
    for ch in name.chars() {
        if ch.is_whitespace() || ch.is_control() {
            return Err(NameError::Whitespace { name: name.into() });
        }
        if RESERVED_CHARS.contains(&ch) {
            return Err(NameError::Reserved { name: name.into(), ch });
        }
    }
    Ok(())
}

macro_rules! name_type {
    ($(#[$meta:meta])* $ty:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $ty(Arc<str>);

        impl $ty {
            pub fn new(name: &str) -> Result<Self, NameError> {
                check(name)?;
                Ok(Self(Arc::from(name)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", &*self.0)
            }
        }

        impl core::str::FromStr for $ty {
            type Err = NameError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }

        impl AsRef<str> for $ty {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl PartialEq<str> for $ty {
            fn eq(&self, other: &str) -> bool {
                &*self.0 == other
            }
        }

        impl PartialEq<&str> for $ty {
            fn eq(&self, other: &&str) -> bool {
                &*self.0 == *other
            }
        }
    };
}

name_type!(
    /// Name of a type (object type or relationship type) in a conceptual
    /// schema. Ordering is plain byte order of the name, so upper case
    /// sorts before lower case.
    TypeName
);

name_type!(
    /// Name of a role. Roles are unique across the whole schema, not just
    /// within their relationship type.
    RoleName
);
