//! Spider query tooling: schema and tree documents, sessions with an
//! operation log, disk storage, the HTTP service and the CLI.

pub use spiderq_core as core;

pub mod cli;
pub mod doc;
pub mod service;
pub mod session;
pub mod store;
