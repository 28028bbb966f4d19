//! On-disk storage for schemas and sessions.
//!
//! Layout under the data directory:
//!
//! ```text
//! schemas/<id>.ssd
//! sessions/<id>.json
//! ```
//!
//! Every write goes to a temporary file in the same directory and is then
//! renamed over the target, so a crash never leaves a half-written file.

use std::collections::HashMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::session::{LoadedSchema, Session, SharedSchema};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("stored {what} {id} is corrupt: {message}")]
    Corrupt { what: &'static str, id: String, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

pub fn new_id() -> String {
    uuid::Uuid::new_v4().simple().to_string()
}

/// Ids are generated by [`new_id`]; anything else is rejected before it
/// gets near a path.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_hexdigit() || b == b'-')
}

pub struct Store {
    root: PathBuf,
    schemas: Mutex<HashMap<String, SharedSchema>>,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        std::fs::create_dir_all(root.join("schemas"))?;
        std::fs::create_dir_all(root.join("sessions"))?;
        Ok(Store { root, schemas: Mutex::default(), locks: Mutex::default() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn schema_path(&self, id: &str) -> PathBuf {
        self.root.join("schemas").join(format!("{id}.ssd"))
    }

    fn session_path(&self, id: &str) -> PathBuf {
        self.root.join("sessions").join(format!("{id}.json"))
    }

    /// Stores an already validated schema and returns its id.
    pub fn put_schema(&self, schema: LoadedSchema) -> Result<String, StoreError> {
        let id = new_id();
        write_atomic(&self.schema_path(&id), schema.text.as_bytes())?;
        self.schemas.lock().unwrap().insert(id.clone(), Arc::new(schema));
        Ok(id)
    }

    pub fn schema(&self, id: &str) -> Result<SharedSchema, StoreError> {
        if !is_valid_id(id) {
            return Err(StoreError::NotFound(id.into()));
        }
        if let Some(s) = self.schemas.lock().unwrap().get(id) {
            return Ok(s.clone());
        }
        let text = read(&self.schema_path(id), id)?;
        let loaded = LoadedSchema::parse(&text).map_err(|e| StoreError::Corrupt {
            what: "schema",
            id: id.into(),
            message: e.to_string(),
        })?;
        let loaded = Arc::new(loaded);
        self.schemas.lock().unwrap().insert(id.into(), loaded.clone());
        Ok(loaded)
    }

    /// Ids of all stored schemas, sorted.
    pub fn schema_ids(&self) -> Result<Vec<String>, StoreError> {
        let mut ids = Vec::new();
        for entry in std::fs::read_dir(self.root.join("schemas"))? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "ssd") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    if is_valid_id(stem) {
                        ids.push(stem.to_string());
                    }
                }
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn put_session(&self, session: &Session) -> Result<(), StoreError> {
        let bytes = serde_json::to_vec_pretty(session).expect("serializable");
        write_atomic(&self.session_path(&session.id), &bytes)?;
        Ok(())
    }

    pub fn session(&self, id: &str) -> Result<Session, StoreError> {
        if !is_valid_id(id) {
            return Err(StoreError::NotFound(id.into()));
        }
        let text = read(&self.session_path(id), id)?;
        serde_json::from_str(&text).map_err(|e| StoreError::Corrupt {
            what: "session",
            id: id.into(),
            message: e.to_string(),
        })
    }

    /// The lock serializing mutations of session `id`.
    pub fn session_lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.locks.lock().unwrap().entry(id.into()).or_default().clone()
    }
}

fn read(path: &Path, id: &str) -> Result<String, StoreError> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Err(StoreError::NotFound(id.into())),
        Err(e) => Err(e.into()),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().expect("store paths have a parent");
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = include_str!("../tests/fixtures/example.ssd");

    #[test]
    fn ids_are_path_safe() {
        assert!(is_valid_id(&new_id()));
        for bad in ["", "..", "../x", "a/b", "abc.json", "zz"] {
            assert!(!is_valid_id(bad), "{bad}");
        }
    }

    #[test]
    fn schemas_survive_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let id = {
            let store = Store::open(dir.path()).unwrap();
            store.put_schema(LoadedSchema::parse(EXAMPLE).unwrap()).unwrap()
        };
        let store = Store::open(dir.path()).unwrap();
        assert_eq!(store.schema_ids().unwrap(), vec![id.clone()]);
        assert_eq!(store.schema(&id).unwrap().text, EXAMPLE);
        assert!(matches!(store.schema("0123abcd"), Err(StoreError::NotFound(_))));
        assert!(matches!(store.schema("../etc"), Err(StoreError::NotFound(_))));
    }

    #[test]
    fn corrupt_session_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        std::fs::write(dir.path().join("sessions/abc.json"), "{").unwrap();
        assert!(matches!(store.session("abc"), Err(StoreError::Corrupt { .. })));
    }
}
