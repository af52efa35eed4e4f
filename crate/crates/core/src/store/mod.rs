//! Canonical session model, ingestion and immutable per-learner snapshots.
//!
//! Layout on disk: `<root>/<learner_id>/<session_id>.json` plus `<root>/<learner_id>/index.json`.

mod model;
mod validate;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::*;
pub use validate::{parse_session, validate_session};

const INDEX_FILE: &str = "index.json";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("schema error at {0}")]
    Schema(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("session {session_id:?} already stored for learner {learner_id:?}")]
    Duplicate { learner_id: String, session_id: String },
    #[error("unknown learner {0:?}")]
    UnknownLearner(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestAck {
    pub session_id: String,
    pub session_index: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexEntry {
    session_id: String,
    session_index: u32,
    date: chrono::NaiveDate,
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexFile {
    learner_id: String,
    version: u64,
    sessions: Vec<IndexEntry>,
}

/// Single-writer, multi-reader session store.
///
/// Readers get `Arc<Snapshot>` values that never change; an ingest swaps in a new
/// snapshot for the learner.
#[derive(Debug, Default)]
pub struct SessionStore {
    root: Option<PathBuf>,
    learners: RwLock<BTreeMap<String, Arc<Snapshot>>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a store rooted at `root` and loads every stored session.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(io_err(&root))?;
        let mut learners = BTreeMap::new();
        let mut dirs: Vec<PathBuf> = fs::read_dir(&root)
            .map_err(io_err(&root))?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect();
        dirs.sort();
        for dir in dirs {
            if let Some(snap) = load_learner(&dir)? {
                learners.insert(snap.learner_id.clone(), Arc::new(snap));
            }
        }
        Ok(SessionStore { root: Some(root), learners: RwLock::new(learners) })
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    pub fn learner_ids(&self) -> Vec<String> {
        self.learners.read().unwrap().keys().cloned().collect()
    }

    pub fn snapshot(&self, learner_id: &str) -> Result<Arc<Snapshot>, StoreError> {
        self.learners
            .read()
            .unwrap()
            .get(learner_id)
            .cloned()
            .ok_or_else(|| StoreError::UnknownLearner(learner_id.to_string()))
    }

    /// Stores a validated session and re-indexes the learner's history.
    pub fn ingest(&self, mut session: Session) -> Result<IngestAck, StoreError> {
        let mut learners = self.learners.write().unwrap();
        let prev = learners.get(&session.learner_id).cloned();
        let (mut sessions, version) = match &prev {
            Some(s) => (s.sessions.clone(), s.version),
            None => (Vec::new(), 0),
        };
        if sessions.iter().any(|s| s.session_id == session.session_id) {
            return Err(StoreError::Duplicate { learner_id: session.learner_id, session_id: session.session_id });
        }
        session.session_index = 0;
        let id = session.session_id.clone();
        sessions.push(session);
        reindex(&mut sessions);
        let snap = Snapshot { learner_id: sessions[0].learner_id.clone(), sessions, version: version + 1 };
        if let Some(root) = &self.root {
            persist(root, &snap, &id)?;
        }
        let index = snap.session(&id).map(|s| s.session_index).unwrap_or(0);
        learners.insert(snap.learner_id.clone(), Arc::new(snap));
        Ok(IngestAck { session_id: id, session_index: index })
    }

    pub fn ingest_json(&self, text: &str) -> Result<IngestAck, StoreError> {
        self.ingest(parse_session(text)?)
    }
}

/// Sorts by (date, session_id) and assigns consecutive 1-based indices.
pub fn reindex(sessions: &mut [Session]) {
    sessions.sort_by(|a, b| (a.date, &a.session_id).cmp(&(b.date, &b.session_id)));
    for (i, s) in sessions.iter_mut().enumerate() {
        s.session_index = i as u32 + 1;
    }
}

fn persist(root: &Path, snap: &Snapshot, new_id: &str) -> Result<(), StoreError> {
    let dir = root.join(&snap.learner_id);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let session = snap.session(new_id).expect("ingested session present");
    let mut stored = session.clone();
    stored.session_index = 0;
    write_json(&dir.join(format!("{new_id}.json")), &stored)?;
    let index = IndexFile {
        learner_id: snap.learner_id.clone(),
        version: snap.version,
        sessions: snap
            .sessions
            .iter()
            .map(|s| IndexEntry { session_id: s.session_id.clone(), session_index: s.session_index, date: s.date })
            .collect(),
    };
    write_json(&dir.join(INDEX_FILE), &index)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), StoreError> {
    let body = serde_json::to_string_pretty(value).expect("serializable");
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, body).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn load_learner(dir: &Path) -> Result<Option<Snapshot>, StoreError> {
    let mut sessions = Vec::new();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != INDEX_FILE))
        .collect();
    files.sort();
    for path in files {
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        sessions.push(parse_session(&text)?);
    }
    if sessions.is_empty() {
        return Ok(None);
    }
    reindex(&mut sessions);
    let version = fs::read_to_string(dir.join(INDEX_FILE))
        .ok()
        .and_then(|t| serde_json::from_str::<IndexFile>(&t).ok())
        .map_or(sessions.len() as u64, |i| i.version.max(sessions.len() as u64));
    Ok(Some(Snapshot { learner_id: sessions[0].learner_id.clone(), sessions, version }))
}

/// A session document on disk and its parse outcome.
pub type SessionFile = (PathBuf, Result<Session, StoreError>);

/// Reads every `*.json` session document in `dir` (sorted by file name).
pub fn read_session_dir(dir: &Path) -> Result<Vec<SessionFile>, StoreError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != INDEX_FILE))
        .collect();
    files.sort();
    Ok(files
        .into_iter()
        .map(|p| {
            let parsed = fs::read_to_string(&p).map_err(io_err(&p)).and_then(|t| parse_session(&t));
            (p, parsed)
        })
        .collect())
}
