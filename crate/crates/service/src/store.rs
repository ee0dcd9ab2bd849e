use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use maua_core::io::{problem_from_value, problem_to_value};
use maua_core::DecisionProblem;
use serde::{Deserialize, Serialize};

const PROBLEMS_DIR: &str = "problems";
const INDEX_FILE: &str = "index.json";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("problem {0} not found")]
    NotFound(String),
    #[error("revision conflict: expected {expected}, current {current}")]
    Conflict { expected: u64, current: u64 },
    #[error("corrupt store file {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("store I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_owned(),
        source,
    }
}

/// An immutable snapshot of one stored problem.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredProblem {
    pub id: String,
    pub revision: u64,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
    pub problem: DecisionProblem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub id: String,
    pub name: String,
    pub revision: u64,
    pub updated: DateTime<Utc>,
}

impl StoredProblem {
    pub fn summary(&self) -> Summary {
        Summary {
            id: self.id.clone(),
            name: self.problem.name.clone(),
            revision: self.revision,
            updated: self.updated,
        }
    }
}

/// On-disk record layout.
#[derive(Serialize, Deserialize)]
struct Record {
    id: String,
    revision: u64,
    created: DateTime<Utc>,
    updated: DateTime<Utc>,
    document: serde_json::Value,
}

pub struct Store {
    root: PathBuf,
    problems: RwLock<HashMap<String, Arc<StoredProblem>>>,
    // serializes every mutation, including the shared index file
    writer: Mutex<()>,
}

impl Store {
    /// Open (creating if needed) a store rooted at `root` and load every
    /// problem file found there.
    pub fn open(root: impl AsRef<Path>) -> Result<Self, StoreError> {
        let root = root.as_ref().to_owned();
        let dir = root.join(PROBLEMS_DIR);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;

        let mut problems = HashMap::new();
        for entry in fs::read_dir(&dir).map_err(io_err(&dir))? {
            let path = entry.map_err(io_err(&dir))?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let stored = load_record(&path)?;
                problems.insert(stored.id.clone(), Arc::new(stored));
            }
        }
        Ok(Store {
            root,
            problems: RwLock::new(problems),
            writer: Mutex::new(()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Summaries ordered by creation time, then id.
    pub fn list(&self) -> Vec<Summary> {
        let problems = self.problems.read().expect("store lock poisoned");
        let mut all: Vec<_> = problems.values().cloned().collect();
        drop(problems);
        all.sort_by(|a, b| a.created.cmp(&b.created).then_with(|| a.id.cmp(&b.id)));
        all.iter().map(|p| p.summary()).collect()
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredProblem>> {
        self.problems
            .read()
            .expect("store lock poisoned")
            .get(id)
            .cloned()
    }

    /// Store a new problem at revision 1. The caller validates it first.
    pub fn create(&self, problem: DecisionProblem) -> Result<Arc<StoredProblem>, StoreError> {
        let _guard = self.writer.lock().expect("store lock poisoned");
        let now = Utc::now();
        let stored = Arc::new(StoredProblem {
            id: uuid::Uuid::new_v4().simple().to_string(),
            revision: 1,
            created: now,
            updated: now,
            problem,
        });
        self.persist(&stored)?;
        self.problems
            .write()
            .expect("store lock poisoned")
            .insert(stored.id.clone(), stored.clone());
        self.write_index()?;
        Ok(stored)
    }

    /// Replace a problem if `expected_revision` is still current.
    pub fn update(
        &self,
        id: &str,
        problem: DecisionProblem,
        expected_revision: u64,
    ) -> Result<Arc<StoredProblem>, StoreError> {
        let _guard = self.writer.lock().expect("store lock poisoned");
        let current = self
            .get(id)
            .ok_or_else(|| StoreError::NotFound(id.to_owned()))?;
        if current.revision != expected_revision {
            return Err(StoreError::Conflict {
                expected: expected_revision,
                current: current.revision,
            });
        }
        let stored = Arc::new(StoredProblem {
            id: current.id.clone(),
            revision: current.revision + 1,
            created: current.created,
            updated: Utc::now(),
            problem,
        });
        self.persist(&stored)?;
        self.problems
            .write()
            .expect("store lock poisoned")
            .insert(stored.id.clone(), stored.clone());
        self.write_index()?;
        Ok(stored)
    }

    pub fn delete(&self, id: &str) -> Result<(), StoreError> {
        let _guard = self.writer.lock().expect("store lock poisoned");
        if self.get(id).is_none() {
            return Err(StoreError::NotFound(id.to_owned()));
        }
        let path = self.record_path(id);
        fs::remove_file(&path).map_err(io_err(&path))?;
        self.problems
            .write()
            .expect("store lock poisoned")
            .remove(id);
        self.write_index()
    }

    fn record_path(&self, id: &str) -> PathBuf {
        self.root.join(PROBLEMS_DIR).join(format!("{id}.json"))
    }

    fn persist(&self, stored: &StoredProblem) -> Result<(), StoreError> {
        let document = problem_to_value(&stored.problem);
        let record = Record {
            id: stored.id.clone(),
            revision: stored.revision,
            created: stored.created,
            updated: stored.updated,
            document,
        };
        let text = serde_json::to_string_pretty(&record).expect("record serializes");
        atomic_write(&self.record_path(&stored.id), text.as_bytes())
    }

    fn write_index(&self) -> Result<(), StoreError> {
        let text = serde_json::to_string_pretty(&self.list()).expect("index serializes");
        atomic_write(&self.root.join(INDEX_FILE), text.as_bytes())
    }
}

fn load_record(path: &Path) -> Result<StoredProblem, StoreError> {
    let corrupt = |message: String| StoreError::Corrupt {
        path: path.to_owned(),
        message,
    };
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let record: Record = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    let problem = problem_from_value(&record.document).map_err(|e| corrupt(e.to_string()))?;
    Ok(StoredProblem {
        id: record.id,
        revision: record.revision,
        created: record.created,
        updated: record.updated,
        problem,
    })
}

/// Write to a temporary file in the same directory, flush it to disk, then
/// rename over the target.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let dir = path.parent().expect("store paths have a parent");
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| StoreError::Io {
        path: path.to_owned(),
        source: e.error,
    })?;
    Ok(())
}
