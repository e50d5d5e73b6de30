//! Plain-file persistence: one document per id under reports/, sessions/ and scorecards/.

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

/// Which report a session grades. Kept beside the session document so the
/// session file itself stays in the exact `stream-grades/v1` format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionLink {
    pub report_id: String,
}

pub struct Store {
    root: PathBuf,
    session_locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

/// Ids are generated by the service; anything else is treated as unknown
/// rather than ever reaching the filesystem.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

impl Store {
    pub async fn open(root: impl Into<PathBuf>) -> io::Result<Store> {
        let root = root.into();
        for dir in ["reports", "sessions", "scorecards"] {
            tokio::fs::create_dir_all(root.join(dir)).await?;
        }
        Ok(Store { root, session_locks: Mutex::new(HashMap::new()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, dir: &str, name: &str) -> PathBuf {
        self.root.join(dir).join(name)
    }

    async fn read(&self, dir: &str, name: &str) -> io::Result<Option<String>> {
        match tokio::fs::read_to_string(self.path(dir, name)).await {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    async fn write(&self, dir: &str, name: &str, text: &str) -> io::Result<()> {
        let target = self.path(dir, name);
        let tmp = self.path(dir, &format!(".{name}.{}.tmp", uuid::Uuid::new_v4().simple()));
        tokio::fs::write(&tmp, text).await?;
        if let Err(e) = tokio::fs::rename(&tmp, &target).await {
            let _ = tokio::fs::remove_file(&tmp).await;
            return Err(e);
        }
        Ok(())
    }

    /// Stores an uploaded report. Reports are written once and never modified.
    pub async fn put_report(&self, id: &str, text: &str) -> io::Result<()> {
        self.write("reports", &format!("{id}.json"), text).await
    }

    pub async fn report(&self, id: &str) -> io::Result<Option<String>> {
        if !valid_id(id) {
            return Ok(None);
        }
        self.read("reports", &format!("{id}.json")).await
    }

    pub async fn put_session(&self, id: &str, text: &str) -> io::Result<()> {
        self.write("sessions", &format!("{id}.json"), text).await
    }

    pub async fn session(&self, id: &str) -> io::Result<Option<String>> {
        if !valid_id(id) {
            return Ok(None);
        }
        self.read("sessions", &format!("{id}.json")).await
    }

    pub async fn put_link(&self, id: &str, link: &SessionLink) -> io::Result<()> {
        let text = serde_json::to_string(link).expect("link serializes");
        self.write("sessions", &format!("{id}.link"), &text).await
    }

    pub async fn link(&self, id: &str) -> io::Result<Option<SessionLink>> {
        if !valid_id(id) {
            return Ok(None);
        }
        match self.read("sessions", &format!("{id}.link")).await? {
            Some(s) => serde_json::from_str(&s).map(Some).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e)),
            None => Ok(None),
        }
    }

    pub async fn put_scorecard(&self, name: &str, text: &str) -> io::Result<()> {
        self.write("scorecards", &format!("{name}.json"), text).await
    }

    /// The writer lock for one session journal.
    pub fn session_lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.session_locks.lock().expect("lock table poisoned");
        locks.entry(id.to_string()).or_default().clone()
    }
}
