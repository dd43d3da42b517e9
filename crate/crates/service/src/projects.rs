//! Content-addressed ontology projects, kept in memory and mirrored to disk.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock, RwLock};

use proofforge_core::dl::{parse_ontology, Ontology, ParseError};
use proofforge_core::el::classify;
use sha2::{Digest, Sha256};

pub struct Project {
    pub id: String,
    pub text: String,
    pub ontology: Ontology,
    entailments: OnceLock<Result<Vec<String>, String>>,
}

impl Project {
    fn new(id: String, text: String, ontology: Ontology) -> Self {
        Project { id, text, ontology, entailments: OnceLock::new() }
    }

    /// Printed atomic entailments, computed once.
    pub fn entailments(&self) -> Result<Vec<String>, String> {
        self.entailments
            .get_or_init(|| classify(&self.ontology).map(|v| v.iter().map(|a| a.to_unicode()).collect()).map_err(|e| e.to_string()))
            .clone()
    }
}

#[derive(Debug)]
pub enum ProjectError {
    Empty,
    Parse(ParseError),
}

pub fn project_id(text: &str) -> String {
    hex::encode(&Sha256::digest(text.as_bytes())[..12])
}

pub struct ProjectStore {
    dir: Option<PathBuf>,
    map: RwLock<HashMap<String, Arc<Project>>>,
}

impl ProjectStore {
    /// With `dir`, projects are written to `dir/<id>.dl` and found there after a restart.
    pub fn new(dir: Option<PathBuf>) -> Self {
        if let Some(d) = &dir {
            let _ = fs::create_dir_all(d);
        }
        ProjectStore { dir, map: RwLock::new(HashMap::new()) }
    }

    pub fn insert(&self, text: &str) -> Result<Arc<Project>, ProjectError> {
        if text.trim().is_empty() {
            return Err(ProjectError::Empty);
        }
        let id = project_id(text);
        if let Some(p) = self.map.read().unwrap().get(&id) {
            return Ok(p.clone());
        }
        let ontology = parse_ontology(text).map_err(ProjectError::Parse)?;
        if let Some(d) = &self.dir {
            let _ = fs::write(d.join(format!("{id}.dl")), text);
        }
        let p = Arc::new(Project::new(id.clone(), text.to_string(), ontology));
        Ok(self.map.write().unwrap().entry(id).or_insert(p).clone())
    }

    pub fn get(&self, id: &str) -> Option<Arc<Project>> {
        if let Some(p) = self.map.read().unwrap().get(id) {
            return Some(p.clone());
        }
        if !id.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        let text = fs::read_to_string(self.dir.as_ref()?.join(format!("{id}.dl"))).ok()?;
        let ontology = parse_ontology(&text).ok()?;
        let p = Arc::new(Project::new(id.to_string(), text, ontology));
        Some(self.map.write().unwrap().entry(id.to_string()).or_insert(p).clone())
    }
}
