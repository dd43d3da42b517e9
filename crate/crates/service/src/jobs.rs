//! Proof jobs: a synchronized table plus a fixed pool of worker threads.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex, Weak};
use std::thread;
use std::time::Duration;

use proofforge_core::dl::{Axiom, Signature};
use proofforge_core::methods::{explain, ExplainOptions, Method};
use proofforge_core::proof::{check_proof_with, write_json, CheckOptions, Measure, Proof};
use proofforge_core::{CancelToken, Error, Exec};
use serde::Serialize;

use crate::projects::Project;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Cancelled,
    Failed,
}

impl JobState {
    fn rank(self) -> u8 {
        match self {
            JobState::Queued => 0,
            JobState::Running => 1,
            _ => 2,
        }
    }

    pub fn is_final(self) -> bool {
        self.rank() == 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Progress {
    pub phase: String,
    pub fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofJob {
    pub id: String,
    pub project_id: String,
    pub goal: String,
    pub method: String,
    pub known_signature: Vec<String>,
    pub measure: String,
    pub state: JobState,
    pub progress: Progress,
    pub result: Option<serde_json::Value>,
    pub suboptimal: bool,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub struct JobRequest {
    pub project: Arc<Project>,
    pub goal: Axiom,
    pub method: Method,
    pub known: Signature,
    pub measure: Option<Measure>,
}

struct Entry {
    job: ProofJob,
    cancel: CancelToken,
    request: Arc<JobRequest>,
}

struct Inner {
    jobs: Mutex<HashMap<String, Entry>>,
    next: AtomicU64,
    per_name: Duration,
    expansion_delay: Option<Duration>,
}

impl Inner {
    /// Applies `f` to the job unless that would move its state backwards.
    fn update(&self, id: &str, f: impl FnOnce(&mut ProofJob)) {
        let mut jobs = self.jobs.lock().unwrap();
        if let Some(e) = jobs.get_mut(id) {
            let mut next = e.job.clone();
            f(&mut next);
            if next.state.rank() > e.job.state.rank() || (next.state == e.job.state && !e.job.state.is_final()) {
                e.job = next;
            }
        }
    }
}

#[derive(Clone)]
pub struct JobTable {
    inner: Arc<Inner>,
    tx: Sender<String>,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub workers: usize,
    pub per_name: Duration,
    /// Test hook: sleep before every expansion of the elimination search.
    pub expansion_delay: Option<Duration>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig { workers: 2, per_name: ExplainOptions::default().per_name, expansion_delay: None }
    }
}

impl JobTable {
    pub fn new(cfg: &JobConfig) -> Self {
        let inner = Arc::new(Inner {
            jobs: Mutex::new(HashMap::new()),
            next: AtomicU64::new(1),
            per_name: cfg.per_name,
            expansion_delay: cfg.expansion_delay,
        });
        let (tx, rx) = channel::<String>();
        let rx = Arc::new(Mutex::new(rx));
        for i in 0..cfg.workers.max(1) {
            let inner = Arc::downgrade(&inner);
            let rx = rx.clone();
            thread::Builder::new().name(format!("proof-worker-{i}")).spawn(move || worker(inner, rx)).expect("spawn worker");
        }
        JobTable { inner, tx }
    }

    pub fn submit(&self, req: JobRequest) -> ProofJob {
        let id = format!("job-{}", self.inner.next.fetch_add(1, Ordering::Relaxed));
        let weak = Arc::downgrade(&self.inner);
        let pid = id.clone();
        let cancel = CancelToken::new().with_progress(move |phase, fraction| {
            if let Some(inner) = weak.upgrade() {
                inner.update(&pid, |j| {
                    if j.state == JobState::Running {
                        j.progress = Progress { phase: phase.to_string(), fraction };
                    }
                });
            }
        });
        cancel.set_expansion_delay(self.inner.expansion_delay);
        let mut known: Vec<String> = req.known.concepts.iter().chain(&req.known.roles).cloned().collect();
        known.sort();
        let job = ProofJob {
            id: id.clone(),
            project_id: req.project.id.clone(),
            goal: req.goal.to_unicode(),
            method: req.method.tag().to_string(),
            known_signature: known,
            measure: req.measure.unwrap_or(req.method.default_measure()).name().to_string(),
            state: JobState::Queued,
            progress: Progress { phase: "queued".into(), fraction: 0.0 },
            result: None,
            suboptimal: false,
            error: None,
            warnings: Vec::new(),
        };
        self.inner.jobs.lock().unwrap().insert(id.clone(), Entry { job: job.clone(), cancel, request: Arc::new(req) });
        let _ = self.tx.send(id);
        job
    }

    pub fn get(&self, id: &str) -> Option<ProofJob> {
        self.inner.jobs.lock().unwrap().get(id).map(|e| e.job.clone())
    }

    /// Requests cancellation. A queued job is cancelled at once; a running
    /// one finishes as cancelled, with its best proof if it has one.
    pub fn cancel(&self, id: &str) -> Option<ProofJob> {
        let mut jobs = self.inner.jobs.lock().unwrap();
        let e = jobs.get_mut(id)?;
        if !e.job.state.is_final() {
            e.cancel.cancel();
            if e.job.state == JobState::Queued {
                e.job.state = JobState::Cancelled;
                e.job.progress.phase = "cancelled".into();
            }
        }
        Some(e.job.clone())
    }
}

fn worker(inner: Weak<Inner>, rx: Arc<Mutex<Receiver<String>>>) {
    loop {
        let Ok(id) = rx.lock().unwrap().recv() else { return };
        let Some(inner) = inner.upgrade() else { return };
        let started = {
            let mut jobs = inner.jobs.lock().unwrap();
            match jobs.get_mut(&id) {
                Some(e) if e.job.state == JobState::Queued => {
                    e.job.state = JobState::Running;
                    e.job.progress = Progress { phase: "starting".into(), fraction: 0.0 };
                    Some((e.request.clone(), e.cancel.clone()))
                }
                _ => None,
            }
        };
        let Some((req, cancel)) = started else { continue };
        let outcome = run(&req, &cancel, inner.per_name);
        inner.update(&id, |j| outcome.apply(j));
    }
}

enum Outcome {
    Done(Proof, Vec<String>),
    Cancelled(Option<Proof>),
    Failed(String),
}

impl Outcome {
    fn apply(self, j: &mut ProofJob) {
        let as_value = |p: &Proof| serde_json::from_str::<serde_json::Value>(&write_json(p)).ok();
        match self {
            Outcome::Done(p, warnings) => {
                j.state = JobState::Done;
                j.result = as_value(&p);
                j.warnings = warnings;
                j.progress = Progress { phase: "done".into(), fraction: 1.0 };
            }
            Outcome::Cancelled(p) => {
                j.state = JobState::Cancelled;
                j.suboptimal = p.is_some();
                j.result = p.as_ref().and_then(as_value);
                j.progress.phase = "cancelled".into();
            }
            Outcome::Failed(msg) => {
                j.state = JobState::Failed;
                j.error = Some(msg);
                j.progress.phase = "failed".into();
            }
        }
    }
}

fn verified(p: &Proof, req: &JobRequest) -> Result<(), String> {
    let opts = CheckOptions { elimination_conditions: false, exec: Exec::Sequential };
    let report = check_proof_with(p, &req.project.ontology, &req.goal, &req.known, opts);
    if report.is_valid() {
        Ok(())
    } else {
        Err(format!("generated proof failed verification: {report}"))
    }
}

fn run(req: &JobRequest, cancel: &CancelToken, per_name: Duration) -> Outcome {
    let opts = ExplainOptions { known: req.known.clone(), measure: req.measure, per_name, cancel: Some(cancel.clone()) };
    match explain(&req.project.ontology, &req.goal, req.method, &opts) {
        Ok(e) => match verified(&e.proof, req) {
            Ok(()) => Outcome::Done(e.proof, e.warnings),
            Err(msg) => Outcome::Failed(msg),
        },
        Err(Error::Cancelled { best }) => {
            let best = best.map(|b| *b).filter(|p| verified(p, req).is_ok()).map(|mut p| {
                p.suboptimal = true;
                p
            });
            Outcome::Cancelled(best)
        }
        Err(e) => Outcome::Failed(e.to_string()),
    }
}
