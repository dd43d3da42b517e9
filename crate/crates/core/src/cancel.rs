use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

type ProgressFn = dyn Fn(&str, f64) + Send + Sync;

/// Shared cancellation flag plus an optional progress sink.
#[derive(Clone, Default)]
pub struct CancelToken {
    flag: Arc<AtomicBool>,
    progress: Option<Arc<ProgressFn>>,
    delay: Arc<Mutex<Option<Duration>>>,
}

impl std::fmt::Debug for CancelToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CancelToken").field("cancelled", &self.is_cancelled()).finish()
    }
}

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_progress(mut self, f: impl Fn(&str, f64) + Send + Sync + 'static) -> Self {
        self.progress = Some(Arc::new(f));
        self
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.load(Ordering::SeqCst)
    }

    pub fn report(&self, phase: &str, fraction: f64) {
        if let Some(p) = &self.progress {
            p(phase, fraction.clamp(0.0, 1.0));
        }
    }

    /// Test hook: size-optimized search sleeps this long per expansion.
    pub fn set_expansion_delay(&self, d: Option<Duration>) {
        *self.delay.lock().unwrap() = d;
    }

    pub fn expansion_delay(&self) -> Option<Duration> {
        *self.delay.lock().unwrap()
    }
}
