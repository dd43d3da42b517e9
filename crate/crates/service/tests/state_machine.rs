use std::thread;
use std::time::Duration;

use proofforge_core::dl::{parse_axiom, Signature};
use proofforge_core::methods::Method;
use proofforge_service::jobs::JobRequest;
use proofforge_service::{JobConfig, JobState, JobTable, ProjectStore};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASE_SPLIT: &str = "sub(C1, or(C3, C2))\nsub(C2, C3)\nsub(A, only(r, C1))\nsub(only(r, C3), B)\n";

fn rank(s: JobState) -> u8 {
    match s {
        JobState::Queued => 0,
        JobState::Running => 1,
        _ => 2,
    }
}

#[test]
fn states_only_move_forward_under_concurrent_polling_and_cancelling() {
    let store = ProjectStore::new(None);
    let project = store.insert(CASE_SPLIT).unwrap();
    let table = JobTable::new(&JobConfig { expansion_delay: Some(Duration::from_millis(2)), ..JobConfig::default() });
    let methods = [Method::ElimHeuristic, Method::ElimSizeOptimized, Method::ElimNameOptimized, Method::Detailed];
    let ids: Vec<String> = (0..24)
        .map(|i| {
            let req = JobRequest {
                project: project.clone(),
                goal: parse_axiom("sub(A, B)").unwrap(),
                method: methods[i % methods.len()],
                known: Signature::new(),
                measure: None,
            };
            table.submit(req).id
        })
        .collect();

    let handles: Vec<_> = (0..6u64)
        .map(|t| {
            let table = table.clone();
            let ids = ids.clone();
            thread::spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(t);
                let mut last = vec![0u8; ids.len()];
                let mut finals: Vec<Option<JobState>> = vec![None; ids.len()];
                for _ in 0..3000 {
                    let i = rng.gen_range(0..ids.len());
                    let job = if rng.gen_bool(0.05) { table.cancel(&ids[i]) } else { table.get(&ids[i]) }.unwrap();
                    let r = rank(job.state);
                    assert!(r >= last[i], "job {} went from rank {} to {:?}", ids[i], last[i], job.state);
                    last[i] = r;
                    if job.state.is_final() {
                        assert!(finals[i].is_none_or(|f| f == job.state), "final state of {} changed", ids[i]);
                        finals[i] = Some(job.state);
                        assert_eq!(job.suboptimal, job.state == JobState::Cancelled && job.result.is_some());
                        assert_eq!(job.result.is_some(), job.state == JobState::Done || job.suboptimal);
                    }
                    if rng.gen_bool(0.1) {
                        thread::sleep(Duration::from_micros(200));
                    }
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    for id in &ids {
        table.cancel(id);
    }
    for id in &ids {
        let mut waited = 0;
        while !table.get(id).unwrap().state.is_final() {
            thread::sleep(Duration::from_millis(10));
            waited += 1;
            assert!(waited < 6000, "{id} never finished");
        }
    }
}
