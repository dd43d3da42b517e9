use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method as HttpMethod, Request, StatusCode};
use axum::Router;
use proofforge_core::dl::{parse_axiom, parse_ontology, Signature};
use proofforge_core::proof::{check_proof, read_json};
use proofforge_service::{router, AppState, JobConfig, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

const CASE_SPLIT: &str = "sub(C1, or(C3, C2))\nsub(C2, C3)\nsub(A, only(r, C1))\nsub(only(r, C3), B)\n";

fn app_with(jobs: JobConfig) -> Router {
    let cfg = ServiceConfig { data_dir: None, static_dir: None, jobs };
    router(AppState::new(&cfg), None)
}

fn app() -> Router {
    app_with(JobConfig::default())
}

async fn call(app: &Router, method: HttpMethod, uri: &str, body: impl Into<Body>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).body(body.into()).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = axum::body::to_bytes(res.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn project(app: &Router, text: &str) -> String {
    let (s, v) = call(app, HttpMethod::POST, "/projects", text.to_string()).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["projectId"].as_str().unwrap().to_string()
}

async fn start(app: &Router, pid: &str, body: Value) -> (StatusCode, Value) {
    call(app, HttpMethod::POST, &format!("/projects/{pid}/proofs"), body.to_string()).await
}

async fn wait_final(app: &Router, job: &str) -> Value {
    let t = Instant::now();
    loop {
        let (s, v) = call(app, HttpMethod::GET, &format!("/jobs/{job}"), Body::empty()).await;
        assert_eq!(s, StatusCode::OK);
        if ["done", "cancelled", "failed"].contains(&v["state"].as_str().unwrap()) {
            return v;
        }
        assert!(t.elapsed() < Duration::from_secs(60), "job {job} never finished: {v}");
        tokio::time::sleep(Duration::from_millis(20)).await;
    }
}

#[tokio::test]
async fn projects_are_content_addressed() {
    let app = app();
    let (s, v) = call(&app, HttpMethod::POST, "/projects", CASE_SPLIT).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(v["axiomCount"], 4);
    assert_eq!(v["signature"]["roles"], json!(["r"]));
    let again = project(&app, CASE_SPLIT).await;
    assert_eq!(again, v["projectId"].as_str().unwrap());
    let wrapped = project(&app, &json!({ "ontology": CASE_SPLIT }).to_string()).await;
    assert_eq!(wrapped, again);
}

#[tokio::test]
async fn bad_ontologies_are_rejected() {
    let app = app();
    let (s, _) = call(&app, HttpMethod::POST, "/projects", "").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, v) = call(&app, HttpMethod::POST, "/projects", "sub(A, \n").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["line"], 2);
}

#[tokio::test]
async fn entailments_of_case_split() {
    let app = app();
    let pid = project(&app, CASE_SPLIT).await;
    let (s, v) = call(&app, HttpMethod::GET, &format!("/projects/{pid}/entailments"), Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
    let list: Vec<&str> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    for e in ["A ⊑ B", "C1 ⊑ C3", "C2 ⊑ C3"] {
        assert!(list.contains(&e), "{list:?}");
    }
    let mut sorted = list.clone();
    sorted.sort();
    assert_eq!(sorted, list);

    let empty = project(&app, "# nothing here\n").await;
    let (_, v) = call(&app, HttpMethod::GET, &format!("/projects/{empty}/entailments"), Body::empty()).await;
    assert_eq!(v, json!([]));
    let (s, _) = call(&app, HttpMethod::GET, "/projects/ffff/entailments", Body::empty()).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn every_method_finishes_with_a_checked_proof() {
    let app = app();
    let o = parse_ontology(CASE_SPLIT).unwrap();
    let pid = project(&app, CASE_SPLIT).await;
    let el = "sub(A, some(r, B))\nsub(B, C)\nsub(some(r, C), D)\n";
    let el_pid = project(&app, el).await;
    let cases = [
        (&pid, "elim-heur", "sub(A, B)"),
        (&pid, "elim-name-opt", "A ⊑ B"),
        (&pid, "elim-size-opt", "sub(A,B)"),
        (&pid, "detailed", "sub(A, B)"),
        (&el_pid, "elk-size", "sub(A, D)"),
        (&el_pid, "elk-depth", "A ⊑ D"),
    ];
    for (p, method, goal) in cases {
        let (s, v) = start(&app, p, json!({ "goal": goal, "method": method })).await;
        assert_eq!(s, StatusCode::ACCEPTED, "{v}");
        let job = wait_final(&app, v["jobId"].as_str().unwrap()).await;
        assert_eq!(job["state"], "done", "{method}: {job}");
        assert_eq!(job["suboptimal"], false);
        let proof = read_json(&job["result"].to_string()).unwrap();
        if p == &pid {
            assert!(check_proof(&proof, &o, &parse_axiom("sub(A, B)").unwrap(), &Signature::new()).is_valid());
        }
    }
}

#[tokio::test]
async fn known_signature_shortens_the_proof() {
    let app = app();
    let pid = project(&app, CASE_SPLIT).await;
    let (_, v) = start(&app, &pid, json!({ "goal": "sub(A, B)", "method": "elim-heur", "knownSignature": ["C1", "C2", "C3"] })).await;
    let job = wait_final(&app, v["jobId"].as_str().unwrap()).await;
    assert_eq!(job["state"], "done");
    assert_eq!(job["knownSignature"], json!(["C1", "C2", "C3"]));
    let proof = read_json(&job["result"].to_string()).unwrap();
    assert!(proof.vertices.iter().any(|v| v.axiom == parse_axiom("sub(C1, C3)").unwrap() && proof.step_for(v.id).is_none()));
}

#[tokio::test]
async fn malformed_requests() {
    let app = app();
    let pid = project(&app, CASE_SPLIT).await;
    let (s, _) = start(&app, &pid, json!({ "goal": "sub(A,", "method": "elim-heur" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, v) = start(&app, &pid, json!({ "goal": "sub(A, B)", "method": "magic" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].as_str().unwrap().contains("elim-heur"));
    let (s, _) = start(&app, &pid, json!({ "goal": "sub(A, B)", "method": "detailed", "measure": "height" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = start(&app, "0000", json!({ "goal": "sub(A, B)", "method": "detailed" })).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, HttpMethod::GET, "/jobs/job-999", Body::empty()).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, HttpMethod::DELETE, "/jobs/job-999", Body::empty()).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn failures_surface_as_failed_jobs() {
    let app = app();
    let pid = project(&app, CASE_SPLIT).await;
    for (goal, method, needle) in [("sub(A, Z)", "detailed", "not entailed"), ("sub(A, B)", "elk-size", "ELH")] {
        let (_, v) = start(&app, &pid, json!({ "goal": goal, "method": method })).await;
        let job = wait_final(&app, v["jobId"].as_str().unwrap()).await;
        assert_eq!(job["state"], "failed");
        assert!(job["error"].as_str().unwrap().contains(needle), "{job}");
        assert!(job["result"].is_null());
    }
}

#[tokio::test]
async fn delete_on_done_job_changes_nothing() {
    let app = app();
    let pid = project(&app, CASE_SPLIT).await;
    let (_, v) = start(&app, &pid, json!({ "goal": "sub(A, B)", "method": "elim-heur" })).await;
    let id = v["jobId"].as_str().unwrap();
    let done = wait_final(&app, id).await;
    let (s, after) = call(&app, HttpMethod::DELETE, &format!("/jobs/{id}"), Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(after, done);
}

#[tokio::test]
async fn cancelling_a_slow_search_keeps_the_best_proof() {
    let app = app_with(JobConfig { expansion_delay: Some(Duration::from_millis(300)), ..JobConfig::default() });
    let pid = project(&app, CASE_SPLIT).await;
    let (_, v) = start(&app, &pid, json!({ "goal": "sub(A, B)", "method": "elim-size-opt" })).await;
    let id = v["jobId"].as_str().unwrap().to_string();
    let t = Instant::now();
    loop {
        let (_, j) = call(&app, HttpMethod::GET, &format!("/jobs/{id}"), Body::empty()).await;
        if j["progress"]["phase"] == "sequence-search" {
            break;
        }
        assert!(t.elapsed() < Duration::from_secs(30), "{j}");
        tokio::time::sleep(Duration::from_millis(10)).await;
    }
    tokio::time::sleep(Duration::from_millis(100)).await;
    let (s, _) = call(&app, HttpMethod::DELETE, &format!("/jobs/{id}"), Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
    let job = wait_final(&app, &id).await;
    assert_eq!(job["state"], "cancelled", "{job}");
    assert_eq!(job["suboptimal"], true);
    let proof = read_json(&job["result"].to_string()).unwrap();
    assert!(proof.suboptimal);
    let o = parse_ontology(CASE_SPLIT).unwrap();
    assert!(check_proof(&proof, &o, &parse_axiom("sub(A, B)").unwrap(), &Signature::new()).is_valid());
}

#[tokio::test]
async fn cors_headers_are_sent() {
    let app = app();
    let req = Request::builder()
        .method(HttpMethod::OPTIONS)
        .uri("/projects")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert!(res.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn static_files_are_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>explorer</html>").unwrap();
    let cfg = ServiceConfig::default();
    let app = router(AppState::new(&cfg), Some(dir.path().to_path_buf()));
    let req = Request::builder().uri("/index.html").body(Body::empty()).unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert_eq!(res.status(), StatusCode::OK);
    let bytes = axum::body::to_bytes(res.into_body(), usize::MAX).await.unwrap();
    assert_eq!(&bytes[..], b"<html>explorer</html>");
}

#[tokio::test]
async fn projects_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ServiceConfig { data_dir: Some(dir.path().to_path_buf()), ..ServiceConfig::default() };
    let pid = project(&router(AppState::new(&cfg), None), CASE_SPLIT).await;
    let fresh = router(AppState::new(&cfg), None);
    let (s, _) = call(&fresh, HttpMethod::GET, &format!("/projects/{pid}/entailments"), Body::empty()).await;
    assert_eq!(s, StatusCode::OK);
}
