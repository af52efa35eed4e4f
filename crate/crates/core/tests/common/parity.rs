//! Report-vs-HTTP comparison over synthetic learners written to disk.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use http_body_util::BodyExt;
use rlens_core::api::{canonical_json, router, Engine};
use rlens_core::config::Config;
use rlens_core::store::SessionStore;
use serde_json::Value;
use tower::ServiceExt;

use super::synth::synth_learner;

pub const FILTERS: [&[(&str, &str)]; 5] = [
    &[],
    &[("tutors", "T1,T2")],
    &[("from", "2024-01-15"), ("to", "2024-03-31")],
    &[("sessions", "2-4")],
    &[("topics", "daily life,travel"), ("sessions", "1-3")],
];

pub fn rlens(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rlens"))
        .args(args)
        .env_remove("RLENS_PORT")
        .env_remove("RLENS_DATA_DIR")
        .env_remove("RLENS_ORACLE_BACKEND")
        .output()
        .expect("rlens binary runs")
}

/// Writes `learners` synthetic learners as session documents under `dir/<learner>/`.
pub fn write_learners(dir: &Path, learners: usize) -> Vec<String> {
    (0..learners)
        .map(|i| {
            let id = format!("learner_{i:02}");
            let d = dir.join(&id);
            std::fs::create_dir_all(&d).unwrap();
            for s in synth_learner(1000 + i as u64, &id, 4 + i % 5) {
                std::fs::write(d.join(format!("{}.json", s.session_id)), serde_json::to_string_pretty(&s).unwrap())
                    .unwrap();
            }
            id
        })
        .collect()
}

fn encode(s: &str) -> String {
    s.bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b',' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

async fn get(app: &axum::Router, uri: &str) -> (u16, String) {
    let req = axum::http::Request::get(uri).body(axum::body::Body::empty()).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status().as_u16();
    let body = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(body.to_vec()).unwrap())
}

pub struct ParityResult {
    pub compared: usize,
    pub mismatches: Vec<String>,
    pub empty_selections: usize,
}

/// Ingests `learners` synthetic learners with the CLI, then compares every report
/// section with the HTTP body for the same filter.
pub fn check(learners: usize) -> ParityResult {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("input");
    let data = tmp.path().join("data");
    let ids = write_learners(&input, learners);
    let out = rlens(&["ingest", input.to_str().unwrap(), "--data", data.to_str().unwrap()]);
    assert!(out.status.success(), "ingest failed: {}", String::from_utf8_lossy(&out.stderr));

    let engine = Engine::new(SessionStore::open(&data).unwrap(), Config::default()).unwrap();
    let app = router(Arc::new(engine));
    let rt = tokio::runtime::Runtime::new().unwrap();
    let mut res = ParityResult { compared: 0, mismatches: Vec::new(), empty_selections: 0 };

    for id in &ids {
        for (fi, filter) in FILTERS.iter().enumerate() {
            let report_path = tmp.path().join(format!("{id}-{fi}.json"));
            let mut args = vec![
                "report".to_string(),
                id.clone(),
                "--out".into(),
                report_path.to_str().unwrap().into(),
                "--data".into(),
                data.to_str().unwrap().into(),
            ];
            for (k, v) in filter.iter() {
                args.push(format!("--{k}"));
                args.push(v.to_string());
            }
            let out = rlens(&args.iter().map(String::as_str).collect::<Vec<_>>());
            assert!(out.status.success(), "report failed: {}", String::from_utf8_lossy(&out.stderr));
            let report: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();

            let query: String = filter.iter().map(|(k, v)| format!("&{k}={}", encode(v))).collect();
            let mut sections: BTreeMap<String, (Value, String)> = BTreeMap::new();
            sections.insert(
                "overview".into(),
                (report["overview"].clone(), format!("/api/learners/{id}/overview?x=1{query}")),
            );
            sections.insert(
                "suggestions".into(),
                (report["suggestions"].clone(), format!("/api/learners/{id}/suggestions?x=1{query}")),
            );
            for tab in ["grammar", "vocabulary", "fluency"] {
                sections.insert(
                    format!("corrections.{tab}"),
                    (
                        report["corrections"][tab].clone(),
                        format!("/api/learners/{id}/corrections?tab={tab}&uptake=on{query}"),
                    ),
                );
            }
            if report["overview"]["empty_selection"] == Value::Bool(true) {
                res.empty_selections += 1;
            }
            for (name, (section, uri)) in sections {
                let (status, body) = rt.block_on(get(&app, &uri));
                res.compared += 1;
                if status != 200 || canonical_json(&section) != body {
                    res.mismatches.push(format!("{id} filter#{fi} {name}: status {status}"));
                }
            }
        }
    }
    res
}
