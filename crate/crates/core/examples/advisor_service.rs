//! Drive the HTTP service in-process: create a session, answer questions,
//! read the live total, ask a what-if and fetch the final report.
//!
//! To run it for real: `modeadvisor serve --port 8080`.

use std::error::Error;
use std::io::Write;

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use http_body_util::BodyExt;
use modeadvisor::service::{router, AppState, CorsOrigins};
use modeadvisor::{builtin_rubric, corpus_task};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn send(
    app: &Router,
    method: Method,
    uri: &str,
    body: Value,
) -> Result<(u16, Value), Box<dyn Error>> {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))?;
    let resp = app.clone().oneshot(req).await?;
    let status = resp.status().as_u16();
    let bytes = resp.into_body().collect().await?.to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes)?
    };
    Ok((status, value))
}

async fn session_walkthrough(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    let app = router(
        AppState::new(builtin_rubric().clone()),
        &CorsOrigins::Any,
        None,
    );
    let (_, created) = send(
        &app,
        Method::POST,
        "/sessions",
        json!({ "task_id": "image_specimens" }),
    )
    .await?;
    let id = created["session_id"]
        .as_str()
        .ok_or("no session id")?
        .to_string();
    writeln!(out, "session {id}")?;

    let task = corpus_task("image_specimens").ok_or("missing corpus task")?;
    for (criterion, level) in &task.assessment.responses {
        let uri = format!("/sessions/{id}/responses/{criterion}");
        let (_, live) = send(&app, Method::PUT, &uri, json!({ "value": level.token() })).await?;
        writeln!(
            out,
            "  {criterion:<26} {:<3} running total {}",
            level.token(),
            live["provisional_total"]
        )?;
    }

    let (status, bad) = send(
        &app,
        Method::PUT,
        &format!("/sessions/{id}/responses/decision"),
        json!({ "value": "M" }),
    )
    .await?;
    writeln!(
        out,
        "'M' on a yes/no question -> {status} {}",
        bad["error_kind"]
    )?;

    let (_, w) = send(
        &app,
        Method::POST,
        &format!("/sessions/{id}/whatif"),
        json!({ "criterion": "variability", "value": "H" }),
    )
    .await?;
    writeln!(
        out,
        "what if variability were High: {} ({})",
        w["new_total"], w["new_recommendation"]
    )?;

    let (_, result) = send(
        &app,
        Method::GET,
        &format!("/sessions/{id}/result"),
        Value::Null,
    )
    .await?;
    writeln!(
        out,
        "result: {} points -> {}",
        result["total"], result["recommendation"]
    )?;
    Ok(())
}

pub fn run(out: &mut dyn Write) -> Result<(), Box<dyn Error>> {
    tokio::runtime::Runtime::new()?.block_on(session_walkthrough(out))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&mut std::io::stdout())
}
