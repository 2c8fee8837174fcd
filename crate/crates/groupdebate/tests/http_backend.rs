//! HTTP backend against a local wire-level stub: a `TcpListener` that speaks
//! just enough HTTP/1.1 to serve scripted chat-completion responses. Covers
//! the success path, locally-estimated usage, retry-on-429, fatal client
//! errors, and the missing-API-key diagnostic.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};

use groupdebate::backends::{
    AgentBackend, CallKind, CallMeta, HttpBackend, HttpConfig, Message, Role, Tokenizer,
};
use groupdebate::core::{DebateConfig, DebateMode, PromptStyle, TaskKind};
use groupdebate::orchestrator::{run_debate, RunOptions};
use groupdebate::tasks::Problem;

/// One recorded request: the raw header block and the body text.
#[derive(Debug)]
struct SeenRequest {
    headers: String,
    body: String,
}

/// Serve the scripted `(status, body)` responses, one connection each, and
/// record every request. The listener thread ends after the last response.
fn serve(responses: Vec<(u16, String)>) -> (String, Arc<Mutex<Vec<SeenRequest>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub listener");
    let endpoint = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let recorder = Arc::clone(&seen);
    std::thread::spawn(move || {
        for (status, body) in responses {
            let Ok((mut stream, _)) = listener.accept() else { return };
            let request = read_request(&mut stream);
            recorder.lock().unwrap().push(request);
            let reason = match status {
                200 => "OK",
                400 => "Bad Request",
                429 => "Too Many Requests",
                _ => "Error",
            };
            let response = format!(
                "HTTP/1.1 {status} {reason}\r\ncontent-type: application/json\r\n\
                 content-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
            let _ = stream.write_all(response.as_bytes());
        }
    });
    (endpoint, seen)
}

/// Read one HTTP request: headers up to the blank line, then exactly
/// `Content-Length` body bytes.
fn read_request(stream: &mut TcpStream) -> SeenRequest {
    let mut raw = Vec::new();
    let mut buf = [0u8; 1024];
    let header_end = loop {
        let n = stream.read(&mut buf).expect("read request");
        assert!(n > 0, "client closed mid-request");
        raw.extend_from_slice(&buf[..n]);
        if let Some(at) = raw.windows(4).position(|w| w == b"\r\n\r\n") {
            break at + 4;
        }
    };
    let headers = String::from_utf8_lossy(&raw[..header_end]).to_string();
    let content_length: usize = headers
        .lines()
        .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length:").map(str::to_owned))
        .and_then(|v| v.trim().parse().ok())
        .expect("request without content-length");
    while raw.len() < header_end + content_length {
        let n = stream.read(&mut buf).expect("read body");
        assert!(n > 0, "client closed mid-body");
        raw.extend_from_slice(&buf[..n]);
    }
    let body = String::from_utf8_lossy(&raw[header_end..header_end + content_length]).to_string();
    SeenRequest { headers, body }
}

fn success_body(content: &str, usage: Option<(u64, u64)>) -> String {
    let usage = match usage {
        Some((p, c)) => format!(r#","usage":{{"prompt_tokens":{p},"completion_tokens":{c}}}"#),
        None => String::new(),
    };
    format!(r#"{{"choices":[{{"message":{{"role":"assistant","content":"{content}"}}}}]{usage}}}"#)
}

fn test_config(endpoint: String, key_var: &str, max_retries: u32) -> HttpConfig {
    HttpConfig {
        endpoint,
        model: "test-model".to_string(),
        api_key_env: key_var.to_string(),
        max_retries,
        backoff_ms: 1,
        timeout_secs: 5,
        ..Default::default()
    }
}

fn call_meta() -> CallMeta {
    CallMeta {
        kind: CallKind::Response,
        round: 1,
        stage: 1,
        agent: Some(0),
        group: Some(0),
        task: TaskKind::Arithmetic,
        seed: 0,
        truth: None,
    }
}

#[test]
fn server_usage_numbers_are_adopted_verbatim() {
    let (endpoint, seen) = serve(vec![(200, success_body("the final answer is 6", Some((12, 7))))]);
    let key_var = "GD_TEST_KEY_SUCCESS";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 0), Tokenizer::default()).unwrap();

    let context = [
        Message::new(Role::System, "you are a careful solver"),
        Message::new(Role::User, "what is 2*3"),
    ];
    let generation = backend.generate(&context, &call_meta()).unwrap();
    assert_eq!(generation.text, "the final answer is 6");
    assert_eq!(generation.prompt_tokens, 12);
    assert_eq!(generation.completion_tokens, 7);
    assert!(!generation.usage_estimated);

    let seen = seen.lock().unwrap();
    assert_eq!(seen.len(), 1);
    assert!(
        seen[0].headers.contains("Bearer sk-test-123"),
        "missing bearer auth in: {}",
        seen[0].headers
    );
    let body: serde_json::Value = serde_json::from_str(&seen[0].body).unwrap();
    assert_eq!(body["model"], "test-model");
    assert_eq!(body["messages"][0]["role"], "system");
    assert_eq!(body["messages"][1]["role"], "user");
    assert_eq!(body["messages"][1]["content"], "what is 2*3");
    assert!(body["temperature"].is_number());
    assert!(body["max_tokens"].is_number());
}

#[test]
fn missing_usage_is_estimated_locally_and_flagged() {
    let (endpoint, _) = serve(vec![(200, success_body("three word reply", None))]);
    let key_var = "GD_TEST_KEY_ESTIMATE";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 0), Tokenizer::default()).unwrap();

    let context = [Message::new(Role::User, "five words exactly in here")];
    let generation = backend.generate(&context, &call_meta()).unwrap();
    assert!(generation.usage_estimated);
    assert_eq!(generation.prompt_tokens, 5);
    assert_eq!(generation.completion_tokens, 3);
}

#[test]
fn rate_limits_are_retried_until_success() {
    let (endpoint, seen) = serve(vec![
        (429, r#"{"error":"slow down"}"#.to_string()),
        (200, success_body("recovered", Some((4, 1)))),
    ]);
    let key_var = "GD_TEST_KEY_RETRY";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 2), Tokenizer::default()).unwrap();

    let context = [Message::new(Role::User, "q")];
    let generation = backend.generate(&context, &call_meta()).unwrap();
    assert_eq!(generation.text, "recovered");
    assert_eq!(seen.lock().unwrap().len(), 2, "expected exactly one retry");
}

#[test]
fn exhausted_retries_surface_the_last_transient_error() {
    let (endpoint, seen) = serve(vec![
        (429, "{}".to_string()),
        (429, "{}".to_string()),
    ]);
    let key_var = "GD_TEST_KEY_EXHAUST";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 1), Tokenizer::default()).unwrap();

    let err = backend.generate(&[Message::new(Role::User, "q")], &call_meta()).unwrap_err();
    let message = err.to_string();
    assert!(message.contains("gave up after 2 attempts"), "unexpected error: {message}");
    assert!(message.contains("429"), "unexpected error: {message}");
    assert_eq!(seen.lock().unwrap().len(), 2);
}

#[test]
fn client_errors_fail_immediately_without_retry() {
    let (endpoint, seen) = serve(vec![
        (400, r#"{"error":"bad request"}"#.to_string()),
        (200, success_body("never reached", Some((1, 1)))),
    ]);
    let key_var = "GD_TEST_KEY_FATAL";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 3), Tokenizer::default()).unwrap();

    let err = backend.generate(&[Message::new(Role::User, "q")], &call_meta()).unwrap_err();
    let message = err.to_string();
    assert!(message.contains("400"), "unexpected error: {message}");
    assert_eq!(seen.lock().unwrap().len(), 1, "client errors must not be retried");
}

#[test]
fn missing_api_key_names_the_environment_variable() {
    let key_var = "GD_TEST_KEY_DELIBERATELY_UNSET";
    std::env::remove_var(key_var);
    let err = HttpBackend::new(
        test_config("http://127.0.0.1:9/v1/chat/completions".to_string(), key_var, 0),
        Tokenizer::default(),
    )
    .err()
    .expect("construction must fail without the key variable");
    assert!(
        err.to_string().contains(key_var),
        "error must name the variable: {err}"
    );
}

#[test]
fn a_whole_debate_runs_over_the_wire() {
    // Two agents, one group, two rounds: four response calls, no summaries.
    let body = success_body("the final answer is 6", Some((12, 7)));
    let (endpoint, seen) = serve(vec![(200, body.clone()); 4]);
    let key_var = "GD_TEST_KEY_DEBATE";
    std::env::set_var(key_var, "sk-test-123");
    let backend = HttpBackend::new(test_config(endpoint, key_var, 0), Tokenizer::default()).unwrap();

    let config = DebateConfig {
        mode: DebateMode::Gd,
        agents: 2,
        group_sizes: vec![2],
        total_rounds: 2,
        intra_rounds: 2,
        seed: 0,
        task: TaskKind::Arithmetic,
        repetitions: 1,
        prompt_style: PromptStyle::Debate,
    };
    let problem = Problem {
        id: "wire".to_string(),
        task: TaskKind::Arithmetic,
        question: "1+1*2+3-0*5".to_string(),
        choices: None,
        answer: "6".to_string(),
    };
    let result = run_debate(&config, &problem, &backend, &RunOptions::default()).unwrap();
    assert_eq!(result.api_calls, 4);
    assert_eq!(result.final_answer.value, "6");
    // Every call banks the server-reported 12 + 7 tokens, nothing estimated.
    assert_eq!(result.ledger.grand_total(), 4 * 19);
    assert!(!result.ledger.any_estimated());
    assert_eq!(seen.lock().unwrap().len(), 4);
}
