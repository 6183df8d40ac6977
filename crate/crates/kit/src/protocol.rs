//! Supervisor side of the runner wire protocol: newline-delimited JSON
//! frames over the child's stdin/stdout, with stderr drained concurrently.
//!
//! The supervisor never dies because of runner behavior. Crashes, hangs,
//! garbage output, and oversized lines all surface as [`RunnerFailure`]
//! values; a failure poisons the session and the child is killed and
//! reaped, so no zombies are left behind.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{Receiver, RecvTimeoutError, Sender};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde_json::{json, Map, Value};
use thiserror::Error;

use acvp_core::model::{parse_response_set, serialize_vector_set, ResponseSet, VectorSet};

/// Hard cap on a single frame line; longer output is a protocol failure.
pub const MAX_LINE_BYTES: usize = 64 * 1024 * 1024;
/// Default per-request timeout.
pub const DEFAULT_TIMEOUT_MS: u64 = 30_000;
/// Most recent stderr bytes kept for diagnostics.
const STDERR_KEEP_BYTES: usize = 64 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireKind {
    Request,
    Response,
    Error,
    Coverage,
}

impl WireKind {
    pub fn name(self) -> &'static str {
        match self {
            WireKind::Request => "request",
            WireKind::Response => "response",
            WireKind::Error => "error",
            WireKind::Coverage => "coverage",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "request" => WireKind::Request,
            "response" => WireKind::Response,
            "error" => WireKind::Error,
            "coverage" => WireKind::Coverage,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WireMessage {
    pub kind: WireKind,
    pub id: u64,
    pub payload: Map<String, Value>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("line is not a JSON object: {0}")]
    NotJson(String),
    #[error("unknown frame kind `{0}`")]
    UnknownKind(String),
    #[error("frame missing field `{0}`")]
    MissingField(&'static str),
}

pub fn encode_frame(message: &WireMessage) -> String {
    let value = json!({
        "kind": message.kind.name(),
        "id": message.id,
        "payload": Value::Object(message.payload.clone()),
    });
    serde_json::to_string(&value).expect("frame serializes")
}

pub fn decode_frame(line: &str) -> Result<WireMessage, FrameError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| FrameError::NotJson(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| FrameError::NotJson("top level is not an object".to_string()))?;
    let kind_name = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or(FrameError::MissingField("kind"))?;
    let kind = WireKind::from_name(kind_name)
        .ok_or_else(|| FrameError::UnknownKind(kind_name.to_string()))?;
    let id = obj
        .get("id")
        .and_then(Value::as_u64)
        .ok_or(FrameError::MissingField("id"))?;
    let payload = obj
        .get("payload")
        .and_then(Value::as_object)
        .ok_or(FrameError::MissingField("payload"))?
        .clone();
    Ok(WireMessage { kind, id, payload })
}

// ---------------------------------------------------------------------------
// Failures

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunnerFailure {
    /// The child could not be started at all.
    Spawn(String),
    /// The child exited (or the pipe closed) while a request was in flight.
    Crash {
        exit_status: Option<i32>,
        stderr: String,
        request_id: u64,
    },
    /// No answer within the deadline; the child was killed.
    Timeout { elapsed_ms: u64, request_id: u64 },
    /// The child wrote something that is not a valid frame here.
    Protocol { line: String, message: String, request_id: u64 },
}

impl RunnerFailure {
    pub fn kind_name(&self) -> &'static str {
        match self {
            RunnerFailure::Spawn(_) => "spawn",
            RunnerFailure::Crash { .. } => "crash",
            RunnerFailure::Timeout { .. } => "timeout",
            RunnerFailure::Protocol { .. } => "protocol",
        }
    }
}

impl std::fmt::Display for RunnerFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunnerFailure::Spawn(msg) => write!(f, "spawn failure: {msg}"),
            RunnerFailure::Crash { exit_status, stderr, request_id } => write!(
                f,
                "runner crashed during request {request_id} (exit {exit_status:?}): {}",
                stderr.trim_end()
            ),
            RunnerFailure::Timeout { elapsed_ms, request_id } => {
                write!(f, "runner timed out after {elapsed_ms} ms on request {request_id}")
            }
            RunnerFailure::Protocol { line, message, request_id } => {
                let shown: String = line.chars().take(200).collect();
                write!(f, "protocol violation on request {request_id}: {message} (line: {shown:?})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub branch_ids: BTreeSet<String>,
}

/// A successful wire-level exchange: either a decoded response set or an
/// explicit error frame from the runner (e.g. unsupported algorithm).
/// Error frames are clean answers and do not poison the session.
#[derive(Debug, Clone, PartialEq)]
pub enum RunnerReply {
    Responses(ResponseSet),
    Refused { message: String },
}

// ---------------------------------------------------------------------------
// Reader thread events

enum ReadEvent {
    Line(String),
    TooLong(String),
    Eof,
    IoError,
}

fn spawn_reader(stdout: std::process::ChildStdout, tx: Sender<ReadEvent>) {
    std::thread::spawn(move || {
        let mut reader = BufReader::new(stdout);
        let mut line = Vec::new();
        loop {
            line.clear();
            let mut overflow = false;
            loop {
                let buf = match reader.fill_buf() {
                    Ok(b) => b,
                    Err(_) => {
                        let _ = tx.send(ReadEvent::IoError);
                        return;
                    }
                };
                if buf.is_empty() {
                    if line.is_empty() {
                        let _ = tx.send(ReadEvent::Eof);
                    } else {
                        // trailing unterminated output counts as a line so
                        // partial-frame runners surface a protocol error
                        let text = String::from_utf8_lossy(&line).into_owned();
                        let _ = tx.send(ReadEvent::Line(text));
                        let _ = tx.send(ReadEvent::Eof);
                    }
                    return;
                }
                let (chunk, found_newline) = match buf.iter().position(|&b| b == b'\n') {
                    Some(pos) => (&buf[..pos], true),
                    None => (buf, false),
                };
                if line.len() + chunk.len() > MAX_LINE_BYTES {
                    overflow = true;
                    // keep a prefix for diagnostics, discard the rest
                    let room = MAX_LINE_BYTES.saturating_sub(line.len()).min(chunk.len());
                    line.extend_from_slice(&chunk[..room]);
                } else {
                    line.extend_from_slice(chunk);
                }
                let consumed = chunk.len() + usize::from(found_newline);
                reader.consume(consumed);
                if found_newline {
                    break;
                }
            }
            let text = String::from_utf8_lossy(&line[..line.len().min(4096)]).into_owned();
            if overflow {
                let _ = tx.send(ReadEvent::TooLong(text));
                return;
            }
            let full = String::from_utf8_lossy(&line).into_owned();
            if tx.send(ReadEvent::Line(full)).is_err() {
                return;
            }
        }
    });
}

fn spawn_stderr_drain(stderr: std::process::ChildStderr, sink: Arc<Mutex<Vec<u8>>>) {
    std::thread::spawn(move || {
        let mut reader = BufReader::new(stderr);
        let mut buf = [0u8; 4096];
        loop {
            match reader.read(&mut buf) {
                Ok(0) | Err(_) => return,
                Ok(n) => {
                    let mut sink = sink.lock().unwrap();
                    sink.extend_from_slice(&buf[..n]);
                    if sink.len() > STDERR_KEEP_BYTES {
                        let cut = sink.len() - STDERR_KEEP_BYTES;
                        sink.drain(..cut);
                    }
                }
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Session

pub struct RunnerSession {
    child: Child,
    stdin: Option<std::process::ChildStdin>,
    events: Receiver<ReadEvent>,
    stderr: Arc<Mutex<Vec<u8>>>,
    timeout: Duration,
    coverage_enabled: bool,
    coverage: CoverageReport,
    next_id: u64,
    poisoned: bool,
    reaped: bool,
}

/// Start a runner process and complete the handshake. When `coverage` is
/// set, `--coverage` is appended to the arguments (runners must accept it)
/// and coverage frames are expected after every response.
pub fn spawn_runner(
    command: &str,
    args: &[String],
    timeout_ms: u64,
    coverage: bool,
) -> Result<RunnerSession, RunnerFailure> {
    let mut all_args = args.to_vec();
    if coverage {
        all_args.push("--coverage".to_string());
    }
    let mut child = Command::new(command)
        .args(&all_args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| RunnerFailure::Spawn(format!("{command}: {e}")))?;

    let stdout = child.stdout.take().expect("stdout piped");
    let stderr = child.stderr.take().expect("stderr piped");
    let stdin = child.stdin.take().expect("stdin piped");

    let (tx, rx) = std::sync::mpsc::channel();
    spawn_reader(stdout, tx);
    let sink = Arc::new(Mutex::new(Vec::new()));
    spawn_stderr_drain(stderr, sink.clone());

    let mut session = RunnerSession {
        child,
        stdin: Some(stdin),
        events: rx,
        stderr: sink,
        timeout: Duration::from_millis(timeout_ms),
        coverage_enabled: coverage,
        coverage: CoverageReport::default(),
        next_id: 0,
        poisoned: false,
        reaped: false,
    };

    // handshake: request id 0 must be answered by response id 0
    let mut payload = Map::new();
    payload.insert("hello".to_string(), Value::Bool(true));
    session.send(&WireMessage { kind: WireKind::Request, id: 0, payload })?;
    let reply = session.recv_frame(0)?;
    if reply.kind != WireKind::Response || reply.id != 0 {
        let line = encode_frame(&reply);
        return Err(session.poison_protocol(line, "handshake expects response id 0", 0));
    }
    Ok(session)
}

impl RunnerSession {
    pub fn coverage_report(&self) -> &CoverageReport {
        &self.coverage
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// Child process id, for liveness checks in tests.
    pub fn child_pid(&self) -> u32 {
        self.child.id()
    }

    fn send(&mut self, message: &WireMessage) -> Result<(), RunnerFailure> {
        let line = encode_frame(message);
        let stdin = self.stdin.as_mut().expect("stdin open");
        let write = stdin
            .write_all(line.as_bytes())
            .and_then(|_| stdin.write_all(b"\n"))
            .and_then(|_| stdin.flush());
        if write.is_err() {
            // the child closed its end; treat as a crash
            return Err(self.poison_crash(message.id));
        }
        Ok(())
    }

    fn recv_frame(&mut self, request_id: u64) -> Result<WireMessage, RunnerFailure> {
        let deadline = Instant::now() + self.timeout;
        loop {
            let remaining = deadline.saturating_duration_since(Instant::now());
            match self.events.recv_timeout(remaining) {
                Ok(ReadEvent::Line(line)) => match decode_frame(&line) {
                    Ok(frame) => return Ok(frame),
                    Err(e) => return Err(self.poison_protocol(line, &e.to_string(), request_id)),
                },
                Ok(ReadEvent::TooLong(prefix)) => {
                    return Err(self.poison_protocol(
                        prefix,
                        &format!("line exceeds {MAX_LINE_BYTES} bytes"),
                        request_id,
                    ))
                }
                Ok(ReadEvent::Eof) | Ok(ReadEvent::IoError) => {
                    return Err(self.poison_crash(request_id))
                }
                Err(RecvTimeoutError::Timeout) => {
                    let elapsed_ms = self.timeout.as_millis() as u64;
                    self.poison();
                    return Err(RunnerFailure::Timeout { elapsed_ms, request_id });
                }
                Err(RecvTimeoutError::Disconnected) => return Err(self.poison_crash(request_id)),
            }
        }
    }

    /// Send one vector set and collect the response (and coverage frame when
    /// enabled). Any failure poisons the session; respawn to continue.
    pub fn run_vector_set(&mut self, vs: &VectorSet) -> Result<RunnerReply, RunnerFailure> {
        if self.poisoned {
            return Err(RunnerFailure::Protocol {
                line: String::new(),
                message: "session is poisoned; respawn required".to_string(),
                request_id: self.next_id,
            });
        }
        self.next_id += 1;
        let id = self.next_id;

        let doc = serialize_vector_set(vs);
        let payload_value: Value = serde_json::from_str(&doc).expect("own serialization parses");
        let payload = payload_value.as_object().expect("vector set is an object").clone();
        self.send(&WireMessage { kind: WireKind::Request, id, payload })?;

        let frame = self.recv_frame(id)?;
        if frame.id != id {
            let line = encode_frame(&frame);
            return Err(self.poison_protocol(line, &format!("expected id {id}"), id));
        }
        let reply = match frame.kind {
            WireKind::Response => {
                let text = serde_json::to_string(&Value::Object(frame.payload.clone()))
                    .expect("payload serializes");
                match parse_response_set(&text) {
                    Ok(rs) => RunnerReply::Responses(rs),
                    Err(e) => {
                        let line = encode_frame(&frame);
                        return Err(self.poison_protocol(
                            line,
                            &format!("response payload is not a response set: {e}"),
                            id,
                        ));
                    }
                }
            }
            WireKind::Error => {
                let message = frame
                    .payload
                    .get("message")
                    .and_then(Value::as_str)
                    .unwrap_or("unspecified runner error")
                    .to_string();
                RunnerReply::Refused { message }
            }
            _ => {
                let line = encode_frame(&frame);
                return Err(self.poison_protocol(line, "expected response or error frame", id));
            }
        };

        if self.coverage_enabled && matches!(reply, RunnerReply::Responses(_)) {
            let frame = self.recv_frame(id)?;
            if frame.kind != WireKind::Coverage {
                let line = encode_frame(&frame);
                return Err(self.poison_protocol(line, "expected coverage frame", id));
            }
            if let Some(ids) = frame.payload.get("new").and_then(Value::as_array) {
                for v in ids {
                    if let Some(s) = v.as_str() {
                        self.coverage.branch_ids.insert(s.to_string());
                    }
                }
            }
        }
        Ok(reply)
    }

    fn stderr_text(&self) -> String {
        String::from_utf8_lossy(&self.stderr.lock().unwrap()).into_owned()
    }

    fn poison(&mut self) {
        self.poisoned = true;
        self.reap();
    }

    fn poison_crash(&mut self, request_id: u64) -> RunnerFailure {
        self.poisoned = true;
        let exit_status = self.reap();
        RunnerFailure::Crash {
            exit_status,
            stderr: self.stderr_text(),
            request_id,
        }
    }

    fn poison_protocol(&mut self, line: String, message: &str, request_id: u64) -> RunnerFailure {
        self.poison();
        RunnerFailure::Protocol {
            line,
            message: message.to_string(),
            request_id,
        }
    }

    /// Kill (if needed) and wait for the child; always leaves it reaped.
    fn reap(&mut self) -> Option<i32> {
        if self.reaped {
            return None;
        }
        self.stdin.take(); // close the pipe so a well-behaved child exits
        let status = match self.child.try_wait() {
            Ok(Some(status)) => Some(status),
            _ => {
                let _ = self.child.kill();
                self.child.wait().ok()
            }
        };
        self.reaped = true;
        status.and_then(|s| s.code())
    }

    /// Graceful shutdown: close stdin and reap the child.
    pub fn close(mut self) {
        self.reap();
    }
}

impl Drop for RunnerSession {
    fn drop(&mut self) {
        self.reap();
    }
}
